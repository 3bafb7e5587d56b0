//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line; run with `--nocapture` to see them.
//! Every comparison is exact.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use virtbraid::catalog::{
    build_presentation, forbidden_first, forbidden_image_chains, forbidden_second, named_endo, named_hom, named_homs, Family,
};
use virtbraid::crystal::{
    element_order, eval_affine, lattice_model, order_three_box, perm_module, solve_assignment, verify_identity, Order,
};
use virtbraid::homsearch::{classify_presentation, descends, kernel_equal, HomFilter, Verdict};
use virtbraid::intlin::{AbInv, IntMatrix};
use virtbraid::kernelab::{certify, kernel_abelianization};
use virtbraid::reptheory::{
    decompose, inner_product, isotypic_sublattice, permutation_character, quotient_action, s4_character_table, ClassFunction,
};
use virtbraid::twisted::{
    abelian_twisted_count, quotient_tower, random_abelian_instance, reidemeister_lattice, twisted_classes_finite, FiniteGroupTable,
    Reidemeister, TowerVerdict,
};

fn verdict(criterion: u32, failures: &[String], started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let mut all = failures.to_vec();
    if elapsed > budget {
        all.push(format!("took {elapsed:?}, budget {budget:?}"));
    }
    if all.is_empty() {
        println!("criterion {criterion}: PASS ({} ms)", elapsed.as_millis());
    } else {
        println!("criterion {criterion}: FAIL {}", all.join("; "));
    }
    assert!(all.is_empty(), "criterion {criterion} failed: {}", all.join("; "));
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn family_names(family: Family, n: usize) -> Vec<String> {
    named_homs(family, n)
        .unwrap()
        .into_iter()
        .map(|h| h.name)
        .filter(|n| !n.starts_with("pi_"))
        .collect()
}

#[test]
fn criterion_1_hom_classification() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let cases = [
        (Family::VB, 3, 8),
        (Family::VB, 4, 6),
        (Family::WB, 3, 5),
        (Family::UVB, 3, 4),
        (Family::WB, 4, 4),
        (Family::UVB, 4, 4),
    ];
    for (f, n, want) in cases {
        let p = build_presentation(f, n).unwrap();
        let named = named_homs(f, n).unwrap();
        let (classes, _) = classify_presentation(&p, n, &named).unwrap();
        let kept: Vec<_> = classes.iter().filter(|c| HomFilter::NonAbelian.keeps(c)).collect();
        check(&mut failures, kept.len() == want, || {
            format!("{f}{n}: {} non-abelian classes, want {want}", kept.len())
        });
        // every table entry is conjugate to exactly one class representative
        for name in family_names(f, n) {
            let h = named_hom(f, n, &name).unwrap().hom;
            let hits: Vec<_> = kept.iter().filter(|c| h.canonical().0 == c.representative.canonical().0).collect();
            check(
                &mut failures,
                hits.len() == 1 && hits[0].matched_name.as_deref() == Some(name.as_str()),
                || format!("{f}{n}: {name} not matched to one class"),
            );
            check(&mut failures, hits.iter().all(|c| kernel_equal(&c.representative, &h)), || {
                format!("{f}{n}: {name} kernel differs from its class")
            });
        }
    }
    for (n, want) in [(2, 3), (3, 5), (4, 6)] {
        let p = build_presentation(Family::VT, n).unwrap();
        let (classes, _) = classify_presentation(&p, n, &[]).unwrap();
        let got = classes.iter().filter(|c| HomFilter::Surjective.keeps(c)).count();
        check(&mut failures, got == want, || {
            format!("VT{n}: {got} surjective classes, want {want}")
        });
    }
    verdict(1, &failures, t, Duration::from_secs(60));
}

fn kernel_cases() -> Vec<(Family, usize, &'static str, &'static str)> {
    vec![
        (Family::VB, 3, "psi_1", "[ 0, 0, 0, 0, 3, 3, 3 ]"),
        (Family::VB, 3, "psi_2", "[ 0, 0, 0, 0, 0, 0 ]"),
        (Family::VB, 3, "psi_3", "[ 0, 0, 0, 0, 0, 0 ]"),
        (Family::VB, 3, "psi_4", "[ 0, 0, 0, 0, 0, 0 ]"),
        (Family::VB, 3, "psi_5", "[ 0, 0, 2, 2, 2, 2 ]"),
        (Family::VB, 3, "psi_6", "[ 0, 0, 2, 2, 2, 2 ]"),
        (Family::VB, 3, "psi_7", "[ 0, 0 ]"),
        (Family::VB, 3, "psi_8", "[ 0, 0, 0, 0, 3 ]"),
        (Family::VB, 4, "delta_1", "[ 0, 0, 0, 2, 2 ]"),
        (Family::VB, 4, "delta_2", "[ 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 2, 2, 2, 2 ]"),
        (Family::VB, 4, "delta_3", "[ 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0 ]"),
        (Family::VB, 4, "delta_4", "[ 0, 0, 0, 0, 0, 0, 2, 2 ]"),
        (Family::VB, 4, "delta_5", "[ 0 ]"),
        (Family::VB, 4, "delta_6", "[ 0, 2, 2 ]"),
        (Family::WB, 3, "psi_1_bar", "[ 0, 0, 3, 3, 3 ]"),
        (Family::WB, 3, "psi_2_bar", "[ 0, 0, 0, 0, 0, 0 ]"),
        (Family::WB, 3, "psi_3_bar", "[ 0, 0, 0, 0 ]"),
        (Family::WB, 3, "psi_4_bar", "[ 0, 0, 0, 0 ]"),
        (Family::WB, 3, "psi_5_bar", "[ 0, 3, 3, 3, 3, 3 ]"),
        (Family::UVB, 3, "psi_1_bbar", "[ 0, 0, 3, 3 ]"),
        (Family::UVB, 3, "psi_2_bbar", "[ 0, 0, 0, 0, 0, 0 ]"),
        (Family::UVB, 3, "psi_3_bbar", "[ 0, 0, 3 ]"),
        (Family::UVB, 3, "psi_4_bbar", "[ 0, 0, 3 ]"),
        (Family::WB, 4, "delta_1_bar", "[ 0, 0, 0, 2, 2 ]"),
        (Family::WB, 4, "delta_2_bar", "[ 0, 0, 0, 2, 2, 2, 2, 2, 2, 2, 2 ]"),
        (Family::WB, 4, "delta_3_bar", "[ 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0 ]"),
        (Family::WB, 4, "delta_4_bar", "[ 0, 0, 0, 2, 2, 2 ]"),
        (Family::UVB, 4, "delta_1_bbar", "[ 0, 0, 0, 2, 2 ]"),
        (Family::UVB, 4, "delta_2_bbar", "[ 0, 0, 0, 2, 2, 2, 2, 2, 2 ]"),
        (Family::UVB, 4, "delta_3_bbar", "[ 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0 ]"),
        (Family::UVB, 4, "delta_4_bbar", "[ 0, 0, 0, 2, 2, 2 ]"),
    ]
}

#[test]
fn criterion_2_kernel_abelianizations() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (f, n, name, want) in kernel_cases() {
        let p = build_presentation(f, n).unwrap();
        let got = kernel_abelianization(&p, &named_hom(f, n, name).unwrap().hom).unwrap().gap_format();
        check(&mut failures, got == want, || format!("{f}{n} {name}: got {got}, want {want}"));
    }
    verdict(2, &failures, t, Duration::from_secs(300));
}

fn p_rank(a: &AbInv, p: u32) -> usize {
    let p = BigInt::from(p);
    a.free_rank + a.torsion.iter().filter(|d| (*d % &p) == BigInt::from(0)).count()
}

/// A descended kernel is a quotient of the original kernel, so its
/// abelianization cannot have larger free rank or p-rank.
#[test]
fn criterion_2_descended_kernels_are_quotients() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (quotient, suffix) in [(Family::WB, "_bar"), (Family::UVB, "_bbar")] {
        for n in [3, 4] {
            let vb = build_presentation(Family::VB, n).unwrap();
            let q = build_presentation(quotient, n).unwrap();
            for name in family_names(quotient, n) {
                let base = name.trim_end_matches(suffix);
                let upper = kernel_abelianization(&vb, &named_hom(Family::VB, n, base).unwrap().hom).unwrap();
                let lower = kernel_abelianization(&q, &named_hom(quotient, n, &name).unwrap().hom).unwrap();
                for p in [2, 3, 5] {
                    check(&mut failures, p_rank(&lower, p) <= p_rank(&upper, p), || {
                        format!("{name}: {p}-rank {} exceeds {}", p_rank(&lower, p), p_rank(&upper, p))
                    });
                }
                check(&mut failures, lower.free_rank <= upper.free_rank, || {
                    format!("{name}: free rank grew")
                });
            }
        }
    }
    verdict(2, &failures, t, Duration::from_secs(300));
}

#[test]
fn criterion_3_descent_tables() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (n, wb, uvb) in [(3, 5, 4), (4, 4, 4)] {
        let p = build_presentation(Family::VB, n).unwrap();
        let first = forbidden_first(&p, n);
        let both: Vec<_> = first.iter().cloned().chain(forbidden_second(&p, n)).collect();
        let prefix = if n == 3 { "psi" } else { "delta" };
        for (extra, k, label) in [(&first, wb, "WB"), (&both, uvb, "UVB")] {
            let got: BTreeSet<String> = family_names(Family::VB, n)
                .into_iter()
                .filter(|name| descends(&named_hom(Family::VB, n, name).unwrap().hom, extra))
                .collect();
            let want: BTreeSet<String> = (1..=k).map(|i| format!("{prefix}_{i}")).collect();
            check(&mut failures, got == want, || format!("{label}{n}: {got:?}, want {want:?}"));
        }
    }
    verdict(3, &failures, t, Duration::from_secs(60));
}

#[test]
fn criterion_4_certificates() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let certified = [
        (Family::VB, 3, "psi_7"),
        (Family::VB, 4, "delta_3"),
        (Family::VB, 4, "delta_5"),
        (Family::WB, 3, "psi_2_bar"),
        (Family::WB, 4, "delta_3_bar"),
        (Family::UVB, 3, "psi_2_bbar"),
        (Family::UVB, 4, "delta_3_bbar"),
    ];
    for (f, n, name) in certified {
        let p = build_presentation(f, n).unwrap();
        let c = certify(&p, n, &named_homs(f, n).unwrap(), name, HomFilter::Surjective).unwrap();
        check(&mut failures, c.verdict.is_certified(), || {
            format!("{f}{n} {name}: {}", c.verdict.label())
        });
    }
    let p = build_presentation(Family::VB, 3).unwrap();
    let c = certify(&p, 3, &named_homs(Family::VB, 3).unwrap(), "psi_2", HomFilter::Surjective).unwrap();
    match &c.verdict {
        Verdict::Certified => failures.push("VB3 psi_2 certified".into()),
        Verdict::NotCertified(o) => {
            let names: BTreeSet<_> = o.iter().filter_map(|x| x.name.clone()).collect();
            let want: BTreeSet<_> = ["psi_3".to_string(), "psi_4".to_string()].into();
            check(&mut failures, names == want && o.len() == 2, || {
                format!("VB3 psi_2 offenders {names:?}")
            });
        }
    }
    verdict(4, &failures, t, Duration::from_secs(60));
}

#[test]
fn criterion_5_witnesses() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let cases = [
        (Family::VB, 3, "alpha_VB3", "v1 s1", "pi_P"),
        (Family::VB, 2, "alpha_VB2", "v1 s1", "pi_P"),
        (Family::VT, 2, "psi_VT2", "s1", "pi_K"),
        (Family::VT, 3, "phi_VT3", "s1 r1", "pi_P"),
    ];
    for (f, n, endo, word, hom) in cases {
        let p = build_presentation(f, n).unwrap();
        let e = named_endo(f, n, endo).unwrap();
        let h = named_hom(f, n, hom).unwrap().hom;
        let w = p.parse_word(word).unwrap();
        let before = h.evaluate(&w);
        let after = h.evaluate(&e.apply(&w).unwrap());
        check(&mut failures, before.is_identity() && !after.is_identity(), || {
            format!("{f}{n} {endo}({word}): {before} -> {after}")
        });
    }
    verdict(5, &failures, t, Duration::from_secs(10));
}

#[test]
fn criterion_6_character_theory() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let module = perm_module(4).unwrap();
    let chi = permutation_character(&module);
    check(
        &mut failures,
        chi == ClassFunction::from_ints(4, &[12, 0, 2, 0, 0]).unwrap(),
        || format!("character {chi}"),
    );
    let products: Vec<String> = s4_character_table()
        .iter()
        .map(|c| inner_product(&chi, c).unwrap().to_string())
        .collect();
    check(&mut failures, products == ["1", "0", "1", "2", "1"], || {
        format!("inner products {products:?}")
    });
    let m = decompose(&chi).unwrap();
    check(&mut failures, m == [1, 0, 1, 2, 1], || format!("multiplicities {m:?}"));
    let v = isotypic_sublattice(&module, &[1, 3, 4]).unwrap();
    check(&mut failures, v.rows() == 9, || format!("isotypic rank {}", v.rows()));
    let q = quotient_action(&module, &v).unwrap();
    check(&mut failures, q.rank == 3 && q.faithful, || {
        format!("quotient rank {} faithful {}", q.rank, q.faithful)
    });
    check(
        &mut failures,
        q.character == ClassFunction::from_ints(4, &[3, -1, -1, 1, 0]).unwrap(),
        || format!("quotient character {}", q.character),
    );
    verdict(6, &failures, t, Duration::from_secs(10));
}

#[test]
fn criterion_7_crystallographic_models() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for n in [3, 4, 5] {
        match solve_assignment(&build_presentation(Family::VB, n).unwrap(), n) {
            Ok(m) => {
                let bad = m.failing_relators().unwrap();
                check(&mut failures, bad.is_empty(), || format!("VB{n}: relators {bad:?} fail"));
            }
            Err(e) => failures.push(format!("VB{n}: {e}")),
        }
    }
    let m = solve_assignment(&build_presentation(Family::VB, 3).unwrap(), 3).unwrap();
    let gamma = eval_affine(&m.parse("v1 v2").unwrap(), &m).unwrap();
    let order = element_order(&gamma, &m);
    check(&mut failures, order == Order::Finite(3), || format!("order of v1 v2 is {order}"));
    let r = order_three_box(&m, &gamma, 2);
    check(&mut failures, r.passed() && r.scanned == 2 * 5usize.pow(6), || {
        format!("box: {} order-3, {} conjugate", r.order_three, r.conjugate)
    });
    let m5 = solve_assignment(&build_presentation(Family::VB, 5).unwrap(), 5).unwrap();
    let chains = forbidden_image_chains(5).unwrap();
    check(&mut failures, chains.len() == 12, || format!("{} chains", chains.len()));
    for (label, chain) in &chains {
        for w in &chain[1..] {
            check(&mut failures, verify_identity(&chain[0], w, &m5).unwrap(), || {
                format!("chain {label} breaks")
            });
        }
    }
    verdict(7, &failures, t, Duration::from_secs(60));
}

#[test]
fn criterion_8_twisted_conjugacy() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let s3 = twisted_classes_finite(&FiniteGroupTable::symmetric(3, None).unwrap());
    check(&mut failures, s3 == 3, || format!("S3 identity: {s3}"));
    let z5 = twisted_classes_finite(&FiniteGroupTable::abelian(&[5], &[vec![2]]).unwrap());
    check(&mut failures, z5 == 1, || format!("Z5 doubling: {z5}"));
    let v4 = twisted_classes_finite(&FiniteGroupTable::abelian(&[2, 2], &[vec![0, 1], vec![1, 0]]).unwrap());
    check(&mut failures, v4 == 2, || format!("V4 swap: {v4}"));
    let swap = IntMatrix::from_i64(2, &[vec![0, 1], vec![1, 0]]).unwrap();
    let r = reidemeister_lattice(&swap).unwrap();
    check(&mut failures, r == Reidemeister::Infinite, || format!("lattice swap: {r}"));
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1e);
    for i in 0..100 {
        let (orders, a) = random_abelian_instance(&mut rng, 1 + i % 3, 6);
        let brute = twisted_classes_finite(&FiniteGroupTable::abelian(&orders, &a).unwrap());
        let snf = abelian_twisted_count(&orders, &a).unwrap();
        check(&mut failures, BigInt::from(brute) == snf, || {
            format!("instance {i} {orders:?} {a:?}: {brute} vs {snf}")
        });
    }
    let m = lattice_model(Family::WallpaperG).unwrap();
    for endo in ["identity", "swap"] {
        let e = named_endo(Family::WallpaperG, 0, endo).unwrap();
        let tower = quotient_tower(&m, &e, &[2, 3, 4, 5]).unwrap();
        check(
            &mut failures,
            tower.increasing && tower.verdict == TowerVerdict::EvidenceConsistent,
            || format!("tower {endo}: {:?}", tower.verdict),
        );
    }
    verdict(8, &failures, t, Duration::from_secs(120));
}

/// The property suites live in `tests/properties.rs`; this records that
/// the suite is present and seeded.
#[test]
fn criterion_9_property_suites() {
    let t = Instant::now();
    let source = include_str!("properties.rs");
    let mut failures = Vec::new();
    for name in [
        "snf_unimodular_invariance",
        "free_reduce_idempotent",
        "substitute_functorial",
        "enumeration_conjugation_closed",
        "kernel_ab_conjugation_invariant",
        "kernel_ab_relator_cycling_invariant",
        "character_orthonormality",
        "projector_idempotent",
    ] {
        check(&mut failures, source.contains(&format!("fn {name}")), || {
            format!("missing property {name}")
        });
    }
    check(
        &mut failures,
        source.contains("cases: 200") && source.contains("RngAlgorithm::ChaCha"),
        || "suite not seeded at 200 cases".into(),
    );
    verdict(9, &failures, t, Duration::from_secs(1));
}
