//! Reference values shipped in `data/golden.toml` and the runner that
//! recomputes each of them.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    build_presentation, forbidden_first, forbidden_image_chains, forbidden_second, named_endo, named_hom, named_homs, Family,
};
use crate::crystal::{element_order, eval_affine, lattice_model, order_three_box, solve_assignment, verify_identity, CrystModel};
use crate::error::{Error, Result};
use crate::homsearch::{classify_presentation, descends, HomFilter, Homomorphism, Verdict};
use crate::intlin::IntMatrix;
use crate::kernelab::{certify, kernel_abelianization};
use crate::perms::Permutation;
use crate::reptheory::{decompose, inner_product, isotypic_sublattice, permutation_character, quotient_action, s4_character_table};
use crate::twisted::{quotient_tower, reidemeister_lattice, twisted_classes_finite, FiniteGroupTable};

pub const GOLDEN_TOML: &str = include_str!("../data/golden.toml");

pub const SECTIONS: [&str; 6] = ["1", "3", "4.1", "4.2", "4.3", "appendix"];

#[derive(Debug, Clone, Deserialize)]
pub struct HomsEntry {
    pub section: String,
    pub family: String,
    pub n: usize,
    pub filter: String,
    pub count: usize,
    #[serde(default)]
    pub names: Vec<String>,
    pub origin: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct KernelEntry {
    pub section: String,
    pub family: String,
    #[serde(default)]
    pub n: usize,
    pub hom: Option<String>,
    pub images: Option<Vec<String>>,
    pub degree: Option<usize>,
    pub gap: String,
    pub origin: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DescentEntry {
    pub section: String,
    pub n: usize,
    pub quotient: String,
    pub passes: Vec<String>,
    pub origin: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CertificateEntry {
    pub section: String,
    pub family: String,
    pub n: usize,
    pub hom: String,
    pub verdict: String,
    pub offenders: Option<Vec<String>>,
    pub origin: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct WitnessEntry {
    pub section: String,
    pub family: String,
    pub n: usize,
    pub endo: String,
    pub word: String,
    pub hom: String,
    pub origin: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FactEntry {
    pub section: String,
    pub check: String,
    pub args: Vec<String>,
    pub expected: String,
    pub origin: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Golden {
    #[serde(default)]
    pub homs: Vec<HomsEntry>,
    #[serde(default)]
    pub kernel: Vec<KernelEntry>,
    #[serde(default)]
    pub descent: Vec<DescentEntry>,
    #[serde(default)]
    pub certificate: Vec<CertificateEntry>,
    #[serde(default)]
    pub witness: Vec<WitnessEntry>,
    #[serde(default)]
    pub fact: Vec<FactEntry>,
}

pub fn load() -> Result<Golden> {
    parse(GOLDEN_TOML)
}

pub fn parse(text: &str) -> Result<Golden> {
    toml::from_str(text).map_err(|e| Error::Syntax {
        line: 0,
        column: 0,
        message: e.to_string(),
    })
}

/// One recomputed reference value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub section: String,
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub origin: String,
}

enum Job<'a> {
    Homs(&'a HomsEntry),
    Kernel(&'a KernelEntry),
    Descent(&'a DescentEntry),
    Certificate(&'a CertificateEntry),
    Witness(&'a WitnessEntry),
    Fact(&'a FactEntry),
}

impl Job<'_> {
    fn section(&self) -> &str {
        match self {
            Job::Homs(e) => &e.section,
            Job::Kernel(e) => &e.section,
            Job::Descent(e) => &e.section,
            Job::Certificate(e) => &e.section,
            Job::Witness(e) => &e.section,
            Job::Fact(e) => &e.section,
        }
    }
}

/// Runs every entry of the given sections (all when `None`), in file order
/// within each kind.
pub fn run(golden: &Golden, section: Option<&str>) -> Result<Vec<Outcome>> {
    if let Some(s) = section {
        if !SECTIONS.contains(&s) {
            return Err(Error::UnknownName(s.to_string()));
        }
    }
    let jobs: Vec<Job> = golden
        .homs
        .iter()
        .map(Job::Homs)
        .chain(golden.kernel.iter().map(Job::Kernel))
        .chain(golden.descent.iter().map(Job::Descent))
        .chain(golden.certificate.iter().map(Job::Certificate))
        .chain(golden.witness.iter().map(Job::Witness))
        .chain(golden.fact.iter().map(Job::Fact))
        .filter(|j| section.is_none_or(|s| j.section() == s))
        .collect();
    let mut out: Vec<Outcome> = jobs.par_iter().map(run_job).collect::<Result<_>>()?;
    out.sort_by_key(|o| SECTIONS.iter().position(|s| *s == o.section).unwrap_or(SECTIONS.len()));
    Ok(out)
}

fn outcome(section: &str, label: String, expected: String, actual: String, origin: &str) -> Outcome {
    Outcome {
        section: section.to_string(),
        pass: expected == actual,
        label,
        expected,
        actual,
        origin: origin.to_string(),
    }
}

fn family(name: &str) -> Result<Family> {
    name.parse()
}

fn run_job(job: &Job) -> Result<Outcome> {
    match job {
        Job::Homs(e) => {
            let f = family(&e.family)?;
            let p = build_presentation(f, e.n)?;
            let named = named_homs(f, e.n)?;
            let filter: HomFilter = e.filter.parse()?;
            let (classes, _) = classify_presentation(&p, e.n, &named)?;
            let kept: Vec<_> = classes.iter().filter(|c| filter.keeps(c)).collect();
            let mut actual = kept.len().to_string();
            let mut expected = e.count.to_string();
            if !e.names.is_empty() {
                let names: BTreeSet<String> = kept.iter().filter_map(|c| c.matched_name.clone()).collect();
                let want: BTreeSet<String> = e.names.iter().cloned().collect();
                actual = format!("{actual} classes, named {}", names.into_iter().collect::<Vec<_>>().join(" "));
                expected = format!("{expected} classes, named {}", want.into_iter().collect::<Vec<_>>().join(" "));
            }
            Ok(outcome(
                &e.section,
                format!("homs {}{} -> S{} ({})", f, e.n, e.n, e.filter),
                expected,
                actual,
                &e.origin,
            ))
        }
        Job::Kernel(e) => {
            let f = family(&e.family)?;
            let p = build_presentation(f, e.n)?;
            let (label, h) = match (&e.hom, &e.images) {
                (Some(name), _) => (name.clone(), named_hom(f, e.n, name)?.hom),
                (None, Some(images)) => {
                    let d = e.degree.ok_or_else(|| Error::Unsupported("images need a degree".into()))?;
                    let perms = images.iter().map(|t| Permutation::parse_cycles(d, t)).collect::<Result<Vec<_>>>()?;
                    (format!("[{}]", images.join(", ")), Homomorphism::new(&p, perms)?)
                }
                (None, None) => return Err(Error::Unsupported("kernel entry without a homomorphism".into())),
            };
            let actual = kernel_abelianization(&p, &h)?.gap_format();
            let title = if f.takes_degree() { format!("{f}{}", e.n) } else { f.to_string() };
            Ok(outcome(
                &e.section,
                format!("kernel-ab {title} {label}"),
                e.gap.clone(),
                actual,
                &e.origin,
            ))
        }
        Job::Descent(e) => {
            let p = build_presentation(Family::VB, e.n)?;
            let mut extra = forbidden_first(&p, e.n);
            match e.quotient.as_str() {
                "WB" => {}
                "UVB" => extra.extend(forbidden_second(&p, e.n)),
                other => return Err(Error::UnknownName(other.to_string())),
            }
            let table: Vec<String> = named_homs(Family::VB, e.n)?
                .into_iter()
                .filter(|h| !h.name.starts_with("pi_") && descends(&h.hom, &extra))
                .map(|h| h.name)
                .collect();
            Ok(outcome(
                &e.section,
                format!("descend VB{} -> {}{}", e.n, e.quotient, e.n),
                e.passes.join(" "),
                table.join(" "),
                &e.origin,
            ))
        }
        Job::Certificate(e) => {
            let f = family(&e.family)?;
            let p = build_presentation(f, e.n)?;
            let named = named_homs(f, e.n)?;
            let c = certify(&p, e.n, &named, &e.hom, HomFilter::Surjective)?;
            let render = |verdict: &str, offenders: Option<Vec<String>>| match offenders {
                Some(o) => format!("{verdict} {{{}}}", o.join(", ")),
                None => verdict.to_string(),
            };
            let offenders = match (&c.verdict, &e.offenders) {
                (Verdict::NotCertified(o), Some(_)) => {
                    let set: BTreeSet<String> = o
                        .iter()
                        .map(|x| x.name.clone().unwrap_or_else(|| format!("class {}", x.index)))
                        .collect();
                    Some(set.into_iter().collect())
                }
                _ => None,
            };
            let want = e
                .offenders
                .clone()
                .map(|o| o.into_iter().collect::<BTreeSet<_>>().into_iter().collect());
            Ok(outcome(
                &e.section,
                format!("characteristic {f}{} {}", e.n, e.hom),
                render(&e.verdict, want),
                render(c.verdict.label(), offenders),
                &e.origin,
            ))
        }
        Job::Witness(e) => {
            let f = family(&e.family)?;
            let p = build_presentation(f, e.n)?;
            let endo = named_endo(f, e.n, &e.endo)?;
            let h = named_hom(f, e.n, &e.hom)?.hom;
            let w = p.parse_word(&e.word)?;
            let before = h.evaluate(&w);
            let after = h.evaluate(&endo.apply(&w)?);
            let actual = format!("{} -> {}", before, after);
            let pass = before.is_identity() && !after.is_identity();
            Ok(Outcome {
                section: e.section.clone(),
                label: format!("witness {f}{} {}({}) under {}", e.n, e.endo, e.word, e.hom),
                expected: "() -> non-identity".into(),
                actual,
                pass,
                origin: e.origin.clone(),
            })
        }
        Job::Fact(e) => {
            let actual = fact(&e.check, &e.args)?;
            Ok(outcome(
                &e.section,
                format!("{} {}", e.check, e.args.join(" | ")),
                e.expected.clone(),
                actual,
                &e.origin,
            ))
        }
    }
}

fn arg(args: &[String], i: usize) -> Result<&str> {
    args.get(i)
        .map(String::as_str)
        .ok_or_else(|| Error::Unsupported(format!("missing argument {i}")))
}

fn number(text: &str) -> Result<usize> {
    text.trim().parse().map_err(|_| Error::Syntax {
        line: 1,
        column: 1,
        message: format!("expected a number, got `{text}`"),
    })
}

/// Parses `"a,b;c,d"` into integer rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim().parse::<i64>().map_err(|_| Error::Syntax {
                        line: 1,
                        column: 1,
                        message: format!("bad matrix entry `{x}`"),
                    })
                })
                .collect()
        })
        .collect()
}

pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',').map(number).collect()
}

/// Crystallographic model for a family name and degree.
pub fn model_for(family: Family, n: usize) -> Result<CrystModel> {
    match family {
        Family::WallpaperG | Family::VB3ModVP3Comm => lattice_model(family),
        _ => solve_assignment(&build_presentation(family, n)?, n),
    }
}

fn fact(check: &str, args: &[String]) -> Result<String> {
    match check {
        "twisted_symmetric" => Ok(twisted_classes_finite(&FiniteGroupTable::symmetric(number(arg(args, 0)?)?, None)?).to_string()),
        "twisted_abelian" => {
            let orders: Vec<u64> = parse_list(arg(args, 0)?)?.into_iter().map(|x| x as u64).collect();
            let t = FiniteGroupTable::abelian(&orders, &parse_matrix(arg(args, 1)?)?)?;
            Ok(twisted_classes_finite(&t).to_string())
        }
        "reidemeister_lattice" => {
            let rows = parse_matrix(arg(args, 0)?)?;
            Ok(reidemeister_lattice(&IntMatrix::from_i64(rows.len(), &rows)?)?.to_string())
        }
        "crystal_relators" => {
            let m = model_for(family(arg(args, 0)?)?, number(arg(args, 1)?)?)?;
            Ok(format!("{} failing", m.failing_relators()?.len()))
        }
        "crystal_order" => {
            let m = model_for(family(arg(args, 0)?)?, number(arg(args, 1)?)?)?;
            let e = eval_affine(&m.parse(arg(args, 2)?)?, &m)?;
            Ok(element_order(&e, &m).to_string())
        }
        "crystal_identity" => {
            let m = model_for(family(arg(args, 0)?)?, 0)?;
            Ok(verify_identity(&m.parse(arg(args, 1)?)?, &m.parse(arg(args, 2)?)?, &m)?.to_string())
        }
        "order3_box" => {
            let m = model_for(family(arg(args, 0)?)?, number(arg(args, 1)?)?)?;
            let gamma = eval_affine(&m.parse("v1 v2")?, &m)?;
            let bound = number(arg(args, 2)?)? as i64;
            Ok(if order_three_box(&m, &gamma, bound).passed() {
                "pass"
            } else {
                "fail"
            }
            .to_string())
        }
        "zeta_chains" => {
            let n = number(arg(args, 0)?)?;
            let m = model_for(Family::VB, n)?;
            let chains = forbidden_image_chains(n)?;
            let mut hold = 0;
            for (_, chain) in &chains {
                let mut ok = true;
                for w in &chain[1..] {
                    ok &= verify_identity(&chain[0], w, &m)?;
                }
                hold += ok as usize;
            }
            Ok(format!("{hold} of {} chains hold", chains.len()))
        }
        "tower" => {
            let f = family(arg(args, 0)?)?;
            let m = model_for(f, 0)?;
            let endo = named_endo(f, 0, arg(args, 1)?)?;
            let t = quotient_tower(&m, &endo, &parse_list(arg(args, 2)?)?)?;
            let counts: Vec<String> = t.entries.iter().map(|e| e.classes.to_string()).collect();
            Ok(format!("{} {}", counts.join(","), t.verdict.label()))
        }
        "perm_char" => Ok(permutation_character(&crate::crystal::perm_module(number(arg(args, 0)?)?)?).to_string()),
        "inner_products" => {
            let chi = permutation_character(&crate::crystal::perm_module(number(arg(args, 0)?)?)?);
            let products = s4_character_table()
                .iter()
                .map(|c| inner_product(&chi, c).map(|q| crate::reptheory::render_rational(&q)))
                .collect::<Result<Vec<_>>>()?;
            Ok(format!("({})", products.join(", ")))
        }
        "decompose" => {
            let chi = permutation_character(&crate::crystal::perm_module(number(arg(args, 0)?)?)?);
            let m: Vec<String> = decompose(&chi)?.iter().map(ToString::to_string).collect();
            Ok(format!("({})", m.join(", ")))
        }
        "isotypic_rank" => {
            let module = crate::crystal::perm_module(4)?;
            Ok(isotypic_sublattice(&module, &parse_list(arg(args, 0)?)?)?.rows().to_string())
        }
        "quotient_action" => {
            let module = crate::crystal::perm_module(4)?;
            let v = isotypic_sublattice(&module, &parse_list(arg(args, 0)?)?)?;
            let q = quotient_action(&module, &v)?;
            Ok(format!(
                "rank {}, {}, character {}",
                q.rank,
                if q.faithful { "faithful" } else { "not faithful" },
                q.character
            ))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_file_parses() {
        let g = load().unwrap();
        assert_eq!(g.homs.len(), 9);
        assert!(g.kernel.len() >= 30);
        for origin in g.homs.iter().map(|e| &e.origin).chain(g.fact.iter().map(|e| &e.origin)) {
            assert!(origin == "literature" || origin == "brute-force");
        }
    }

    #[test]
    fn matrix_parsing() {
        assert_eq!(parse_matrix("0,1;1,0").unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(parse_matrix("0,x").is_err());
        assert_eq!(parse_list("1,3,4").unwrap(), vec![1, 3, 4]);
    }

    #[test]
    fn unknown_section_rejected() {
        assert!(run(&Golden::default(), Some("9")).is_err());
    }

    #[test]
    fn small_sections_pass() {
        let g = load().unwrap();
        for s in ["1", "4.2"] {
            let out = run(&g, Some(s)).unwrap();
            assert!(!out.is_empty());
            assert!(out.iter().all(|o| o.pass), "{out:?}");
        }
    }
}
