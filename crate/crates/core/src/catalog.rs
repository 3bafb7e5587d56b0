//! Builders for the presentations, named homomorphisms and named
//! endomorphisms used throughout the crate.
//!
//! Generator names are stable: `s1..` for classical generators, `v1..` for
//! virtual ones, `r1..` for the twin generators, `t1..` for Coxeter
//! generators of `S_n`, `l_i_j` for lattice generators and `x_i_j`, `a`, `b`
//! for the `KB_3` quotient.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::homsearch::Homomorphism;
use crate::perms::{Permutation, MAX_DEGREE};
use crate::words::{Presentation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    VB,
    WB,
    UVB,
    VT,
    SYM,
    VB3ModVP3Comm,
    VB3ModKB3Comm,
    WallpaperG,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::VB,
        Family::WB,
        Family::UVB,
        Family::VT,
        Family::SYM,
        Family::VB3ModVP3Comm,
        Family::VB3ModKB3Comm,
        Family::WallpaperG,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::VB => "VB",
            Family::WB => "WB",
            Family::UVB => "UVB",
            Family::VT => "VT",
            Family::SYM => "SYM",
            Family::VB3ModVP3Comm => "VB3_MOD_VP3COMM",
            Family::VB3ModKB3Comm => "VB3_MOD_KB3COMM",
            Family::WallpaperG => "WALLPAPER_G",
        }
    }

    /// Families whose presentation depends on `n`.
    pub fn takes_degree(self) -> bool {
        matches!(self, Family::VB | Family::WB | Family::UVB | Family::VT | Family::SYM)
    }

    /// Families built from `VB_n` by adding relators.
    pub fn is_braid_like(self) -> bool {
        matches!(self, Family::VB | Family::WB | Family::UVB)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// A homomorphism from a catalog presentation to `S_degree`, validated
/// against every relator at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedHom {
    pub name: String,
    pub family: Family,
    pub n: usize,
    pub hom: Homomorphism,
}

impl NamedHom {
    pub fn degree(&self) -> usize {
        self.hom.degree
    }

    pub fn images(&self) -> &[Permutation] {
        &self.hom.images
    }
}

/// An endomorphism given by generator images over the same presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedEndo {
    pub name: String,
    pub images: Vec<Word>,
}

impl NamedEndo {
    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.substitute(&self.images)
    }
}

fn check_n(family: Family, n: usize) -> Result<()> {
    let min = if family == Family::SYM { 1 } else { 2 };
    if family.takes_degree() && (n < min || n > MAX_DEGREE) {
        return Err(Error::Unsupported(format!("{family} with n = {n}")));
    }
    Ok(())
}

/// Helper that turns relation strings into relators over a fixed
/// generator list.
struct Rels {
    base: Presentation,
    rels: Vec<Word>,
}

impl Rels {
    fn new(names: &[String]) -> Self {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let base = Presentation::new("tmp", &refs, Vec::new()).expect("valid catalog names");
        Rels { base, rels: Vec::new() }
    }

    fn word(&self, text: &str) -> Word {
        self.base.parse_word(text).expect("valid catalog word")
    }

    fn rel(&mut self, text: &str) {
        let w = self.word(text).free_reduce();
        self.rels.push(w);
    }

    fn eq(&mut self, lhs: &str, rhs: &str) {
        let w = self.word(lhs).concat(&self.word(rhs).inverse()).free_reduce();
        self.rels.push(w);
    }

    fn commutator(&mut self, a: &str, b: &str) {
        self.rel(&format!("{a} {b} {a}^-1 {b}^-1"));
    }

    fn finish(self, name: &str) -> Presentation {
        let names = self.base.generator_names();
        Presentation::new(name, &names, self.rels).expect("valid catalog presentation")
    }
}

fn braid_names(n: usize, second: char) -> Vec<String> {
    (1..n)
        .map(|i| format!("s{i}"))
        .chain((1..n).map(|i| format!("{second}{i}")))
        .collect()
}

fn vb_relators(r: &mut Rels, n: usize) {
    for i in 1..n.saturating_sub(1) {
        r.eq(&format!("s{i} s{} s{i}", i + 1), &format!("s{} s{i} s{}", i + 1, i + 1));
    }
    for i in 1..n {
        for j in i + 2..n {
            r.commutator(&format!("s{i}"), &format!("s{j}"));
        }
    }
    for i in 1..n.saturating_sub(1) {
        r.eq(&format!("v{i} v{} v{i}", i + 1), &format!("v{} v{i} v{}", i + 1, i + 1));
    }
    for i in 1..n {
        for j in i + 2..n {
            r.commutator(&format!("v{i}"), &format!("v{j}"));
        }
    }
    for i in 1..n {
        r.rel(&format!("v{i} v{i}"));
    }
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) >= 2 {
                r.commutator(&format!("s{i}"), &format!("v{j}"));
            }
        }
    }
    for i in 1..n.saturating_sub(1) {
        r.eq(&format!("v{i} v{} s{i}", i + 1), &format!("s{} v{i} v{}", i + 1, i + 1));
    }
}

/// First forbidden family, `v_i s_{i+1} s_i v_{i+1} s_i^-1 s_{i+1}^-1`.
pub fn forbidden_first(p: &Presentation, n: usize) -> Vec<Word> {
    (1..n.saturating_sub(1))
        .map(|i| {
            let j = i + 1;
            p.parse_word(&format!("v{i} s{j} s{i} v{j} s{i}^-1 s{j}^-1"))
                .expect("braid generators")
        })
        .collect()
}

/// Second forbidden family, `v_{i+1} s_i s_{i+1} v_i s_{i+1}^-1 s_i^-1`.
pub fn forbidden_second(p: &Presentation, n: usize) -> Vec<Word> {
    (1..n.saturating_sub(1))
        .map(|i| {
            let j = i + 1;
            p.parse_word(&format!("v{j} s{i} s{j} v{i} s{j}^-1 s{i}^-1"))
                .expect("braid generators")
        })
        .collect()
}

fn pair_names(prefix: &str, n: usize) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push((i, j, format!("{prefix}_{i}_{j}")));
            }
        }
    }
    out
}

pub fn build_presentation(family: Family, n: usize) -> Result<Presentation> {
    check_n(family, n)?;
    let p = match family {
        Family::VB | Family::WB | Family::UVB => {
            let mut r = Rels::new(&braid_names(n, 'v'));
            vb_relators(&mut r, n);
            if family != Family::VB {
                let tmp = r.base.clone();
                r.rels.extend(forbidden_first(&tmp, n));
                if family == Family::UVB {
                    r.rels.extend(forbidden_second(&tmp, n));
                }
            }
            r.finish(&format!("{family}{n}"))
        }
        Family::VT => {
            let mut r = Rels::new(&braid_names(n, 'r'));
            for i in 1..n {
                r.rel(&format!("s{i} s{i}"));
            }
            for i in 1..n {
                for j in i + 2..n {
                    r.commutator(&format!("s{i}"), &format!("s{j}"));
                }
            }
            for i in 1..n {
                r.rel(&format!("r{i} r{i}"));
            }
            for i in 1..n {
                for j in i + 2..n {
                    r.commutator(&format!("r{i}"), &format!("r{j}"));
                }
            }
            for i in 1..n.saturating_sub(1) {
                r.eq(&format!("r{i} r{} r{i}", i + 1), &format!("r{} r{i} r{}", i + 1, i + 1));
            }
            for i in 1..n {
                for j in 1..n {
                    if i.abs_diff(j) >= 2 {
                        r.commutator(&format!("r{i}"), &format!("s{j}"));
                    }
                }
            }
            for i in 1..n.saturating_sub(1) {
                r.eq(&format!("r{i} r{} s{i}", i + 1), &format!("s{} r{i} r{}", i + 1, i + 1));
            }
            r.finish(&format!("VT{n}"))
        }
        Family::SYM => {
            let names: Vec<String> = (1..n).map(|i| format!("t{i}")).collect();
            let mut r = Rels::new(&names);
            for i in 1..n {
                r.rel(&format!("t{i} t{i}"));
            }
            for i in 1..n.saturating_sub(1) {
                r.rel(&format!("t{i} t{} t{i} t{} t{i} t{}", i + 1, i + 1, i + 1));
            }
            for i in 1..n {
                for j in i + 2..n {
                    r.rel(&format!("t{i} t{j} t{i} t{j}"));
                }
            }
            r.finish(&format!("S{n}"))
        }
        Family::VB3ModVP3Comm => {
            let pairs = pair_names("l", 3);
            let mut names = vec!["v1".to_string(), "v2".to_string()];
            names.extend(pairs.iter().map(|(_, _, s)| s.clone()));
            let mut r = Rels::new(&names);
            r.eq("v1 v2 v1", "v2 v1 v2");
            r.rel("v1 v1");
            r.rel("v2 v2");
            for (a, (_, _, x)) in pairs.iter().enumerate() {
                for (_, _, y) in &pairs[a + 1..] {
                    r.commutator(x, y);
                }
            }
            for k in 1..=2 {
                let t = Permutation::adjacent(k, 3);
                for (i, j, x) in &pairs {
                    r.eq(
                        &format!("v{k} {x} v{k}"),
                        &format!("l_{}_{}", t.image(i - 1) + 1, t.image(j - 1) + 1),
                    );
                }
            }
            r.finish("VB3_MOD_VP3COMM")
        }
        Family::VB3ModKB3Comm => {
            let names: Vec<String> = ["a", "b", "x_1_2", "x_1_3"].iter().map(|s| s.to_string()).collect();
            let mut r = Rels::new(&names);
            r.rel("a a a");
            r.rel("b b");
            r.rel("b a b a");
            r.commutator("x_1_2", "x_1_3");
            r.eq("b x_1_2 b^-1", "x_1_3");
            r.eq("b x_1_3 b^-1", "x_1_2");
            r.eq("a x_1_2 a^-1", "x_1_2");
            r.eq("a x_1_3 a^-1", "x_1_3");
            r.finish("VB3_MOD_KB3COMM")
        }
        Family::WallpaperG => {
            let names: Vec<String> = ["l_1_2", "l_2_1", "v1"].iter().map(|s| s.to_string()).collect();
            let mut r = Rels::new(&names);
            r.rel("v1 v1");
            r.commutator("l_1_2", "l_2_1");
            r.eq("v1 l_1_2 v1", "l_2_1");
            r.eq("v1 l_2_1 v1", "l_1_2");
            r.finish("WALLPAPER_G")
        }
    };
    Ok(p)
}

/// Every `(family, n)` pair the catalog can build; `n = 0` for families
/// that ignore it.
pub fn catalog_entries() -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for f in Family::ALL {
        if f.takes_degree() {
            let min = if f == Family::SYM { 1 } else { 2 };
            out.extend((min..=MAX_DEGREE).map(|n| (f, n)));
        } else {
            out.push((f, 0));
        }
    }
    out
}

/// Parses a product of adjacent transpositions such as `"1 2 1"`
/// (`τ1 τ2 τ1`); the empty string is the identity.
fn taus(text: &str, n: usize) -> Permutation {
    text.split_whitespace().fold(Permutation::identity(n), |acc, t| {
        acc.compose(&Permutation::adjacent(t.parse().expect("tau index"), n))
    })
}

// Tables of images as (v_1..v_{n-1}; s_1..s_{n-1}), each entry a tau product.
const PSI: [(&str, [&str; 2], [&str; 2]); 8] = [
    ("psi_1", ["1", "1"], ["2", "2"]),
    ("psi_2", ["1", "2"], ["1", "2"]),
    ("psi_3", ["1", "2"], ["2", "1 2 1"]),
    ("psi_4", ["1", "2"], ["1 2 1", "1"]),
    ("psi_5", ["1", "2"], ["1 2", "1 2"]),
    ("psi_6", ["1", "2"], ["2 1", "2 1"]),
    ("psi_7", ["1", "2"], ["", ""]),
    ("psi_8", ["1", "1"], ["1 2", "1 2"]),
];

const DELTA: [(&str, [&str; 3], [&str; 3]); 6] = [
    ("delta_1", ["1", "2", "1"], ["1", "2", "1"]),
    ("delta_2", ["1", "2", "1"], ["3", "3 2 1 2 3", "3"]),
    ("delta_3", ["1", "2", "3"], ["1", "2", "3"]),
    ("delta_4", ["1", "2", "3"], ["3", "3 2 1 2 3", "1"]),
    ("delta_5", ["1", "2", "3"], ["", "", ""]),
    ("delta_6", ["1", "2", "1"], ["", "", ""]),
];

fn table_images(n: usize, v: &[&str], s: &[&str]) -> Vec<Permutation> {
    s.iter().chain(v).map(|t| taus(t, n)).collect()
}

fn pi_p(n: usize) -> Vec<Permutation> {
    (1..n).chain(1..n).map(|i| Permutation::adjacent(i, n)).collect()
}

fn pi_k(n: usize) -> Vec<Permutation> {
    (1..n)
        .map(|_| Permutation::identity(n))
        .chain((1..n).map(|i| Permutation::adjacent(i, n)))
        .collect()
}

fn named(p: &Presentation, family: Family, n: usize, name: String, images: Vec<Permutation>) -> Result<NamedHom> {
    let degree = images.first().map(Permutation::degree).unwrap_or(n);
    let hom = Homomorphism { degree, images };
    if let Some(relator) = hom.violated_relator(p) {
        return Err(Error::RelatorViolation { name, relator });
    }
    Ok(NamedHom { name, family, n, hom })
}

/// The named homomorphisms to `S_n`: the classification tables for
/// `n = 3, 4` (with `_bar`/`_bbar` suffixes for the welded and unrestricted
/// descents) followed by `pi_P` and, where it is defined, `pi_K`.
pub fn named_homs(family: Family, n: usize) -> Result<Vec<NamedHom>> {
    let p = build_presentation(family, n)?;
    let mut out = Vec::new();
    let suffix = match family {
        Family::WB => "_bar",
        Family::UVB => "_bbar",
        _ => "",
    };
    match (family, n) {
        (Family::VB | Family::WB | Family::UVB, 3) => {
            let keep = match family {
                Family::VB => 8,
                Family::WB => 5,
                _ => 4,
            };
            for (name, v, s) in &PSI[..keep] {
                out.push(named(&p, family, n, format!("{name}{suffix}"), table_images(3, v, s))?);
            }
        }
        (Family::VB | Family::WB | Family::UVB, 4) => {
            let keep = if family == Family::VB { 6 } else { 4 };
            for (name, v, s) in &DELTA[..keep] {
                out.push(named(&p, family, n, format!("{name}{suffix}"), table_images(4, v, s))?);
            }
        }
        _ => {}
    }
    match family {
        Family::VB | Family::WB | Family::UVB | Family::VT => {
            out.push(named(&p, family, n, "pi_P".into(), pi_p(n))?);
            if family == Family::VB || family == Family::VT || n == 2 {
                out.push(named(&p, family, n, "pi_K".into(), pi_k(n))?);
            }
        }
        _ => {
            return Err(Error::Unsupported(format!("no named homomorphisms for {family}")));
        }
    }
    Ok(out)
}

/// Looks up a named homomorphism; `pi_P`/`pi_K` also match the table entry
/// they coincide with.
pub fn named_hom(family: Family, n: usize, name: &str) -> Result<NamedHom> {
    named_homs(family, n)?
        .into_iter()
        .find(|h| h.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

fn endo(p: &Presentation, name: &str, images: &[String]) -> NamedEndo {
    NamedEndo {
        name: name.to_string(),
        images: images.iter().map(|s| p.parse_word(s).expect("catalog endomorphism word")).collect(),
    }
}

/// Identity endomorphism of any presentation.
pub fn identity_endo(p: &Presentation) -> NamedEndo {
    NamedEndo {
        name: "identity".into(),
        images: (0..p.generator_count()).map(Word::generator).collect(),
    }
}

pub fn named_endos(family: Family, n: usize) -> Result<Vec<NamedEndo>> {
    let p = build_presentation(family, n)?;
    let mut out = vec![identity_endo(&p)];
    match family {
        Family::VB => {
            let m = n - 1;
            let mut z1: Vec<String> = (1..=m).map(|i| format!("v{i} s{i} v{i}")).collect();
            z1.extend((1..=m).map(|i| format!("v{i}")));
            let mut z2: Vec<String> = (1..=m).map(|i| format!("s{i}^-1")).collect();
            z2.extend((1..=m).map(|i| format!("v{i}")));
            out.push(endo(&p, "zeta1", &z1));
            out.push(endo(&p, "zeta2", &z2));
            if n == 2 {
                out.push(endo(&p, "alpha_VB2", &["s1^-1 v1".into(), "v1".into()]));
            }
            if n == 3 {
                let a: Vec<String> = ["v1 v2 s1 v2 v1", "v1 v2 s2 v2 v1", "v1", "v2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                out.push(endo(&p, "alpha_VB3", &a));
            }
        }
        Family::VT if n == 2 => {
            out.push(endo(&p, "psi_VT2", &["r1".into(), "s1".into()]));
        }
        Family::VT if n == 3 => {
            let phi: Vec<String> = ["s2", "r1 r2 s2 r2 r1", "r1", "r2"].iter().map(|s| s.to_string()).collect();
            out.push(endo(&p, "phi_VT3", &phi));
        }
        Family::WallpaperG => {
            out.push(endo(&p, "swap", &["l_2_1".into(), "l_1_2".into(), "v1".into()]));
        }
        _ => {}
    }
    Ok(out)
}

pub fn named_endo(family: Family, n: usize, name: &str) -> Result<NamedEndo> {
    named_endos(family, n)?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// Chains of words in `VB_n` that are equal in the group: images of the two
/// forbidden relators under `zeta1` and `zeta2` rewritten step by step.
/// Each entry is `(label, chain)`; consecutive words in a chain are equal.
pub fn forbidden_image_chains(n: usize) -> Result<Vec<(String, Vec<Word>)>> {
    if !(3..=MAX_DEGREE).contains(&n) {
        return Err(Error::Unsupported(format!("chains need 3 <= n <= {MAX_DEGREE}, got {n}")));
    }
    let p = build_presentation(Family::VB, n)?;
    let endos = named_endos(Family::VB, n)?;
    let z1 = endos.iter().find(|e| e.name == "zeta1").expect("zeta1");
    let z2 = endos.iter().find(|e| e.name == "zeta2").expect("zeta2");
    let mut out = Vec::new();
    for i in 1..n - 1 {
        let (a, b, s, t) = (format!("v{i}"), format!("v{}", i + 1), format!("s{i}"), format!("s{}", i + 1));
        // letters: a = v_i, b = v_{i+1}, s/S = s_i^{±1}, t/T = s_{i+1}^{±1}
        let w = |text: &str| -> Word {
            let tokens: Vec<String> = text
                .split_whitespace()
                .map(|c| match c {
                    "a" => a.clone(),
                    "b" => b.clone(),
                    "s" => s.clone(),
                    "t" => t.clone(),
                    "S" => format!("{s}^-1"),
                    "T" => format!("{t}^-1"),
                    _ => unreachable!("chain letter {c}"),
                })
                .collect();
            p.parse_word(&tokens.join(" ")).expect("chain word")
        };
        let r1 = forbidden_first(&p, n)[i - 1].clone();
        let r2 = forbidden_second(&p, n)[i - 1].clone();
        let mut c1 = vec![z1.apply(&r1)?];
        for line in [
            "a b t b a s a b a S a b T b",
            "a b t b a s b a b S a b T b",
            "a b t b a b a t a T a b a b T b",
            "a b t a b t a T b a T b",
            "a b a b s t a T S b a b",
            "b a b b s t a T S b a b",
        ] {
            c1.push(w(line));
        }
        out.push((format!("zeta1(r1_{i})"), c1));
        let mut c2 = vec![z1.apply(&r2)?];
        for line in [
            "b a s a b t b a b T b a S a",
            "b a s a b t a b a T b a S a",
            "b a s a b a b s b S b a b a S a",
            "b a s b a s b S a b S a",
            "b a b a t s b S T a b a",
            "a b a a t s b S T a b a",
        ] {
            c2.push(w(line));
        }
        out.push((format!("zeta1(r2_{i})"), c2));
        out.push((
            format!("zeta2(r1_{i})"),
            vec![
                z2.apply(&r1)?,
                w("a T S b s t"),
                w("b s t").inverse().concat(&r2).concat(&w("b s t")),
            ],
        ));
        out.push((
            format!("zeta2(r2_{i})"),
            vec![
                z2.apply(&r2)?,
                w("b S T a t s"),
                w("a t s").inverse().concat(&r1).concat(&w("a t s")),
            ],
        ));
    }
    Ok(out)
}
