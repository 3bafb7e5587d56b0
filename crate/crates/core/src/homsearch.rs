//! Homomorphisms from finitely presented groups to `S_n`: exhaustive
//! enumeration by backtracking, classification up to conjugacy in `S_n`,
//! descent to quotients, kernel equality and the kernel-based certificate
//! for characteristic subgroups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::catalog::NamedHom;
use crate::error::{Error, Result};
use crate::intlin::AbInv;
use crate::perms::{all_permutations, closure_with_degree, eval_fast, involutions, Closure, Permutation};
use crate::words::{Presentation, Word};

/// Hard degree cap for [`enumerate_homs`].
pub const ENUMERATION_CAP: usize = 4;

/// Images of the generators of some presentation in `S_degree`.
///
/// Ordering compares image tuples lexicographically by one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Homomorphism {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl Homomorphism {
    /// Validates generator count, degrees and every relator.
    pub fn new(p: &Presentation, images: Vec<Permutation>) -> Result<Self> {
        if images.len() < p.generator_count() {
            return Err(Error::MissingImage(images.len()));
        }
        if images.len() > p.generator_count() {
            return Err(Error::Dimension(format!(
                "{} images for {} generators",
                images.len(),
                p.generator_count()
            )));
        }
        let degree = images.first().map(Permutation::degree).unwrap_or(1);
        if let Some(q) = images.iter().find(|q| q.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, q.degree()));
        }
        let h = Homomorphism { degree, images };
        if let Some(i) = h.violated_relator(p) {
            return Err(Error::NotHomomorphism(format!("relator {} = {}", i, p.render_word(&p.relators[i]))));
        }
        Ok(h)
    }

    /// Index of the first relator not sent to the identity.
    pub fn violated_relator(&self, p: &Presentation) -> Option<usize> {
        p.relators.iter().position(|r| !self.evaluate(r).is_identity())
    }

    pub fn trivial(p: &Presentation, degree: usize) -> Self {
        Homomorphism {
            degree,
            images: vec![Permutation::identity(degree); p.generator_count()],
        }
    }

    pub fn evaluate(&self, w: &Word) -> Permutation {
        eval_fast(w, &self.images, self.degree)
    }

    /// The homomorphism `g ↦ u h(g) u^-1`.
    pub fn conjugate_by(&self, u: &Permutation) -> Homomorphism {
        Homomorphism {
            degree: self.degree,
            images: self.images.iter().map(|x| x.conjugate_by(u)).collect(),
        }
    }

    pub fn image(&self) -> Closure {
        closure_with_degree(&self.images, self.degree)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == crate::perms::factorial(self.degree)
    }

    pub fn has_abelian_image(&self) -> bool {
        self.images.iter().all(|a| self.images.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Lexicographically least tuple in the conjugation orbit, and the orbit
    /// size.
    pub fn canonical(&self) -> (Homomorphism, usize) {
        let orbit: HashSet<Homomorphism> = all_permutations(self.degree).iter().map(|u| self.conjugate_by(u)).collect();
        let rep = orbit.iter().min().cloned().expect("nonempty orbit");
        (rep, orbit.len())
    }

    /// `name ↦ cycles` rendering in generator order.
    pub fn describe(&self, p: &Presentation) -> Vec<(String, String)> {
        p.generator_names()
            .iter()
            .zip(&self.images)
            .map(|(g, x)| (g.to_string(), x.to_string()))
            .collect()
    }
}

/// Enumerates every homomorphism `P → S_n`, sorted.
///
/// Involution generators are assigned first, from the involutions of `S_n`;
/// each relator is checked as soon as its last generator is assigned. The
/// search is split over the candidates for the first generator and run in
/// parallel.
pub fn enumerate_homs(p: &Presentation, n: usize) -> Result<Vec<Homomorphism>> {
    if n > ENUMERATION_CAP {
        return Err(Error::DegreeCap {
            degree: n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Err(Error::Unsupported("degree 0".into()));
    }
    let k = p.generator_count();
    if k == 0 {
        return Ok(vec![Homomorphism {
            degree: n,
            images: Vec::new(),
        }]);
    }
    let mut order: Vec<usize> = (0..k).filter(|&g| p.is_involution(g)).collect();
    order.extend((0..k).filter(|&g| !p.is_involution(g)));
    let mut position = vec![0; k];
    for (pos, &g) in order.iter().enumerate() {
        position[g] = pos;
    }
    let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); k];
    for r in &p.relators {
        if let Some(last) = r.letters().iter().map(|l| position[l.generator]).max() {
            checks[last].push(r);
        }
    }
    let all = all_permutations(n);
    let invs = involutions(n);
    let candidates: Vec<&[Permutation]> = order
        .iter()
        .map(|&g| if p.is_involution(g) { invs.as_slice() } else { all.as_slice() })
        .collect();

    let search = Search {
        n,
        order: &order,
        checks: &checks,
        candidates: &candidates,
    };
    let mut out: Vec<Homomorphism> = candidates[0]
        .par_iter()
        .map(|first| {
            let mut images = vec![Permutation::identity(n); k];
            images[order[0]] = *first;
            let mut found = Vec::new();
            if search.ok(0, &images) {
                search.extend(1, &mut images, &mut found);
            }
            found
        })
        .flatten()
        .collect();
    out.sort();
    Ok(out)
}

struct Search<'a> {
    n: usize,
    order: &'a [usize],
    checks: &'a [Vec<&'a Word>],
    candidates: &'a [&'a [Permutation]],
}

impl Search<'_> {
    fn ok(&self, pos: usize, images: &[Permutation]) -> bool {
        self.checks[pos].iter().all(|r| eval_fast(r, images, self.n).is_identity())
    }

    fn extend(&self, pos: usize, images: &mut Vec<Permutation>, out: &mut Vec<Homomorphism>) {
        if pos == self.order.len() {
            out.push(Homomorphism {
                degree: self.n,
                images: images.clone(),
            });
            return;
        }
        let g = self.order[pos];
        for c in self.candidates[pos] {
            images[g] = *c;
            if self.ok(pos, images) {
                self.extend(pos + 1, images, out);
            }
        }
    }
}

/// One conjugacy class of homomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomClass {
    pub representative: Homomorphism,
    pub orbit_size: usize,
    pub surjective: bool,
    pub abelian_image: bool,
    pub matched_name: Option<String>,
}

/// Partitions homomorphisms (of one presentation and degree) into
/// conjugacy classes, sorted by canonical representative.
pub fn classify(homs: &[Homomorphism]) -> Vec<HomClass> {
    let mut reps: BTreeMap<Homomorphism, usize> = BTreeMap::new();
    let mut seen: HashSet<Homomorphism> = HashSet::new();
    for h in homs {
        if seen.contains(h) {
            continue;
        }
        let orbit: HashSet<Homomorphism> = all_permutations(h.degree).iter().map(|u| h.conjugate_by(u)).collect();
        let rep = orbit.iter().min().cloned().expect("nonempty orbit");
        reps.insert(rep, orbit.len());
        seen.extend(orbit);
    }
    reps.into_iter()
        .map(|(rep, orbit_size)| HomClass {
            surjective: rep.is_surjective(),
            abelian_image: rep.has_abelian_image(),
            representative: rep,
            orbit_size,
            matched_name: None,
        })
        .collect()
}

/// Fills `matched_name` from the first named homomorphism in each class.
pub fn match_names(classes: &mut [HomClass], named: &[NamedHom]) {
    let canon: Vec<(Homomorphism, &str)> = named.iter().map(|h| (h.hom.canonical().0, h.name.as_str())).collect();
    for c in classes {
        c.matched_name = canon.iter().find(|(r, _)| *r == c.representative).map(|(_, n)| n.to_string());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomFilter {
    All,
    NonAbelian,
    Surjective,
}

impl std::str::FromStr for HomFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(HomFilter::All),
            "nonabelian" => Ok(HomFilter::NonAbelian),
            "surjective" => Ok(HomFilter::Surjective),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl HomFilter {
    pub fn keeps(self, c: &HomClass) -> bool {
        match self {
            HomFilter::All => true,
            HomFilter::NonAbelian => !c.abelian_image,
            HomFilter::Surjective => c.surjective,
        }
    }
}

/// Enumerates, classifies and names in one step.
pub fn classify_presentation(p: &Presentation, n: usize, named: &[NamedHom]) -> Result<(Vec<HomClass>, usize)> {
    let homs = enumerate_homs(p, n)?;
    let mut classes = classify(&homs);
    match_names(&mut classes, named);
    Ok((classes, homs.len()))
}

/// Does `h` kill every word in `extra`?
pub fn descends(h: &Homomorphism, extra: &[Word]) -> bool {
    extra.iter().all(|r| h.evaluate(r).is_identity())
}

/// Equality of kernels for homomorphisms of the same source.
///
/// The kernels agree iff `h1(g) ↦ h2(g)` extends to an isomorphism of the
/// images, i.e. iff the subgroup of `S_a × S_b` generated by the pairs
/// `(h1(g), h2(g))` projects bijectively onto both images.
pub fn kernel_equal(h1: &Homomorphism, h2: &Homomorphism) -> bool {
    assert_eq!(h1.images.len(), h2.images.len(), "homomorphisms of different presentations");
    let gens: Vec<(Permutation, Permutation)> = h1.images.iter().copied().zip(h2.images.iter().copied()).collect();
    let id = (Permutation::identity(h1.degree), Permutation::identity(h2.degree));
    let mut seen: HashSet<(Permutation, Permutation)> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some((a, b)) = queue.pop_front() {
        for (x, y) in &gens {
            let next = (a.compose(x), b.compose(y));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len() == h1.image().order() && seen.len() == h2.image().order()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offender {
    pub index: usize,
    pub name: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified(Vec<Offender>),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::NotCertified(_) => "NOT_CERTIFIED",
        }
    }
}

/// Certifies that the kernel of `classes[target]` is characteristic: every
/// class either has different kernel abelian invariants or the very same
/// kernel. `invariants[i]` belongs to `classes[i]`.
pub fn characteristic_certificate(classes: &[HomClass], target: usize, invariants: &[Option<AbInv>]) -> Result<Verdict> {
    if target >= classes.len() {
        return Err(Error::Dimension(format!("target {target} of {} classes", classes.len())));
    }
    if let Some(i) = (0..classes.len()).find(|&i| invariants.get(i).is_none_or(Option::is_none)) {
        return Err(Error::IncompleteInvariants(i));
    }
    let inv = |i: usize| invariants[i].as_ref().expect("checked");
    let t = &classes[target].representative;
    let offenders: Vec<Offender> = classes
        .iter()
        .enumerate()
        .filter(|(i, c)| inv(*i) == inv(target) && !kernel_equal(&c.representative, t))
        .map(|(i, c)| Offender {
            index: i,
            name: c.matched_name.clone(),
            reason: format!("kernel abelianization {} equals the target's but the kernels differ", inv(i)),
        })
        .collect();
    Ok(if offenders.is_empty() {
        Verdict::Certified
    } else {
        Verdict::NotCertified(offenders)
    })
}

/// Convenience map from representatives to invariants.
pub fn invariants_by_class(classes: &[HomClass], table: &HashMap<Homomorphism, AbInv>) -> Vec<Option<AbInv>> {
    classes.iter().map(|c| table.get(&c.representative).cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_presentation, named_hom, named_homs, Family};
    use crate::perms::factorial;

    #[test]
    fn small_enumerations() {
        let vt2 = build_presentation(Family::VT, 2).unwrap();
        assert_eq!(enumerate_homs(&vt2, 2).unwrap().len(), 4);
        let vb2 = build_presentation(Family::VB, 2).unwrap();
        assert_eq!(enumerate_homs(&vb2, 2).unwrap().len(), 4);
        assert_eq!(enumerate_homs(&vb2, 5), Err(Error::DegreeCap { degree: 5, cap: 4 }));
    }

    /// Brute force over every tuple, no pruning.
    fn naive(p: &Presentation, n: usize) -> Vec<Homomorphism> {
        let all = all_permutations(n);
        let k = p.generator_count();
        let mut out = Vec::new();
        let mut idx = vec![0usize; k];
        loop {
            let h = Homomorphism {
                degree: n,
                images: idx.iter().map(|&i| all[i]).collect(),
            };
            if h.violated_relator(p).is_none() {
                out.push(h);
            }
            let mut j = k;
            loop {
                if j == 0 {
                    out.sort();
                    return out;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < all.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    #[test]
    fn pruned_search_matches_naive() {
        let vb3 = build_presentation(Family::VB, 3).unwrap();
        assert_eq!(enumerate_homs(&vb3, 3).unwrap(), naive(&vb3, 3));
        let vt3 = build_presentation(Family::VT, 3).unwrap();
        assert_eq!(enumerate_homs(&vt3, 3).unwrap(), naive(&vt3, 3));
    }

    #[test]
    fn orbit_sizes_sum_to_total() {
        let vb3 = build_presentation(Family::VB, 3).unwrap();
        let homs = enumerate_homs(&vb3, 3).unwrap();
        let classes = classify(&homs);
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<usize>(), homs.len());
        for c in &classes {
            assert_eq!(factorial(3) % c.orbit_size, 0);
            if c.surjective {
                assert_eq!(c.orbit_size, 6);
            }
        }
    }

    #[test]
    fn vb3_nonabelian_classes_are_the_table() {
        let vb3 = build_presentation(Family::VB, 3).unwrap();
        let named = named_homs(Family::VB, 3).unwrap();
        let (classes, _) = classify_presentation(&vb3, 3, &named).unwrap();
        let mut names: Vec<String> = classes
            .iter()
            .filter(|c| !c.abelian_image)
            .map(|c| c.matched_name.clone().expect("every class is named"))
            .collect();
        names.sort();
        assert_eq!(names, (1..=8).map(|i| format!("psi_{i}")).collect::<Vec<_>>());
    }

    #[test]
    fn descent_examples() {
        let vb3 = build_presentation(Family::VB, 3).unwrap();
        let forb = crate::catalog::forbidden_first(&vb3, 3);
        assert!(descends(&named_hom(Family::VB, 3, "psi_1").unwrap().hom, &forb));
        let psi7 = named_hom(Family::VB, 3, "psi_7").unwrap().hom;
        assert!(!descends(&psi7, &forb));
        assert_eq!(psi7.evaluate(&vb3.parse_word("v1 s2 s1").unwrap()), Permutation::adjacent(1, 3));
        assert_eq!(psi7.evaluate(&vb3.parse_word("s2 s1 v2").unwrap()), Permutation::adjacent(2, 3));
        assert!(descends(&Homomorphism::trivial(&vb3, 3), &forb));
    }

    #[test]
    fn kernel_equality_examples() {
        let pp = named_hom(Family::VB, 3, "pi_P").unwrap().hom;
        let u = Permutation::adjacent(1, 3);
        assert!(kernel_equal(&pp, &pp.conjugate_by(&u)));
        let psi3 = named_hom(Family::VB, 3, "psi_3").unwrap().hom;
        let psi7 = named_hom(Family::VB, 3, "psi_7").unwrap().hom;
        assert!(!kernel_equal(&pp, &psi3));
        assert!(!kernel_equal(&pp, &psi7));
        // different target degrees: S_3 acting on 3 points vs the regular-ish copy in S_4
        let lifted = Homomorphism {
            degree: 4,
            images: pp
                .images
                .iter()
                .map(|x| Permutation::from_images(&[x.image(0), x.image(1), x.image(2), 3]).unwrap())
                .collect(),
        };
        assert!(kernel_equal(&pp, &lifted));
    }

    #[test]
    fn new_validates() {
        let vb2 = build_presentation(Family::VB, 2).unwrap();
        let t = Permutation::adjacent(1, 3).compose(&Permutation::adjacent(2, 3));
        assert!(matches!(Homomorphism::new(&vb2, vec![t, t]), Err(Error::NotHomomorphism(_))));
        assert!(matches!(Homomorphism::new(&vb2, vec![t]), Err(Error::MissingImage(1))));
        assert!(Homomorphism::new(&vb2, vec![t, Permutation::identity(3)]).is_ok());
    }
}
