//! Permutations of `{1..n}` for `n <= 6`, brute-force subgroup closure and
//! conjugacy classes of `S_n`.
//!
//! Composition convention: `compose(p, q)` applies `q` first, then `p`, and a
//! word `g1 g2 ... gk` evaluates to `h(g1) ∘ h(g2) ∘ ... ∘ h(gk)`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::words::Word;

pub const MAX_DEGREE: usize = 6;

/// A bijection of `{1..n}` stored 0-based: `images[i]` is the image of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
        let mut images = [0u8; MAX_DEGREE];
        for (i, x) in images.iter_mut().enumerate() {
            *x = i as u8;
        }
        Permutation { degree: n as u8, images }
    }

    /// One-line images, 0-based.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::DegreeCap {
                degree: n,
                cap: MAX_DEGREE,
            });
        }
        let mut seen = [false; MAX_DEGREE];
        let mut p = Permutation::identity(n);
        for (i, &x) in images.iter().enumerate() {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
            p.images[i] = x as u8;
        }
        Ok(p)
    }

    /// Product of disjoint-or-not cycles given 1-based, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let mut distinct = cycle.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != cycle.len() {
                return Err(Error::InvalidPermutation(format!("repeated point in {cycle:?}")));
            }
            let mut c = Permutation::identity(n);
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(Error::InvalidPermutation(format!("point out of range in {cycle:?}")));
                }
                c.images[a - 1] = (b - 1) as u8;
            }
            p = c.compose(&p);
        }
        Ok(p)
    }

    /// Adjacent transposition `τ_i = (i, i+1)`, `i` 1-based.
    pub fn adjacent(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n, "τ_{i} undefined in S_{n}");
        let mut p = Permutation::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Parses cycle notation such as `(1,2)(3,4)`; `()` is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let bad = || Error::InvalidPermutation(format!("cannot parse `{text}`"));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if !t.starts_with('(') || !t.ends_with(')') {
            return Err(bad());
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in t[1..t.len() - 1].split(")(") {
            if chunk.is_empty() {
                continue;
            }
            let pts = chunk
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(pts);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(n, &refs)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images[..self.degree()].iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.image(i) == i)
    }

    /// `self ∘ other`: apply `other` first. Panics on degree mismatch; see
    /// [`compose`] for the checked form.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = *self;
        for i in 0..self.degree() {
            out.images[i] = self.images[other.images[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = *self;
        for i in 0..self.degree() {
            out.images[self.images[i] as usize] = i as u8;
        }
        out
    }

    /// `g ∘ self ∘ g^-1`
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }

    /// Cycle lengths (including fixed points) in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles(true).iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Cycles as 1-based point lists, each starting at its smallest point.
    pub fn cycles(&self, include_fixed: bool) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.image(x);
            }
            if include_fixed || cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn is_involution_or_identity(&self) -> bool {
        self.compose(self).is_identity()
    }

    pub fn fixed_points(&self) -> usize {
        (0..self.degree()).filter(|&i| self.image(i) == i).count()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles(false);
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.compose(q))
}

/// Evaluates `w` with `images[g]` for generator `g`, in word order.
pub fn evaluate_word(w: &Word, images: &[Permutation]) -> Result<Permutation> {
    let degree = images.first().map(Permutation::degree).unwrap_or(0);
    if let Some(p) = images.iter().find(|p| p.degree() != degree) {
        return Err(Error::DegreeMismatch(degree, p.degree()));
    }
    let mut acc = Permutation::identity(degree);
    for l in w.letters() {
        let p = images.get(l.generator).ok_or(Error::MissingImage(l.generator))?;
        acc = if l.inverse { acc.compose(&p.inverse()) } else { acc.compose(p) };
    }
    Ok(acc)
}

/// Unchecked evaluation for hot loops; images must cover the word.
pub(crate) fn eval_fast(w: &Word, images: &[Permutation], degree: usize) -> Permutation {
    let mut acc = Permutation::identity(degree);
    for l in w.letters() {
        let p = &images[l.generator];
        acc = if l.inverse { acc.compose(&p.inverse()) } else { acc.compose(p) };
    }
    acc
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All of `S_n` in lexicographic order of one-line images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == n {
            out.push(Permutation::from_images(prefix).expect("bijection"));
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(n, prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::with_capacity(factorial(n));
    rec(n, &mut Vec::new(), &mut [false; MAX_DEGREE], &mut out);
    out
}

/// Identity and all involutions of `S_n`.
pub fn involutions(n: usize) -> Vec<Permutation> {
    all_permutations(n)
        .into_iter()
        .filter(Permutation::is_involution_or_identity)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub elements: Vec<Permutation>,
    pub is_abelian: bool,
    pub is_full_symmetric: bool,
}

impl Closure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Breadth-first closure of `gens` under composition. An empty generating set
/// needs the degree from `degree`.
pub fn closure_with_degree(gens: &[Permutation], degree: usize) -> Closure {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let is_abelian = gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)));
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    let is_full_symmetric = elements.len() == factorial(degree) && degree >= 2;
    Closure {
        elements,
        is_abelian,
        is_full_symmetric,
    }
}

pub fn closure(gens: &[Permutation]) -> Closure {
    let degree = gens.first().map(Permutation::degree).unwrap_or(0);
    closure_with_degree(gens, degree)
}

/// A conjugacy class of `S_n` given by its cycle type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: usize,
    pub cycle_type: Vec<usize>,
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn representative(n: usize, partition: &[usize]) -> Permutation {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut next = 1;
    for &len in partition {
        cycles.push((next..next + len).collect());
        next += len;
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Permutation::from_cycles(n, &refs).expect("valid cycles")
}

fn class_size(n: usize, partition: &[usize]) -> usize {
    let mut denom = 1usize;
    let mut mult = std::collections::BTreeMap::<usize, usize>::new();
    for &k in partition {
        *mult.entry(k).or_default() += 1;
    }
    for (&k, &m) in &mult {
        denom *= k.pow(m as u32) * factorial(m);
    }
    factorial(n) / denom
}

/// Conjugacy classes of `S_n`, `1 <= n <= 6`.
///
/// For `n = 4` the order is identity, `(1,2)(3,4)`, `(1,2)`, `(1,2,3,4)`,
/// `(1,2,3)`, matching the usual printed character table. Other degrees are
/// ordered by `n - #cycles`, ties broken by the partition in decreasing
/// lexicographic order.
pub fn conjugacy_classes(n: usize) -> Vec<ConjugacyClass> {
    assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
    let mut parts = partitions(n, n);
    if n == 4 {
        parts = vec![vec![1, 1, 1, 1], vec![2, 2], vec![2, 1, 1], vec![4], vec![3, 1]];
    } else {
        parts.sort_by(|a, b| (n - a.len()).cmp(&(n - b.len())).then_with(|| b.cmp(a)));
    }
    parts
        .into_iter()
        .map(|p| ConjugacyClass {
            representative: representative(n, &p),
            size: class_size(n, &p),
            cycle_type: p,
        })
        .collect()
}

/// Index into [`conjugacy_classes`] of the class containing `p`.
pub fn class_index(p: &Permutation, classes: &[ConjugacyClass]) -> usize {
    let ct = p.cycle_type();
    classes
        .iter()
        .position(|c| c.cycle_type == ct)
        .expect("every cycle type has a class")
}

/// Sorted set of distinct cycle types; used by tests as an independent check.
pub fn cycle_types(n: usize) -> BTreeSet<Vec<usize>> {
    all_permutations(n).iter().map(Permutation::cycle_type).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Letter, Word};

    fn tau(i: usize, n: usize) -> Permutation {
        Permutation::adjacent(i, n)
    }

    #[test]
    fn composition_examples() {
        assert!(compose(&tau(1, 3), &tau(1, 3)).unwrap().is_identity());
        let c = compose(&tau(1, 3), &tau(2, 3)).unwrap();
        assert_eq!(c.order(), 3);
        // right factor first: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        assert_eq!(c.to_string(), "(1,2,3)");
        let p = Permutation::parse_cycles(4, "(1,3,4)").unwrap();
        assert_eq!(compose(&p, &Permutation::identity(4)).unwrap(), p);
        assert_eq!(compose(&p, &tau(1, 3)), Err(Error::DegreeMismatch(4, 3)));
    }

    #[test]
    fn worked_example_pins_convention() {
        // τ2 τ1 τ2 τ1 = τ1 τ2
        let (t1, t2) = (tau(1, 3), tau(2, 3));
        let lhs = t2.compose(&t1).compose(&t2).compose(&t1);
        assert_eq!(lhs, t1.compose(&t2));
        assert!(!lhs.is_identity());
    }

    #[test]
    fn word_evaluation() {
        // generators s1 s2 v1 v2 with π_P images
        let imgs = [tau(1, 3), tau(2, 3), tau(1, 3), tau(2, 3)];
        let v1s1 = Word::new(vec![Letter::pos(2), Letter::pos(0)]);
        assert!(evaluate_word(&v1s1, &imgs).unwrap().is_identity());
        let w = Word::new(vec![Letter::pos(3), Letter::pos(0), Letter::pos(3), Letter::pos(2)]);
        let val = evaluate_word(&w, &imgs).unwrap();
        assert_eq!(val, tau(1, 3).compose(&tau(2, 3)));
        assert!(evaluate_word(&Word::empty(), &imgs).unwrap().is_identity());
        let missing = Word::generator(7);
        assert_eq!(evaluate_word(&missing, &imgs), Err(Error::MissingImage(7)));
        let mixed = [tau(1, 3), tau(1, 2)];
        assert!(matches!(evaluate_word(&v1s1, &mixed), Err(Error::DegreeMismatch(3, 2))));
    }

    #[test]
    fn inverse_letters_use_inverse_images() {
        let c = Permutation::parse_cycles(3, "(1,2,3)").unwrap();
        let w = Word::new(vec![Letter::neg(0)]);
        assert_eq!(evaluate_word(&w, &[c]).unwrap(), c.inverse());
    }

    #[test]
    fn closure_examples() {
        let s3 = closure(&[tau(1, 3), tau(2, 3)]);
        assert_eq!((s3.order(), s3.is_abelian, s3.is_full_symmetric), (6, false, true));
        let in_s4 = closure(&[tau(1, 4), tau(2, 4)]);
        assert_eq!((in_s4.order(), in_s4.is_abelian, in_s4.is_full_symmetric), (6, false, false));
        let trivial = closure(&[Permutation::identity(3)]);
        assert_eq!((trivial.order(), trivial.is_abelian, trivial.is_full_symmetric), (1, true, false));
    }

    #[test]
    fn s4_classes_match_table_order() {
        let classes = conjugacy_classes(4);
        let sizes: Vec<usize> = classes.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        let reps: Vec<String> = classes.iter().map(|c| c.representative.to_string()).collect();
        assert_eq!(reps, ["()", "(1,2)(3,4)", "(1,2)", "(1,2,3,4)", "(1,2,3)"]);
    }

    #[test]
    fn class_sizes_by_brute_force() {
        for n in 1..=MAX_DEGREE {
            let classes = conjugacy_classes(n);
            assert_eq!(classes.len(), cycle_types(n).len());
            let all = all_permutations(n);
            for c in &classes {
                let count = all.iter().filter(|p| p.cycle_type() == c.cycle_type).count();
                assert_eq!(count, c.size, "n={n} {:?}", c.cycle_type);
            }
            assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), factorial(n));
        }
        let s3: Vec<usize> = conjugacy_classes(3).iter().map(|c| c.size).collect();
        assert_eq!(s3, vec![1, 3, 2]);
        assert_eq!(conjugacy_classes(1).len(), 1);
    }

    #[test]
    fn cycle_notation_round_trip() {
        for p in all_permutations(5) {
            assert_eq!(Permutation::parse_cycles(5, &p.to_string()).unwrap(), p);
        }
        assert!(Permutation::parse_cycles(3, "(1,1)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,4)").is_err());
        assert!(Permutation::parse_cycles(3, "1,2").is_err());
    }

    #[test]
    fn involution_count() {
        // 1 + 6 + 3 in S4
        assert_eq!(involutions(4).len(), 10);
        assert_eq!(involutions(3).len(), 4);
    }
}
