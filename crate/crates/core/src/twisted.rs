//! Twisted conjugacy classes `x ~ z x α(z)^-1`: brute force on finite
//! groups, `|det(I - A)|` on lattices, and finite quotient towers
//! `(Z_k)^m ⋊ S_n` of crystallographic models.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::NamedEndo;
use crate::crystal::{eval_affine, AffineElement, CrystModel};
use crate::error::{Error, Result};
use crate::intlin::{determinant, smith_normal_form, IntMatrix};
use crate::perms::{all_permutations, Permutation};

/// Largest finite group handled by brute force.
pub const TABLE_CAP: usize = 20_000;

/// A finite group with an endomorphism, as far as orbit counting needs it.
pub trait TwistedGroup {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn endo(&self, a: usize) -> usize;
    /// Elements `z` whose moves `x ↦ z x α(z)^-1` generate all moves.
    fn twisters(&self) -> Vec<usize>;
}

/// Explicit Cayley table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub mul: Vec<Vec<usize>>,
    pub endo: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    pub fn new(mul: Vec<Vec<usize>>, endo: Vec<usize>) -> Result<Self> {
        let size = mul.len();
        if size == 0 || size > TABLE_CAP {
            return Err(Error::TableCap { size, cap: TABLE_CAP });
        }
        if mul.iter().any(|r| r.len() != size || r.iter().any(|&x| x >= size)) || endo.len() != size {
            return Err(Error::Dimension("multiplication table is not square over its elements".into()));
        }
        if (0..size).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return Err(Error::NotHomomorphism("element 0 is not the identity".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(size as u64);
        for _ in 0..256 {
            let (a, b, c) = (rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size));
            if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                return Err(Error::NotHomomorphism(format!("table is not associative at ({a}, {b}, {c})")));
            }
        }
        let mut inverse = vec![usize::MAX; size];
        for a in 0..size {
            inverse[a] = (0..size)
                .find(|&b| mul[a][b] == 0)
                .ok_or_else(|| Error::NotHomomorphism(format!("element {a} has no inverse")))?;
        }
        if endo.iter().any(|&x| x >= size) {
            return Err(Error::NotHomomorphism("endomorphism leaves the group".into()));
        }
        for a in 0..size {
            for b in 0..size {
                if endo[mul[a][b]] != mul[endo[a]][endo[b]] {
                    return Err(Error::NotHomomorphism(format!("endo fails on ({a}, {b})")));
                }
            }
        }
        Ok(FiniteGroupTable { mul, endo, inverse })
    }

    pub fn with_endo(&self, endo: Vec<usize>) -> Result<Self> {
        Self::new(self.mul.clone(), endo)
    }

    /// `S_n` with elements in lexicographic order and the given endomorphism
    /// (identity when `None`).
    pub fn symmetric(n: usize, endo: Option<&dyn Fn(&Permutation) -> Permutation>) -> Result<Self> {
        let mut elements = all_permutations(n);
        let id = Permutation::identity(n);
        elements.retain(|p| *p != id);
        elements.insert(0, id);
        let index: HashMap<Permutation, usize> = elements.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let map = elements.iter().map(|p| index[&endo.map_or(*p, |f| f(p))]).collect();
        Self::new(mul, map)
    }

    /// `Z_{d_1} × … × Z_{d_r}` with the endomorphism sending `e_j` to
    /// column `j` of `a`. Elements are mixed-radix, first coordinate fastest.
    pub fn abelian(orders: &[u64], a: &[Vec<i64>]) -> Result<Self> {
        let r = orders.len();
        if a.len() != r || a.iter().any(|row| row.len() != r) || orders.contains(&0) {
            return Err(Error::Dimension("endomorphism matrix must be square over the factors".into()));
        }
        let size = orders
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .unwrap_or(usize::MAX);
        if size > TABLE_CAP {
            return Err(Error::TableCap { size, cap: TABLE_CAP });
        }
        let decode = |mut x: usize| -> Vec<i64> {
            orders
                .iter()
                .map(|&d| {
                    let c = (x % d as usize) as i64;
                    x /= d as usize;
                    c
                })
                .collect()
        };
        let encode = |v: &[i64]| -> usize {
            v.iter()
                .zip(orders)
                .rev()
                .fold(0usize, |acc, (&c, &d)| acc * d as usize + c.rem_euclid(d as i64) as usize)
        };
        let coords: Vec<Vec<i64>> = (0..size).map(decode).collect();
        let mul = coords
            .iter()
            .map(|x| {
                coords
                    .iter()
                    .map(|y| encode(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let endo = coords
            .iter()
            .map(|x| encode(&(0..r).map(|i| (0..r).map(|j| a[i][j] * x[j]).sum()).collect::<Vec<_>>()))
            .collect();
        Self::new(mul, endo)
    }
}

impl TwistedGroup for FiniteGroupTable {
    fn order(&self) -> usize {
        self.mul.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    fn endo(&self, a: usize) -> usize {
        self.endo[a]
    }
    fn twisters(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Number of Reidemeister classes, by union-find over `x ~ z x α(z)^-1`.
pub fn twisted_classes_finite<G: TwistedGroup + ?Sized>(g: &G) -> usize {
    let size = g.order();
    let mut parent: Vec<usize> = (0..size).collect();
    let mut classes = size;
    for z in g.twisters() {
        let right = g.inv(g.endo(z));
        for x in 0..size {
            let y = g.mul(g.mul(z, x), right);
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a] = b;
                classes -= 1;
            }
        }
    }
    classes
}

/// Order of `coker(I - A)` on `Z_{d_1} × … × Z_{d_r}`, from a Smith form.
pub fn abelian_twisted_count(orders: &[u64], a: &[Vec<i64>]) -> Result<BigInt> {
    let r = orders.len();
    // rows generate the subgroup (I - A) Z^r + diag(d) Z^r
    let mut rows: Vec<Vec<i64>> = (0..r).map(|j| (0..r).map(|i| (i == j) as i64 - a[i][j]).collect()).collect();
    rows.extend((0..r).map(|i| (0..r).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect()));
    let (inv, _) = smith_normal_form(&IntMatrix::from_i64(r, &rows)?);
    inv.order().ok_or_else(|| Error::Dimension("cokernel is infinite".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reidemeister {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Reidemeister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reidemeister::Finite(k) => write!(f, "{k}"),
            Reidemeister::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// `|det(I - A)|`, or infinite when it vanishes.
pub fn reidemeister_lattice(a: &IntMatrix) -> Result<Reidemeister> {
    let m = a.rows();
    if a.cols() != m {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m, a.cols())));
    }
    let mut d = IntMatrix::identity(m);
    for i in 0..m {
        for j in 0..m {
            let v = d.get(i, j) - a.get(i, j);
            d.set(i, j, v);
        }
    }
    let det = determinant(&d)?;
    Ok(if det.is_zero() {
        Reidemeister::Infinite
    } else {
        Reidemeister::Finite(det.abs())
    })
}

/// The finite quotient `(Z_k)^m ⋊ S_n` of a model, restricted to the
/// subgroup generated by the model's generators, with the endomorphism
/// induced by an endomorphism of the presentation.
#[derive(Debug, Clone)]
pub struct ModelQuotient {
    pub k: usize,
    elements: Vec<AffineElement>,
    index: HashMap<AffineElement, usize>,
    generators: Vec<usize>,
    endo: Vec<usize>,
    model: CrystModel,
}

impl ModelQuotient {
    pub fn new(model: &CrystModel, endo: &NamedEndo, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Unsupported(format!("modulus {k} must be at least 2")));
        }
        let full = (k as u128).pow(model.dimension() as u32) * crate::perms::factorial(model.degree()) as u128;
        if full > TABLE_CAP as u128 {
            return Err(Error::TableCap {
                size: full.min(usize::MAX as u128) as usize,
                cap: TABLE_CAP,
            });
        }
        if endo.images.len() != model.presentation.generator_count() {
            return Err(Error::MissingImage(endo.images.len()));
        }
        let reduce = |e: AffineElement| AffineElement::new(e.vector.iter().map(|x| x.rem_euclid(k as i64)).collect(), e.perm);
        let gens: Vec<AffineElement> = (0..model.presentation.generator_count())
            .map(|g| model.generator(g).cloned().map(reduce))
            .collect::<Result<_>>()?;
        let images: Vec<AffineElement> = endo
            .images
            .iter()
            .map(|w| eval_affine(w, model).map(reduce))
            .collect::<Result<_>>()?;
        let mul = |a: &AffineElement, b: &AffineElement| reduce(model.mul(a, b));
        let id = model.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id.clone(), 0usize)]);
        let mut map = vec![id];
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            let fx = map[head].clone();
            for (g, img) in gens.iter().zip(&images) {
                let y = mul(&x, g);
                let fy = mul(&fx, img);
                match index.get(&y) {
                    Some(&j) => {
                        if map[j] != fy {
                            return Err(Error::DoesNotDescend(k as u64));
                        }
                    }
                    None => {
                        index.insert(y.clone(), elements.len());
                        elements.push(y);
                        map.push(fy);
                    }
                }
            }
            head += 1;
        }
        let endo_idx = map
            .iter()
            .map(|e| index.get(e).copied().ok_or(Error::DoesNotDescend(k as u64)))
            .collect::<Result<Vec<_>>>()?;
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(ModelQuotient {
            k,
            elements,
            index,
            generators,
            endo: endo_idx,
            model: model.clone(),
        })
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }
}

impl TwistedGroup for ModelQuotient {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.model.mul(&self.elements[a], &self.elements[b]);
        let p = AffineElement::new(p.vector.iter().map(|x| x.rem_euclid(self.k as i64)).collect(), p.perm);
        self.index[&p]
    }
    fn inv(&self, a: usize) -> usize {
        let p = self.model.inverse(&self.elements[a]);
        let p = AffineElement::new(p.vector.iter().map(|x| x.rem_euclid(self.k as i64)).collect(), p.perm);
        self.index[&p]
    }
    fn endo(&self, a: usize) -> usize {
        self.endo[a]
    }
    fn twisters(&self) -> Vec<usize> {
        self.generators.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerVerdict {
    EvidenceConsistent,
    Inconsistent,
    Inconclusive,
}

impl TowerVerdict {
    pub fn label(self) -> &'static str {
        match self {
            TowerVerdict::EvidenceConsistent => "EVIDENCE_CONSISTENT",
            TowerVerdict::Inconsistent => "INCONSISTENT",
            TowerVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerEntry {
    pub k: usize,
    pub elements: usize,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub entries: Vec<TowerEntry>,
    /// Counts never drop from `k` to a multiple of `k`.
    pub monotone: bool,
    /// Counts strictly increase along the given `ks`.
    pub increasing: bool,
    pub verdict: TowerVerdict,
}

/// Reidemeister counts of the finite quotients for each `k`. Strict growth
/// is consistent with infinitely many classes; a drop along a divisibility
/// pair contradicts the projection argument.
pub fn quotient_tower(model: &CrystModel, endo: &NamedEndo, ks: &[usize]) -> Result<Tower> {
    let entries = ks
        .par_iter()
        .map(|&k| {
            let q = ModelQuotient::new(model, endo, k)?;
            Ok(TowerEntry {
                k,
                elements: q.order(),
                classes: twisted_classes_finite(&q),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = entries
        .iter()
        .all(|a| entries.iter().all(|b| b.k % a.k != 0 || b.classes >= a.classes));
    let increasing = entries.windows(2).all(|w| w[1].classes > w[0].classes);
    let verdict = if !monotone {
        TowerVerdict::Inconsistent
    } else if increasing && entries.len() > 1 {
        TowerVerdict::EvidenceConsistent
    } else {
        TowerVerdict::Inconclusive
    };
    Ok(Tower {
        entries,
        monotone,
        increasing,
        verdict,
    })
}

/// A random abelian group with an endomorphism: factor orders in `2..=max`
/// and matrix entries constrained so the map is well defined.
pub fn random_abelian_instance(rng: &mut impl Rng, factors: usize, max: u64) -> (Vec<u64>, Vec<Vec<i64>>) {
    let orders: Vec<u64> = (0..factors).map(|_| rng.gen_range(2..=max)).collect();
    let a = (0..factors)
        .map(|i| {
            (0..factors)
                .map(|j| {
                    // e_j has order d_j, so its image component in Z_{d_i} needs d_i | d_j a_ij
                    let step = orders[i] / num_integer::gcd(orders[i], orders[j]);
                    rng.gen_range(0..orders[i] as i64) * step as i64 % orders[i] as i64
                })
                .collect()
        })
        .collect();
    (orders, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{identity_endo, named_endo, Family};
    use crate::crystal::{lattice_model, solve_assignment};
    use crate::perms::conjugacy_classes;

    #[test]
    fn small_examples() {
        let s3 = FiniteGroupTable::symmetric(3, None).unwrap();
        assert_eq!(twisted_classes_finite(&s3), 3);
        let z5 = FiniteGroupTable::abelian(&[5], &[vec![2]]).unwrap();
        assert_eq!(twisted_classes_finite(&z5), 1);
        let v4 = FiniteGroupTable::abelian(&[2, 2], &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(twisted_classes_finite(&v4), 2);
    }

    #[test]
    fn identity_counts_conjugacy_classes() {
        for n in 1..=4 {
            let t = FiniteGroupTable::symmetric(n, None).unwrap();
            assert_eq!(twisted_classes_finite(&t), conjugacy_classes(n).len());
        }
    }

    #[test]
    fn inner_twist_of_s3() {
        let c = Permutation::adjacent(1, 3);
        let f = move |p: &Permutation| p.conjugate_by(&c);
        let t = FiniteGroupTable::symmetric(3, Some(&f)).unwrap();
        assert_eq!(twisted_classes_finite(&t), 3);
    }

    #[test]
    fn bad_endo_rejected() {
        let z4 = FiniteGroupTable::abelian(&[4], &[vec![1]]).unwrap();
        let mut endo = z4.endo.clone();
        endo[1] = 2;
        assert!(matches!(z4.with_endo(endo), Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(reidemeister_lattice(&IntMatrix::identity(3)).unwrap(), Reidemeister::Infinite);
        assert_eq!(
            reidemeister_lattice(&IntMatrix::from_i64(1, &[vec![-1]]).unwrap()).unwrap(),
            Reidemeister::Finite(2.into())
        );
        let swap = IntMatrix::from_i64(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(reidemeister_lattice(&swap).unwrap(), Reidemeister::Infinite);
        assert!(reidemeister_lattice(&IntMatrix::zeros(1, 2)).is_err());
        // negation on Z: the classes are the residues mod 2
        let z = FiniteGroupTable::abelian(&[6], &[vec![-1]]).unwrap();
        assert_eq!(twisted_classes_finite(&z), 2);
    }

    #[test]
    fn lattice_count_matches_quotients() {
        let a = vec![vec![2, 1], vec![1, 1]];
        let det = match reidemeister_lattice(&IntMatrix::from_i64(2, &a).unwrap()).unwrap() {
            Reidemeister::Finite(d) => d,
            Reidemeister::Infinite => unreachable!(),
        };
        assert_eq!(det, BigInt::from(1));
        let b = vec![vec![-1, 0], vec![0, 3]];
        let d = match reidemeister_lattice(&IntMatrix::from_i64(2, &b).unwrap()).unwrap() {
            Reidemeister::Finite(d) => d,
            Reidemeister::Infinite => unreachable!(),
        };
        assert_eq!(d, BigInt::from(4));
        for k in [4u64, 8, 12] {
            let t = FiniteGroupTable::abelian(&[k, k], &b).unwrap();
            assert_eq!(BigInt::from(twisted_classes_finite(&t)), d);
        }
    }

    #[test]
    fn abelian_cross_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let factors = rng.gen_range(1..=3);
            let (orders, a) = random_abelian_instance(&mut rng, factors, 6);
            let t = FiniteGroupTable::abelian(&orders, &a).unwrap();
            assert_eq!(
                BigInt::from(twisted_classes_finite(&t)),
                abelian_twisted_count(&orders, &a).unwrap()
            );
        }
    }

    #[test]
    fn wallpaper_towers() {
        let g = lattice_model(Family::WallpaperG).unwrap();
        for endo in [identity_endo(&g.presentation), named_endo(Family::WallpaperG, 0, "swap").unwrap()] {
            let t = quotient_tower(&g, &endo, &[2, 3, 4, 5]).unwrap();
            assert_eq!(t.entries.iter().map(|e| e.elements).collect::<Vec<_>>(), vec![8, 18, 32, 50]);
            assert!(t.monotone && t.increasing, "{:?}", t);
            assert_eq!(t.verdict, TowerVerdict::EvidenceConsistent);
        }
    }

    #[test]
    fn quotient_matches_table_brute_force() {
        let g = lattice_model(Family::WallpaperG).unwrap();
        let q = ModelQuotient::new(&g, &identity_endo(&g.presentation), 3).unwrap();
        let n = q.order();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| q.mul(a, b)).collect()).collect();
        let t = FiniteGroupTable::new(mul, (0..n).collect()).unwrap();
        assert_eq!(twisted_classes_finite(&t), twisted_classes_finite(&q));
    }

    #[test]
    fn tower_errors() {
        let g = lattice_model(Family::WallpaperG).unwrap();
        // l_1_2 ↦ l_1_2 and v1 ↦ 1 does not respect v1 l_1_2 v1 = l_2_1 mod k
        let mut bad = identity_endo(&g.presentation);
        let v1 = g.presentation.generator_index("v1").unwrap();
        bad.images[v1] = crate::words::Word::empty();
        let l21 = g.presentation.generator_index("l_2_1").unwrap();
        bad.images[l21] = g.parse("l_1_2").unwrap();
        let l12 = g.presentation.generator_index("l_1_2").unwrap();
        bad.images[l12] = g.parse("l_1_2 l_1_2").unwrap();
        assert!(matches!(
            quotient_tower(&g, &bad, &[2]),
            Err(Error::DoesNotDescend(2)) | Err(Error::NotHomomorphism(_))
        ));
        let vb3 = crate::catalog::build_presentation(Family::VB, 3).unwrap();
        let m = solve_assignment(&vb3, 3).unwrap();
        let id = identity_endo(&vb3);
        assert!(matches!(quotient_tower(&m, &id, &[4]), Err(Error::TableCap { .. })));
        assert_eq!(quotient_tower(&m, &id, &[2]).unwrap().entries[0].elements, 64 * 6);
    }
}
