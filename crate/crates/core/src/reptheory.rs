//! Rational character theory of `S_n` on the pair module, with the full
//! character table for `n = 4`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::crystal::PairModule;
use crate::error::{Error, Result};
use crate::intlin::{determinant, hermite_rows, saturation, snf, IntMatrix, Transforms};
use crate::perms::{all_permutations, class_index, conjugacy_classes, factorial, Permutation};

/// Values on the classes of [`conjugacy_classes`], in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub degree: usize,
    pub values: Vec<BigRational>,
}

pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl ClassFunction {
    pub fn new(degree: usize, values: Vec<BigRational>) -> Result<Self> {
        let k = conjugacy_classes(degree).len();
        if values.len() != k {
            return Err(Error::Dimension(format!(
                "class function of S_{degree} needs {k} values, got {}",
                values.len()
            )));
        }
        Ok(ClassFunction { degree, values })
    }

    pub fn from_ints(degree: usize, values: &[i64]) -> Result<Self> {
        Self::new(degree, values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn at(&self, g: &Permutation) -> &BigRational {
        &self.values[class_index(g, &conjugacy_classes(self.degree))]
    }

    pub fn rendered(&self) -> Vec<String> {
        self.values.iter().map(render_rational).collect()
    }
}

impl fmt::Display for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.rendered().join(", "))
    }
}

const S4_TABLE: [[i64; 5]; 5] = [
    [1, 1, 1, 1, 1],
    [1, 1, -1, -1, 1],
    [2, 2, 0, 0, -1],
    [3, -1, 1, -1, 0],
    [3, -1, -1, 1, 0],
];

/// Irreducible characters of `S_4`: trivial, sign, the degree-two
/// character, standard, standard times sign.
pub fn s4_character_table() -> Vec<ClassFunction> {
    S4_TABLE
        .iter()
        .map(|row| ClassFunction::from_ints(4, row).expect("five classes"))
        .collect()
}

/// Fixed-pair counts on class representatives.
pub fn permutation_character(module: &PairModule) -> ClassFunction {
    let n = module.degree();
    let values = conjugacy_classes(n)
        .iter()
        .map(|c| BigRational::from_integer(module.trace(&c.representative).into()))
        .collect();
    ClassFunction { degree: n, values }
}

pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<BigRational> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(a.degree, b.degree));
    }
    let classes = conjugacy_classes(a.degree);
    let sum = classes
        .iter()
        .zip(&a.values)
        .zip(&b.values)
        .fold(BigRational::zero(), |acc, ((c, x), y)| {
            acc + BigRational::from_integer(c.size.into()) * x * y
        });
    Ok(sum / BigRational::from_integer(factorial(a.degree).into()))
}

/// Multiplicities of the irreducible characters of `S_4` in `a`.
pub fn decompose(a: &ClassFunction) -> Result<Vec<i64>> {
    if a.degree != 4 {
        return Err(Error::Unsupported(format!("character table only for S_4, got S_{}", a.degree)));
    }
    let table = s4_character_table();
    let mut mult = Vec::new();
    for (i, chi) in table.iter().enumerate() {
        let m = inner_product(a, chi)?;
        if !m.is_integer() {
            return Err(Error::NonIntegralMultiplicity(i + 1));
        }
        mult.push(m.to_integer().to_i64().expect("small multiplicity"));
    }
    for (k, value) in a.values.iter().enumerate() {
        let rebuilt: BigRational = table
            .iter()
            .zip(&mult)
            .map(|(chi, &m)| BigRational::from_integer(m.into()) * &chi.values[k])
            .sum();
        if &rebuilt != value {
            return Err(Error::NonIntegralMultiplicity(0));
        }
    }
    Ok(mult)
}

pub type RationalMatrix = Vec<Vec<BigRational>>;

fn check_components(components: &[usize]) -> Result<()> {
    match components.iter().find(|&&c| !(1..=5).contains(&c)) {
        Some(c) => Err(Error::Unsupported(format!("component {c} is not one of 1..5"))),
        None => Ok(()),
    }
}

/// `Σ_{i ∈ components} (χ_i(1)/24) Σ_g χ_i(g^-1) A(g)`, acting on column
/// vectors.
pub fn isotypic_projector(module: &PairModule, components: &[usize]) -> Result<RationalMatrix> {
    if module.degree() != 4 {
        return Err(Error::Unsupported("isotypic projectors need the degree-4 pair module".into()));
    }
    check_components(components)?;
    let table = s4_character_table();
    let classes = conjugacy_classes(4);
    let m = module.dimension();
    // coefficient of A(g) depends only on the class of g
    let weights: Vec<BigRational> = (0..classes.len())
        .map(|k| {
            components.iter().fold(BigRational::zero(), |acc, &i| {
                let chi = &table[i - 1];
                acc + &chi.values[0] * &chi.values[k] / BigRational::from_integer(24.into())
            })
        })
        .collect();
    let mut p = vec![vec![BigRational::zero(); m]; m];
    for g in all_permutations(4) {
        // g and g^-1 are conjugate in S_n, so χ(g^-1) = χ(g)
        let w = &weights[class_index(&g, &classes)];
        if w.is_zero() {
            continue;
        }
        for (k, t) in module.basis_permutation(&g).into_iter().enumerate() {
            p[t][k] += w;
        }
    }
    Ok(p)
}

/// Saturated integer basis (rows) of the image of the projector.
pub fn isotypic_sublattice(module: &PairModule, components: &[usize]) -> Result<IntMatrix> {
    let p = isotypic_projector(module, components)?;
    let m = module.dimension();
    let denom = p.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let columns: Vec<Vec<BigInt>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| (&p[i][j] * BigRational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let span = hermite_rows(&IntMatrix::from_rows(m, columns)?);
    if span.rows() == 0 {
        return Ok(span);
    }
    saturation(&span)
}

/// Index in `Z^m` of the sum of the isotypic sublattices for `components`
/// and for the remaining irreducibles. The two are complementary over `Q`,
/// so the index is finite; it is 1 exactly when they split the lattice.
pub fn complement_index(module: &PairModule, components: &[usize]) -> Result<BigInt> {
    let k = s4_character_table().len();
    let rest: Vec<usize> = (1..=k).filter(|c| !components.contains(c)).collect();
    let a = isotypic_sublattice(module, components)?;
    let b = isotypic_sublattice(module, &rest)?;
    let stacked = if a.rows() == 0 {
        b
    } else if b.rows() == 0 {
        a
    } else {
        a.vstack(&b)?
    };
    if stacked.rows() != module.dimension() {
        return Err(Error::DependentRows);
    }
    Ok(determinant(&stacked)?.abs())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientAction {
    pub rank: usize,
    /// Induced matrix of each class representative, on column vectors.
    pub matrices: Vec<(Permutation, IntMatrix)>,
    pub faithful: bool,
    pub character: ClassFunction,
    /// Character of the action restricted to the sublattice.
    pub sub_character: ClassFunction,
}

fn row_times(x: &[BigInt], r: &IntMatrix) -> Vec<BigInt> {
    r.left_apply(x).expect("matching width")
}

/// Action of `S_n` induced on `Z^m / L` for a saturated invariant
/// sublattice `L` given by basis rows.
pub fn quotient_action(module: &PairModule, sublattice: &IntMatrix) -> Result<QuotientAction> {
    let n = module.degree();
    let m = module.dimension();
    if sublattice.cols() != m {
        return Err(Error::Dimension(format!(
            "sublattice has width {}, module has dimension {m}",
            sublattice.cols()
        )));
    }
    let s = snf(
        sublattice,
        Transforms {
            right: true,
            right_inv: true,
            ..Default::default()
        },
    );
    let r = s.rank();
    if r != sublattice.rows() {
        return Err(Error::DependentRows);
    }
    if s.diagonal.iter().any(|d| !d.abs().is_one()) {
        return Err(Error::QuotientTorsion);
    }
    let right = s.right.expect("requested");
    let right_inv = s.right_inv.expect("requested");
    // x = c R^-1, so the coordinates of x are x R; the first r rows of R^-1
    // span L and the rest give the quotient basis
    let coords = |x: &[BigInt]| row_times(x, &right);
    let acting = |g: &Permutation, x: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); m];
        for (k, t) in module.basis_permutation(g).into_iter().enumerate() {
            out[t] = x[k].clone();
        }
        out
    };
    let gens: Vec<Permutation> = (1..n).map(|i| Permutation::adjacent(i, n)).collect();
    for g in &gens {
        for b in sublattice.row_vecs() {
            if coords(&acting(g, b))[r..].iter().any(|c| !c.is_zero()) {
                return Err(Error::NotInvariant);
            }
        }
    }
    let induced = |g: &Permutation, range: std::ops::Range<usize>| -> IntMatrix {
        let size = range.len();
        let mut b = IntMatrix::zeros(size, size);
        for (col, k) in range.clone().enumerate() {
            let image = coords(&acting(g, right_inv.row(k)));
            for (row, v) in image[range.clone()].iter().enumerate() {
                b.set(row, col, v.clone());
            }
        }
        b
    };
    let trace = |b: &IntMatrix| -> BigRational { BigRational::from_integer((0..b.rows()).map(|i| b.get(i, i).clone()).sum()) };
    let classes = conjugacy_classes(n);
    let matrices: Vec<(Permutation, IntMatrix)> = classes
        .iter()
        .map(|c| (c.representative, induced(&c.representative, r..m)))
        .collect();
    let character = ClassFunction {
        degree: n,
        values: matrices.iter().map(|(_, b)| trace(b)).collect(),
    };
    let sub_character = ClassFunction {
        degree: n,
        values: classes.iter().map(|c| trace(&induced(&c.representative, 0..r))).collect(),
    };
    let identity = IntMatrix::identity(m - r);
    let faithful = m > r
        && all_permutations(n)
            .iter()
            .filter(|g| !g.is_identity())
            .all(|g| induced(g, r..m) != identity);
    Ok(QuotientAction {
        rank: m - r,
        matrices,
        faithful,
        character,
        sub_character,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::perm_module;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn table_rows() {
        let t = s4_character_table();
        assert_eq!(t[0].to_string(), "(1, 1, 1, 1, 1)");
        assert_eq!(t[4].to_string(), "(3, -1, -1, 1, 0)");
        for (i, a) in t.iter().enumerate() {
            for (j, b) in t.iter().enumerate() {
                assert_eq!(inner_product(a, b).unwrap(), q((i == j) as i64));
            }
        }
    }

    #[test]
    fn permutation_characters() {
        let chi = permutation_character(&perm_module(4).unwrap());
        assert_eq!(chi, ClassFunction::from_ints(4, &[12, 0, 2, 0, 0]).unwrap());
        assert_eq!(permutation_character(&perm_module(2).unwrap()).to_string(), "(2, 0)");
        let t = s4_character_table();
        let products: Vec<BigRational> = t.iter().map(|c| inner_product(&chi, c).unwrap()).collect();
        assert_eq!(products, [1, 0, 1, 2, 1].map(q));
        assert_eq!(decompose(&chi).unwrap(), vec![1, 0, 1, 2, 1]);
    }

    #[test]
    fn degree_three_by_brute_force() {
        let module = perm_module(3).unwrap();
        let chi = permutation_character(&module);
        let classes = conjugacy_classes(3);
        for (c, v) in classes.iter().zip(&chi.values) {
            let g = c.representative;
            let fixed = (1..=3)
                .flat_map(|i| (1..=3).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && g.image(i - 1) + 1 == i && g.image(j - 1) + 1 == j)
                .count();
            assert_eq!(*v, q(fixed as i64));
        }
    }

    #[test]
    fn complement_index_matches_cokernel_order() {
        let module = perm_module(4).unwrap();
        assert_eq!(complement_index(&module, &[1, 2, 3, 4, 5]).unwrap(), BigInt::one());
        for comps in [vec![1, 3, 4], vec![5], vec![1], vec![4]] {
            let rest: Vec<usize> = (1..=5).filter(|c| !comps.contains(c)).collect();
            let stacked = isotypic_sublattice(&module, &comps)
                .unwrap()
                .vstack(&isotypic_sublattice(&module, &rest).unwrap())
                .unwrap();
            let (inv, _) = crate::intlin::smith_normal_form(&stacked);
            assert_eq!(inv.free_rank, 0);
            assert_eq!(Some(complement_index(&module, &comps).unwrap()), inv.order());
        }
    }

    #[test]
    fn decompose_rejects_non_characters() {
        let half = ClassFunction::new(4, vec![BigRational::new(1.into(), 2.into()); 5]).unwrap();
        assert!(matches!(decompose(&half), Err(Error::NonIntegralMultiplicity(_))));
        let regular = ClassFunction::from_ints(4, &[24, 0, 0, 0, 0]).unwrap();
        assert_eq!(decompose(&regular).unwrap(), vec![1, 1, 2, 3, 3]);
        let chi2 = ClassFunction::from_ints(2, &[1, 1]).unwrap();
        assert!(matches!(
            inner_product(&chi2, &s4_character_table()[0]),
            Err(Error::DegreeMismatch(2, 4))
        ));
    }

    #[test]
    fn projectors_are_complete_and_idempotent() {
        let module = perm_module(4).unwrap();
        let all = isotypic_projector(&module, &[1, 2, 3, 4, 5]).unwrap();
        for (i, row) in all.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, q((i == j) as i64));
            }
        }
        let p = isotypic_projector(&module, &[1, 3, 4]).unwrap();
        let m = p.len();
        for i in 0..m {
            for j in 0..m {
                let v: BigRational = (0..m).map(|k| &p[i][k] * &p[k][j]).sum();
                assert_eq!(v, p[i][j]);
            }
        }
    }

    #[test]
    fn isotypic_ranks_and_quotients() {
        let module = perm_module(4).unwrap();
        let v = isotypic_sublattice(&module, &[1, 3, 4]).unwrap();
        assert_eq!(v.rows(), 9);
        let w = isotypic_sublattice(&module, &[5]).unwrap();
        assert_eq!(w.rows(), 3);
        assert_eq!(isotypic_sublattice(&module, &[1, 2, 3, 4, 5]).unwrap().rows(), 12);
        assert_eq!(isotypic_sublattice(&module, &[2]).unwrap().rows(), 0);

        let qv = quotient_action(&module, &v).unwrap();
        assert_eq!(qv.rank, 3);
        assert!(qv.faithful);
        assert_eq!(qv.character, s4_character_table()[4]);
        let chi = permutation_character(&module);
        for k in 0..5 {
            assert_eq!(&qv.character.values[k] + &qv.sub_character.values[k], chi.values[k]);
        }

        let qw = quotient_action(&module, &w).unwrap();
        assert_eq!(qw.rank, 9);
        assert_eq!(qw.character, ClassFunction::from_ints(4, &[9, 1, 3, -1, 0]).unwrap());

        let full = quotient_action(&module, &IntMatrix::identity(12)).unwrap();
        assert_eq!(full.rank, 0);
        assert!(!full.faithful);
    }

    #[test]
    fn quotient_errors() {
        let module = perm_module(4).unwrap();
        let mut e = vec![BigInt::zero(); 12];
        e[0] = BigInt::one();
        let line = IntMatrix::from_rows(12, vec![e.clone()]).unwrap();
        assert_eq!(quotient_action(&module, &line).unwrap_err(), Error::NotInvariant);
        e[0] = BigInt::from(2);
        let doubled = IntMatrix::from_rows(12, vec![e]).unwrap();
        assert_eq!(quotient_action(&module, &doubled).unwrap_err(), Error::QuotientTorsion);
    }
}
