//! Abelian invariants of kernels of homomorphisms onto finite permutation
//! groups.
//!
//! The cosets of `Ker h` are the elements of the image, so the coset table is
//! read off directly. Each relator conjugated by each transversal element
//! is rewritten as an exponent-sum vector over the Schreier generators, and
//! the Smith form of the stacked vectors gives the invariants.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::catalog::NamedHom;
use crate::error::{Error, Result};
use crate::homsearch::{characteristic_certificate, classify_presentation, HomClass, HomFilter, Homomorphism, Verdict};
use crate::intlin::{smith_normal_form, AbInv, IntMatrix};
use crate::perms::Permutation;
use crate::words::{Letter, Presentation, Word};

#[derive(Debug, Clone)]
pub struct CosetTable {
    /// Image element of each coset; coset 0 is the identity.
    pub elements: Vec<Permutation>,
    /// `action[g][c]` is the coset `c · g`.
    pub action: Vec<Vec<usize>>,
    /// `inverse_action[g][c]` is the coset `c · g^-1`.
    pub inverse_action: Vec<Vec<usize>>,
    /// Shortlex Schreier representative of each coset.
    pub transversal: Vec<Word>,
    /// `tree[c][g]` is true when `c · g` was first reached by that edge.
    tree: Vec<Vec<bool>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_tree_edge(&self, coset: usize, generator: usize) -> bool {
        self.tree[coset][generator]
    }

    /// Column index of every Schreier generator `s_{c,g}` (non-tree edge),
    /// numbered coset-major.
    pub fn schreier_columns(&self) -> Vec<Vec<Option<usize>>> {
        let mut next = 0;
        self.tree
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&t| {
                        (!t).then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn schreier_generator_count(&self) -> usize {
        self.tree.iter().flatten().filter(|t| !**t).count()
    }

    /// Coset reached from `start` by reading `w`.
    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |c, l| {
            if l.inverse {
                self.inverse_action[l.generator][c]
            } else {
                self.action[l.generator][c]
            }
        })
    }
}

/// Breadth-first coset table of `Ker h`; generators are tried in index
/// order, so representatives are shortlex minimal.
pub fn coset_table(h: &Homomorphism) -> CosetTable {
    let k = h.images.len();
    let id = Permutation::identity(h.degree);
    let mut elements = vec![id];
    let mut transversal = vec![Word::empty()];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
    let mut tree: Vec<Vec<bool>> = vec![vec![false; k]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..k {
            let y = elements[c].compose(&h.images[g]);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                let d = elements.len();
                e.insert(d);
                elements.push(y);
                transversal.push(transversal[c].concat(&Word::generator(g)));
                tree.push(vec![false; k]);
                tree[c][g] = true;
                queue.push_back(d);
            }
        }
    }
    let action: Vec<Vec<usize>> = (0..k)
        .map(|g| elements.iter().map(|x| index[&x.compose(&h.images[g])]).collect())
        .collect();
    let mut inverse_action = vec![vec![0; elements.len()]; k];
    for g in 0..k {
        for (c, &d) in action[g].iter().enumerate() {
            inverse_action[g][d] = c;
        }
    }
    CosetTable {
        elements,
        action,
        inverse_action,
        transversal,
        tree,
    }
}

/// Exponent sums over Schreier generators of `t r t^-1`, `t` the
/// representative of `coset`.
fn rewrite(table: &CosetTable, columns: &[Vec<Option<usize>>], coset: usize, r: &Word, width: usize) -> Result<Vec<i64>> {
    let mut row = vec![0i64; width];
    let mut d = coset;
    for &Letter { generator: g, inverse } in r.letters() {
        if inverse {
            let e = table.inverse_action[g][d];
            if let Some(col) = columns[e][g] {
                row[col] -= 1;
            }
            d = e;
        } else {
            if let Some(col) = columns[d][g] {
                row[col] += 1;
            }
            d = table.action[g][d];
        }
    }
    if d != coset {
        return Err(Error::NotHomomorphism("a relator does not close up in the coset table".into()));
    }
    Ok(row)
}

/// Relation matrix of the abelianized kernel: one row per (coset,
/// relator), coset-major.
pub fn relation_matrix(p: &Presentation, table: &CosetTable) -> Result<IntMatrix> {
    let columns = table.schreier_columns();
    let width = table.schreier_generator_count();
    let blocks: Vec<Vec<Vec<i64>>> = (0..table.len())
        .into_par_iter()
        .map(|c| {
            p.relators
                .iter()
                .map(|r| rewrite(table, &columns, c, r, width))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<BigInt>> = blocks
        .into_iter()
        .flatten()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    IntMatrix::from_rows(width, rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelAb {
    pub invariants: AbInv,
    pub schreier_generators: usize,
    pub matrix_shape: (usize, usize),
    pub index: usize,
}

pub fn kernel_abelianization_report(p: &Presentation, h: &Homomorphism) -> Result<KernelAb> {
    if h.images.len() != p.generator_count() {
        return Err(Error::MissingImage(h.images.len()));
    }
    let table = coset_table(h);
    let m = relation_matrix(p, &table)?;
    let (invariants, _) = smith_normal_form(&m);
    Ok(KernelAb {
        invariants,
        schreier_generators: m.cols(),
        matrix_shape: (m.rows(), m.cols()),
        index: table.len(),
    })
}

pub fn kernel_abelianization(p: &Presentation, h: &Homomorphism) -> Result<AbInv> {
    Ok(kernel_abelianization_report(p, h)?.invariants)
}

/// Abelianization of the presented group itself, from exponent sums.
pub fn abelianization(p: &Presentation) -> AbInv {
    let rows: Vec<Vec<BigInt>> = p
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::from(0); p.generator_count()];
            for l in r.letters() {
                row[l.generator] += l.sign();
            }
            row
        })
        .collect();
    let m = IntMatrix::from_rows(p.generator_count(), rows).expect("consistent widths");
    smith_normal_form(&m).0
}

/// A certificate run: the classes kept by the filter, their kernel
/// invariants and the verdict for the target class.
#[derive(Debug, Clone)]
pub struct Certification {
    pub classes: Vec<HomClass>,
    pub invariants: Vec<AbInv>,
    pub target: usize,
    pub verdict: Verdict,
}

/// Classifies homomorphisms onto `S_n`, keeps the classes passing `filter`
/// and certifies the class containing the named homomorphism `target`.
pub fn certify(p: &Presentation, n: usize, named: &[NamedHom], target: &str, filter: HomFilter) -> Result<Certification> {
    let t = named
        .iter()
        .find(|h| h.name == target)
        .ok_or_else(|| Error::UnknownName(target.to_string()))?;
    let (classes, _) = classify_presentation(p, n, named)?;
    let canon = t.hom.canonical().0;
    let classes: Vec<HomClass> = classes
        .into_iter()
        .filter(|c| filter.keeps(c) || c.representative == canon)
        .collect();
    let target = classes
        .iter()
        .position(|c| c.representative == canon)
        .ok_or_else(|| Error::UnknownName(target.to_string()))?;
    let invariants = classes
        .par_iter()
        .map(|c| kernel_abelianization(p, &c.representative))
        .collect::<Result<Vec<_>>>()?;
    let wrapped: Vec<Option<AbInv>> = invariants.iter().cloned().map(Some).collect();
    let verdict = characteristic_certificate(&classes, target, &wrapped)?;
    Ok(Certification {
        classes,
        invariants,
        target,
        verdict,
    })
}
