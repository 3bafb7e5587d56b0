//! Crystallographic quotient models `Z^m ⋊ S_n` on the permutation module of
//! ordered pairs.
//!
//! A permutation `w` acts by `e_(i,j) ↦ e_(w(i),w(j))`, which is a
//! homomorphism for the composition convention of [`crate::perms`].
//! Elements multiply as `(x, w)(y, u) = (x + A(w) y, w u)`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::catalog::Family;
use crate::error::{Error, Result};
use crate::intlin::{integer_kernel, smith_normal_form, IntMatrix, IntegerSolver};
use crate::perms::{all_permutations, Permutation, MAX_DEGREE};
use crate::words::{Presentation, Word};

/// The permutation module on ordered pairs `(i, j)`, `i != j`, of
/// `{1..n}`, basis in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairModule {
    n: usize,
    labels: Vec<(usize, usize)>,
}

impl PairModule {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(Error::Unsupported(format!("pair module of degree {n}")));
        }
        let labels = (1..=n)
            .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        Ok(PairModule { n, labels })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> String {
        let (i, j) = self.labels[k];
        format!("l_{i}_{j}")
    }

    /// Basis index of the pair `(i, j)` (1-based points).
    pub fn index(&self, i: usize, j: usize) -> usize {
        let n = self.n;
        (i - 1) * (n - 1) + if j < i { j - 1 } else { j - 2 }
    }

    pub fn unit(&self, i: usize, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.dimension()];
        v[self.index(i, j)] = 1;
        v
    }

    /// Where each basis vector goes under `w`.
    pub fn basis_permutation(&self, w: &Permutation) -> Vec<usize> {
        self.labels
            .iter()
            .map(|&(i, j)| self.index(w.image(i - 1) + 1, w.image(j - 1) + 1))
            .collect()
    }

    pub fn apply(&self, w: &Permutation, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; x.len()];
        for (k, target) in self.basis_permutation(w).into_iter().enumerate() {
            out[target] = x[k];
        }
        out
    }

    /// The 0/1 matrix of `w` acting on column vectors.
    pub fn matrix(&self, w: &Permutation) -> IntMatrix {
        let m = self.dimension();
        let mut a = IntMatrix::zeros(m, m);
        for (k, target) in self.basis_permutation(w).into_iter().enumerate() {
            a.set(target, k, BigInt::from(1));
        }
        a
    }

    /// Number of pairs fixed by `w`, the trace of its matrix.
    pub fn trace(&self, w: &Permutation) -> usize {
        self.basis_permutation(w).into_iter().enumerate().filter(|(k, t)| k == t).count()
    }
}

pub fn perm_module(n: usize) -> Result<PairModule> {
    PairModule::new(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub vector: Vec<i64>,
    pub perm: Permutation,
}

impl AffineElement {
    pub fn new(vector: Vec<i64>, perm: Permutation) -> Self {
        AffineElement { vector, perm }
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vector.iter().map(ToString::to_string).collect();
        write!(f, "([{}], {})", v.join(", "), self.perm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// How a model's assignment was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveInfo {
    /// Rank of the lattice of all solutions of the relator system.
    pub solution_rank: usize,
    /// The orbit of the chosen vectors spans `Z^m`.
    pub generates_lattice: bool,
    /// More than one independent solution direction exists.
    pub underdetermined: bool,
}

#[derive(Debug, Clone)]
pub struct CrystModel {
    pub module: PairModule,
    pub presentation: Presentation,
    pub assignment: Vec<Option<AffineElement>>,
    pub info: SolveInfo,
}

fn add(a: &mut [i64], b: &[i64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.checked_add(*y).expect("lattice coordinate overflow");
    }
}

impl CrystModel {
    /// Builds a model from an explicit assignment and checks every relator.
    pub fn new(presentation: Presentation, module: PairModule, assignment: Vec<Option<AffineElement>>) -> Result<Self> {
        let info = SolveInfo {
            solution_rank: 0,
            generates_lattice: true,
            underdetermined: false,
        };
        let model = CrystModel {
            module,
            presentation,
            assignment,
            info,
        };
        if let Some(i) = model.failing_relators()?.first() {
            return Err(Error::RelatorViolation {
                name: model.presentation.name.clone(),
                relator: *i,
            });
        }
        Ok(model)
    }

    pub fn degree(&self) -> usize {
        self.module.degree()
    }

    pub fn dimension(&self) -> usize {
        self.module.dimension()
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement::new(vec![0; self.dimension()], Permutation::identity(self.degree()))
    }

    pub fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let mut v = a.vector.clone();
        add(&mut v, &self.module.apply(&a.perm, &b.vector));
        AffineElement::new(v, a.perm.compose(&b.perm))
    }

    pub fn inverse(&self, a: &AffineElement) -> AffineElement {
        let winv = a.perm.inverse();
        let v = self.module.apply(&winv, &a.vector).into_iter().map(|x| -x).collect();
        AffineElement::new(v, winv)
    }

    pub fn pow(&self, a: &AffineElement, k: usize) -> AffineElement {
        (0..k).fold(self.identity(), |acc, _| self.mul(&acc, a))
    }

    pub fn generator(&self, g: usize) -> Result<&AffineElement> {
        self.assignment
            .get(g)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Unassigned(self.presentation.generators.get(g).map_or(format!("#{g}"), |x| x.name.clone())))
    }

    /// Indices of relators that do not evaluate to the identity.
    pub fn failing_relators(&self) -> Result<Vec<usize>> {
        let id = self.identity();
        let mut out = Vec::new();
        for (i, r) in self.presentation.relators.iter().enumerate() {
            if eval_affine(r, self)? != id {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.presentation.parse_word(text)
    }
}

/// Left-to-right product of the assigned elements.
pub fn eval_affine(w: &Word, m: &CrystModel) -> Result<AffineElement> {
    let mut acc = m.identity();
    for l in w.letters() {
        let g = m.generator(l.generator)?;
        if l.inverse {
            acc = m.mul(&acc, &m.inverse(g));
        } else {
            acc = m.mul(&acc, g);
        }
    }
    Ok(acc)
}

pub fn element_order(e: &AffineElement, m: &CrystModel) -> Order {
    let k = e.perm.order();
    let mut sum = vec![0i64; e.vector.len()];
    let mut power = Permutation::identity(m.degree());
    for _ in 0..k {
        add(&mut sum, &m.module.apply(&power, &e.vector));
        power = power.compose(&e.perm);
    }
    if sum.iter().all(|&x| x == 0) {
        Order::Finite(k)
    } else {
        Order::Infinite
    }
}

pub fn verify_identity(w1: &Word, w2: &Word, m: &CrystModel) -> Result<bool> {
    Ok(eval_affine(w1, m)? == eval_affine(w2, m)?)
}

/// A conjugator `(t, u)` with `(t, u) e1 (t, u)^-1 = e2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub u: Permutation,
    pub t: Vec<i64>,
}

/// Conjugacy test against a fixed target, with the Smith form of
/// `I - A(c)` precomputed.
pub struct ConjugacyOracle<'a> {
    model: &'a CrystModel,
    target: AffineElement,
    solver: IntegerSolver,
    conjugators: Vec<Permutation>,
}

impl<'a> ConjugacyOracle<'a> {
    pub fn new(model: &'a CrystModel, target: AffineElement) -> Self {
        let m = model.dimension();
        let mut a = IntMatrix::identity(m);
        for (k, t) in model.module.basis_permutation(&target.perm).into_iter().enumerate() {
            let v = a.get(t, k) - 1;
            a.set(t, k, v);
        }
        ConjugacyOracle {
            model,
            solver: IntegerSolver::new(&a),
            conjugators: all_permutations(model.degree()),
            target,
        }
    }

    pub fn witness(&self, e: &AffineElement) -> Option<Witness> {
        for u in &self.conjugators {
            if e.perm.conjugate_by(u) != self.target.perm {
                continue;
            }
            let moved = self.model.module.apply(u, &e.vector);
            let b: Vec<BigInt> = self.target.vector.iter().zip(&moved).map(|(x, y)| BigInt::from(x - y)).collect();
            if let Some(t) = self.solver.solve(&b).expect("consistent dimensions") {
                let t = t.iter().map(|x| x.to_i64().expect("small conjugator")).collect();
                return Some(Witness { u: *u, t });
            }
        }
        None
    }
}

pub fn conjugate_test(e1: &AffineElement, e2: &AffineElement, m: &CrystModel) -> Option<Witness> {
    ConjugacyOracle::new(m, e2.clone()).witness(e1)
}

/// Outcome of the bounded search for order-3 elements not conjugate to a
/// fixed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxReport {
    pub scanned: usize,
    pub order_three: usize,
    pub conjugate: usize,
    pub failures: Vec<AffineElement>,
}

impl BoxReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.order_three == self.conjugate
    }
}

/// Scans every `(x, c)` with `c` a 3-cycle and coordinates of `x` in
/// `[-bound, bound]`; each element of order 3 must be conjugate to `gamma`.
pub fn order_three_box(m: &CrystModel, gamma: &AffineElement, bound: i64) -> BoxReport {
    let oracle = ConjugacyOracle::new(m, gamma.clone());
    let dim = m.dimension();
    let cycles: Vec<Permutation> = all_permutations(m.degree())
        .into_iter()
        .filter(|p| p.cycle_type().iter().filter(|&&c| c > 1).eq([3].iter()))
        .collect();
    let mut report = BoxReport {
        scanned: 0,
        order_three: 0,
        conjugate: 0,
        failures: Vec::new(),
    };
    let width = (2 * bound + 1) as usize;
    let total = width.pow(dim as u32);
    for c in &cycles {
        for code in 0..total {
            let mut rest = code;
            let x: Vec<i64> = (0..dim)
                .map(|_| {
                    let d = (rest % width) as i64 - bound;
                    rest /= width;
                    d
                })
                .collect();
            let e = AffineElement::new(x, *c);
            report.scanned += 1;
            if element_order(&e, m) != Order::Finite(3) {
                continue;
            }
            report.order_three += 1;
            if oracle.witness(&e).is_some() {
                report.conjugate += 1;
            } else if report.failures.len() < 8 {
                report.failures.push(e);
            }
        }
    }
    report
}

enum Role {
    Sigma(usize),
    Fixed(usize),
}

fn roles(p: &Presentation, n: usize) -> Result<Vec<Role>> {
    p.generator_names()
        .iter()
        .map(|name| {
            let (kind, idx) = name.split_at(1);
            let i: usize = idx
                .parse()
                .map_err(|_| Error::Unsupported(format!("generator `{name}` in a crystal model")))?;
            if i == 0 || i >= n {
                return Err(Error::Unsupported(format!("generator `{name}` for degree {n}")));
            }
            match kind {
                "s" => Ok(Role::Sigma(i)),
                "v" | "r" => Ok(Role::Fixed(i)),
                _ => Err(Error::Unsupported(format!("generator `{name}` in a crystal model"))),
            }
        })
        .collect()
}

/// Linear system for the σ-vectors plus the σ generator indices.
fn relator_system(p: &Presentation, module: &PairModule, roles: &[Role]) -> Result<(IntMatrix, Vec<usize>)> {
    let n = module.degree();
    let m = module.dimension();
    let sigma: Vec<usize> = roles
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, Role::Sigma(_)))
        .map(|(g, _)| g)
        .collect();
    let block = |g: usize| sigma.iter().position(|&s| s == g);
    let perm = |g: usize| match roles[g] {
        Role::Sigma(i) | Role::Fixed(i) => Permutation::adjacent(i, n),
    };
    let mut rows = Vec::new();
    for r in &p.relators {
        let mut eq = vec![vec![0i64; sigma.len() * m]; m];
        let mut acc = Permutation::identity(n);
        for l in r.letters() {
            let t = perm(l.generator);
            if l.inverse {
                acc = acc.compose(&t.inverse());
            }
            if let Some(b) = block(l.generator) {
                for (k, target) in module.basis_permutation(&acc).into_iter().enumerate() {
                    eq[target][b * m + k] += l.sign();
                }
            }
            if !l.inverse {
                acc = acc.compose(&t);
            }
        }
        if !acc.is_identity() {
            return Err(Error::NoSolution);
        }
        rows.extend(eq);
    }
    let big: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    Ok((IntMatrix::from_rows(sigma.len() * m, big)?, sigma))
}

/// Does the `S_n`-orbit of the given vectors span `Z^m`?
fn generates(module: &PairModule, vectors: &[&[i64]]) -> bool {
    let gens: Vec<Permutation> = (1..module.degree()).map(|i| Permutation::adjacent(i, module.degree())).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut stack: Vec<Vec<i64>> = vectors.iter().map(|v| v.to_vec()).filter(|v| v.iter().any(|&x| x != 0)).collect();
    while let Some(v) = stack.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        for g in &gens {
            let w = module.apply(g, &v);
            if !seen.contains(&w) {
                stack.push(w);
            }
        }
    }
    if seen.is_empty() {
        return false;
    }
    let rows: Vec<Vec<BigInt>> = seen.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect();
    let m = IntMatrix::from_rows(module.dimension(), rows).expect("consistent widths");
    let (inv, _) = smith_normal_form(&m);
    inv.free_rank == 0 && inv.torsion.is_empty()
}

/// Largest solution-lattice rank for which the `{-1,0,1}` box is searched.
const BOX_RANK_CAP: usize = 11;

struct Solutions {
    module: PairModule,
    /// Generator index of each σ block.
    sigma: Vec<usize>,
    vectors: Vec<Vec<i64>>,
    rank: usize,
}

/// Solutions of the σ-vector system whose orbit spans the lattice, in
/// preference order: smallest support first, then lexicographically
/// largest. At most `limit` are returned.
fn generating_solutions(p: &Presentation, n: usize, limit: usize) -> Result<Solutions> {
    let module = perm_module(n)?;
    let roles = roles(p, n)?;
    let (system, sigma) = relator_system(p, &module, &roles)?;
    let basis: Vec<Vec<i64>> = integer_kernel(&system)
        .to_i64_rows()
        .ok_or_else(|| Error::Dimension("solution basis exceeds 64-bit range".into()))?;
    let rank = basis.len();
    if rank == 0 {
        return Err(Error::NoSolution);
    }
    if rank > BOX_RANK_CAP {
        return Err(Error::Unsupported(format!(
            "solution lattice of rank {rank} is too large to search"
        )));
    }
    let width = system.cols();
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let total = 3usize.pow(rank as u32);
    for code in 1..total {
        let mut rest = code;
        let mut y = vec![0i64; width];
        for b in &basis {
            let c = (rest % 3) as i64 - 1;
            rest /= 3;
            if c != 0 {
                for (acc, x) in y.iter_mut().zip(b) {
                    *acc += c * x;
                }
            }
        }
        if y.iter().any(|&x| x != 0) {
            candidates.push(y);
        }
    }
    candidates.sort_by(|a, b| {
        let sa = a.iter().filter(|&&x| x != 0).count();
        let sb = b.iter().filter(|&&x| x != 0).count();
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    candidates.dedup();
    let m = module.dimension();
    let mut chosen = Vec::new();
    for y in candidates {
        let parts: Vec<&[i64]> = y.chunks(m).collect();
        if generates(&module, &parts) {
            chosen.push(y);
            if chosen.len() == limit {
                break;
            }
        }
    }
    if chosen.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(Solutions {
        module,
        sigma,
        vectors: chosen,
        rank,
    })
}

fn model_from_solution(p: &Presentation, module: PairModule, sigma: &[usize], y: &[i64], rank: usize) -> Result<CrystModel> {
    let n = module.degree();
    let m = module.dimension();
    let roles = roles(p, n)?;
    let assignment = roles
        .iter()
        .enumerate()
        .map(|(g, r)| {
            Some(match *r {
                Role::Sigma(i) => {
                    let b = sigma.iter().position(|&s| s == g).expect("sigma block");
                    AffineElement::new(y[b * m..(b + 1) * m].to_vec(), Permutation::adjacent(i, n))
                }
                Role::Fixed(i) => AffineElement::new(vec![0; m], Permutation::adjacent(i, n)),
            })
        })
        .collect();
    let mut model = CrystModel::new(p.clone(), module, assignment)?;
    model.info = SolveInfo {
        solution_rank: rank,
        generates_lattice: true,
        underdetermined: rank > 1,
    };
    Ok(model)
}

/// Solves for σ-vectors making every relator trivial, with the virtual (or
/// twin) generators sent to `(0, τ_i)` and `σ_i` to `(x_i, τ_i)`. The zero
/// solution is excluded by requiring the orbit of the `x_i` to span `Z^m`.
pub fn solve_assignment(p: &Presentation, n: usize) -> Result<CrystModel> {
    let s = generating_solutions(p, n, 1)?;
    model_from_solution(p, s.module, &s.sigma, &s.vectors[0], s.rank)
}

/// The first `count` admissible models in preference order.
pub fn alternative_models(p: &Presentation, n: usize, count: usize) -> Result<Vec<CrystModel>> {
    let s = generating_solutions(p, n, count)?;
    s.vectors
        .iter()
        .map(|y| model_from_solution(p, s.module.clone(), &s.sigma, y, s.rank))
        .collect()
}

/// Models of the presentations that are already given in lattice form:
/// lattice generators `l_i_j ↦ (e_(i,j), 1)`, `v_k ↦ (0, τ_k)`.
pub fn lattice_model(family: Family) -> Result<CrystModel> {
    let n = match family {
        Family::WallpaperG => 2,
        Family::VB3ModVP3Comm => 3,
        _ => return Err(Error::Unsupported(format!("no lattice model for {family}"))),
    };
    let p = crate::catalog::build_presentation(family, 0)?;
    let module = perm_module(n)?;
    let m = module.dimension();
    let assignment = p
        .generator_names()
        .iter()
        .map(|name| {
            if let Some(k) = name.strip_prefix('v') {
                let k: usize = k.parse().ok()?;
                Some(AffineElement::new(vec![0; m], Permutation::adjacent(k, n)))
            } else {
                let mut parts = name.strip_prefix("l_")?.split('_');
                let i: usize = parts.next()?.parse().ok()?;
                let j: usize = parts.next()?.parse().ok()?;
                Some(AffineElement::new(module.unit(i, j), Permutation::identity(n)))
            }
        })
        .collect();
    CrystModel::new(p, module, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_presentation;

    #[test]
    fn module_shapes() {
        let m4 = perm_module(4).unwrap();
        assert_eq!(m4.dimension(), 12);
        assert_eq!(m4.trace(&Permutation::adjacent(1, 4)), 2);
        let m2 = perm_module(2).unwrap();
        assert_eq!(m2.apply(&Permutation::adjacent(1, 2), &[1, 0]), vec![0, 1]);
        for (k, &(i, j)) in m4.labels().iter().enumerate() {
            assert_eq!(m4.index(i, j), k);
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let module = perm_module(3).unwrap();
        let all = all_permutations(3);
        for p in &all {
            for q in &all {
                let lhs = module.matrix(p).mul(&module.matrix(q)).unwrap();
                assert_eq!(lhs, module.matrix(&p.compose(q)));
            }
        }
    }

    #[test]
    fn vb3_model() {
        let p = build_presentation(Family::VB, 3).unwrap();
        let m = solve_assignment(&p, 3).unwrap();
        assert!(m.failing_relators().unwrap().is_empty());
        assert!(m.info.generates_lattice);
        let s1 = m.generator(0).unwrap();
        assert_eq!(s1.vector, m.module.unit(1, 2));
        let gamma = eval_affine(&p.parse_word("v1 v2").unwrap(), &m).unwrap();
        assert_eq!(element_order(&gamma, &m), Order::Finite(3));
        assert_eq!(
            element_order(&eval_affine(&p.parse_word("s1").unwrap(), &m).unwrap(), &m),
            Order::Infinite
        );
    }

    #[test]
    fn lattice_models() {
        let g = lattice_model(Family::WallpaperG).unwrap();
        let q = lattice_model(Family::VB3ModVP3Comm).unwrap();
        let e = eval_affine(&q.parse("v1 l_1_2 v1").unwrap(), &q).unwrap();
        assert_eq!(e, AffineElement::new(q.module.unit(2, 1), Permutation::identity(3)));
        assert_eq!(eval_affine(&q.parse("v1 v1").unwrap(), &q).unwrap(), q.identity());
        let l = eval_affine(&g.parse("l_1_2").unwrap(), &g).unwrap();
        assert_eq!(element_order(&l, &g), Order::Infinite);
        assert!(matches!(
            eval_affine(
                &g.parse("v1").unwrap(),
                &CrystModel {
                    assignment: vec![None; 3],
                    ..g.clone()
                }
            ),
            Err(Error::Unassigned(_))
        ));
    }

    #[test]
    fn conjugacy_examples() {
        let p = build_presentation(Family::VB, 3).unwrap();
        let m = solve_assignment(&p, 3).unwrap();
        let v1 = eval_affine(&p.parse_word("v1").unwrap(), &m).unwrap();
        let v2 = eval_affine(&p.parse_word("v2").unwrap(), &m).unwrap();
        assert!(conjugate_test(&v1, &v2, &m).is_some());
        let lam = AffineElement::new(m.module.unit(1, 2), Permutation::identity(3));
        assert!(conjugate_test(&m.identity(), &lam, &m).is_none());
    }

    #[test]
    fn witness_conjugates() {
        let p = build_presentation(Family::VB, 3).unwrap();
        let m = solve_assignment(&p, 3).unwrap();
        let gamma = eval_affine(&p.parse_word("v1 v2").unwrap(), &m).unwrap();
        let e = eval_affine(&p.parse_word("s1 v2 v1 s1^-1").unwrap(), &m).unwrap();
        let w = conjugate_test(&e, &gamma, &m).expect("conjugate");
        let c = AffineElement::new(w.t, w.u);
        assert_eq!(m.mul(&m.mul(&c, &e), &m.inverse(&c)), gamma);
    }

    #[test]
    fn squared_sigma_input() {
        let base = build_presentation(Family::VB, 3).unwrap();
        let mut rels = base.relators.clone();
        rels.push(base.parse_word("s1 s1").unwrap());
        let p = Presentation::new("VB3_sq", &base.generator_names(), rels).unwrap();
        match solve_assignment(&p, 3) {
            Ok(m) => assert!(m.failing_relators().unwrap().is_empty()),
            Err(e) => assert_eq!(e, Error::NoSolution),
        }
    }

    #[test]
    fn larger_models() {
        for n in [4, 5] {
            let p = build_presentation(Family::VB, n).unwrap();
            let m = solve_assignment(&p, n).unwrap();
            assert_eq!(m.dimension(), n * (n - 1));
            assert!(m.failing_relators().unwrap().is_empty());
            for i in 1..n {
                assert_eq!(m.generator(i - 1).unwrap().vector, m.module.unit(i, i + 1));
            }
        }
    }

    #[test]
    fn forbidden_chains_hold_in_degree_five() {
        let p = build_presentation(Family::VB, 5).unwrap();
        let m = solve_assignment(&p, 5).unwrap();
        let chains = crate::catalog::forbidden_image_chains(5).unwrap();
        assert_eq!(chains.len(), 12);
        for (label, chain) in chains {
            for w in &chain[1..] {
                assert!(verify_identity(&chain[0], w, &m).unwrap(), "{label}");
            }
        }
    }

    #[test]
    fn quotient_families_admit_models() {
        for family in [Family::WB, Family::UVB] {
            let p = build_presentation(family, 3).unwrap();
            let m = solve_assignment(&p, 3).unwrap();
            assert!(m.failing_relators().unwrap().is_empty(), "{family}");
        }
        // s_i^2 = 1 forces antisymmetric vectors, whose orbit has finite index
        let vt = build_presentation(Family::VT, 3).unwrap();
        assert_eq!(solve_assignment(&vt, 3).unwrap_err(), Error::NoSolution);
    }

    #[test]
    fn facts_agree_across_solutions() {
        let p = build_presentation(Family::VB, 3).unwrap();
        let models = alternative_models(&p, 3, 3).unwrap();
        assert_eq!(models.len(), 3);
        let gamma_word = p.parse_word("v1 v2").unwrap();
        for m in &models {
            assert!(m.info.underdetermined);
            assert!(m.failing_relators().unwrap().is_empty());
            let gamma = eval_affine(&gamma_word, m).unwrap();
            assert_eq!(element_order(&gamma, m), Order::Finite(3));
            assert!(order_three_box(m, &gamma, 1).passed());
        }
        let p5 = build_presentation(Family::VB, 5).unwrap();
        let chains = crate::catalog::forbidden_image_chains(5).unwrap();
        for m in alternative_models(&p5, 5, 3).unwrap() {
            for (_, chain) in &chains {
                assert!(chain[1..].iter().all(|w| verify_identity(&chain[0], w, &m).unwrap()));
            }
        }
    }

    #[test]
    fn order_three_box_small() {
        let p = build_presentation(Family::VB, 3).unwrap();
        let m = solve_assignment(&p, 3).unwrap();
        let gamma = eval_affine(&p.parse_word("v1 v2").unwrap(), &m).unwrap();
        let r = order_three_box(&m, &gamma, 1);
        assert_eq!(r.scanned, 2 * 3usize.pow(6));
        assert!(r.order_three > 0);
        assert!(r.passed());
    }
}
