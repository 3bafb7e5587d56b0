//! Exact integer linear algebra over arbitrary-precision integers: Smith
//! normal form with transforms, abelian invariants, lattice membership,
//! saturation, integer kernels and row Hermite form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("row of length {} in {cols}-column matrix", r.len())));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension(format!(
                "row of length {} in {}-column matrix",
                row.len(),
                self.cols
            )));
        }
        self.data.push(row);
        self.rows += 1;
        Ok(())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.data[k][j].is_zero() {
                        out.data[i][j] += a * &other.data[k][j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * &self.data[i][j];
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("{} vs {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.data.iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Invariants of a finitely generated abelian group: free rank plus torsion
/// coefficients `d1 | d2 | ...`, each greater than one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbInv {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

fn prime_power_factors(mut n: BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut q = BigInt::one();
        while (&n % &p).is_zero() {
            n /= &p;
            q *= &p;
        }
        if !q.is_one() {
            out.push(q);
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

impl AbInv {
    pub fn free(rank: usize) -> Self {
        AbInv {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the canonical divisibility chain from arbitrary nonnegative
    /// diagonal entries; zeros count towards the free rank.
    pub fn from_diagonal(free_rank: usize, entries: &[BigInt]) -> Self {
        let mut primes: std::collections::BTreeMap<BigInt, Vec<BigInt>> = Default::default();
        let mut free = free_rank;
        for d in entries {
            if d.is_zero() {
                free += 1;
                continue;
            }
            for q in prime_power_factors(d.abs()) {
                let mut p = BigInt::from(2);
                while !(&q % &p).is_zero() {
                    p += 1;
                }
                primes.entry(p).or_default().push(q);
            }
        }
        let len = primes.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = vec![BigInt::one(); len];
        for powers in primes.values_mut() {
            powers.sort();
            // largest powers go to the end of the chain
            for (k, q) in powers.iter().rev().enumerate() {
                chain[len - 1 - k] *= q;
            }
        }
        AbInv {
            free_rank: free,
            torsion: chain,
        }
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// GAP `AbelianInvariants` style: zeros for the free part, then the
    /// prime-power torsion factors in ascending order.
    pub fn gap_format(&self) -> String {
        let mut items: Vec<BigInt> = vec![BigInt::zero(); self.free_rank];
        let mut factors: Vec<BigInt> = self.torsion.iter().flat_map(|d| prime_power_factors(d.clone())).collect();
        factors.sort();
        items.extend(factors);
        if items.is_empty() {
            return "[  ]".to_string();
        }
        let cells: Vec<String> = items.iter().map(ToString::to_string).collect();
        format!("[ {} ]", cells.join(", "))
    }
}

impl fmt::Display for AbInv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z_{d}") } else { format!("(Z_{d})^{run}") });
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Result of a Smith normal form computation: `left · M · right = D` with
/// `D` diagonal, entries `diagonal[0] | diagonal[1] | ...` positive, and
/// `right_inv = right^-1`. Transforms are present only when requested.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
    pub right_inv: Option<IntMatrix>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariants of `Z^cols / rowspace(M)`.
    pub fn cokernel(&self) -> AbInv {
        let torsion: Vec<BigInt> = self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
        AbInv {
            free_rank: self.cols - self.rank(),
            torsion,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Transforms {
    pub left: bool,
    pub right: bool,
    pub right_inv: bool,
}

struct SnfCalc {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    left: Option<Vec<Vec<BigInt>>>,
    right: Option<Vec<Vec<BigInt>>>,
    right_inv: Option<Vec<Vec<BigInt>>>,
}

fn eye(n: usize) -> Vec<Vec<BigInt>> {
    IntMatrix::identity(n).data
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(l) = &mut self.left {
            l.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in &mut self.a {
            r.swap(i, j);
        }
        if let Some(r) = &mut self.right {
            for row in r.iter_mut() {
                row.swap(i, j);
            }
        }
        if let Some(ri) = &mut self.right_inv {
            ri.swap(i, j);
        }
    }

    /// row_i += k · row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        let (src, dst) = pick(&mut self.a, j, i);
        axpy(dst, src, k);
        if let Some(l) = &mut self.left {
            let (src, dst) = pick(l, j, i);
            axpy(dst, src, k);
        }
    }

    /// col_i += k · col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in &mut self.a {
            let v = &r[j] * k;
            r[i] += v;
        }
        if let Some(r) = &mut self.right {
            for row in r.iter_mut() {
                let v = &row[j] * k;
                row[i] += v;
            }
        }
        if let Some(ri) = &mut self.right_inv {
            // inverse column operation acts on rows of right^-1: row_j -= k · row_i
            let neg = -k;
            let (src, dst) = pick(ri, i, j);
            axpy(dst, src, &neg);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(l) = &mut self.left {
            for x in &mut l[i] {
                *x = -&*x;
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs: Option<BigInt> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best_abs.as_ref().is_none_or(|b| &ax < b) {
                    let one = ax.is_one();
                    best_abs = Some(ax);
                    best = Some((i, j));
                    if one {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let mut diag = Vec::new();
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // clear column t
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.add_row(i, t, &-q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.add_col(j, t, &-q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t);
                let mut best_abs = self.a[t][t].abs();
                for i in t + 1..self.rows {
                    let x = self.a[i][t].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = (i, t);
                    }
                }
                for j in t + 1..self.cols {
                    let x = self.a[t][j].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            // divisibility: fold an offending row into row t and redo
            let p = self.a[t][t].clone();
            let offending = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !(&self.a[i][j] % &p).is_zero()));
            if let Some(i) = offending {
                self.add_row(t, i, &BigInt::one());
                continue;
            }
            if p.is_negative() {
                self.negate_row(t);
            }
            diag.push(self.a[t][t].clone());
            t += 1;
        }
        diag
    }
}

fn pick<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += s * k;
        }
    }
}

/// Smith normal form with the requested transforms.
pub fn snf(m: &IntMatrix, want: Transforms) -> Snf {
    let mut calc = SnfCalc {
        a: m.data.clone(),
        rows: m.rows,
        cols: m.cols,
        left: want.left.then(|| eye(m.rows)),
        right: want.right.then(|| eye(m.cols)),
        right_inv: want.right_inv.then(|| eye(m.cols)),
    };
    let diagonal = calc.run();
    let wrap = |d: Option<Vec<Vec<BigInt>>>, n: usize| d.map(|data| IntMatrix { rows: n, cols: n, data });
    Snf {
        diagonal,
        rows: m.rows,
        cols: m.cols,
        left: wrap(calc.left, m.rows),
        right: wrap(calc.right, m.cols),
        right_inv: wrap(calc.right_inv, m.cols),
    }
}

/// Invariants of the cokernel `Z^cols / rowspace(M)` and the rank of `M`.
pub fn smith_normal_form(m: &IntMatrix) -> (AbInv, usize) {
    let s = snf(m, Transforms::default());
    (s.cokernel(), s.rank())
}

/// Is `v` an integer combination of the rows of `basis`?
pub fn lattice_membership(v: &[BigInt], basis: &IntMatrix) -> Result<bool> {
    if v.len() != basis.cols {
        return Err(Error::Dimension(format!("vector of length {} in Z^{}", v.len(), basis.cols)));
    }
    let s = snf(
        basis,
        Transforms {
            right: true,
            ..Default::default()
        },
    );
    let right = s.right.as_ref().expect("requested");
    let w = right.left_apply(v)?;
    let r = s.rank();
    Ok(w.iter()
        .enumerate()
        .all(|(i, x)| if i < r { (x % &s.diagonal[i]).is_zero() } else { x.is_zero() }))
}

/// Precomputed Smith form of `M` for repeated solves of `M t = b`.
#[derive(Debug, Clone)]
pub struct IntegerSolver {
    snf: Snf,
}

impl IntegerSolver {
    pub fn new(m: &IntMatrix) -> Self {
        IntegerSolver {
            snf: snf(
                m,
                Transforms {
                    left: true,
                    right: true,
                    right_inv: false,
                },
            ),
        }
    }

    /// Some integer `t` with `M t = b`, or `None` when there is none.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let s = &self.snf;
        if b.len() != s.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                s.rows
            )));
        }
        let left = s.left.as_ref().expect("requested");
        let right = s.right.as_ref().expect("requested");
        // y = L b
        let y: Vec<BigInt> = (0..s.rows).map(|i| left.row(i).iter().zip(b).map(|(a, x)| a * x).sum()).collect();
        let r = s.rank();
        if y[r..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let mut z = vec![BigInt::zero(); s.cols];
        for i in 0..r {
            let (q, rem) = y[i].div_rem(&s.diagonal[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        }
        Ok(Some(
            (0..s.cols).map(|i| right.row(i).iter().zip(&z).map(|(a, x)| a * x).sum()).collect(),
        ))
    }
}

/// Some integer solution of `M t = b`.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    IntegerSolver::new(m).solve(b)
}

/// Basis (in row Hermite form) of `(Q-span of rows) ∩ Z^cols`.
pub fn saturation(basis: &IntMatrix) -> Result<IntMatrix> {
    let s = snf(
        basis,
        Transforms {
            right_inv: true,
            ..Default::default()
        },
    );
    if s.rank() != basis.rows {
        return Err(Error::DependentRows);
    }
    let ri = s.right_inv.expect("requested");
    let rows: Vec<Vec<BigInt>> = ri.data.into_iter().take(s.diagonal.len()).collect();
    Ok(hermite_rows(&IntMatrix::from_rows(basis.cols, rows)?))
}

/// Basis of `{x ∈ Z^cols : M x = 0}`, one vector per row, in Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = snf(
        m,
        Transforms {
            right: true,
            ..Default::default()
        },
    );
    let right = s.right.expect("requested");
    let r = s.diagonal.len();
    let rows: Vec<Vec<BigInt>> = (r..m.cols)
        .map(|j| (0..m.cols).map(|i| right.data[i][j].clone()).collect())
        .collect();
    hermite_rows(&IntMatrix {
        rows: rows.len(),
        cols: m.cols,
        data: rows,
    })
}

/// Row-style Hermite normal form of the row lattice; zero rows dropped.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.data.clone();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..m.cols {
        if pivot_row >= a.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..a.len() {
                if !a[i][col].is_zero() && best.is_none_or(|b| a[i][col].abs() < a[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut clean = true;
            for i in pivot_row + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[pivot_row][col]);
                let (src, dst) = pick(&mut a, pivot_row, i);
                axpy(dst, src, &-q);
                if !a[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if pivot_row < a.len() && !a[pivot_row][col].is_zero() {
            if a[pivot_row][col].is_negative() {
                for x in &mut a[pivot_row] {
                    *x = -&*x;
                }
            }
            for i in 0..pivot_row {
                let q = a[i][col].div_floor(&a[pivot_row][col]);
                if !q.is_zero() {
                    let (src, dst) = pick(&mut a, pivot_row, i);
                    axpy(dst, src, &-q);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
    }
    a.truncate(pivot_row);
    IntMatrix {
        rows: a.len(),
        cols: m.cols,
        data: a,
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("{}x{} is not square", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.data.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
