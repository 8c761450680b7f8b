//! Linear algebra over GF(q) used as ground truth for every polynomial-side
//! computation: row spaces, Galois duals, intersections and minimum distance.

use alloc::{sync::Arc, vec, vec::Vec};
use core::fmt;

use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::num;
use crate::polyring::same_field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("budget exhausted; minimum distance lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: usize, upper: usize },
    #[error("enumeration found d = {enumerated} but column search found d = {column}")]
    StrategyDisagreement { enumerated: usize, column: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<_> = self.row(i).iter().map(|&c| self.field.display(c)).collect();
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: &Arc<Field>, cols: usize, rows: &[Vec<Fe>]) -> Result<Matrix, MatrixError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::ShapeMismatch("ragged rows"));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Entry-wise `c -> c^(p^k)`.
    pub fn frobenius(&self, k: u32) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&c| f.frobenius(c, k)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if !same_field(&self.field, &other.field) {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch("inner dimensions differ"));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if !same_field(&self.field, &other.field) {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch("column counts differ"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{x : self * x^T = 0}`.
    pub fn null_space(&self) -> Matrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (t, &fc) in free.iter().enumerate() {
            out.set(t, fc, Fe::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(t, pc, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Some `x` with `self * x^T = b`, if one exists.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let f = &self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, bi);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }
}

/// A linear code stored as the reduced echelon basis of its row space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMatrix {
    basis: Matrix,
}

impl GeneratorMatrix {
    pub fn new(m: &Matrix) -> GeneratorMatrix {
        GeneratorMatrix { basis: m.rref().0 }
    }

    pub fn from_rows(field: &Arc<Field>, n: usize, rows: &[Vec<Fe>]) -> Result<GeneratorMatrix, MatrixError> {
        Ok(GeneratorMatrix::new(&Matrix::from_rows(field, n, rows)?))
    }

    pub fn zero(field: &Arc<Field>, n: usize) -> GeneratorMatrix {
        GeneratorMatrix { basis: Matrix::zeros(field, 0, n) }
    }

    pub fn full(field: &Arc<Field>, n: usize) -> GeneratorMatrix {
        GeneratorMatrix { basis: Matrix::identity(field, n) }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.basis.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn len(&self) -> usize {
        self.basis.cols
    }

    pub fn is_empty(&self) -> bool {
        self.basis.rows == 0
    }

    /// The canonical reduced echelon basis.
    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let m = Matrix::from_rows(self.field(), self.len(), &[v.to_vec()]).expect("length");
        self.basis.vstack(&m).map(|s| s.rank() == self.dim()).unwrap_or(false)
    }

    pub fn is_subcode_of(&self, other: &GeneratorMatrix) -> Result<bool, MatrixError> {
        Ok(sum(self, other)?.dim() == other.dim())
    }
}

fn compatible(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<(), MatrixError> {
    if !same_field(a.field(), b.field()) {
        return Err(MatrixError::FieldMismatch);
    }
    if a.len() != b.len() {
        return Err(MatrixError::ShapeMismatch("code lengths differ"));
    }
    Ok(())
}

pub fn row_space_equal(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<bool, MatrixError> {
    compatible(a, b)?;
    Ok(a.basis == b.basis)
}

/// `{x : sum_i x_i c_i^(p^k) = 0 for every codeword c}`.
pub fn galois_dual_matrix(g: &GeneratorMatrix, k: u32) -> GeneratorMatrix {
    GeneratorMatrix::new(&g.basis.frobenius(k).null_space())
}

pub fn sum(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<GeneratorMatrix, MatrixError> {
    compatible(a, b)?;
    Ok(GeneratorMatrix::new(&a.basis.vstack(&b.basis)?))
}

/// Solves `x A + y B = 0`; each solution gives the common vector `x A`.
pub fn intersect(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<GeneratorMatrix, MatrixError> {
    compatible(a, b)?;
    let f = a.field();
    let kernel = a.basis.vstack(&b.basis)?.transpose().null_space();
    let ka = a.dim();
    let mut rows = Vec::with_capacity(kernel.rows());
    for t in 0..kernel.rows() {
        let mut v = vec![Fe::ZERO; a.len()];
        for i in 0..ka {
            let c = kernel.get(t, i);
            if c.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(c, a.basis.get(i, j)));
            }
        }
        rows.push(v);
    }
    GeneratorMatrix::from_rows(f, a.len(), &rows)
}

/// Block-diagonal generator of `C1 x C2`.
pub fn direct_product(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<GeneratorMatrix, MatrixError> {
    if !same_field(a.field(), b.field()) {
        return Err(MatrixError::FieldMismatch);
    }
    let (n1, n2) = (a.len(), b.len());
    let mut rows = Vec::new();
    for i in 0..a.dim() {
        let mut v = a.basis.row(i).to_vec();
        v.resize(n1 + n2, Fe::ZERO);
        rows.push(v);
    }
    for i in 0..b.dim() {
        let mut v = vec![Fe::ZERO; n1];
        v.extend_from_slice(b.basis.row(i));
        rows.push(v);
    }
    GeneratorMatrix::from_rows(a.field(), n1 + n2, &rows)
}

pub fn weight(v: &[Fe]) -> usize {
    v.iter().filter(|c| !c.is_zero()).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Codewords visited by full enumeration.
    pub codewords: u64,
    /// Column subsets tested by the parity-check search.
    pub subsets: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { codewords: 10_000_000, subsets: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceStrategy {
    /// Pick the cheaper of the two searches.
    Auto,
    Enumerate,
    ColumnSearch,
    /// Run both and insist they agree.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinDistance {
    pub d: usize,
    pub strategy: DistanceStrategy,
}

pub fn min_distance(
    g: &GeneratorMatrix,
    budget: SearchBudget,
    strategy: DistanceStrategy,
) -> Result<MinDistance, MatrixError> {
    let k = g.dim();
    let n = g.len();
    if k == 0 {
        return Err(MatrixError::ZeroCode);
    }
    let q = g.field().q() as u128;
    let enum_cost = (q.saturating_pow(k as u32) - 1) / (q - 1);
    let column_cost: u128 = (1..=(n - k + 1).min(n)).map(|w| num::binomial(n as u64, w as u64)).sum();
    let chosen = match strategy {
        DistanceStrategy::Auto => {
            if enum_cost <= budget.codewords as u128 && enum_cost <= column_cost {
                DistanceStrategy::Enumerate
            } else {
                DistanceStrategy::ColumnSearch
            }
        }
        s => s,
    };
    let d = match chosen {
        DistanceStrategy::Enumerate => enumerate(g, budget.codewords)?,
        DistanceStrategy::ColumnSearch => column_search(g, budget.subsets)?,
        _ => {
            let a = enumerate(g, budget.codewords)?;
            let b = column_search(g, budget.subsets)?;
            if a != b {
                return Err(MatrixError::StrategyDisagreement { enumerated: a, column: b });
            }
            a
        }
    };
    Ok(MinDistance { d, strategy: chosen })
}

fn upper_bound(g: &GeneratorMatrix) -> usize {
    let m = g.matrix();
    let best_row = (0..m.rows()).map(|i| weight(m.row(i))).min().unwrap_or(g.len());
    best_row.min(g.len() - g.dim() + 1)
}

/// Weights of all codewords whose first nonzero message symbol is 1.
fn enumerate(g: &GeneratorMatrix, budget: u64) -> Result<usize, MatrixError> {
    let f = g.field();
    let m = g.matrix();
    let (k, n) = (g.dim(), g.len());
    let q = f.q() as u128;
    let count = (q.saturating_pow(k as u32) - 1) / (q - 1);
    if count > budget as u128 {
        return Err(MatrixError::BudgetExceeded { lower: 1, upper: upper_bound(g) });
    }
    let mut best = n;
    let mut stack: Vec<Vec<Fe>> = vec![vec![Fe::ZERO; n]; k + 1];
    for lead in 0..k {
        stack[lead + 1].copy_from_slice(m.row(lead));
        walk(f, m, lead + 1, k, &mut stack, &mut best);
    }
    Ok(best)
}

fn walk(f: &Field, m: &Matrix, depth: usize, k: usize, stack: &mut Vec<Vec<Fe>>, best: &mut usize) {
    if depth == k {
        *best = (*best).min(weight(&stack[depth]));
        return;
    }
    // stack[depth] holds the partial sum; extend with c * row(depth) for every c
    let row = m.row(depth);
    for c in f.elements() {
        {
            let (lo, hi) = stack.split_at_mut(depth + 1);
            for ((x, &b), &r) in hi[0].iter_mut().zip(&lo[depth]).zip(row) {
                *x = f.add(b, f.mul(c, r));
            }
        }
        walk(f, m, depth + 1, k, stack, best);
        if *best == 1 {
            return;
        }
    }
}

/// Least `w` such that some `w` columns of a parity-check matrix are
/// dependent, found by depth-limited search over column subsets in
/// lexicographic order with incremental elimination.
fn column_search(g: &GeneratorMatrix, budget: u64) -> Result<usize, MatrixError> {
    let n = g.len();
    let h = g.matrix().null_space();
    let m = h.rows();
    if m == 0 {
        return Ok(1);
    }
    let cols: Vec<Vec<Fe>> = (0..n).map(|j| (0..m).map(|i| h.get(i, j)).collect()).collect();
    let f = g.field();
    let mut tested = 0u64;
    for w in 1..=(m + 1).min(n) {
        let mut basis: Vec<(usize, Vec<Fe>)> = Vec::new();
        match dependent_subset(f, &cols, 0, w, &mut basis, &mut tested, budget) {
            Some(true) => return Ok(w),
            Some(false) => {}
            None => return Err(MatrixError::BudgetExceeded { lower: w, upper: upper_bound(g) }),
        }
    }
    Ok(m + 1)
}

/// Reduces `v` against an echelon basis; returns the residue.
fn reduce(f: &Field, basis: &[(usize, Vec<Fe>)], mut v: Vec<Fe>) -> Vec<Fe> {
    for (pivot, b) in basis {
        let c = v[*pivot];
        if c.is_zero() {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(b) {
            *x = f.sub(*x, f.mul(c, y));
        }
    }
    v
}

fn dependent_subset(
    f: &Field,
    cols: &[Vec<Fe>],
    start: usize,
    remaining: usize,
    basis: &mut Vec<(usize, Vec<Fe>)>,
    tested: &mut u64,
    budget: u64,
) -> Option<bool> {
    for c in start..=(cols.len() - remaining) {
        let r = reduce(f, basis, cols[c].clone());
        let pivot = r.iter().position(|x| !x.is_zero());
        if remaining == 1 {
            *tested += 1;
            if *tested > budget {
                return None;
            }
            if pivot.is_none() {
                return Some(true);
            }
            continue;
        }
        let Some(pv) = pivot else {
            // a shorter dependent set would have been found at a smaller w
            continue;
        };
        let inv = f.inv(r[pv]).expect("nonzero");
        let normed: Vec<Fe> = r.iter().map(|&x| f.mul(x, inv)).collect();
        basis.push((pv, normed));
        let found = dependent_subset(f, cols, c + 1, remaining - 1, basis, tested, budget);
        basis.pop();
        match found {
            Some(false) => {}
            other => return other,
        }
    }
    Some(false)
}
