//! Gray images of ring codes and the entanglement-assisted quantum codes
//! built from their k-Galois hulls.

use alloc::{collections::BTreeMap, string::String, sync::Arc, vec, vec::Vec};
use core::fmt;

use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::codes::{CodeError, RingConstacyclicCode};
use crate::gf::{Fe, Field};
use crate::matrix::{
    galois_dual_matrix, intersect, min_distance, row_space_equal, DistanceStrategy, GeneratorMatrix, Matrix,
    MatrixError, MinDistance, SearchBudget,
};
use crate::polyring::same_field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("Gray matrix must be square of size {expected}, got {rows}x{cols}")]
    SizeMismatch { expected: usize, rows: usize, cols: usize },
    #[error("Gray matrix is singular")]
    NotInvertible,
    #[error("row {i} and twisted row {j} have inner product {value}, expected {expected}")]
    TwistedOrthogonalityFails { i: usize, j: usize, value: String, expected: String },
    #[error("Gray matrix was validated for k = {matrix}, code uses k = {code}")]
    GaloisMismatch { matrix: u32, code: u32 },
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("Gray map identity failed: {0}")]
    IdentityViolated(&'static str),
    #[error("the zero code gives no quantum code")]
    ZeroCode,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Invertible `M` with `M (M^(p^k))^T = gamma I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayMatrix {
    m: Matrix,
    gamma: Fe,
    k: u32,
}

impl GrayMatrix {
    pub fn new(field: &Arc<Field>, rows: &[Vec<Fe>], k: u32) -> Result<GrayMatrix, QuantumError> {
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(QuantumError::SizeMismatch { expected: size, rows: size, cols: bad.len() });
        }
        let m = Matrix::from_rows(field, size, rows)?;
        if m.rank() != size {
            return Err(QuantumError::NotInvertible);
        }
        let prod = m.mul(&m.frobenius(k).transpose())?;
        let gamma = if size == 0 { Fe::ONE } else { prod.get(0, 0) };
        for i in 0..size {
            for j in 0..size {
                let want = if i == j { gamma } else { Fe::ZERO };
                let got = prod.get(i, j);
                if got != want || gamma.is_zero() {
                    return Err(QuantumError::TwistedOrthogonalityFails {
                        i,
                        j,
                        value: alloc::format!("{}", field.display(got)),
                        expected: if gamma.is_zero() {
                            String::from("a nonzero scalar")
                        } else {
                            alloc::format!("{}", field.display(want))
                        },
                    });
                }
            }
        }
        Ok(GrayMatrix { m, gamma, k })
    }

    pub fn identity(field: &Arc<Field>, size: usize, k: u32) -> GrayMatrix {
        GrayMatrix { m: Matrix::identity(field, size), gamma: Fe::ONE, k }
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn gamma(&self) -> Fe {
        self.gamma
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// `psi(a) = (a_1, .., a_N) M` applied to each of the `n` positions.
    pub fn map(&self, word: &[AlgebraElement]) -> Vec<Fe> {
        let f = self.m.field();
        let size = self.size();
        let mut out = vec![Fe::ZERO; word.len() * size];
        for (i, a) in word.iter().enumerate() {
            for (s, &c) in a.coords().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for j in 0..size {
                    let slot = &mut out[i * size + j];
                    *slot = f.add(*slot, f.mul(c, self.m.get(s, j)));
                }
            }
        }
        out
    }
}

fn check_compatible(code: &RingConstacyclicCode, m: &GrayMatrix) -> Result<(), QuantumError> {
    let expected = code.algebra().class_count();
    if m.size() != expected {
        return Err(QuantumError::SizeMismatch { expected, rows: m.size(), cols: m.size() });
    }
    if !same_field(m.m.field(), code.algebra().field()) {
        return Err(QuantumError::FieldMismatch);
    }
    if m.k != code.k() {
        return Err(QuantumError::GaloisMismatch { matrix: m.k, code: code.k() });
    }
    Ok(())
}

/// Generator matrix of `psi(C)`, of length `n N`.
pub fn gray_image(code: &RingConstacyclicCode, m: &GrayMatrix) -> Result<GeneratorMatrix, QuantumError> {
    let expected = code.algebra().class_count();
    if m.size() != expected {
        return Err(QuantumError::SizeMismatch { expected, rows: m.size(), cols: m.size() });
    }
    let f = code.algebra().field();
    let size = m.size();
    let n = code.n();
    let mut rows = Vec::new();
    for (s, comp) in code.components().iter().enumerate() {
        let g = comp.generator_matrix();
        for r in 0..g.dim() {
            let row = g.matrix().row(r);
            let mut v = vec![Fe::ZERO; n * size];
            for (i, &c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for j in 0..size {
                    v[i * size + j] = f.mul(c, m.m.get(s, j));
                }
            }
            rows.push(v);
        }
    }
    Ok(GeneratorMatrix::from_rows(f, n * size, &rows)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrayHullReport {
    pub dual_dim: usize,
    pub hull_dim: usize,
}

/// Checks `psi(C^perp) = psi(C)^perp` and `psi(hull C) = hull psi(C)` as
/// row spaces.
pub fn gray_hull_check(code: &RingConstacyclicCode, m: &GrayMatrix) -> Result<GrayHullReport, QuantumError> {
    check_compatible(code, m)?;
    let image = gray_image(code, m)?;
    let dual_image = gray_image(&code.ring_dual()?, m)?;
    let image_dual = galois_dual_matrix(&image, m.k);
    if !row_space_equal(&dual_image, &image_dual)? {
        return Err(QuantumError::IdentityViolated("psi(C^perp) != psi(C)^perp"));
    }
    let hull_image = gray_image(&code.ring_hull()?.hull, m)?;
    let image_hull = intersect(&image, &image_dual)?;
    if !row_space_equal(&hull_image, &image_hull)? {
        return Err(QuantumError::IdentityViolated("psi(hull C) != hull psi(C)"));
    }
    Ok(GrayHullReport { dual_dim: image_dual.dim(), hull_dim: image_hull.dim() })
}

/// Best known minimum distances keyed by `(q, n, k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceTable {
    entries: BTreeMap<(u32, usize, usize), usize>,
}

impl ReferenceTable {
    pub fn new() -> ReferenceTable {
        ReferenceTable::default()
    }

    pub fn insert(&mut self, q: u32, n: usize, k: usize, d: usize) {
        self.entries.insert((q, n, k), d);
    }

    pub fn get(&self, q: u32, n: usize, k: usize) -> Option<usize> {
        self.entries.get(&(q, n, k)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, usize, usize), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Mds,
    NearMds,
    Optimal,
    NearOptimal,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Mds => "MDS",
            Label::NearMds => "Near MDS",
            Label::Optimal => "Optimal",
            Label::NearOptimal => "Near Optimal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QualityFlags {
    pub mds: bool,
    pub near_mds: bool,
    pub optimal: bool,
    pub near_optimal: bool,
}

impl QualityFlags {
    /// Highest-precedence label among the set flags.
    pub fn label(&self) -> Option<Label> {
        [
            (self.mds, Label::Mds),
            (self.near_mds, Label::NearMds),
            (self.optimal, Label::Optimal),
            (self.near_optimal, Label::NearOptimal),
        ]
        .into_iter()
        .find_map(|(on, l)| on.then_some(l))
    }

    pub fn has(&self, l: Label) -> bool {
        match l {
            Label::Mds => self.mds,
            Label::NearMds => self.near_mds,
            Label::Optimal => self.optimal,
            Label::NearOptimal => self.near_optimal,
        }
    }
}

/// `[[n, k, d; c]]_q` together with the classical code it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EaqeccParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub c: usize,
    pub hull_dim: usize,
    /// Dimension of the classical Gray image.
    pub classical_k: usize,
    /// `(n - k + c) - 2(d - 1)`.
    pub gap: i64,
    pub flags: QualityFlags,
    pub label: Option<Label>,
    /// `d <= (n + 2) / 2`, the hypothesis under which the bound is stated.
    pub bound_hypothesis: bool,
    pub distance: MinDistance,
}

impl EaqeccParams {
    /// Parameters from a classical `[n, k, d]_q` code with hull dimension `h`.
    pub fn from_classical(
        q: u32,
        n: usize,
        k: usize,
        d: usize,
        h: usize,
        distance: MinDistance,
        reference: Option<&ReferenceTable>,
    ) -> Result<EaqeccParams, QuantumError> {
        if k == 0 {
            return Err(QuantumError::ZeroCode);
        }
        let kq = k - h;
        let c = n - k - h;
        let gap = (n as i64 - kq as i64 + c as i64) - 2 * (d as i64 - 1);
        let best = reference.and_then(|r| r.get(q, n, k));
        let flags = QualityFlags {
            mds: d == n - k + 1,
            near_mds: d == n - k,
            optimal: best == Some(d),
            near_optimal: best.is_some_and(|b| d + 1 == b),
        };
        Ok(EaqeccParams {
            q,
            n,
            k: kq,
            d,
            c,
            hull_dim: h,
            classical_k: k,
            gap,
            flags,
            label: flags.label(),
            bound_hypothesis: 2 * d <= n + 2,
            distance,
        })
    }

    pub fn marker(&self) -> &'static str {
        match self.gap {
            0 => "∗",
            2 => "†",
            _ => "",
        }
    }
}

impl fmt::Display for EaqeccParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{};{}]]_{}{}", self.n, self.k, self.d, self.c, self.q, self.marker())
    }
}

#[derive(Debug, Clone)]
pub struct EaqeccReport {
    pub params: EaqeccParams,
    pub image: GeneratorMatrix,
    pub hull: GrayHullReport,
}

pub fn eaqecc_from_code(
    code: &RingConstacyclicCode,
    m: &GrayMatrix,
    budget: SearchBudget,
    strategy: DistanceStrategy,
    reference: Option<&ReferenceTable>,
) -> Result<EaqeccReport, QuantumError> {
    let hull = gray_hull_check(code, m)?;
    let ring_hull = code.ring_hull()?.hull.q_dimension();
    if ring_hull != hull.hull_dim {
        return Err(QuantumError::IdentityViolated("hull dimension differs between ring and image"));
    }
    let image = gray_image(code, m)?;
    if image.dim() != code.q_dimension() {
        return Err(QuantumError::IdentityViolated("Gray map changed the dimension"));
    }
    if image.dim() == 0 {
        return Err(QuantumError::ZeroCode);
    }
    let distance = min_distance(&image, budget, strategy)?;
    let params = EaqeccParams::from_classical(
        m.m.field().q(),
        image.len(),
        image.dim(),
        distance.d,
        hull.hull_dim,
        distance,
        reference,
    )?;
    Ok(EaqeccReport { params, image, hull })
}
