//! The affine algebra `A = F_q[X_1..X_l] / <t_1(X_1), .., t_l(X_l)>` with
//! square-free `t_i`: its Frobenius classes, primitive idempotents and the
//! split subring `sum_S e_S F_q` used as a code alphabet.
//!
//! Residues are dense coefficient vectors over the monomial basis
//! `X^a, a_i < deg t_i`, with `X_1` varying fastest. Multiplication forms
//! the full product and reduces each variable by `t_i`.

use alloc::{
    collections::BTreeMap,
    format,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::{cmp::Ordering, fmt};

use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::matrix::Matrix;
use crate::num;
use crate::polyring::{factor, is_irreducible, same_field, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("no defining polynomials given")]
    EmptyGeneratorList,
    #[error("t_{0} is not square-free")]
    NotSquareFree(usize),
    #[error("t_{0} is constant")]
    Constant(usize),
    #[error("defining polynomials live over different fields")]
    FieldMismatch,
    #[error("{ell} variables exceed the limit of {max}")]
    TooManyVariables { ell: usize, max: usize },
    #[error("algebra dimension {dim} exceeds the limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("class id {0} out of range")]
    BadClassId(usize),
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("element is not in the split subring spanned by the idempotents")]
    NotInSplitSubring,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraLimits {
    pub max_vars: usize,
    pub max_dim: usize,
}

impl Default for AlgebraLimits {
    fn default() -> Self {
        AlgebraLimits { max_vars: 4, max_dim: 64 }
    }
}

/// Sparse multivariate polynomial: exponent vector to nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct MvPoly {
    field: Arc<Field>,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Fe>,
}

impl MvPoly {
    pub fn zero(field: &Arc<Field>, nvars: usize) -> MvPoly {
        MvPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Arc<Field>, nvars: usize, c: Fe) -> MvPoly {
        let mut m = MvPoly::zero(field, nvars);
        m.add_term(vec![0; nvars], c);
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Fe {
        self.terms.get(exps).copied().unwrap_or(Fe::ZERO)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Fe) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        let f = self.field.clone();
        let v = f.add(self.coeff(&exps), c);
        if v.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, v);
        }
    }

    /// Terms in the printing order: total degree descending, then
    /// lexicographically descending with `x1 > x2 > ..`.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, Fe)> {
        let mut t: Vec<_> = self.terms.iter().map(|(k, &v)| (k, v)).collect();
        t.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        t
    }

    /// Total order used to sort classes: ascending exponent, then coefficient.
    pub fn canonical_cmp(&self, other: &MvPoly) -> Ordering {
        let key = |m: &MvPoly| -> Vec<(Vec<u32>, u32)> {
            m.terms.iter().map(|(k, &v)| (k.clone(), m.field.lex_key(v))).collect()
        };
        key(self).cmp(&key(other))
    }

    /// Parses sums of terms such as `x1^4 x2^3 + w^5 x1 + 2`, also accepting
    /// `x_1`, braces and omitted spaces.
    pub fn parse(field: &Arc<Field>, nvars: usize, s: &str) -> Result<MvPoly, AlgebraError> {
        let err = || AlgebraError::Parse(String::from(s));
        let clean: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, '_' | '{' | '}' | '$'))
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        if clean.is_empty() {
            return Err(err());
        }
        let mut out = MvPoly::zero(field, nvars);
        let chars: Vec<char> = clean.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let mut negative = false;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                negative ^= chars[pos] == '-';
                pos += 1;
            }
            let start = pos;
            while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                pos += 1;
            }
            let term: String = chars[start..pos].iter().collect();
            if term.is_empty() {
                return Err(err());
            }
            let (c, exps) = parse_term(field, nvars, &term).ok_or_else(err)?;
            out.add_term(exps, if negative { field.neg(c) } else { c });
        }
        Ok(out)
    }
}

fn parse_number(chars: &[char], pos: &mut usize) -> Option<u64> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return None;
    }
    chars[start..*pos].iter().collect::<String>().parse().ok()
}

fn parse_term(field: &Field, nvars: usize, term: &str) -> Option<(Fe, Vec<u32>)> {
    let chars: Vec<char> = term.chars().collect();
    let mut pos = 0;
    let mut coeff = Fe::ONE;
    let mut exps = vec![0u32; nvars];
    if chars[0].is_ascii_digit() {
        let v = parse_number(&chars, &mut pos)?;
        if v >= field.p() as u64 {
            return None;
        }
        coeff = field.from_int(v as i64);
    } else if chars[0] == 'w' || chars[0] == 'ω' {
        pos = 1;
        let mut k = 1;
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            k = parse_number(&chars, &mut pos)?;
        }
        coeff = field.omega_pow(k);
    }
    while pos < chars.len() {
        if chars[pos] == '*' {
            pos += 1;
            continue;
        }
        if chars[pos] != 'x' && chars[pos] != 'X' {
            return None;
        }
        pos += 1;
        let var = parse_number(&chars, &mut pos)? as usize;
        if var == 0 || var > nvars {
            return None;
        }
        let mut k = 1;
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            k = parse_number(&chars, &mut pos)? as u32;
        }
        exps[var - 1] += k;
    }
    Some((coeff, exps))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, exps: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &a) in exps.iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if a == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, a)?;
        }
    }
    Ok(())
}

impl fmt::Display for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let constant = exps.iter().all(|&a| a == 0);
            if constant {
                write!(f, "{}", self.field.display(c))?;
            } else {
                if c != Fe::ONE {
                    write!(f, "{} ", self.field.display(c))?;
                }
                write_monomial(f, exps)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MvPoly({self})")
    }
}

/// A monic polynomial in `x_var` whose coefficients are polynomials in the
/// earlier variables, standing for elements of the intermediate field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelativePoly {
    pub var: usize,
    /// Constant term first; the last entry is the constant 1.
    pub coeffs: Vec<MvPoly>,
}

impl RelativePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn canonical_cmp(&self, other: &RelativePoly) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.canonical_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl fmt::Display for RelativePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, coeff) in self.coeffs.iter().enumerate().rev() {
            if coeff.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_one = coeff.terms.len() == 1 && coeff.coeff(&vec![0; coeff.nvars]) == Fe::ONE;
            let mono = || -> String {
                match c {
                    1 => format!("x{}", self.var + 1),
                    _ => format!("x{}^{}", self.var + 1, c),
                }
            };
            if c == 0 {
                if coeff.terms.len() > 1 {
                    write!(f, "({coeff})")?;
                } else {
                    write!(f, "{coeff}")?;
                }
            } else if is_one {
                write!(f, "{}", mono())?;
            } else if coeff.terms.len() > 1 {
                write!(f, "({coeff}) {}", mono())?;
            } else {
                write!(f, "{coeff} {}", mono())?;
            }
        }
        Ok(())
    }
}

/// Dense element of `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Residue(pub Vec<Fe>);

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct RootClass {
    pub index: usize,
    /// `Irr(nu_i, F_q)` for each variable.
    pub p_polys: Vec<Poly>,
    /// `Irr(nu_i, F_q(nu_1..nu_{i-1}))` for each variable; the first equals
    /// `p_polys[0]`.
    pub relative: Vec<RelativePoly>,
    /// `lcm` of the degrees of `p_polys`.
    pub class_size: usize,
    /// `dim_{F_q} e A`.
    pub residue_degree: usize,
    /// Period of the Frobenius map on the component `e A`.
    pub orbit_size: usize,
    pub idempotent: MvPoly,
    residue: Residue,
}

impl RootClass {
    pub fn residue(&self) -> &Residue {
        &self.residue
    }
}

#[derive(Clone, Debug)]
pub struct AffineAlgebra {
    field: Arc<Field>,
    t: Vec<Poly>,
    degs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
    /// `X_i^m mod t_i` for `m < 2 deg t_i - 1`.
    reductions: Vec<Vec<Vec<Fe>>>,
    classes: Vec<RootClass>,
}

impl AffineAlgebra {
    pub fn new(field: &Arc<Field>, t: Vec<Poly>) -> Result<AffineAlgebra, AlgebraError> {
        AffineAlgebra::with_limits(field, t, AlgebraLimits::default())
    }

    pub fn with_limits(field: &Arc<Field>, t: Vec<Poly>, limits: AlgebraLimits) -> Result<AffineAlgebra, AlgebraError> {
        if t.is_empty() {
            return Err(AlgebraError::EmptyGeneratorList);
        }
        if t.len() > limits.max_vars {
            return Err(AlgebraError::TooManyVariables { ell: t.len(), max: limits.max_vars });
        }
        let mut monic = Vec::with_capacity(t.len());
        for (i, ti) in t.iter().enumerate() {
            if !same_field(ti.field(), field) {
                return Err(AlgebraError::FieldMismatch);
            }
            if ti.deg0() == 0 {
                return Err(AlgebraError::Constant(i + 1));
            }
            if !ti.gcd(&ti.derivative())?.is_one() {
                return Err(AlgebraError::NotSquareFree(i + 1));
            }
            monic.push(ti.monic());
        }
        let degs: Vec<usize> = monic.iter().map(|p| p.deg0()).collect();
        let dim = degs.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
        if dim > limits.max_dim {
            return Err(AlgebraError::DimensionTooLarge { dim, max: limits.max_dim });
        }
        let mut strides = vec![1usize; degs.len()];
        for i in 1..degs.len() {
            strides[i] = strides[i - 1] * degs[i - 1];
        }
        let mut reductions = Vec::new();
        for ti in &monic {
            let d = ti.deg0();
            let mut table = Vec::with_capacity(2 * d - 1);
            let x = Poly::x(field);
            for m in 0..(2 * d - 1) {
                let r = x.pow(m as u64).rem(ti)?;
                let mut v = r.coeffs().to_vec();
                v.resize(d, Fe::ZERO);
                table.push(v);
            }
            reductions.push(table);
        }
        let mut alg = AffineAlgebra { field: field.clone(), t: monic, degs, strides, dim, reductions, classes: Vec::new() };
        alg.classes = alg.compute_classes()?;
        alg.verify()?;
        Ok(alg)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ell(&self) -> usize {
        self.t.len()
    }

    pub fn defining_polys(&self) -> &[Poly] {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[RootClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> Result<&RootClass, AlgebraError> {
        self.classes.get(id).ok_or(AlgebraError::BadClassId(id))
    }

    pub fn idempotent_of_class(&self, id: usize) -> Result<&MvPoly, AlgebraError> {
        Ok(&self.class(id)?.idempotent)
    }

    pub fn exponents(&self, idx: usize) -> Vec<u32> {
        self.degs
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| ((idx / s) % d) as u32)
            .collect()
    }

    pub fn zero(&self) -> Residue {
        Residue(vec![Fe::ZERO; self.dim])
    }

    pub fn one(&self) -> Residue {
        self.scalar(Fe::ONE)
    }

    pub fn scalar(&self, c: Fe) -> Residue {
        let mut r = self.zero();
        r.0[0] = c;
        r
    }

    /// The class of `X_i` (0-based `i`).
    pub fn variable(&self, i: usize) -> Residue {
        self.var_residue(i)
    }

    /// Reduction of an arbitrary monomial.
    pub fn monomial(&self, exps: &[u32]) -> Residue {
        let mut out = self.one();
        for (i, &a) in exps.iter().enumerate() {
            if a > 0 {
                out = self.mul(&out, &self.pow(&self.var_residue(i), a as u64));
            }
        }
        out
    }

    /// `X_i mod t_i` placed on axis `i`.
    fn var_residue(&self, i: usize) -> Residue {
        let mut r = self.zero();
        if self.degs[i] == 1 {
            r.0[0] = self.field.neg(self.t[i].coeff(0));
        } else {
            r.0[self.strides[i]] = Fe::ONE;
        }
        r
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.add(x, y)).collect())
    }

    pub fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.sub(x, y)).collect())
    }

    pub fn scale(&self, a: &Residue, c: Fe) -> Residue {
        Residue(a.0.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    /// Full product followed by reduction of each variable modulo its `t_i`.
    pub fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        let f = &self.field;
        let big_degs: Vec<usize> = self.degs.iter().map(|&d| 2 * d - 1).collect();
        let mut big_strides = vec![1usize; big_degs.len()];
        for i in 1..big_degs.len() {
            big_strides[i] = big_strides[i - 1] * big_degs[i - 1];
        }
        let big_len = big_strides[big_degs.len() - 1] * big_degs[big_degs.len() - 1];
        let to_big = |idx: usize| -> usize {
            self.degs
                .iter()
                .zip(&self.strides)
                .zip(&big_strides)
                .map(|((&d, &s), &bs)| ((idx / s) % d) * bs)
                .sum()
        };
        let mut big = vec![Fe::ZERO; big_len];
        let nz_b: Vec<(usize, Fe)> =
            b.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (to_big(i), c)).collect();
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let bi = to_big(i);
            for &(bj, y) in &nz_b {
                big[bi + bj] = f.add(big[bi + bj], f.mul(x, y));
            }
        }
        for (axis, table) in self.reductions.iter().enumerate() {
            let d = self.degs[axis];
            let s = big_strides[axis];
            for idx in 0..big_len {
                let m = (idx / s) % big_degs[axis];
                if m < d || big[idx].is_zero() {
                    continue;
                }
                let c = big[idx];
                big[idx] = Fe::ZERO;
                let base = idx - m * s;
                for (r, &t) in table[m].iter().enumerate() {
                    if !t.is_zero() {
                        big[base + r * s] = f.add(big[base + r * s], f.mul(c, t));
                    }
                }
            }
        }
        let mut out = self.zero();
        for (i, slot) in out.0.iter_mut().enumerate() {
            let exps = self.exponents(i);
            let bi: usize = exps.iter().zip(&big_strides).map(|(&a, &s)| a as usize * s).sum();
            *slot = big[bi];
        }
        out
    }

    pub fn pow(&self, a: &Residue, mut k: u64) -> Residue {
        let mut out = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        out
    }

    /// Reduces an arbitrary polynomial modulo `I`.
    pub fn reduce(&self, m: &MvPoly) -> Result<Residue, AlgebraError> {
        if !same_field(&m.field, &self.field) {
            return Err(AlgebraError::FieldMismatch);
        }
        if m.nvars != self.ell() {
            return Err(AlgebraError::LengthMismatch { expected: self.ell(), got: m.nvars });
        }
        let mut out = self.zero();
        for (exps, &c) in &m.terms {
            out = self.add(&out, &self.scale(&self.monomial(exps), c));
        }
        Ok(out)
    }

    pub fn to_mvpoly(&self, r: &Residue) -> MvPoly {
        let mut m = MvPoly::zero(&self.field, self.ell());
        for (i, &c) in r.0.iter().enumerate() {
            if !c.is_zero() {
                m.add_term(self.exponents(i), c);
            }
        }
        m
    }

    /// Univariate polynomial in `X_i` as an algebra element.
    pub fn univariate(&self, i: usize, p: &Poly) -> Residue {
        let x = self.variable(i);
        let mut out = self.zero();
        for &c in p.coeffs().iter().rev() {
            out = self.add(&self.mul(&out, &x), &self.scalar(c));
        }
        out
    }

    fn frobenius_matrix(&self) -> Result<Matrix, AlgebraError> {
        let q = self.field.q() as u64;
        let xq: Vec<Residue> = (0..self.ell()).map(|i| self.pow(&self.variable(i), q)).collect();
        let mut rows = Vec::with_capacity(self.dim);
        for idx in 0..self.dim {
            let exps = self.exponents(idx);
            let mut img = self.one();
            for (i, &a) in exps.iter().enumerate() {
                img = self.mul(&img, &self.pow(&xq[i], a as u64));
            }
            rows.push(img.0);
        }
        Ok(Matrix::from_rows(&self.field, self.dim, &rows).expect("square"))
    }

    fn apply(&self, m: &Matrix, v: &Residue) -> Residue {
        let f = &self.field;
        let mut out = self.zero();
        for (i, &c) in v.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, slot) in out.0.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(c, m.get(i, j)));
            }
        }
        out
    }

    /// Coefficients expressing `target` in the span of `vectors`.
    fn express(&self, vectors: &[Residue], target: &Residue) -> Option<Vec<Fe>> {
        if vectors.is_empty() {
            return if target.is_zero() { Some(Vec::new()) } else { None };
        }
        let rows: Vec<Vec<Fe>> = vectors.iter().map(|v| v.0.clone()).collect();
        let m = Matrix::from_rows(&self.field, self.dim, &rows).expect("shape").transpose();
        m.solve(&target.0)
    }

    fn rank(&self, vectors: &[Residue]) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<Fe>> = vectors.iter().map(|v| v.0.clone()).collect();
        Matrix::from_rows(&self.field, self.dim, &rows).expect("shape").rank()
    }

    /// Minimal polynomial of `c` inside the component `e A`, where `e` acts
    /// as the identity.
    fn min_poly(&self, c: &Residue, e: &Residue) -> Poly {
        let f = &self.field;
        let mut powers = vec![e.clone()];
        let mut cur = c.clone();
        loop {
            if let Some(k) = self.express(&powers, &cur) {
                let mut coeffs: Vec<Fe> = k.iter().map(|&x| f.neg(x)).collect();
                coeffs.push(Fe::ONE);
                return Poly::new(f, coeffs);
            }
            powers.push(cur.clone());
            cur = self.mul(&cur, c);
        }
    }

    fn compute_classes(&self) -> Result<Vec<RootClass>, AlgebraError> {
        let f = &self.field;
        let frob = self.frobenius_matrix()?;
        let mut shifted = frob.clone();
        for i in 0..self.dim {
            shifted.set(i, i, f.sub(shifted.get(i, i), Fe::ONE));
        }
        let fixed = shifted.transpose().null_space();
        let mut idems = vec![self.one()];
        for b in fixed.to_rows() {
            let b = Residue(b);
            let mut next = Vec::new();
            for e in idems {
                let c = self.mul(&b, &e);
                let m = self.min_poly(&c, &e);
                if m.deg0() == 1 {
                    next.push(e);
                    continue;
                }
                let roots: Vec<Fe> = factor(&m)?
                    .factors
                    .iter()
                    .map(|(g, mult)| {
                        if g.deg0() != 1 || *mult != 1 {
                            Err(AlgebraError::Internal("fixed element with non-split minimal polynomial".into()))
                        } else {
                            Ok(f.neg(g.coeff(0)))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                for &v in &roots {
                    let mut ev = e.clone();
                    for &w in roots.iter().filter(|&&w| w != v) {
                        let inv = f.inv(f.sub(v, w)).expect("distinct roots");
                        let lin = self.sub(&c, &self.scale(&e, w));
                        ev = self.scale(&self.mul(&ev, &lin), inv);
                    }
                    next.push(ev);
                }
            }
            idems = next;
        }
        if idems.len() != fixed.rows() {
            return Err(AlgebraError::Internal(format!(
                "{} idempotents for a fixed subalgebra of dimension {}",
                idems.len(),
                fixed.rows()
            )));
        }
        let mut classes = Vec::with_capacity(idems.len());
        for e in idems {
            classes.push(self.class_data(&frob, e)?);
        }
        classes.sort_by(|a, b| {
            a.class_size
                .cmp(&b.class_size)
                .then_with(|| {
                    a.p_polys
                        .iter()
                        .zip(&b.p_polys)
                        .map(|(x, y)| x.lex_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
                .then_with(|| {
                    a.relative
                        .iter()
                        .zip(&b.relative)
                        .map(|(x, y)| x.canonical_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
                .then_with(|| a.idempotent.canonical_cmp(&b.idempotent))
        });
        for (i, c) in classes.iter_mut().enumerate() {
            c.index = i;
        }
        Ok(classes)
    }

    fn class_data(&self, frob: &Matrix, e: Residue) -> Result<RootClass, AlgebraError> {
        let ell = self.ell();
        let xs: Vec<Residue> = (0..ell).map(|i| self.mul(&self.variable(i), &e)).collect();
        let mut p_polys = Vec::with_capacity(ell);
        for (i, x) in xs.iter().enumerate() {
            let p = self.min_poly(x, &e);
            if !is_irreducible(&p) || !p.divides(&self.t[i]) {
                return Err(AlgebraError::Internal(format!("minimal polynomial {p} of x{} is not a factor", i + 1)));
            }
            p_polys.push(p);
        }
        let class_size = p_polys.iter().fold(1u64, |acc, p| num::lcm(acc, p.deg0() as u64)) as usize;
        let span: Vec<Residue> = (0..self.dim).map(|idx| self.mul(&self.monomial(&self.exponents(idx)), &e)).collect();
        let residue_degree = self.rank(&span);

        let mut orbit_size = 0;
        let mut cur = xs.clone();
        for s in 1..=self.dim {
            cur = cur.iter().map(|v| self.apply(frob, v)).collect();
            if cur == xs {
                orbit_size = s;
                break;
            }
        }

        let mut relative = Vec::with_capacity(ell);
        let mut rel_degs: Vec<u32> = Vec::with_capacity(ell);
        for (i, x) in xs.iter().enumerate().take(ell) {
            let tower = self.tower_basis(&rel_degs, &e);
            if self.rank(&tower.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()) != tower.len() {
                return Err(AlgebraError::Internal("tower basis is dependent".into()));
            }
            let (rel, m) = self.relative_min_poly(i, &tower, x);
            relative.push(rel);
            rel_degs.push(m as u32);
        }
        let tower_degree: usize = rel_degs.iter().map(|&m| m as usize).product();
        if tower_degree != residue_degree {
            return Err(AlgebraError::Internal("relative degrees do not multiply to the residue degree".into()));
        }

        Ok(RootClass {
            index: 0,
            p_polys,
            relative,
            class_size,
            residue_degree,
            orbit_size,
            idempotent: self.to_mvpoly(&e),
            residue: e,
        })
    }

    /// `{X^a e : a_j < m_j}` over the variables already adjoined.
    fn tower_basis(&self, rel_degs: &[u32], e: &Residue) -> Vec<(Vec<u32>, Residue)> {
        let mut out = vec![(vec![0u32; self.ell()], e.clone())];
        for (j, &m) in rel_degs.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for a in 0..m {
                for (exps, v) in &out {
                    let mut ex = exps.clone();
                    ex[j] = a;
                    let mut unit = vec![0u32; self.ell()];
                    unit[j] = a;
                    next.push((ex, self.mul(v, &self.monomial(&unit))));
                }
            }
            out = next;
        }
        out
    }

    fn relative_min_poly(&self, i: usize, tower: &[(Vec<u32>, Residue)], xi: &Residue) -> (RelativePoly, usize) {
        let f = &self.field;
        let mut span: Vec<Residue> = tower.iter().map(|(_, v)| v.clone()).collect();
        let mut cur = self.mul(&tower[0].1, xi);
        let mut m = 1;
        loop {
            if let Some(k) = self.express(&span, &cur) {
                let mut coeffs = Vec::with_capacity(m + 1);
                for c in 0..m {
                    let mut mv = MvPoly::zero(f, self.ell());
                    for (t, (exps, _)) in tower.iter().enumerate() {
                        let kc = k[c * tower.len() + t];
                        if !kc.is_zero() {
                            mv.add_term(exps.clone(), f.neg(kc));
                        }
                    }
                    coeffs.push(mv);
                }
                coeffs.push(MvPoly::constant(f, self.ell(), Fe::ONE));
                return (RelativePoly { var: i, coeffs }, m);
            }
            // extend the span by the next power of x_i times the tower basis
            let power = self.pow(xi, m as u64);
            for (_, v) in tower {
                span.push(self.mul(v, &power));
            }
            cur = self.mul(&cur, xi);
            m += 1;
        }
    }

    fn verify(&self) -> Result<(), AlgebraError> {
        let mut total = self.zero();
        let mut size_sum = 0;
        for (i, c) in self.classes.iter().enumerate() {
            let e = &c.residue;
            if &self.mul(e, e) != e {
                return Err(AlgebraError::Internal(format!("e_{} is not idempotent", i + 1)));
            }
            for other in &self.classes[i + 1..] {
                if !self.mul(e, &other.residue).is_zero() {
                    return Err(AlgebraError::Internal("idempotents are not orthogonal".into()));
                }
            }
            if c.class_size != c.residue_degree || c.orbit_size != c.class_size {
                return Err(AlgebraError::Internal(format!(
                    "class {}: lcm {} / residue degree {} / orbit {}",
                    i + 1,
                    c.class_size,
                    c.residue_degree,
                    c.orbit_size
                )));
            }
            total = self.add(&total, e);
            size_sum += c.class_size;
        }
        if total != self.one() {
            return Err(AlgebraError::Internal("idempotents do not sum to 1".into()));
        }
        if size_sum != self.dim {
            return Err(AlgebraError::Internal("class sizes do not sum to the dimension".into()));
        }
        Ok(())
    }

    /// Rebuilds `e_S` as `g h` with `h = prod t_i/p_i * prod w~_i` and `g`
    /// chosen so that `g h = 1` modulo the class ideal `I_S`.
    pub fn idempotent_via_construction(&self, id: usize) -> Result<Residue, AlgebraError> {
        let class = self.class(id)?;
        let ell = self.ell();
        let mut h = self.one();
        for i in 0..ell {
            let quotient = self.t[i].div_exact(&class.p_polys[i])?;
            h = self.mul(&h, &self.univariate(i, &quotient));
        }
        let mut ideal_gens = vec![self.univariate(0, &class.p_polys[0])];
        for i in 1..ell {
            let b: Vec<Residue> =
                class.relative[i].coeffs.iter().map(|c| self.reduce(c)).collect::<Result<_, _>>()?;
            let y = self.variable(i);
            let w = self.horner(&b, &y);
            ideal_gens.push(w);
            let p: Vec<Residue> = class.p_polys[i].coeffs().iter().map(|&c| self.scalar(c)).collect();
            let quot = self.divide_monic(&p, &b);
            h = self.mul(&h, &self.horner(&quot, &y));
        }
        let mut columns: Vec<Residue> = (0..self.dim)
            .map(|idx| self.mul(&self.monomial(&self.exponents(idx)), &h))
            .collect();
        let n_g = columns.len();
        for g in &ideal_gens {
            for idx in 0..self.dim {
                columns.push(self.mul(&self.monomial(&self.exponents(idx)), g));
            }
        }
        let sol = self
            .express(&columns, &self.one())
            .ok_or_else(|| AlgebraError::Internal("h is not invertible modulo the class ideal".into()))?;
        let g = Residue(sol[..n_g].to_vec());
        Ok(self.mul(&g, &h))
    }

    fn horner(&self, coeffs: &[Residue], y: &Residue) -> Residue {
        let mut out = self.zero();
        for c in coeffs.iter().rev() {
            out = self.add(&self.mul(&out, y), c);
        }
        out
    }

    /// Quotient of long division by a monic divisor with coefficients in `A`.
    fn divide_monic(&self, num: &[Residue], den: &[Residue]) -> Vec<Residue> {
        let dd = den.len() - 1;
        if num.len() <= dd {
            return vec![self.zero()];
        }
        let mut rem: Vec<Residue> = num.to_vec();
        let mut quot = vec![self.zero(); num.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            quot[k] = c.clone();
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] = self.sub(&rem[k + j], &self.mul(&c, dj));
            }
        }
        quot
    }

    pub fn recompose(self: &Arc<Self>, coords: &[Fe]) -> Result<AlgebraElement, AlgebraError> {
        if coords.len() != self.class_count() {
            return Err(AlgebraError::LengthMismatch { expected: self.class_count(), got: coords.len() });
        }
        Ok(AlgebraElement { algebra: self.clone(), coords: coords.to_vec() })
    }

    /// Projects a residue onto each component; fails unless every
    /// projection is a scalar multiple of its idempotent.
    pub fn decompose_residue(self: &Arc<Self>, r: &Residue) -> Result<AlgebraElement, AlgebraError> {
        let mut coords = Vec::with_capacity(self.class_count());
        for c in &self.classes {
            let proj = self.mul(r, &c.residue);
            let lead = c.residue.0.iter().position(|x| !x.is_zero()).expect("nonzero idempotent");
            let a = self.field.div(proj.0[lead], c.residue.0[lead]).expect("nonzero");
            if self.scale(&c.residue, a) != proj {
                return Err(AlgebraError::NotInSplitSubring);
            }
            coords.push(a);
        }
        Ok(AlgebraElement { algebra: self.clone(), coords })
    }
}

/// Element of the split subring `sum_S e_S F_q`, stored by its coordinates.
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Arc<AffineAlgebra>,
    coords: Vec<Fe>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fld = self.algebra.field();
        let parts: Vec<String> = self.coords.iter().map(|&c| fld.display(c).to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<AffineAlgebra> {
        &self.algebra
    }

    pub fn decompose(&self) -> Vec<Fe> {
        self.coords.clone()
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    pub fn to_residue(&self) -> Residue {
        let alg = &self.algebra;
        alg.classes.iter().zip(&self.coords).fold(alg.zero(), |acc, (c, &a)| alg.add(&acc, &alg.scale(&c.residue, a)))
    }

    pub fn is_unit(&self) -> bool {
        self.coords.iter().all(|c| !c.is_zero())
    }

    fn zip_with(&self, other: &AlgebraElement, op: impl Fn(&Field, Fe, Fe) -> Fe) -> AlgebraElement {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra), "elements of different algebras");
        let f = self.algebra.field();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| op(f, a, b)).collect(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.zip_with(other, |f, a, b| f.mul(a, b))
    }

    pub fn inv(&self) -> Option<AlgebraElement> {
        let f = self.algebra.field();
        let coords = self.coords.iter().map(|&a| f.inv(a)).collect::<Option<Vec<_>>>()?;
        Some(AlgebraElement { algebra: self.algebra.clone(), coords })
    }

    /// Multiplicative order; the lcm of the coordinate orders.
    pub fn order(&self) -> Option<u64> {
        let f = self.algebra.field();
        self.coords
            .iter()
            .try_fold(1u64, |acc, &a| f.element_order(a).ok().map(|o| num::lcm(acc, o)))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::polyring::tests::{gf25, gf9, wpoly};
    use proptest::prelude::*;

    pub fn f2() -> Arc<Field> {
        Arc::new(Field::prime(2).unwrap())
    }

    fn bits(f: &Arc<Field>, c: &[u32]) -> Poly {
        Poly::new(f, c.iter().map(|&b| f.from_int(b as i64)).collect())
    }

    pub fn f2_algebra() -> AffineAlgebra {
        let f = f2();
        AffineAlgebra::new(&f, vec![bits(&f, &[1, 0, 0, 0, 1, 1]), bits(&f, &[0, 1, 1, 0, 1])]).unwrap()
    }

    pub fn example2_algebra() -> AffineAlgebra {
        let f = gf9();
        AffineAlgebra::new(
            &f,
            vec![wpoly(&f, &[Some(1), Some(0), Some(0)]), wpoly(&f, &[Some(4), Some(5), Some(0)])],
        )
        .unwrap()
    }

    pub fn example3_algebra() -> AffineAlgebra {
        let f = gf25();
        AffineAlgebra::new(
            &f,
            vec![wpoly(&f, &[Some(13), Some(0), Some(0)]), wpoly(&f, &[Some(0), Some(3), Some(0)])],
        )
        .unwrap()
    }

    const F2_IDEMPOTENTS: [&str; 6] = [
        "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^4 + x_1^3 x_2 + x_1^3 + x_1^2 x_2 + x_2^3 + x_1^2 + x_2 + 1",
        "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^3 x_2 + x_1^2 x_2 + x_2^3 + x_2",
        "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^4 + x_1^3 x_2 + x_1^3 + x_1^2 x_2 + x_1^2",
        "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^3 x_2^2 + x_1^2 x_2^3 + x_1^3 x_2 + x_1^2 x_2 + x_1x_2 + x_2^2",
        "x_1^4 x_2^3 + x_1^4 x_2^2 + x_1^3 x_2^3 + x_1^2 x_2^3 + x_1^2 x_2 + x_1 x_2^2 + x_1 x_2 + x_2",
        "x_1^4 x_2^3 + x_1^4 x_2^2 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^3 x_2^2 + x_1^2 x_2^3 + x_1^2 x_2 + x_1 x_2^2 + x_2^2 + x_2",
    ];

    #[test]
    fn f2_example_idempotents() {
        let alg = f2_algebra();
        assert_eq!(alg.class_count(), 6);
        let mut sizes: Vec<usize> = alg.classes().iter().map(|c| c.class_size).collect();
        sizes.sort();
        assert_eq!(sizes, [2, 3, 3, 3, 3, 6]);
        let f = alg.field().clone();
        let mut expected: Vec<String> = F2_IDEMPOTENTS
            .iter()
            .map(|s| MvPoly::parse(&f, 2, s).unwrap().to_string())
            .collect();
        let mut got: Vec<String> = alg.classes().iter().map(|c| c.idempotent.to_string()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(
            MvPoly::parse(&f, 2, F2_IDEMPOTENTS[1]).unwrap().to_string(),
            "x1^4 x2^3 + x1^3 x2^3 + x1^4 x2 + x1^2 x2^3 + x1^3 x2 + x1^2 x2 + x2^3 + x2"
        );
    }

    #[test]
    fn construction_matches_splitting() {
        for alg in [f2_algebra(), example2_algebra(), example3_algebra()] {
            for c in alg.classes() {
                assert_eq!(&alg.idempotent_via_construction(c.index).unwrap(), c.residue(), "class {}", c.index);
            }
        }
    }

    #[test]
    fn example_algebras_have_two_classes() {
        for alg in [example2_algebra(), example3_algebra()] {
            assert_eq!(alg.class_count(), 2);
            let sum = alg.classes().iter().fold(alg.zero(), |acc, c| alg.add(&acc, c.residue()));
            assert_eq!(sum, alg.one());
        }
    }

    #[test]
    fn trivial_algebra() {
        let f = gf9();
        let alg = Arc::new(AffineAlgebra::new(&f, vec![Poly::x(&f)]).unwrap());
        assert_eq!(alg.class_count(), 1);
        assert_eq!(alg.idempotent_of_class(0).unwrap().to_string(), "1");
        assert_eq!(alg.idempotent_of_class(1).unwrap_err(), AlgebraError::BadClassId(1));
        let x = alg.recompose(&[f.omega_pow(3)]).unwrap();
        assert_eq!(alg.decompose_residue(&x.to_residue()).unwrap(), x);
    }

    #[test]
    fn rejects_bad_input() {
        let f = gf9();
        assert_eq!(AffineAlgebra::new(&f, vec![]).unwrap_err(), AlgebraError::EmptyGeneratorList);
        let sq = &Poly::x(&f) * &Poly::x(&f);
        assert_eq!(AffineAlgebra::new(&f, vec![Poly::x(&f), sq]).unwrap_err(), AlgebraError::NotSquareFree(2));
        assert_eq!(AffineAlgebra::new(&f, vec![Poly::one(&f)]).unwrap_err(), AlgebraError::Constant(1));
        let big = Poly::binomial(&f, 8, Fe::ONE);
        assert_eq!(
            AffineAlgebra::new(&f, vec![big.clone(), big, Poly::binomial(&f, 2, Fe::ONE)]).unwrap_err(),
            AlgebraError::DimensionTooLarge { dim: 128, max: 64 }
        );
        let five = vec![Poly::x(&f); 5];
        assert_eq!(
            AffineAlgebra::new(&f, five).unwrap_err(),
            AlgebraError::TooManyVariables { ell: 5, max: 4 }
        );
    }

    #[test]
    fn decomposition_and_units() {
        let alg = Arc::new(example2_algebra());
        let f = alg.field().clone();
        let one = alg.recompose(&[Fe::ONE, Fe::ONE]).unwrap();
        assert_eq!(one.to_residue(), alg.one());
        assert_eq!(alg.decompose_residue(&alg.one()).unwrap().decompose(), vec![Fe::ONE, Fe::ONE]);
        let lambda = alg.recompose(&[Fe::ONE, f.omega_pow(2)]).unwrap();
        assert!(lambda.is_unit());
        assert_eq!(alg.decompose_residue(&lambda.to_residue()).unwrap().decompose(), vec![Fe::ONE, f.omega_pow(2)]);
        assert!(!alg.recompose(&[Fe::ZERO, Fe::ONE]).unwrap().is_unit());
        assert_eq!(
            alg.recompose(&[Fe::ONE]).unwrap_err(),
            AlgebraError::LengthMismatch { expected: 2, got: 1 }
        );
        let alg3 = Arc::new(example3_algebra());
        let f3 = alg3.field().clone();
        assert!(alg3.recompose(&[f3.omega_pow(1), f3.omega_pow(8)]).unwrap().is_unit());
        // x1 has degree-2 components, so it is outside the split subring
        assert_eq!(alg.decompose_residue(&alg.variable(0)).unwrap_err(), AlgebraError::NotInSplitSubring);
    }

    #[test]
    fn printing_round_trips() {
        let alg = example3_algebra();
        for c in alg.classes() {
            let s = c.idempotent.to_string();
            assert_eq!(MvPoly::parse(alg.field(), 2, &s).unwrap(), c.idempotent);
            assert_eq!(alg.reduce(&c.idempotent).unwrap(), *c.residue());
        }
    }

    fn element(alg: &Arc<AffineAlgebra>, raw: &[u32]) -> AlgebraElement {
        let f = alg.field();
        let coords: Vec<Fe> = (0..alg.class_count()).map(|i| f.element(raw[i % raw.len()] % f.q()).unwrap()).collect();
        alg.recompose(&coords).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(250))]

        #[test]
        fn ring_operations_commute_with_decomposition(
            a in proptest::collection::vec(0u32..1000, 6),
            b in proptest::collection::vec(0u32..1000, 6),
            which in 0usize..3,
        ) {
            let alg = Arc::new(match which { 0 => f2_algebra(), 1 => example2_algebra(), _ => example3_algebra() });
            let x = element(&alg, &a);
            let y = element(&alg, &b);
            let xr = x.to_residue();
            let yr = y.to_residue();
            prop_assert_eq!(alg.decompose_residue(&xr).unwrap(), x.clone());
            prop_assert_eq!(alg.mul(&xr, &yr), x.mul(&y).to_residue());
            prop_assert_eq!(alg.add(&xr, &yr), x.add(&y).to_residue());
            if let Some(inv) = x.inv() {
                prop_assert_eq!(alg.mul(&xr, &inv.to_residue()), alg.one());
            }
        }

        #[test]
        fn component_orders_divide_ring_order(a in proptest::collection::vec(1u32..1000, 6), which in 0usize..2) {
            let alg = Arc::new(if which == 0 { example2_algebra() } else { example3_algebra() });
            let f = alg.field().clone();
            let coords: Vec<Fe> = (0..2).map(|i| f.omega_pow(a[i] as u64)).collect();
            let x = alg.recompose(&coords).unwrap();
            let r = x.to_residue();
            // order measured by repeated multiplication in A
            let mut cur = r.clone();
            let mut ord = 1u64;
            while cur != alg.one() {
                cur = alg.mul(&cur, &r);
                ord += 1;
            }
            prop_assert_eq!(Some(ord), x.order());
            for &c in &coords {
                prop_assert_eq!(ord % f.element_order(c).unwrap(), 0);
            }
        }

        #[test]
        fn random_algebras_satisfy_invariants(
            seeds in proptest::collection::vec(proptest::collection::vec(0u32..9, 1..4), 1..3),
        ) {
            let f = gf9();
            let t: Vec<Poly> = seeds
                .iter()
                .map(|s| {
                    let mut c: Vec<Fe> = s.iter().map(|&r| f.element(r).unwrap()).collect();
                    c.push(Fe::ONE);
                    Poly::new(&f, c)
                })
                .collect();
            match AffineAlgebra::new(&f, t.clone()) {
                Ok(alg) => {
                    let total: usize = alg.classes().iter().map(|c| c.class_size).sum();
                    prop_assert_eq!(total, alg.dim());
                    for c in alg.classes() {
                        prop_assert_eq!(&alg.idempotent_via_construction(c.index).unwrap(), c.residue());
                    }
                }
                Err(AlgebraError::NotSquareFree(i)) => {
                    let ti = &t[i - 1];
                    prop_assert!(!ti.gcd(&ti.derivative()).unwrap().is_one());
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
