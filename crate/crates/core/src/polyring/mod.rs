//! Dense univariate polynomials over a [`Field`].

mod constacyclic;
mod factor;
mod sharp;

pub use constacyclic::{constacyclic_factorization, ConstacyclicFactorization, OrbitClass, SharpOrbit};
pub use factor::{factor, is_irreducible, Factorization};
pub use sharp::galois_l;

use alloc::{string::String, sync::Arc, vec, vec::Vec};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::gf::{Fe, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("the # operator needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("remainder is nonzero")]
    NotDivisible,
    #[error("Galois parameter k={k} must satisfy 0 <= k < e={e}")]
    GaloisParameter { k: u32, e: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// A polynomial with coefficients listed constant term first, always trimmed.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

pub(crate) fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn new(field: &Arc<Field>, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Arc<Field>) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Arc<Field>) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn x(field: &Arc<Field>) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn constant(field: &Arc<Field>, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn monomial(field: &Arc<Field>, c: Fe, degree: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; degree + 1];
        coeffs[degree] = c;
        Poly::new(field, coeffs)
    }

    /// `x^n - lambda`.
    pub fn binomial(field: &Arc<Field>, n: usize, lambda: Fe) -> Poly {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = Fe::ONE;
        coeffs[0] = field.add(coeffs[0], field.neg(lambda));
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0, for dimension counts.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    /// Applies `c -> c^(p^k)` to every coefficient.
    pub fn frobenius_coeffs(&self, k: u32) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.frobenius(c, k)).collect())
    }

    fn check_field(&self, other: &Poly) -> Result<(), PolyError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check_field(d)?;
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut quot = vec![Fe::ZERO; r.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            if c.is_zero() {
                continue;
            }
            quot[i] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, PolyError> {
        self.divmod(d).map(|(_, r)| r)
    }

    pub fn div_exact(&self, d: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.divmod(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    /// Whether `self` divides `other`; the zero polynomial divides only zero.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_ok_and(|r| r.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd(other)?;
        Ok((self * &other.div_exact(&g)?).monic())
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Result<Poly, PolyError> {
        (self * other).rem(m)
    }

    pub fn powmod(&self, mut k: u64, m: &Poly) -> Result<Poly, PolyError> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// Orders by degree, then coefficients constant term first, each
    /// coefficient compared by its coordinate vector.
    pub fn lex_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            let f = &self.field;
            self.coeffs
                .iter()
                .map(|&c| f.lex_key(c))
                .cmp(other.coeffs.iter().map(|&c| f.lex_key(c)))
        })
    }

    /// Coefficient tuple, constant term first, e.g. `(2,w^5,w^3,1)`.
    pub fn tuple(&self) -> TupleDisplay<'_> {
        TupleDisplay(self)
    }
}

pub struct TupleDisplay<'a>(&'a Poly);

impl fmt::Display for TupleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        write!(f, "(")?;
        if p.is_zero() {
            write!(f, "0")?;
        }
        for (i, &c) in p.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p.field.display(c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = self.field.display(c);
            match (i, c == Fe::ONE) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff} x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coeff} x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}

fn assert_same(a: &Poly, b: &Poly) {
    assert!(same_field(&a.field, &b.field), "polynomials over different fields");
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_same(self, rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        assert_same(self, rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_same(self, rhs);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}
