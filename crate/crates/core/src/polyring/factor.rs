//! Factorization over GF(q): square-free split, distinct-degree split and
//! Cantor-Zassenhaus equal-degree split.
//!
//! Randomness comes from a ChaCha stream seeded by an FNV hash of the field
//! and the input coefficients, so repeated calls give identical output.

use alloc::{format, vec::Vec};
use core::hash::Hasher;

use fnv::FnvHasher;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{Poly, PolyError};
use crate::gf::Fe;
use crate::num;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then coefficient order.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, like: &Poly) -> Poly {
        let f = like.field();
        self.factors
            .iter()
            .fold(Poly::constant(f, self.unit), |acc, (g, m)| &acc * &g.pow(*m as u64))
    }
}

pub fn factor(f: &Poly) -> Result<Factorization, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let unit = f.leading();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&monic));
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sq, mult) in squarefree(&monic) {
        for (part, d) in distinct_degree(&sq)? {
            for g in equal_degree(&part, d, &mut rng)? {
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((g, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    for (g, _) in &out {
        if !is_irreducible(g) {
            return Err(PolyError::Internal(format!("factor {g} is reducible")));
        }
    }
    let result = Factorization { unit, factors: out };
    if result.product(f) != *f {
        return Err(PolyError::Internal("factors do not multiply back".into()));
    }
    Ok(result)
}

fn seed_for(f: &Poly) -> u64 {
    let fld = f.field();
    let mut h = FnvHasher::default();
    h.write_u32(fld.p());
    h.write_u32(fld.e());
    for &c in fld.modulus() {
        h.write_u32(c);
    }
    for &c in f.coeffs() {
        h.write_u32(c.raw());
    }
    h.finish()
}

/// `g(x)` with `g(x)^p = f(x)`, assuming every exponent of `f` is a multiple of `p`.
fn pth_root(f: &Poly) -> Poly {
    let fld = f.field();
    let p = fld.p() as usize;
    let e = fld.e();
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| fld.frobenius(c, e - 1))
        .collect();
    Poly::new(fld, coeffs)
}

/// Square-free parts `(s_i, i)` with `f = prod s_i^i`; the same irreducible
/// may appear in two parts, which the caller merges.
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let fld = f.field();
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree(&pth_root(f)) {
            out.push((g, m * fld.p()));
        }
        return out;
    }
    let mut c = f.gcd(&d).expect("same field");
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let z = w.div_exact(&y).expect("gcd divides");
        if z.deg0() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("divides");
    }
    if c.deg0() > 0 {
        for (g, m) in squarefree(&pth_root(&c)) {
            out.push((g, m * fld.p()));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of
/// equal degree `d`.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>, PolyError> {
    let fld = f.field();
    let q = fld.q() as u64;
    let x = Poly::x(fld);
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg0() > 0 {
        if 2 * d > rest.deg0() {
            let n = rest.deg0();
            out.push((rest, n));
            break;
        }
        h = h.powmod(q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    Ok(out)
}

fn random_poly(f: &Poly, rng: &mut ChaCha8Rng) -> Poly {
    let fld = f.field();
    let n = f.deg0();
    let coeffs = (0..n)
        .map(|_| fld.element(rng.next_u32() % fld.q()).expect("in range"))
        .collect();
    Poly::new(fld, coeffs)
}

/// One attempt at a nontrivial splitting element for a product of degree-`d`
/// irreducibles.
fn splitter(f: &Poly, a: &Poly, d: usize) -> Result<Poly, PolyError> {
    let fld = f.field();
    let q = fld.q() as u64;
    if fld.p() == 2 {
        // absolute trace to GF(2) on each residue field
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..(fld.e() as usize * d) {
            t = t.mulmod(&t, f)?;
            acc = &acc + &t;
        }
        Ok(acc)
    } else {
        // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..d {
            t = t.powmod(q, f)?;
            acc = acc.mulmod(&t, f)?;
        }
        let b = acc.powmod((q - 1) / 2, f)?;
        Ok(&b - &Poly::one(fld))
    }
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>, PolyError> {
    let n = f.deg0();
    if n == d {
        return Ok(alloc::vec![f.clone()]);
    }
    loop {
        let a = random_poly(f, rng);
        if a.deg0() == 0 {
            continue;
        }
        let g = splitter(f, &a, d)?.gcd(f)?;
        let dg = g.deg0();
        if dg > 0 && dg < n {
            let h = f.div_exact(&g)?;
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&h, d, rng)?);
            return Ok(out);
        }
    }
}

/// Rabin's test: `x^(q^d) = x mod f` and `gcd(x^(q^(d/r)) - x, f) = 1` for
/// each prime `r | d`.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let fld = f.field();
    let q = fld.q() as u64;
    let x = Poly::x(fld);
    let f = f.monic();
    let frob_power = |i: usize| -> Poly {
        let mut h = x.clone();
        for _ in 0..i {
            h = h.powmod(q, &f).expect("nonzero modulus");
        }
        h
    };
    if (&frob_power(d) - &x).rem(&f).map_or(true, |r| !r.is_zero()) {
        return false;
    }
    num::prime_divisors(d as u64).into_iter().all(|r| {
        let h = frob_power(d / r as usize);
        (&h - &x).gcd(&f).is_ok_and(|g| g.is_one())
    })
}
