//! Closed-form hull dimensions of constacyclic codes over the algebra.
//!
//! A component generator is `g = prod f^(delta #)^(u_delta)` over the
//! `#`-orbits `{f, f^#, ...}` of `x^n - lambda`, each exponent in `[0, p^e']`.
//! One orbit of size `a` contributes
//!
//! ```text
//! b = a P - sum_delta max(u_delta, P - u_(delta-1 mod a)),   P = p^e'
//! ```
//!
//! and the hull has dimension `sum ord_j(q) * b` over all orbits of all
//! components.

use alloc::{collections::BTreeSet, format, string::String, sync::Arc, vec, vec::Vec};

use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::num::{self, NumError};
use crate::polyring::{constacyclic_factorization, ConstacyclicFactorization, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullDimError {
    #[error("root order {j} is not coprime to p = {p}")]
    NotCoprime { j: u64, p: u64 },
    #[error("no class B_i with i <= {l} contains {j}")]
    NoClassFound { j: u64, l: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("exponent pattern does not match the factorization: {0}")]
    ShapeMismatch(String),
    #[error("exponent {value} exceeds p^e' = {max}")]
    ExponentOutOfRange { value: u32, max: u32 },
    #[error("generator does not divide x^n - lambda")]
    NotADivisor,
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("search space of {needed} patterns exceeds the budget of {budget}")]
    SearchSpaceTooLarge { needed: u128, budget: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<NumError> for HullDimError {
    fn from(e: NumError) -> Self {
        match e {
            NumError::NotCoprime { a, m } => HullDimError::NotCoprime { j: m, p: a },
        }
    }
}

/// Divisors `j` of `n' r` coprime to `q` with `gcd(n' r / j, r) = 1`.
pub fn set_a(n_prime: u64, r: u64, q: u64) -> Vec<u64> {
    let m = n_prime * r;
    num::divisors(m)
        .into_iter()
        .filter(|&j| num::gcd(j, q) == 1 && num::gcd(m / j, r) == 1)
        .collect()
}

/// Least `i <= l` with `j | p^(e l1) + (-1)^(i-1) p^(i(e-k))` for some `l1`.
///
/// Powers of `p^e` modulo `j` are periodic with period `ord_j(p^e)`, so `l1`
/// only ranges over one period.
pub fn b_class(j: u64, p: u64, e: u32, k: u32, l: u32) -> Result<u32, HullDimError> {
    if j == 0 || num::gcd(j, p) != 1 {
        return Err(HullDimError::NotCoprime { j, p });
    }
    if j == 1 {
        return Ok(1);
    }
    let q = p.pow(e);
    let period = num::ord_mod(q % j, j)?;
    let powers: Vec<u64> = (0..period).map(|l1| num::pow_mod(q, l1, j)).collect();
    for i in 1..=l {
        let t = num::pow_mod(p, i as u64 * (e - k) as u64, j);
        let t = if i % 2 == 1 { t } else { (j - t) % j };
        if powers.iter().any(|&v| (v + t) % j == 0) {
            return Ok(i);
        }
    }
    Err(HullDimError::NoClassFound { j, l })
}

/// Per-orbit exponent vectors, in the order of [`ConstacyclicFactorization::orbits`].
pub type Exponents = Vec<Vec<u32>>;

fn check_shape(fact: &ConstacyclicFactorization, u: &Exponents) -> Result<(), HullDimError> {
    if u.len() != fact.orbit_count() {
        return Err(HullDimError::ShapeMismatch(format!(
            "{} orbit vectors for {} orbits",
            u.len(),
            fact.orbit_count()
        )));
    }
    for ((_, orbit), v) in fact.orbits().zip(u) {
        if v.len() != orbit.size() {
            return Err(HullDimError::ShapeMismatch(format!(
                "orbit of size {} given {} exponents",
                orbit.size(),
                v.len()
            )));
        }
        if let Some(&bad) = v.iter().find(|&&x| x > fact.multiplicity) {
            return Err(HullDimError::ExponentOutOfRange { value: bad, max: fact.multiplicity });
        }
    }
    Ok(())
}

pub fn generator_from_exponents(fact: &ConstacyclicFactorization, u: &Exponents) -> Result<Poly, HullDimError> {
    check_shape(fact, u)?;
    let mut g = Poly::one(&fact.field);
    for ((_, orbit), v) in fact.orbits().zip(u) {
        for (m, &e) in orbit.members.iter().zip(v) {
            g = &g * &m.pow(e as u64);
        }
    }
    Ok(g)
}

pub fn exponents_from_generator(fact: &ConstacyclicFactorization, g: &Poly) -> Result<Exponents, HullDimError> {
    let mut rest = g.monic();
    if rest.is_zero() || !rest.divides(&fact.target()) {
        return Err(HullDimError::NotADivisor);
    }
    let mut out = Vec::new();
    for (_, orbit) in fact.orbits() {
        let mut v = Vec::with_capacity(orbit.size());
        for m in &orbit.members {
            let mut e = 0;
            while let Ok(next) = rest.div_exact(m) {
                rest = next;
                e += 1;
            }
            v.push(e);
        }
        out.push(v);
    }
    if !rest.is_one() {
        return Err(HullDimError::NotADivisor);
    }
    Ok(out)
}

/// Contribution `b` of a single orbit with exponents `u` and multiplicity `big_p`.
pub fn orbit_b(big_p: u32, u: &[u32]) -> u64 {
    let a = u.len();
    let covered: u64 = (0..a)
        .map(|d| u[d].max(big_p - u[(d + a - 1) % a]) as u64)
        .sum();
    a as u64 * big_p as u64 - covered
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BValue {
    pub class: usize,
    pub t: usize,
    pub j: u64,
    /// 1-based orbit index within `(t, j)`.
    pub i: usize,
    pub b: u64,
}

/// One `(t, j)` row of a component table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRow {
    pub t: usize,
    pub a: u32,
    pub j: u64,
    pub beta: u64,
    pub ord_j: u64,
    pub b: u64,
    pub contribution: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentHull {
    pub rows: Vec<ClassRow>,
    pub dimension: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullReport {
    pub per_class: Vec<ComponentHull>,
    pub b_values: Vec<BValue>,
    pub total: u64,
    pub oracle_total: Option<u64>,
}

pub fn hull_dimension_formula(
    facts: &[ConstacyclicFactorization],
    exponents: &[Exponents],
) -> Result<HullReport, HullDimError> {
    if facts.len() != exponents.len() {
        return Err(HullDimError::ShapeMismatch(format!(
            "{} components but {} exponent sets",
            facts.len(),
            exponents.len()
        )));
    }
    let mut per_class = Vec::new();
    let mut b_values = Vec::new();
    let mut total = 0;
    for (s, (fact, u)) in facts.iter().zip(exponents).enumerate() {
        check_shape(fact, u)?;
        let big_p = fact.multiplicity;
        let mut rows = Vec::new();
        let mut dim = 0;
        let mut cursor = 0;
        for cls in &fact.classes {
            let mut b_tj = 0;
            for i in 0..cls.orbits.len() {
                let b = orbit_b(big_p, &u[cursor + i]);
                b_values.push(BValue { class: s, t: cls.t, j: cls.j, i: i + 1, b });
                b_tj += b;
            }
            cursor += cls.orbits.len();
            let cap = cls.beta * (cls.a as u64 * big_p as u64 / 2);
            if b_tj > cap {
                return Err(HullDimError::BoundViolated(format!(
                    "b = {b_tj} exceeds beta * floor(a p^e' / 2) = {cap} for (t={}, j={})",
                    cls.t, cls.j
                )));
            }
            let contribution = cls.ord_j * b_tj;
            dim += contribution;
            rows.push(ClassRow {
                t: cls.t,
                a: cls.a,
                j: cls.j,
                beta: cls.beta,
                ord_j: cls.ord_j,
                b: b_tj,
                contribution,
            });
        }
        total += dim;
        per_class.push(ComponentHull { rows, dimension: dim });
    }
    Ok(HullReport { per_class, b_values, total, oracle_total: None })
}

/// Least common multiple of the orders of the components of a unit.
pub fn ring_order(field: &Field, lambda: &[Fe]) -> Result<u64, HullDimError> {
    lambda.iter().try_fold(1, |acc, &c| {
        field
            .element_order(c)
            .map(|r| num::lcm(acc, r))
            .map_err(|_| HullDimError::HypothesisViolation("lambda is not a unit".into()))
    })
}

/// Component factorizations after checking `ord(lambda) | 1 + p^(e-k)` and
/// `gcd(ord(lambda), n') = 1` for the ring element.
pub fn ring_factorizations(
    field: &Arc<Field>,
    n: usize,
    lambda: &[Fe],
    k: u32,
) -> Result<Vec<ConstacyclicFactorization>, HullDimError> {
    if k >= field.e() {
        return Err(PolyError::GaloisParameter { k, e: field.e() }.into());
    }
    let r = ring_order(field, lambda)?;
    let p = field.p() as u64;
    if !(1 + num::pow_mod(p, (field.e() - k) as u64, r)).is_multiple_of(r) {
        return Err(HullDimError::HypothesisViolation(format!(
            "ord(lambda) = {r} does not divide 1 + p^(e-k)"
        )));
    }
    let (n_prime, _) = num::split_p_part(n as u64, p);
    if num::gcd(r, n_prime) != 1 {
        return Err(HullDimError::HypothesisViolation(format!(
            "gcd(ord(lambda), n') = gcd({r}, {n_prime}) is not 1"
        )));
    }
    lambda
        .iter()
        .map(|&c| constacyclic_factorization(field, n, c, k).map_err(Into::into))
        .collect()
}

fn sumset(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> BTreeSet<u64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

fn charge(spent: &mut u128, amount: u128, budget: u64) -> Result<(), HullDimError> {
    *spent = spent.saturating_add(amount);
    if *spent > budget as u128 {
        return Err(HullDimError::SearchSpaceTooLarge { needed: *spent, budget });
    }
    Ok(())
}

/// All vectors in `[0, big_p]^len`, visited in lexicographic order.
fn for_each_pattern(len: usize, big_p: u32, mut visit: impl FnMut(&[u32])) {
    let mut u = vec![0u32; len];
    loop {
        visit(&u);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if u[i] < big_p {
                u[i] += 1;
                break;
            }
            u[i] = 0;
        }
    }
}

/// Achievable hull dimensions, combining per-orbit contribution sets by
/// sumset convolution.
pub fn dimension_spectrum(facts: &[ConstacyclicFactorization], budget: u64) -> Result<BTreeSet<u64>, HullDimError> {
    let mut spent = 0u128;
    let mut memo: Vec<((usize, u32), BTreeSet<u64>)> = Vec::new();
    let mut total: BTreeSet<u64> = [0].into_iter().collect();
    for fact in facts {
        let big_p = fact.multiplicity;
        for (cls, orbit) in fact.orbits() {
            let key = (orbit.size(), big_p);
            let set = match memo.iter().find(|(k, _)| *k == key) {
                Some((_, s)) => s.clone(),
                None => {
                    charge(&mut spent, (big_p as u128 + 1).pow(orbit.size() as u32), budget)?;
                    let mut s = BTreeSet::new();
                    for_each_pattern(orbit.size(), big_p, |u| {
                        s.insert(orbit_b(big_p, u));
                    });
                    memo.push((key, s.clone()));
                    s
                }
            };
            let scaled: BTreeSet<u64> = set.iter().map(|b| b * cls.ord_j).collect();
            total = sumset(&total, &scaled);
        }
    }
    Ok(total)
}

/// Achievable hull dimensions by enumerating every divisor of every
/// component and measuring `n - deg lcm(g, h^#)`.
pub fn dimension_spectrum_exhaustive(
    facts: &[ConstacyclicFactorization],
    budget: u64,
) -> Result<BTreeSet<u64>, HullDimError> {
    let mut spent = 0u128;
    let mut total: BTreeSet<u64> = [0].into_iter().collect();
    for fact in facts {
        let members: Vec<&Poly> = fact.orbits().flat_map(|(_, o)| o.members.iter()).collect();
        let big_p = fact.multiplicity;
        charge(&mut spent, (big_p as u128 + 1).pow(members.len() as u32), budget)?;
        let target = fact.target();
        let mut dims = BTreeSet::new();
        let mut failure = None;
        for_each_pattern(members.len(), big_p, |u| {
            if failure.is_some() {
                return;
            }
            let g = members
                .iter()
                .zip(u)
                .fold(Poly::one(&fact.field), |acc, (m, &e)| &acc * &m.pow(e as u64));
            let res = target
                .div_exact(&g)
                .and_then(|h| h.sharp(fact.k))
                .and_then(|hs| g.lcm(&hs));
            match res {
                Ok(l) => {
                    dims.insert((fact.n - l.deg0()) as u64);
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        total = sumset(&total, &dims);
    }
    Ok(total)
}

/// Certifies that every constacyclic code of length `n` with constant
/// `lambda` is LCD when `n r` lies in `B_1`.
pub fn lcd_criterion(field: &Field, n: usize, lambda: &[Fe], k: u32) -> Result<bool, HullDimError> {
    if k >= field.e() {
        return Err(PolyError::GaloisParameter { k, e: field.e() }.into());
    }
    let p = field.p() as u64;
    if (n as u64).is_multiple_of(p) {
        return Err(HullDimError::HypothesisViolation(format!("gcd(n, q) != 1 for n = {n}")));
    }
    let r = ring_order(field, lambda)?;
    if num::gcd(r, n as u64) != 1 {
        return Err(HullDimError::HypothesisViolation(format!("gcd(ord(lambda), n) = gcd({r}, {n}) != 1")));
    }
    if !(1 + num::pow_mod(p, (field.e() - k) as u64, r)).is_multiple_of(r) {
        return Err(HullDimError::HypothesisViolation(format!(
            "ord(lambda) = {r} does not divide 1 + p^(e-k)"
        )));
    }
    let l = crate::polyring::galois_l(field.e(), k).expect("k < e");
    Ok(b_class(n as u64 * r, p, field.e(), k, l)? == 1)
}
