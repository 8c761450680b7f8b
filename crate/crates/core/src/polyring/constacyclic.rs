//! Factorization of `x^n - lambda` grouped into `#`-orbits.
//!
//! Writing `n = n' p^e'`, every irreducible factor of `x^(n') - mu` (with
//! `mu^(p^e') = lambda`) occurs in `x^n - lambda` with multiplicity `p^e'`.
//! A factor whose roots have order `j` lies in an orbit of size `a`, where
//! `a` is the index `i` of the class `B_i` containing `j`.

use alloc::{format, sync::Arc, vec::Vec};

use super::{factor, galois_l, Poly, PolyError};
use crate::gf::{Fe, Field};
use crate::hulldim::{b_class, set_a};
use crate::num;

/// Members `[f, f^#, f^(2#), ...]`, starting from the least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpOrbit {
    pub members: Vec<Poly>,
}

impl SharpOrbit {
    pub fn representative(&self) -> &Poly {
        &self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Common degree of the members, `ord_j(q)`.
    pub fn member_degree(&self) -> usize {
        self.members[0].deg0()
    }
}

/// All orbits of size `a_t` whose roots have order `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    /// 1-based position of `a` among the divisors of `l`.
    pub t: usize,
    pub a: u32,
    pub j: u64,
    pub ord_j: u64,
    /// `phi(j) / (a phi(r) ord_j(q))`, checked against the orbit count.
    pub beta: u64,
    pub orbits: Vec<SharpOrbit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstacyclicFactorization {
    pub field: Arc<Field>,
    pub n: usize,
    pub n_prime: usize,
    pub e_prime: u32,
    /// `p^e'`, the multiplicity of every irreducible factor.
    pub multiplicity: u32,
    pub lambda: Fe,
    pub r: u64,
    pub k: u32,
    pub l: u32,
    /// Divisors `a_1 = 1 < a_2 < ... < a_s` of `l`.
    pub divisors: Vec<u32>,
    /// Sorted by `(t, j)`.
    pub classes: Vec<OrbitClass>,
}

impl ConstacyclicFactorization {
    /// Orbits in the fixed order used for exponent patterns.
    pub fn orbits(&self) -> impl Iterator<Item = (&OrbitClass, &SharpOrbit)> {
        self.classes
            .iter()
            .flat_map(|c| c.orbits.iter().map(move |o| (c, o)))
    }

    pub fn orbit_count(&self) -> usize {
        self.classes.iter().map(|c| c.orbits.len()).sum()
    }

    /// The set `D_t` of root orders carried by orbits of size `a_t`.
    pub fn d_set(&self, t: usize) -> Vec<u64> {
        self.classes.iter().filter(|c| c.t == t).map(|c| c.j).collect()
    }

    /// `Delta_t`: total degree of one member per orbit of size `a_t`.
    pub fn delta(&self, t: usize) -> usize {
        self.classes
            .iter()
            .filter(|c| c.t == t)
            .flat_map(|c| c.orbits.iter())
            .map(|o| o.member_degree())
            .sum()
    }

    pub fn target(&self) -> Poly {
        Poly::binomial(&self.field, self.n, self.lambda)
    }
}

fn violation(msg: alloc::string::String) -> PolyError {
    PolyError::HypothesisViolation(msg)
}

/// Checks `r | 1 + p^(e-k)` for `r = ord(lambda)` and returns `r`.
pub(crate) fn order_condition(field: &Field, lambda: Fe, k: u32) -> Result<u64, PolyError> {
    if k >= field.e() {
        return Err(PolyError::GaloisParameter { k, e: field.e() });
    }
    let r = field
        .element_order(lambda)
        .map_err(|_| violation("the constant must be a unit".into()))?;
    let s = 1 + num::pow_mod(field.p() as u64, (field.e() - k) as u64, r);
    if !s.is_multiple_of(r) {
        return Err(violation(format!(
            "ord(lambda) = {r} does not divide 1 + p^(e-k) = 1 + {}^{}",
            field.p(),
            field.e() - k
        )));
    }
    Ok(r)
}

pub fn constacyclic_factorization(
    field: &Arc<Field>,
    n: usize,
    lambda: Fe,
    k: u32,
) -> Result<ConstacyclicFactorization, PolyError> {
    if n == 0 {
        return Err(violation("length must be positive".into()));
    }
    let r = order_condition(field, lambda, k)?;
    let p = field.p() as u64;
    let q = field.q() as u64;
    let (n_prime, e_prime) = num::split_p_part(n as u64, p);
    if num::gcd(r, n_prime) != 1 {
        return Err(violation(format!(
            "gcd(ord(lambda), n') = gcd({r}, {n_prime}) is not 1"
        )));
    }
    let l = galois_l(field.e(), k).ok_or_else(|| violation("no even l exists".into()))?;
    let divisors: Vec<u32> = num::divisors(l as u64).into_iter().map(|d| d as u32).collect();
    let multiplicity = p.pow(e_prime) as u32;

    let target = Poly::binomial(field, n, lambda);
    let fac = factor(&target)?;
    if let Some((g, m)) = fac.factors.iter().find(|(_, m)| *m != multiplicity) {
        return Err(PolyError::Internal(format!(
            "factor {g} has multiplicity {m}, expected {multiplicity}"
        )));
    }
    let factors: Vec<Poly> = fac.factors.into_iter().map(|(g, _)| g).collect();
    let a_set = set_a(n_prime, r, q);
    let nr_divisors = num::divisors(n_prime * r);
    let x = Poly::x(field);

    let mut visited = alloc::vec![false; factors.len()];
    let mut found: Vec<(u32, u64, SharpOrbit)> = Vec::new();
    for start in 0..factors.len() {
        if visited[start] {
            continue;
        }
        let f = &factors[start];
        let j = *nr_divisors
            .iter()
            .find(|&&d| x.powmod(d, f).is_ok_and(|v| v.is_one()))
            .ok_or_else(|| PolyError::Internal(format!("no root order found for {f}")))?;
        if !a_set.contains(&j) {
            return Err(PolyError::Internal(format!("root order {j} of {f} is not in A")));
        }
        let mut members = alloc::vec![f.clone()];
        let mut g = f.sharp(k)?;
        while g != *f {
            if members.len() > l as usize {
                return Err(PolyError::Internal(format!("# orbit of {f} exceeds l = {l}")));
            }
            members.push(g.clone());
            g = g.sharp(k)?;
        }
        for m in &members {
            let idx = factors
                .iter()
                .position(|h| h == m)
                .ok_or_else(|| PolyError::Internal(format!("{m} is not a factor")))?;
            visited[idx] = true;
        }
        let a = members.len() as u32;
        let expected = b_class(j, p, field.e(), k, l).map_err(|e| PolyError::Internal(format!("{e}")))?;
        if a != expected || l % a != 0 {
            return Err(PolyError::Internal(format!(
                "orbit size {a} for root order {j}, expected {expected}"
            )));
        }
        let lead = (0..members.len())
            .min_by(|&i, &j| members[i].lex_cmp(&members[j]))
            .expect("nonempty");
        members.rotate_left(lead);
        found.push((a, j, SharpOrbit { members }));
    }

    let phi_r = num::euler_phi(r);
    let mut classes: Vec<OrbitClass> = Vec::new();
    for (a, j, orbit) in found {
        let t = divisors.iter().position(|&d| d == a).expect("a divides l") + 1;
        match classes.iter_mut().find(|c| c.t == t && c.j == j) {
            Some(c) => c.orbits.push(orbit),
            None => {
                let ord_j = num::ord_mod(q % j.max(1), j).expect("j is coprime to q");
                let beta = num::euler_phi(j) / (a as u64 * phi_r * ord_j);
                classes.push(OrbitClass { t, a, j, ord_j, beta, orbits: alloc::vec![orbit] });
            }
        }
    }
    classes.sort_by_key(|c| (c.t, c.j));
    for c in &mut classes {
        c.orbits.sort_by(|x, y| x.representative().lex_cmp(y.representative()));
        if c.orbits.len() as u64 != c.beta {
            return Err(PolyError::Internal(format!(
                "{} orbits for (t={}, j={}) but beta = {}",
                c.orbits.len(),
                c.t,
                c.j,
                c.beta
            )));
        }
        if c.orbits.iter().any(|o| o.member_degree() as u64 != c.ord_j) {
            return Err(PolyError::Internal(format!("member degree differs from ord_{}(q)", c.j)));
        }
    }

    Ok(ConstacyclicFactorization {
        field: field.clone(),
        n,
        n_prime: n_prime as usize,
        e_prime,
        multiplicity,
        lambda,
        r,
        k,
        l,
        divisors,
        classes,
    })
}
