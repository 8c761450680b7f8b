//! Constacyclic codes over `F_q` and over the split subring of `A`, their
//! k-Galois duals and hulls.

use alloc::{format, string::String, sync::Arc, vec, vec::Vec};

use thiserror::Error;

use crate::algebra::{AffineAlgebra, AlgebraElement, AlgebraError, Residue};
use crate::gf::{Fe, Field};
use crate::matrix::{direct_product, galois_dual_matrix, row_space_equal, GeneratorMatrix, MatrixError};
use crate::polyring::{galois_l, same_field, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("the constant lambda must be nonzero")]
    ZeroLambda,
    #[error("lambda is not a unit of the algebra")]
    NotAUnit,
    #[error("generator {0} does not divide x^n - lambda")]
    NotADivisor(String),
    #[error("Galois parameter k = {k} must satisfy 0 <= k < e = {e}")]
    GaloisParameter { k: u32, e: u32 },
    #[error("ord(lambda) = {order} does not divide {bound}; the hull is not constacyclic")]
    HullNotConstacyclic { order: u64, bound: u64 },
    #[error("expected {expected} component generators, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("input code {0} is not k-Galois self-dual")]
    NotSelfDualInput(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub self_dual: bool,
    pub dual_containing: bool,
    pub self_orthogonal: bool,
    pub lcd: bool,
}

/// The ideal `<g>` of `F_q[x]/<x^n - lambda>` with `g` monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstacyclicCode {
    n: usize,
    lambda: Fe,
    g: Poly,
    k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullResult {
    pub hull: ConstacyclicCode,
    /// `gcd(g, h^#)`, the generator of `C + C^perp`.
    pub dual_generator: Poly,
}

impl ConstacyclicCode {
    pub fn new(n: usize, lambda: Fe, g: &Poly, k: u32) -> Result<ConstacyclicCode, CodeError> {
        let f = g.field();
        if lambda.is_zero() {
            return Err(CodeError::ZeroLambda);
        }
        if k >= f.e() {
            return Err(CodeError::GaloisParameter { k, e: f.e() });
        }
        if g.is_zero() || !g.divides(&Poly::binomial(f, n, lambda)) {
            return Err(CodeError::NotADivisor(format!("{g}")));
        }
        Ok(ConstacyclicCode { n, lambda, g: g.monic(), k })
    }

    pub fn field(&self) -> &Arc<Field> {
        self.g.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> Fe {
        self.lambda
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn generator(&self) -> &Poly {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.n - self.g.deg0()
    }

    pub fn modulus(&self) -> Poly {
        Poly::binomial(self.field(), self.n, self.lambda)
    }

    /// `h = (x^n - lambda) / g`.
    pub fn parity_check(&self) -> Poly {
        self.modulus().div_exact(&self.g).expect("g divides x^n - lambda")
    }

    /// `lambda^(-p^(e-k))`.
    pub fn dual_lambda(&self) -> Fe {
        let f = self.field();
        f.frobenius(f.inv(self.lambda).expect("nonzero"), f.e() - self.k)
    }

    pub fn galois_dual(&self) -> Result<ConstacyclicCode, CodeError> {
        let hs = self.parity_check().sharp(self.k)?;
        ConstacyclicCode::new(self.n, self.dual_lambda(), &hs, self.k)
    }

    /// `ord(lambda) | 1 + p^(e-k)`, which makes the dual and hull
    /// lambda-constacyclic again.
    pub fn order_condition(&self) -> Result<(), CodeError> {
        let f = self.field();
        let order = f.element_order(self.lambda).expect("nonzero");
        let bound = 1 + (f.p() as u64).pow(f.e() - self.k);
        if !bound.is_multiple_of(order) {
            return Err(CodeError::HullNotConstacyclic { order, bound });
        }
        Ok(())
    }

    pub fn hull(&self) -> Result<HullResult, CodeError> {
        self.order_condition()?;
        let hs = self.parity_check().sharp(self.k)?;
        let hull = ConstacyclicCode::new(self.n, self.lambda, &self.g.lcm(&hs)?, self.k)?;
        Ok(HullResult { hull, dual_generator: self.g.gcd(&hs)? })
    }

    pub fn hull_dimension(&self) -> Result<usize, CodeError> {
        Ok(self.hull()?.hull.dim())
    }

    /// Rows `x^i g(x)` for `i < dim`.
    pub fn generator_matrix(&self) -> GeneratorMatrix {
        let f = self.field();
        let rows: Vec<Vec<Fe>> = (0..self.dim())
            .map(|i| {
                let mut r = vec![Fe::ZERO; self.n];
                for (j, &c) in self.g.coeffs().iter().enumerate() {
                    r[i + j] = c;
                }
                r
            })
            .collect();
        GeneratorMatrix::from_rows(f, self.n, &rows).expect("consistent shape")
    }

    /// `g g^((l-1)#)` divides `x^n - lambda`.
    pub fn dual_containing_by_congruence(&self) -> Result<bool, CodeError> {
        let f = self.field();
        let l = galois_l(f.e(), self.k).ok_or(CodeError::GaloisParameter { k: self.k, e: f.e() })?;
        let mut twisted = self.g.clone();
        for _ in 0..l - 1 {
            twisted = twisted.sharp(self.k)?;
        }
        Ok((&self.g * &twisted).divides(&self.modulus()))
    }

    pub fn classify(&self) -> Result<Classification, CodeError> {
        self.order_condition()?;
        let hs = self.parity_check().sharp(self.k)?;
        let dual_containing = self.g.divides(&hs);
        if dual_containing != self.dual_containing_by_congruence()? {
            return Err(CodeError::Internal(format!(
                "congruence and ideal tests disagree for g = {}",
                self.g
            )));
        }
        let self_orthogonal = hs.divides(&self.g);
        Ok(Classification {
            self_dual: dual_containing && self_orthogonal,
            dual_containing,
            self_orthogonal,
            lcd: self.hull_dimension()? == 0,
        })
    }
}

/// `C = sum_S C_S e_S` over the split subring of `A`.
#[derive(Debug, Clone)]
pub struct RingConstacyclicCode {
    algebra: Arc<AffineAlgebra>,
    n: usize,
    lambda: AlgebraElement,
    k: u32,
    components: Vec<ConstacyclicCode>,
}

#[derive(Debug, Clone)]
pub struct RingHull {
    pub hull: RingConstacyclicCode,
    pub dual_generators: Vec<Poly>,
}

impl RingConstacyclicCode {
    pub fn new(
        algebra: &Arc<AffineAlgebra>,
        n: usize,
        lambda: &AlgebraElement,
        generators: &[Poly],
        k: u32,
    ) -> Result<RingConstacyclicCode, CodeError> {
        if !Arc::ptr_eq(lambda.algebra(), algebra) {
            return Err(CodeError::FieldMismatch);
        }
        if !lambda.is_unit() {
            return Err(CodeError::NotAUnit);
        }
        let count = algebra.class_count();
        if generators.len() != count {
            return Err(CodeError::LengthMismatch { expected: count, got: generators.len() });
        }
        let mut components = Vec::with_capacity(count);
        for (g, &l) in generators.iter().zip(lambda.coords()) {
            if !same_field(g.field(), algebra.field()) {
                return Err(CodeError::FieldMismatch);
            }
            components.push(ConstacyclicCode::new(n, l, g, k)?);
        }
        Ok(RingConstacyclicCode { algebra: algebra.clone(), n, lambda: lambda.clone(), k, components })
    }

    fn with_components(&self, lambda: AlgebraElement, components: Vec<ConstacyclicCode>) -> RingConstacyclicCode {
        RingConstacyclicCode { algebra: self.algebra.clone(), n: self.n, lambda, k: self.k, components }
    }

    pub fn algebra(&self) -> &Arc<AffineAlgebra> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lambda(&self) -> &AlgebraElement {
        &self.lambda
    }

    pub fn components(&self) -> &[ConstacyclicCode] {
        &self.components
    }

    pub fn q_dimension(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }

    pub fn ring_dual(&self) -> Result<RingConstacyclicCode, CodeError> {
        let comps = self.components.iter().map(|c| c.galois_dual()).collect::<Result<Vec<_>, _>>()?;
        let coords: Vec<Fe> = comps.iter().map(|c| c.lambda()).collect();
        let lambda = self.algebra.recompose(&coords)?;
        Ok(self.with_components(lambda, comps))
    }

    pub fn ring_hull(&self) -> Result<RingHull, CodeError> {
        let mut comps = Vec::with_capacity(self.components.len());
        let mut dual_generators = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let h = c.hull()?;
            comps.push(h.hull);
            dual_generators.push(h.dual_generator);
        }
        Ok(RingHull { hull: self.with_components(self.lambda.clone(), comps), dual_generators })
    }

    pub fn classify(&self) -> Result<Classification, CodeError> {
        let mut out = Classification { self_dual: true, dual_containing: true, self_orthogonal: true, lcd: true };
        for c in &self.components {
            let k = c.classify()?;
            out.self_dual &= k.self_dual;
            out.dual_containing &= k.dual_containing;
            out.self_orthogonal &= k.self_orthogonal;
            out.lcd &= k.lcd;
        }
        Ok(out)
    }

    /// Coefficients of `sum_S e_S g_S(x)` in `A`, constant term first.
    pub fn combined_generator(&self) -> Vec<Residue> {
        combine(&self.algebra, self.components.iter().map(|c| c.generator()))
    }

    /// Coefficients of `sum_S e_S h_S^#(x)`, the generator of the dual.
    pub fn dual_combined_generator(&self) -> Result<Vec<Residue>, CodeError> {
        let duals = self.components.iter().map(|c| c.galois_dual()).collect::<Result<Vec<_>, _>>()?;
        Ok(combine(&self.algebra, duals.iter().map(|c| c.generator())))
    }
}

fn combine<'a>(alg: &AffineAlgebra, gens: impl Iterator<Item = &'a Poly>) -> Vec<Residue> {
    let mut out: Vec<Residue> = Vec::new();
    for (class, g) in alg.classes().iter().zip(gens) {
        for (i, &c) in g.coeffs().iter().enumerate() {
            if out.len() <= i {
                out.resize(i + 1, alg.zero());
            }
            out[i] = alg.add(&out[i], &alg.scale(class.residue(), c));
        }
    }
    out
}

pub fn is_galois_self_dual(c: &GeneratorMatrix, k: u32) -> Result<bool, CodeError> {
    Ok(row_space_equal(c, &galois_dual_matrix(c, k))?)
}

/// `C_1 x C_2` for k-Galois self-dual inputs.
pub fn product_selfdual(c1: &GeneratorMatrix, c2: &GeneratorMatrix, k: u32) -> Result<GeneratorMatrix, CodeError> {
    for (i, c) in [c1, c2].into_iter().enumerate() {
        if !is_galois_self_dual(c, k)? {
            return Err(CodeError::NotSelfDualInput(i + 1));
        }
    }
    let p = direct_product(c1, c2)?;
    if !is_galois_self_dual(&p, k)? {
        return Err(CodeError::Internal("product is not self-dual".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{example2_algebra, example3_algebra};
    use crate::matrix::intersect;
    use crate::polyring::factor;
    use crate::polyring::tests::{gf25, gf9, wpoly};
    use proptest::prelude::*;

    fn example2() -> RingConstacyclicCode {
        let alg = Arc::new(example2_algebra());
        let f = alg.field().clone();
        let lambda = alg.recompose(&[Fe::ONE, f.omega_pow(2)]).unwrap();
        let g1 = wpoly(&f, &[Some(4), Some(5), Some(3), Some(0)]);
        let g2 = wpoly(&f, &[Some(2), Some(0)]);
        RingConstacyclicCode::new(&alg, 7, &lambda, &[g1, g2], 1).unwrap()
    }

    fn example3() -> RingConstacyclicCode {
        let alg = Arc::new(example3_algebra());
        let f = alg.field().clone();
        let lambda = alg.recompose(&[Fe::ONE, f.omega_pow(8)]).unwrap();
        let g1 = &wpoly(&f, &[Some(12), Some(0)]) * &wpoly(&f, &[Some(0), Some(1), Some(0)]);
        let g2 = wpoly(&f, &[Some(20), Some(0)]);
        RingConstacyclicCode::new(&alg, 13, &lambda, &[g1, g2], 1).unwrap()
    }

    #[test]
    fn trivial_parity_checks() {
        let f = gf9();
        let m = Poly::binomial(&f, 5, Fe::ONE);
        let zero = ConstacyclicCode::new(5, Fe::ONE, &m, 1).unwrap();
        assert!(zero.parity_check().is_one());
        assert_eq!(zero.dim(), 0);
        assert_eq!(zero.galois_dual().unwrap().dim(), 5);
        let full = ConstacyclicCode::new(5, Fe::ONE, &Poly::one(&f), 1).unwrap();
        assert_eq!(full.parity_check(), m);
        let c = zero.classify().unwrap();
        assert!(c.self_orthogonal && c.lcd && !c.dual_containing);
        assert!(matches!(
            ConstacyclicCode::new(5, Fe::ONE, &Poly::x(&f), 1),
            Err(CodeError::NotADivisor(_))
        ));
        assert_eq!(ConstacyclicCode::new(5, Fe::ZERO, &m, 1), Err(CodeError::ZeroLambda));
    }

    #[test]
    fn example2_parity_check() {
        let code = example2();
        let f = code.algebra().field().clone();
        let c1 = &code.components()[0];
        let expected = &wpoly(&f, &[Some(4), Some(0)]) * &wpoly(&f, &[Some(4), Some(7), Some(1), Some(0)]);
        assert_eq!(c1.parity_check(), expected);
    }

    #[test]
    fn example2_ring_code() {
        let code = example2();
        assert_eq!(code.q_dimension(), 10);
        let dual = code.ring_dual().unwrap();
        assert_eq!(dual.q_dimension(), 4);
        assert_eq!(dual.ring_dual().unwrap().q_dimension(), 10);
        assert_eq!(code.ring_hull().unwrap().hull.q_dimension(), 0);
        let c = code.classify().unwrap();
        assert!(c.lcd && !c.dual_containing && !c.self_orthogonal);
        // lambda has order dividing 1 + 3, so the dual keeps the constant
        assert_eq!(dual.lambda(), code.lambda());
        assert_eq!(code.combined_generator().len(), 4);
    }

    #[test]
    fn example3_ring_code() {
        let code = example3();
        assert_eq!(code.q_dimension(), 22);
        let hull = code.ring_hull().unwrap();
        assert_eq!(hull.hull.q_dimension(), 2);
        let dims: Vec<usize> = hull.hull.components().iter().map(|c| c.dim()).collect();
        assert_eq!(dims.iter().sum::<usize>(), 2);
        assert!(!code.classify().unwrap().lcd);
    }

    #[test]
    fn hull_requires_order_condition() {
        let f = gf9();
        // omega has order 8, which does not divide 1 + 3
        let lambda = f.omega_pow(1);
        let c = ConstacyclicCode::new(4, lambda, &Poly::one(&f), 1).unwrap();
        assert_eq!(c.hull(), Err(CodeError::HullNotConstacyclic { order: 8, bound: 4 }));
    }

    #[test]
    fn self_dual_from_sharp_orbit() {
        // over GF(9) with k = 0 the two cubic factors of x^7 - 1 swap under #
        let f = gf9();
        let m = Poly::binomial(&f, 7, Fe::ONE);
        let facs = factor(&m).unwrap().factors;
        let cubic = facs.iter().find(|(p, _)| p.deg0() == 3).unwrap().0.clone();
        assert_ne!(cubic.sharp(0).unwrap(), cubic);
        let c = ConstacyclicCode::new(7, Fe::ONE, &cubic, 0).unwrap();
        let k = c.classify().unwrap();
        assert!(k.dual_containing && !k.self_dual);
        assert!(c.dual_containing_by_congruence().unwrap());
        let gm = c.generator_matrix();
        assert!(galois_dual_matrix(&gm, 0).is_subcode_of(&gm).unwrap());
        // with k = 1 the same cubic is fixed by #, so the code is not dual-containing
        let c1 = ConstacyclicCode::new(7, Fe::ONE, &cubic, 1).unwrap();
        assert_eq!(cubic.sharp(1).unwrap(), cubic);
        assert!(!c1.classify().unwrap().dual_containing);
    }

    #[test]
    fn products_of_self_dual_codes() {
        let f = gf9();
        let c = GeneratorMatrix::from_rows(&f, 2, &[vec![Fe::ONE, f.omega_pow(1)]]).unwrap();
        assert!(is_galois_self_dual(&c, 1).unwrap());
        let p = product_selfdual(&c, &c, 1).unwrap();
        assert_eq!((p.len(), p.dim()), (4, 2));
        assert_eq!((f.q() as u64).pow(p.dim() as u32), (f.q() as u64).pow(((2 + 2) / 2) as u32));
        let p8 = product_selfdual(&p, &p, 1).unwrap();
        assert_eq!((p8.len(), p8.dim()), (8, 4));
        let not = GeneratorMatrix::from_rows(&f, 2, &[vec![Fe::ONE, Fe::ONE]]).unwrap();
        assert_eq!(product_selfdual(&c, &not, 1), Err(CodeError::NotSelfDualInput(2)));
    }

    fn pick_code(f: &Arc<Field>, n: usize, lambda: Fe, mask: u64, k: u32) -> ConstacyclicCode {
        let m = Poly::binomial(f, n, lambda);
        let fac = factor(&m).unwrap();
        let mut g = Poly::one(f);
        let mut bit = 0;
        for (p, mult) in &fac.factors {
            for _ in 0..*mult {
                if mask >> (bit % 64) & 1 == 1 {
                    g = &g * p;
                }
                bit += 1;
            }
        }
        ConstacyclicCode::new(n, lambda, &g, k).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn dual_and_hull_match_oracle(
            which in 0usize..2,
            n in 1usize..13,
            lexp in 0u64..24,
            mask in any::<u64>(),
            k in 0u32..2,
        ) {
            let f = if which == 0 { gf9() } else { gf25() };
            let lambda = f.omega_pow(lexp);
            let c = pick_code(&f, n, lambda, mask, k);
            let d = c.galois_dual().unwrap();
            prop_assert_eq!(c.dim() + d.dim(), n);
            let gm = c.generator_matrix();
            let oracle_dual = galois_dual_matrix(&gm, k);
            prop_assert!(row_space_equal(&oracle_dual, &d.generator_matrix()).unwrap());
            let h = c.parity_check();
            let l = galois_l(f.e(), k).unwrap();
            if l == 2 {
                prop_assert_eq!(h.sharp(k).unwrap().sharp(k).unwrap(), h.monic());
            }
            match c.hull() {
                Ok(hr) => {
                    prop_assert!(hr.hull.generator().divides(&c.modulus()));
                    let oracle_hull = intersect(&gm, &oracle_dual).unwrap();
                    prop_assert!(row_space_equal(&oracle_hull, &hr.hull.generator_matrix()).unwrap());
                    let cls = c.classify().unwrap();
                    prop_assert_eq!(cls.dual_containing, oracle_dual.is_subcode_of(&gm).unwrap());
                    prop_assert_eq!(cls.self_orthogonal, gm.is_subcode_of(&oracle_dual).unwrap());
                    prop_assert_eq!(cls.lcd, oracle_hull.is_empty());
                }
                Err(CodeError::HullNotConstacyclic { .. }) => {
                    prop_assert!(c.order_condition().is_err());
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
