//! The twisted reciprocal `f -> f^#` attached to the k-Galois inner product.

use alloc::vec::Vec;

use super::{Poly, PolyError};

impl Poly {
    /// `f^#(x) = sum_i f_0^(-p^(e-k)) f_i^(p^(e-k)) x^(deg f - i)`.
    ///
    /// The leading coefficient comes out as `f_0^(-s) f_0^s = 1`, so the
    /// result is monic without any rescaling. Roots map as `a -> a^(-p^(e-k))`.
    pub fn sharp(&self, k: u32) -> Result<Poly, PolyError> {
        let f = self.field();
        if k >= f.e() {
            return Err(PolyError::GaloisParameter { k, e: f.e() });
        }
        let f0 = self.coeff(0);
        if f0.is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        let s = f.e() - k;
        let scale = f.frobenius(f.inv(f0).expect("nonzero"), s);
        let coeffs: Vec<_> = self
            .coeffs()
            .iter()
            .rev()
            .map(|&c| f.mul(scale, f.frobenius(c, s)))
            .collect();
        Ok(Poly::new(f, coeffs))
    }
}

/// Least even `l` with `e | l (e - k)`: the number of `#` applications that
/// returns every polynomial to itself.
pub fn galois_l(e: u32, k: u32) -> Option<u32> {
    if k >= e {
        return None;
    }
    (1..=2 * e).find(|&i| i % 2 == 0 && (i * (e - k)).is_multiple_of(e))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{gf25, gf9, wpoly};
    use super::*;
    use crate::gf::{Fe, Field};
    use alloc::sync::Arc;
    use proptest::prelude::*;

    #[test]
    fn l_values() {
        assert_eq!(galois_l(2, 1), Some(2));
        assert_eq!(galois_l(1, 0), Some(2));
        assert_eq!(galois_l(4, 0), Some(2));
        assert_eq!(galois_l(3, 1), Some(6));
        assert_eq!(galois_l(4, 1), Some(4));
        assert_eq!(galois_l(2, 2), None);
    }

    #[test]
    fn x_minus_one_is_fixed() {
        for f in [gf9(), gf25()] {
            let g = &Poly::x(&f) - &Poly::one(&f);
            for k in 0..2 {
                assert_eq!(g.sharp(k).unwrap(), g);
            }
        }
    }

    #[test]
    fn zero_constant_rejected() {
        let f = gf9();
        assert_eq!(Poly::x(&f).sharp(1), Err(PolyError::ZeroConstantTerm));
        assert!(matches!(
            Poly::one(&f).sharp(2),
            Err(PolyError::GaloisParameter { .. })
        ));
    }

    #[test]
    fn cubic_factor_maps_to_a_factor_of_x7_minus_1() {
        let f = gf9();
        let target = Poly::binomial(&f, 7, Fe::ONE);
        let b = wpoly(&f, &[Some(4), Some(7), Some(1), Some(0)]);
        let bs = b.sharp(1).unwrap();
        assert!(bs.divides(&target));
        assert_eq!(bs.degree(), Some(3));
    }

    #[test]
    fn roots_map_as_expected() {
        // over GF(25) with k = 1: root a of f gives root a^(-5) of f^#
        let f = gf25();
        for a in 1..24u64 {
            let alpha = f.omega_pow(a);
            let g = Poly::new(&f, alloc::vec![f.neg(alpha), Fe::ONE]);
            let gs = g.sharp(1).unwrap();
            let beta = f.pow(f.inv(alpha).unwrap(), 5);
            assert!(gs.eval(beta).is_zero());
        }
    }

    fn fields() -> impl Strategy<Value = Arc<Field>> {
        prop_oneof![
            Just(gf9()),
            Just(gf25()),
            Just(Arc::new(Field::new(2, 4, &[1, 1, 0, 0, 1]).unwrap())),
            Just(Arc::new(Field::new(2, 3, &[1, 1, 0, 1]).unwrap())),
        ]
    }

    proptest! {
        #[test]
        fn multiplicative_and_periodic(
            f in fields(),
            a in proptest::collection::vec(1u32..1000, 1..6),
            b in proptest::collection::vec(1u32..1000, 1..6),
            k in 0u32..4,
        ) {
            let k = k % f.e();
            let mk = |v: &[u32]| Poly::new(&f, v.iter().map(|&r| f.omega_pow(r as u64)).collect());
            let pa = mk(&a);
            let pb = mk(&b);
            let prod = &pa * &pb;
            prop_assert_eq!(prod.sharp(k).unwrap(), &pa.sharp(k).unwrap() * &pb.sharp(k).unwrap());
            let l = galois_l(f.e(), k).unwrap();
            let mut g = pa.clone();
            for _ in 0..l {
                g = g.sharp(k).unwrap();
            }
            prop_assert_eq!(g, pa.monic());
        }
    }
}
