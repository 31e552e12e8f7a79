//! Numerical K-theory on a polarized K3 surface and on curves.
//!
//! Classes on the K3 are Mukai vectors `(r, m·H, s)` whose degree-2 part is a
//! multiple of the polarization `H`; all the pairings only see `c.H`, so the
//! rank-one lattice `Z·H` is enough. Classes on a curve are `(rank, degree)`.

use std::fmt;
use std::ops::Add;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MukaiError {
    #[error("vectors use different polarizations (H² = {0} vs {1})")]
    MixedPolarization(i64, i64),
    #[error("H² must be even and at least 2, got {0}")]
    BadPolarization(i64),
    #[error("genus {0} has no nilpotent-cone strata")]
    GenusTooSmall(i64),
}

pub type Result<T> = std::result::Result<T, MukaiError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MukaiVector {
    pub r: i64,
    /// `c₁ = m·H`
    pub m: i64,
    pub s: i64,
    /// `H²`
    pub h2: i64,
}

impl MukaiVector {
    pub fn new(r: i64, m: i64, s: i64, h2: i64) -> Result<Self> {
        if h2 < 2 || h2 % 2 != 0 {
            return Err(MukaiError::BadPolarization(h2));
        }
        Ok(MukaiVector { r, m, s, h2 })
    }

    /// `c₁.H`
    pub fn c_dot_h(&self) -> i64 {
        self.m * self.h2
    }

    /// Derived dual: negates the degree-2 part.
    pub fn dual(&self) -> Self {
        MukaiVector { m: -self.m, ..*self }
    }

    fn same_polarization(&self, other: &Self) -> Result<()> {
        if self.h2 == other.h2 {
            Ok(())
        } else {
            Err(MukaiError::MixedPolarization(self.h2, other.h2))
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}H, {})", self.r, self.m, self.s)
    }
}

/// `⟨(r,c,s),(r',c',s')⟩ = c·c' − r s' − r' s`
pub fn mukai_pairing(a: &MukaiVector, b: &MukaiVector) -> Result<i64> {
    a.same_polarization(b)?;
    Ok(a.m * b.m * a.h2 - a.r * b.s - b.r * a.s)
}

/// Beauville–Bogomolov form transported through the determinant map: the
/// Mukai pairing corrected by `+2rr'`.
pub fn bb_pairing(a: &MukaiVector, b: &MukaiVector) -> Result<i64> {
    Ok(mukai_pairing(a, b)? + 2 * a.r * b.r)
}

/// `χ(x ⊗ y) = −⟨x^∨, y⟩`.
pub fn chi_k3(x: &MukaiVector, y: &MukaiVector) -> Result<i64> {
    Ok(-mukai_pairing(&x.dual(), y)?)
}

/// `dim M(v) = ⟨v,v⟩ + 2`.
pub fn moduli_dimension(v: &MukaiVector) -> Result<i64> {
    Ok(mukai_pairing(v, v)? + 2)
}

/// `(rank, degree)` in `K(C)_num`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveKClass {
    pub r: i64,
    pub d: i64,
}

impl CurveKClass {
    pub const fn new(r: i64, d: i64) -> Self {
        CurveKClass { r, d }
    }

    pub fn scale(&self, t: i64) -> Self {
        CurveKClass::new(self.r * t, self.d * t)
    }

    pub fn chi(&self, g: i64) -> i64 {
        curve_chi(self, g)
    }
}

impl Add for CurveKClass {
    type Output = CurveKClass;
    fn add(self, o: CurveKClass) -> CurveKClass {
        CurveKClass::new(self.r + o.r, self.d + o.d)
    }
}

impl fmt::Display for CurveKClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.d)
    }
}

/// Product in `K(C)_num`: `(r,d)·(r',d') = (rr', rd' + r'd)`.
pub fn curve_mul(a: &CurveKClass, b: &CurveKClass) -> CurveKClass {
    CurveKClass::new(a.r * b.r, a.r * b.d + b.r * a.d)
}

/// Riemann–Roch on a genus-`g` curve: `χ = d + r(1 − g)`.
pub fn curve_chi(a: &CurveKClass, g: i64) -> i64 {
    a.d + a.r * (1 - g)
}

/// Derived restriction `Li*` to a smooth curve `D ∈ |nH|`: `(r, c, s) ↦ (r, c.D)`.
pub fn restrict_to_curve(x: &MukaiVector, n: i64) -> CurveKClass {
    CurveKClass::new(x.r, n * x.c_dot_h())
}

/// Genus of a smooth curve in `|nH|`, by adjunction on a K3: `2g − 2 = n²H²`.
pub fn genus_of_curve_in(h2: i64, n: i64) -> i64 {
    n * n * h2 / 2 + 1
}

/// `(deg L, deg D)` for the locally closed strata `E_k` of the reduced
/// nilpotent cone in rank 2: `k = 1, …, g−1` and `d = 2g − 2k − 1`.
pub fn nilpotent_strata(g: i64) -> Result<Vec<(i64, i64)>> {
    if g < 2 {
        return Err(MukaiError::GenusTooSmall(g));
    }
    Ok((1..g).map(|k| (k, 2 * g - 2 * k - 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v() -> MukaiVector {
        MukaiVector::new(0, 2, -1, 2).unwrap()
    }

    #[test]
    fn moduli_of_v() {
        assert_eq!(mukai_pairing(&v(), &v()).unwrap(), 8);
        assert_eq!(moduli_dimension(&v()).unwrap(), 10);
    }

    #[test]
    fn bb_of_u0_u1() {
        let u0 = MukaiVector::new(0, 0, 1, 2).unwrap();
        let u1 = MukaiVector::new(-4, -1, 17, 2).unwrap();
        assert_eq!(mukai_pairing(&u0, &u1).unwrap(), 4);
        assert_eq!(bb_pairing(&u0, &u1).unwrap(), 4);
        assert_eq!(bb_pairing(&u0, &u0).unwrap(), 0);
        assert_eq!(120 * 4i64.pow(5), 122880);
    }

    #[test]
    fn v_perp_membership() {
        let u1 = MukaiVector::new(-4, -1, 5, 2).unwrap();
        assert_eq!(chi_k3(&u1, &v()).unwrap(), 0);
        let zero = MukaiVector::new(0, 0, 0, 2).unwrap();
        assert_eq!(chi_k3(&u1, &zero).unwrap(), 0);
        // the undualized pairing does not describe v⊥
        assert_ne!(mukai_pairing(&u1, &v()).unwrap(), 0);
    }

    #[test]
    fn mixed_polarization() {
        let a = MukaiVector::new(1, 0, 0, 2).unwrap();
        let b = MukaiVector::new(1, 0, 0, 4).unwrap();
        assert_eq!(
            mukai_pairing(&a, &b).unwrap_err(),
            MukaiError::MixedPolarization(2, 4)
        );
        assert_eq!(MukaiVector::new(0, 0, 0, 3).unwrap_err(), MukaiError::BadPolarization(3));
    }

    #[test]
    fn restriction() {
        let u1 = MukaiVector::new(-4, -1, 9, 2).unwrap();
        assert_eq!(restrict_to_curve(&u1, 2), CurveKClass::new(-4, -4));
        assert_eq!(restrict_to_curve(&u1, 1), CurveKClass::new(-4, -2));
        let zero = MukaiVector::new(0, 0, 0, 2).unwrap();
        assert_eq!(restrict_to_curve(&zero, 3), CurveKClass::new(0, 0));
        assert_eq!(genus_of_curve_in(2, 1), 2);
        assert_eq!(genus_of_curve_in(2, 2), 5);
    }

    #[test]
    fn curve_k_theory() {
        let li = CurveKClass::new(-4, -2);
        assert_eq!(curve_chi(&li, 2), 2);
        assert_eq!(curve_mul(&CurveKClass::new(1, 0), &li), li);
        let omega_inv = CurveKClass::new(1, -2);
        assert_eq!(curve_mul(&CurveKClass::new(2, 1), &omega_inv), CurveKClass::new(2, -3));
    }

    /// All `(k, d)` with `d ≥ 0` satisfying the Euler-characteristic identity
    /// `1 + 2(1−g) = 2k + d − (2g−2) + 2(1−g)` and the stability inequality
    /// `(1 + 2(1−g))/2 < k + 1 − g`, by enumeration.
    fn strata_by_enumeration(g: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in -30..=30 {
            for d in 0..=60 {
                let chi_e = 1 + 2 * (1 - g);
                let chi_sum = 2 * k + d - (2 * g - 2) + 2 * (1 - g);
                let stable = chi_e < 2 * (k + 1 - g);
                if chi_e == chi_sum && stable {
                    out.push((k, d));
                }
            }
        }
        out
    }

    #[test]
    fn strata() {
        assert_eq!(nilpotent_strata(2).unwrap(), vec![(1, 1)]);
        assert_eq!(nilpotent_strata(3).unwrap(), vec![(1, 3), (2, 1)]);
        for g in 2..=8 {
            assert_eq!(nilpotent_strata(g).unwrap(), strata_by_enumeration(g));
        }
        assert_eq!(nilpotent_strata(1).unwrap_err(), MukaiError::GenusTooSmall(1));
    }

    fn mv() -> impl Strategy<Value = MukaiVector> {
        (-20i64..20, -20i64..20, -20i64..20).prop_map(|(r, m, s)| MukaiVector::new(r, m, s, 2).unwrap())
    }

    proptest! {
        #[test]
        fn pairings_symmetric_bilinear(a in mv(), b in mv(), c in mv(), t in -5i64..5) {
            prop_assert_eq!(mukai_pairing(&a, &b).unwrap(), mukai_pairing(&b, &a).unwrap());
            prop_assert_eq!(bb_pairing(&a, &b).unwrap(), bb_pairing(&b, &a).unwrap());
            let sum = MukaiVector::new(a.r + t * c.r, a.m + t * c.m, a.s + t * c.s, 2).unwrap();
            prop_assert_eq!(
                mukai_pairing(&sum, &b).unwrap(),
                mukai_pairing(&a, &b).unwrap() + t * mukai_pairing(&c, &b).unwrap()
            );
            prop_assert_eq!(
                bb_pairing(&sum, &b).unwrap(),
                bb_pairing(&a, &b).unwrap() + t * bb_pairing(&c, &b).unwrap()
            );
        }

        #[test]
        fn v_perp_is_r_equals_4m(r in -40i64..40, m in -10i64..10, s in -10i64..10) {
            let x = MukaiVector::new(r, m, s, 2).unwrap();
            prop_assert_eq!(chi_k3(&x, &v()).unwrap() == 0, r == 4 * m);
        }

        #[test]
        fn curve_chi_additive(r1 in -50i64..50, d1 in -50i64..50, r2 in -50i64..50, d2 in -50i64..50, g in 0i64..8) {
            let a = CurveKClass::new(r1, d1);
            let b = CurveKClass::new(r2, d2);
            prop_assert_eq!(curve_chi(&(a + b), g), curve_chi(&a, g) + curve_chi(&b, g));
        }

        #[test]
        fn theta_class_is_orthogonal(n in 1i64..6, d in -20i64..20, g in 0i64..6) {
            let c = CurveKClass::new(n, d);
            let perp = CurveKClass::new(-n, d + n * (1 - g));
            prop_assert_eq!(curve_chi(&curve_mul(&c, &perp), g), 0);
        }
    }
}
