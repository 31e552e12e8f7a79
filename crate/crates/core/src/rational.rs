//! Exact rational scalars.
//!
//! Every coefficient in the kernel is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use num::{BigInt, BigRational, One, Zero};

pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n / d` in lowest terms. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `base^exp` for a non-negative exponent.
pub fn pow_int(base: i64, exp: u32) -> Rational {
    Rational::from_integer(num::pow(BigInt::from(base), exp as usize))
}

/// Canonical text form: `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Returns the value as an `i64` if it is an integer in range.
pub fn to_i64(q: &Rational) -> Option<i64> {
    use num::ToPrimitive;
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let q = frac(6, -4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&frac(10, 5)), "2");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(5, 3), int(10));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(pow_int(-2, 5), int(-32));
    }
}
