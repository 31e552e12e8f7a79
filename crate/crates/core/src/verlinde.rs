//! Bernoulli numbers, top theta powers on rank-2 moduli of curve bundles,
//! and the degree computations built on them.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{binomial, factorial, int, pow_int, Rational};
use crate::ring::{tensor_product, Ring, RingBuilder, RingError};
use crate::spaces::{self, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerlindeError {
    #[error("genus {0} is below the supported range")]
    GenusTooSmall(i64),
    #[error("rank {0} must be positive")]
    BadRank(i64),
    #[error("index {0} must be non-negative")]
    NegativeIndex(i64),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub type Result<T> = std::result::Result<T, VerlindeError>;

/// `B₀, …, B_n` from `Σ_{k=0}^{n} C(n+1,k) B_k = 0`, `B₀ = 1` (so `B₁ = −1/2`).
pub fn bernoulli_table(n: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let s = (0..m).fold(Rational::zero(), |acc, k| acc + binomial(m + 1, k) * &b[k as usize]);
        b.push(-s / int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(VerlindeError::NegativeIndex(n));
    }
    Ok(bernoulli_table(n as u32).pop().expect("table has n+1 entries"))
}

/// `dim M_C(n, d) = n²(g−1) + 1` for coprime `(n, d)`.
pub fn moduli_dimension(g: i64, n: i64) -> i64 {
    n * n * (g - 1) + 1
}

/// `∫Θ^{dim}` on the rank-2 odd-degree moduli space of a genus-`g` curve:
/// `dim!·(2^{2g−2} − 2)·(−1)^g·2^{2g−2}·B_{2g−2}/(2g−2)!` with `dim = 4g − 3`.
pub fn theta_top_rank2(g: i64) -> Result<Rational> {
    if g < 2 {
        return Err(VerlindeError::GenusTooSmall(g));
    }
    let dim = moduli_dimension(g, 2) as u32;
    let e = (2 * g - 2) as u32;
    let two_e = pow_int(2, e);
    let sign = if g % 2 == 0 { int(1) } else { int(-1) };
    Ok(factorial(dim) * (&two_e - int(2)) * sign * two_e * bernoulli(e as i64)? / factorial(e))
}

/// Top-power numbers for the rank-2 moduli space `M` and its
/// fixed-determinant part `SM`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaNumbers {
    pub g: i64,
    pub dim_m: i64,
    pub theta_top_sm: Rational,
    pub theta_top_m: Rational,
}

/// The `SM` number is obtained by inverting the cover relation
/// `∫_M Θ^{dim} = C(dim, g)·g!·∫_{SM} Θ^{dim−g}`.
pub fn theta_numbers(g: i64) -> Result<ThetaNumbers> {
    let theta_top_m = theta_top_rank2(g)?;
    let dim_m = moduli_dimension(g, 2);
    let theta_top_sm = &theta_top_m / (binomial(dim_m as u32, g as u32) * factorial(g as u32));
    Ok(ThetaNumbers {
        g,
        dim_m,
        theta_top_sm,
        theta_top_m,
    })
}

/// `Q[t]/(t^{dim+1})` with `∫t^{dim} = top`, a cohomology model for the theta
/// class on a space of dimension `dim`.
pub fn theta_model_ring(name: &str, dim: u32, top: Rational) -> Result<Ring> {
    if dim == 0 {
        return Ok(RingBuilder::new(0).integral_q("1", top).build()?);
    }
    Ok(RingBuilder::new(2 * dim)
        .generator(name, 2)
        .rule(&format!("{name}^{}", dim + 1), &[])
        .integral_q(&format!("{name}^{dim}"), top)
        .build()?)
}

/// `∫_M Θ^{dim}` through the étale cover `SM × Pic⁰ → M` of degree `n^{2g}`,
/// along which `Θ` pulls back to `Θ_SM + n²Θ₀`.
pub fn deg_n0_via_cover(g: i64, n: i64, theta_top_sm: &Rational) -> Result<Rational> {
    if g < 1 {
        return Err(VerlindeError::GenusTooSmall(g));
    }
    if n < 1 {
        return Err(VerlindeError::BadRank(n));
    }
    let dim_m = moduli_dimension(g, n);
    let dim_sm = (dim_m - g) as u32;
    let sm = theta_model_ring("t", dim_sm, theta_top_sm.clone())?;
    let jac = spaces::abelian_ring(g)?.presentation().renamed(&[("theta", "theta0")])?;
    let cover = tensor_product(&sm, &jac)?;
    let t = if dim_sm == 0 { cover.zero() } else { cover.gen("t")? };
    let pulled = &t + &cover.gen("theta0")?.scale_int(n * n);
    let total = pulled.pow(dim_m as u32).integrate()?;
    Ok(total / pow_int(n, 2 * g as u32))
}

/// `(deg F, deg N₀) = ((n(2g−2))^{N}·N!, (2g−2)^{N}·∫_M Θ^{N})` with the
/// fiber dimension `N = n²(g−1) + 1`.
pub fn general_degrees(g: i64, n: i64, theta_top: &Rational) -> Result<(Rational, Rational)> {
    if g < 2 {
        return Err(VerlindeError::GenusTooSmall(g));
    }
    if n < 1 {
        return Err(VerlindeError::BadRank(n));
    }
    let dim = moduli_dimension(g, n) as u32;
    let deg_f = pow_int(n * (2 * g - 2), dim) * factorial(dim);
    let deg_n0 = pow_int(2 * g - 2, dim) * theta_top;
    Ok((deg_f, deg_n0))
}

/// `true` iff `q` is a strictly positive integer.
pub fn is_positive_integer(q: &Rational) -> bool {
    q.is_integer() && q.is_positive()
}
