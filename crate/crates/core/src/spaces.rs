//! Cohomology rings of the concrete spaces: points, curves, Jacobians,
//! `Pic^k(C) × C`, products and projective bundles.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::rational::{factorial, Rational};
use crate::ring::{
    tensor_product, Element, Generator, Monomial, RewriteRule, Ring, RingBuilder, RingError,
    RingPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("genus {0} is out of range for this builder")]
    NegativeGenus(i64),
    #[error("Chern class c{index} must be homogeneous of degree {expected} in the base ring")]
    BadChernDegrees { index: usize, expected: u32 },
    #[error("bundle rank must be positive, got {0}")]
    BadRank(i64),
    #[error("ring is not a projective bundle")]
    NotABundleRing,
    #[error("named class `{0}` occurs in both factors")]
    NamedClassCollision(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type Result<T> = std::result::Result<T, SpaceError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    Point,
    Curve { genus: u32 },
    Abelian { genus: u32 },
    JacXCurve { genus: u32, degree: i64, with_mu: bool },
    Product,
    ProjBundle { fiber: String, rank: u32 },
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Point => write!(f, "point"),
            SpaceKind::Curve { genus } => write!(f, "curve(g={genus})"),
            SpaceKind::Abelian { genus } => write!(f, "abelian(g={genus})"),
            SpaceKind::JacXCurve {
                genus,
                degree,
                with_mu,
            } => write!(f, "jac_x_curve(g={genus}, k={degree}, mu={with_mu})"),
            SpaceKind::Product => write!(f, "product"),
            SpaceKind::ProjBundle { fiber, rank } => write!(f, "proj_bundle({fiber}, rank {rank})"),
        }
    }
}

#[derive(Debug, Clone)]
struct BundleData {
    base: SpaceRing,
    chern: Vec<Element>,
}

/// A presentation together with the named classes that live on it.
#[derive(Debug, Clone)]
pub struct SpaceRing {
    presentation: Ring,
    named: BTreeMap<String, Element>,
    kind: SpaceKind,
    bundle: Option<Box<BundleData>>,
}

impl SpaceRing {
    pub fn presentation(&self) -> &Ring {
        &self.presentation
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn named_classes(&self) -> &BTreeMap<String, Element> {
        &self.named
    }

    /// A named class, falling back to a generator of the same name.
    pub fn class(&self, name: &str) -> Result<Element> {
        if let Some(e) = self.named.get(name) {
            return Ok(e.clone());
        }
        Ok(self.presentation.gen(name)?)
    }

    /// Base space and Chern classes, for projective bundles.
    pub fn bundle_base(&self) -> Option<(&SpaceRing, &[Element])> {
        self.bundle.as_deref().map(|b| (&b.base, b.chern.as_slice()))
    }

    fn from_builder(builder: RingBuilder, kind: SpaceKind, named: &[(&str, &str)]) -> Result<Self> {
        let presentation = builder.build()?;
        let mut classes = BTreeMap::new();
        for (name, gen) in named {
            classes.insert(name.to_string(), presentation.gen(gen)?);
        }
        Ok(SpaceRing {
            presentation,
            named: classes,
            kind,
            bundle: None,
        })
    }
}

pub fn point() -> SpaceRing {
    SpaceRing {
        presentation: RingPresentation::point(),
        named: BTreeMap::new(),
        kind: SpaceKind::Point,
        bundle: None,
    }
}

/// `Q[θ]/(θ^{g+1})` with `∫θ^g = g!`, the principally polarized abelian
/// variety of dimension `g`. For `g = 0` this is the point, with `θ = 0`.
pub fn abelian_ring(g: i64) -> Result<SpaceRing> {
    if g < 0 {
        return Err(SpaceError::NegativeGenus(g));
    }
    if g == 0 {
        let mut p = point();
        p.kind = SpaceKind::Abelian { genus: 0 };
        let zero = p.presentation.zero();
        p.named.insert("theta".into(), zero);
        return Ok(p);
    }
    let g = g as u32;
    let builder = RingBuilder::new(2 * g)
        .generator("theta", 2)
        .rule(&format!("theta^{}", g + 1), &[])
        .integral_q(&format!("theta^{g}"), factorial(g));
    SpaceRing::from_builder(builder, SpaceKind::Abelian { genus: g }, &[("theta", "theta")])
}

/// Even cohomology of a genus-`g` curve: `Q[ρ]/(ρ²)`, `∫ρ = 1`.
pub fn curve_even_ring(g: i64) -> Result<SpaceRing> {
    if g < 0 {
        return Err(SpaceError::NegativeGenus(g));
    }
    let builder = RingBuilder::new(2)
        .tagged_generator("rho", 2, 2)
        .rule("rho^2", &[])
        .integral("rho", 1);
    SpaceRing::from_builder(
        builder,
        SpaceKind::Curve { genus: g as u32 },
        &[("rho", "rho")],
    )
}

/// Even part of `H*(Pic^k(C) × C)` for a genus-`g` curve.
///
/// Generators, in precedence order: `gamma` (the (1,1) Künneth part of the
/// Poincaré bundle's `c₁`, curve-degree 1), optionally `mu` (its (2,0) part),
/// `theta` and `rho` (point class of `C`, curve-degree 2). Relations:
/// `ρ² = 0`, `γρ = 0`, `γ² = −2ρθ`, `θ^{g+1} = 0`, `γθ^g = 0`.
///
/// With `with_mu`, `μ` is a formal class subject to `μ² = μγ = μθ^g = 0` and
/// `μθρ = 0` (the last forced by `μγ = 0` and `γ² = −2ρθ`); top-degree
/// integrals involving `μ` are set to zero. This model is only faithful for
/// extracting components of degree ≤ 2 from curve pushforwards, which is all
/// the determinant-line-bundle computations need.
///
/// Named classes: `theta`, `rho`, `gamma`, `mu` (if present) and
/// `pi = γ + kρ`, the first Chern class of the Poincaré bundle minus its
/// (2,0) part.
pub fn jac_x_curve_ring(g: i64, k: i64, with_mu: bool) -> Result<SpaceRing> {
    if g < 1 {
        return Err(SpaceError::NegativeGenus(g));
    }
    let gu = g as u32;
    let mut b = RingBuilder::new(2 * gu + 2).tagged_generator("gamma", 2, 1);
    if with_mu {
        b = b.generator("mu", 2);
    }
    b = b
        .generator("theta", 2)
        .tagged_generator("rho", 2, 2)
        .rule("rho^2", &[])
        .rule("gamma*rho", &[])
        .rule("gamma^2", &[(-2, "theta*rho")])
        .rule(&format!("theta^{}", gu + 1), &[])
        .rule(&format!("gamma*theta^{gu}"), &[])
        .integral_q(&format!("theta^{gu}*rho"), factorial(gu));
    if with_mu {
        b = b
            .rule("mu^2", &[])
            .rule("mu*gamma", &[])
            .rule(&format!("mu*theta^{gu}"), &[])
            .rule("mu*theta*rho", &[]);
        if gu == 1 {
            b = b.integral("mu*rho", 0);
        }
    }
    let mut named = vec![("theta", "theta"), ("rho", "rho"), ("gamma", "gamma")];
    if with_mu {
        named.push(("mu", "mu"));
    }
    let mut space = SpaceRing::from_builder(
        b,
        SpaceKind::JacXCurve {
            genus: gu,
            degree: k,
            with_mu,
        },
        &named,
    )?;
    let pi = &space.named["gamma"] + &space.named["rho"].scale_int(k);
    space.named.insert("pi".into(), pi);
    Ok(space)
}

/// `P(E) → base` for a rank-`rank` bundle with Chern classes `chern[i] = c_{i+1}`.
///
/// Adds the hyperplane class `fiber_name` with the highest precedence and the
/// relation `ζ^r = −Σ cᵢ ζ^{r−i}`; the integral is `∫ b·ζ^{r−1} = ∫_base b`.
pub fn proj_bundle_ring(
    base: &SpaceRing,
    chern: &[Element],
    rank: i64,
    fiber_name: &str,
) -> Result<SpaceRing> {
    if rank < 1 {
        return Err(SpaceError::BadRank(rank));
    }
    let rank = rank as u32;
    let bring = &base.presentation;
    if chern.len() > rank as usize {
        return Err(SpaceError::BadChernDegrees {
            index: chern.len(),
            expected: 2 * chern.len() as u32,
        });
    }
    let mut chern_norm = Vec::new();
    for (i, c) in chern.iter().enumerate() {
        let expected = 2 * (i as u32 + 1);
        let c = c
            .lift_into(bring)
            .map_err(|_| SpaceError::BadChernDegrees { index: i + 1, expected })?;
        if !c.is_zero() && c.homogeneous_degree() != Some(expected) {
            return Err(SpaceError::BadChernDegrees { index: i + 1, expected });
        }
        chern_norm.push(c);
    }

    let shift = |m: &Monomial, fiber_exp: u32| {
        let mut e = vec![fiber_exp];
        e.extend_from_slice(m.exponents());
        Monomial::from_exponents(e)
    };
    let mut generators = vec![Generator::new(fiber_name, 2)];
    generators.extend(bring.generators().iter().cloned());
    let mut rules: Vec<RewriteRule> = bring
        .rules()
        .iter()
        .chain(bring.overflow_rules().iter())
        .map(|r| RewriteRule {
            lhs: shift(&r.lhs, 0),
            rhs: r.rhs.iter().map(|(m, c)| (shift(m, 0), c.clone())).collect(),
        })
        .collect();
    let mut rhs = BTreeMap::new();
    for (i, c) in chern_norm.iter().enumerate() {
        for (m, v) in c.terms() {
            let key = shift(m, rank - (i as u32 + 1));
            let entry = rhs.entry(key).or_insert_with(Rational::zero);
            *entry -= v;
        }
    }
    rhs.retain(|_, v: &mut Rational| !v.is_zero());
    rules.push(RewriteRule {
        lhs: shift(&Monomial::one(bring.generators().len()), rank),
        rhs,
    });
    let integrals = bring
        .integrals()
        .iter()
        .map(|(m, v)| (shift(m, rank - 1), v.clone()))
        .collect();
    let presentation = RingPresentation::new(
        generators,
        rules,
        bring.top_degree() + 2 * (rank - 1),
        integrals,
    )?;
    let mut named = BTreeMap::new();
    for (name, e) in &base.named {
        named.insert(name.clone(), e.lift_into(&presentation)?);
    }
    named.insert(fiber_name.to_string(), presentation.gen(fiber_name)?);
    Ok(SpaceRing {
        presentation,
        named,
        kind: SpaceKind::ProjBundle {
            fiber: fiber_name.to_string(),
            rank,
        },
        bundle: Some(Box::new(BundleData {
            base: base.clone(),
            chern: chern_norm,
        })),
    })
}

/// `τ_*` for a projective bundle: the coefficient of `ζ^{r−1}` in the normal
/// form, as a class on the base.
pub fn bundle_pushforward(total: &SpaceRing, x: &Element) -> Result<Element> {
    let (SpaceKind::ProjBundle { fiber, rank }, Some(bundle)) = (&total.kind, &total.bundle)
    else {
        return Err(SpaceError::NotABundleRing);
    };
    let x = x.lift_into(&total.presentation)?;
    let coeff = x.coeff_of(fiber, rank - 1)?;
    Ok(coeff.lift_into(&bundle.base.presentation)?)
}

/// Künneth product of two spaces; generator and class names must be disjoint.
pub fn product(a: &SpaceRing, b: &SpaceRing) -> Result<SpaceRing> {
    let presentation = tensor_product(&a.presentation, &b.presentation)?;
    let mut named = BTreeMap::new();
    for (name, e) in a.named.iter().chain(b.named.iter()) {
        if named.contains_key(name) {
            return Err(SpaceError::NamedClassCollision(name.clone()));
        }
        named.insert(name.clone(), e.lift_into(&presentation)?);
    }
    Ok(SpaceRing {
        presentation,
        named,
        kind: SpaceKind::Product,
        bundle: None,
    })
}

/// Chern data of the extension bundle `W = V ⊕ O` over `Pic¹(C) × C`.
#[derive(Debug, Clone)]
pub struct ExtensionBundle {
    pub rank: u32,
    /// `c₁, …, c_rank` as classes pulled back from the curve factor.
    pub chern: Vec<Element>,
}

/// Chern classes of `W`, computed from
/// `0 → ω^{−2} → O ⊗ H¹(ω^{−1}) → V′ → 0` on `C` and `W = p₂*V′ ⊕ O`.
///
/// The Whitney formula gives `c(V′) = c(ω^{−2})^{−1}` in `Q[ρ]/ρ²`, so
/// `c₁(W) = 2(2g−2)ρ` and all higher classes vanish.
pub fn curve_chern_of_extension_bundle(g: i64) -> Result<ExtensionBundle> {
    if g < 2 {
        return Err(SpaceError::NegativeGenus(g));
    }
    let curve = curve_even_ring(g)?;
    let ring = curve.presentation();
    let rho = curve.class("rho")?;
    let omega = rho.scale_int(2 * g - 2);
    // c(ω^{-2}) = 1 − 2c₁(ω)
    let c_omega_m2 = &ring.one() - &omega.scale_int(2);
    let c_trivial = ring.one();
    let c_v = &c_trivial * &c_omega_m2.inverse()?;
    // h¹(ω^{-1}) = −χ(ω^{-1}) = (2g−2) + g − 1
    let h1 = 3 * g - 3;
    let rank_v = h1 - 1;
    let rank = (rank_v + 1) as u32;
    let chern = (1..=rank)
        .map(|i| c_v.degree_component(2 * i))
        .collect();
    Ok(ExtensionBundle { rank, chern })
}

/// The compactified extension space `W̄ = P(W)` over `Pic¹(C) × C`, genus 2.
pub fn wbar() -> Result<SpaceRing> {
    let base = jac_x_curve_ring(2, 1, false)?;
    let ext = curve_chern_of_extension_bundle(2)?;
    let chern: Vec<Element> = ext
        .chern
        .iter()
        .map(|c| c.lift_into(base.presentation()))
        .collect::<std::result::Result<_, _>>()?;
    proj_bundle_ring(&base, &chern, ext.rank as i64, "zeta")
}
