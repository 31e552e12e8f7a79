//! Reproduction scenarios for the rank-2, genus-2 Mukai system.
//!
//! Every scenario recomputes its inputs from scratch, so any one of them runs
//! without the others. Steps whose value is an input fact rather than a
//! computation are recorded with the `assumption` verdict.

use std::thread;

use num::{One, Zero};

use crate::error::Error;
use crate::grr::{assemble_n1, lambda_box_delta, theta_k, KClass, PoincareFamily};
use crate::mukai::{
    bb_pairing, chi_k3, curve_chi, curve_mul, genus_of_curve_in, moduli_dimension as mukai_dimension,
    restrict_to_curve, MukaiVector,
};
use crate::rational::{factorial, format_rational, frac, int, pow_int, Rational};
use crate::report::Report;
use crate::ring::{tensor_product, Element};
use crate::spaces::{self, abelian_ring, bundle_pushforward, wbar};
use crate::verlinde::{
    bernoulli, deg_n0_via_cover, general_degrees, moduli_dimension, theta_model_ring, theta_numbers,
    theta_top_rank2,
};

pub type Result<T> = std::result::Result<T, Error>;

/// Scenario names accepted by [`repro`], in the order `all` runs them.
pub const SCENARIOS: [&str; 9] = [
    "fiber",
    "n0",
    "n1",
    "multiplicities",
    "thm1",
    "thm2",
    "independence",
    "verlinde",
    "lambda-check",
];

/// `H² = 2`: the K3 is a double plane and curves in `|H|` have genus 2.
pub const H2: i64 = 2;

/// `v = (0, 2H, −1)`.
pub fn v() -> MukaiVector {
    MukaiVector::new(0, 2, -1, H2).expect("H² = 2 is a valid polarization")
}

/// `u₀ = (0, 0, 1)`, the class pulled back from the base of the support map.
pub fn u0() -> MukaiVector {
    MukaiVector::new(0, 0, 1, H2).expect("H² = 2 is a valid polarization")
}

/// `u₁ = (−4, −H, s)`; nothing computed here depends on `s`.
pub fn u1() -> MukaiVector {
    MukaiVector::new(-4, -1, 0, H2).expect("H² = 2 is a valid polarization")
}

pub fn repro(name: &str) -> Result<Report> {
    let mut r = Report::new(name);
    match name {
        "fiber" => {
            fiber_into(&mut r)?;
        }
        "n0" => {
            n0_into(&mut r)?;
        }
        "n1" => {
            n1_into(&mut r)?;
        }
        "multiplicities" => multiplicities_into(&mut r)?,
        "thm1" => thm1_into(&mut r)?,
        "thm2" => thm2_into(&mut r)?,
        "independence" => independence_into(&mut r)?,
        "verlinde" => verlinde_into(&mut r)?,
        "lambda-check" => lambda_check_into(&mut r)?,
        "all" => return all(),
        other => return Err(Error::UnknownScenario(other.to_string())),
    }
    Ok(r)
}

/// Runs every scenario on its own thread and concatenates the reports in
/// [`SCENARIOS`] order.
pub fn all() -> Result<Report> {
    let reports: Vec<Result<Report>> = thread::scope(|s| {
        let handles: Vec<_> = SCENARIOS.iter().map(|n| s.spawn(move || repro(n))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    });
    collect_all(reports)
}

/// Same as [`all`] on the calling thread.
pub fn all_sequential() -> Result<Report> {
    collect_all(SCENARIOS.iter().map(|n| repro(n)).collect())
}

fn collect_all(reports: Vec<Result<Report>>) -> Result<Report> {
    let mut out = Report::new("all");
    for r in reports {
        out.absorb(r?);
    }
    Ok(out)
}

fn q(n: i64) -> Rational {
    int(n)
}

/// `a·2^e`
fn times_pow2(a: i64, e: u32) -> Rational {
    int(a) * pow_int(2, e)
}

fn fiber_into(r: &mut Report) -> Result<Rational> {
    let x = u1();
    r.check_q(
        "u₁ lies in v⊥",
        &q(chi_k3(&x, &v())?),
        &q(0),
        "v⊥ consists of the classes (2c.H, c, s)",
    );
    r.check_q(
        "dim M(v) = ⟨v,v⟩ + 2",
        &q(mukai_dimension(&v())?),
        &q(10),
        "moduli of one-dimensional sheaves with v = (0, 2H, −1)",
    );
    let n = 2;
    let g = genus_of_curve_in(H2, n);
    r.check_q("genus of D ∈ |2H|", &q(g), &q(5), "adjunction on a K3: 2g − 2 = D²");
    // χ = s + r for a Mukai vector, so a line bundle on D of degree χ − (1 − g)
    let k = v().s + v().r - (1 - g);
    r.check_q("fiber is Pic^k(D) with k", &q(k), &q(3), "Riemann–Roch on D with χ = −1");

    let xd = restrict_to_curve(&x, n);
    r.check_text(
        "Li*u₁ on D",
        &xd.to_string(),
        &KClass::new(-4, -4).to_string(),
        "derived restriction (r, c, s) ↦ (r, c.D)",
    );
    let family = PoincareFamily::new(g, k)?;
    let restricted = family.grr(&xd)?.mu_normalized()?;
    let expected = theta_k(g, k)?.scale_int(-2 * x.c_dot_h());
    r.check_element(
        "u₁ restricted to the fiber",
        &restricted,
        &expected,
        "u|_F = −2c.H·Θ for u = λ(2c.H, c, s)",
    );
    let pic = abelian_ring(g)?;
    let deg = restricted.lift_into(pic.presentation())?.pow(5).integrate()?;
    r.check_q(
        "deg_{u₁} F = ∫(4Θ)⁵",
        &deg,
        &(factorial(5) * pow_int(2, 10)),
        "fiber degree 5!·2¹⁰",
    );
    r.check_q(
        "5!·2¹⁰ = 5·3·2¹³",
        &(factorial(5) * pow_int(2, 10)),
        &times_pow2(15, 13),
        "degree of the Lagrangian fiber",
    );

    let bb = bb_pairing(&u0(), &x)?;
    r.check_q("(u₀, u₁)_BB", &q(bb), &q(4), "Beauville–Bogomolov form = Mukai pairing + 2rr'");
    r.check_q(
        "5!·(u₀,u₁)_BB⁵ equals the fiber degree",
        &(factorial(5) * pow_int(bb, 5)),
        &deg,
        "Fujiki relation for the fiber class",
    );
    Ok(deg)
}

/// The multiple of the generalized theta class `λ(−2, −1)` that `x` is, for
/// `x ∈ c⊥` with `c = (2, 1)` on a genus-2 curve.
fn theta_multiple(x: &KClass) -> Option<Rational> {
    let g = 2;
    let c = KClass::new(2, 1);
    let theta = KClass::new(-c.r, c.d + c.r * (1 - g));
    if curve_chi(&curve_mul(&c, x), g) != 0 {
        return None;
    }
    let t = frac(x.r, theta.r);
    (frac(x.d, 1) == &t * int(theta.d)).then_some(t)
}

fn n0_into(r: &mut Report) -> Result<Rational> {
    let g = 2;
    let c = KClass::new(2, 1);
    let theta_class = KClass::new(-2, -1);
    r.check_q(
        "dim M_C(2,1)",
        &q(moduli_dimension(g, 2)),
        &q(5),
        "dim M_C(n, d) = n²(g − 1) + 1",
    );
    r.check_q(
        "χ(c·(−2, −1)) = 0",
        &q(curve_chi(&curve_mul(&c, &theta_class), g)),
        &q(0),
        "generalized theta divisor Θ = λ(−n, d + n(1 − g))",
    );
    let xc = restrict_to_curve(&u1(), 1);
    r.check_text(
        "Li*u₁ on C ∈ |H|",
        &xc.to_string(),
        &KClass::new(-4, -2).to_string(),
        "derived restriction (r, c, s) ↦ (r, c.C)",
    );
    let t = theta_multiple(&xc);
    r.record(
        "Li*u₁ as a multiple of (−2, −1)",
        t.as_ref().map_or("not in c⊥".into(), format_rational),
        "2",
        "u₁ restricted to N₀ is 2Θ",
        t == Some(q(2)),
    );
    let t = t.unwrap_or_else(Rational::zero);

    let by_formula = theta_top_rank2(g)?;
    r.check_q(
        "∫Θ⁵ by the Bernoulli formula",
        &by_formula,
        &times_pow2(5, 4),
        "top theta power on rank-2 moduli via B_{2g−2}",
    );
    r.assume(
        "∫_{SM} Θ³ = 4",
        "4",
        "leading term of the Verlinde formula for fixed determinant",
    );
    let by_cover = deg_n0_via_cover(g, 2, &q(4))?;
    r.check_q(
        "∫Θ⁵ through the étale cover SM × Pic⁰ → M",
        &by_cover,
        &times_pow2(5, 4),
        "h*Θ = Θ_SM + n²Θ₀, cover degree n^{2g}",
    );
    r.check_q("the two routes agree", &by_formula, &by_cover, "two derivations of ∫Θ⁵");

    let m = theta_model_ring("Theta", 5, by_formula.clone())?;
    let restricted = m.gen("Theta")?.scale(&t);
    let deg = restricted.pow(5).integrate()?;
    r.check_q("deg_{u₁} N₀ = ∫(2Θ)⁵", &deg, &times_pow2(5, 9), "degree of N₀ equals 5·2⁹");
    let (_, general) = general_degrees(g, 2, &by_formula)?;
    r.check_q(
        "(2g − 2)^{dim}·∫Θ^{dim} at g = 2",
        &general,
        &deg,
        "general-genus degree formula for N₀",
    );
    Ok(deg)
}

fn n1_into(r: &mut Report) -> Result<Rational> {
    let ext = spaces::curve_chern_of_extension_bundle(2)?;
    let curve = spaces::curve_even_ring(2)?;
    r.check_element(
        "c₁(W)",
        &ext.chern[0],
        &curve.class("rho")?.scale_int(4),
        "Chern class of the extension bundle, c₁(W) = 4ρ",
    );
    let higher: Vec<String> = ext.chern[1..].iter().map(Element::to_string).collect();
    r.check_text(
        "c₂(W), c₃(W)",
        &higher.join(", "),
        "0, 0",
        "higher Chern classes of W vanish",
    );

    let w = wbar()?;
    let assembled = assemble_n1(1)?.value;
    let expected = [("theta", -4), ("pi", 2), ("rho", -7), ("zeta", -1)]
        .iter()
        .try_fold(w.presentation().zero(), |acc, (n, c)| -> Result<Element> {
            Ok(&acc + &w.class(n)?.scale_int(*c))
        })?;
    r.check_element(
        "ν*(x|_{N₁}) for c.H = 1",
        &assembled,
        &expected,
        "pulled-back class −4Θ₁ + 2π − 7ρ − ζ",
    );

    let quintic = assembled.pow(5);
    let top = w.presentation().parse_monomial("zeta^2*theta^2*rho")?;
    let coeff = quintic.coeff_of_monomial(&top).constant_term();
    r.check_element(
        "fifth power",
        &quintic,
        &w.presentation().monomial(top.clone()).scale(&coeff),
        "only ζ²ρΘ₁² survives",
    );
    r.check_q("coefficient of ζ²ρΘ₁²", &coeff, &(-times_pow2(25, 5)), "−5²·2⁵");

    let point = w.presentation().monomial(top).integrate()?;
    r.check_q("∫ζ²ρΘ₁²", &point, &q(2), "τ_*ζ² · ∫Θ² · ∫ρ");
    let zeta = w.class("zeta")?;
    let (base, _) = w.bundle_base().ok_or(spaces::SpaceError::NotABundleRing)?;
    let rest = &base.class("rho")? * &base.class("theta")?.pow(2);
    let via_push = (&bundle_pushforward(&w, &zeta.pow(2))? * &rest).integrate()?;
    r.check_q("τ_*ζ² · ∫_{Pic¹×C} ρΘ²", &via_push, &point, "projective bundle pushforward");

    let pairing = quintic.integrate()?;
    r.check_q(
        "per-class pairing constant ∫x⁵ / (c.H)⁵",
        &pairing,
        &(-times_pow2(25, 6)),
        "∫_{N₁} x₁⋯x₅ = −5²·2⁶ ∏cᵢ.H",
    );
    r.record(
        "the alternative printed constant −5²·2⁹",
        format_rational(&pairing),
        format!("≠ {}", format_rational(&(-times_pow2(25, 9)))),
        "only 2⁶ is consistent with deg N₁ = 5²·2¹¹",
        pairing != -times_pow2(25, 9),
    );

    let cs = [1, -2, 3, 1, 2];
    let product = cs.iter().try_fold(w.presentation().one(), |acc, &c| -> Result<Element> {
        Ok(&acc * &assemble_n1(c)?.value)
    })?;
    let prod_c: i64 = cs.iter().product();
    r.check_q(
        "multilinearity on (1, −2, 3, 1, 2)",
        &product.integrate()?,
        &(&pairing * int(prod_c)),
        "∫_{N₁} x₁⋯x₅ = −5²·2⁶ ∏cᵢ.H",
    );

    let ch = u1().c_dot_h();
    let deg = assemble_n1(ch)?.value.pow(5).integrate()?;
    r.check_q("deg_{u₁} N₁ with c.H = −2", &deg, &times_pow2(25, 11), "degree of N₁ equals 5²·2¹¹");
    r.check_q(
        "(−2)⁵ times the pairing constant",
        &(pow_int(ch, 5) * &pairing),
        &deg,
        "multilinearity in c.H",
    );
    Ok(deg)
}

/// Positive solutions of `m₀·a + m₁·b = total`.
pub fn positive_solutions(a: &Rational, b: &Rational, total: &Rational) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    if a <= &Rational::zero() || b <= &Rational::zero() {
        return out;
    }
    let mut m1 = Rational::one();
    while &(&m1 * b) < total {
        let m0 = (total - &m1 * b) / a;
        if m0.is_integer() && m0 > Rational::zero() {
            out.push((m0, m1.clone()));
        }
        m1 += Rational::one();
    }
    out.sort();
    out.reverse();
    out
}

fn format_pairs(pairs: &[(Rational, Rational)]) -> String {
    let items: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("({},{})", format_rational(a), format_rational(b)))
        .collect();
    format!("{{{}}}", items.join(","))
}

/// The three degrees, each recomputed in a scratch report that must pass.
fn degrees(r: &mut Report) -> Result<(Rational, Rational, Rational)> {
    let mut scratch = Report::new("scratch");
    let f = fiber_into(&mut scratch)?;
    let n0 = n0_into(&mut scratch)?;
    let n1 = n1_into(&mut scratch)?;
    r.record(
        "degree computations",
        scratch.verdict.clone(),
        "pass",
        "fiber, N₀ and N₁ scenarios",
        scratch.passed(),
    );
    r.check_q("deg_{u₁} F", &f, &times_pow2(15, 13), "5·3·2¹³");
    r.check_q("deg_{u₁} N₀", &n0, &times_pow2(5, 9), "5·2⁹");
    r.check_q("deg_{u₁} N₁", &n1, &times_pow2(25, 11), "5²·2¹¹");
    Ok((f, n0, n1))
}

fn multiplicities_from(r: &mut Report, f: &Rational, n0: &Rational, n1: &Rational) {
    r.assume(
        "m₀, m₁ ≥ 1",
        "both components occur",
        "N₀ and N₁ are the irreducible components of the reduced nilpotent cone",
    );
    let sols = positive_solutions(n0, n1, f);
    let expected = vec![(q(28), q(1)), (q(8), q(2))];
    r.record(
        "solutions of m₀·deg N₀ + m₁·deg N₁ = deg F",
        format_pairs(&sols),
        format_pairs(&expected),
        "the only possible multiplicity pairs",
        sols == expected,
    );
    r.assume("m₁ ≥ 2", "N₁ is not reduced", "tangent-space dimension along N₁");
    let chosen: Vec<_> = sols.into_iter().filter(|(_, m1)| m1 >= &q(2)).collect();
    r.record(
        "(m₀, m₁)",
        format_pairs(&chosen),
        format_pairs(&[(q(8), q(2))]),
        "multiplicities of the nilpotent cone components",
        chosen == [(q(8), q(2))],
    );
}

fn multiplicities_into(r: &mut Report) -> Result<()> {
    let (f, n0, n1) = degrees(r)?;
    multiplicities_from(r, &f, &n0, &n1);
    Ok(())
}

fn thm1_into(r: &mut Report) -> Result<()> {
    let (f, n0, n1) = degrees(r)?;
    multiplicities_from(r, &f, &n0, &n1);
    r.check_q(
        "8·deg N₀ + 2·deg N₁ = deg F",
        &(int(8) * &n0 + int(2) * &n1),
        &f,
        "[F] = 8[N₀] + 2[N₁] paired with u₁⁵",
    );
    Ok(())
}

fn thm2_into(r: &mut Report) -> Result<()> {
    // per-class constants: ∫_{Nᵢ} x₁⋯x₅ = constᵢ·∏cⱼ.H
    let n1_const = assemble_n1(1)?.value.pow(5).integrate()?;
    // x with c.H = 1 restricts to (2, 1) on C; a value outside c⊥ shows up as a failed step
    let t = theta_multiple(&KClass::new(2, 1)).unwrap_or_else(Rational::zero);
    let m = theta_model_ring("Theta", 5, theta_top_rank2(2)?)?;
    let n0_const = m.gen("Theta")?.scale(&t).pow(5).integrate()?;
    r.check_q("∫_{N₀} x⁵ for c.H = 1", &n0_const, &(-times_pow2(5, 4)), "x|_{N₀} = −c.H·Θ");
    r.check_q("∫_{N₁} x⁵ for c.H = 1", &n1_const, &(-times_pow2(25, 6)), "−5²·2⁶");
    let ratio = &n1_const / &n0_const;
    r.check_q("ratio ∫[N₁]x⁵ / ∫[N₀]x⁵", &ratio, &q(20), "the N₁ pairing is 20 times the N₀ pairing");

    // [N₀] = a[F] + β₀, [N₁] = b[F] + β₁ with 8[N₀] + 2[N₁] = [F]
    let a = Rational::one() / (int(8) + int(2) * &ratio);
    let b = &ratio * &a;
    r.check_text(
        "(a, b) from 8a + 2b = 1, b = 20a",
        &format!("({}, {})", format_rational(&a), format_rational(&b)),
        "(1/48, 5/12)",
        "[N₀] = 1/48·[F] + β, [N₁] = 5/12·[F] − 4β",
    );
    let beta_scale = -int(8) / int(2);
    r.check_q("β₁ / β₀ from 8β₀ + 2β₁ = 0", &beta_scale, &q(-4), "[N₁] = 5/12·[F] − 4β");
    r.check_q("mass 8a + 2b", &(int(8) * &a + int(2) * &b), &q(1), "[F] = 8[N₀] + 2[N₁]");

    // Gram matrix on {F, β₀}
    let ff = factorial(5) * pow_int(bb_pairing(&u0(), &u0())?, 5);
    r.check_q("[F]² ∝ (u₀,u₀)_BB⁵", &ff, &q(0), "Fujiki relation, (u₀,u₀)_BB = 0");
    r.assume(
        "[F]·β = 0",
        "0",
        "β is orthogonal to products of degree-2 classes and [F] is a multiple of u₀⁵",
    );
    r.assume("e(M_C(2,1)) = 0", "0", "Euler characteristic of the rank-2 odd-degree moduli space");
    let e_n0 = Rational::zero();
    // a Lagrangian L in a 10-dimensional symplectic manifold has [L]² = (−1)⁵·e(L)
    let n0_sq = -e_n0;
    let fb = Rational::zero();
    let bb0 = &n0_sq - &a * &a * &ff - int(2) * &a * &fb;
    let pair = |x: (&Rational, &Rational), y: (&Rational, &Rational)| -> Rational {
        x.0 * y.0 * &ff + (x.0 * y.1 + x.1 * y.0) * &fb + x.1 * y.1 * &bb0
    };
    let one = Rational::one();
    let n0 = (&a, &one);
    let n1 = (&b, &beta_scale);
    let values = [pair(n0, n0), pair(n1, n1), pair(n0, n1)];
    let labels = ["[N₀]²", "[N₁]²", "[N₀]·[N₁]"];
    for (l, val) in labels.iter().zip(&values) {
        r.check_q(l, val, &q(0), "self-intersection of a Lagrangian is ±e");
    }
    r.record(
        "[F], [N₀], [N₁] span a totally isotropic subspace",
        if values.iter().all(Rational::is_zero) && ff.is_zero() { "isotropic" } else { "not isotropic" },
        "isotropic",
        "all pairings among the nilpotent cone classes vanish",
        values.iter().all(Rational::is_zero) && ff.is_zero(),
    );
    Ok(())
}

fn independence_into(r: &mut Report) -> Result<()> {
    let sm_top = theta_numbers(2)?.theta_top_sm;
    r.check_q("∫_{SM} α³", &sm_top, &q(4), "leading term of the Verlinde formula");
    r.assume("Θ_SM = α", "α", "Θ is half the anticanonical class of SM");
    r.assume("c₁(T_SM) = 2α, c₂(T_SM) = 3α²", "2α, 3α²", "Chern classes of the fixed-determinant moduli space");
    r.assume("cᵢ(T_M)|_F = 0", "0", "the support map is a Lagrangian fibration");
    r.assume(
        "c₂(T_M)|_{N₀} = (2c₂ − c₁²)(T_{N₀})",
        "2c₂ − c₁²",
        "normal bundle of a Lagrangian is its cotangent bundle",
    );
    let sm = theta_model_ring("alpha", 3, sm_top)?;
    let jac = abelian_ring(2)?.presentation().renamed(&[("theta", "theta0")])?;
    let cover = tensor_product(&sm, &jac)?;
    let alpha = cover.gen("alpha")?;
    let theta0 = cover.gen("theta0")?;
    let c1 = alpha.scale_int(2);
    let c2 = alpha.pow(2).scale_int(3);
    let restricted = &c2.scale_int(2) - &c1.pow(2);
    r.check_element("2c₂ − c₁² on SM", &restricted, &alpha.pow(2).scale_int(2), "c₁ = 2α, c₂ = 3α²");
    // u₁|_{N₀} = 2Θ pulls back to 2(α + 4θ₀); the cover has degree 2⁴
    let u = (&alpha + &theta0.scale_int(4)).scale_int(2);
    let value = (&restricted * &u.pow(3)).integrate()? / pow_int(2, 4);
    r.check_q("∫_{N₀} c₂(T_M)·u₁³", &value, &times_pow2(3, 7), "3·2⁷");
    r.record(
        "obstruction integral is nonzero",
        format_rational(&value),
        "≠ 0",
        "u₀⁵, u₁⁵ and the cone classes are linearly independent",
        !value.is_zero(),
    );
    Ok(())
}

fn verlinde_into(r: &mut Report) -> Result<()> {
    r.check_q("B₂", &bernoulli(2)?, &frac(1, 6), "second Bernoulli number");
    r.check_q("B₁", &bernoulli(1)?, &frac(-1, 2), "recurrence Σ C(n+1,k)B_k = 0");
    r.check_q("B₃", &bernoulli(3)?, &q(0), "odd Bernoulli numbers above 1 vanish");
    let t = theta_numbers(2)?;
    r.check_q("dim M_C(2,1)", &q(t.dim_m), &q(5), "4g − 3");
    r.check_q("∫_{M_C(2,1)} Θ⁵", &t.theta_top_m, &times_pow2(5, 4), "5·2⁴");
    r.assume("∫_{SM} Θ³ = 4", "4", "leading term of the Verlinde formula");
    r.check_q(
        "fixed-determinant value by inverting the cover",
        &t.theta_top_sm,
        &q(4),
        "∫_M Θ⁵ = C(5,2)·2!·∫_{SM} Θ³",
    );
    let (f, n0) = general_degrees(2, 2, &t.theta_top_m)?;
    r.check_q("general deg F at (g, n) = (2, 2)", &f, &times_pow2(15, 13), "(n(2g−2))^{dim}·dim!");
    r.check_q("general deg N₀ at (g, n) = (2, 2)", &n0, &times_pow2(5, 9), "(2g−2)^{dim}·∫Θ^{dim}");
    Ok(())
}

fn lambda_check_into(r: &mut Report) -> Result<()> {
    let mut total = 0;
    let mut equal = 0;
    let mut rank_ok = 0;
    let mut theta_ok = 0;
    let mut pairs = 0;
    for g in 1..=3 {
        for k in 0..=3 {
            pairs += 1;
            let family = PoincareFamily::new(g, k)?;
            for rk in -4..=4 {
                for d in -4..=4 {
                    let x = KClass::new(rk, d);
                    total += 1;
                    if family.grr(&x).is_ok() {
                        equal += 1;
                    }
                    let rank = family.grr_pushforward(&x)?.degree_component(0).constant_term();
                    if rank == q(d + rk * (k + 1 - g)) {
                        rank_ok += 1;
                    }
                }
            }
            if theta_k(g, k)? == family.space().class("theta")? {
                theta_ok += 1;
            }
        }
    }
    let all = format!("{total}/{total}");
    r.check_text(
        "λ by GRR equals the closed form",
        &format!("{equal}/{total}"),
        &all,
        "λ_P(r, d) = (d + (k+1−g)r)μ − rΘ_k",
    );
    r.record("grid size", total.to_string(), "≥ 324", "g ∈ {1,2,3}, k ∈ {0,…,3}, r, d ∈ [−4, 4]", total >= 324);
    r.check_text(
        "rank of p_! equals χ",
        &format!("{rank_ok}/{total}"),
        &all,
        "χ = d + r(k + 1 − g)",
    );
    r.check_text(
        "Θ_k is θ after μ = 0",
        &format!("{theta_ok}/{pairs}"),
        &format!("{pairs}/{pairs}"),
        "Θ_k := λ(−1, k + 1 − g)",
    );
    let family = PoincareFamily::new(2, 1)?;
    let lp = family.closed(&KClass::new(2, -3))?;
    r.check_text("λ_P(2, −3) on Pic¹ × C", &lp.value.to_string(), "-3*mu - 2*theta", "closed form at g = 2, k = 1");
    let base = spaces::jac_x_curve_ring(2, 1, false)?;
    let boxed = lambda_box_delta(
        2,
        &lp.mu_normalized()?.lift_into(base.presentation())?,
        1,
        &base.class("pi")?,
        &KClass::new(2, -3),
    )?;
    let expected = [("theta", -2), ("pi", 2), ("rho", -7)]
        .iter()
        .try_fold(base.presentation().zero(), |acc, (n, c)| -> Result<Element> {
            Ok(&acc + &base.class(n)?.scale_int(*c))
        })?;
    r.check_element(
        "λ_{P⊠O(Δ)}(2, −3)",
        &boxed.value,
        &expected,
        "λ_{F⊠O(Δ)}(x) = λ_F(x) + r·c₁(F) + c₀(F)(d − 2r)ρ",
    );
    Ok(())
}
