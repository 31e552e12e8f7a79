//! Internal consistency suite over every built-in presentation.
//!
//! Randomized checks use a fixed ChaCha seed, so a run is reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::grr::{KClass, PoincareFamily};
use crate::rational::{frac, int};
use crate::report::Report;
use crate::ring::{tensor_product, Element, Monomial, Ring, RingBuilder, RingError};
use crate::spaces::{self, bundle_pushforward, SpaceRing};
use crate::verlinde::theta_model_ring;

type Result<T> = std::result::Result<T, Error>;

pub const SEED: u64 = 0x5eed_c0c0;
/// Randomized triples per ring for the ring axioms.
pub const TRIPLES: usize = 1000;

/// Every presentation the scenarios rely on, by name.
pub fn builtin_rings() -> Result<Vec<(String, Ring)>> {
    let mut out: Vec<(String, Ring)> = vec![("point".into(), spaces::point().presentation().clone())];
    for g in 0..=5 {
        out.push((format!("abelian({g})"), spaces::abelian_ring(g)?.presentation().clone()));
    }
    out.push(("curve(2)".into(), spaces::curve_even_ring(2)?.presentation().clone()));
    for g in 1..=3 {
        for mu in [false, true] {
            let s = spaces::jac_x_curve_ring(g, 1, mu)?;
            out.push((s.kind().to_string(), s.presentation().clone()));
        }
    }
    out.push(("jac_x_curve(g=5, k=3, mu=true)".into(), spaces::jac_x_curve_ring(5, 3, true)?.presentation().clone()));
    out.push(("wbar".into(), spaces::wbar()?.presentation().clone()));
    out.push(("theta model M_C(2,1)".into(), theta_model_ring("Theta", 5, int(80))?));
    let sm = theta_model_ring("alpha", 3, int(4))?;
    let pic0 = spaces::abelian_ring(2)?.presentation().renamed(&[("theta", "theta0")])?;
    let cover = tensor_product(&sm, &pic0)?;
    out.push(("SM × Pic⁰".into(), cover));
    Ok(out)
}

fn normal_basis(ring: &Ring) -> Vec<Monomial> {
    (0..=ring.top_degree())
        .step_by(2)
        .flat_map(|d| ring.normal_monomials_of_degree(d))
        .collect()
}

/// A sparse element with up to three terms and small rational coefficients.
fn random_element(ring: &Ring, basis: &[Monomial], rng: &mut ChaCha8Rng, nilpotent: bool) -> Element {
    let pool: Vec<&Monomial> = basis.iter().filter(|m| !(nilpotent && m.is_one())).collect();
    let mut e = ring.zero();
    if pool.is_empty() {
        return e;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let m = pool[rng.gen_range(0..pool.len())].clone();
        let c = frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        e = &e + &ring.monomial(m).scale(&c);
    }
    e
}

fn axioms(ring: &Ring, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let basis = normal_basis(ring);
    let mut ok = 0;
    for _ in 0..TRIPLES {
        let a = random_element(ring, &basis, rng, false);
        let b = random_element(ring, &basis, rng, false);
        let c = random_element(ring, &basis, rng, false);
        let ab = &a * &b;
        let holds = ab == &b * &a
            && &ab * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &ab + &(&a * &c)
            && ab.normalize() == ab;
        ok += holds as usize;
    }
    (ok, TRIPLES)
}

fn exp_inverse(ring: &Ring, rng: &mut ChaCha8Rng, trials: usize) -> Result<(usize, usize)> {
    let basis = normal_basis(ring);
    let one = ring.one();
    let mut ok = 0;
    for _ in 0..trials {
        let x = random_element(ring, &basis, rng, true);
        let p = &x.exp_truncated()? * &(-&x).exp_truncated()?;
        ok += (p == one) as usize;
    }
    Ok((ok, trials))
}

/// `Σ_{i+j=k} s_i c_j = 0` for `1 ≤ k ≤ dim(base)`, with `s_k = τ_*(ζ^{r−1+k})`.
pub fn segre_chern_holds(total: &SpaceRing) -> Result<bool> {
    let Some((base, chern)) = total.bundle_base() else {
        return Err(spaces::SpaceError::NotABundleRing.into());
    };
    let spaces::SpaceKind::ProjBundle { fiber, rank } = total.kind() else {
        return Err(spaces::SpaceError::NotABundleRing.into());
    };
    let zeta = total.presentation().gen(fiber)?;
    let b = base.presentation();
    let mut c = vec![b.one()];
    c.extend(chern.iter().cloned());
    let top = b.top_degree() / 2;
    let mut s = Vec::new();
    for k in 0..=top {
        s.push(bundle_pushforward(total, &zeta.pow(rank - 1 + k))?);
    }
    if s[0] != b.one() {
        return Ok(false);
    }
    for k in 1..=top as usize {
        let mut acc = b.zero();
        for (i, si) in s.iter().enumerate().take(k + 1) {
            if let Some(cj) = c.get(k - i) {
                acc = &acc + &(si * cj);
            }
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bundles `⊕ L_i` over `abelian(2)` with `c₁(L_i) = a_i θ`.
fn random_diagonal_bundle(rng: &mut ChaCha8Rng) -> Result<SpaceRing> {
    let base = spaces::abelian_ring(2)?;
    let ring = base.presentation();
    let theta = base.class("theta")?;
    let rank = rng.gen_range(1..=3);
    let mut total_chern = ring.one();
    for _ in 0..rank {
        let a = rng.gen_range(-4..=4);
        total_chern = &total_chern * &(&ring.one() + &theta.scale_int(a));
    }
    let chern: Vec<Element> = (1..=rank).map(|i| total_chern.degree_component(2 * i)).collect();
    Ok(spaces::proj_bundle_ring(&base, &chern, rank as i64, "z")?)
}

fn factorization(rng: &mut ChaCha8Rng, trials: usize) -> Result<(usize, usize)> {
    let a = spaces::abelian_ring(2)?.presentation().clone();
    let b = spaces::jac_x_curve_ring(1, 1, false)?.presentation().renamed(&[("theta", "theta1")])?;
    let ab = tensor_product(&a, &b)?;
    let (ba, bb) = (normal_basis(&a), normal_basis(&b));
    let mut ok = 0;
    for _ in 0..trials {
        let x = random_element(&a, &ba, rng, false);
        let y = random_element(&b, &bb, rng, false);
        let lhs = (&x.lift_into(&ab)? * &y.lift_into(&ab)?).integrate()?;
        ok += (lhs == x.integrate()? * y.integrate()?) as usize;
    }
    Ok((ok, trials))
}

fn ratio(r: &mut Report, label: &str, (ok, n): (usize, usize), citation: &str) {
    r.check_text(label, &format!("{ok}/{n}"), &format!("{n}/{n}"), citation);
}

pub fn selfcheck() -> Result<Report> {
    let mut r = Report::new("selfcheck");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rings = builtin_rings()?;

    for (name, ring) in &rings {
        let v = ring.verify();
        let detail: Vec<String> = v
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.check, c.detail))
            .collect();
        r.record(
            &format!("presentation checks for {name}"),
            if detail.is_empty() { "pass".to_string() } else { detail.join("; ") },
            "pass",
            "homogeneous, terminating, confluent, integrals complete",
            v.passed(),
        );
    }
    for (name, ring) in &rings {
        ratio(&mut r, &format!("ring axioms on {name}"), axioms(ring, &mut rng), "commutative, associative, distributive");
    }
    for (name, ring) in &rings {
        ratio(&mut r, &format!("exp(x)·exp(−x) = 1 on {name}"), exp_inverse(ring, &mut rng, 100)?, "truncated exponential");
    }

    let w = spaces::wbar()?;
    r.record(
        "Segre–Chern identity for W̄",
        segre_chern_holds(&w)?.to_string(),
        "true",
        "s(W)·c(W) = 1",
        segre_chern_holds(&w)?,
    );
    let mut diag_ok = 0;
    let diag_n = 50;
    for _ in 0..diag_n {
        diag_ok += segre_chern_holds(&random_diagonal_bundle(&mut rng)?)? as usize;
    }
    ratio(&mut r, "Segre–Chern identity for random split bundles over abelian(2)", (diag_ok, diag_n), "s(E)·c(E) = 1");
    ratio(&mut r, "∫_{A⊗B} a·b = ∫a·∫b", factorization(&mut rng, 200)?, "Künneth integral");

    let mut grid = 0;
    let mut equal = 0;
    for g in 1..=3 {
        for k in 0..=3 {
            let f = PoincareFamily::new(g, k)?;
            for rk in -4..=4 {
                for d in -4..=4 {
                    grid += 1;
                    equal += f.grr(&KClass::new(rk, d)).is_ok() as usize;
                }
            }
        }
    }
    ratio(&mut r, "GRR equals the closed form", (equal, grid), "λ_P by two routes");
    r.record("GRR grid size", grid.to_string(), "≥ 324", "four or more (g, k) pairs × 81", grid >= 324);

    let bad = RingBuilder::new(6)
        .generator("gamma", 2)
        .generator("theta", 2)
        .generator("rho", 2)
        .rule("rho^2", &[])
        .rule("gamma^2", &[(-2, "theta*rho")])
        .rule("gamma^2", &[(1, "theta*rho")])
        .build();
    let witness = match bad {
        Err(RingError::NotConfluent { witness, .. }) => witness,
        Err(e) => e.to_string(),
        Ok(_) => "accepted".to_string(),
    };
    r.check_text("injected contradictory rule is rejected", &witness, "gamma^2", "confluence witness");
    Ok(r)
}
