use std::collections::BTreeMap;

use cohocalc_core::rational::{frac, int};
use cohocalc_core::ring::{linear_combine, Monomial, RewriteRule};
use cohocalc_core::selfcheck::builtin_rings;
use cohocalc_core::spaces;
use cohocalc_core::{Element, Rational, Ring};
use num::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Poly = BTreeMap<Vec<u32>, Rational>;

fn add(p: &mut Poly, m: Vec<u32>, c: Rational) {
    let slot = p.entry(m.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&m);
    }
}

fn degree(ring: &Ring, m: &[u32]) -> u32 {
    m.iter().zip(ring.generators()).map(|(e, g)| e * g.degree).sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Rewrites one reducible term at a time, choosing the term and the rule with
/// `pick`, until nothing applies. Terms above the top degree are dropped.
fn reduce(ring: &Ring, start: Poly, pick: &mut dyn FnMut(usize) -> usize) -> Poly {
    let rules: &[RewriteRule] = ring.rules();
    let mut p = start;
    loop {
        p.retain(|m, _| degree(ring, m) <= ring.top_degree());
        let redexes: Vec<(Vec<u32>, usize)> = p
            .keys()
            .flat_map(|m| {
                rules
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| divides(r.lhs.exponents(), m))
                    .map(move |(i, _)| (m.clone(), i))
            })
            .collect();
        if redexes.is_empty() {
            return p;
        }
        let (m, i) = redexes[pick(redexes.len())].clone();
        let c = p.remove(&m).expect("redex term present");
        let rule = &rules[i];
        let quotient: Vec<u32> = m.iter().zip(rule.lhs.exponents()).map(|(a, b)| a - b).collect();
        for (rm, rc) in &rule.rhs {
            let prod = quotient.iter().zip(rm.exponents()).map(|(a, b)| a + b).collect();
            add(&mut p, prod, &c * rc);
        }
    }
}

fn as_poly(e: &Element) -> Poly {
    e.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

/// Every monomial up to the top degree has one normal form under first-,
/// last- and randomly-chosen reduction orders, equal to the engine's.
#[test]
fn reduction_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, ring) in builtin_rings().unwrap() {
        for m in ring.monomials() {
            let engine = as_poly(&ring.monomial(m.clone()));
            let start: Poly = [(m.exponents().to_vec(), int(1))].into_iter().collect();
            let first = reduce(&ring, start.clone(), &mut |_| 0);
            let last = reduce(&ring, start.clone(), &mut |n| n - 1);
            assert_eq!(first, engine, "{name}: {}", ring.format_monomial(&m));
            assert_eq!(last, engine, "{name}: {}", ring.format_monomial(&m));
            for _ in 0..3 {
                let random = reduce(&ring, start.clone(), &mut |n| rng.gen_range(0..n));
                assert_eq!(random, engine, "{name}: {}", ring.format_monomial(&m));
            }
        }
    }
}

fn wbar() -> Ring {
    spaces::wbar().unwrap().presentation().clone()
}

fn jac() -> Ring {
    spaces::jac_x_curve_ring(2, 1, true).unwrap().presentation().clone()
}

/// Random elements of degree at most `top`, coefficients in −9..=9.
fn element(ring: Ring) -> impl Strategy<Value = Element> {
    let basis = ring.monomials();
    prop::collection::vec((0..basis.len(), -9i64..=9), 0..6).prop_map(move |terms| {
        terms.iter().fold(ring.zero(), |acc, (i, c)| &acc + &ring.monomial(basis[*i].clone()).scale_int(*c))
    })
}

fn ring_laws(ring: Ring) -> impl Strategy<Value = (Element, Element, Element)> {
    (element(ring.clone()), element(ring.clone()), element(ring))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent(x in element(wbar())) {
        let n = x.normalize();
        prop_assert_eq!(n.normalize(), n);
    }

    #[test]
    fn multiplication_laws_wbar((a, b, c) in ring_laws(wbar())) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let combo = linear_combine(&[(int(3), b.clone()), (frac(-1, 2), c.clone())]).unwrap();
        let expected = linear_combine(&[(int(3), &a * &b), (frac(-1, 2), &a * &c)]).unwrap();
        prop_assert_eq!(&a * &combo, expected);
    }

    #[test]
    fn multiplication_laws_jac((a, b, c) in ring_laws(jac())) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn homogeneous_stays_homogeneous(x in element(wbar()), d in 0u32..=5) {
        let h = x.degree_component(2 * d);
        let n = h.normalize();
        prop_assert!(n.is_zero() || n.homogeneous_degree() == Some(2 * d));
        let sq = &h * &h;
        prop_assert!(sq.is_zero() || sq.homogeneous_degree() == Some(4 * d));
    }

    #[test]
    fn integration_is_linear(x in element(wbar()), y in element(wbar()), p in -20i64..20, q in 1i64..7) {
        let (a, b) = (frac(p, q), frac(q, 3));
        let lhs = (&x.scale(&a) + &y.scale(&b)).integrate().unwrap();
        prop_assert_eq!(lhs, a * x.integrate().unwrap() + b * y.integrate().unwrap());
    }

    #[test]
    fn exp_of_negative_is_inverse(x in element(jac())) {
        let x = &x - &x.ring().constant(x.constant_term());
        let p = &x.exp_truncated().unwrap() * &(-&x).exp_truncated().unwrap();
        prop_assert_eq!(p, x.ring().one());
    }

    #[test]
    fn integral_factorizes_on_tensor_products(a in -9i64..=9, b in -9i64..=9) {
        let left = spaces::abelian_ring(2).unwrap().presentation().clone();
        let right = spaces::curve_even_ring(1).unwrap().presentation().clone();
        let both = cohocalc_core::ring::tensor_product(&left, &right).unwrap();
        let x = left.gen("theta").unwrap().pow(2).scale_int(a);
        let y = right.gen("rho").unwrap().scale_int(b);
        let lhs = (&x.lift_into(&both).unwrap() * &y.lift_into(&both).unwrap()).integrate().unwrap();
        prop_assert_eq!(lhs, x.integrate().unwrap() * y.integrate().unwrap());
    }
}

#[test]
fn monomial_count_is_small() {
    for (name, ring) in builtin_rings().unwrap() {
        assert!(ring.monomials().len() < 10_000, "{name}");
        assert!(ring.monomials().iter().all(|m: &Monomial| degree(&ring, m.exponents()) <= ring.top_degree()));
    }
}
