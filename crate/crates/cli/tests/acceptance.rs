//! End-to-end acceptance suite. Runs the built binary, reads its JSON
//! reports, and compares each headline number against a value recomputed
//! here. Prints one line per criterion and exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use cohocalc_core::grr::{lambda_grr, linear_coefficient, KClass};
use cohocalc_core::rational::{frac, int};
use cohocalc_core::{dsl, Rational};
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_cohocalc"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), report)
}

/// A scenario run that exited 0 with an overall `pass`.
struct Run(Value);

impl Run {
    fn new(args: &[&str]) -> Result<Run, String> {
        let (code, report) = cli(args);
        if code != 0 || report["verdict"] != "pass" {
            return Err(format!("`{}` exited {code} with verdict {}", args.join(" "), report["verdict"]));
        }
        Ok(Run(report))
    }

    fn computed(&self, label: &str) -> Result<String, String> {
        self.0["steps"]
            .as_array()
            .into_iter()
            .flatten()
            .find(|s| s["label"] == label)
            .and_then(|s| s["computed"].as_str())
            .map(str::to_string)
            .ok_or_else(|| format!("no step labelled `{label}`"))
    }

    fn expect(&self, label: &str, want: impl ToString) -> Result<(), String> {
        let got = self.computed(label)?;
        let want = want.to_string();
        if got == want {
            Ok(())
        } else {
            Err(format!("`{label}`: computed {got}, expected {want}"))
        }
    }
}

fn ensure(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn eval_one(program: &str) -> Result<String, String> {
    let r = dsl::run(program).map_err(|e| e.to_string())?;
    r.steps.last().map(|s| s.computed.clone()).ok_or_else(|| "no eval step".into())
}

fn fiber() -> Result<(), String> {
    let r = Run::new(&["repro", "fiber"])?;
    let value = 120 * 2i64.pow(10);
    ensure(value == 5 * 3 * 2i64.pow(13) && value == 122_880, "5!·2¹⁰ = 5·3·2¹³")?;
    r.expect("u₁ restricted to the fiber", "4*theta")?;
    r.expect("deg_{u₁} F = ∫(4Θ)⁵", value)?;
    r.expect("5!·2¹⁰ = 5·3·2¹³", value)?;
    // ∫_{Pic³}(4Θ)⁵ = 4⁵·5! with ∫Θ⁵ = 5!
    ensure(4i64.pow(5) * 120 == value, "4⁵·5! = 122880")
}

fn n0() -> Result<(), String> {
    let r = Run::new(&["repro", "n0"])?;
    r.expect("Li*u₁ as a multiple of (−2, −1)", 2)?;
    r.expect("∫Θ⁵ by the Bernoulli formula", 80)?;
    r.expect("∫Θ⁵ through the étale cover SM × Pic⁰ → M", 80)?;
    let deg = 2i64.pow(5) * 80;
    ensure(deg == 5 * 2i64.pow(9), "2⁵·80 = 5·2⁹")?;
    r.expect("deg_{u₁} N₀ = ∫(2Θ)⁵", deg)
}

fn n1() -> Result<(), String> {
    let r = Run::new(&["repro", "n1"])?;
    r.expect("c₁(W)", "4*rho")?;
    let by_hand = eval_one("space wbar(); eval normal(-4*theta + 2*(gamma + rho) - 7*rho - zeta);")?;
    r.expect("ν*(x|_{N₁}) for c.H = 1", by_hand)?;
    r.expect("coefficient of ζ²ρΘ₁²", -(5i64.pow(2)) * 2i64.pow(5))?;
    r.expect("∫ζ²ρΘ₁²", 2)?;
    r.expect("deg_{u₁} N₁ with c.H = −2", 5i64.pow(2) * 2i64.pow(11))?;
    r.expect("per-class pairing constant ∫x⁵ / (c.H)⁵", -(5i64.pow(2)) * 2i64.pow(6))
}

fn multiplicities() -> Result<(), String> {
    let r = Run::new(&["repro", "multiplicities"])?;
    let solutions: Vec<(i64, i64)> = (1..=48)
        .flat_map(|m0| (1..=3).map(move |m1| (m0, m1)))
        .filter(|(m0, m1)| m0 * 2560 + m1 * 51200 == 122_880)
        .collect();
    ensure(solutions == [(8, 2), (28, 1)], "brute-force solutions")?;
    r.expect("solutions of m₀·deg N₀ + m₁·deg N₁ = deg F", "{(28,1),(8,2)}")?;
    r.expect("(m₀, m₁)", "{(8,2)}")
}

fn thm2() -> Result<(), String> {
    let r = Run::new(&["repro", "thm2"])?;
    // 8a + 2b = 1 with b = 20a
    let a = frac(1, 8 + 2 * 20);
    let b = &a * int(20);
    ensure(a == frac(1, 48) && b == frac(5, 12), "hand-solved coefficients")?;
    r.expect("(a, b) from 8a + 2b = 1, b = 20a", "(1/48, 5/12)")?;
    r.expect("β₁ / β₀ from 8β₀ + 2β₁ = 0", -4)?;
    r.expect("mass 8a + 2b", 1)?;
    ensure(int(8) * a + int(2) * b == int(1), "mass identity")?;
    r.expect("[F], [N₀], [N₁] span a totally isotropic subspace", "isotropic")
}

fn independence() -> Result<(), String> {
    let r = Run::new(&["repro", "independence"])?;
    ensure(3 * 2i64.pow(7) == 384, "3·2⁷")?;
    r.expect("∫_{N₀} c₂(T_M)·u₁³", 384)?;
    // (1/2⁴)·2³·∫(2α²)(α + 4θ₀)³ on SM × Pic⁰ with ∫α³ = 4, ∫θ₀² = 2:
    // only 3·α·(4θ₀)² survives, giving 2·3·16·4·2 = 768, and 768/2 = 384.
    ensure(frac(1, 16) * int(8) * int(2 * 3 * 16 * 4 * 2) == int(384), "hand expansion")
}

fn lambda_check() -> Result<(), String> {
    let r = Run::new(&["repro", "lambda-check"])?;
    r.expect("λ by GRR equals the closed form", "972/972")?;
    r.expect("rank of p_! equals χ", "972/972")?;
    let mut cases = 0;
    for g in 1..=3 {
        for k in 0..=3 {
            for rk in -4..=4 {
                for d in -4..=4 {
                    let l = lambda_grr(g, k, &KClass::new(rk, d)).map_err(|e| e.to_string())?;
                    let mu = linear_coefficient(&l.value, "mu").map_err(|e| e.to_string())?;
                    let theta = linear_coefficient(&l.value, "theta").map_err(|e| e.to_string())?;
                    ensure(mu == int(d + rk * (k + 1 - g)) && theta == int(-rk), "λ coefficients")?;
                    cases += 1;
                }
            }
        }
    }
    ensure(cases >= 324, "grid has at least 324 cases")
}

fn verlinde() -> Result<(), String> {
    let r = Run::new(&["repro", "verlinde"])?;
    r.expect("B₂", "1/6")?;
    r.expect("∫_{M_C(2,1)} Θ⁵", 80)?;
    r.expect("fixed-determinant value by inverting the cover", 4)?;
    // ∫Θ⁵ = 5!·(2² − 2)·2²·B₂/2! at g = 2
    let hand: Rational = int(120) * int(2) * int(4) * frac(1, 6) / int(2);
    ensure(hand == int(80), "hand Bernoulli evaluation")
}

fn selfcheck() -> Result<(), String> {
    let r = Run::new(&["selfcheck"])?;
    let steps = r.0["steps"].as_array().cloned().unwrap_or_default();
    let with = |prefix: &str| -> Vec<&Value> {
        steps
            .iter()
            .filter(|s| s["label"].as_str().unwrap_or("").starts_with(prefix))
            .collect()
    };
    let confluence = with("presentation checks for ").len();
    ensure(confluence >= 10, "presentation checks on every built-in ring")?;
    let axioms = with("ring axioms on ");
    ensure(axioms.len() == confluence, "ring axioms on every ring")?;
    ensure(
        axioms.iter().all(|s| {
            let c = s["computed"].as_str().unwrap_or("");
            let (ok, n) = c.split_once('/').unwrap_or(("0", "1"));
            ok == n && n.parse::<usize>().unwrap_or(0) >= 1000
        }),
        "≥ 1000 randomized triples per ring",
    )?;
    ensure(with("exp(x)·exp(−x) = 1 on ").len() == confluence, "exp inverse on every ring")?;
    r.expect("Segre–Chern identity for W̄", "true")?;
    ensure(with("∫_{A⊗B} a·b = ∫a·∫b").len() == 1, "tensor-integral factorization")?;
    r.expect("injected contradictory rule is rejected", "gamma^2")
}

fn bb_cross_check() -> Result<(), String> {
    let r = Run::new(&["repro", "fiber"])?;
    r.expect("(u₀, u₁)_BB", 4)?;
    let via_dsl = eval_one("eval normal(120*bb(mukai(0, 0, 1), mukai(-4, -1, 0))^5);")?;
    ensure(via_dsl == "122880", "5!·bb(u₀,u₁)⁵ in the DSL")?;
    r.expect("deg_{u₁} F = ∫(4Θ)⁵", via_dsl)
}

type Check = fn() -> Result<(), String>;

fn main() {
    let start = Instant::now();
    let criteria: [(&str, Check); 10] = [
        ("fiber degree 122880 = 5!·2¹⁰ = 5·3·2¹³", fiber),
        ("N₀: u₁ = 2Θ, ∫Θ⁵ = 80 by both routes, degree 2560", n0),
        ("N₁: c₁(W), assembled class, −800, ∫ = 2, degree 51200, constant −1600", n1),
        ("multiplicities {(28,1),(8,2)} then (8,2)", multiplicities),
        ("coefficients (1/48, 5/12), β-scaling −4, mass 1, isotropy", thm2),
        ("obstruction integral 384 = 3·2⁷", independence),
        ("GRR equals the closed form on the grid, with rank = χ", lambda_check),
        ("B₂ = 1/6, ∫Θ⁵ = 80, fixed-determinant value 4", verlinde),
        ("selfcheck property suites", selfcheck),
        ("5!·bb(u₀,u₁)⁵ equals the fiber degree", bb_cross_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("acceptance: {} of {} passed in {:.2?}", criteria.len() - failed, criteria.len(), elapsed);
    if failed > 0 {
        std::process::exit(1);
    }
}
