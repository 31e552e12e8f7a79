//! Finitely presented graded-commutative rings over the rationals.
//!
//! A [`RingPresentation`] is a list of even-degree generators, a set of
//! degree-homogeneous rewrite rules `monomial -> polynomial`, a top degree
//! (twice the complex dimension of the space it models) and an integration
//! table on the top-degree normal-form monomials.
//!
//! Monomials are ordered graded-lexicographically with precedence given by
//! the generator list: the first generator is the most significant. Every
//! rule must rewrite its left-hand side into strictly smaller monomials of the
//! same degree, so rewriting terminates. Confluence is checked exhaustively at
//! construction over all monomials of degree at most the top degree, which
//! also yields a normal-form table used by every later operation.
//!
//! Elements above the top degree are truncated.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{format_rational, int, Rational};

pub type Ring = Arc<RingPresentation>;

type Terms = BTreeMap<Monomial, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{name}` has degree {degree}; degrees must be positive and even")]
    BadGeneratorDegree { name: String, degree: u32 },
    #[error("generator `{name}` has curve-degree tag {cdeg}; allowed tags are 0, 1, 2")]
    BadCurveDegree { name: String, cdeg: u8 },
    #[error("top degree {0} is odd")]
    BadTopDegree(u32),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed monomial `{0}`")]
    MalformedMonomial(String),
    #[error("rule `{rule}` is not degree-homogeneous")]
    NonHomogeneousRule { rule: String },
    #[error("rule `{rule}` does not decrease in the monomial order")]
    NonDecreasingRule { rule: String },
    #[error("rewriting is not confluent: `{witness}` reduces to both `{first}` and `{second}`")]
    NotConfluent {
        witness: String,
        first: String,
        second: String,
    },
    #[error("no integral given for top-degree normal-form monomial `{0}`")]
    MissingIntegral(String),
    #[error("integral key `{0}` is not a top-degree normal-form monomial")]
    InvalidIntegralKey(String),
    #[error("top-degree monomial `{0}` is missing from the integration table")]
    UnknownTopMonomial(String),
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("exponential needs an element without degree-0 part")]
    NonPositiveDegreeTerm,
    #[error("element with zero constant term is not invertible")]
    NotInvertible,
    #[error("generator name `{0}` occurs in both factors")]
    NameCollision(String),
}

pub type Result<T> = std::result::Result<T, RingError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    /// Cohomological degree (even, positive).
    pub degree: u32,
    /// Fiber-degree tag along a curve factor: 0, 1 or 2.
    pub cdeg: u8,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self::with_cdeg(name, degree, 0)
    }

    pub fn with_cdeg(name: impl Into<String>, degree: u32, cdeg: u8) -> Self {
        Generator {
            name: name.into(),
            degree,
            cdeg,
        }
    }
}

/// Exponent vector indexed by the generators of one ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn cofactor(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.0.clone();
        exps[i] = e;
        Monomial(exps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: BTreeMap<Monomial, Rational>,
}

/// One line of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failure(&self, check: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check && !c.passed)
    }
}

#[derive(Debug)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    top_degree: u32,
    integrals: BTreeMap<Monomial, Rational>,
    normal_forms: HashMap<Monomial, Terms>,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
            && self.rules == other.rules
            && self.top_degree == other.top_degree
            && self.integrals == other.integrals
    }
}

impl Eq for RingPresentation {}

/// Unvalidated ingredients of a presentation.
struct Parts<'a> {
    generators: &'a [Generator],
    rules: &'a [RewriteRule],
    top_degree: u32,
    integrals: &'a BTreeMap<Monomial, Rational>,
}

impl Parts<'_> {
    fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a)
            .cmp(&self.degree(b))
            .then_with(|| a.0.cmp(&b.0))
    }

    fn fmt_monomial(&self, m: &Monomial) -> String {
        format_monomial(self.generators, m)
    }

    fn fmt_terms(&self, t: &Terms) -> String {
        format_terms(self.generators, t, |a, b| self.cmp(a, b))
    }

    fn fmt_rule(&self, r: &RewriteRule) -> String {
        format!("{} -> {}", self.fmt_monomial(&r.lhs), self.fmt_terms(&r.rhs))
    }

    fn check_generators(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for g in self.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(RingError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 || g.degree % 2 == 1 {
                return Err(RingError::BadGeneratorDegree {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
            if g.cdeg > 2 {
                return Err(RingError::BadCurveDegree {
                    name: g.name.clone(),
                    cdeg: g.cdeg,
                });
            }
        }
        if self.top_degree % 2 == 1 {
            return Err(RingError::BadTopDegree(self.top_degree));
        }
        Ok(())
    }

    fn check_homogeneous(&self) -> Result<()> {
        for r in self.rules {
            let d = self.degree(&r.lhs);
            if r.rhs.keys().any(|m| self.degree(m) != d) {
                return Err(RingError::NonHomogeneousRule {
                    rule: self.fmt_rule(r),
                });
            }
        }
        Ok(())
    }

    fn check_decreasing(&self) -> Result<()> {
        for r in self.rules {
            if r.lhs.is_one() || r.rhs.keys().any(|m| self.cmp(m, &r.lhs) != Ordering::Less) {
                return Err(RingError::NonDecreasingRule {
                    rule: self.fmt_rule(r),
                });
            }
        }
        Ok(())
    }

    /// Every monomial of degree at most the top degree, in increasing order.
    fn monomials_up_to_top(&self) -> Vec<Monomial> {
        fn walk(degs: &[u32], budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() == degs.len() {
                out.push(Monomial(prefix.clone()));
                return;
            }
            let d = degs[prefix.len()];
            let mut e = 0;
            while e * d <= budget {
                prefix.push(e);
                walk(degs, budget - e * d, prefix, out);
                prefix.pop();
                e += 1;
            }
        }
        let degs: Vec<u32> = self.generators.iter().map(|g| g.degree).collect();
        let mut out = Vec::new();
        walk(&degs, self.top_degree, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| self.cmp(a, b));
        out
    }

    /// Builds the normal-form table. For each monomial, in increasing order,
    /// every applicable rule is applied once and the result reduced with the
    /// (already unique) normal forms of the strictly smaller monomials it
    /// produces. Distinct outcomes mean the system is not confluent.
    fn normal_form_table(&self) -> Result<HashMap<Monomial, Terms>> {
        let mut table: HashMap<Monomial, Terms> = HashMap::new();
        for m in self.monomials_up_to_top() {
            let mut outcomes: Vec<Terms> = Vec::new();
            for rule in self.rules.iter().filter(|r| r.lhs.divides(&m)) {
                let cof = rule.lhs.cofactor(&m);
                let mut acc = Terms::new();
                for (rm, c) in &rule.rhs {
                    let reduced = &table[&rm.mul(&cof)];
                    for (nm, nc) in reduced {
                        add_term(&mut acc, nm.clone(), c * nc);
                    }
                }
                if let Some(first) = outcomes.first() {
                    if *first != acc {
                        return Err(RingError::NotConfluent {
                            witness: self.fmt_monomial(&m),
                            first: self.fmt_terms(first),
                            second: self.fmt_terms(&acc),
                        });
                    }
                } else {
                    outcomes.push(acc);
                }
            }
            let nf = outcomes.pop().unwrap_or_else(|| {
                let mut t = Terms::new();
                t.insert(m.clone(), Rational::one());
                t
            });
            table.insert(m, nf);
        }
        Ok(table)
    }

    fn irreducible_of_degree(&self, d: u32) -> Vec<Monomial> {
        self.monomials_up_to_top()
            .into_iter()
            .filter(|m| self.degree(m) == d && !self.rules.iter().any(|r| r.lhs.divides(m)))
            .collect()
    }

    fn check_integrals(&self) -> Result<()> {
        let top = self.irreducible_of_degree(self.top_degree);
        for k in self.integrals.keys() {
            if !top.contains(k) {
                return Err(RingError::InvalidIntegralKey(self.fmt_monomial(k)));
            }
        }
        for m in &top {
            if !self.integrals.contains_key(m) {
                return Err(RingError::MissingIntegral(self.fmt_monomial(m)));
            }
        }
        Ok(())
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.generators.len();
        let bad = |m: &Monomial| m.0.len() != n;
        for r in self.rules {
            if bad(&r.lhs) || r.rhs.keys().any(bad) {
                return Err(RingError::MalformedMonomial(format!("{:?}", r.lhs.0)));
            }
        }
        if let Some(k) = self.integrals.keys().find(|m| bad(m)) {
            return Err(RingError::MalformedMonomial(format!("{:?}", k.0)));
        }
        Ok(())
    }

    fn verify(&self) -> VerificationReport {
        fn record(checks: &mut Vec<CheckOutcome>, check: &str, r: Result<String>) -> bool {
            let passed = r.is_ok();
            checks.push(CheckOutcome {
                check: check.to_string(),
                passed,
                detail: match r {
                    Ok(d) => d,
                    Err(e) => e.to_string(),
                },
            });
            passed
        }
        let ok = |r: Result<()>| r.map(|()| "ok".to_string());
        let mut checks = Vec::new();
        let shaped = record(
            &mut checks,
            "generators",
            ok(self.check_generators().and(self.check_shapes())),
        );
        if !shaped {
            return VerificationReport { checks };
        }
        let homogeneous = record(&mut checks, "homogeneity", ok(self.check_homogeneous()));
        let terminating = record(&mut checks, "termination", ok(self.check_decreasing()));
        let confluence = if homogeneous && terminating {
            let n = self.monomials_up_to_top().len();
            self.normal_form_table()
                .map(|_| format!("ok ({n} monomials of degree <= {})", self.top_degree))
        } else {
            Err(RingError::MalformedMonomial(
                "skipped: rules are not homogeneous and decreasing".into(),
            ))
        };
        record(&mut checks, "confluence", confluence);
        record(&mut checks, "integrals_coverage", ok(self.check_integrals()));
        VerificationReport { checks }
    }
}

fn add_term(acc: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn format_monomial(gens: &[Generator], m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .zip(gens)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| {
            if *e == 1 {
                g.name.clone()
            } else {
                format!("{}^{}", g.name, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn format_terms(
    gens: &[Generator],
    terms: &Terms,
    cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut sorted: Vec<(&Monomial, &Rational)> = terms.iter().collect();
    sorted.sort_by(|a, b| cmp(b.0, a.0));
    let mut out = String::new();
    for (i, (m, c)) in sorted.into_iter().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        let body = if m.is_one() {
            format_rational(&abs)
        } else if abs.is_one() {
            format_monomial(gens, m)
        } else {
            format!("{}*{}", format_rational(&abs), format_monomial(gens, m))
        };
        match (i, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// Parses `a^2*b*c^3` against a generator list. `1` is the empty monomial.
pub fn parse_monomial(gens: &[Generator], text: &str) -> Result<Monomial> {
    let mut exps = vec![0u32; gens.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(Monomial(exps));
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| RingError::MalformedMonomial(text.to_string()))?,
            ),
            None => (factor, 1),
        };
        if name.is_empty() {
            return Err(RingError::MalformedMonomial(text.to_string()));
        }
        let i = gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        exps[i] += e;
    }
    Ok(Monomial(exps))
}

/// Name-based construction of a presentation.
///
/// ```
/// use cohocalc_core::rational::int;
/// use cohocalc_core::ring::RingBuilder;
/// let ring = RingBuilder::new(4)
///     .generator("x", 2)
///     .rule("x^3", &[])
///     .integral("x^2", 1)
///     .build()
///     .unwrap();
/// assert_eq!(ring.gen("x").unwrap().pow(2).integrate().unwrap(), int(1));
/// ```
#[derive(Debug, Clone, Default)]
pub struct RingBuilder {
    generators: Vec<Generator>,
    rules: Vec<(String, Vec<(Rational, String)>)>,
    top_degree: u32,
    integrals: Vec<(String, Rational)>,
}

impl RingBuilder {
    pub fn new(top_degree: u32) -> Self {
        RingBuilder {
            top_degree,
            ..Default::default()
        }
    }

    pub fn generator(self, name: &str, degree: u32) -> Self {
        self.tagged_generator(name, degree, 0)
    }

    pub fn tagged_generator(mut self, name: &str, degree: u32, cdeg: u8) -> Self {
        self.generators.push(Generator::with_cdeg(name, degree, cdeg));
        self
    }

    /// Adds `lhs -> Σ c·m` with integer coefficients.
    pub fn rule(self, lhs: &str, rhs: &[(i64, &str)]) -> Self {
        let rhs = rhs.iter().map(|(c, m)| (int(*c), m.to_string())).collect();
        self.rule_q(lhs, rhs)
    }

    pub fn rule_q(mut self, lhs: &str, rhs: Vec<(Rational, String)>) -> Self {
        self.rules.push((lhs.to_string(), rhs));
        self
    }

    pub fn integral(self, monomial: &str, value: i64) -> Self {
        self.integral_q(monomial, int(value))
    }

    pub fn integral_q(mut self, monomial: &str, value: Rational) -> Self {
        self.integrals.push((monomial.to_string(), value));
        self
    }

    fn resolve(&self) -> Result<(Vec<RewriteRule>, BTreeMap<Monomial, Rational>)> {
        let gens = &self.generators;
        let mut rules = Vec::new();
        for (lhs, rhs) in &self.rules {
            let lhs = parse_monomial(gens, lhs)?;
            let mut terms = Terms::new();
            for (c, m) in rhs {
                add_term(&mut terms, parse_monomial(gens, m)?, c.clone());
            }
            rules.push(RewriteRule { lhs, rhs: terms });
        }
        let mut integrals = BTreeMap::new();
        for (m, v) in &self.integrals {
            integrals.insert(parse_monomial(gens, m)?, v.clone());
        }
        Ok((rules, integrals))
    }

    /// Runs every validation check and reports all outcomes.
    pub fn verify(&self) -> VerificationReport {
        match self.resolve() {
            Ok((rules, integrals)) => Parts {
                generators: &self.generators,
                rules: &rules,
                top_degree: self.top_degree,
                integrals: &integrals,
            }
            .verify(),
            Err(e) => VerificationReport {
                checks: vec![CheckOutcome {
                    check: "generators".into(),
                    passed: false,
                    detail: e.to_string(),
                }],
            },
        }
    }

    pub fn build(self) -> Result<Ring> {
        let (rules, integrals) = self.resolve()?;
        RingPresentation::new(self.generators, rules, self.top_degree, integrals)
    }
}

impl RingPresentation {
    /// Validates and freezes a presentation.
    pub fn new(
        generators: Vec<Generator>,
        rules: Vec<RewriteRule>,
        top_degree: u32,
        integrals: BTreeMap<Monomial, Rational>,
    ) -> Result<Ring> {
        let parts = Parts {
            generators: &generators,
            rules: &rules,
            top_degree,
            integrals: &integrals,
        };
        parts.check_generators()?;
        parts.check_shapes()?;
        parts.check_homogeneous()?;
        parts.check_decreasing()?;
        let normal_forms = parts.normal_form_table()?;
        parts.check_integrals()?;
        Ok(Arc::new(RingPresentation {
            generators,
            rules,
            top_degree,
            integrals,
            normal_forms,
        }))
    }

    /// The ring of a point: no generators, top degree 0, `∫1 = 1`.
    pub fn point() -> Ring {
        let mut integrals = BTreeMap::new();
        integrals.insert(Monomial::one(0), Rational::one());
        RingPresentation::new(Vec::new(), Vec::new(), 0, integrals).expect("point ring is valid")
    }

    /// Re-runs every construction check.
    pub fn verify(&self) -> VerificationReport {
        Parts {
            generators: &self.generators,
            rules: &self.rules,
            top_degree: self.top_degree,
            integrals: &self.integrals,
        }
        .verify()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn integrals(&self) -> &BTreeMap<Monomial, Rational> {
        &self.integrals
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        self.parts().degree(m)
    }

    /// Graded-lexicographic comparison in this ring's generator precedence.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.parts().cmp(a, b)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        format_monomial(&self.generators, m)
    }

    pub fn format_rule(&self, r: &RewriteRule) -> String {
        self.parts().fmt_rule(r)
    }

    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        parse_monomial(&self.generators, text)
    }

    /// All monomials of degree at most the top degree, in increasing order.
    pub fn monomials(&self) -> Vec<Monomial> {
        self.parts().monomials_up_to_top()
    }

    /// Normal-form monomials (no rule applies) of exact degree `d`.
    pub fn normal_monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        self.parts().irreducible_of_degree(d)
    }

    fn parts(&self) -> Parts<'_> {
        Parts {
            generators: &self.generators,
            rules: &self.rules,
            top_degree: self.top_degree,
            integrals: &self.integrals,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        Element {
            ring: Arc::clone(self),
            terms: Terms::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.constant(Rational::one())
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> Element {
        let mut terms = Terms::new();
        add_term(&mut terms, Monomial::one(self.generators.len()), c);
        Element::from_terms(self, terms)
    }

    pub fn gen(self: &Arc<Self>, name: &str) -> Result<Element> {
        let m = self.parse_monomial(name)?;
        Ok(self.monomial(m))
    }

    /// The normalized monomial `m`.
    pub fn monomial(self: &Arc<Self>, m: Monomial) -> Element {
        let mut terms = Terms::new();
        terms.insert(m, Rational::one());
        Element::from_terms(self, terms)
    }

    /// Builds an element from `(coefficient, monomial text)` pairs and
    /// normalizes it.
    pub fn element(self: &Arc<Self>, terms: &[(Rational, &str)]) -> Result<Element> {
        let mut acc = Terms::new();
        for (c, m) in terms {
            add_term(&mut acc, self.parse_monomial(m)?, c.clone());
        }
        Ok(Element::from_terms(self, acc))
    }

    /// Same as [`RingPresentation::element`] but leaves the terms unreduced.
    pub fn raw_element(self: &Arc<Self>, terms: &[(Rational, &str)]) -> Result<Element> {
        let mut acc = Terms::new();
        for (c, m) in terms {
            add_term(&mut acc, self.parse_monomial(m)?, c.clone());
        }
        Ok(Element {
            ring: Arc::clone(self),
            terms: acc,
        })
    }

    /// A copy of this presentation with generators renamed.
    pub fn renamed(&self, renames: &[(&str, &str)]) -> Result<Ring> {
        let mut generators = self.generators.clone();
        for (from, to) in renames {
            let g = generators
                .iter_mut()
                .find(|g| g.name == *from)
                .ok_or_else(|| RingError::UnknownGenerator(from.to_string()))?;
            g.name = to.to_string();
        }
        RingPresentation::new(
            generators,
            self.rules.clone(),
            self.top_degree,
            self.integrals.clone(),
        )
    }

    /// Rules `m -> 0` for the minimal normal-form monomials of degree above
    /// the top degree. Needed when this ring is embedded in a larger one whose
    /// own truncation no longer kills those monomials.
    pub fn overflow_rules(&self) -> Vec<RewriteRule> {
        let max_deg = self.generators.iter().map(|g| g.degree).max().unwrap_or(0);
        if max_deg == 0 {
            return Vec::new();
        }
        let widened = Parts {
            generators: &self.generators,
            rules: &self.rules,
            top_degree: self.top_degree + max_deg,
            integrals: &self.integrals,
        };
        widened
            .monomials_up_to_top()
            .into_iter()
            .filter(|m| widened.degree(m) > self.top_degree)
            .filter(|m| !self.rules.iter().any(|r| r.lhs.divides(m)))
            .filter(|m| {
                (0..m.0.len())
                    .filter(|&i| m.0[i] > 0)
                    .all(|i| widened.degree(&m.with_exponent(i, m.0[i] - 1)) <= self.top_degree)
            })
            .map(|lhs| RewriteRule {
                lhs,
                rhs: Terms::new(),
            })
            .collect()
    }
}

/// Künneth product `A ⊗ B`. Generator names must be disjoint.
///
/// The generators of `A` take precedence over those of `B`. Both factors keep
/// their truncation through [`RingPresentation::overflow_rules`], and the
/// integration table is the product of the two tables.
pub fn tensor_product(a: &RingPresentation, b: &RingPresentation) -> Result<Ring> {
    for g in &a.generators {
        if b.generator_index(&g.name).is_some() {
            return Err(RingError::NameCollision(g.name.clone()));
        }
    }
    let na = a.generators.len();
    let nb = b.generators.len();
    let left = |m: &Monomial| {
        let mut e = m.0.clone();
        e.resize(na + nb, 0);
        Monomial(e)
    };
    let right = |m: &Monomial| {
        let mut e = vec![0; na];
        e.extend_from_slice(&m.0);
        Monomial(e)
    };
    let lift_rule = |r: &RewriteRule, f: &dyn Fn(&Monomial) -> Monomial| RewriteRule {
        lhs: f(&r.lhs),
        rhs: r.rhs.iter().map(|(m, c)| (f(m), c.clone())).collect(),
    };
    let mut generators = a.generators.clone();
    generators.extend(b.generators.iter().cloned());
    let mut rules: Vec<RewriteRule> = Vec::new();
    for r in a.rules.iter().chain(a.overflow_rules().iter()) {
        rules.push(lift_rule(r, &left));
    }
    for r in b.rules.iter().chain(b.overflow_rules().iter()) {
        rules.push(lift_rule(r, &right));
    }
    let mut integrals = BTreeMap::new();
    for (ma, va) in &a.integrals {
        for (mb, vb) in &b.integrals {
            integrals.insert(left(ma).mul(&right(mb)), va * vb);
        }
    }
    RingPresentation::new(generators, rules, a.top_degree + b.top_degree, integrals)
}

/// Exact linear combination of elements of one ring.
pub fn linear_combine(pairs: &[(Rational, Element)]) -> Result<Element> {
    let Some((_, first)) = pairs.first() else {
        return Err(RingError::MixedRings);
    };
    let mut acc = first.ring.zero();
    for (c, e) in pairs {
        acc = acc.checked_add(&e.scale(c))?;
    }
    Ok(acc)
}

/// A ring element: a finite map from monomials to nonzero rationals.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    terms: Terms,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = &self.ring;
        f.write_str(&format_terms(&ring.generators, &self.terms, |a, b| {
            ring.cmp_monomials(a, b)
        }))
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Element {
    fn from_terms(ring: &Ring, terms: Terms) -> Element {
        Element {
            ring: Arc::clone(ring),
            terms,
        }
        .normalize()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ring(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    fn check_ring(&self, other: &Element) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(RingError::MixedRings)
        }
    }

    /// Rewrites every monomial to normal form and drops terms above the top
    /// degree. Idempotent.
    pub fn normalize(&self) -> Element {
        let mut acc = Terms::new();
        for (m, c) in &self.terms {
            if self.ring.monomial_degree(m) > self.ring.top_degree {
                continue;
            }
            for (nm, nc) in &self.ring.normal_forms[m] {
                add_term(&mut acc, nm.clone(), c * nc);
            }
        }
        Element {
            ring: Arc::clone(&self.ring),
            terms: acc,
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Element {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.checked_add(&other.neg_ref())
    }

    /// Cup product.
    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.check_ring(other)?;
        let top = self.ring.top_degree;
        let mut acc = Terms::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if self.ring.monomial_degree(&m) > top {
                    continue;
                }
                let c = ca * cb;
                for (nm, nc) in &self.ring.normal_forms[&m] {
                    add_term(&mut acc, nm.clone(), &c * nc);
                }
            }
        }
        Ok(Element {
            ring: Arc::clone(&self.ring),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let terms = if c.is_zero() {
            Terms::new()
        } else {
            self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect()
        };
        Element {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn scale_int(&self, c: i64) -> Element {
        self.scale(&int(c))
    }

    fn neg_ref(&self) -> Element {
        self.scale(&-Rational::one())
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut result = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ring.generators.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Σ aⁿ/n!`, which is finite because `a` is nilpotent.
    pub fn exp_truncated(&self) -> Result<Element> {
        if !self.constant_term().is_zero() {
            return Err(RingError::NonPositiveDegreeTerm);
        }
        let mut sum = self.ring.one();
        let mut power = self.ring.one();
        let mut n = 0i64;
        loop {
            n += 1;
            power = (&power * self).scale(&Rational::new(1.into(), n.into()));
            if power.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &power;
        }
    }

    /// Multiplicative inverse, which exists iff the constant term is nonzero.
    pub fn inverse(&self) -> Result<Element> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(RingError::NotInvertible);
        }
        // (c(1 + x))^{-1} = c^{-1} Σ (-x)^n with x nilpotent.
        let inv_c = c.recip();
        let x = &self.scale(&inv_c) - &self.ring.one();
        let neg_x = -&x;
        let mut sum = self.ring.one();
        let mut power = self.ring.one();
        loop {
            power = &power * &neg_x;
            if power.is_zero() {
                return Ok(sum.scale(&inv_c));
            }
            sum = &sum + &power;
        }
    }

    /// Sum of the terms of exact degree `d`.
    pub fn degree_component(&self, d: u32) -> Element {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.monomial_degree(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// The common degree of all terms, or `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.ring.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Applies the integration table to the top-degree part.
    pub fn integrate(&self) -> Result<Rational> {
        let top = self.ring.top_degree;
        let mut total = Rational::zero();
        for (m, c) in &self.normalize().terms {
            if self.ring.monomial_degree(m) != top {
                continue;
            }
            let v = self
                .ring
                .integrals
                .get(m)
                .ok_or_else(|| RingError::UnknownTopMonomial(self.ring.format_monomial(m)))?;
            total += c * v;
        }
        Ok(total)
    }

    /// The coefficient of `generator^k`: the terms whose exponent of
    /// `generator` is exactly `k`, with that factor removed.
    pub fn coeff_of(&self, generator: &str, k: u32) -> Result<Element> {
        let i = self
            .ring
            .generator_index(generator)
            .ok_or_else(|| RingError::UnknownGenerator(generator.to_string()))?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] == k)
            .map(|(m, c)| (m.with_exponent(i, 0), c.clone()))
            .collect();
        Ok(Element {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// Coefficient of a monomial, applying [`Element::coeff_of`] per factor.
    pub fn coeff_of_monomial(&self, m: &Monomial) -> Element {
        let mut acc = self.clone();
        for (i, &e) in m.0.iter().enumerate() {
            let name = self.ring.generators[i].name.clone();
            acc = acc.coeff_of(&name, e).expect("generator of this ring");
        }
        acc
    }

    /// Sets the named generators to zero.
    pub fn substitute_zero(&self, names: &[&str]) -> Result<Element> {
        let mut idx = Vec::new();
        for n in names {
            idx.push(
                self.ring
                    .generator_index(n)
                    .ok_or_else(|| RingError::UnknownGenerator(n.to_string()))?,
            );
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| idx.iter().all(|&i| m.0[i] == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Element {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// Transports this element to `target` by matching generator names, then
    /// normalizes there. This is the pullback along a projection whenever
    /// `target` contains this ring's generators with compatible relations.
    /// Generators missing from `target` are allowed only if no term uses them.
    pub fn lift_into(&self, target: &Ring) -> Result<Element> {
        let map: Vec<Option<usize>> = self
            .ring
            .generators
            .iter()
            .map(|g| target.generator_index(&g.name))
            .collect();
        let n = target.generators.len();
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += x,
                    None => {
                        return Err(RingError::UnknownGenerator(
                            self.ring.generators[i].name.clone(),
                        ))
                    }
                }
            }
            add_term(&mut terms, Monomial(e), c.clone());
        }
        Ok(Element::from_terms(target, terms))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Element> for &Element {
            type Output = Element;
            /// Panics if the operands live in different rings; use the
            /// `checked_*` methods to get an error instead.
            fn $method(self, rhs: &Element) -> Element {
                self.$checked(rhs).expect("operands in the same ring")
            }
        }
        impl $tr<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
        impl $tr<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.neg_ref()
    }
}
