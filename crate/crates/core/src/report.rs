//! Step-by-step reports: each step compares an exact computed value with an
//! expected one, or records an input fact that is assumed rather than computed.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::rational::{format_rational, Rational};
use crate::ring::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Assumption,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Assumption => "assumption",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub label: String,
    pub computed: String,
    pub expected: String,
    pub citation: String,
    pub verdict: Verdict,
}

/// Steps in execution order. The overall verdict is `pass` iff no step failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub steps: Vec<Step>,
    pub verdict: String,
}

impl Report {
    pub fn new(scenario: &str) -> Self {
        Report {
            scenario: scenario.to_string(),
            steps: Vec::new(),
            verdict: Verdict::Pass.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.verdict != Verdict::Fail)
    }

    fn push(&mut self, step: Step) {
        self.steps.push(step);
        self.verdict = if self.passed() { "pass" } else { "fail" }.to_string();
    }

    /// Records a comparison whose outcome the caller decided.
    pub fn record(
        &mut self,
        label: &str,
        computed: impl Into<String>,
        expected: impl Into<String>,
        citation: &str,
        ok: bool,
    ) -> bool {
        self.push(Step {
            label: label.to_string(),
            computed: computed.into(),
            expected: expected.into(),
            citation: citation.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        });
        ok
    }

    pub fn check_q(&mut self, label: &str, computed: &Rational, expected: &Rational, citation: &str) -> bool {
        self.record(
            label,
            format_rational(computed),
            format_rational(expected),
            citation,
            computed == expected,
        )
    }

    pub fn check_element(&mut self, label: &str, computed: &Element, expected: &Element, citation: &str) -> bool {
        self.record(
            label,
            computed.to_string(),
            expected.to_string(),
            citation,
            computed == expected,
        )
    }

    /// Compares canonical text forms.
    pub fn check_text(&mut self, label: &str, computed: &str, expected: &str, citation: &str) -> bool {
        self.record(label, computed, expected, citation, computed == expected)
    }

    /// An input fact used by later steps but not computed here.
    pub fn assume(&mut self, label: &str, value: &str, citation: &str) {
        self.push(Step {
            label: label.to_string(),
            computed: value.to_string(),
            expected: value.to_string(),
            citation: citation.to_string(),
            verdict: Verdict::Assumption,
        });
    }

    /// Appends another report's steps with labels prefixed by its scenario.
    pub fn absorb(&mut self, other: Report) {
        for mut step in other.steps {
            step.label = format!("{}: {}", other.scenario, step.label);
            self.push(step);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text table, one line per step.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        for s in &self.steps {
            let _ = writeln!(out, "  [{:<10}] {}", s.verdict.to_string(), s.label);
            let _ = writeln!(out, "      computed: {}", s.computed);
            let _ = writeln!(out, "      expected: {}   ({})", s.expected, s.citation);
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn verdict_tracks_steps() {
        let mut r = Report::new("demo");
        assert!(r.check_q("half", &frac(2, 4), &frac(1, 2), "arithmetic"));
        r.assume("input", "0", "a known vanishing");
        assert!(r.passed());
        assert_eq!(r.verdict, "pass");
        assert!(!r.check_q("wrong", &int(3), &int(4), "arithmetic"));
        assert_eq!(r.verdict, "fail");
        assert!(!r.passed());
    }

    #[test]
    fn json_schema() {
        let mut r = Report::new("demo");
        r.check_q("x", &frac(-3, 6), &frac(-1, 2), "c");
        r.assume("y", "0", "d");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["scenario"], "demo");
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["steps"][0]["computed"], "-1/2");
        assert_eq!(v["steps"][0]["verdict"], "pass");
        assert_eq!(v["steps"][1]["verdict"], "assumption");
        let keys: Vec<_> = v["steps"][0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 5);
    }

    #[test]
    fn absorb_prefixes_labels() {
        let mut a = Report::new("all");
        let mut b = Report::new("fiber");
        b.check_text("t", "1", "2", "c");
        a.absorb(b);
        assert_eq!(a.steps[0].label, "fiber: t");
        assert_eq!(a.verdict, "fail");
    }
}
