//! Verification reports: sections of residual checks plus an overall
//! classification, rendered as a table or as stable JSON.

use std::fmt::Write as _;

use fd_star_algebra::report::Comparison;
use fd_star_algebra::{Check, Report};
use serde_json::{json, Map, Value};

use crate::codec::{array, field};
use crate::error::{schema, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub classification: String,
    pub sections: Vec<Report>,
    pub tolerance: f64,
    pub seed: u64,
}

/// Scientific notation with six significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn comparison_name(c: &Comparison) -> &'static str {
    match c {
        Comparison::AtMost => "at most",
        Comparison::AtLeast => "at least",
    }
}

impl VerificationReport {
    pub fn new(classification: impl ToString, tolerance: f64, seed: u64) -> Self {
        VerificationReport { classification: classification.to_string(), sections: Vec::new(), tolerance, seed }
    }

    pub fn push(&mut self, r: Report) {
        self.sections.push(r);
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(Report::passed)
    }

    /// (section title, failing check)
    pub fn failures(&self) -> Vec<(&str, &Check)> {
        self.sections.iter().flat_map(|s| s.failures().into_iter().map(move |c| (s.title.as_str(), c))).collect()
    }

    pub fn check_count(&self) -> usize {
        self.sections.iter().map(|s| s.checks.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let checks: Vec<Value> = s
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "name": c.name,
                            "tag": c.tag,
                            "residual": sci(c.residual),
                            "tolerance": sci(c.tolerance),
                            "comparison": comparison_name(&c.comparison),
                            "passed": c.passed,
                        })
                    })
                    .collect();
                let facts: Map<String, Value> = s.facts.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                json!({ "title": s.title, "checks": checks, "facts": facts })
            })
            .collect();
        json!({
            "classification": self.classification,
            "environment": { "tolerance": sci(self.tolerance), "seed": self.seed },
            "passed": self.passed(),
            "checks": self.check_count(),
            "sections": sections,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let classification =
            field(v, "classification", "report")?.as_str().ok_or_else(|| schema("classification: expected a string"))?;
        let env = field(v, "environment", "report")?;
        let tolerance = parse_sci(field(env, "tolerance", "environment")?, "environment tolerance")?;
        let seed = field(env, "seed", "environment")?.as_u64().ok_or_else(|| schema("environment seed"))?;
        let mut out = VerificationReport::new(classification, tolerance, seed);
        for s in array(field(v, "sections", "report")?, "sections")? {
            let title = field(s, "title", "section")?.as_str().ok_or_else(|| schema("section title"))?;
            let mut r = Report::new(title);
            for c in array(field(s, "checks", "section")?, "checks")? {
                let text = |k: &str| -> Result<String> {
                    Ok(field(c, k, "check")?.as_str().ok_or_else(|| schema(format!("check {k}")))?.to_string())
                };
                let comparison = match text("comparison")?.as_str() {
                    "at most" => Comparison::AtMost,
                    "at least" => Comparison::AtLeast,
                    other => return Err(schema(format!("unknown comparison \"{other}\""))),
                };
                r.checks.push(Check {
                    name: text("name")?,
                    tag: text("tag")?,
                    residual: parse_sci(field(c, "residual", "check")?, "residual")?,
                    tolerance: parse_sci(field(c, "tolerance", "check")?, "tolerance")?,
                    comparison,
                    passed: field(c, "passed", "check")?.as_bool().ok_or_else(|| schema("check passed"))?,
                });
            }
            if let Some(facts) = s.get("facts").and_then(Value::as_object) {
                for (k, val) in facts {
                    r.facts.insert(k.clone(), val.as_str().map_or_else(|| val.to_string(), str::to_string));
                }
            }
            out.push(r);
        }
        Ok(out)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "classification: {}", self.classification);
        let _ = writeln!(s, "tolerance {:.1e}, seed {}", self.tolerance, self.seed);
        for sec in &self.sections {
            let _ = writeln!(s);
            let _ = write!(s, "{sec}");
        }
        let _ = writeln!(s);
        let fails = self.failures();
        if fails.is_empty() {
            let _ = writeln!(s, "PASS: {} checks", self.check_count());
        } else {
            let _ = writeln!(s, "FAIL: {} of {} checks", fails.len(), self.check_count());
            for (title, c) in fails {
                let _ = writeln!(s, "  ✗ {title}: {} [{}] residual {}", c.name, c.tag, sci(c.residual));
            }
        }
        s
    }

    pub fn emit(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize");
            s.push('\n');
            s
        } else {
            self.table()
        }
    }
}

fn parse_sci(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::String(s) => s.parse().map_err(|_| schema(format!("{what}: \"{s}\" is not a number"))),
        Value::Number(n) => n.as_f64().ok_or_else(|| schema(what.to_string())),
        _ => Err(schema(format!("{what}: expected a number"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = Report::new("axioms");
        r.check("S^2 = id", "antipode", 1.234567891e-12, 1e-9);
        r.check("eps(1) = 1", "counit", 0.5, 1e-9);
        r.fact("dim", 4);
        let mut v = VerificationReport::new("invalid", 1e-9, 3);
        v.push(r);
        v
    }

    #[test]
    fn residuals_have_six_significant_digits() {
        assert_eq!(sci(1.234567891e-12), "1.23457e-12");
        let j = sample().to_json();
        assert_eq!(j["sections"][0]["checks"][0]["residual"], "1.23457e-12");
    }

    #[test]
    fn json_is_parseable_and_round_trips() {
        let v = sample();
        let text = v.emit(true);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["classification"], "invalid");
        let back = VerificationReport::from_json(&parsed).unwrap();
        assert_eq!(back.emit(true), text);
        assert!(!back.passed());
    }

    #[test]
    fn table_marks_rows() {
        let t = sample().table();
        assert!(t.contains("✓ S^2 = id"));
        assert!(t.contains("✗ eps(1) = 1"));
        assert!(t.contains("FAIL: 1 of 2 checks"));
    }
}
