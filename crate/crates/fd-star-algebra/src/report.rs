use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Passes when residual ≤ tolerance.
    AtMost,
    /// Passes when residual ≥ tolerance (used for "measurably nonzero" checks).
    AtLeast,
}

/// One verified identity with its worst residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub tag: String,
    pub residual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, tag: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            tag: tag.into(),
            residual,
            tolerance,
            comparison: Comparison::AtMost,
            passed: residual <= tolerance,
        }
    }

    pub fn at_least(name: &str, tag: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            tag: tag.into(),
            residual,
            tolerance,
            comparison: Comparison::AtLeast,
            passed: residual >= tolerance,
        }
    }
}

/// Named collection of checks plus free-form facts (sizes, scalars,
/// classifications) that are reported but not asserted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub facts: BTreeMap<String, String>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn check(&mut self, name: &str, tag: &str, residual: f64, tolerance: f64) -> bool {
        let c = Check::at_most(name, tag, residual, tolerance);
        let ok = c.passed;
        self.checks.push(c);
        ok
    }

    pub fn check_at_least(&mut self, name: &str, tag: &str, residual: f64, threshold: f64) -> bool {
        let c = Check::at_least(name, tag, residual, threshold);
        let ok = c.passed;
        self.checks.push(c);
        ok
    }

    /// Record a boolean condition as a check with residual 0 or 1.
    pub fn require(&mut self, name: &str, tag: &str, ok: bool) -> bool {
        self.check(name, tag, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.insert(key.into(), value.to_string());
    }

    /// Append the checks and facts of `other`, prefixing fact keys.
    pub fn absorb(&mut self, other: Report, prefix: &str) {
        self.checks.extend(other.checks);
        for (k, v) in other.facts {
            let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
            self.facts.insert(key, v);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.comparison == Comparison::AtMost)
            .fold(0.0, |m, c| m.max(c.residual))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        let tw = self.checks.iter().map(|c| c.tag.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.passed { "✓" } else { "✗" };
            let op = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            writeln!(
                f,
                "  {mark} {:w$}  {:tw$}  {:.5e} {op} {:.1e}",
                c.name,
                c.tag,
                c.residual,
                c.tolerance,
                w = w,
                tw = tw
            )?;
        }
        for (k, v) in &self.facts {
            writeln!(f, "  {k}: {v}")?;
        }
        Ok(())
    }
}
