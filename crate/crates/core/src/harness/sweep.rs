//! Exhaustive parameter sweeps over an identity.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Deserialize;

use super::HarnessError;
use crate::lang::{
    self, check_instance_with, eval_integer, format_identity, parse_range, Bindings, EvalOptions, Expr, FibConvention,
    IdentityAst, InstanceOutcome,
};
use crate::scripts;

/// One parameter range `name=lo..hi`; bounds may mention earlier parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Range {
    pub name: String,
    pub lo: Expr,
    pub hi: Expr,
}

impl Range {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let (name, lo, hi) = parse_range(text)?;
        Ok(Range { name, lo, hi })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={}..{}",
            self.name,
            lang::format_expr(&self.lo),
            lang::format_expr(&self.hi)
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Catalog id or `"custom"`; used only for reporting.
    pub label: String,
    pub identity: IdentityAst,
    pub ranges: Vec<Range>,
    pub max_instances: Option<usize>,
    pub time_budget: Option<Duration>,
    pub fib: FibConvention,
}

impl SweepSpec {
    /// Validates that each parameter has exactly one range and that bounds
    /// only refer to parameters declared before them.
    pub fn new(label: impl Into<String>, identity: IdentityAst, ranges: Vec<Range>) -> Result<Self, HarnessError> {
        let mut declared: Vec<&str> = Vec::new();
        for r in &ranges {
            if !identity.params.contains(&r.name) {
                return Err(HarnessError::Spec(format!(
                    "range given for unknown parameter `{}`",
                    r.name
                )));
            }
            if declared.contains(&r.name.as_str()) {
                return Err(HarnessError::Spec(format!("parameter `{}` has two ranges", r.name)));
            }
            for v in r.lo.free_vars().into_iter().chain(r.hi.free_vars()) {
                if !declared.contains(&v.as_str()) {
                    return Err(HarnessError::Spec(format!(
                        "range `{r}` refers to `{v}`, which is not declared before it"
                    )));
                }
            }
            declared.push(&r.name);
        }
        if let Some(p) = identity.params.iter().find(|p| !declared.contains(&p.as_str())) {
            return Err(HarnessError::Spec(format!("parameter `{p}` has no range")));
        }
        Ok(SweepSpec {
            label: label.into(),
            identity,
            ranges,
            max_instances: None,
            time_budget: None,
            fib: FibConvention::default(),
        })
    }

    pub fn from_texts<S: AsRef<str>>(
        label: impl Into<String>,
        identity: IdentityAst,
        ranges: &[S],
    ) -> Result<Self, HarnessError> {
        let ranges = ranges
            .iter()
            .map(|r| Range::parse(r.as_ref()))
            .collect::<Result<_, _>>()?;
        SweepSpec::new(label, identity, ranges)
    }

    /// A catalog identity over its default ranges with every parameter at
    /// most `bound`.
    pub fn from_catalog(id: &str, bound: i64) -> Result<Self, HarnessError> {
        let entry = scripts::catalog_entry(id)?;
        SweepSpec::from_texts(id, entry.ast(), &entry.ranges_up_to(bound))
    }

    /// Resolves an identity argument: a catalog id or identity-language text.
    pub fn resolve_identity(text: &str) -> Result<(String, IdentityAst), HarnessError> {
        match scripts::catalog_entry(text.trim()) {
            Ok(entry) => Ok((entry.id.to_string(), entry.ast())),
            Err(_) => Ok(("custom".to_string(), lang::parse_identity(text)?)),
        }
    }

    /// Reads a TOML sweep file:
    ///
    /// ```toml
    /// identity = "hockey_stick"          # or identity-language text
    /// ranges = ["n=0..30", "m=0..n"]
    /// max_instances = 10000              # optional
    /// time_budget = 5.0                  # seconds, optional
    /// fib_convention = "negafibonacci"   # optional
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct SpecFile {
            identity: String,
            ranges: Vec<String>,
            max_instances: Option<usize>,
            time_budget: Option<f64>,
            fib_convention: Option<String>,
        }
        let file: SpecFile = toml::from_str(text).map_err(|e| HarnessError::Spec(e.to_string()))?;
        let (label, ast) = SweepSpec::resolve_identity(&file.identity)?;
        let mut spec = SweepSpec::from_texts(label, ast, &file.ranges)?;
        spec.max_instances = file.max_instances;
        if let Some(secs) = file.time_budget {
            spec.time_budget = Some(
                Duration::try_from_secs_f64(secs)
                    .map_err(|_| HarnessError::Spec(format!("invalid time_budget {secs}")))?,
            );
        }
        if let Some(name) = file.fib_convention {
            spec.fib = name.parse().map_err(HarnessError::Spec)?;
        }
        Ok(spec)
    }

    /// Every binding tuple of the range lattice in lexicographic order,
    /// stopping after `limit` tuples. The flag reports truncation.
    pub fn instances(&self, limit: Option<usize>) -> Result<(Vec<Bindings>, bool), HarnessError> {
        let mut out = Vec::new();
        let mut truncated = false;
        self.expand(0, &mut Bindings::new(), limit, &mut out, &mut truncated)?;
        Ok((out, truncated))
    }

    fn expand(
        &self,
        depth: usize,
        current: &mut Bindings,
        limit: Option<usize>,
        out: &mut Vec<Bindings>,
        truncated: &mut bool,
    ) -> Result<(), HarnessError> {
        if *truncated {
            return Ok(());
        }
        let Some(range) = self.ranges.get(depth) else {
            if limit.is_some_and(|l| out.len() >= l) {
                *truncated = true;
            } else {
                out.push(current.clone());
            }
            return Ok(());
        };
        let lo = eval_integer(&range.lo, current)?;
        let hi = eval_integer(&range.hi, current)?;
        for v in lo..=hi {
            current.insert(range.name.clone(), v);
            self.expand(depth + 1, current, limit, out, truncated)?;
            if *truncated {
                break;
            }
        }
        current.remove(&range.name);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepFailure {
    pub bindings: Bindings,
    pub lhs: String,
    pub rhs: String,
    /// Set when the instance could not be evaluated at all.
    pub error: Option<String>,
}

impl fmt::Display for SweepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        match &self.error {
            Some(e) => write!(f, "{}: error: {e}", b.join(", ")),
            None => write!(f, "{}: lhs = {}, rhs = {}", b.join(", "), self.lhs, self.rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub label: String,
    pub identity: String,
    pub fib: FibConvention,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failures: Vec<SweepFailure>,
    /// False when the instance limit or the time budget cut the sweep short.
    pub complete: bool,
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.complete
    }

    /// Everything except the wall time, for comparing runs.
    pub fn outcome(&self) -> (usize, usize, usize, usize, &[SweepFailure], bool) {
        (
            self.total,
            self.passed,
            self.failed,
            self.skipped,
            &self.failures,
            self.complete,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "identity": self.identity,
            "fib_convention": self.fib.name(),
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "complete": self.complete,
            "wall_time_secs": self.wall_time.as_secs_f64(),
            "failures": self.failures.iter().map(|f| serde_json::json!({
                "bindings": f.bindings,
                "lhs": f.lhs,
                "rhs": f.rhs,
                "error": f.error,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} passed, {} failed, {} skipped of {} instances",
            self.label, self.passed, self.failed, self.skipped, self.total
        )?;
        if !self.complete {
            f.write_str(" (incomplete)")?;
        }
        Ok(())
    }
}

enum Outcome {
    Passed,
    Skipped,
    Failed(SweepFailure),
    NotRun,
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepReport, HarnessError> {
    let started = Instant::now();
    let (instances, truncated) = spec.instances(spec.max_instances)?;
    let options = EvalOptions { fib: spec.fib };
    let out_of_time = AtomicBool::new(false);

    let outcomes: Vec<Outcome> = instances
        .par_iter()
        .map(|b| {
            if let Some(budget) = spec.time_budget {
                if out_of_time.load(Ordering::Relaxed) || started.elapsed() > budget {
                    out_of_time.store(true, Ordering::Relaxed);
                    return Outcome::NotRun;
                }
            }
            match check_instance_with(&spec.identity, b, options) {
                Ok(InstanceOutcome::Holds(_)) => Outcome::Passed,
                Ok(InstanceOutcome::Skipped) => Outcome::Skipped,
                Ok(InstanceOutcome::Fails { lhs, rhs }) => Outcome::Failed(SweepFailure {
                    bindings: b.clone(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    error: None,
                }),
                Err(e) => Outcome::Failed(SweepFailure {
                    bindings: b.clone(),
                    lhs: String::new(),
                    rhs: String::new(),
                    error: Some(e.to_string()),
                }),
            }
        })
        .collect();

    let mut report = SweepReport {
        label: spec.label.clone(),
        identity: format_identity(&spec.identity),
        fib: spec.fib,
        total: 0,
        passed: 0,
        failed: 0,
        skipped: 0,
        failures: Vec::new(),
        complete: !truncated,
        wall_time: Duration::ZERO,
    };
    for o in outcomes {
        match o {
            Outcome::Passed => report.passed += 1,
            Outcome::Skipped => report.skipped += 1,
            Outcome::Failed(f) => {
                report.failed += 1;
                report.failures.push(f);
            }
            Outcome::NotRun => {
                report.complete = false;
                continue;
            }
        }
        report.total += 1;
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

/// Sweeps the Fibonacci Quarterly identity over `0 <= n < m <= bound` once
/// per extension of `fib` to negative indices.
pub fn fib_convention_report(bound: i64) -> Result<Vec<SweepReport>, HarnessError> {
    FibConvention::ALL
        .iter()
        .map(|&fib| {
            let mut spec = SweepSpec::from_catalog("fib_quarterly", bound)?;
            spec.fib = fib;
            sweep(&spec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_sum_sweep() {
        let report = sweep(
            &SweepSpec::from_texts("row_sum", scripts::builtin_identity("row_sum").unwrap(), &["n=0..30"]).unwrap(),
        )
        .unwrap();
        assert_eq!((report.passed, report.failed, report.total), (31, 0, 31));
        assert!(report.all_passed());
        assert!(report.to_string().contains("31 passed"));
    }

    #[test]
    fn dependent_ranges() {
        let ast = scripts::builtin_identity("upside_down_cv").unwrap();
        let spec = SweepSpec::from_texts("upside_down_cv", ast, &["n=0..20", "m=0..n", "l=0..n-m"]).unwrap();
        let report = sweep(&spec).unwrap();
        // sum over n of (n+1)(n+2)/2 tuples
        assert_eq!(report.total, (0..=20).map(|n| (n + 1) * (n + 2) / 2).sum::<usize>());
        assert_eq!(report.passed, report.total);
    }

    #[test]
    fn printed_lagrange_fails_by_one() {
        let spec = SweepSpec::from_texts(
            "lagrange_as_printed",
            scripts::builtin_identity("lagrange_as_printed").unwrap(),
            &["n=1..10"],
        )
        .unwrap();
        let report = sweep(&spec).unwrap();
        assert_eq!(report.failed, 10);
        for f in &report.failures {
            let lhs: i64 = f.lhs.parse().unwrap();
            let rhs: i64 = f.rhs.parse().unwrap();
            assert_eq!(lhs, rhs - 1);
        }
    }

    #[test]
    fn spec_validation() {
        let ast = scripts::builtin_identity("hockey_stick").unwrap();
        let forward = SweepSpec::from_texts("h", ast.clone(), &["m=0..n", "n=0..5"]).unwrap_err();
        assert!(forward.to_string().contains("not declared before"), "{forward}");
        let missing = SweepSpec::from_texts("h", ast.clone(), &["n=0..5"]).unwrap_err();
        assert!(missing.to_string().contains("`m` has no range"));
        let unknown = SweepSpec::from_texts("h", ast.clone(), &["n=0..5", "m=0..n", "q=0..1"]).unwrap_err();
        assert!(unknown.to_string().contains("unknown parameter `q`"));
        let twice = SweepSpec::from_texts("h", ast, &["n=0..5", "n=0..5"]).unwrap_err();
        assert!(twice.to_string().contains("two ranges"));
    }

    #[test]
    fn instance_limit_marks_incomplete() {
        let mut spec = SweepSpec::from_catalog("row_sum", 30).unwrap();
        spec.max_instances = Some(5);
        let report = sweep(&spec).unwrap();
        assert_eq!(report.total, 5);
        assert!(!report.complete);
        assert!(!report.all_passed());
    }

    #[test]
    fn zero_budget_marks_incomplete() {
        let mut spec = SweepSpec::from_catalog("knuth", 10).unwrap();
        spec.time_budget = Some(Duration::ZERO);
        let report = sweep(&spec).unwrap();
        assert!(!report.complete);
        assert_eq!(report.total, report.passed + report.failed + report.skipped);
    }

    #[test]
    fn toml_spec() {
        let spec = SweepSpec::from_toml(
            "identity = \"hockey_stick\"\nranges = [\"n=0..6\", \"m=0..n\"]\nmax_instances = 100\ntime_budget = 2.5\n",
        )
        .unwrap();
        assert_eq!(spec.label, "hockey_stick");
        assert_eq!(spec.max_instances, Some(100));
        assert_eq!(sweep(&spec).unwrap().passed, 28);

        let custom = SweepSpec::from_toml("identity = \"C(n,0) == 1 for n\"\nranges = [\"n=0..3\"]\n").unwrap();
        assert_eq!(custom.label, "custom");
        assert!(SweepSpec::from_toml("identity = \"row_sum\"\nranges = [\"n=0..3\"]\nbogus = 1\n").is_err());
    }

    #[test]
    fn sweeps_are_deterministic() {
        let spec = SweepSpec::from_catalog("fib_quarterly", 12).unwrap();
        let a = sweep(&spec).unwrap();
        let b = sweep(&spec).unwrap();
        assert_eq!(a.outcome(), b.outcome());
    }
}
