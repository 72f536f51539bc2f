//! Replaying and certifying proof scripts.

use std::collections::BTreeMap;
use std::fmt;

use super::{eval_config, ChaseError, RuleStep, WeightedConfig};
use crate::exact::Weight;
use crate::lang::{eval_expr, parse_expr, Bindings};
use crate::triangle::Coord;

/// An arrow-chasing proof: start from `initial`, apply `steps`, land on
/// `expected_final`. The two sides of the identity, evaluated at `params`,
/// must both equal the configuration value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub theorem_id: String,
    pub params: Bindings,
    /// Symbolic weights the side expressions may mention (`a`, `b`).
    pub indeterminates: Vec<String>,
    pub initial: WeightedConfig,
    pub steps: Vec<RuleStep>,
    pub expected_final: WeightedConfig,
    pub lhs_text: String,
    pub rhs_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// A step could not be applied.
    StepError,
    /// A step changed the configuration value.
    ValueChanged,
    /// Replay ended somewhere other than `expected_final`.
    FinalMismatch,
    /// A side expression disagrees with the configuration value.
    SideMismatch,
    /// A side expression failed to parse or evaluate.
    SideError,
    /// A certificate's recorded value differs from its replay.
    RecordedValue,
}

impl FailureKind {
    pub fn describe(self) -> &'static str {
        match self {
            FailureKind::StepError => "step cannot be applied",
            FailureKind::ValueChanged => "step changed the value",
            FailureKind::FinalMismatch => "replay does not reach the expected final configuration",
            FailureKind::SideMismatch => "side value differs from the configuration value",
            FailureKind::SideError => "side expression cannot be evaluated",
            FailureKind::RecordedValue => "recorded value differs from the replayed value",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub kind: FailureKind,
    /// Index of the first step blamed; `None` when no step is at fault
    /// (a bad initial configuration or a bad side expression).
    pub step: Option<usize>,
    /// The cell whose weight differs, for final mismatches.
    pub cell: Option<Coord>,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: ")?,
            None => f.write_str("script: ")?,
        }
        f.write_str(self.kind.describe())?;
        if let Some(c) = self.cell {
            write!(f, " at cell {c}")?;
        }
        write!(f, "; expected {}, found {}", self.expected, self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub theorem_id: String,
    pub valid: bool,
    /// Value of the initial configuration followed by the value after each
    /// successfully applied step.
    pub step_values: Vec<Weight>,
    /// Value of the initial configuration.
    pub value: Weight,
    pub lhs_value: Option<Weight>,
    pub rhs_value: Option<Weight>,
    pub failure: Option<CheckFailure>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "VALID, value {}", self.value),
            Some(fail) => write!(f, "INVALID at {fail}"),
        }
    }
}

/// All configurations visited: `initial`, then the state after each step.
pub fn replay(s: &ProofScript) -> Result<Vec<WeightedConfig>, (usize, ChaseError)> {
    let mut out = Vec::with_capacity(s.steps.len() + 1);
    let mut cur = s.initial.clone();
    out.push(cur.clone());
    for (i, step) in s.steps.iter().enumerate() {
        cur.apply(step).map_err(|e| (i, e))?;
        out.push(cur.clone());
    }
    Ok(out)
}

pub fn check_script(s: &ProofScript) -> CheckReport {
    let mut report = CheckReport {
        theorem_id: s.theorem_id.clone(),
        valid: false,
        step_values: Vec::new(),
        value: Weight::zero(),
        lhs_value: None,
        rhs_value: None,
        failure: None,
    };
    let fail = |report: &mut CheckReport, failure: CheckFailure| {
        report.failure = Some(failure);
        report.valid = false;
    };

    let value = match eval_config(&s.initial) {
        Ok(v) => v,
        Err(e) => {
            fail(
                &mut report,
                CheckFailure {
                    kind: FailureKind::StepError,
                    step: None,
                    cell: None,
                    expected: "a finite value".into(),
                    found: e.to_string(),
                },
            );
            return report;
        }
    };
    report.value = value.clone();
    report.step_values.push(value.clone());

    // Last step index that wrote each cell, for blaming a wrong final state.
    let mut last_writer: BTreeMap<Coord, usize> = BTreeMap::new();
    let mut cur = s.initial.clone();
    for (i, step) in s.steps.iter().enumerate() {
        if let Err(e) = cur.apply(step) {
            fail(
                &mut report,
                CheckFailure {
                    kind: FailureKind::StepError,
                    step: Some(i),
                    cell: None,
                    expected: format!("{step} to apply"),
                    found: e.to_string(),
                },
            );
            return report;
        }
        for c in step.touched() {
            last_writer.insert(c, i);
        }
        let v = match eval_config(&cur) {
            Ok(v) => v,
            Err(e) => {
                fail(
                    &mut report,
                    CheckFailure {
                        kind: FailureKind::StepError,
                        step: Some(i),
                        cell: None,
                        expected: value.to_string(),
                        found: e.to_string(),
                    },
                );
                return report;
            }
        };
        if v != value {
            fail(
                &mut report,
                CheckFailure {
                    kind: FailureKind::ValueChanged,
                    step: Some(i),
                    cell: None,
                    expected: value.to_string(),
                    found: v.to_string(),
                },
            );
            report.step_values.push(v);
            return report;
        }
        report.step_values.push(v);
    }

    if cur != s.expected_final {
        // Blame the earliest step among the last writers of the wrong cells;
        // a cell nobody wrote is wrong from the start.
        let mut blame: Option<(Option<usize>, Coord)> = None;
        let cells: std::collections::BTreeSet<Coord> =
            cur.cells().chain(s.expected_final.cells()).map(|(c, _)| *c).collect();
        for c in cells {
            if cur.get(c) == s.expected_final.get(c) {
                continue;
            }
            let writer = last_writer.get(&c).copied();
            let better = match blame {
                None => true,
                Some((None, _)) => false,
                Some((Some(b), _)) => writer.is_none_or(|w| w < b),
            };
            if better {
                blame = Some((writer, c));
            }
        }
        let (step, cell) = blame.expect("configurations differ in some cell");
        fail(
            &mut report,
            CheckFailure {
                kind: FailureKind::FinalMismatch,
                step,
                cell: Some(cell),
                expected: s.expected_final.get(cell).to_string(),
                found: cur.get(cell).to_string(),
            },
        );
        return report;
    }

    for (text, slot) in [(&s.lhs_text, 0), (&s.rhs_text, 1)] {
        let side = parse_expr(text)
            .map_err(|e| e.to_string())
            .and_then(|e| eval_expr(&e, &s.params, &s.indeterminates).map_err(|e| e.to_string()));
        match side {
            Ok(v) => {
                let mismatch = v != value;
                if slot == 0 {
                    report.lhs_value = Some(v.clone());
                } else {
                    report.rhs_value = Some(v.clone());
                }
                if mismatch {
                    fail(
                        &mut report,
                        CheckFailure {
                            kind: FailureKind::SideMismatch,
                            step: None,
                            cell: None,
                            expected: value.to_string(),
                            found: v.to_string(),
                        },
                    );
                    return report;
                }
            }
            Err(msg) => {
                fail(
                    &mut report,
                    CheckFailure {
                        kind: FailureKind::SideError,
                        step: None,
                        cell: None,
                        expected: format!("a value for `{text}`"),
                        found: msg,
                    },
                );
                return report;
            }
        }
    }

    report.valid = true;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chase::lift_row_steps;

    fn row_sum_script(n: u32) -> ProofScript {
        let initial = WeightedConfig::row(n, 0, vec![1; n as usize + 1]);
        let mut cur = initial.clone();
        let mut steps = Vec::new();
        for r in (1..=n).rev() {
            for s in lift_row_steps(&cur, r).unwrap() {
                cur.apply(&s).unwrap();
                steps.push(s);
            }
        }
        ProofScript {
            theorem_id: "row_sum".into(),
            params: [("n".to_string(), n as i64)].into(),
            indeterminates: vec![],
            initial,
            steps,
            expected_final: WeightedConfig::from_cells([(Coord::new(0, 0), Weight::integer(1u64 << n))]),
            lhs_text: "sum(k=0..n, C(n,k))".into(),
            rhs_text: "2^n".into(),
        }
    }

    #[test]
    fn valid_script() {
        let report = check_script(&row_sum_script(3));
        assert!(report.valid, "{report}");
        assert_eq!(report.value, Weight::integer(8));
        assert!(report.step_values.iter().all(|v| *v == Weight::integer(8)));
        assert_eq!(report.to_string(), "VALID, value 8");
    }

    #[test]
    fn tampered_weight_is_blamed() {
        for i in 0..9 {
            let mut s = row_sum_script(3);
            if let RuleStep::Lift { w, .. } = &mut s.steps[i] {
                *w = &*w + &Weight::one();
            }
            let report = check_script(&s);
            assert!(!report.valid);
            let failure = report.failure.unwrap();
            assert_eq!(failure.kind, FailureKind::FinalMismatch);
            assert_eq!(failure.step, Some(i), "tampered step {i}");
        }
    }

    #[test]
    fn bad_step_and_bad_side() {
        let mut s = row_sum_script(2);
        s.steps.push(RuleStep::lift(0, 0, 4));
        let f = check_script(&s).failure.unwrap();
        assert_eq!(f.kind, FailureKind::StepError);
        assert_eq!(f.step, Some(s.steps.len() - 1));

        let mut s = row_sum_script(2);
        s.rhs_text = "2^n + 1".into();
        let r = check_script(&s);
        let f = r.failure.unwrap();
        assert_eq!(f.kind, FailureKind::SideMismatch);
        assert_eq!((f.expected.as_str(), f.found.as_str()), ("4", "5"));
    }

    #[test]
    fn replay_lists_states() {
        let s = row_sum_script(2);
        let states = replay(&s).unwrap();
        assert_eq!(states.len(), s.steps.len() + 1);
        assert_eq!(states.last().unwrap(), &s.expected_final);
    }
}
