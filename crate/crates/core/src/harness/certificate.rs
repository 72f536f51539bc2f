//! Proof certificates: a checked script serialized as JSON.
//!
//! Weights are always stored as canonical text, never as JSON numbers, and
//! objects are written with sorted keys so equal certificates are equal bytes.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HarnessError;
use crate::chase::{check_script, CheckFailure, CheckReport, FailureKind, ProofScript, RuleStep, WeightedConfig};
use crate::exact::Weight;
use crate::lang::{self, format_expr, format_identity, Bindings};
use crate::triangle::Coord;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub schema_version: String,
    pub theorem_id: String,
    pub params: Bindings,
    pub identity: String,
    pub initial: WeightedConfig,
    pub steps: Vec<RuleStep>,
    pub final_config: WeightedConfig,
    pub value: Weight,
    /// True only when [`check_script`] accepted exactly this content.
    pub checked: bool,
}

impl Certificate {
    /// Checks `script` and records the outcome. `identity` is the full
    /// statement whose sides the script's `lhs_text`/`rhs_text` came from.
    pub fn certify(script: &ProofScript, identity: &str) -> (Certificate, CheckReport) {
        let report = check_script(script);
        let cert = Certificate {
            schema_version: SCHEMA_VERSION.to_string(),
            theorem_id: script.theorem_id.clone(),
            params: script.params.clone(),
            identity: identity.to_string(),
            initial: script.initial.clone(),
            steps: script.steps.clone(),
            final_config: script.expected_final.clone(),
            value: report.value.clone(),
            checked: report.valid,
        };
        (cert, report)
    }

    /// Rebuilds the script; the sides come from the identity text.
    pub fn to_script(&self) -> Result<ProofScript, HarnessError> {
        let ast = lang::parse_identity(&self.identity)?;
        Ok(ProofScript {
            theorem_id: self.theorem_id.clone(),
            params: self.params.clone(),
            indeterminates: ast.indeterminates.clone(),
            initial: self.initial.clone(),
            steps: self.steps.clone(),
            expected_final: self.final_config.clone(),
            lhs_text: format_expr(&ast.lhs),
            rhs_text: format_expr(&ast.rhs),
        })
    }

    /// Replays the certificate from scratch. A script that checks but whose
    /// recorded value disagrees is reported invalid as well.
    pub fn check(&self) -> Result<CheckReport, HarnessError> {
        let mut report = check_script(&self.to_script()?);
        if report.valid && report.value != self.value {
            report.valid = false;
            report.failure = Some(CheckFailure {
                kind: FailureKind::RecordedValue,
                step: None,
                cell: None,
                expected: report.value.to_string(),
                found: self.value.to_string(),
            });
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        let file = CertFile {
            schema_version: self.schema_version.clone(),
            theorem_id: self.theorem_id.clone(),
            params: self.params.clone(),
            identity: self.identity.clone(),
            initial: cells_out(&self.initial),
            steps: self.steps.iter().map(StepFile::from).collect(),
            final_cells: cells_out(&self.final_config),
            value: WeightText(self.value.clone()),
            checked: self.checked,
        };
        // Going through `Value` sorts every object's keys.
        let value = serde_json::to_value(&file).expect("certificate serializes");
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Certificate, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: CertFile = serde_path_to_error::deserialize(de).map_err(|e| HarnessError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::UnknownSchema(file.schema_version));
        }
        let steps = file
            .steps
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.into_step(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Certificate {
            schema_version: file.schema_version,
            theorem_id: file.theorem_id,
            params: file.params,
            identity: file.identity,
            initial: cells_in(file.initial),
            steps,
            final_config: cells_in(file.final_cells),
            value: file.value.0,
            checked: file.checked,
        })
    }
}

/// Convenience: the identity text of a catalog entry in canonical form.
pub fn catalog_identity_text(id: &str) -> Result<String, HarnessError> {
    Ok(format_identity(&crate::scripts::builtin_identity(id)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct WeightText(Weight);

impl Serialize for WeightText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<Weight>()
            .map(WeightText)
            .map_err(|e| D::Error::custom(format!("bad weight `{text}`: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertFile {
    schema_version: String,
    theorem_id: String,
    params: BTreeMap<String, i64>,
    identity: String,
    initial: Vec<(u32, i64, WeightText)>,
    steps: Vec<StepFile>,
    #[serde(rename = "final")]
    final_cells: Vec<(u32, i64, WeightText)>,
    value: WeightText,
    checked: bool,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Rule {
    Lift,
    Drop,
    ShiftRight,
    SwapSym,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    rule: Rule,
    n: u32,
    k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<WeightText>,
}

impl From<&RuleStep> for StepFile {
    fn from(s: &RuleStep) -> Self {
        let rule = match s {
            RuleStep::Lift { .. } => Rule::Lift,
            RuleStep::Drop { .. } => Rule::Drop,
            RuleStep::ShiftRight { .. } => Rule::ShiftRight,
            RuleStep::SwapSym { .. } => Rule::SwapSym,
        };
        let at = s.at();
        StepFile {
            rule,
            n: at.n,
            k: at.k,
            w: s.weight().cloned().map(WeightText),
        }
    }
}

impl StepFile {
    fn into_step(self, index: usize) -> Result<RuleStep, HarnessError> {
        let StepFile { rule, n, k, w } = self;
        let schema = |message: &str| HarnessError::Schema {
            path: format!("steps[{index}].w"),
            message: message.to_string(),
        };
        match (rule, w) {
            (Rule::SwapSym, None) => Ok(RuleStep::SwapSym { n, k }),
            (Rule::SwapSym, Some(_)) => Err(schema("swap_sym takes no weight")),
            (_, None) => Err(schema("missing weight")),
            (Rule::Lift, Some(w)) => Ok(RuleStep::Lift { n, k, w: w.0 }),
            (Rule::Drop, Some(w)) => Ok(RuleStep::Drop { n, k, w: w.0 }),
            (Rule::ShiftRight, Some(w)) => Ok(RuleStep::ShiftRight { n, k, w: w.0 }),
        }
    }
}

fn cells_out(c: &WeightedConfig) -> Vec<(u32, i64, WeightText)> {
    c.cells().map(|(at, w)| (at.n, at.k, WeightText(w.clone()))).collect()
}

fn cells_in(cells: Vec<(u32, i64, WeightText)>) -> WeightedConfig {
    WeightedConfig::from_cells(cells.into_iter().map(|(n, k, w)| (Coord::new(n, k), w.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scripts::generate_script;

    fn row_sum_cert(n: i64) -> Certificate {
        let script = generate_script("row_sum", &[("n".to_string(), n)].into()).unwrap();
        Certificate::certify(&script, &catalog_identity_text("row_sum").unwrap()).0
    }

    #[test]
    fn round_trip() {
        let cert = row_sum_cert(2);
        assert!(cert.checked);
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), text);
        assert!(back.check().unwrap().valid);
    }

    #[test]
    fn keys_are_sorted() {
        let text = row_sum_cert(1).to_json();
        let order: Vec<usize> = [
            "\"checked\"",
            "\"final\"",
            "\"identity\"",
            "\"initial\"",
            "\"params\"",
            "\"schema_version\"",
            "\"steps\"",
            "\"theorem_id\"",
            "\"value\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "{text}");
    }

    #[test]
    fn reordered_steps_fail_replay() {
        // Lifts and drops commute with each other; only moving a step across
        // a swap changes where the replay ends.
        let script = generate_script("weighted_row", &[("n".to_string(), 5)].into()).unwrap();
        let mut cert = Certificate::certify(&script, &catalog_identity_text("weighted_row").unwrap()).0;
        assert!(cert.checked);
        let swap = cert
            .steps
            .iter()
            .position(|s| matches!(s, RuleStep::SwapSym { .. }))
            .unwrap();
        let moved = cert.steps.remove(swap);
        cert.steps.insert(0, moved);
        let report = Certificate::from_json(&cert.to_json()).unwrap().check().unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn big_values_stay_text() {
        let mut cert = row_sum_cert(1);
        let big: Weight = "1606938044258990275541962092341162602522202993782792835301376"
            .parse()
            .unwrap();
        assert_eq!(big, Weight::integer(num_bigint::BigInt::from(1) << 200));
        cert.value = big.clone();
        let text = cert.to_json();
        assert!(text.contains("\"1606938044258990275541962092341162602522202993782792835301376\""));
        assert_eq!(Certificate::from_json(&text).unwrap().value, big);
        // The recorded value no longer matches the replay.
        let report = cert.check().unwrap();
        assert_eq!(report.failure.unwrap().kind, FailureKind::RecordedValue);
    }

    #[test]
    fn schema_errors_name_the_path() {
        let text = row_sum_cert(2).to_json();
        let bad_rule = text.replacen("\"lift\"", "\"hop\"", 1);
        match Certificate::from_json(&bad_rule) {
            Err(HarnessError::Schema { path, .. }) => assert_eq!(path, "steps[0].rule"),
            other => panic!("{other:?}"),
        }
        let bad_weight = text.replacen("\"value\": \"4\"", "\"value\": \"4/0\"", 1);
        match Certificate::from_json(&bad_weight) {
            Err(HarnessError::Schema { path, .. }) => assert_eq!(path, "value"),
            other => panic!("{other:?}"),
        }
        let version = text.replacen("\"schema_version\": \"1\"", "\"schema_version\": \"9\"", 1);
        assert!(matches!(Certificate::from_json(&version), Err(HarnessError::UnknownSchema(v)) if v == "9"));
    }
}
