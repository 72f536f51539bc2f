//! Sweeps, the independent oracle, and proof certificates.

mod certificate;
mod oracle;
mod sweep;

use thiserror::Error;

use crate::lang::{EvalError, LangError};
use crate::scripts::ScriptError;

pub use certificate::{catalog_identity_text, Certificate, SCHEMA_VERSION};
pub use oracle::{factorial_binom, oracle_fib, oracle_sum, oracle_sum_with};
pub use sweep::{fib_convention_report, sweep, Range, SweepFailure, SweepReport, SweepSpec};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("invalid sweep spec: {0}")]
    Spec(String),
    #[error("certificate schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported certificate schema_version `{0}`")]
    UnknownSchema(String),
}
