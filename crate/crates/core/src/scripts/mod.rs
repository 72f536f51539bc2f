//! The theorem catalog and its proof-script generators.
//!
//! Entries are kept in the order the theorems are presented. Each carries its
//! statement in the identity language, default sweep ranges, and (except for
//! the two Fibonacci identities) a generator producing an arrow-chasing
//! [`ProofScript`] for any valid parameter tuple.

mod builder;
mod generators;

use thiserror::Error;

use crate::chase::{ChaseError, ProofScript};
use crate::lang::{self, format_expr, format_identity, Bindings, EvalError, IdentityAst, LangError};
use crate::triangle;
use generators as g;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("unknown theorem id `{0}`")]
    UnknownId(String),
    #[error("{id} requires {requirement}")]
    Constraint { id: String, requirement: String },
    #[error("{id}: missing parameter `{name}`")]
    MissingParam { id: String, name: String },
    #[error("{id}: unexpected parameter `{name}`")]
    UnexpectedParam { id: String, name: String },
    #[error("{id}: parameter {name}={value} exceeds the row cap {cap}")]
    TooLarge {
        id: String,
        name: String,
        value: i64,
        cap: usize,
    },
    #[error("{id}: {reason}")]
    NoScript { id: String, reason: &'static str },
    #[error(transparent)]
    Chase(#[from] ChaseError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

const VERIFY_ONLY: &str = "no script available; verify via sweep";

pub struct CatalogEntry {
    pub id: &'static str,
    pub identity: &'static str,
    pub figure_ref: &'static str,
    /// Default sweep ranges in declaration order; `N` stands for the bound.
    pub ranges: &'static [&'static str],
    /// Hidden entries are reachable by id but left out of [`catalog_list`].
    pub listed: bool,
    generator: Result<g::Generator, &'static str>,
}

impl CatalogEntry {
    pub fn has_script(&self) -> bool {
        self.generator.is_ok()
    }

    pub fn ast(&self) -> IdentityAst {
        lang::parse_identity(self.identity).expect("catalog identities parse")
    }

    /// Default ranges with the bound substituted, e.g. `["n=0..25", "m=0..n"]`.
    pub fn ranges_up_to(&self, bound: i64) -> Vec<String> {
        self.ranges.iter().map(|r| r.replace('N', &bound.to_string())).collect()
    }
}

macro_rules! entry {
    ($id:literal, $identity:literal, $fig:literal, [$($r:literal),*], $gen:expr) => {
        entry!($id, $identity, $fig, [$($r),*], $gen, true)
    };
    ($id:literal, $identity:literal, $fig:literal, [$($r:literal),*], $gen:expr, $listed:expr) => {
        CatalogEntry {
            id: $id,
            identity: $identity,
            figure_ref: $fig,
            ranges: &[$($r),*],
            listed: $listed,
            generator: $gen,
        }
    };
}

static CATALOG: &[CatalogEntry] = &[
    entry!(
        "row_sum",
        "sum(k=0..n, C(n,k)) == 2^n for n",
        "Fig. 3",
        ["n=0..N"],
        Ok(g::row_sum)
    ),
    entry!(
        "half_row_even",
        "sum(k=0..n, C(n,2*k)) == 2^(n-1) for n where n >= 1",
        "Fig. 4 left",
        ["n=1..N"],
        Ok(g::half_row_even)
    ),
    entry!(
        "half_row_odd",
        "sum(k=0..n, C(n,2*k+1)) == 2^(n-1) for n where n >= 1",
        "Fig. 4 right",
        ["n=1..N"],
        Ok(g::half_row_odd)
    ),
    entry!(
        "hockey_stick",
        "sum(k=m..n, C(k,m)) == C(n+1,m+1) for m, n where m <= n",
        "Fig. 5",
        ["n=0..N", "m=0..n"],
        Ok(g::hockey_stick)
    ),
    entry!(
        "weighted_row",
        "sum(k=0..n, k*C(n,k)) == n*2^(n-1) for n where n >= 1",
        "Fig. 7",
        ["n=1..N"],
        Ok(g::weighted_row)
    ),
    entry!(
        "weighted_half_even",
        "sum(k=0..n, k*C(n,2*k)) == n*2^(n-3) for n where n >= 3",
        "Fig. 8 left",
        ["n=3..N"],
        Ok(g::weighted_half_even)
    ),
    entry!(
        "weighted_half_odd",
        "sum(k=0..n, k*C(n,2*k+1)) == (n-2)*2^(n-3) for n where n >= 3",
        "Fig. 8 right",
        ["n=3..N"],
        Ok(g::weighted_half_odd)
    ),
    entry!(
        "lagrange",
        "sum(k=0..n, C(n,k)^2) == C(2*n,n) for n",
        "Fig. 9",
        ["n=0..N"],
        Ok(g::lagrange)
    ),
    entry!(
        "lagrange_as_printed",
        "sum(k=1..n, C(n,k)^2) == C(2*n,n) for n",
        "Fig. 9",
        ["n=0..N"],
        Err("the statement with lower bound k=1 is false; see `lagrange`"),
        false
    ),
    entry!(
        "chu_vandermonde",
        "sum(k=0..l, C(n,k)*C(m,l-k)) == C(m+n,l) for l, m, n where l <= m, l <= n",
        "none",
        ["m=0..N", "n=0..N", "l=0..m"],
        Ok(g::chu_vandermonde)
    ),
    entry!(
        "alternating",
        "sum(k=0..n, (-1)^k*C(n,k)) == 0 for n where n >= 1",
        "Fig. 10",
        ["n=1..N"],
        Ok(g::alternating)
    ),
    entry!(
        "alternating_k",
        "sum(k=0..n, (-1)^k*k*C(n,k)) == 0 for n where n >= 2",
        "Fig. 11",
        ["n=2..N"],
        Ok(g::alternating_k)
    ),
    entry!(
        "alt_binom",
        "sum(k=m..n, (-1)^k*C(n,k)*C(k,m)) == 0 for m, n where m < n",
        "Fig. 12",
        ["n=1..N", "m=0..n-1"],
        Ok(g::alt_binom)
    ),
    entry!(
        "binomial_theorem",
        "sum(k=0..n, C(n,k)*a^(n-k)*b^k) == (a+b)^n for n indet a, b",
        "Fig. 13",
        ["n=0..N"],
        Ok(g::binomial_theorem)
    ),
    entry!(
        "hockey_variant",
        "sum(k=m..n, k*C(k,m)) == n*C(n+1,m+1) - C(n+1,m+2) for m, n where m < n",
        "Fig. 14 left",
        ["n=1..N", "m=0..n-1"],
        Ok(g::hockey_variant)
    ),
    entry!(
        "hockey_gen",
        "sum(k=0..n, C(k,l)*C(k,m)) == sum(k=0..l, (-1)^k*C(n+1,m+k+1)*C(n-k,l-k)) for l, m, n where l <= n, m <= n",
        "Fig. 14 right",
        ["n=0..N", "l=0..n", "m=0..n"],
        Ok(g::hockey_gen)
    ),
    entry!(
        "upside_down_cv",
        "sum(k=m..n-l, C(k,m)*C(n-k,l)) == C(n+1,l+m+1) for l, m, n where l + m <= n",
        "Fig. 15",
        ["n=0..N", "m=0..n", "l=0..n-m"],
        Ok(g::upside_down_cv)
    ),
    entry!(
        "boscarol",
        "sum(k=m..n, C(k,m)*2^(n-k)) + sum(k=n-m..n, C(k,n-m)*2^(n-k)) == 2^(n+1) for m, n where m <= n",
        "Fig. 16",
        ["n=0..N", "m=0..n"],
        Ok(g::boscarol)
    ),
    entry!(
        "hor",
        "sum(k=n..2*n, (-1)^k * C(k,n) * C(n,k-n)) == 1 for n",
        "Fig. 18 left",
        ["n=0..N"],
        Ok(g::hor)
    ),
    entry!(
        "hor_row_form",
        "sum(k=0..n, (-1)^k*C(n,k)*C(2*n-k,n)) == 1 for n",
        "Fig. 18 right",
        ["n=0..N"],
        Ok(g::hor_row_form)
    ),
    entry!(
        "knuth",
        "sum(k=p..p+n, (-1)^(p+n-k)*C(k,m)*C(n,k-p)) == C(p,m-n) for m, n, p",
        "Fig. 18 left, shifted",
        ["p=0..N", "m=0..N", "n=0..N"],
        Ok(g::knuth)
    ),
    entry!(
        "fib_row",
        "sum(k=0..n, C(n,k)*fib(k)) == fib(2*n) for n",
        "none",
        ["n=0..N"],
        Err(VERIFY_ONLY)
    ),
    entry!(
        "fib_quarterly",
        "sum(k=0..n, C(m,k)*(-1)^(n+k)*fib(m-2*k)) == sum(k=n..m-1, C(k,n)*fib(k-2*n-1)) for m, n where n < m",
        "none",
        ["m=1..N", "n=0..m-1"],
        Err(VERIFY_ONLY)
    ),
];

/// Every entry, hidden ones included, in catalog order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn catalog_entry(id: &str) -> Result<&'static CatalogEntry, ScriptError> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| ScriptError::UnknownId(id.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogSummary {
    pub id: String,
    pub identity_text: String,
    pub params: Vec<String>,
    pub constraints: Vec<String>,
    pub figure_ref: String,
    pub has_script: bool,
}

pub fn catalog_list() -> Vec<CatalogSummary> {
    CATALOG
        .iter()
        .filter(|e| e.listed)
        .map(|e| {
            let ast = e.ast();
            CatalogSummary {
                id: e.id.to_string(),
                identity_text: format_identity(&ast),
                params: ast.params.clone(),
                constraints: ast
                    .constraints
                    .iter()
                    .map(|c| format!("{} {} {}", format_expr(&c.lhs), c.op.symbol(), format_expr(&c.rhs)))
                    .collect(),
                figure_ref: e.figure_ref.to_string(),
                has_script: e.has_script(),
            }
        })
        .collect()
}

pub fn builtin_identity(id: &str) -> Result<IdentityAst, ScriptError> {
    Ok(catalog_entry(id)?.ast())
}

/// Checks a parameter tuple against an entry: every parameter bound, none
/// extra, all natural, within the row cap, and every constraint satisfied.
pub fn validate_params(id: &str, params: &Bindings) -> Result<IdentityAst, ScriptError> {
    let entry = catalog_entry(id)?;
    let ast = entry.ast();
    let err_id = || id.to_string();
    if let Some(name) = params.keys().find(|k| !ast.params.contains(k)) {
        return Err(ScriptError::UnexpectedParam {
            id: err_id(),
            name: name.clone(),
        });
    }
    let cap = triangle::max_row();
    for name in &ast.params {
        let value = *params.get(name).ok_or_else(|| ScriptError::MissingParam {
            id: err_id(),
            name: name.clone(),
        })?;
        if value < 0 {
            return Err(ScriptError::Constraint {
                id: err_id(),
                requirement: format!("{name} >= 0"),
            });
        }
        if value as u64 > cap as u64 {
            return Err(ScriptError::TooLarge {
                id: err_id(),
                name: name.clone(),
                value,
                cap,
            });
        }
    }
    for c in &ast.constraints {
        let l = lang::eval_integer(&c.lhs, params)?;
        let r = lang::eval_integer(&c.rhs, params)?;
        if !c.op.holds(l, r) {
            return Err(ScriptError::Constraint {
                id: err_id(),
                requirement: format!("{} {} {}", format_expr(&c.lhs), c.op.symbol(), format_expr(&c.rhs)),
            });
        }
    }
    Ok(ast)
}

pub fn generate_script(id: &str, params: &Bindings) -> Result<ProofScript, ScriptError> {
    let entry = catalog_entry(id)?;
    let generator = entry.generator.map_err(|reason| ScriptError::NoScript {
        id: id.to_string(),
        reason,
    })?;
    let ast = validate_params(id, params)?;
    let generated = generator(params)?;
    Ok(ProofScript {
        theorem_id: id.to_string(),
        params: params.clone(),
        indeterminates: ast.indeterminates.clone(),
        initial: generated.initial,
        steps: generated.steps,
        expected_final: generated.expected_final,
        lhs_text: format_expr(&ast.lhs),
        rhs_text: format_expr(&ast.rhs),
    })
}

#[cfg(test)]
mod tests;
