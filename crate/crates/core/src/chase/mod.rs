//! Weighted configurations and the value-preserving rewrite rules.
//!
//! A configuration assigns exact weights to cells of Pascal's triangle; its
//! value is `sum weight(n,k) * C(n,k)`. Every [`RuleStep`] leaves that value
//! unchanged:
//!
//! * `Lift` moves `w` from `(n,k)` to both `(n-1,k-1)` and `(n-1,k)` (the
//!   weight rule, Pascal's rule read upward);
//! * `Drop` moves `w` from both `(n,k)` and `(n,k+1)` to `(n+1,k+1)`;
//! * `ShiftRight` moves `w` from `(n,k)` to `(n+1,k+1)` and puts `-w` on
//!   `(n,k+1)`, since `C(n,k) = C(n+1,k+1) - C(n,k+1)`;
//! * `SwapSym` exchanges the weights of `(n,k)` and `(n,n-k)`.
//!
//! Phantom cells (`k < 0` or `k > n`) may be touched by a step; whatever lands
//! there is discarded because their binomial value is zero.

mod check;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exact::Weight;
use crate::triangle::{Coord, TriangleError};

pub use check::{check_script, replay, CheckFailure, CheckReport, FailureKind, ProofScript};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChaseError {
    #[error("cannot lift above apex: lift at row {n}, index {k}")]
    LiftAboveApex { n: u32, k: i64 },
    #[error("cannot lift row 0")]
    LiftRowZero,
    #[error("swap_sym needs a cell inside the triangle, got ({n},{k})")]
    PhantomSwap { n: u32, k: i64 },
    #[error("row index overflow at row {0}")]
    RowOverflow(u32),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

/// Finite map from triangle cells to nonzero weights.
///
/// Invariant: no stored weight is zero and no stored cell is phantom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WeightedConfig {
    cells: BTreeMap<Coord, Weight>,
}

impl WeightedConfig {
    pub fn new() -> Self {
        WeightedConfig::default()
    }

    /// Builds a canonical configuration; repeated cells are summed, zero and
    /// phantom cells dropped.
    pub fn from_cells<I, W>(cells: I) -> Self
    where
        I: IntoIterator<Item = (Coord, W)>,
        W: Into<Weight>,
    {
        let mut c = WeightedConfig::new();
        for (at, w) in cells {
            c.add(at, &w.into());
        }
        c
    }

    /// Weights `weights[i]` at `(n, first_k + i)`.
    pub fn row<W: Into<Weight>>(n: u32, first_k: i64, weights: impl IntoIterator<Item = W>) -> Self {
        WeightedConfig::from_cells(
            weights
                .into_iter()
                .enumerate()
                .map(|(i, w)| (Coord::new(n, first_k + i as i64), w)),
        )
    }

    pub fn get(&self, at: Coord) -> Weight {
        self.cells.get(&at).cloned().unwrap_or_default()
    }

    pub fn weight(&self, at: Coord) -> Option<&Weight> {
        self.cells.get(&at)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Coord, &Weight)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Adds `w` to the weight at `at`, keeping the configuration canonical.
    pub fn add(&mut self, at: Coord, w: &Weight) {
        if at.is_phantom() || w.is_zero() {
            return;
        }
        let entry = self.cells.entry(at).or_default();
        *entry += w;
        if entry.is_zero() {
            self.cells.remove(&at);
        }
    }

    pub fn sub(&mut self, at: Coord, w: &Weight) {
        self.add(at, &-w);
    }

    fn set(&mut self, at: Coord, w: Weight) {
        if at.is_phantom() || w.is_zero() {
            self.cells.remove(&at);
        } else {
            self.cells.insert(at, w);
        }
    }

    /// Weighted cells of row `n`, left to right.
    pub fn row_cells(&self, n: u32) -> Vec<(i64, Weight)> {
        self.cells
            .range(Coord::new(n, i64::MIN)..=Coord::new(n, i64::MAX))
            .map(|(c, w)| (c.k, w.clone()))
            .collect()
    }

    /// Rows that carry at least one weight, ascending.
    pub fn rows(&self) -> Vec<u32> {
        let mut rows: Vec<u32> = self.cells.keys().map(|c| c.n).collect();
        rows.dedup();
        rows
    }

    pub fn max_row(&self) -> Option<u32> {
        self.cells.keys().map(|c| c.n).max()
    }

    /// Value `sum weight * C(n,k)`.
    pub fn value(&self) -> Result<Weight, ChaseError> {
        eval_config(self)
    }

    /// Applies a step in place. On error the configuration is unchanged.
    pub fn apply(&mut self, step: &RuleStep) -> Result<(), ChaseError> {
        step.validate()?;
        match step {
            RuleStep::Lift { n, k, w } => {
                let at = Coord::new(*n, *k);
                self.sub(at, w);
                self.add(Coord::new(n - 1, k - 1), w);
                self.add(Coord::new(n - 1, *k), w);
            }
            RuleStep::Drop { n, k, w } => {
                let below = n.checked_add(1).ok_or(ChaseError::RowOverflow(*n))?;
                self.sub(Coord::new(*n, *k), w);
                self.sub(Coord::new(*n, k + 1), w);
                self.add(Coord::new(below, k + 1), w);
            }
            RuleStep::ShiftRight { n, k, w } => {
                let below = n.checked_add(1).ok_or(ChaseError::RowOverflow(*n))?;
                self.sub(Coord::new(*n, *k), w);
                self.add(Coord::new(below, k + 1), w);
                self.sub(Coord::new(*n, k + 1), w);
            }
            RuleStep::SwapSym { n, k } => {
                let at = Coord::new(*n, *k);
                let mirror = at.mirror();
                let a = self.get(at);
                let b = self.get(mirror);
                self.set(at, b);
                self.set(mirror, a);
            }
        }
        Ok(())
    }
}

impl fmt::Display for WeightedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, w)) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}: {w}")?;
        }
        f.write_str("}")
    }
}

/// One value-preserving rewrite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleStep {
    Lift { n: u32, k: i64, w: Weight },
    Drop { n: u32, k: i64, w: Weight },
    ShiftRight { n: u32, k: i64, w: Weight },
    SwapSym { n: u32, k: i64 },
}

impl RuleStep {
    pub fn lift(n: u32, k: i64, w: impl Into<Weight>) -> Self {
        RuleStep::Lift { n, k, w: w.into() }
    }

    pub fn drop(n: u32, k: i64, w: impl Into<Weight>) -> Self {
        RuleStep::Drop { n, k, w: w.into() }
    }

    pub fn shift_right(n: u32, k: i64, w: impl Into<Weight>) -> Self {
        RuleStep::ShiftRight { n, k, w: w.into() }
    }

    pub fn swap_sym(n: u32, k: i64) -> Self {
        RuleStep::SwapSym { n, k }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RuleStep::Lift { .. } => "lift",
            RuleStep::Drop { .. } => "drop",
            RuleStep::ShiftRight { .. } => "shift_right",
            RuleStep::SwapSym { .. } => "swap_sym",
        }
    }

    pub fn at(&self) -> Coord {
        match self {
            RuleStep::Lift { n, k, .. }
            | RuleStep::Drop { n, k, .. }
            | RuleStep::ShiftRight { n, k, .. }
            | RuleStep::SwapSym { n, k } => Coord::new(*n, *k),
        }
    }

    pub fn weight(&self) -> Option<&Weight> {
        match self {
            RuleStep::Lift { w, .. } | RuleStep::Drop { w, .. } | RuleStep::ShiftRight { w, .. } => Some(w),
            RuleStep::SwapSym { .. } => None,
        }
    }

    /// Cells the step takes weight from and cells it writes to (phantom
    /// cells included).
    pub fn sources_and_targets(&self) -> (Vec<Coord>, Vec<Coord>) {
        match self {
            RuleStep::Lift { n, k, .. } => (
                vec![Coord::new(*n, *k)],
                vec![
                    Coord::new(n.saturating_sub(1), k - 1),
                    Coord::new(n.saturating_sub(1), *k),
                ],
            ),
            RuleStep::Drop { n, k, .. } => (
                vec![Coord::new(*n, *k), Coord::new(*n, k + 1)],
                vec![Coord::new(n + 1, k + 1)],
            ),
            RuleStep::ShiftRight { n, k, .. } => (
                vec![Coord::new(*n, *k)],
                vec![Coord::new(n + 1, k + 1), Coord::new(*n, k + 1)],
            ),
            RuleStep::SwapSym { n, k } => {
                let at = Coord::new(*n, *k);
                (vec![at], vec![at.mirror()])
            }
        }
    }

    /// Every cell whose weight the step may change.
    pub fn touched(&self) -> Vec<Coord> {
        let (mut s, t) = self.sources_and_targets();
        s.extend(t);
        s
    }

    fn validate(&self) -> Result<(), ChaseError> {
        match self {
            RuleStep::Lift { n: 0, k, .. } => Err(ChaseError::LiftAboveApex { n: 0, k: *k }),
            RuleStep::SwapSym { n, k } if Coord::new(*n, *k).is_phantom() => {
                Err(ChaseError::PhantomSwap { n: *n, k: *k })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RuleStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleStep::SwapSym { n, k } => write!(f, "swap_sym({n},{k})"),
            RuleStep::Lift { n, k, w } | RuleStep::Drop { n, k, w } | RuleStep::ShiftRight { n, k, w } => {
                write!(f, "{}({n},{k},{w})", self.name())
            }
        }
    }
}

/// Exact value of a configuration; the empty configuration is worth zero.
pub fn eval_config(c: &WeightedConfig) -> Result<Weight, ChaseError> {
    let mut total = Weight::zero();
    for (at, w) in c.cells() {
        let b: BigInt = at.binom()?;
        total += &(w * &Weight::integer(b));
    }
    Ok(total)
}

pub fn apply_step(c: &WeightedConfig, s: &RuleStep) -> Result<WeightedConfig, ChaseError> {
    let mut out = c.clone();
    out.apply(s)?;
    Ok(out)
}

/// The per-cell lifts that move every weight of row `n` to row `n - 1`,
/// left to right.
pub fn lift_row_steps(c: &WeightedConfig, n: u32) -> Result<Vec<RuleStep>, ChaseError> {
    if n == 0 {
        return Err(ChaseError::LiftRowZero);
    }
    Ok(c.row_cells(n)
        .into_iter()
        .map(|(k, w)| RuleStep::Lift { n, k, w })
        .collect())
}

/// Applies the weight rule to the whole of row `n`: afterwards row `n` is
/// empty and row `n - 1` carries `a_j + a_{j+1}` on top of what it had.
pub fn lift_row(c: &WeightedConfig, n: u32) -> Result<WeightedConfig, ChaseError> {
    let mut out = c.clone();
    for step in lift_row_steps(c, n)? {
        out.apply(&step)?;
    }
    Ok(out)
}
