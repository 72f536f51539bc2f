//! One generator per theorem. Each builds the initial configuration and the
//! chase by simulation; the expected final configuration is written down
//! independently from the closed form so the checker has something to catch.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::builder::ScriptBuilder;
use super::ScriptError;
use crate::chase::{RuleStep, WeightedConfig};
use crate::exact::Weight;
use crate::lang::Bindings;
use crate::triangle::{self, Coord};

pub(crate) struct Generated {
    pub initial: WeightedConfig,
    pub steps: Vec<RuleStep>,
    pub expected_final: WeightedConfig,
}

pub(crate) type Generator = fn(&Bindings) -> Result<Generated, ScriptError>;

fn param(p: &Bindings, name: &str) -> u32 {
    // Presence and range were checked against the catalog entry.
    p[name] as u32
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn pow2(e: u32) -> Weight {
    Weight::integer(BigInt::from(1) << e)
}

fn binom(n: i64, k: i64) -> Result<Weight, ScriptError> {
    Ok(Weight::integer(
        triangle::binom(n, k).map_err(crate::chase::ChaseError::from)?,
    ))
}

fn done(b: ScriptBuilder, expected_final: WeightedConfig) -> Result<Generated, ScriptError> {
    let (initial, steps, _) = b.finish();
    Ok(Generated {
        initial,
        steps,
        expected_final,
    })
}

fn apex(w: Weight) -> WeightedConfig {
    WeightedConfig::from_cells([(Coord::new(0, 0), w)])
}

/// Lifts row `n` all the way to the apex.
fn to_apex(initial: WeightedConfig, n: u32, value: Weight) -> Result<Generated, ScriptError> {
    let mut b = ScriptBuilder::new(initial);
    b.lift_rows(n, 0)?;
    done(b, apex(value))
}

pub(crate) fn row_sum(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    to_apex(WeightedConfig::row(n, 0, vec![1; n as usize + 1]), n, pow2(n))
}

fn half_row(p: &Bindings, parity: i64) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let initial = WeightedConfig::from_cells(
        (0..=n as i64)
            .filter(|k| k % 2 == parity)
            .map(|k| (Coord::new(n, k), 1)),
    );
    to_apex(initial, n, pow2(n - 1))
}

pub(crate) fn half_row_even(p: &Bindings) -> Result<Generated, ScriptError> {
    half_row(p, 0)
}

pub(crate) fn half_row_odd(p: &Bindings) -> Result<Generated, ScriptError> {
    half_row(p, 1)
}

pub(crate) fn hockey_stick(p: &Bindings) -> Result<Generated, ScriptError> {
    let (m, n) = (param(p, "m"), param(p, "n"));
    let initial = WeightedConfig::from_cells((m..=n).map(|k| (Coord::new(k, m as i64), 1)));
    let mut b = ScriptBuilder::new(initial);
    for k in m..=n {
        b.step(RuleStep::drop(k, m as i64, 1))?;
    }
    done(b, WeightedConfig::from_cells([(Coord::new(n + 1, m as i64 + 1), 1)]))
}

/// Lift row `r + 1` into row `r`, even the row out by symmetry, then lift to
/// the apex.
fn lift_symmetrize_apex(b: &mut ScriptBuilder, r: u32) -> Result<(), ScriptError> {
    b.lift_row(r + 1)?;
    b.symmetrize_row(r)?;
    b.lift_rows(r, 0)?;
    Ok(())
}

pub(crate) fn weighted_row(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let mut b = ScriptBuilder::new(WeightedConfig::row(n, 0, 0..=n as i64));
    lift_symmetrize_apex(&mut b, n - 1)?;
    done(b, apex(Weight::integer(n) * pow2(n - 1)))
}

fn weighted_half(p: &Bindings, parity: i64) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let initial = WeightedConfig::from_cells(
        (0..=n as i64)
            .filter(|j| j % 2 == parity)
            .map(|j| (Coord::new(n, j), j / 2)),
    );
    let mut b = ScriptBuilder::new(initial);
    // Two lifts leave weight k+1 (even case) or k (odd case) on row n-2.
    b.lift_rows(n, n - 2)?;
    lift_symmetrize_apex(&mut b, n - 3)?;
    let factor = if parity == 0 { n } else { n - 2 };
    done(b, apex(Weight::integer(factor) * pow2(n - 3)))
}

pub(crate) fn weighted_half_even(p: &Bindings) -> Result<Generated, ScriptError> {
    weighted_half(p, 0)
}

pub(crate) fn weighted_half_odd(p: &Bindings) -> Result<Generated, ScriptError> {
    weighted_half(p, 1)
}

pub(crate) fn lagrange(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let mut b = ScriptBuilder::new(WeightedConfig::from_cells([(Coord::new(2 * n, n as i64), 1)]));
    b.lift_rows(2 * n, n)?;
    let fin = (0..=n as i64)
        .map(|k| Ok((Coord::new(n, k), binom(n as i64, k)?)))
        .collect::<Result<Vec<_>, ScriptError>>()?;
    done(b, WeightedConfig::from_cells(fin))
}

pub(crate) fn chu_vandermonde(p: &Bindings) -> Result<Generated, ScriptError> {
    let (l, m, n) = (param(p, "l"), param(p, "m"), param(p, "n"));
    let mut b = ScriptBuilder::new(WeightedConfig::from_cells([(Coord::new(m + n, l as i64), 1)]));
    b.lift_rows(m + n, n)?;
    let fin = (0..=l as i64)
        .map(|k| Ok((Coord::new(n, k), binom(m as i64, l as i64 - k)?)))
        .collect::<Result<Vec<_>, ScriptError>>()?;
    done(b, WeightedConfig::from_cells(fin))
}

pub(crate) fn alternating(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let mut b = ScriptBuilder::new(WeightedConfig::row(n, 0, (0..=n as i64).map(sign)));
    b.lift_row(n)?;
    done(b, WeightedConfig::new())
}

pub(crate) fn alternating_k(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let mut b = ScriptBuilder::new(WeightedConfig::row(n, 0, (0..=n as i64).map(|k| sign(k) * k)));
    b.lift_rows(n, n - 2)?;
    done(b, WeightedConfig::new())
}

pub(crate) fn alt_binom(p: &Bindings) -> Result<Generated, ScriptError> {
    let (m, n) = (param(p, "m"), param(p, "n"));
    // Signs start at +1 on the first cell as in the figure; this is the
    // displayed sum times (-1)^m, and both are zero.
    let initial = (m as i64..=n as i64)
        .map(|k| {
            Ok((
                Coord::new(n, k),
                binom(k, m as i64)? * Weight::integer(sign(k - m as i64)),
            ))
        })
        .collect::<Result<Vec<_>, ScriptError>>()?;
    let mut b = ScriptBuilder::new(WeightedConfig::from_cells(initial));
    b.lift_rows(n, n - m - 1)?;
    done(b, WeightedConfig::new())
}

pub(crate) fn binomial_theorem(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let (a, bw) = (Weight::var("a"), Weight::var("b"));
    let initial = WeightedConfig::row(n, 0, (0..=n).map(|k| a.pow(n - k) * bw.pow(k)));
    to_apex(initial, n, (a + bw).pow(n))
}

/// Upward chase that keeps column `m` fixed: rows `top` down to `m + 1`
/// lift every cell right of column `m`.
fn column_chase(initial: WeightedConfig, top: u32, m: u32) -> Result<ScriptBuilder, ScriptError> {
    let mut b = ScriptBuilder::new(initial);
    for r in (m + 1..=top).rev() {
        b.lift_right_of(r, m as i64)?;
    }
    Ok(b)
}

pub(crate) fn hockey_variant(p: &Bindings) -> Result<Generated, ScriptError> {
    let (m, n) = (param(p, "m"), param(p, "n"));
    let initial = WeightedConfig::from_cells([
        (Coord::new(n + 1, m as i64 + 1), n as i64),
        (Coord::new(n + 1, m as i64 + 2), -1),
    ]);
    let b = column_chase(initial, n + 1, m)?;
    let fin = WeightedConfig::from_cells((m..=n).map(|k| (Coord::new(k, m as i64), k as i64)));
    done(b, fin)
}

pub(crate) fn hockey_gen(p: &Bindings) -> Result<Generated, ScriptError> {
    let (l, m, n) = (param(p, "l"), param(p, "m"), param(p, "n"));
    let (l, m, n) = (l as i64, m as i64, n as i64);
    let initial = (0..=l)
        .map(|j| {
            let w = binom(n - j, l - j)? * Weight::integer(sign(j));
            Ok((Coord::new(n as u32 + 1, m + 1 + j), w))
        })
        .collect::<Result<Vec<_>, ScriptError>>()?;
    let b = column_chase(WeightedConfig::from_cells(initial), n as u32 + 1, m as u32)?;
    let fin = (m..=n)
        .map(|k| Ok((Coord::new(k as u32, m), binom(k, l)?)))
        .collect::<Result<Vec<_>, ScriptError>>()?;
    done(b, WeightedConfig::from_cells(fin))
}

pub(crate) fn upside_down_cv(p: &Bindings) -> Result<Generated, ScriptError> {
    let (l, m, n) = (param(p, "l"), param(p, "m"), param(p, "n"));
    let initial = WeightedConfig::from_cells([(Coord::new(n + 1, (l + m + 1) as i64), 1)]);
    let b = column_chase(initial, n + 1, m)?;
    let fin = (m..=n - l)
        .map(|k| Ok((Coord::new(k, m as i64), binom((n - k) as i64, l as i64)?)))
        .collect::<Result<Vec<_>, ScriptError>>()?;
    done(b, WeightedConfig::from_cells(fin))
}

pub(crate) fn boscarol(p: &Bindings) -> Result<Generated, ScriptError> {
    let (m, n) = (param(p, "m"), param(p, "n"));
    let c = (n - m) as i64;
    let column = |k: u32| (Coord::new(k, m as i64), pow2(n - k));
    let second = |k: u32| (Coord::new(k, c), pow2(n - k));
    let initial = WeightedConfig::from_cells((m..=n).map(column).chain((n - m..=n).map(second)));
    let mut b = ScriptBuilder::new(initial);

    // Reflect the second column onto the diagonal through (n-m, 0). Where the
    // cells involved hold nothing else a plain swap suffices.
    for k in n - m..=n {
        let at = Coord::new(k, c);
        if at.mirror() == at {
            continue;
        }
        let shared = k == n || c == m as i64;
        if shared {
            b.transfer(k, c, pow2(n - k))?;
        } else {
            b.step(RuleStep::swap_sym(k, c))?;
        }
    }

    // The paper lifts row n (all 2) up to the two lines; replay that in
    // reverse, turning each lift into the drop that undoes it.
    let on_lines = |at: Coord| (at.k == m as i64 && at.n >= m) || (at.k == at.n as i64 - c && at.n as i64 >= c);
    let mut up = WeightedConfig::row(n, 0, vec![2; n as usize + 1]);
    let mut lifts = Vec::new();
    for r in (1..=n).rev() {
        let row: Vec<RuleStep> = up
            .row_cells(r)
            .into_iter()
            .filter(|(k, _)| !on_lines(Coord::new(r, *k)))
            .map(|(k, w)| RuleStep::Lift { n: r, k, w })
            .collect();
        for s in &row {
            up.apply(s)?;
        }
        lifts.extend(row);
    }
    for s in lifts.into_iter().rev() {
        let RuleStep::Lift { n: r, k, w } = s else {
            unreachable!()
        };
        b.step(RuleStep::Drop { n: r - 1, k: k - 1, w })?;
    }
    done(b, WeightedConfig::row(n, 0, vec![2; n as usize + 1]))
}

/// Rightward chase with the subtractive rule: the unit weight at
/// `(p, m - n)` is pushed across `n` columns. Weights on phantom cells are
/// tracked alongside so seeds left of the triangle still propagate; steps
/// touching only phantom cells are omitted since they change nothing.
fn shift_chase(p: u32, m: i64, n: u32) -> Result<Generated, ScriptError> {
    let start = m - n as i64;
    let seed = Coord::new(p, start);
    let mut b = ScriptBuilder::new(WeightedConfig::from_cells([(seed, 1)]));
    let mut column: BTreeMap<u32, Weight> = BTreeMap::from([(p, Weight::one())]);
    for c in start..m {
        let mut next: BTreeMap<u32, Weight> = BTreeMap::new();
        for (&r, w) in &column {
            let step = RuleStep::shift_right(r, c, w.clone());
            if step.touched().iter().any(|at| !at.is_phantom()) {
                b.step(step)?;
            }
            *next.entry(r + 1).or_default() += w;
            *next.entry(r).or_default() -= w;
        }
        next.retain(|_, w| !w.is_zero());
        column = next;
    }
    let fin = (0..=n)
        .map(|j| {
            Ok((
                Coord::new(p + j, m),
                binom(n as i64, j as i64)? * Weight::integer(sign((n - j) as i64)),
            ))
        })
        .collect::<Result<Vec<_>, ScriptError>>()?;
    done(b, WeightedConfig::from_cells(fin))
}

pub(crate) fn hor(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    shift_chase(n, n as i64, n)
}

pub(crate) fn knuth(p: &Bindings) -> Result<Generated, ScriptError> {
    shift_chase(param(p, "p"), param(p, "m") as i64, param(p, "n"))
}

pub(crate) fn hor_row_form(p: &Bindings) -> Result<Generated, ScriptError> {
    let n = param(p, "n");
    let initial = (0..=n as i64)
        .map(|k| {
            Ok((
                Coord::new(n, k),
                binom(2 * n as i64 - k, n as i64)? * Weight::integer(sign(k)),
            ))
        })
        .collect::<Result<Vec<_>, ScriptError>>()?;
    to_apex(WeightedConfig::from_cells(initial), n, Weight::one())
}
