//! Step-recording helper shared by the generators.

use crate::chase::{lift_row_steps, ChaseError, RuleStep, WeightedConfig};
use crate::exact::Weight;
use crate::triangle::Coord;

/// Applies steps to a running configuration and records them.
pub(crate) struct ScriptBuilder {
    initial: WeightedConfig,
    cur: WeightedConfig,
    steps: Vec<RuleStep>,
}

impl ScriptBuilder {
    pub fn new(initial: WeightedConfig) -> Self {
        ScriptBuilder {
            cur: initial.clone(),
            initial,
            steps: Vec::new(),
        }
    }

    #[cfg(test)]
    pub fn current(&self) -> &WeightedConfig {
        &self.cur
    }

    pub fn step(&mut self, s: RuleStep) -> Result<(), ChaseError> {
        self.cur.apply(&s)?;
        self.steps.push(s);
        Ok(())
    }

    pub fn lift_row(&mut self, r: u32) -> Result<(), ChaseError> {
        for s in lift_row_steps(&self.cur, r)? {
            self.step(s)?;
        }
        Ok(())
    }

    /// Lifts rows `from`, `from - 1`, ..., `to + 1`, leaving row `to` loaded.
    pub fn lift_rows(&mut self, from: u32, to: u32) -> Result<(), ChaseError> {
        for r in (to + 1..=from).rev() {
            self.lift_row(r)?;
        }
        Ok(())
    }

    /// Lifts every weighted cell of row `r` lying right of column `col`.
    pub fn lift_right_of(&mut self, r: u32, col: i64) -> Result<(), ChaseError> {
        let cells: Vec<(i64, Weight)> = self.cur.row_cells(r).into_iter().filter(|(k, _)| *k > col).collect();
        for (k, w) in cells {
            self.step(RuleStep::Lift { n: r, k, w })?;
        }
        Ok(())
    }

    /// Moves `d` from `(r,k)` to its mirror `(r,r-k)` whatever the rest of the
    /// configuration holds. A bare swap would move the whole cell; here `d` is
    /// lifted into row `r-1`, the two receiving cells are swapped under the
    /// mirror, dropped back down and the swaps undone.
    pub fn transfer(&mut self, r: u32, k: i64, d: Weight) -> Result<(), ChaseError> {
        let m = r as i64 - k;
        if d.is_zero() || m == k {
            return Ok(());
        }
        if k > m {
            // Mirror the problem so the weight travels rightwards.
            self.step(RuleStep::swap_sym(r, k))?;
            self.transfer(r, m, d)?;
            return self.step(RuleStep::swap_sym(r, k));
        }
        let up = r - 1;
        self.step(RuleStep::Lift { n: r, k, w: d.clone() })?;
        let swaps: Vec<RuleStep> = [k - 1, k]
            .into_iter()
            .filter(|&j| j >= 0 && 2 * j != up as i64)
            .map(|j| RuleStep::swap_sym(up, j))
            .collect();
        for s in &swaps {
            self.step(s.clone())?;
        }
        self.step(RuleStep::Drop { n: up, k: m - 1, w: d })?;
        for s in swaps.into_iter().rev() {
            self.step(s)?;
        }
        Ok(())
    }

    /// Evens out each mirror pair of row `r` so that `(r,k)` and `(r,r-k)`
    /// both carry the average of their weights.
    pub fn symmetrize_row(&mut self, r: u32) -> Result<(), ChaseError> {
        let half = Weight::ratio(1, 2);
        for k in 0..=(r as i64) {
            let m = r as i64 - k;
            if k >= m {
                break;
            }
            let d = (self.cur.get(Coord::new(r, k)) - self.cur.get(Coord::new(r, m))) * half.clone();
            self.transfer(r, k, d)?;
        }
        Ok(())
    }

    pub fn finish(self) -> (WeightedConfig, Vec<RuleStep>, WeightedConfig) {
        (self.initial, self.steps, self.cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chase::eval_config;

    #[test]
    fn transfer_moves_only_the_amount() {
        for r in 1..8u32 {
            for k in 0..=(r as i64) {
                if 2 * k == r as i64 {
                    continue;
                }
                let base = WeightedConfig::from_cells(
                    (0..=r as i64)
                        .map(|j| (Coord::new(r, j), Weight::integer(3 * j + 1)))
                        .chain((0..r as i64).map(|j| (Coord::new(r - 1, j), Weight::integer(j * j - 2)))),
                );
                let mut b = ScriptBuilder::new(base.clone());
                b.transfer(r, k, Weight::integer(5)).unwrap();
                let mut want = base.clone();
                want.sub(Coord::new(r, k), &Weight::integer(5));
                want.add(Coord::new(r, r as i64 - k), &Weight::integer(5));
                assert_eq!(b.current(), &want, "r={r} k={k}");
                assert_eq!(eval_config(b.current()).unwrap(), eval_config(&base).unwrap());
            }
        }
    }

    #[test]
    fn symmetrize_makes_row_even() {
        let c = WeightedConfig::row(5, 0, [1, 3, 5, 7, 9, 11]);
        let mut b = ScriptBuilder::new(c);
        b.symmetrize_row(5).unwrap();
        let row: Vec<Weight> = b.current().row_cells(5).into_iter().map(|(_, w)| w).collect();
        assert_eq!(row, vec![Weight::integer(6); 6]);
    }
}
