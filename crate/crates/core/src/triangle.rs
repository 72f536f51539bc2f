//! Binomial coefficients, Fibonacci numbers and triangle coordinates.
//!
//! Binomials come from a memoized Pascal triangle grown with the additive
//! recurrence only. `C(n, k)` is zero whenever `k < 0` or `k > n`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MAX_ROW: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("binomial upper index must be nonnegative, got {0}")]
    NegativeRow(i64),
    #[error("row {row} exceeds the triangle row cap {cap}")]
    RowLimit { row: i64, cap: usize },
}

/// A cell of Pascal's triangle. `k` may lie outside `0..=n`; such a cell is
/// phantom and has binomial value zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub n: u32,
    pub k: i64,
}

impl Coord {
    pub const fn new(n: u32, k: i64) -> Self {
        Coord { n, k }
    }

    pub fn is_phantom(&self) -> bool {
        self.k < 0 || self.k > i64::from(self.n)
    }

    /// The mirror cell `(n, n - k)`.
    pub fn mirror(&self) -> Coord {
        Coord::new(self.n, i64::from(self.n) - self.k)
    }

    pub fn binom(&self) -> Result<BigInt, TriangleError> {
        binom(i64::from(self.n), self.k)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.k)
    }
}

/// Memoized Pascal triangle, grown row by row on demand up to a cap.
#[derive(Debug)]
pub struct BinomialTable {
    rows: RwLock<Vec<Vec<BigInt>>>,
    max_row: AtomicUsize,
}

impl BinomialTable {
    pub fn new(max_row: usize) -> Self {
        BinomialTable {
            rows: RwLock::new(vec![vec![BigInt::one()]]),
            max_row: AtomicUsize::new(max_row),
        }
    }

    pub fn max_row(&self) -> usize {
        self.max_row.load(Ordering::Relaxed)
    }

    pub fn set_max_row(&self, max_row: usize) {
        self.max_row.store(max_row, Ordering::Relaxed);
    }

    pub fn binom(&self, n: i64, k: i64) -> Result<BigInt, TriangleError> {
        if n < 0 {
            return Err(TriangleError::NegativeRow(n));
        }
        if k < 0 || k > n {
            return Ok(BigInt::zero());
        }
        let row = self.checked_row(n)?;
        let k = k as usize;
        {
            let rows = self.rows.read().expect("binomial table lock");
            if let Some(r) = rows.get(row) {
                return Ok(r[k].clone());
            }
        }
        self.grow(row);
        let rows = self.rows.read().expect("binomial table lock");
        Ok(rows[row][k].clone())
    }

    /// `[C(n,0), ..., C(n,n)]`.
    pub fn row(&self, n: i64) -> Result<Vec<BigInt>, TriangleError> {
        if n < 0 {
            return Err(TriangleError::NegativeRow(n));
        }
        let row = self.checked_row(n)?;
        self.grow(row);
        let rows = self.rows.read().expect("binomial table lock");
        Ok(rows[row].clone())
    }

    fn checked_row(&self, n: i64) -> Result<usize, TriangleError> {
        let cap = self.max_row();
        match usize::try_from(n) {
            Ok(row) if row <= cap => Ok(row),
            _ => Err(TriangleError::RowLimit { row: n, cap }),
        }
    }

    fn grow(&self, target: usize) {
        let mut rows = self.rows.write().expect("binomial table lock");
        while rows.len() <= target {
            let prev = rows.last().expect("row 0 is always present");
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(BigInt::one());
            for pair in prev.windows(2) {
                next.push(&pair[0] + &pair[1]);
            }
            next.push(BigInt::one());
            rows.push(next);
        }
    }
}

impl Default for BinomialTable {
    fn default() -> Self {
        BinomialTable::new(DEFAULT_MAX_ROW)
    }
}

fn shared_table() -> &'static BinomialTable {
    static TABLE: OnceLock<BinomialTable> = OnceLock::new();
    TABLE.get_or_init(BinomialTable::default)
}

/// Changes the row cap of the process-wide table.
pub fn set_max_row(max_row: usize) {
    shared_table().set_max_row(max_row);
}

pub fn max_row() -> usize {
    shared_table().max_row()
}

/// `C(n, k)` with the out-of-range convention, from the shared table.
pub fn binom(n: i64, k: i64) -> Result<BigInt, TriangleError> {
    shared_table().binom(n, k)
}

pub fn binom_row(n: i64) -> Result<Vec<BigInt>, TriangleError> {
    shared_table().row(n)
}

/// Fibonacci numbers with `F_0 = 0`, `F_1 = 1`, extended to negative
/// indices by `F_{-i} = (-1)^(i+1) F_i`.
pub fn fib(i: i64) -> BigInt {
    let steps = i.unsigned_abs();
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..steps {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    if i < 0 && steps.is_multiple_of(2) {
        -a
    } else {
        a
    }
}
