//! Left-hand sides computed the naive way, as a check on the evaluator.
//!
//! Nothing here touches the memoized triangle or the expression evaluator:
//! binomials come from factorial quotients and Fibonacci numbers from fast
//! doubling, so agreement with the DSL path is evidence rather than a
//! tautology.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::HarnessError;
use crate::exact::Weight;
use crate::lang::{Bindings, FibConvention};
use crate::scripts::{self, ScriptError};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n! / (k! (n-k)!)`, zero outside `0 <= k <= n`.
pub fn factorial_binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (q, r) = factorial(n as u64).div_rem(&(factorial(k as u64) * factorial((n - k) as u64)));
    debug_assert!(r.is_zero());
    q
}

/// `(F_i, F_{i+1})` for `i >= 0` by fast doubling.
fn fib_pair(i: u64) -> (BigInt, BigInt) {
    if i == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(i / 2);
    let c = &a * (&b * 2 - &a);
    let d = &a * &a + &b * &b;
    if i.is_multiple_of(2) {
        (c, d)
    } else {
        let next = &c + &d;
        (d, next)
    }
}

pub fn oracle_fib(i: i64, convention: FibConvention) -> BigInt {
    let f = fib_pair(i.unsigned_abs()).0;
    if i >= 0 {
        return f;
    }
    match convention {
        FibConvention::Negafibonacci if i % 2 == 0 => -f,
        FibConvention::Negafibonacci | FibConvention::Mirror => f,
        FibConvention::Zero => BigInt::zero(),
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn sum(range: std::ops::RangeInclusive<i64>, f: impl Fn(i64) -> BigInt) -> Weight {
    Weight::integer(range.map(f).fold(BigInt::zero(), |a, b| a + b))
}

/// The left-hand side of catalog identity `id` at `bindings`, using the
/// negafibonacci extension for negative Fibonacci indices.
pub fn oracle_sum(id: &str, bindings: &Bindings) -> Result<Weight, HarnessError> {
    oracle_sum_with(id, bindings, FibConvention::Negafibonacci)
}

pub fn oracle_sum_with(id: &str, bindings: &Bindings, fib: FibConvention) -> Result<Weight, HarnessError> {
    let entry = scripts::catalog_entry(id)?;
    let get = |name: &str| -> Result<i64, HarnessError> {
        bindings.get(name).copied().ok_or_else(|| {
            HarnessError::Script(ScriptError::MissingParam {
                id: id.to_string(),
                name: name.to_string(),
            })
        })
    };
    let c = factorial_binom;
    let v = match entry.id {
        "row_sum" => {
            let n = get("n")?;
            sum(0..=n, |k| c(n, k))
        }
        "half_row_even" => {
            let n = get("n")?;
            sum(0..=n, |k| c(n, 2 * k))
        }
        "half_row_odd" => {
            let n = get("n")?;
            sum(0..=n, |k| c(n, 2 * k + 1))
        }
        "hockey_stick" => {
            let (m, n) = (get("m")?, get("n")?);
            sum(m..=n, |k| c(k, m))
        }
        "weighted_row" => {
            let n = get("n")?;
            sum(0..=n, |k| k * c(n, k))
        }
        "weighted_half_even" => {
            let n = get("n")?;
            sum(0..=n, |k| k * c(n, 2 * k))
        }
        "weighted_half_odd" => {
            let n = get("n")?;
            sum(0..=n, |k| k * c(n, 2 * k + 1))
        }
        "lagrange" => {
            let n = get("n")?;
            sum(0..=n, |k| c(n, k).pow(2))
        }
        "lagrange_as_printed" => {
            let n = get("n")?;
            sum(1..=n, |k| c(n, k).pow(2))
        }
        "chu_vandermonde" => {
            let (l, m, n) = (get("l")?, get("m")?, get("n")?);
            sum(0..=l, |k| c(n, k) * c(m, l - k))
        }
        "alternating" => {
            let n = get("n")?;
            sum(0..=n, |k| sign(k) * c(n, k))
        }
        "alternating_k" => {
            let n = get("n")?;
            sum(0..=n, |k| sign(k) * k * c(n, k))
        }
        "alt_binom" => {
            let (m, n) = (get("m")?, get("n")?);
            sum(m..=n, |k| sign(k) * c(n, k) * c(k, m))
        }
        "binomial_theorem" => {
            let n = get("n")?;
            let (a, b) = (Weight::var("a"), Weight::var("b"));
            (0..=n)
                .map(|k| Weight::integer(c(n, k)) * a.pow((n - k) as u32) * b.pow(k as u32))
                .sum()
        }
        "hockey_variant" => {
            let (m, n) = (get("m")?, get("n")?);
            sum(m..=n, |k| k * c(k, m))
        }
        "hockey_gen" => {
            let (l, m, n) = (get("l")?, get("m")?, get("n")?);
            sum(l.max(m)..=n, |k| c(k, l) * c(k, m))
        }
        "upside_down_cv" => {
            let (l, m, n) = (get("l")?, get("m")?, get("n")?);
            sum(m..=n - l, |k| c(k, m) * c(n - k, l))
        }
        "boscarol" => {
            let (m, n) = (get("m")?, get("n")?);
            let two = |e: i64| BigInt::one() << e as u64;
            let first = sum(m..=n, |k| c(k, m) * two(n - k));
            let second = sum(n - m..=n, |k| c(k, n - m) * two(n - k));
            first + second
        }
        "hor" => {
            let n = get("n")?;
            sum(n..=2 * n, |k| sign(k) * c(k, n) * c(n, k - n))
        }
        "hor_row_form" => {
            let n = get("n")?;
            sum(0..=n, |k| sign(k) * c(n, k) * c(2 * n - k, n))
        }
        "knuth" => {
            let (p, m, n) = (get("p")?, get("m")?, get("n")?);
            sum(p..=p + n, |k| sign(p + n - k) * c(k, m) * c(n, k - p))
        }
        "fib_row" => {
            let n = get("n")?;
            sum(0..=n, |k| c(n, k) * oracle_fib(k, fib))
        }
        "fib_quarterly" => {
            let (m, n) = (get("m")?, get("n")?);
            sum(0..=n, |k| c(m, k) * sign(n + k) * oracle_fib(m - 2 * k, fib))
        }
        other => return Err(HarnessError::Spec(format!("no oracle for `{other}`"))),
    };
    Ok(v)
}
