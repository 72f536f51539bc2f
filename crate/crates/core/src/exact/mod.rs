//! Exact weights: sparse multivariate polynomials with rational coefficients.
//!
//! Integers and rationals are constant polynomials, so every rewrite rule and
//! every evaluation works over one type regardless of whether the weights are
//! plain numbers or symbolic expressions in indeterminates such as `a`, `b`.

mod codec;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use codec::parse_weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("negative exponent {0} is not supported")]
    NegativeExponent(i64),
    #[error("weight parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// A product of indeterminates, e.g. `a^2*b`.
///
/// Factors are kept sorted by name and never carry a zero exponent. The
/// ordering is the canonical print order: higher total degree first, then
/// lexicographic on the expanded name sequence (`a^2*b` reads as `a a b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeated names and
    /// dropping zero exponents.
    pub fn from_factors<I, S>(factors: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut merged: BTreeMap<String, u32> = BTreeMap::new();
        for (name, exp) in factors {
            *merged.entry(name.into()).or_insert(0) += exp;
        }
        Monomial(merged.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn expanded(&self) -> impl Iterator<Item = &str> {
        self.0
            .iter()
            .flat_map(|(name, e)| std::iter::repeat_n(name.as_str(), *e as usize))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.expanded().cmp(other.expanded()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(name)?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact weight attached to a triangle cell, or the value of a configuration.
///
/// Invariant: no stored coefficient is zero, so the zero weight is the empty
/// map and structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Weight {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Weight {
    pub fn zero() -> Self {
        Weight::default()
    }

    pub fn one() -> Self {
        Weight::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut w = Weight::zero();
        w.add_term(Monomial::one(), c);
        w
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Weight::constant(BigRational::from_integer(n.into()))
    }

    pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Weight::constant(BigRational::new(numer.into(), denom.into()))
    }

    /// The degree-one monomial `name`.
    pub fn var(name: &str) -> Self {
        let mut w = Weight::zero();
        w.add_term(Monomial::var(name), BigRational::one());
        w
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut w = Weight::zero();
        for (m, c) in terms {
            w.add_term(m, c);
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The rational value of a constant weight.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The integer value of a constant integral weight.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant().filter(|c| c.is_integer()).map(|c| c.to_integer())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `m`; zero when absent.
    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Weight {
        if c.is_zero() {
            return Weight::zero();
        }
        Weight {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// `self^e`, with `x^0 = 1` for every `x` (including zero).
    pub fn pow(&self, e: u32) -> Weight {
        let mut result = Weight::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn checked_pow(&self, e: i64) -> Result<Weight, ExactError> {
        if e < 0 {
            return Err(ExactError::NegativeExponent(e));
        }
        let e = u32::try_from(e).map_err(|_| ExactError::NegativeExponent(e))?;
        Ok(self.pow(e))
    }
}

impl From<i64> for Weight {
    fn from(n: i64) -> Self {
        Weight::integer(n)
    }
}

impl From<BigInt> for Weight {
    fn from(n: BigInt) -> Self {
        Weight::integer(n)
    }
}

impl From<BigRational> for Weight {
    fn from(c: BigRational) -> Self {
        Weight::constant(c)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&codec::format_weight(self))
    }
}

impl FromStr for Weight {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_weight(s)
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;

    fn add(self, rhs: &Weight) -> Weight {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(mut self, rhs: Weight) -> Weight {
        self += &rhs;
        self
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;

    fn sub(self, rhs: &Weight) -> Weight {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Weight {
    type Output = Weight;

    fn sub(mut self, rhs: Weight) -> Weight {
        self -= &rhs;
        self
    }
}

impl Mul<&Weight> for &Weight {
    type Output = Weight;

    fn mul(self, rhs: &Weight) -> Weight {
        let mut out = Weight::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Weight {
    type Output = Weight;

    fn mul(self, rhs: Weight) -> Weight {
        &self * &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        Weight {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        -&self
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        let mut acc = Weight::zero();
        for w in iter {
            acc += &w;
        }
        acc
    }
}
