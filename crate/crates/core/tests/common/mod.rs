//! Strategies shared by the property and acceptance suites.
#![allow(dead_code)]

use pascal_chase::chase::{RuleStep, WeightedConfig};
use pascal_chase::exact::Weight;
use pascal_chase::triangle::Coord;
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Weight> {
    (-60i64..=60, 1i64..=24).prop_map(|(p, q)| Weight::ratio(p, q))
}

/// Polynomials in `a` and `b` with a few rational terms.
pub fn poly() -> impl Strategy<Value = Weight> {
    prop::collection::vec((-40i64..=40, 1i64..=12, 0u32..=3, 0u32..=3), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(p, q, ea, eb)| Weight::ratio(p, q) * Weight::var("a").pow(ea) * Weight::var("b").pow(eb))
            .sum()
    })
}

pub fn cell() -> impl Strategy<Value = Coord> {
    (0u32..=20)
        .prop_flat_map(|n| (Just(n), 0..=n as i64))
        .prop_map(|(n, k)| Coord::new(n, k))
}

pub fn config() -> impl Strategy<Value = WeightedConfig> {
    prop::collection::vec((cell(), rational()), 0..10).prop_map(WeightedConfig::from_cells)
}

/// Steps that stay within rows 0..=20; phantom neighbours are allowed.
pub fn step() -> impl Strategy<Value = RuleStep> {
    prop_oneof![
        ((1u32..=20).prop_flat_map(|n| (Just(n), -1..=n as i64 + 1)), rational())
            .prop_map(|((n, k), w)| RuleStep::lift(n, k, w)),
        ((0u32..=19).prop_flat_map(|n| (Just(n), -2..=n as i64 + 1)), rational())
            .prop_map(|((n, k), w)| RuleStep::drop(n, k, w)),
        ((0u32..=19).prop_flat_map(|n| (Just(n), -2..=n as i64 + 1)), rational())
            .prop_map(|((n, k), w)| RuleStep::shift_right(n, k, w)),
        cell().prop_map(|c| RuleStep::swap_sym(c.n, c.k)),
    ]
}
