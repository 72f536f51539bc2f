//! Arrow-chasing on Pascal's triangle with exact arithmetic.
//!
//! Weighted configurations of triangle cells are rewritten by four
//! value-preserving rules; proof scripts built from those rules are replayed
//! and checked exactly, identities are swept over parameter ranges, and
//! configurations can be drawn as SVG or TikZ.

pub mod chase;
pub mod exact;
pub mod harness;
pub mod lang;
pub mod render;
pub mod scripts;
pub mod triangle;
