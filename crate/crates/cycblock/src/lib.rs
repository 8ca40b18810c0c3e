//! Endo-permutation labels of cyclic blocks of `SL_n(q)` and `SU_n(q)`.
//!
//! [`labels`] handles subsets of `{1, …, l−1}` and their sign-sequence
//! coordinates, [`params`] and [`classify`] turn factor data of a semisimple
//! element into a label, [`synth`] goes the other way, and [`ff`] checks the
//! underlying arithmetic on small concrete groups.

pub mod arith;
pub mod classify;
pub mod ff;
pub mod labels;
pub mod params;
pub mod synth;
pub mod suites;
pub mod cli;
