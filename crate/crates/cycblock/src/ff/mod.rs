//! Exact finite-field arithmetic and small matrix groups, used to check the
//! arithmetic facts the classifier relies on against brute force.

pub mod field;
pub mod matrix;
pub mod oracle;
pub mod poly;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::params::Sign;

pub use field::{Embedding, FieldCtx};
pub use matrix::MatrixG;
pub use oracle::{
    build_torus_element, centralizer_enumerate, centralizer_orders, det_order, primary_decompose,
    CentralizerOrders, PrimaryDecomposition, PrimaryFactor,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not a supported prime characteristic")]
    BadCharacteristic(u64),
    #[error("field or search space too large for exact enumeration")]
    TooLarge,
    #[error("no irreducible polynomial of degree {1} over F_{0} found")]
    NoIrreducible(u64, u32),
    #[error("modulus is reducible")]
    Reducible,
    #[error("not a subfield")]
    NotSubfield,
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("target order {order} does not divide q^n - eps^n = {torus}")]
    OrderNotDividing { order: u128, torus: String },
    #[error("matrix is not semisimple: minimal polynomial has a repeated factor")]
    NotSemisimple,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch")]
    Dimension,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("construction check failed: {0}")]
    Check(String),
}

/// `|GL_n(q)|` for `eps = +1`, `|GU_n(q)|` for `eps = −1`.
pub fn gl_order(n: u32, q: &BigUint, eps: Sign) -> BigUint {
    let mut acc = q.pow(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        let qi = q.pow(i);
        let term = match eps {
            Sign::Plus => qi - 1u32,
            Sign::Minus if i % 2 == 1 => qi + 1u32,
            Sign::Minus => qi - 1u32,
        };
        acc *= term;
    }
    acc
}

/// `(q^{δ·p^{a_j}} − 1)/(q^δ − 1)` as a big integer, for the valuation checks.
pub fn torus_ratio(q: &BigUint, delta: u32, p: u64, a_j: u32) -> BigUint {
    let qd = q.pow(delta);
    let big = qd.pow(crate::arith::pow_u64(p, a_j) as u32);
    (big - BigUint::one()) / (qd - BigUint::one())
}
