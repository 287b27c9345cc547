//! Exact scalars: big rationals and elements of cyclotomic fields Q(ω_M).

mod cyclotomic;
pub mod linalg;
mod rational;

pub use cyclotomic::{
    cyclotomic_arith, cyclotomic_polynomial, euler_phi, order_cap, set_order_cap, ArithOp, Cyclotomic, Operand,
    DEFAULT_ORDER_CAP,
};
pub use linalg::{Matrix, SparseEchelon};
pub use rational::{binomial_coeff, floor_div, format_rational, int, parse_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("root-of-unity order {order} exceeds the configured cap {cap}")]
    OrderCap { order: u32, cap: u32 },
    #[error("invalid root-of-unity order {0}")]
    BadOrder(u32),
    #[error("order {order} needs {expected} coefficients, got {got}")]
    BadLength { order: u32, expected: usize, got: usize },
    #[error("exponent must be an integer")]
    NonIntegerExponent,
}
