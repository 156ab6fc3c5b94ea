//! Exact rationals, rational-endpoint enclosures and the transcendental
//! constants needed to evaluate the bounds.

mod constants;
mod enclosure;
mod rational;

pub use constants::{enc_exp, enc_pi, enc_sqrt, Precision};
pub use enclosure::{enc_arith, EncOp, Enclosure, Operand, Sign};
pub use rational::{
    decimal_prefix, factorial, from_f64, int, parse_decimal, parse_rational, pow2, rat, round_down, round_up,
    to_decimal_string, to_f64, to_fraction_string, Rational,
};
