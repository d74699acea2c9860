//! Exact rational arithmetic plus the two series types the expansion
//! pipelines are built on.

mod even_poly;
mod inv_n;
mod rat;

pub use even_poly::{poly_mul_trunc, EvenPoly};
pub use inv_n::{binomial_power_to_degree, falling_factorial_coeffs, nseries_pow_binomial, InvNSeries};
pub use rat::{double_factorial, factorial, rat_arith, rising_factorial, ArithOp, Rat};
