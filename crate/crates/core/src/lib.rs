//! Exact `1/n` expansions of the sinc and normalized-Bessel power integrals,
//! together with an arbitrary-precision quadrature used to check them.
//!
//! The symbolic side works over exact rationals ([`Rat`]). The numerical
//! side ([`quad`]) returns values with rigorous-style absolute error bounds.

pub mod appendix;
pub mod bessel;
pub mod error;
pub mod quad;
pub mod report;
pub mod series;
pub mod sinc;

pub use bessel::{BesselExpansion, Nu};
pub use error::{Error, Result};
pub use quad::{Precision, QuadEstimate};
pub use series::{EvenPoly, InvNSeries, Rat};
pub use sinc::SincExpansion;
