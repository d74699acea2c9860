//! High-precision evaluation of the two integrals, used as an independent
//! oracle for the symbolic expansions.
//!
//! Every integrand here is `|g(t)|^n` times a smooth weight, non-smooth only
//! at the zeros of `g`. The finite part is therefore split at those zeros and
//! integrated panel by panel with Gauss-Legendre rules whose order doubles
//! until two successive estimates agree. The infinite remainder is either
//! bounded by an envelope (when the bound is already below the target) or
//! summed from an asymptotic representation with its own truncation bound.

mod bessel;
mod fit;
mod gauss;
mod hankel;
mod panel;
mod sinc;
mod zeta;

use std::fmt;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};

pub use bessel::{
    auto_cutoff_mult, bessel_integral, bessel_j_normalized, bessel_j_normalized_with_limit, bessel_zeros,
    BesselEval, DEFAULT_T_MAX,
};
pub use fit::{decay_fit_from_estimates, remainder_at, remainder_decay_fit, remainder_from_estimate, DecayFit, DecayPoint, Pipeline};
pub use gauss::{gauss_legendre, GaussRule};
pub use hankel::hankel_coefficient;
pub use sinc::{sinc_integral, sinc_value};
pub use zeta::{bernoulli, hurwitz_zeta};

/// Decimal digits carried beyond the requested accuracy.
pub const GUARD_DIGITS: u32 = 10;

/// Starting Gauss-Legendre order on every panel.
pub const BASE_ORDER: usize = 16;

/// Order doublings attempted per panel before escalating precision.
pub const MAX_DOUBLINGS: u32 = 5;

/// Requested accuracy of a quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Precision {
    pub decimal_digits: u32,
    pub target_abs_err: f64,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 15;
    /// Keeps `10^-digits` representable as an `f64` target.
    pub const MAX_DIGITS: u32 = 300;

    /// `digits` decimal digits with absolute target `10^-digits`.
    pub fn digits(digits: u32) -> Result<Self> {
        Self::with_target(digits, 10f64.powi(-(digits as i32)))
    }

    pub fn with_target(digits: u32, target_abs_err: f64) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "working precision needs at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        if digits > Self::MAX_DIGITS {
            return Err(Error::Domain(format!(
                "working precision is limited to {} digits, got {digits}",
                Self::MAX_DIGITS
            )));
        }
        if !(target_abs_err > 0.0 && target_abs_err.is_finite()) {
            return Err(Error::Domain(format!("bad target error {target_abs_err}")));
        }
        Ok(Precision {
            decimal_digits: digits,
            target_abs_err,
        })
    }

    /// Mantissa bits for `decimal_digits + GUARD_DIGITS`.
    pub fn working_bits(&self) -> u32 {
        digits_to_bits(self.decimal_digits + GUARD_DIGITS)
    }

    /// The single precision escalation step.
    pub(crate) fn raised(&self) -> Precision {
        Precision {
            decimal_digits: self.decimal_digits + self.decimal_digits / 2 + GUARD_DIGITS,
            target_abs_err: self.target_abs_err,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(30).unwrap()
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// How the integral beyond the cutoff was accounted for.
#[derive(Clone, Debug)]
pub enum TailTreatment {
    /// Only bounded: `bound` is part of `abs_err_bound`, nothing was added.
    Bounded { bound: Float },
    /// Summed from an asymptotic representation; `value` is included in the
    /// estimate and `err` in `abs_err_bound`. `envelope` is the cruder
    /// bound that would have applied otherwise.
    Summed {
        value: Float,
        err: Float,
        envelope: Float,
    },
}

impl TailTreatment {
    pub fn kind(&self) -> &'static str {
        match self {
            TailTreatment::Bounded { .. } => "bounded",
            TailTreatment::Summed { .. } => "summed",
        }
    }

    pub fn error_contribution(&self) -> &Float {
        match self {
            TailTreatment::Bounded { bound } => bound,
            TailTreatment::Summed { err, .. } => err,
        }
    }
}

/// A high-precision value with an absolute error bound.
#[derive(Clone, Debug)]
pub struct QuadEstimate {
    pub value: Float,
    /// Quadrature error estimate plus the tail contribution.
    pub abs_err_bound: Float,
    /// Quadrature part of `abs_err_bound`.
    pub quad_err: Float,
    pub cutoff_used: Float,
    pub pieces: usize,
    pub tail: TailTreatment,
    /// Precision the estimate was finally computed at.
    pub precision: Precision,
}

impl QuadEstimate {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn err_f64(&self) -> f64 {
        self.abs_err_bound.to_f64()
    }

    /// `|value - truth| <= abs_err_bound`.
    pub fn contains(&self, truth: &Float) -> bool {
        let prec = self.value.prec().max(truth.prec());
        let diff = Float::with_val(prec, &self.value - truth).abs();
        diff <= self.abs_err_bound
    }
}

/// Serializable view of a [`QuadEstimate`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuadSummary {
    pub value: String,
    pub abs_err_bound: String,
    pub cutoff: String,
    pub pieces: usize,
    pub tail: String,
}

impl QuadEstimate {
    pub fn summary(&self, digits: u32) -> QuadSummary {
        QuadSummary {
            value: render(&self.value, digits),
            abs_err_bound: render_sci(&self.abs_err_bound, 3),
            cutoff: render(&self.cutoff_used, 12),
            pieces: self.pieces,
            tail: self.tail.kind().to_string(),
        }
    }
}

impl fmt::Display for QuadEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.precision.decimal_digits;
        write!(f, "{} +/- {}", render(&self.value, digits), render_sci(&self.abs_err_bound, 3))
    }
}

/// Renders `x` with `digits` significant digits, positional when the
/// exponent is moderate and scientific otherwise.
pub fn render(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1) as usize));
    let exp = exp.unwrap_or(0);
    let sign = if neg { "-" } else { "" };
    // value = 0.mantissa * 10^exp
    if (-6..=24).contains(&exp) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
        } else if exp as usize >= mantissa.len() {
            format!("{}{}", mantissa, "0".repeat(exp as usize - mantissa.len()))
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        let body = if body.contains('.') {
            body.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            body
        };
        format!("{sign}{body}")
    } else {
        sci_from_parts(sign, &mantissa, exp)
    }
}

/// Scientific rendering with `digits` significant digits.
pub fn render_sci(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1) as usize));
    sci_from_parts(if neg { "-" } else { "" }, &mantissa, exp.unwrap_or(0))
}

fn sci_from_parts(sign: &str, mantissa: &str, exp: i32) -> String {
    let (lead, rest) = mantissa.split_at(1);
    let rest = rest.trim_end_matches('0');
    if rest.is_empty() {
        format!("{sign}{lead}e{}", exp - 1)
    } else {
        format!("{sign}{lead}.{rest}e{}", exp - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_validation() {
        assert!(Precision::digits(14).is_err());
        assert!(Precision::with_target(30, 0.0).is_err());
        assert!(Precision::digits(Precision::MAX_DIGITS).is_ok());
        assert!(matches!(Precision::digits(1500), Err(Error::Domain(_))));
        let p = Precision::digits(30).unwrap();
        assert!((p.target_abs_err / 1e-30 - 1.0).abs() < 1e-12);
        assert!(p.working_bits() >= digits_to_bits(40));
        assert!(p.raised().working_bits() > p.working_bits());
    }

    #[test]
    fn rendering() {
        let pi = Float::with_val(200, rug::float::Constant::Pi);
        assert_eq!(render(&pi, 10), "3.141592654");
        assert_eq!(render(&Float::with_val(64, 4), 10), "4");
        assert_eq!(render(&Float::with_val(64, -0.00125), 3), "-0.00125");
        assert_eq!(render_sci(&Float::with_val(64, 1.5e-40), 3), "1.5e-40");
        assert_eq!(render_sci(&Float::with_val(64, 2), 3), "2e0");
        assert_eq!(render(&Float::with_val(64, 1e30), 3), "1e30");
        assert_eq!(render(&Float::with_val(64, 0), 3), "0");
    }
}
