use std::fmt;

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::{auto_cutoff_mult, bessel_integral, sinc_integral, Precision, QuadEstimate};
use crate::bessel::{bessel_expansion_default, c0_float, Nu};
use crate::error::{Error, Result};
use crate::series::Rat;
use crate::sinc::{partial_sum, sinc_expansion_default, sinc_unit_value};

/// Which integral a remainder is taken for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Sinc,
    Bessel(Nu),
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pipeline::Sinc => write!(f, "sinc"),
            Pipeline::Bessel(nu) => write!(f, "bessel(nu={nu})"),
        }
    }
}

impl Pipeline {
    /// Exact coefficients `c_0..c_m` in the pipeline's unit.
    pub fn coefficients(&self, m: u32) -> Result<Vec<Rat>> {
        Ok(match self {
            Pipeline::Sinc => sinc_expansion_default(m)?.coeffs,
            Pipeline::Bessel(nu) => bessel_expansion_default(nu, m)?.gammas,
        })
    }

    /// The pipeline's integral at `n`; Bessel cutoffs come from
    /// [`auto_cutoff_mult`].
    pub fn integral(&self, n: u32, prec: &Precision) -> Result<QuadEstimate> {
        match self {
            Pipeline::Sinc => sinc_integral(n, prec),
            Pipeline::Bessel(nu) => bessel_integral(nu, n, auto_cutoff_mult(nu, n, prec)?, prec),
        }
    }

    pub fn unit(&self, bits: u32) -> Float {
        match self {
            Pipeline::Sinc => sinc_unit_value(bits),
            Pipeline::Bessel(nu) => c0_float(nu, bits),
        }
    }
}

/// One grid point of a remainder fit; values are in the pipeline's unit.
#[derive(Clone, Debug, Serialize)]
pub struct DecayPoint {
    pub n: u32,
    pub remainder: f64,
    pub quad_err: f64,
    pub used: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    pub pipeline: Pipeline,
    pub m: u32,
    /// Least-squares slope of `ln|r|` against `ln n`; about `-(m+1)`.
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub points: Vec<DecayPoint>,
    /// `lim n^{m+1} r(n)`, i.e. an estimate of the next coefficient, from
    /// polynomial extrapolation in `1/n` over all usable points.
    pub leading_estimate: f64,
    /// Difference between that extrapolation and the one that drops the
    /// smallest `n`; a practical accuracy scale for `leading_estimate`.
    pub leading_residual: f64,
}

/// `I(n)/unit - sum_{j<=m} c_j n^{-j}` and the quadrature error in the same
/// unit.
pub fn remainder_at(pipeline: &Pipeline, coeffs: &[Rat], n: u32, prec: &Precision) -> Result<(Float, Float)> {
    let est = pipeline.integral(n, prec)?;
    Ok(remainder_from_estimate(pipeline, coeffs, n, &est, prec.working_bits()))
}

/// Same as [`remainder_at`] for an already computed quadrature estimate, so
/// several fits can share one set of integrals.
pub fn remainder_from_estimate(pipeline: &Pipeline, coeffs: &[Rat], n: u32, est: &QuadEstimate, bits: u32) -> (Float, Float) {
    let unit = pipeline.unit(bits);
    let nf = Float::with_val(bits, n);
    let upto = coeffs.len().saturating_sub(1) as u32;
    let r = Float::with_val(bits, &est.value / &unit) - partial_sum(coeffs, &nf, upto);
    let err = Float::with_val(bits, &est.abs_err_bound / &unit);
    (r, err)
}

/// Neville extrapolation of `(x_i, y_i)` to `x = 0`.
fn extrapolate_to_zero(xs: &[Float], ys: &[Float]) -> Float {
    let bits = ys[0].prec();
    let mut p: Vec<Float> = ys.to_vec();
    let k = xs.len();
    for level in 1..k {
        for i in 0..k - level {
            let xi = &xs[i];
            let xj = &xs[i + level];
            // p_i <- (x_j p_i - x_i p_{i+1}) / (x_j - x_i), evaluated at 0
            let num = Float::with_val(bits, xj * &p[i]) - Float::with_val(bits, xi * &p[i + 1]);
            p[i] = num / Float::with_val(bits, xj - xi);
        }
    }
    p[0].clone()
}

/// Fits the decay of the order-`m` remainder over `grid`.
///
/// Points whose quadrature error exceeds `1e-3 |r(n)|` are marked unused;
/// fewer than three usable points is an error.
pub fn remainder_decay_fit(pipeline: &Pipeline, m: u32, grid: &[u32], prec: &Precision) -> Result<DecayFit> {
    let mut sorted: Vec<u32> = grid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let estimates = sorted
        .iter()
        .map(|&n| Ok((n, pipeline.integral(n, prec)?)))
        .collect::<Result<Vec<_>>>()?;
    decay_fit_from_estimates(pipeline, m, &estimates, prec.working_bits())
}

/// The fit of [`remainder_decay_fit`] over precomputed `(n, I(n))` pairs,
/// which must be sorted by `n` without repeats.
pub fn decay_fit_from_estimates(pipeline: &Pipeline, m: u32, estimates: &[(u32, QuadEstimate)], bits: u32) -> Result<DecayFit> {
    const REQUIRED: usize = 3;
    let coeffs = pipeline.coefficients(m)?;
    let mut points = Vec::new();
    let mut used_vals = Vec::new();
    for (n, est) in estimates {
        let n = *n;
        let (r, err) = remainder_from_estimate(pipeline, &coeffs, n, est, bits);
        let used = !r.is_zero() && Float::with_val(bits, &err * 1000u32) <= Float::with_val(bits, r.abs_ref());
        points.push(DecayPoint {
            n,
            remainder: r.to_f64(),
            quad_err: err.to_f64(),
            used,
        });
        if used {
            used_vals.push((n, r));
        }
    }
    if used_vals.len() < REQUIRED {
        return Err(Error::InsufficientData {
            usable: used_vals.len(),
            required: REQUIRED,
        });
    }

    let xs: Vec<f64> = used_vals.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = used_vals
        .iter()
        .map(|(_, r)| Float::with_val(bits, r.abs_ref()).ln().to_f64())
        .collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();

    let inv: Vec<Float> = used_vals
        .iter()
        .map(|(n, _)| Float::with_val(bits, Float::with_val(bits, *n).recip_ref()))
        .collect();
    let scaled: Vec<Float> = used_vals
        .iter()
        .map(|(n, r)| Float::with_val(bits, Float::with_val(bits, *n).pow(m + 1)) * r)
        .collect();
    let all = extrapolate_to_zero(&inv, &scaled);
    let fewer = extrapolate_to_zero(&inv[1..], &scaled[1..]);
    let leading_residual = Float::with_val(bits, &all - &fewer).abs().to_f64();

    Ok(DecayFit {
        pipeline: pipeline.clone(),
        m,
        slope,
        intercept,
        residuals,
        points,
        leading_estimate: all.to_f64(),
        leading_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomial_intercept() {
        let bits = 128;
        let xs: Vec<Float> = [0.5, 0.25, 0.125].iter().map(|&x| Float::with_val(bits, x)).collect();
        // y = 3 - 2x + 5x^2
        let ys: Vec<Float> = xs
            .iter()
            .map(|x| Float::with_val(bits, 3 - Float::with_val(bits, x * 2u32) + Float::with_val(bits, x * x) * 5u32))
            .collect();
        let y0 = extrapolate_to_zero(&xs, &ys);
        assert!((y0.to_f64() - 3.0).abs() < 1e-30);
    }

    #[test]
    fn sinc_order_zero_decay() {
        let p = Precision::digits(30).unwrap();
        let fit = remainder_decay_fit(&Pipeline::Sinc, 0, &[50, 100, 200, 400], &p).unwrap();
        assert!((fit.slope + 1.0).abs() < 0.05, "{}", fit.slope);
        // next coefficient is c_1 = -3/20
        assert!((fit.leading_estimate + 0.15).abs() < 10.0 * fit.leading_residual + 1e-9);
        assert!(fit.points.iter().all(|p| p.used));
    }

    #[test]
    fn too_few_points() {
        let p = Precision::digits(20).unwrap();
        let err = remainder_decay_fit(&Pipeline::Sinc, 1, &[100, 200], &p).unwrap_err();
        assert_eq!(err, Error::InsufficientData { usable: 2, required: 3 });
    }
}
