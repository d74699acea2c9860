use rug::ops::Pow;
use rug::Float;

use super::hankel::hankel_tail;
use super::panel::{integrate_panels, pieces_for, split};
use super::{render, render_sci, Precision, QuadEstimate, TailTreatment};
use crate::bessel::{bessel_tail_bound, min_cutoff, Nu};
use crate::error::{Error, Result};

/// Largest argument at which `f_nu` is evaluated.
pub const DEFAULT_T_MAX: f64 = 100.0;

/// `f_nu(t) = Gamma(nu+1) (2/t)^nu J_nu(t)` with an error bound.
#[derive(Clone, Debug)]
pub struct BesselEval {
    pub nu: Nu,
    pub t: Float,
    pub value: Float,
    pub err_bound: Float,
}

/// Power series of `f_nu` with `shifted = nu + 1`, evaluated at `bits`
/// after absorbing the cancellation of the alternating terms.
fn series(shifted: &Float, t: &Float, bits: u32) -> (Float, Float) {
    let tf = t.to_f64().abs();
    // the largest term is about e^{t}, so 2 t log2(e) extra bits cover it
    let extra = (2.9 * tf).ceil() as u32 + 16;
    let wb = bits + extra;
    let x = Float::with_val(wb, t * t) / 4u32;
    let s = Float::with_val(wb, shifted);
    let mut term = Float::with_val(wb, 1);
    let mut sum = Float::with_val(wb, 1);
    let mut max_term = Float::with_val(wb, 1);
    let floor = Float::with_val(wb, Float::i_exp(1, -(bits as i32) - 8));
    let mut j = 0u32;
    loop {
        // term_{j+1} = -term_j x / ((j+1)(nu+1+j))
        let denom = Float::with_val(wb, &s + j) * (j + 1);
        let next = Float::with_val(wb, -Float::with_val(wb, &term * &x) / denom);
        let past_peak = Float::with_val(wb, j + 1) > x;
        if past_peak && Float::with_val(wb, next.abs_ref()) < floor {
            let count = j + 2;
            let rounding = Float::with_val(wb, &max_term * count) >> (wb as i32 - 4);
            let err = Float::with_val(bits, next.abs() + rounding);
            return (Float::with_val(bits, &sum), err);
        }
        term = next;
        sum += &term;
        let mag = Float::with_val(wb, term.abs_ref());
        if mag > max_term {
            max_term = mag;
        }
        j += 1;
    }
}

/// [`bessel_j_normalized_with_limit`] with `t_max = 100`.
pub fn bessel_j_normalized(nu: &Nu, t: &Float, prec: &Precision) -> Result<BesselEval> {
    bessel_j_normalized_with_limit(nu, t, prec, DEFAULT_T_MAX)
}

/// Evaluates `f_nu(t)` for `0 <= t <= t_max`.
pub fn bessel_j_normalized_with_limit(nu: &Nu, t: &Float, prec: &Precision, t_max: f64) -> Result<BesselEval> {
    if t.is_sign_negative() && !t.is_zero() {
        return Err(Error::Domain(format!("f_nu needs t >= 0, got {}", t.to_f64())));
    }
    if *t > t_max {
        return Err(Error::Domain(format!(
            "t = {} exceeds the supported range t <= {t_max}",
            t.to_f64()
        )));
    }
    let bits = prec.working_bits();
    let shifted = Float::with_val(bits, nu.to_float(bits) + 1u32);
    let (value, err_bound) = series(&shifted, t, bits);
    Ok(BesselEval {
        nu: nu.clone(),
        t: Float::with_val(bits, t),
        value,
        err_bound,
    })
}

const GRID_STEP: f64 = 0.25;

/// Zeros of `f_nu` in `(0, upto)`, located on a grid of step 1/4, bracketed
/// by bisection and polished by Newton with
/// `f_nu'(t) = -t f_{nu+1}(t) / (2(nu+1))`.
pub fn bessel_zeros(nu: &Nu, upto: &Float, bits: u32) -> Result<Vec<Float>> {
    let shifted = Float::with_val(bits, nu.to_float(bits) + 1u32);
    let shifted_next = Float::with_val(bits, &shifted + 1u32);
    let coarse = 64u32;
    let coarse_shift = Float::with_val(coarse, &shifted);
    let sign_at = |t: &Float| -> Result<i32> {
        let (v, e) = series(&coarse_shift, &Float::with_val(coarse, t), coarse);
        if Float::with_val(coarse, v.abs_ref()) <= e {
            return Err(Error::ZeroBracketing(format!("{:.6}", t.to_f64())));
        }
        Ok(if v.is_sign_negative() { -1 } else { 1 })
    };
    let steps = (upto.to_f64() / GRID_STEP).floor() as u32;
    let mut zeros = Vec::new();
    let mut prev_t = Float::with_val(bits, 0);
    let mut prev_sign = 1;
    for i in 1..=steps {
        let t = Float::with_val(bits, GRID_STEP * i as f64);
        if t >= *upto {
            break;
        }
        let sign = sign_at(&t)?;
        if sign != prev_sign {
            zeros.push(refine(&shifted, &shifted_next, &prev_t, &t, prev_sign, bits)?);
        }
        prev_t = t;
        prev_sign = sign;
    }
    // the stretch from the last grid point to `upto`
    if prev_t < *upto {
        let end = Float::with_val(bits, upto);
        if let Ok(sign) = sign_at(&end) {
            if sign != prev_sign {
                zeros.push(refine(&shifted, &shifted_next, &prev_t, &end, prev_sign, bits)?);
            }
        }
    }
    Ok(zeros)
}

fn refine(shifted: &Float, shifted_next: &Float, lo: &Float, hi: &Float, lo_sign: i32, bits: u32) -> Result<Float> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let eval = |t: &Float| series(shifted, t, bits).0;
    for _ in 0..40 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        let v = eval(&mid);
        let s = if v.is_sign_negative() { -1 } else { 1 };
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = Float::with_val(bits, &lo + &hi) / 2u32;
    let tol = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32)) * 4u32;
    for _ in 0..200 {
        let v = eval(&t);
        let d = Float::with_val(bits, &t * series(shifted_next, &t, bits).0) / Float::with_val(bits, shifted * 2u32);
        if d.is_zero() {
            break;
        }
        // f' = -d, so t - f/f' = t + f/d
        let dx = Float::with_val(bits, &v / &d);
        let next = Float::with_val(bits, &t + &dx);
        if next <= lo || next >= hi {
            return Err(Error::ZeroBracketing(format!("{:.6}", t.to_f64())));
        }
        t = next;
        if dx.abs() <= tol {
            return Ok(t);
        }
    }
    Ok(t)
}

/// Smallest cutoff multiple (of `2^nu Gamma(nu+1)`) on a ladder of ratio 1.25
/// whose Landau bound is within half the target, staying below `t = 100`.
///
/// When none qualifies: `1` for even `n` (the summed tail takes over) and
/// the largest admissible multiple for odd `n`.
pub fn auto_cutoff_mult(nu: &Nu, n: u32, prec: &Precision) -> Result<f64> {
    let bits = prec.working_bits();
    let base = min_cutoff(nu, bits).to_f64();
    let max_mult = DEFAULT_T_MAX / base;
    let half = prec.target_abs_err / 2.0;
    let mut mult = 1.0;
    let mut last = mult;
    while mult <= max_mult {
        let x = Float::with_val(bits, base * mult);
        if bessel_tail_bound(nu, n, &x)?.bound.to_f64() <= half {
            return Ok(mult);
        }
        last = mult;
        mult *= 1.25;
    }
    // the last rung rather than `max_mult` itself, which can round past t_max
    Ok(if n.is_multiple_of(2) { 1.0 } else { last })
}

/// `I_nu(n) = n^nu int_0^inf |f_nu(t)|^n t^{2nu-1} dt` to the target
/// precision.
///
/// The finite part runs to `X = cutoff_mult * 2^nu Gamma(nu+1)`, split at
/// the zeros of `f_nu`. The part beyond `X` is the Landau bound when that is
/// small enough. For even `n` with a larger Landau bound the cutoff is moved
/// out until the Hankel expansion of the tail converges and that tail is
/// summed; odd `n` keep the Landau bound whatever its size.
pub fn bessel_integral(nu: &Nu, n: u32, cutoff_mult: f64, prec: &Precision) -> Result<QuadEstimate> {
    if n < 2 {
        return Err(Error::Domain(format!("I_nu(n) diverges for n = {n}; need n >= 2")));
    }
    if !cutoff_mult.is_finite() || cutoff_mult < 1.0 {
        return Err(Error::Domain(format!("cutoff multiple must be >= 1, got {cutoff_mult}")));
    }
    match attempt(nu, n, cutoff_mult, prec)? {
        Ok(est) => Ok(est),
        Err(_) => match attempt(nu, n, cutoff_mult, &prec.raised())? {
            Ok(est) => Ok(est),
            Err(best) => Err(Error::PrecisionFailure {
                reason: format!("Bessel quadrature for nu = {nu}, n = {n} did not converge"),
                best_estimate: render(&best.value, prec.decimal_digits),
                best_error: render_sci(&best.abs_err_bound, 3),
            }),
        },
    }
}

type Attempt = std::result::Result<QuadEstimate, QuadEstimate>;

fn attempt(nu: &Nu, n: u32, cutoff_mult: f64, prec: &Precision) -> Result<Attempt> {
    let bits = prec.working_bits();
    let target = Float::with_val(bits, prec.target_abs_err);
    let half_target = Float::with_val(bits, &target / 2u32);
    let base = min_cutoff(nu, bits);
    let mut cutoff = Float::with_val(bits, &base * cutoff_mult);
    if cutoff > DEFAULT_T_MAX {
        return Err(Error::Domain(format!(
            "cutoff {} exceeds t = {DEFAULT_T_MAX}",
            cutoff.to_f64()
        )));
    }

    let landau = bessel_tail_bound(nu, n, &cutoff)?.bound;
    let mut tail = TailTreatment::Bounded { bound: landau.clone() };
    if landau > half_target && n.is_multiple_of(2) {
        let mut x = if cutoff < 20 { Float::with_val(bits, 20) } else { cutoff.clone() };
        let mut furthest = None;
        while x <= DEFAULT_T_MAX {
            if let Some(h) = hankel_tail(nu, n, &x, bits, &half_target) {
                tail = TailTreatment::Summed {
                    value: h.value,
                    err: h.err,
                    envelope: bessel_tail_bound(nu, n, &x)?.bound,
                };
                cutoff = x.clone();
                furthest = None;
                break;
            }
            furthest = Some(x.clone());
            x *= 1.25f64;
        }
        // no summable tail: at least take the smallest Landau bound on offer
        if let Some(x) = furthest {
            let bound = bessel_tail_bound(nu, n, &x)?.bound;
            if bound < landau {
                tail = TailTreatment::Bounded { bound };
                cutoff = x;
            }
        }
    }

    let v = nu.to_float(bits);
    let shifted = Float::with_val(bits, &v + 1u32);
    let zeros = bessel_zeros(nu, &cutoff, bits)?;
    let sigma = (2.0 * (v.to_f64() + 1.0) / n as f64).sqrt();
    let h = (2.0 * sigma).min(1.6);

    let mut breaks = vec![Float::with_val(bits, 0)];
    breaks.extend(zeros);
    breaks.push(cutoff.clone());

    let weight_exp = Float::with_val(bits, &v * 2u32) - 1u32;
    let smooth_weight = weight_exp.is_integer();
    let mut panels = Vec::new();
    let mut leftover = Float::new(bits);
    let n_pow = Float::with_val(bits, Float::with_val(bits, n).pow(&v));
    for w in breaks.windows(2) {
        let len = Float::with_val(bits, &w[1] - &w[0]).to_f64();
        let mut parts = split(&w[0], &w[1], pieces_for(len, h), bits);
        if panels.is_empty() && !smooth_weight {
            // t^{2nu-1} is not smooth at 0: grade the first panel
            // geometrically and bound the sliver [0, eps] by
            // n^nu eps^{2nu} / (2nu), using |f_nu| <= 1.
            let (_, first_hi) = parts.remove(0);
            let two_nu = Float::with_val(bits, &v * 2u32);
            let mut hi = first_hi;
            let mut graded = Vec::new();
            loop {
                let lo = Float::with_val(bits, &hi / 2u32);
                graded.push((lo.clone(), hi));
                hi = lo;
                let sliver = Float::with_val(bits, (&hi).pow(&two_nu)) * &n_pow / &two_nu;
                if Float::with_val(bits, &sliver * 8u32) <= target || graded.len() > 4 * bits as usize {
                    leftover = sliver;
                    break;
                }
            }
            graded.reverse();
            graded.extend(parts);
            parts = graded;
        }
        panels.extend(parts);
    }

    let f = |t: &Float| -> Float {
        let (val, _) = series(&shifted, t, bits);
        let mut out = Float::with_val(bits, val.abs().pow(n)) * &n_pow;
        if !smooth_weight || weight_exp != 0 {
            out *= Float::with_val(bits, t.pow(&weight_exp));
        }
        out
    };
    let finite = integrate_panels(&f, &panels, bits, &half_target);

    let mut value = finite.value;
    if let TailTreatment::Summed { value: tv, .. } = &tail {
        value += tv;
    }
    let rounding = Float::with_val(bits, value.abs_ref()) >> (bits as i32 - 16);
    let quad_err = finite.err + leftover + rounding;
    let abs_err_bound = Float::with_val(bits, &quad_err + tail.error_contribution());
    let est = QuadEstimate {
        value,
        abs_err_bound,
        quad_err,
        cutoff_used: cutoff,
        pieces: panels.len(),
        tail,
        precision: *prec,
    };
    Ok(if finite.failed > 0 { Err(est) } else { Ok(est) })
}
