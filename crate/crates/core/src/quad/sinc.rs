use rayon::prelude::*;
use rug::ops::Pow;
use rug::float::Constant;
use rug::{Float, Integer};

use super::panel::{integrate_panel_vec, integrate_panels, pieces_for, split};
use super::zeta::hurwitz_zeta;
use super::{render, render_sci, Precision, QuadEstimate, TailTreatment};
use crate::error::{Error, Result};

/// `sin t / t`, with the removable singularity filled in.
pub fn sinc_value(t: &Float) -> Float {
    let prec = t.prec();
    if t.is_zero() {
        return Float::with_val(prec, 1);
    }
    Float::with_val(prec, t.sin_ref()) / t
}

/// Most lobes integrated directly before the remainder is summed instead.
const LOBE_CAP: u32 = 24;
/// Lobes integrated directly when the remainder is summed.
const SUMMED_LOBES: u32 = 16;

/// `sqrt(n) int_0^inf |sin t / t|^n dt` to `prec.target_abs_err`.
///
/// The integral is split at the zeros `k pi`. If the envelope
/// `sqrt(n) (K pi)^{1-n} / (n-1)` of everything past `K` lobes is below
/// half the target for some `K <= 24`, that is the tail bound. Otherwise
/// the remainder past 16 lobes is expanded as
/// `sqrt(n) sum_p (-1)^p C(n+p-1, p) pi^{-n-p} mu_p zeta(n+p, 16)` with
/// `mu_p = int_0^pi sin^n s s^p ds` and summed, with a geometric bound on
/// the omitted terms.
pub fn sinc_integral(n: u32, prec: &Precision) -> Result<QuadEstimate> {
    if n < 2 {
        return Err(Error::Domain(format!("the sinc integral diverges for n = {n}; need n >= 2")));
    }
    match attempt(n, prec)? {
        Ok(est) => Ok(est),
        Err(_) => {
            let raised = prec.raised();
            match attempt(n, &raised)? {
                Ok(est) => Ok(est),
                Err(best) => Err(Error::PrecisionFailure {
                    reason: format!("sinc quadrature for n = {n} did not converge"),
                    best_estimate: render(&best.value, prec.decimal_digits),
                    best_error: render_sci(&best.abs_err_bound, 3),
                }),
            }
        }
    }
}

fn envelope(n: u32, lobes: u32, bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    let x = pi * lobes;
    let root = Float::with_val(bits, n).sqrt();
    let decay = x.pow(1i32 - n as i32);
    root * decay / (n - 1)
}

/// Panel width: a fraction of the Gaussian scale `sqrt(3/n)`, at most `pi/2`.
fn panel_width(n: u32) -> f64 {
    (1.5 * (3.0 / n as f64).sqrt()).min(std::f64::consts::FRAC_PI_2)
}

type Attempt = std::result::Result<QuadEstimate, QuadEstimate>;

fn attempt(n: u32, prec: &Precision) -> Result<Attempt> {
    let bits = prec.working_bits();
    let target = Float::with_val(bits, prec.target_abs_err);
    let half_target = Float::with_val(bits, &target / 2u32);

    let bounded_lobes = (1..=LOBE_CAP).find(|&k| envelope(n, k, bits) <= half_target);
    let lobes = bounded_lobes.unwrap_or(SUMMED_LOBES);

    let pi = Float::with_val(bits, Constant::Pi);
    let h = panel_width(n);
    let per_lobe = pieces_for(std::f64::consts::PI, h);
    let mut panels = Vec::new();
    for k in 0..lobes {
        let a = Float::with_val(bits, &pi * k);
        let b = Float::with_val(bits, &pi * (k + 1));
        panels.extend(split(&a, &b, per_lobe, bits));
    }
    let root_n = Float::with_val(bits, n).sqrt();
    let f = |t: &Float| {
        let s = sinc_value(t).abs();
        Float::with_val(bits, s.pow(n)) * &root_n
    };
    let finite = integrate_panels(&f, &panels, bits, &half_target);
    let cutoff = Float::with_val(bits, &pi * lobes);

    let mut failed = finite.failed > 0;
    let tail = match bounded_lobes {
        Some(_) => TailTreatment::Bounded {
            bound: envelope(n, lobes, bits),
        },
        None => {
            let (value, err, tail_failed) = summed_tail(n, lobes, bits, &half_target)?;
            failed |= tail_failed;
            TailTreatment::Summed {
                value,
                err,
                envelope: envelope(n, lobes, bits),
            }
        }
    };
    let mut value = finite.value;
    if let TailTreatment::Summed { value: tv, .. } = &tail {
        value += tv;
    }
    let rounding = Float::with_val(bits, value.abs_ref()) >> (bits as i32 - 16);
    let quad_err = finite.err + rounding;
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
    Ok(if failed { Err(est) } else { Ok(est) })
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Returns `(value, error bound, any panel failed)`.
fn summed_tail(n: u32, lobes: u32, bits: u32, tol: &Float) -> Result<(Float, Float, bool)> {
    let pi = Float::with_val(bits, Constant::Pi);
    let root_n = Float::with_val(bits, n).sqrt();
    let kf = Float::with_val(bits, lobes);
    let eighth = Float::with_val(bits, tol / 4u32);

    // term bound tau_p = sqrt(n) C(n+p-1,p) pi^{1-n}/(p+1) K^{-n-p} (1 + K/(n+p-1))
    let tau = |p: u32| -> Float {
        let c = Float::with_val(bits, &binomial(n + p - 1, p));
        let mut t = Float::with_val(bits, &root_n * &c);
        t *= Float::with_val(bits, (&pi).pow(1i32 - n as i32));
        t /= p + 1;
        t *= Float::with_val(bits, (&kf).pow(-((n + p) as i32)));
        t *= Float::with_val(bits, 1u32 + Float::with_val(bits, &kf / (n + p - 1)));
        t
    };
    let mut terms = 0u32;
    let trunc_err = loop {
        let rho = (n + terms) as f64 / ((terms + 2) as f64 * lobes as f64);
        if rho < 1.0 {
            let bound = tau(terms) / (1.0 - rho);
            if bound <= eighth {
                break bound;
            }
        }
        terms += 1;
        if terms > 4000 {
            return Err(Error::PrecisionFailure {
                reason: format!("sinc tail series for n = {n} needs too many terms"),
                best_estimate: String::new(),
                best_error: String::new(),
            });
        }
    };

    // Hurwitz zeta values to near working precision, relative to K^{-(n+p)}.
    let zetas: Vec<(Float, Float)> = (0..terms)
        .into_par_iter()
        .map(|p| {
            let scale = Float::with_val(bits, (&kf).pow(-((n + p) as i32)));
            let ztol = scale >> (bits as i32 - 16);
            hurwitz_zeta(n + p, lobes, bits, &ztol)
        })
        .collect::<Result<_>>()?;

    // coef_p = sqrt(n) C(n+p-1,p) pi^{-n-p} zeta(n+p, K), sign (-1)^p
    let coefs: Vec<Float> = (0..terms)
        .map(|p| {
            let c = Float::with_val(bits, &binomial(n + p - 1, p));
            let mut t = Float::with_val(bits, &root_n * &c);
            t *= Float::with_val(bits, (&pi).pow(-((n + p) as i32)));
            t *= &zetas[p as usize].0;
            t
        })
        .collect();

    // mu_p over [0, pi], all p at once
    let per = pieces_for(std::f64::consts::PI, panel_width(n));
    let zero = Float::new(bits);
    let panels = split(&zero, &pi, per, bits);
    let panel_tol = Float::with_val(bits, &eighth / panels.len() as u32);
    let vf = |s: &Float| -> Vec<Float> {
        let base = Float::with_val(bits, Float::with_val(bits, s.sin_ref()).pow(n));
        let mut out = Vec::with_capacity(terms as usize);
        let mut acc = base;
        for _ in 0..terms {
            out.push(acc.clone());
            acc *= s;
        }
        out
    };
    let outcomes: Vec<_> = panels
        .par_iter()
        .map(|(a, b)| integrate_panel_vec(&vf, a, b, bits, &panel_tol, &coefs))
        .collect();
    let mut mu = vec![Float::new(bits); terms as usize];
    let mut mu_err = Float::new(bits);
    let mut failed = false;
    for o in outcomes {
        for (slot, v) in mu.iter_mut().zip(&o.values) {
            *slot += v;
        }
        mu_err += &o.err;
        failed |= !o.converged;
    }

    let mut value = Float::new(bits);
    let mut zeta_err = Float::new(bits);
    for p in 0..terms as usize {
        let term = Float::with_val(bits, &coefs[p] * &mu[p]);
        if p % 2 == 0 {
            value += &term;
        } else {
            value -= &term;
        }
        // |coef_p mu_p| * relative zeta error
        let rel = Float::with_val(bits, &zetas[p].1 / &zetas[p].0);
        zeta_err += term.abs() * rel;
    }
    let err = trunc_err + mu_err + zeta_err;
    Ok((value, err, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(n: u32, bits: u32) -> Float {
        let pi = Float::with_val(bits, Constant::Pi);
        let root = Float::with_val(bits, n).sqrt();
        // int_0^inf (sin t/t)^n for even n = 2, 4: pi/2, pi/3
        let base = match n {
            2 => pi / 2u32,
            4 => pi / 3u32,
            _ => unreachable!(),
        };
        base * root
    }

    #[test]
    fn closed_forms_even_n() {
        let prec = Precision::digits(30).unwrap();
        for n in [2, 4] {
            let est = sinc_integral(n, &prec).unwrap();
            let truth = closed_form(n, 256);
            assert!(est.contains(&truth), "n = {n}: {est}");
            assert!(est.abs_err_bound < 1e-25, "n = {n}: {est}");
            assert_eq!(est.tail.kind(), "summed");
        }
        let est = sinc_integral(2, &prec).unwrap();
        assert!(render(&est.value, 20).starts_with("2.221441469079183123"));
    }

    #[test]
    fn odd_n_uses_the_absolute_value() {
        // Reference values from an independent arbitrary-precision quadrature
        // of |sin t/t|^n lobe by lobe. The signed cube integral would give
        // sqrt(3) 3 pi / 8 = 2.0405..., well outside the bound.
        let prec = Precision::digits(30).unwrap();
        for (n, reference) in [
            (3, "2.0930867689497938424321336535747"),
            (5, "2.106125284608084208891882698667"),
        ] {
            let est = sinc_integral(n, &prec).unwrap();
            let truth = Float::with_val(256, Float::parse(reference).unwrap());
            let diff = Float::with_val(256, &est.value - &truth).abs();
            assert!(diff < 1e-29, "n = {n}: {est}");
            assert!(est.abs_err_bound < 1e-25);
        }
    }

    #[test]
    fn large_n_uses_envelope_and_tends_to_the_gaussian_limit() {
        let prec = Precision::digits(20).unwrap();
        let est = sinc_integral(400, &prec).unwrap();
        assert_eq!(est.tail.kind(), "bounded");
        assert!(est.abs_err_bound < 1e-19);
        let limit = crate::sinc::sinc_unit_value(128).to_f64();
        let v = est.value_f64();
        // c_1 = -3/20 dominates the gap
        assert!(((v / limit - 1.0) * 400.0 + 0.15).abs() < 0.01);
    }

    #[test]
    fn deterministic() {
        let prec = Precision::digits(25).unwrap();
        let a = sinc_integral(7, &prec).unwrap();
        let b = sinc_integral(7, &prec).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.abs_err_bound, b.abs_err_bound);
    }

    #[test]
    fn rejects_n_below_two() {
        assert!(matches!(sinc_integral(1, &Precision::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn sinc_value_at_zero_and_pi() {
        assert_eq!(sinc_value(&Float::with_val(64, 0)), 1);
        let pi = Float::with_val(128, Constant::Pi);
        assert!(sinc_value(&pi).abs() < 1e-37);
    }
}
