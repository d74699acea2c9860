use rayon::prelude::*;
use rug::Float;

use super::gauss::gauss_legendre;
use super::{BASE_ORDER, MAX_DOUBLINGS};

/// Result of integrating a vector-valued function over one panel.
#[derive(Clone, Debug)]
pub(crate) struct PanelOutcome {
    pub values: Vec<Float>,
    /// Weighted `sum_p w_p |G_2N - G_N|` for the last doubling.
    pub err: Float,
    pub converged: bool,
}

fn rule_sum<F>(f: &F, a: &Float, b: &Float, order: usize, bits: u32, width: usize) -> Vec<Float>
where
    F: Fn(&Float) -> Vec<Float>,
{
    let rule = gauss_legendre(order, bits);
    let mut acc = vec![Float::new(bits); width];
    for (x, w) in rule.mapped(a, b) {
        for (slot, v) in acc.iter_mut().zip(f(&x)) {
            *slot += Float::with_val(bits, &w * &v);
        }
    }
    acc
}

/// Doubles the Gauss order from [`BASE_ORDER`] until two successive rules
/// agree to `tol` under the weights, at most [`MAX_DOUBLINGS`] times.
pub(crate) fn integrate_panel_vec<F>(f: &F, a: &Float, b: &Float, bits: u32, tol: &Float, weights: &[Float]) -> PanelOutcome
where
    F: Fn(&Float) -> Vec<Float>,
{
    let width = weights.len();
    let mut order = BASE_ORDER;
    let mut prev = rule_sum(f, a, b, order, bits, width);
    let mut err = Float::with_val(bits, rug::float::Special::Infinity);
    for _ in 0..MAX_DOUBLINGS {
        order *= 2;
        let next = rule_sum(f, a, b, order, bits, width);
        err = Float::new(bits);
        for ((x, y), w) in next.iter().zip(&prev).zip(weights) {
            err += Float::with_val(bits, x - y).abs() * w;
        }
        prev = next;
        if err <= *tol {
            return PanelOutcome {
                values: prev,
                err,
                converged: true,
            };
        }
    }
    PanelOutcome {
        values: prev,
        err,
        converged: false,
    }
}

/// Scalar panel sum over many panels, run in parallel but always added in
/// panel order so results do not depend on scheduling.
#[derive(Clone, Debug)]
pub(crate) struct PanelsOutcome {
    pub value: Float,
    pub err: Float,
    pub failed: usize,
}

pub(crate) fn integrate_panels<F>(f: &F, panels: &[(Float, Float)], bits: u32, tol_total: &Float) -> PanelsOutcome
where
    F: Fn(&Float) -> Float + Sync,
{
    let one = [Float::with_val(bits, 1)];
    let count = panels.len().max(1) as u32;
    let tol = Float::with_val(bits, tol_total / count);
    let vf = |x: &Float| vec![f(x)];
    let outcomes: Vec<PanelOutcome> = panels
        .par_iter()
        .map(|(a, b)| integrate_panel_vec(&vf, a, b, bits, &tol, &one))
        .collect();
    let mut value = Float::new(bits);
    let mut err = Float::new(bits);
    let mut failed = 0;
    for o in outcomes {
        value += &o.values[0];
        err += &o.err;
        if !o.converged {
            failed += 1;
        }
    }
    PanelsOutcome { value, err, failed }
}

/// Splits `[a, b]` into `pieces` equal panels.
pub(crate) fn split(a: &Float, b: &Float, pieces: usize, bits: u32) -> Vec<(Float, Float)> {
    let pieces = pieces.max(1);
    let width = Float::with_val(bits, b - a) / pieces as u32;
    (0..pieces)
        .map(|i| {
            let lo = Float::with_val(bits, a + Float::with_val(bits, &width * i as u32));
            let hi = if i + 1 == pieces {
                Float::with_val(bits, b)
            } else {
                Float::with_val(bits, a + Float::with_val(bits, &width * (i + 1) as u32))
            };
            (lo, hi)
        })
        .collect()
}

/// Number of panels of width at most `h` covering a length `len`.
pub(crate) fn pieces_for(len: f64, h: f64) -> usize {
    ((len / h).ceil() as usize).max(1)
}
