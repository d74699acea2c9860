use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::series::{factorial, Rat};

fn table() -> &'static Mutex<Vec<Rat>> {
    static TABLE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Bernoulli number `B_k` with the `B_1 = +1/2` convention (the even ones,
/// which are all that is used here, do not depend on it).
pub fn bernoulli(k: usize) -> Rat {
    let mut guard = table().lock().unwrap();
    if guard.len() <= k {
        // Akiyama-Tanigawa, recomputed to the new length.
        let len = (k + 1).max(2 * guard.len()).max(32);
        let mut a: Vec<Rat> = Vec::with_capacity(len);
        let mut out = Vec::with_capacity(len);
        for m in 0..len {
            a.push(Rat::frac(1, m as i64 + 1));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = &diff * &Rat::from(j as u32);
            }
            out.push(a[0].clone());
        }
        *guard = out;
    }
    guard[k].clone()
}

/// `zeta(s, a) = sum_{k >= a} k^{-s}` for integers `s >= 2`, `a >= 1`, with
/// an absolute error bound.
///
/// A direct sum up to `N - 1` followed by Euler-Maclaurin at `N`; for real
/// `s` the remainder is bounded by the first omitted correction term.
pub fn hurwitz_zeta(s: u32, a: u32, bits: u32, tol: &Float) -> Result<(Float, Float)> {
    if s < 2 || a < 1 {
        return Err(Error::Domain(format!("hurwitz_zeta needs s >= 2 and a >= 1, got s={s}, a={a}")));
    }
    let mut big_n = a + s + 30;
    for _ in 0..8 {
        if let Some(out) = euler_maclaurin(s, a, big_n, bits, tol) {
            return Ok(out);
        }
        big_n *= 2;
    }
    Err(Error::PrecisionFailure {
        reason: format!("Euler-Maclaurin for zeta({s}, {a}) did not reach the tolerance"),
        best_estimate: String::new(),
        best_error: String::new(),
    })
}

fn euler_maclaurin(s: u32, a: u32, big_n: u32, bits: u32, tol: &Float) -> Option<(Float, Float)> {
    let mut sum = Float::new(bits);
    // largest terms last would be better for rounding, but at the working
    // precision used here the ordering is immaterial
    for k in a..big_n {
        sum += Float::with_val(bits, Float::with_val(bits, k).pow(s)).recip();
    }
    let n = Float::with_val(bits, big_n);
    let n_pow = Float::with_val(bits, (&n).pow(s)); // N^s
    let n_inv_s = Float::with_val(bits, n_pow.recip_ref()); // N^-s
    sum += Float::with_val(bits, &n_inv_s * &n) / (s - 1);
    sum += Float::with_val(bits, &n_inv_s / 2u32);

    let n_inv2 = Float::with_val(bits, Float::with_val(bits, &n * &n).recip());
    // scale_j = (s)_{2j-1} N^{-s-2j+1}
    let mut scale = Float::with_val(bits, &n_inv_s / &n) * s;
    let mut prev_mag: Option<Float> = None;
    for j in 1u32..400 {
        let coef = bernoulli(2 * j as usize) / Rat::from(factorial(2 * j));
        let term = Float::with_val(bits, &scale * &coef.to_float(bits));
        let mag = Float::with_val(bits, term.abs_ref());
        if mag <= *tol {
            let rounding = Float::with_val(bits, sum.abs_ref()) >> (bits as i32 - 8);
            return Some((sum, mag + rounding));
        }
        if let Some(p) = &prev_mag {
            if mag >= *p {
                return None;
            }
        }
        sum += &term;
        prev_mag = Some(mag);
        // (s)_{2j+1} = (s)_{2j-1} (s + 2j - 1)(s + 2j)
        scale *= (s + 2 * j - 1) * (s + 2 * j);
        scale *= &n_inv2;
    }
    None
}
