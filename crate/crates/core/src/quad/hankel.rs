//! Tail of the Bessel integral from Hankel's asymptotic expansion.
//!
//! For `t >= X`, `J_nu(t) = sqrt(2/(pi t)) Re[H(t) e^{i chi}]` with
//! `H(t) = sum_k a_k(nu) (i/t)^k` and `chi = t - (nu/2 + 1/4) pi`. For even
//! `n` the power `Re[.]^n` expands binomially into terms
//! `t^{-s} e^{i m t}`, each integrated over `[X, inf)` by repeated
//! integration by parts with an explicit remainder bound.

use rug::ops::Pow;
use rug::float::Constant;
use rug::{Float, Integer};

use crate::bessel::{min_cutoff, Nu};
use crate::series::{factorial, Rat};

/// `a_k(nu) = prod_{l=1}^{k} (4 nu^2 - (2l-1)^2) / (k! 8^k)`.
pub fn hankel_coefficient(nu: &Rat, k: u32) -> Rat {
    let four_nu2 = &(nu * nu) * &Rat::from(4u32);
    let mut num = Rat::one();
    for l in 1..=k {
        let odd = Rat::from(2 * l - 1);
        num *= &(&four_nu2 - &(&odd * &odd));
    }
    let den = Rat::from(factorial(k) * Integer::from(8u32).pow(k));
    &num / &den
}

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn zero(bits: u32) -> Self {
        Cx {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    fn mul(&self, o: &Cx) -> Cx {
        let bits = self.re.prec();
        let re = Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im);
        let im = Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re);
        Cx { re, im }
    }

    fn add_assign(&mut self, o: &Cx) {
        self.re += &o.re;
        self.im += &o.im;
    }

    fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    fn abs(&self) -> Float {
        let bits = self.re.prec();
        Float::with_val(bits, self.re.hypot_ref(&self.im))
    }

    fn expi(theta: &Float) -> Cx {
        let bits = theta.prec();
        Cx {
            re: Float::with_val(bits, theta.cos_ref()),
            im: Float::with_val(bits, theta.sin_ref()),
        }
    }
}

fn poly_mul(p: &[Cx], q: &[Cx], bits: u32) -> Vec<Cx> {
    let mut out = vec![Cx::zero(bits); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j].add_assign(&a.mul(b));
        }
    }
    out
}

/// Summed tail and its error bound.
#[derive(Clone, Debug)]
pub(crate) struct HankelTail {
    pub value: Float,
    pub err: Float,
}

/// Tail of `n^nu int_X^inf |f_nu(t)|^n t^{2 nu - 1} dt` for even `n`, or
/// `None` when the asymptotic series cannot reach `tol` at this `X`.
pub(crate) fn hankel_tail(nu: &Nu, n: u32, x: &Float, bits: u32, tol: &Float) -> Option<HankelTail> {
    assert!(n >= 2 && n.is_multiple_of(2), "the binomial expansion needs even n");
    let v = nu.to_float(bits);
    // beta: t^{-beta} is the algebraic decay of the integrand's envelope
    let beta = Float::with_val(bits, &v * (n as i32 - 2)) + Float::with_val(bits, n as f64 / 2.0 + 1.0);
    let pi = Float::with_val(bits, Constant::Pi);
    let g = min_cutoff(nu, bits);
    let two_over_pi = Float::with_val(bits, 2u32 / &pi);
    let mut amp = Float::with_val(bits, Float::with_val(bits, n).pow(&v));
    amp *= Float::with_val(bits, (&g).pow(n));
    amp *= Float::with_val(bits, (&two_over_pi).pow(n / 2));

    let x_pow = |e: &Float| Float::with_val(bits, x.pow(e));
    let half_tol = Float::with_val(bits, tol / 2u32);

    // choose the truncation K: even, enough terms for the first-neglected
    // term bound, and small enough error after integration
    let nu_ceil = nu.value().floor().to_u32().unwrap_or(0) + 1;
    let k_min = (2 * nu_ceil).max(2);
    let coeff = |k: u32| hankel_coefficient(nu.value(), k).to_float(bits).abs();
    let term = |k: u32| Float::with_val(bits, coeff(k) * x_pow(&Float::with_val(bits, -(k as i32))));
    let mut k = k_min + (k_min % 2);
    let mut prev_eps: Option<Float> = None;
    let trunc_err = loop {
        let eps = Float::with_val(bits, term(k) + term(k + 1));
        let mut h_max = Float::new(bits);
        for j in 0..k {
            h_max += term(j);
        }
        let lead = Float::with_val(bits, &h_max + &eps).pow(n - 1) * n;
        // int_X^inf t^{-beta} (|a_K| t^{-K} + |a_{K+1}| t^{-K-1}) dt
        let e1 = Float::with_val(bits, &beta + (k as i32 - 1));
        let e2 = Float::with_val(bits, &beta + k as i32);
        let i1 = coeff(k) * x_pow(&Float::with_val(bits, -&e1)) / e1;
        let i2 = coeff(k + 1) * x_pow(&Float::with_val(bits, -&e2)) / e2;
        let err = Float::with_val(bits, &amp * &lead) * Float::with_val(bits, i1 + i2);
        if err <= half_tol {
            break err;
        }
        if let Some(p) = &prev_eps {
            if eps >= *p {
                return None;
            }
        }
        prev_eps = Some(eps);
        k += 2;
        if k > 4000 {
            return None;
        }
    };

    // H as a polynomial in y = 1/t: coefficient a_k i^k
    let h: Vec<Cx> = (0..k)
        .map(|j| {
            let a = hankel_coefficient(nu.value(), j).to_float(bits);
            let zero = Float::new(bits);
            let (re, im) = match j % 4 {
                0 => (a, zero),
                1 => (zero, a),
                2 => (-a, zero),
                _ => (zero, -a),
            };
            Cx { re, im }
        })
        .collect();
    let hc: Vec<Cx> = h.iter().map(Cx::conj).collect();
    let mut pow_h = vec![vec![Cx {
        re: Float::with_val(bits, 1),
        im: Float::new(bits),
    }]];
    let mut pow_hc = pow_h.clone();
    for r in 1..=n as usize {
        pow_h.push(poly_mul(&pow_h[r - 1], &h, bits));
        pow_hc.push(poly_mul(&pow_hc[r - 1], &hc, bits));
    }

    let phi = Float::with_val(bits, Float::with_val(bits, &v / 2u32) + 0.25f64) * &pi;
    let mut sum = Float::new(bits);
    let mut ibp_err = Float::new(bits);
    let scale = Float::with_val(bits, &amp >> n);
    let pairs = n / 2 + 1;
    for r in (n / 2)..=n {
        let w = poly_mul(&pow_h[r as usize], &pow_hc[(n - r) as usize], bits);
        let binom = Float::with_val(bits, &Integer::from(Integer::binomial_u(n, r)));
        let m = 2 * r - n;
        if m == 0 {
            // |H|^n is real: int_X^inf t^{-s} dt = X^{1-s}/(s-1)
            for (j, c) in w.iter().enumerate() {
                let s = Float::with_val(bits, &beta + j as u32);
                let s1 = Float::with_val(bits, &s - 1u32);
                let val = x_pow(&Float::with_val(bits, -&s1)) / &s1;
                sum += Float::with_val(bits, &c.re * &val) * &binom;
            }
            continue;
        }
        let mx = Float::with_val(bits, x * m);
        let e_mx = Cx::expi(&mx);
        let rot = Cx::expi(&Float::with_val(bits, -Float::with_val(bits, &phi * m)));
        // each term's remainder enters the error as 2 binom rem |c| scale;
        // split half of the tolerance evenly over all of them
        let share = Float::with_val(bits, &binom * &scale) * (2 * pairs * w.len() as u32);
        let term_budget = Float::with_val(bits, &half_tol / &share);
        let mut inner = Cx::zero(bits);
        for (j, c) in w.iter().enumerate() {
            let s = Float::with_val(bits, &beta + j as u32);
            let c_abs = c.abs();
            let (e, rem) = ibp(&s, m, x, &e_mx, bits, &c_abs, &term_budget);
            inner.add_assign(&c.mul(&e));
            ibp_err += Float::with_val(bits, &binom * &rem) * 2u32 * &c_abs;
        }
        let rotated = rot.mul(&inner);
        sum += Float::with_val(bits, &rotated.re * &binom) * 2u32;
    }
    let value = Float::with_val(bits, &sum * &scale);
    let rounding = Float::with_val(bits, value.abs_ref()) >> (bits as i32 - 24);
    let err = trunc_err + Float::with_val(bits, &ibp_err * &scale) + rounding;
    if err > *tol {
        return None;
    }
    Some(HankelTail { value, err })
}

/// `int_X^inf t^{-s} e^{i m t} dt` by integration by parts, returning the
/// value and a bound on the omitted remainder. Terms are added until
/// `weight * remainder <= budget` or the terms stop shrinking.
fn ibp(s: &Float, m: u32, x: &Float, e_mx: &Cx, bits: u32, weight: &Float, budget: &Float) -> (Cx, Float) {
    // term_q = (s)_q X^{-s-q} / (i m)^{q+1}; magnitude mag_q, phase (-i)^{q+1}
    let mf = Float::with_val(bits, m);
    let mut mag = Float::with_val(bits, x.pow(&Float::with_val(bits, -s))) / &mf;
    let mut acc = Cx::zero(bits);
    let mut q = 0u32;
    loop {
        // remainder after q terms: (s)_q 2 X^{-s-q} / m^{q+1} = 2 mag_q
        let rem = Float::with_val(bits, &mag * 2u32);
        let next_ratio = Float::with_val(bits, s + q) / Float::with_val(bits, x * &mf);
        if Float::with_val(bits, &rem * weight) <= *budget || next_ratio >= 1 || q > 2000 {
            let value = e_mx.mul(&acc);
            return (
                Cx {
                    re: -value.re,
                    im: -value.im,
                },
                rem,
            );
        }
        match q % 4 {
            // (-i)^{q+1}: q=0 -> -i, 1 -> -1, 2 -> i, 3 -> 1
            0 => acc.im -= &mag,
            1 => acc.re -= &mag,
            2 => acc.im += &mag,
            _ => acc.re += &mag,
        }
        mag *= next_ratio;
        q += 1;
    }
}
