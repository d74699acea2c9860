//! Asymptotic expansion of `sqrt(n) * int_0^inf |sin t / t|^n dt`.
//!
//! On `(0, sqrt 6)` the sinc function is squeezed between consecutive
//! Maclaurin partial sums, so the integral reduces to `int T_k(t)^n`. After
//! `t -> t/sqrt(n)` the integrand factors as `e^{-t^2/6}` times
//! `[e^{t^2/(6n)} T_k(t/sqrt n)]^n = [1 + sum_{j>=2} a_j t^{2j}/n^j]^n`;
//! collecting that power by `1/n` and integrating each `t^{2j}` against the
//! Gaussian (moment `3^j (2j-1)!! sqrt(3 pi / 2)`) gives the coefficients.

use rug::ops::Pow;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::series::{double_factorial, factorial, nseries_pow_binomial, EvenPoly, InvNSeries, Rat};

/// Symbolic unit every sinc coefficient is expressed in.
pub const SINC_UNIT: &str = "sqrt(3*pi/2)";

/// Exact coefficients `c_0..c_m` of `I(n) ~ sqrt(3 pi/2) * sum_j c_j / n^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SincExpansion {
    pub m: u32,
    pub k: u32,
    pub coeffs: Vec<Rat>,
}

impl SincExpansion {
    pub fn unit(&self) -> &'static str {
        SINC_UNIT
    }

    /// `c_j * sqrt(3 pi / 2)` at `prec` bits.
    pub fn decimal(&self, j: usize, prec: u32) -> Float {
        self.coeffs[j].to_float(prec) * sinc_unit_value(prec)
    }

    /// Partial sum `sum_{j<=upto} c_j n^{-j}` in units of the sinc unit.
    pub fn partial_sum(&self, n: &Float, upto: u32) -> Float {
        partial_sum(&self.coeffs, n, upto)
    }
}

pub(crate) fn partial_sum(coeffs: &[Rat], n: &Float, upto: u32) -> Float {
    let prec = n.prec();
    let mut acc = Float::with_val(prec, 0);
    for c in coeffs.iter().take(upto as usize + 1).rev() {
        acc /= n;
        acc += c.to_float(prec);
    }
    acc
}

/// `sqrt(3 pi / 2)` at `prec` bits.
pub fn sinc_unit_value(prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    (pi * 3u32 / 2u32).sqrt()
}

/// Maclaurin partial sum `T_k(t) = sum_{j<=k} (-1)^j t^{2j} / (2j+1)!`.
pub fn sinc_partial_sum(k: u32) -> EvenPoly {
    EvenPoly::from_half_terms((0..=k).map(|j| {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        (j, Rat::new(sign, factorial(2 * j + 1)).unwrap())
    }))
}

/// Coefficient of `t^{2j}` in `e^{t^2/6} T_k(t)`.
///
/// The sinc factor contributes its `t^{2(j-i)}` term only while `j - i <= k`.
/// For `j <= k` this is the full sum over `i = 0..=j`.
pub fn sinc_aj(j: u32, k: u32) -> Rat {
    let lowest_exp_index = j.saturating_sub(k);
    (lowest_exp_index..=j)
        .map(|i| {
            let sinc_index = j - i;
            let sign = if sinc_index.is_multiple_of(2) { 1 } else { -1 };
            let exp_part = Rat::new(1, factorial(i) * rug::Integer::from(6).pow(i)).unwrap();
            let sinc_part = Rat::new(sign, factorial(2 * sinc_index + 1)).unwrap();
            exp_part * sinc_part
        })
        .sum()
}

/// Gaussian moment ratio `3^e (2e-1)!!`.
pub fn sinc_moment(e: u32) -> Rat {
    Rat::from(rug::Integer::from(3).pow(e)) * double_factorial(e)
}

/// `[e^{t^2/(6n)} T_k(t/sqrt n)]^n` collected through `n^{-m}`.
pub fn sinc_collected(m: u32, k: u32) -> Result<InvNSeries> {
    if k <= m {
        return Err(Error::TruncationTooShort { m, k });
    }
    let a: Vec<Rat> = (2..=2 * m.max(1)).map(|j| sinc_aj(j, k)).collect();
    nseries_pow_binomial(&a, m)
}

/// Exact coefficients through `n^{-m}` from the partial sum `T_k`, `k > m`.
pub fn sinc_expansion(m: u32, k: u32) -> Result<SincExpansion> {
    let rows = sinc_collected(m, k)?;
    Ok(SincExpansion {
        m,
        k,
        coeffs: rows.integrate_rows(sinc_moment),
    })
}

/// [`sinc_expansion`] with the smallest admissible `k = m + 1`.
pub fn sinc_expansion_default(m: u32) -> Result<SincExpansion> {
    sinc_expansion(m, m + 1)
}

/// The order-7 collected polynomial built from `T_8`.
pub fn appendix_table() -> InvNSeries {
    sinc_collected(7, 8).expect("k = 8 exceeds m = 7")
}

/// Bound on `sqrt(n) int_{sqrt 6}^inf |sin t/t|^n dt`.
#[derive(Clone, Debug)]
pub struct TailBoundSinc {
    pub n: u32,
    pub bound: Float,
}

/// `sqrt(6n) 6^{-n/2} / (n - 1)`, from `|sin t / t| <= 1/t`.
pub fn sinc_tail_bound(n: u32, prec: u32) -> Result<TailBoundSinc> {
    if n < 2 {
        return Err(Error::Domain(format!("sinc tail bound needs n >= 2, got {n}")));
    }
    let six = Float::with_val(prec, 6);
    let root = Float::with_val(prec, 6 * n as u64).sqrt();
    let decay = six.pow(-(n as f64) / 2.0);
    let bound = root * decay / (n - 1);
    Ok(TailBoundSinc { n, bound })
}

/// One sample of [`bracketing_check`].
#[derive(Clone, Debug)]
pub struct BracketSample {
    pub t: Float,
    pub lower: Float,
    pub sinc: Float,
    pub upper: Float,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct BracketReport {
    pub k: u32,
    pub samples: Vec<BracketSample>,
}

impl BracketReport {
    pub fn all_hold(&self) -> bool {
        self.samples.iter().all(|s| s.holds)
    }
}

/// Checks `0 <= T_k(t) <= sin t / t <= T_{k+1}(t)` for odd `k` at each sample.
pub fn bracketing_check(k: u32, samples: &[Float]) -> Result<BracketReport> {
    if k.is_multiple_of(2) {
        return Err(Error::Domain(format!("bracketing needs odd k, got {k}")));
    }
    let lower_poly = sinc_partial_sum(k);
    let upper_poly = sinc_partial_sum(k + 1);
    let mut out = Vec::with_capacity(samples.len());
    for t in samples {
        let prec = t.prec().max(64);
        let t = Float::with_val(prec, t);
        let six = Float::with_val(prec, 6).sqrt();
        if t <= 0 || t >= six {
            return Err(Error::Domain(format!(
                "bracketing sample {} outside (0, sqrt 6)",
                t.to_f64()
            )));
        }
        let lower = lower_poly.eval_float(&t);
        let upper = upper_poly.eval_float(&t);
        let sinc = crate::quad::sinc_value(&t);
        let holds = lower >= 0 && lower <= sinc && sinc <= upper;
        out.push(BracketSample {
            t,
            lower,
            sinc,
            upper,
            holds,
        });
    }
    Ok(BracketReport { k, samples: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sums() {
        assert_eq!(sinc_partial_sum(0), EvenPoly::one());
        assert_eq!(
            sinc_partial_sum(1),
            EvenPoly::one().add(&EvenPoly::monomial(2, Rat::frac(-1, 6)))
        );
        assert_eq!(
            sinc_partial_sum(2),
            sinc_partial_sum(1).add(&EvenPoly::monomial(4, Rat::frac(1, 120)))
        );
    }

    #[test]
    fn low_order_a_coefficients() {
        for k in 1..6 {
            assert_eq!(sinc_aj(0, k), Rat::one());
            assert_eq!(sinc_aj(1, k), Rat::zero());
        }
        assert_eq!(sinc_aj(2, 2), Rat::frac(-1, 180));
        assert_eq!(sinc_aj(3, 3), Rat::frac(-1, 2835));
        assert_eq!(sinc_aj(4, 4), Rat::frac(-1, 90720));
    }

    // Independent oracle: multiply the exp and sinc series as EvenPolys.
    #[test]
    fn a_coefficients_match_series_product() {
        let deg = 24;
        let exp_series = EvenPoly::from_half_terms(
            (0..=deg / 2).map(|i| (i, Rat::new(1, factorial(i) * rug::Integer::from(6).pow(i)).unwrap())),
        );
        for k in [1, 3, 5, 8] {
            let product = exp_series.mul_trunc(&sinc_partial_sum(k), deg);
            for j in 0..=deg / 2 {
                assert_eq!(sinc_aj(j, k), product.half_coeff(j), "j={j} k={k}");
            }
        }
    }

    #[test]
    fn hand_derived_first_coefficients() {
        // c1 = a2 * 3^2 * 3!!, c2 = a3 * 3^3 * 5!! + a2^2/2 * 3^4 * 7!!
        let a2 = Rat::frac(-1, 180);
        let a3 = Rat::frac(-1, 2835);
        let c1 = &a2 * &Rat::from(9u32 * 3);
        let c2 = &a3 * &Rat::from(27u32 * 15) + &(&a2 * &a2) * &Rat::frac(81 * 105, 2);
        assert_eq!(c1, Rat::frac(-3, 20));
        assert_eq!(&a3 * &Rat::from(27u32 * 15), Rat::frac(-1, 7));
        assert_eq!(c2, Rat::frac(-13, 1120));
    }

    #[test]
    fn expansion_low_orders() {
        assert_eq!(sinc_expansion_default(0).unwrap().coeffs, vec![Rat::one()]);
        assert_eq!(
            sinc_expansion_default(2).unwrap().coeffs,
            vec![Rat::one(), Rat::frac(-3, 20), Rat::frac(-13, 1120)]
        );
        let c = sinc_expansion_default(4).unwrap().coeffs;
        assert_eq!(c[3], Rat::frac(27, 3200));
        assert_eq!(c[4], Rat::frac(52791, 3942400));
    }

    #[test]
    fn stable_in_k() {
        for m in 0..=5 {
            let base = sinc_expansion(m, m + 1).unwrap();
            for k in m + 2..=m + 4 {
                assert_eq!(sinc_expansion(m, k).unwrap().coeffs, base.coeffs, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn short_truncation_rejected() {
        assert_eq!(
            sinc_expansion(3, 3),
            Err(Error::TruncationTooShort { m: 3, k: 3 })
        );
    }

    #[test]
    fn appendix_rows() {
        let table = appendix_table();
        assert_eq!(table.order(), 7);
        assert_eq!(table.row(1), EvenPoly::monomial(4, Rat::frac(-1, 180)));
        assert_eq!(table.coeff(3, 12), Rat::frac(-1, 34992000));
        assert_eq!(table.coeff(5, 12), Rat::frac(-691, 3831077250));
    }

    #[test]
    fn tail_bounds() {
        let b2 = sinc_tail_bound(2, 128).unwrap().bound.to_f64();
        assert!((b2 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let b10 = sinc_tail_bound(10, 128).unwrap().bound.to_f64();
        let direct = 60f64.sqrt() * 6f64.powi(-5) / 9.0;
        assert!((b10 - direct).abs() < 1e-18);
        assert!((b10 - 1.1068e-4).abs() < 1e-8);
        assert!(sinc_tail_bound(50, 128).unwrap().bound < 1e-18);
        let mut prev = b2;
        for n in 3..60 {
            let b = sinc_tail_bound(n, 128).unwrap().bound.to_f64();
            assert!(b > 0.0 && b < prev);
            prev = b;
        }
        assert!(sinc_tail_bound(1, 128).is_err());
    }

    #[test]
    fn bracketing() {
        let one = Float::with_val(128, 1);
        let r = bracketing_check(1, &[one]).unwrap();
        let s = &r.samples[0];
        assert!((s.lower.to_f64() - 5.0 / 6.0).abs() < 1e-15);
        assert!((s.upper.to_f64() - 101.0 / 120.0).abs() < 1e-15);
        assert!((s.sinc.to_f64() - 0.8414709848078965).abs() < 1e-15);
        assert!(r.all_hold());

        let near_zero = Float::with_val(128, 1e-9);
        let r = bracketing_check(1, &[near_zero]).unwrap();
        let s = &r.samples[0];
        assert!((s.lower.to_f64() - 1.0).abs() < 1e-15 && (s.upper.to_f64() - 1.0).abs() < 1e-15);

        let grid: Vec<Float> = (1..60).map(|i| Float::with_val(128, i as f64 * 0.04)).collect();
        for k in [1, 3, 5, 7] {
            assert!(bracketing_check(k, &grid).unwrap().all_hold(), "k={k}");
        }
        assert!(bracketing_check(3, &[Float::with_val(128, 2)]).unwrap().all_hold());
    }

    #[test]
    fn bracketing_domain() {
        assert!(bracketing_check(2, &[Float::with_val(64, 1)]).is_err());
        assert!(bracketing_check(1, &[Float::with_val(64, 0)]).is_err());
        assert!(bracketing_check(1, &[Float::with_val(64, 2.5)]).is_err());
    }
}
