//! Asymptotic expansion of
//! `I_nu(n) = n^nu int_0^inf |f_nu(t)|^n t^{2 nu - 1} dt`,
//! with `f_nu(t) = 2^nu Gamma(nu + 1) J_nu(t) / t^nu`, for rational `nu >= 1/2`.
//!
//! The pipeline mirrors the sinc one with the Gaussian weight
//! `exp(-t^2 / (4(nu+1)))` and the variable `u = t^2/4`. Every quantity is a
//! rational function of `nu` except the leading constant
//! `c_0 = 4^nu/2 (nu+1)^nu Gamma(nu)`, so the coefficients are reported as
//! exact ratios `gamma_j = c_j / c_0`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::float::Constant;
use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{factorial, nseries_pow_binomial, rising_factorial, EvenPoly, InvNSeries, Rat};

/// Landau's uniform constant in `|J_nu(t)| <= c t^{-1/3}`.
pub const LANDAU_C: &str = "0.7857468704";

/// Bessel order, restricted to rationals `>= 1/2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct Nu(Rat);

impl Nu {
    pub fn new(value: Rat) -> Result<Self> {
        if value < Rat::frac(1, 2) {
            return Err(Error::Domain(format!("nu = {value} is below 1/2")));
        }
        Ok(Nu(value))
    }

    pub fn half() -> Self {
        Nu(Rat::frac(1, 2))
    }

    pub fn integer(n: u32) -> Result<Self> {
        Nu::new(Rat::from(n))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    /// The order as a positive integer, when it is one.
    pub fn as_integer(&self) -> Option<u32> {
        if self.0.is_integer() {
            self.0.numer().to_u32()
        } else {
            None
        }
    }

    /// True for `nu = p + 1/2`.
    pub fn is_half_integer(&self) -> bool {
        *self.0.denom() == 2
    }

    pub fn to_float(&self, prec: u32) -> Float {
        self.0.to_float(prec)
    }
}

impl From<Nu> for String {
    fn from(nu: Nu) -> String {
        nu.to_string()
    }
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nu({})", self.0)
    }
}

impl FromStr for Nu {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Nu::new(s.parse()?)
    }
}

/// Maclaurin partial sum of `f_nu`:
/// `sum_{j<=k} (-t^2/4)^j / (j! (nu+1)_j)`.
pub fn bessel_partial_sum(nu: &Nu, k: u32) -> EvenPoly {
    let shifted = nu.value() + &Rat::one();
    EvenPoly::from_half_terms((0..=k).map(|j| {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let denom = Rat::from(factorial(j) * Integer::from(4).pow(j)) * rising_factorial(&shifted, j);
        (j, &Rat::from(sign as i64) / &denom)
    }))
}

/// Coefficient of `(t^2/(4n))^j` in `exp(t^2/(4n(nu+1))) T_k(t/sqrt n)`:
/// `sum_{i<=min(j,k)} (-1)^i / (i! (nu+1)_i (nu+1)^{j-i} (j-i)!)`.
pub fn bessel_aj(nu: &Nu, j: u32, k: u32) -> Rat {
    let shifted = nu.value() + &Rat::one();
    (0..=j.min(k))
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let denom = Rat::from(factorial(i) * factorial(j - i))
                * rising_factorial(&shifted, i)
                * shifted.pow((j - i) as i32).unwrap();
            &Rat::from(sign as i64) / &denom
        })
        .sum()
}

/// `M_j / M_0` for `M_j = int_0^inf exp(-t^2/(4(nu+1))) t^{2j} t^{2nu-1} dt`,
/// which is `(4(nu+1))^j (nu)_j`.
pub fn bessel_moment_ratio(nu: &Nu, j: u32) -> Rat {
    let scale = (&Rat::from(4u32) * &(nu.value() + &Rat::one())).pow(j as i32).unwrap();
    scale * rising_factorial(nu.value(), j)
}

/// Ratio of the `u^j = (t^2/4)^j` moment to `M_0`: `(nu+1)^j (nu)_j`.
fn u_moment_ratio(nu: &Nu, j: u32) -> Rat {
    let shifted = nu.value() + &Rat::one();
    shifted.pow(j as i32).unwrap() * rising_factorial(nu.value(), j)
}

/// Expansion `I_nu(n) ~ c_0 (gamma_0 + gamma_1/n + ... + gamma_m/n^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselExpansion {
    pub nu: Nu,
    pub m: u32,
    pub k: u32,
    pub gammas: Vec<Rat>,
}

/// `c_0 = 4^nu/2 * (nu+1)^nu * Gamma(nu)`, kept symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C0Descriptor {
    pub four_pow_nu_over_two: String,
    pub shifted_pow_nu: String,
    pub gamma_nu: String,
}

impl BesselExpansion {
    pub fn c0_descriptor(&self) -> C0Descriptor {
        let nu = self.nu.to_string();
        C0Descriptor {
            four_pow_nu_over_two: format!("4^({nu})/2"),
            shifted_pow_nu: format!("({nu}+1)^({nu})"),
            gamma_nu: format!("Gamma({nu})"),
        }
    }

    /// `c_0` at `prec` bits.
    pub fn c0(&self, prec: u32) -> Float {
        c0_float(&self.nu, prec)
    }

    /// `gamma_j * c_0` at `prec` bits.
    pub fn decimal(&self, j: usize, prec: u32) -> Float {
        self.gammas[j].to_float(prec) * c0_float(&self.nu, prec)
    }

    pub fn partial_sum(&self, n: &Float, upto: u32) -> Float {
        crate::sinc::partial_sum(&self.gammas, n, upto)
    }
}

/// `[exp(t^2/(4n(nu+1))) T_k(t/sqrt n)]^n` collected by `1/n`, as
/// polynomials in `s` with `s^2 = u = t^2/4`.
pub fn bessel_collected(nu: &Nu, m: u32, k: u32) -> Result<InvNSeries> {
    if k <= m {
        return Err(Error::TruncationTooShort { m, k });
    }
    let a: Vec<Rat> = (2..=2 * m.max(1)).map(|j| bessel_aj(nu, j, k)).collect();
    nseries_pow_binomial(&a, m)
}

pub fn bessel_expansion(nu: &Nu, m: u32, k: u32) -> Result<BesselExpansion> {
    let rows = bessel_collected(nu, m, k)?;
    Ok(BesselExpansion {
        nu: nu.clone(),
        m,
        k,
        gammas: rows.integrate_rows(|e| u_moment_ratio(nu, e)),
    })
}

pub fn bessel_expansion_default(nu: &Nu, m: u32) -> Result<BesselExpansion> {
    bessel_expansion(nu, m, m + 1)
}

/// Exact `c_0` when `nu` is a positive integer: `2^{2nu-1} (nu+1)^nu (nu-1)!`.
pub fn c0_exact(nu: &Nu) -> Option<Rat> {
    let v = nu.as_integer()?;
    let pow4 = Integer::from(1) << (2 * v - 1);
    let shifted = Integer::from(v + 1).pow(v);
    Some(Rat::from(pow4 * shifted * factorial(v - 1)))
}

/// `Gamma(nu)` at `prec` bits, using the exact recurrences for integer and
/// half-integer orders.
pub fn gamma_of_nu(nu: &Nu, prec: u32) -> Float {
    if let Some(v) = nu.as_integer() {
        return Float::with_val(prec, factorial(v - 1));
    }
    if nu.is_half_integer() {
        // Gamma(p + 1/2) = sqrt(pi) * (1/2)(3/2)...(p - 1/2)
        let p = nu.value().floor().to_u32().expect("small order");
        let ratio = rising_factorial(&Rat::frac(1, 2), p);
        let root_pi = Float::with_val(prec, Constant::Pi).sqrt();
        return root_pi * ratio.to_float(prec);
    }
    Float::with_val(prec, nu.value().as_rational()).gamma()
}

/// `c_0` at `prec` bits; exact integer when `nu` is a positive integer.
pub fn c0_float(nu: &Nu, prec: u32) -> Float {
    if let Some(exact) = c0_exact(nu) {
        return exact.to_float(prec);
    }
    let work = prec + 32;
    let v = nu.to_float(work);
    let four_pow = Float::with_val(work, 4).pow(&v) / 2u32;
    let shifted = Float::with_val(work, &v + 1u32).pow(&v);
    Float::with_val(prec, four_pow * shifted * gamma_of_nu(nu, work))
}

/// `c_0` rendered with `digits` significant decimal digits.
pub fn c0_value(nu: &Nu, digits: u32) -> Result<String> {
    if digits == 0 {
        return Err(Error::Domain("precision must be at least one digit".into()));
    }
    if let Some(exact) = c0_exact(nu) {
        return Ok(exact.to_string());
    }
    let prec = crate::quad::digits_to_bits(digits + 10);
    Ok(crate::quad::render(&c0_float(nu, prec), digits))
}

/// `I_nu(2) = 2^{3nu-1} nu! (nu-1)!` for positive integer `nu`.
pub fn i_nu_at_2(nu: &Nu) -> Result<Rat> {
    let v = nu
        .as_integer()
        .ok_or_else(|| Error::Unsupported(format!("I_nu(2) closed form needs integer nu, got {nu}")))?;
    let value = Rat::from((Integer::from(1) << (3 * v - 1)) * factorial(v) * factorial(v - 1));
    debug_assert!(v == 1 || value < c0_exact(nu).expect("integer nu"));
    Ok(value)
}

/// Bound on the part of `I_nu(n)` beyond a cutoff.
#[derive(Clone, Debug)]
pub struct TailBoundBessel {
    pub nu: Nu,
    pub n: u32,
    pub cutoff: Float,
    pub bound: Float,
}

/// Smallest admissible cutoff `2^nu Gamma(nu + 1)`.
pub fn min_cutoff(nu: &Nu, prec: u32) -> Float {
    let v = nu.to_float(prec);
    let two_pow = Float::with_val(prec, 2).pow(&v);
    two_pow * gamma_of_nu(nu, prec) * v
}

/// `n^nu (2^nu Gamma(nu+1) c)^n X^{-(nu+1/3)n + 2nu} / ((nu+1/3)n - 2nu)`,
/// the integral of Landau's envelope over `[X, inf)`.
pub fn bessel_tail_bound(nu: &Nu, n: u32, cutoff: &Float) -> Result<TailBoundBessel> {
    let prec = cutoff.prec().max(64);
    let floor = min_cutoff(nu, prec);
    // allow for rounding in the caller's computation of the minimum cutoff
    let slack = Float::with_val(prec, &floor * Float::with_val(prec, 1e-12));
    if *cutoff < Float::with_val(prec, &floor - &slack) {
        return Err(Error::Domain(format!(
            "cutoff {} is below 2^nu Gamma(nu+1) = {}",
            cutoff.to_f64(),
            floor.to_f64()
        )));
    }
    let v = nu.to_float(prec);
    let third = Float::with_val(prec, 1) / 3u32;
    let decay = Float::with_val(prec, &v + &third) * n;
    let two_nu = Float::with_val(prec, &v * 2u32);
    let denom = Float::with_val(prec, &decay - &two_nu);
    if denom <= 0 {
        return Err(Error::Domain(format!("(nu + 1/3) n <= 2 nu for n = {n}")));
    }
    let c = Float::with_val(prec, Float::parse(LANDAU_C).unwrap());
    let base = floor * c;
    let n_pow = Float::with_val(prec, n).pow(&v);
    let x_pow = Float::with_val(prec, cutoff).pow(Float::with_val(prec, &two_nu - &decay));
    let bound = n_pow * base.pow(n) * x_pow / denom;
    Ok(TailBoundBessel {
        nu: nu.clone(),
        n,
        cutoff: cutoff.clone(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sinc::{sinc_expansion_default, sinc_partial_sum};

    fn nu(s: &str) -> Nu {
        s.parse().unwrap()
    }

    fn samples() -> Vec<Nu> {
        ["1/2", "1", "3/2", "2", "5/2", "3", "7/3", "11/4"].iter().map(|s| nu(s)).collect()
    }

    #[test]
    fn order_validation() {
        assert!("1/3".parse::<Nu>().is_err());
        assert!("1/2".parse::<Nu>().is_ok());
        assert_eq!(nu("2").as_integer(), Some(2));
        assert!(nu("5/2").is_half_integer());
    }

    #[test]
    fn partial_sums() {
        assert_eq!(
            bessel_partial_sum(&nu("1"), 1),
            EvenPoly::one().add(&EvenPoly::monomial(2, Rat::frac(-1, 8)))
        );
        for v in samples() {
            assert_eq!(bessel_partial_sum(&v, 0), EvenPoly::one());
        }
        for k in 0..6 {
            assert_eq!(bessel_partial_sum(&Nu::half(), k), sinc_partial_sum(k));
        }
    }

    #[test]
    fn a_coefficients_closed_forms() {
        for v in samples() {
            let x = v.value();
            let one = Rat::one();
            let p = |c: i64| x + &Rat::from(c);
            assert_eq!(bessel_aj(&v, 0, 3), one);
            assert!(bessel_aj(&v, 1, 3).is_zero());
            let a2 = &Rat::from(-1i64) / &(Rat::from(2i64) * p(1).pow(2).unwrap() * p(2));
            let a3 = &Rat::from(-2i64) / &(Rat::from(3i64) * p(1).pow(3).unwrap() * p(2) * p(3));
            let a4 = &p(-5) / &(Rat::from(8i64) * p(1).pow(4).unwrap() * p(2) * p(3) * p(4));
            assert_eq!(bessel_aj(&v, 2, 3), a2, "a2 at {v}");
            assert_eq!(bessel_aj(&v, 3, 4), a3, "a3 at {v}");
            assert_eq!(bessel_aj(&v, 4, 5), a4, "a4 at {v}");
        }
        assert_eq!(bessel_aj(&nu("1"), 2, 3), Rat::frac(-1, 24));
        assert_eq!(bessel_aj(&nu("1"), 3, 4), Rat::frac(-1, 144));
        assert_eq!(bessel_aj(&nu("1"), 4, 5), Rat::frac(-1, 1920));
    }

    #[test]
    fn moment_ratios() {
        assert_eq!(bessel_moment_ratio(&nu("1"), 0), Rat::one());
        assert_eq!(bessel_moment_ratio(&nu("1"), 2), Rat::from(128u32));
        assert_eq!(bessel_moment_ratio(&Nu::half(), 1), Rat::from(3u32));
    }

    #[test]
    fn gamma_closed_forms() {
        for v in samples() {
            let x = v.value();
            let p = |c: i64| x + &Rat::from(c);
            let g = bessel_expansion_default(&v, 3).unwrap().gammas;
            assert_eq!(g[0], Rat::one());
            let g1 = -(x * &p(1)) / (Rat::from(2i64) * p(2));
            let g2 = x * &p(1) * (Rat::from(3i64) * x * x + Rat::from(2i64) * x.clone() - Rat::from(5i64))
                / (Rat::from(24i64) * p(2) * p(3));
            let cubic = x * x * x.clone() - x * x - Rat::from(4i64) * x.clone() - Rat::from(8i64);
            let g3 = -(x * &p(1).pow(2).unwrap()) * cubic
                / (Rat::from(48i64) * p(2).pow(2).unwrap() * p(4));
            assert_eq!(g[1], g1, "gamma1 at {v}");
            assert_eq!(g[2], g2, "gamma2 at {v}");
            assert_eq!(g[3], g3, "gamma3 at {v}");
        }
    }

    #[test]
    fn reduces_to_sinc_at_half() {
        for m in 0..=4 {
            assert_eq!(
                bessel_expansion_default(&Nu::half(), m).unwrap().gammas,
                sinc_expansion_default(m).unwrap().coeffs
            );
        }
    }

    #[test]
    fn gamma_denominators_stay_small_at_integer_orders() {
        for v in 1..=4u32 {
            let g = bessel_expansion_default(&Nu::integer(v).unwrap(), 5).unwrap().gammas;
            for (j, c) in g.iter().enumerate() {
                assert!(c.denom().significant_bits() < 96, "nu={v} j={j}: {c}");
            }
        }
    }

    #[test]
    fn leading_constant() {
        assert_eq!(c0_exact(&nu("1")), Some(Rat::from(4u32)));
        assert_eq!(c0_exact(&nu("2")), Some(Rat::from(72u32)));
        assert_eq!(c0_value(&nu("1"), 10).unwrap(), "4");
        let half = c0_float(&Nu::half(), 200);
        let unit = crate::sinc::sinc_unit_value(200);
        assert!(Float::with_val(200, &half - &unit).abs() < 1e-55);
        assert!(c0_value(&Nu::half(), 12).unwrap().starts_with("2.17080"));
        // generic rational order goes through the Gamma function
        let g = gamma_of_nu(&nu("7/3"), 128).to_f64();
        assert!((g - 1.190639348758999).abs() < 1e-14);
        assert!(c0_value(&nu("1"), 0).is_err());
    }

    #[test]
    fn value_at_two() {
        assert_eq!(i_nu_at_2(&nu("1")).unwrap(), Rat::from(4u32));
        assert_eq!(i_nu_at_2(&nu("2")).unwrap(), Rat::from(64u32));
        assert_eq!(i_nu_at_2(&nu("3")).unwrap(), Rat::from(3072u32));
        for v in 2..8u32 {
            let nu = Nu::integer(v).unwrap();
            assert!(i_nu_at_2(&nu).unwrap() < c0_exact(&nu).unwrap());
        }
        assert!(matches!(i_nu_at_2(&Nu::half()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn landau_tail() {
        let one = nu("1");
        let x = Float::with_val(128, 2);
        let c = 0.7857468704f64;
        let b = bessel_tail_bound(&one, 6, &x).unwrap().bound.to_f64();
        assert!((b - c.powi(6)).abs() < 1e-12, "{b}");
        assert!((b - 0.23534).abs() < 1e-5);

        // geometric decay in n with ratio c / 2^{1/3}
        let r = bessel_tail_bound(&one, 401, &x).unwrap().bound
            / bessel_tail_bound(&one, 400, &x).unwrap().bound;
        assert!((r.to_f64() - c / 2f64.cbrt()).abs() < 2e-3);

        // doubling X scales by 2^{-(nu+1/3)n + 2nu}
        for v in [nu("1/2"), nu("1"), nu("5/2")] {
            let x0 = Float::with_val(128, 2) * min_cutoff(&v, 128);
            let x1 = Float::with_val(128, &x0 * 2u32);
            let n = 7;
            let ratio = bessel_tail_bound(&v, n, &x1).unwrap().bound / bessel_tail_bound(&v, n, &x0).unwrap().bound;
            let vf = v.value().to_f64();
            let expected = 2f64.powf(-(vf + 1.0 / 3.0) * n as f64 + 2.0 * vf);
            assert!((ratio.to_f64() / expected - 1.0).abs() < 1e-12);
        }
        assert!(bessel_tail_bound(&one, 6, &Float::with_val(64, 1.5)).is_err());
    }

    #[test]
    fn landau_tail_monotone_in_cutoff() {
        let v = nu("3/2");
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let x = Float::with_val(128, min_cutoff(&v, 128) + Float::with_val(128, i as f64 * 0.5));
            let b = bessel_tail_bound(&v, 9, &x).unwrap().bound.to_f64();
            assert!(b < prev);
            prev = b;
        }
    }
}
