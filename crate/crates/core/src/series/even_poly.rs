use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use super::rat::Rat;

/// Polynomial in `t` with only even powers and exact coefficients.
///
/// Stored sparsely by half-exponent (`t^{2e}` lives under key `e`); zero
/// coefficients are never stored, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EvenPoly {
    coeffs: BTreeMap<u32, Rat>,
}

impl EvenPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(0, c);
        p
    }

    /// `c t^exponent`; `exponent` must be even.
    pub fn monomial(exponent: u32, c: Rat) -> Self {
        assert!(exponent.is_multiple_of(2), "odd exponent {exponent} in EvenPoly");
        let mut p = Self::zero();
        p.add_term(exponent / 2, c);
        p
    }

    /// Builds from `(half_exponent, coefficient)` pairs, merging duplicates.
    pub fn from_half_terms<I: IntoIterator<Item = (u32, Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c t^{2e}` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, half_exp: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(half_exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `t`; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().map_or(0, |e| 2 * e)
    }

    /// Coefficient of `t^exponent` (zero for odd or absent exponents).
    pub fn coeff(&self, exponent: u32) -> Rat {
        if exponent % 2 == 1 {
            return Rat::zero();
        }
        self.half_coeff(exponent / 2)
    }

    /// Coefficient of `t^{2e}`.
    pub fn half_coeff(&self, e: u32) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterates `(t exponent, coefficient)` in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rat)> + '_ {
        self.coeffs.iter().map(|(e, c)| (2 * e, c))
    }

    /// Iterates `(half exponent, coefficient)`.
    pub fn half_terms(&self) -> impl Iterator<Item = (u32, &Rat)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &EvenPoly) -> EvenPoly {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &EvenPoly) -> EvenPoly {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> EvenPoly {
        if k.is_zero() {
            return EvenPoly::zero();
        }
        EvenPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Drops every term of degree above `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> EvenPoly {
        let max_half = max_deg / 2;
        EvenPoly {
            coeffs: self.coeffs.range(..=max_half).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Product with every term of degree above `max_deg` discarded.
    pub fn mul_trunc(&self, other: &EvenPoly, max_deg: u32) -> EvenPoly {
        let max_half = max_deg / 2;
        let mut out = EvenPoly::zero();
        for (ea, ca) in self.coeffs.range(..=max_half) {
            for (eb, cb) in other.coeffs.range(..=max_half - ea) {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// `self^exp` truncated at `max_deg`, by repeated squaring.
    pub fn pow_trunc(&self, mut exp: u32, max_deg: u32) -> EvenPoly {
        let mut base = self.truncate(max_deg);
        let mut acc = EvenPoly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_trunc(&base, max_deg);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_trunc(&base, max_deg);
            }
        }
        acc
    }

    /// Exact value at `t^2 = t_sq`.
    pub fn eval_t_squared(&self, t_sq: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut last = 0u32;
        let mut power = Rat::one();
        for (e, c) in &self.coeffs {
            power *= &t_sq.pow((e - last) as i32).expect("nonnegative exponent");
            last = *e;
            acc += &(c * &power);
        }
        acc
    }

    /// Value at a floating-point `t`, evaluated at `t`'s precision.
    pub fn eval_float(&self, t: &Float) -> Float {
        let prec = t.prec();
        let t_sq = Float::with_val(prec, t * t);
        let top = self.coeffs.keys().next_back().copied().unwrap_or(0);
        let mut acc = Float::with_val(prec, 0);
        for e in (0..=top).rev() {
            acc *= &t_sq;
            if let Some(c) = self.coeffs.get(&e) {
                acc += c.to_float(prec);
            }
        }
        acc
    }

    /// `sum_e c_e * weight(e)` over the half-exponents `e`.
    pub fn weighted_sum<F: FnMut(u32) -> Rat>(&self, mut weight: F) -> Rat {
        self.coeffs.iter().map(|(e, c)| c * &weight(*e)).sum()
    }
}

/// Free-function form of [`EvenPoly::mul_trunc`].
pub fn poly_mul_trunc(p: &EvenPoly, q: &EvenPoly, max_deg: u32) -> EvenPoly {
    p.mul_trunc(q, max_deg)
}

impl fmt::Display for EvenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exp, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match exp {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*t^{exp}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EvenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
