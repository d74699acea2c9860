use std::fmt;

use super::even_poly::EvenPoly;
use super::rat::{factorial, Rat};
use crate::error::{Error, Result};

/// Truncated expansion in powers of `1/n` whose coefficients are even
/// polynomials in `t`: row `i` multiplies `n^{-i}`.
#[derive(Clone, PartialEq, Eq)]
pub struct InvNSeries {
    rows: Vec<EvenPoly>,
}

impl InvNSeries {
    pub fn from_rows(rows: Vec<EvenPoly>) -> Self {
        assert!(!rows.is_empty(), "an InvNSeries has at least row 0");
        InvNSeries { rows }
    }

    /// Highest retained power of `1/n`.
    pub fn order(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// Row `i`, or the zero polynomial beyond the order.
    pub fn row(&self, i: u32) -> EvenPoly {
        self.rows.get(i as usize).cloned().unwrap_or_default()
    }

    pub fn rows(&self) -> &[EvenPoly] {
        &self.rows
    }

    /// Coefficient of `t^exponent / n^row`.
    pub fn coeff(&self, row: u32, exponent: u32) -> Rat {
        self.rows
            .get(row as usize)
            .map_or_else(Rat::zero, |p| p.coeff(exponent))
    }

    /// `(row, exponent, coefficient)` for every stored monomial.
    pub fn monomials(&self) -> impl Iterator<Item = (u32, u32, &Rat)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |(e, c)| (i as u32, e, c)))
    }

    /// Keeps rows `0..=order`.
    pub fn truncate_order(&self, order: u32) -> InvNSeries {
        InvNSeries {
            rows: self.rows.iter().take(order as usize + 1).cloned().collect(),
        }
    }

    /// Substitutes a concrete `n`, collapsing the rows into one polynomial.
    pub fn at_n(&self, n: &Rat) -> EvenPoly {
        let inv = n.recip().expect("n must be nonzero");
        let mut scale = Rat::one();
        let mut acc = EvenPoly::zero();
        for row in &self.rows {
            acc = acc.add(&row.scale(&scale));
            scale *= &inv;
        }
        acc
    }

    /// Integrates each row against a moment functional: entry `i` of the
    /// result is `sum_e row_i[t^{2e}] * moment(e)`.
    pub fn integrate_rows<F: FnMut(u32) -> Rat>(&self, mut moment: F) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|row| row.weighted_sum(&mut moment))
            .collect()
    }
}

impl fmt::Debug for InvNSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            writeln!(f, "n^-{i}: {row}")?;
        }
        Ok(())
    }
}

/// Coefficients of `binom(n, ell) = n (n-1) ... (n-ell+1) / ell!` as a
/// polynomial in `n`, lowest degree first.
pub fn falling_factorial_coeffs(ell: u32) -> Vec<Rat> {
    let mut poly = vec![Rat::one()];
    for s in 0..ell {
        let shift = Rat::from(s);
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= &(c * &shift);
        }
        poly = next;
    }
    let norm = Rat::from(factorial(ell));
    poly.iter().map(|c| c / &norm).collect()
}

/// Collects `[1 + A]^n`, `A = sum_{j>=2} a_j t^{2j} / n^j`, by powers of
/// `1/n`. Only monomials with `t`-half-degree `<= max_half` and row
/// `<= max_row` are kept; `A^ell` for `ell > max_ell` is skipped.
fn collect_binomial(a: &[Rat], max_half: u32, max_row: u32, max_ell: u32) -> Vec<EvenPoly> {
    let max_deg = 2 * max_half;
    // In A every t^{2j} carries exactly n^{-j}, so one EvenPoly holds A^ell
    // with the n-power recoverable from the t-degree.
    let big_a = EvenPoly::from_half_terms(
        a.iter()
            .enumerate()
            .map(|(idx, c)| (idx as u32 + 2, c.clone())),
    )
    .truncate(max_deg);

    let mut rows = vec![EvenPoly::zero(); max_row as usize + 1];
    rows[0] = EvenPoly::one();
    let mut power = EvenPoly::one();
    for ell in 1..=max_ell {
        power = power.mul_trunc(&big_a, max_deg);
        if power.is_zero() {
            break;
        }
        let ff = falling_factorial_coeffs(ell);
        for (s, alpha) in power.half_terms() {
            for (d, f) in ff.iter().enumerate().skip(1) {
                let d = d as u32;
                if d > s || f.is_zero() {
                    continue;
                }
                let row = s - d;
                if row <= max_row {
                    rows[row as usize].add_term(s, f * alpha);
                }
            }
        }
    }
    rows
}

/// `[1 + sum_{j=2}^{J} a_j t^{2j}/n^j]^n` collected through `n^{-m}`.
///
/// `a[0]` is `a_2`, `a[1]` is `a_3`, and so on. A term `a_j` only reaches
/// rows `>= j - 1` and `A^ell` only rows `>= ell`, so `a_2..a_{2m}` and
/// `ell <= m` suffice; fewer inputs are rejected.
pub fn nseries_pow_binomial(a: &[Rat], m: u32) -> Result<InvNSeries> {
    let supplied_to = a.len() as u32 + 1;
    if m > 0 && supplied_to < 2 * m {
        return Err(Error::InsufficientCoefficients {
            needed: 2 * m,
            got: supplied_to,
        });
    }
    let rows = collect_binomial(a, 2 * m, m, m);
    Ok(InvNSeries { rows })
}

/// Every monomial of `[1 + A]^n` with `t`-degree `<= max_deg`, across all
/// powers of `1/n`. Rows above `max_deg/4` are therefore partial.
pub fn binomial_power_to_degree(a: &[Rat], max_deg: u32) -> Result<InvNSeries> {
    let max_half = max_deg / 2;
    let supplied_to = a.len() as u32 + 1;
    if max_half >= 2 && supplied_to < max_half {
        return Err(Error::InsufficientCoefficients {
            needed: max_half,
            got: supplied_to,
        });
    }
    let max_row = max_half.saturating_sub(1);
    let rows = collect_binomial(a, max_half, max_row, max_half / 2);
    Ok(InvNSeries { rows })
}
