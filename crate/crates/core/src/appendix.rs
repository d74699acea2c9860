//! The published degree-28 polynomial for order 7, kept as a text fixture,
//! and the ledger of entries where the printed value is wrong.
//!
//! Fixture format: one monomial per line, `row exponent p/q`, meaning
//! `(p/q) t^exponent / n^row`. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::series::{binomial_power_to_degree, InvNSeries, Rat};
use crate::sinc::sinc_aj;

pub const APPENDIX_FIXTURE: &str = include_str!("../data/appendix_m7.txt");

/// Highest power of `t` in the published polynomial.
pub const APPENDIX_DEGREE: u32 = 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureEntry {
    pub row: u32,
    pub exponent: u32,
    pub value: Rat,
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Fixture {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [row, exponent, value] = fields[..] else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let row: u32 = row.parse().map_err(|_| err(format!("bad row {row:?}")))?;
        let exponent: u32 = exponent
            .parse()
            .map_err(|_| err(format!("bad exponent {exponent:?}")))?;
        if exponent % 2 == 1 {
            return Err(err(format!("odd exponent {exponent}")));
        }
        let value: Rat = value.parse().map_err(|e: Error| err(e.to_string()))?;
        out.push(FixtureEntry {
            row,
            exponent,
            value,
        });
    }
    Ok(out)
}

/// The bundled fixture, parsed.
pub fn appendix_fixture() -> Vec<FixtureEntry> {
    parse_fixture(APPENDIX_FIXTURE).expect("bundled fixture parses")
}

/// Every monomial of `[e^{t^2/(6n)} sinc(t/sqrt n)]^n` up to `t^28`, over all
/// powers of `1/n`.
///
/// Rows 0..=7 coincide with [`crate::sinc::appendix_table`] (any `k >= 8`
/// gives the same rows there). Rows 8..=13 depend on `a_9..a_14`, and the
/// published values match the untruncated sinc series, so `k = 14` is used.
pub fn appendix_polynomial() -> InvNSeries {
    let k = APPENDIX_DEGREE / 2;
    let a: Vec<Rat> = (2..=APPENDIX_DEGREE / 2).map(|j| sinc_aj(j, k)).collect();
    binomial_power_to_degree(&a, APPENDIX_DEGREE).expect("enough a_j supplied")
}

/// A published value known to be misprinted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub row: u32,
    pub exponent: u32,
    pub printed: Rat,
    pub corrected: Rat,
    pub note: &'static str,
}

/// Misprints in the published polynomial. Both are a power-of-ten slip in
/// the denominator; numerical cross-checks live in [`crate::report`].
pub fn appendix_errata() -> Vec<Erratum> {
    vec![
        Erratum {
            row: 8,
            exponent: 26,
            printed: "-7241/155918667199680000000".parse().unwrap(),
            corrected: "-7241/15591866719968000000".parse().unwrap(),
            note: "denominator printed with an extra factor of 10",
        },
        Erratum {
            row: 11,
            exponent: 28,
            printed: "-570787478291/4095982412843923600200000000".parse().unwrap(),
            corrected: "-570787478291/409598241284392360200000000".parse().unwrap(),
            note: "denominator printed with an extra factor of 10",
        },
    ]
}

/// Coefficients `c_3..c_7` as printed alongside the polynomial.
pub fn printed_sinc_constants() -> Vec<(u32, Rat)> {
    vec![
        (3, Rat::frac(27, 3200)),
        (4, Rat::frac(52791, 3942400)),
        (5, Rat::frac(-5270328789, 136478720000)),
        (6, Rat::frac(-124996631, 10035200000)),
        (7, Rat::frac(-5270328789, 136478720000)),
    ]
}

/// Indices among [`printed_sinc_constants`] whose printed value is wrong:
/// `c_5` repeats the value printed for `c_7`.
pub fn sinc_constant_errata() -> Vec<u32> {
    vec![5]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Match,
    Erratum,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixComparison {
    pub row: u32,
    pub exponent: u32,
    pub fixture: Option<Rat>,
    pub engine: Rat,
    pub status: EntryStatus,
}

/// Compares every fixture monomial and every engine monomial of degree
/// `<= 28` against each other.
pub fn compare_appendix(fixture: &[FixtureEntry]) -> Vec<AppendixComparison> {
    let engine = appendix_polynomial();
    let errata = appendix_errata();
    let mut keys: BTreeMap<(u32, u32), Option<Rat>> = BTreeMap::new();
    for (row, exponent, _) in engine.monomials() {
        keys.insert((exponent, row), None);
    }
    for e in fixture {
        keys.insert((e.exponent, e.row), Some(e.value.clone()));
    }
    keys.into_iter()
        .map(|((exponent, row), fixture)| {
            let engine_value = engine.coeff(row, exponent);
            let printed = fixture.clone().unwrap_or_else(Rat::zero);
            let status = if printed == engine_value {
                EntryStatus::Match
            } else if errata.iter().any(|e| {
                e.row == row && e.exponent == exponent && e.printed == printed && e.corrected == engine_value
            }) {
                EntryStatus::Erratum
            } else {
                EntryStatus::Mismatch
            };
            AppendixComparison {
                row,
                exponent,
                fixture,
                engine: engine_value,
                status,
            }
        })
        .collect()
}
