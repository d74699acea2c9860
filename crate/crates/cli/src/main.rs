//! `ballint`: exact expansion tables, quadrature estimates and verification
//! suites for the sinc and normalized-Bessel power integrals.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 precision failure.

mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use ballint_core::appendix::{appendix_fixture, parse_fixture};
use ballint_core::bessel::{bessel_expansion, c0_value, BesselExpansion, Nu};
use ballint_core::quad::{auto_cutoff_mult, bessel_integral, sinc_integral, Precision};
use ballint_core::report::{all_passed, appendix_suite, bessel_records, run_suite, sinc_records, Suite};
use ballint_core::sinc::{sinc_expansion, SincExpansion};
use ballint_core::{Error, Rat};
use clap::{Parser, Subcommand, ValueEnum};

use cache::{Cache, CacheKey};
use output::{C0Info, CoeffTable, EstimateOutput, Format, VerifyOutput};

const SINC_MAX_ORDER: u32 = 12;
const BESSEL_MAX_ORDER: u32 = 8;
const DEFAULT_DIGITS: u32 = 30;

#[derive(Parser)]
#[command(name = "ballint", version, about = "Asymptotic expansions of sinc and Bessel power integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact coefficients c_0..c_m of the sinc integral, in units of sqrt(3*pi/2).
    SincCoeffs {
        #[arg(long)]
        order: u32,
        /// Maclaurin truncation index (default order + 1).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        no_cache: bool,
    },
    /// Exact coefficients gamma_0..gamma_m of the Bessel integral, in units of c0(nu).
    BesselCoeffs {
        /// Order as "p/q", at least 1/2.
        #[arg(long)]
        nu: String,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        no_cache: bool,
    },
    /// High-precision value of one integral with an error bound.
    Eval {
        #[arg(value_enum)]
        pipeline: EvalPipeline,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        /// Bessel cutoff as a multiple of 2^nu Gamma(nu+1) (default: automatic).
        #[arg(long)]
        cutoff_mult: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite and write its report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Report file (default: ./ballint-verify-<suite>.json).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare a transcribed degree-28 table against the engine.
    AppendixCheck {
        /// Fixture of `row exponent p/q` lines (default: the bundled table).
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalPipeline {
    Sinc,
    Bessel,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    PaperConstants,
    Appendix,
    Reduction,
    Decay,
    Inequalities,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::PaperConstants => vec![Suite::PaperConstants],
            SuiteArg::Appendix => vec![Suite::Appendix],
            SuiteArg::Reduction => vec![Suite::Reduction],
            SuiteArg::Decay => vec![Suite::Decay],
            SuiteArg::Inequalities => vec![Suite::Inequalities],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }

    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

enum Failure {
    Usage(String),
    Verification,
    Precision(String),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification | Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Precision(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionFailure { .. } | Error::ZeroBracketing(_) => Failure::Precision(e.to_string()),
            Error::InsufficientData { .. } => Failure::Runtime(e.into()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Precision(msg) => eprintln!("error: {msg}"),
                Failure::Runtime(e) => eprintln!("error: {e:#}"),
                Failure::Verification => {}
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::SincCoeffs {
            order,
            k,
            digits,
            format,
            no_cache,
        } => {
            check_order(order, SINC_MAX_ORDER)?;
            check_digits(digits)?;
            let k = k.unwrap_or(order + 1);
            let key = CacheKey {
                pipeline: "sinc".into(),
                nu: None,
                m: order,
                k,
            };
            let coeffs = cached(&key, no_cache, || Ok(sinc_expansion(order, k)?.coeffs))?;
            let exp = SincExpansion { m: order, k, coeffs };
            Ok(CoeffTable::new(order, k, sinc_records(&exp, digits), None).render(format))
        }
        Command::BesselCoeffs {
            nu,
            order,
            k,
            digits,
            format,
            no_cache,
        } => {
            let nu: Nu = nu.parse()?;
            check_order(order, BESSEL_MAX_ORDER)?;
            check_digits(digits)?;
            let k = k.unwrap_or(order + 1);
            let key = CacheKey {
                pipeline: "bessel".into(),
                nu: Some(nu.to_string()),
                m: order,
                k,
            };
            let gammas = cached(&key, no_cache, || Ok(bessel_expansion(&nu, order, k)?.gammas))?;
            let exp = BesselExpansion {
                nu: nu.clone(),
                m: order,
                k,
                gammas,
            };
            let c0 = C0Info {
                descriptor: exp.c0_descriptor(),
                decimal: c0_value(&nu, digits)?,
            };
            Ok(CoeffTable::new(order, k, bessel_records(&exp, digits), Some(c0)).render(format))
        }
        Command::Eval {
            pipeline,
            n,
            nu,
            digits,
            cutoff_mult,
            format,
        } => {
            let prec = Precision::digits(digits)?;
            let (name, nu, est) = match pipeline {
                EvalPipeline::Sinc => {
                    if nu.is_some() || cutoff_mult.is_some() {
                        return Err(Failure::Usage("--nu and --cutoff-mult apply to the bessel pipeline only".into()));
                    }
                    ("sinc", None, sinc_integral(n, &prec)?)
                }
                EvalPipeline::Bessel => {
                    let nu: Nu = nu
                        .ok_or_else(|| Failure::Usage("eval bessel needs --nu".into()))?
                        .parse()?;
                    let mult = match cutoff_mult {
                        Some(m) => m,
                        None => auto_cutoff_mult(&nu, n, &prec)?,
                    };
                    let est = bessel_integral(&nu, n, mult, &prec)?;
                    ("bessel", Some(nu.to_string()), est)
                }
            };
            let out = EstimateOutput {
                kind: "estimate",
                pipeline: name,
                nu,
                n,
                digits,
                summary: est.summary(digits),
            };
            Ok(out.render(format))
        }
        Command::Verify { suite, format, report } => {
            let mut reports = Vec::new();
            for s in suite.suites() {
                reports.extend(run_suite(s)?);
            }
            let out = VerifyOutput {
                kind: "verify",
                suite: suite.name(),
                passed: all_passed(&reports),
                reports,
            };
            let path = report.unwrap_or_else(|| PathBuf::from(format!("ballint-verify-{}.json", suite.name())));
            std::fs::write(&path, output::json(&out))
                .with_context(|| format!("writing report to {}", path.display()))?;
            finish(out, format)
        }
        Command::AppendixCheck { fixture, format } => {
            let entries = match fixture {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                    parse_fixture(&text)?
                }
                None => appendix_fixture(),
            };
            let reports = appendix_suite(&entries)?;
            let out = VerifyOutput {
                kind: "appendix-check",
                suite: "appendix".into(),
                passed: all_passed(&reports),
                reports,
            };
            finish(out, format)
        }
    }
}

/// Prints the rendering even when a check failed, then reports the failure.
fn finish(out: VerifyOutput, format: Format) -> Result<String, Failure> {
    let text = out.render(format);
    if out.passed {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verification)
    }
}

fn check_order(order: u32, max: u32) -> Result<(), Failure> {
    if order > max {
        return Err(Failure::Usage(format!("--order {order} exceeds the supported maximum {max}")));
    }
    Ok(())
}

fn check_digits(digits: u32) -> Result<(), Failure> {
    if digits == 0 {
        return Err(Failure::Usage("--digits must be at least 1".into()));
    }
    Ok(())
}

fn cached(
    key: &CacheKey,
    no_cache: bool,
    compute: impl FnOnce() -> Result<Vec<Rat>, Failure>,
) -> Result<Vec<Rat>, Failure> {
    let cache = if no_cache { None } else { cache::default_dir().map(Cache::new) };
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(key)) {
        return Ok(hit);
    }
    let coeffs = compute()?;
    if let Some(c) = &cache {
        if let Err(e) = c.store(key, &coeffs) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_codes() {
        let precision = Error::PrecisionFailure {
            reason: "refinement stalled".into(),
            best_estimate: "1.0".into(),
            best_error: "1e-3".into(),
        };
        assert_eq!(Failure::from(precision).code(), 3);
        assert_eq!(Failure::from(Error::ZeroBracketing("12.5".into())).code(), 3);
        assert_eq!(Failure::from(Error::Domain("nu".into())).code(), 2);
        assert_eq!(Failure::from(Error::InsufficientData { usable: 1, required: 3 }).code(), 1);
        assert_eq!(Failure::Verification.code(), 1);
    }
}
