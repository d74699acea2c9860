use std::fmt::Write as _;

use ballint_core::bessel::C0Descriptor;
use ballint_core::quad::QuadSummary;
use ballint_core::report::{CoeffRecord, VerifyReport};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct CoeffRow {
    pub j: u32,
    pub rational: String,
    pub decimal: String,
}

#[derive(Serialize)]
pub struct C0Info {
    pub descriptor: C0Descriptor,
    pub decimal: String,
}

#[derive(Serialize)]
pub struct CoeffTable {
    pub kind: &'static str,
    pub pipeline: String,
    pub nu: Option<String>,
    pub order: u32,
    pub k: u32,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<C0Info>,
    pub coefficients: Vec<CoeffRow>,
}

impl CoeffTable {
    pub fn new(order: u32, k: u32, records: Vec<CoeffRecord>, c0: Option<C0Info>) -> Self {
        let first = records.first().expect("at least c_0");
        CoeffTable {
            kind: "coefficients",
            pipeline: first.pipeline.clone(),
            nu: first.nu.clone(),
            order,
            k,
            unit: first.unit.clone(),
            c0,
            coefficients: records
                .into_iter()
                .map(|r| CoeffRow {
                    j: r.j,
                    rational: r.rational,
                    decimal: r.decimal,
                })
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let mut out = String::new();
                for c in &self.coefficients {
                    let _ = writeln!(out, "{},{},{}", c.j, c.rational, c.decimal);
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                match &self.nu {
                    Some(nu) => {
                        let _ = writeln!(out, "bessel expansion, nu = {nu}, order {}, k = {}", self.order, self.k);
                    }
                    None => {
                        let _ = writeln!(out, "sinc expansion, order {}, k = {}", self.order, self.k);
                    }
                }
                if let Some(c0) = &self.c0 {
                    let d = &c0.descriptor;
                    let _ = writeln!(
                        out,
                        "c0(nu) = {} * {} * {} = {}",
                        d.four_pow_nu_over_two, d.shifted_pow_nu, d.gamma_nu, c0.decimal
                    );
                }
                let _ = writeln!(out, "unit: {}", self.unit);
                let width = self.coefficients.iter().map(|c| c.rational.len()).max().unwrap_or(0);
                for c in &self.coefficients {
                    let _ = writeln!(out, "{:>3}  {:>width$}  {}", c.j, c.rational, c.decimal);
                }
                out
            }
        }
    }
}

#[derive(Serialize)]
pub struct EstimateOutput {
    pub kind: &'static str,
    pub pipeline: &'static str,
    pub nu: Option<String>,
    pub n: u32,
    pub digits: u32,
    #[serde(flatten)]
    pub summary: QuadSummary,
}

impl EstimateOutput {
    pub fn render(&self, format: Format) -> String {
        let s = &self.summary;
        match format {
            Format::Json => json(self),
            Format::Csv => format!(
                "n,value,abs_err_bound,cutoff,pieces,tail\n{},{},{},{},{},{}\n",
                self.n, s.value, s.abs_err_bound, s.cutoff, s.pieces, s.tail
            ),
            Format::Text => format!(
                "value          {}\nabs_err_bound  {}\ncutoff         {}\npieces         {}\ntail           {}\n",
                s.value, s.abs_err_bound, s.cutoff, s.pieces, s.tail
            ),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyOutput {
    pub kind: &'static str,
    pub suite: String,
    pub passed: bool,
    pub reports: Vec<VerifyReport>,
}

impl VerifyOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let mut out = String::from("id,status,provenance,expected,computed,tolerance\n");
                for r in &self.reports {
                    let fields = [&r.id, &r.status.to_string(), &provenance(r), &r.expected, &r.computed, &r.tolerance];
                    let quoted: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
                    let _ = writeln!(out, "{}", quoted.join(","));
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                for r in &self.reports {
                    let _ = writeln!(
                        out,
                        "{:<8} {}  expected {}  computed {}  tol {}",
                        r.status.to_string().to_uppercase(),
                        r.id,
                        r.expected,
                        r.computed,
                        r.tolerance
                    );
                    if !r.notes.is_empty() {
                        let _ = writeln!(out, "         {}", r.notes);
                    }
                }
                let failed = self.reports.iter().filter(|r| r.status == ballint_core::report::Status::Fail).count();
                let _ = writeln!(
                    out,
                    "{}: {} checks, {} failed, {}",
                    self.suite,
                    self.reports.len(),
                    failed,
                    if self.passed { "ok" } else { "FAILED" }
                );
                out
            }
        }
    }
}

fn provenance(r: &VerifyReport) -> String {
    serde_json::to_value(r.provenance)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
