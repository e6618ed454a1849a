//! Result rows and their JSON/CSV encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use skpik_core::discretize::ProblemConfig;
use skpik_core::skpik::SolveReport;

use crate::error::CliResult;
use crate::point::Method;

/// Version of the JSON result schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Column order of sweep CSV files.
pub const CSV_HEADER: [&str; 10] = [
    "method",
    "n",
    "mT",
    "sigma",
    "beta",
    "rank",
    "iters",
    "seconds",
    "residual",
    "converged",
];

/// One solver run, as written to JSON and CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub schema_version: u32,
    pub method: Method,
    pub n: usize,
    #[serde(rename = "mT")]
    pub m_t: usize,
    pub sigma: f64,
    pub beta: f64,
    pub rank: usize,
    /// Sweeps, MINRES iterations, or the per-step average for fminres.
    pub iters: f64,
    pub total_iterations: usize,
    pub seconds: f64,
    /// Relative residual; `NaN` (JSON `null`) when the run failed outright.
    #[serde(with = "nullable_f64")]
    pub residual: f64,
    pub converged: bool,
    pub subspace_dims: (usize, usize),
    #[serde(default)]
    pub history: Vec<f64>,
}

mod nullable_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

impl ResultRow {
    pub fn from_report(
        method: Method,
        n: usize,
        m_t: usize,
        config: &ProblemConfig,
        report: &SolveReport,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            method,
            n,
            m_t,
            sigma: config.sigma,
            beta: config.beta,
            rank: report.rank,
            iters: report.average_iterations(),
            total_iterations: report.iterations,
            seconds: report.seconds,
            residual: report.residual,
            converged: report.converged,
            subspace_dims: report.subspace_dims,
            history: report.history.clone(),
        }
    }

    /// Row for a point whose setup or solve failed.
    pub fn failed(method: Method, n: usize, m_t: usize, sigma: f64, beta: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            method,
            n,
            m_t,
            sigma,
            beta,
            rank: 0,
            iters: 0.0,
            total_iterations: 0,
            seconds: 0.0,
            residual: f64::NAN,
            converged: false,
            subspace_dims: (0, 0),
            history: vec![],
        }
    }

    /// CSV fields in [`CSV_HEADER`] order. Floats use the shortest
    /// representation that round-trips, so reruns are byte-identical except
    /// for `seconds`.
    pub fn csv_record(&self) -> [String; 10] {
        [
            self.method.to_string(),
            self.n.to_string(),
            self.m_t.to_string(),
            format!("{:e}", self.sigma),
            format!("{:e}", self.beta),
            self.rank.to_string(),
            if self.iters.fract() == 0.0 {
                format!("{}", self.iters as u64)
            } else {
                format!("{}", self.iters)
            },
            format!("{:.6}", self.seconds),
            if self.residual.is_nan() {
                "NaN".into()
            } else {
                format!("{:e}", self.residual)
            },
            self.converged.to_string(),
        ]
    }
}

pub fn write_csv(w: impl Write, rows: &[ResultRow]) -> CliResult<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}
