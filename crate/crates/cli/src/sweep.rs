//! Cartesian parameter sweeps.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::Deserialize;
use skpik_core::discretize::DesiredState;

use crate::error::{io_err, CliError, CliResult};
use crate::options::ModelOptions;
use crate::output::ResultRow;
use crate::point::{run_point, Method, PointSpec, Source};

/// A sweep file. Points are the product of all lists, ordered by source,
/// then `mT`, then σ, then β, then method.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SweepSpec {
    pub methods: Vec<Method>,
    /// Cells per side of built-in meshes.
    #[serde(default)]
    pub mesh: Vec<usize>,
    /// Matrix directories, used instead of `mesh`.
    #[serde(default)]
    pub matrices: Vec<PathBuf>,
    #[serde(rename = "mT")]
    pub m_t: Vec<usize>,
    pub sigma: Vec<f64>,
    pub beta: Vec<f64>,
    /// `ex1`, `ex2` or `file:PATH`.
    #[serde(default = "default_example")]
    pub example: String,
    #[serde(flatten)]
    pub options: ModelOptions,
    /// CSV destination when `--out` is not given.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_example() -> String {
    "ex1".into()
}

/// Accepted top-level keys; serde cannot reject unknown keys next to a
/// flattened struct, so typos are caught here.
const KNOWN_KEYS: &[&str] = &[
    "methods",
    "mesh",
    "matrices",
    "mT",
    "sigma",
    "beta",
    "example",
    "out",
    "nu",
    "shift",
    "ereg",
    "reg",
    "tol",
    "trunc_tol",
    "max_it",
    "final_time",
    "k_max",
];

impl SweepSpec {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Json { source, .. } => CliError::Json {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let json_err = |source| CliError::Json {
            path: PathBuf::from("<spec>"),
            source,
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        if let Some(obj) = value.as_object() {
            if let Some(key) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
                return Err(CliError::Usage(format!("sweep spec: unknown key `{key}`")));
            }
        }
        let spec: Self = serde_json::from_value(value).map_err(json_err)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: &str| Err(CliError::Usage(format!("sweep spec: {m}")));
        if self.methods.is_empty() {
            return usage("method set is empty");
        }
        if self.mesh.is_empty() == self.matrices.is_empty() {
            return usage("give exactly one of `mesh` and `matrices`");
        }
        if self.m_t.is_empty() || self.sigma.is_empty() || self.beta.is_empty() {
            return usage("`mT`, `sigma` and `beta` must be non-empty");
        }
        if let Some(s) = self.sigma.iter().find(|s| !(**s >= 0.0)) {
            return usage(&format!("sigma values must be >= 0, got {s}"));
        }
        if let Some(b) = self.beta.iter().find(|b| !(**b > 0.0)) {
            return usage(&format!("beta values must be > 0, got {b}"));
        }
        self.example
            .parse::<DesiredState>()
            .map_err(|e| CliError::Usage(format!("sweep spec: {e}")))?;
        Ok(())
    }

    /// All points in output order.
    pub fn points(&self) -> CliResult<Vec<PointSpec>> {
        let desired: DesiredState = self.example.parse().map_err(CliError::Core)?;
        let sources: Vec<Source> = if self.mesh.is_empty() {
            self.matrices
                .iter()
                .cloned()
                .map(Source::Matrices)
                .collect()
        } else {
            self.mesh.iter().copied().map(Source::Mesh).collect()
        };
        let mut out = Vec::new();
        for source in &sources {
            for &m_t in &self.m_t {
                for &sigma in &self.sigma {
                    for &beta in &self.beta {
                        let config = self.options.config(sigma, beta)?;
                        for &method in &self.methods {
                            let mut p = PointSpec::new(method, source.clone(), m_t, config.clone());
                            p.final_time = self.options.final_time;
                            p.desired = desired.clone();
                            p.max_rank = self.options.k_max;
                            out.push(p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn failed_row(p: &PointSpec) -> ResultRow {
    let n = match p.source {
        Source::Mesh(c) => (c + 1) * (c + 1),
        Source::Matrices(_) => 0,
    };
    ResultRow::failed(p.method, n, p.steps, p.config.sigma, p.config.beta)
}

/// Runs every point on up to `jobs` threads. Rows come back in point order;
/// a failing point becomes a non-converged row and the sweep continues.
pub fn run_points(points: &[PointSpec], jobs: usize) -> Vec<ResultRow> {
    let jobs = jobs.clamp(1, points.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = points.get(i) else { break };
                let row = match run_point(p) {
                    Ok(outcome) => outcome.row,
                    Err(e) => {
                        eprintln!(
                            "point {} ({} mT={} sigma={:e} beta={:e}) failed: {e}",
                            i + 1,
                            p.method,
                            p.steps,
                            p.config.sigma,
                            p.config.beta
                        );
                        failed_row(p)
                    }
                };
                if tx.send((i, row)).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut rows: Vec<Option<ResultRow>> = vec![None; points.len()];
    for (i, row) in rx {
        rows[i] = Some(row);
    }
    rows.into_iter()
        .map(|r| r.expect("every point produces a row"))
        .collect()
}
