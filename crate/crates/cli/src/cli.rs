//! Argument definitions and subcommand dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use skpik_core::discretize::DesiredState;
use skpik_core::la::mm_write_dense;

use crate::error::{io_err, CliError, CliResult};
use crate::generate::generate;
use crate::options::ModelOptions;
use crate::output::write_csv;
use crate::point::{run_point, Method, PointSpec, Source};
use crate::sweep::{run_points, SweepSpec};
use crate::verify::{run_verify, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "skpik",
    version,
    about = "Low-rank solvers for all-at-once parabolic optimal control"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write mass and stiffness matrices of a unit-square mesh.
    Generate(GenerateArgs),
    /// Solve one problem and print the result as JSON.
    Solve(SolveArgs),
    /// Run a parameter sweep described by a JSON file and write CSV.
    Sweep(SweepArgs),
    /// Compare the solvers with dense oracles on a small instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Cells per side.
    #[arg(long)]
    pub mesh: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Ex1,
    Ex2,
    File,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["mesh", "matrices"])))]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Cells per side of the built-in mesh.
    #[arg(long)]
    pub mesh: Option<usize>,
    /// Directory with M.mtx and K.mtx.
    #[arg(long)]
    pub matrices: Option<PathBuf>,
    #[arg(long = "mT")]
    pub m_t: usize,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    pub options: ModelOptions,
    #[arg(long, value_enum)]
    pub example: Option<Example>,
    /// Desired state table (n rows, mT columns).
    #[arg(long)]
    pub yd_file: Option<PathBuf>,
    /// Also write the JSON result here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the solution factors X1.mtx and X2.mtx (X = X1·X2ᵀ) here.
    #[arg(long)]
    pub factors: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// CSV destination (default: the spec's `out`, else stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Spatial unknowns: 1, or (c+1)^2 for a c×c mesh.
    #[arg(long, default_value_t = 25)]
    pub n: usize,
    #[arg(long = "mT", default_value_t = 4)]
    pub m_t: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub beta: f64,
    /// Also check the low-rank MINRES baseline.
    #[arg(long)]
    pub lrminres: bool,
    #[arg(long, hide = true)]
    pub flip_sign: bool,
}

/// How a successful invocation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::NotConverged => 2,
        }
    }
}

fn desired_state(example: Option<Example>, yd_file: Option<&Path>) -> CliResult<DesiredState> {
    match (example, yd_file) {
        (None | Some(Example::Ex1), None) => Ok(DesiredState::Ex1),
        (Some(Example::Ex2), None) => Ok(DesiredState::Ex2Slice),
        (None | Some(Example::File), Some(p)) => Ok(DesiredState::File(p.to_path_buf())),
        (Some(Example::File), None) => Err(CliError::Usage(
            "--example file needs --yd-file PATH".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--yd-file is only valid with --example file".into(),
        )),
    }
}

impl SolveArgs {
    pub fn point(&self) -> CliResult<PointSpec> {
        let source = match (&self.mesh, &self.matrices) {
            (Some(c), None) => Source::Mesh(*c),
            (None, Some(d)) => Source::Matrices(d.clone()),
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --mesh and --matrices".into(),
                ))
            }
        };
        if self.m_t == 0 {
            return Err(CliError::Usage("--mT must be at least 1".into()));
        }
        let config = self.options.config(self.sigma, self.beta)?;
        let mut p = PointSpec::new(self.method, source, self.m_t, config);
        p.final_time = self.options.final_time;
        p.desired = desired_state(self.example, self.yd_file.as_deref())?;
        p.max_rank = self.options.k_max;
        Ok(p)
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Generate(a) => {
            let info = generate(a.mesh, a.nu, &a.out)?;
            eprintln!("wrote n = {} matrices to {}", info.n, a.out.display());
            Ok(Status::Success)
        }
        Command::Solve(a) => {
            let point = a.point()?;
            let outcome = run_point(&point)?;
            let json =
                serde_json::to_string_pretty(&outcome.row).expect("result serializes") + "\n";
            print!("{json}");
            if let Some(path) = &a.out {
                write_text(path, &json)?;
            }
            if let (Some(dir), Some((x1, x2))) = (&a.factors, &outcome.factors) {
                std::fs::create_dir_all(dir).map_err(io_err(dir))?;
                mm_write_dense(dir.join("X1.mtx"), x1)?;
                mm_write_dense(dir.join("X2.mtx"), x2)?;
            }
            Ok(if outcome.row.converged {
                Status::Success
            } else {
                Status::NotConverged
            })
        }
        Command::Sweep(a) => {
            let spec = SweepSpec::from_file(&a.spec)?;
            let points = spec.points()?;
            let jobs = a
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let rows = run_points(&points, jobs);
            match a.out.as_ref().or(spec.out.as_ref()) {
                Some(path) => {
                    let file = std::fs::File::create(path).map_err(io_err(path))?;
                    write_csv(file, &rows)?;
                }
                None => write_csv(std::io::stdout().lock(), &rows)?,
            }
            Ok(if rows.iter().all(|r| r.converged) {
                Status::Success
            } else {
                Status::NotConverged
            })
        }
        Command::Verify(a) => {
            let report = run_verify(&VerifyOptions {
                n: a.n,
                m_t: a.m_t,
                sigma: a.sigma,
                beta: a.beta,
                with_lrminres: a.lrminres,
                flip_sign: a.flip_sign,
            })?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            if report.passed {
                Ok(Status::Success)
            } else {
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{} = {:e} > {:e}", c.name, c.value, c.threshold))
                    .collect();
                Err(CliError::VerificationFailed(failed.join(", ")))
            }
        }
    }
}
