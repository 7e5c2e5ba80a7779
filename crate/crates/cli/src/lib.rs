//! `wva`: evaluate, sweep and validate the recycled entangled weak-value
//! amplification model from the command line.
//!
//! Every subcommand is deterministic: the same invocation writes the same
//! bytes, independent of `--jobs`.

pub mod error;
pub mod figure;
pub mod montecarlo;
pub mod output;
pub mod record;
pub mod selftest;
pub mod settings;
pub mod sweep;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use wva_core::analytic::{QfiForm, RecycleVariant};

use crate::error::{CliError, Result};
use crate::figure::{figure_table, plot_script, FigureId, FigureOptions, ALL_FIGURES};
use crate::montecarlo::{run_mc, McSpec};
use crate::output::{emit, ensure_dir, json_bytes, write_file};
use crate::record::{evaluate, Record, Variants};
use crate::selftest::{run_selftest, Profile, SelftestOptions};
use crate::settings::{read_config_file, Overrides};
use crate::sweep::{run_sweep, Axis, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "wva",
    version,
    about = "Recycled entangled weak-value amplification toolkit"
)]
pub struct Cli {
    /// Scenario file of `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (eval, sweep, selftest JSON) or directory (figure, mc).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Base seed for Monte Carlo streams.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Number of entangled qubits.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Coupling strength.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Postselection angle.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Mirror amplitude reflectivity.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Single-pass power loss.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Per-qubit probability that a kept photon reads as discarded.
    #[arg(
        long,
        global = true,
        alias = "q_keep_to_discard",
        allow_negative_numbers = true
    )]
    pub q_keep_to_discard: Option<f64>,
    /// Per-qubit probability that a discarded photon reads as kept.
    #[arg(
        long,
        global = true,
        alias = "q_discard_to_keep",
        allow_negative_numbers = true
    )]
    pub q_discard_to_keep: Option<f64>,
}

impl ParamArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            g: self.g,
            phi: self.phi,
            r: self.r,
            gamma: self.gamma,
            q_keep_to_discard: self.q_keep_to_discard,
            q_discard_to_keep: self.q_discard_to_keep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QfiFormArg {
    Derived,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecycleArg {
    Exact,
    Linear,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct VariantArgs {
    /// Closed form reported as `qfi_standard`.
    #[arg(long, value_enum, default_value_t = QfiFormArg::Derived)]
    pub qfi_form: QfiFormArg,
    /// Recycled meter used for `recycled_meter_norm`.
    #[arg(long, value_enum, default_value_t = RecycleArg::Exact)]
    pub recycle: RecycleArg,
}

impl VariantArgs {
    fn variants(&self) -> Variants {
        Variants {
            qfi_form: match self.qfi_form {
                QfiFormArg::Derived => QfiForm::Derived,
                QfiFormArg::AsPrinted => QfiForm::AsPrinted,
            },
            recycle: match self.recycle {
                RecycleArg::Exact => RecycleVariant::Exact,
                RecycleArg::Linear => RecycleVariant::Linear,
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every observable at one scenario, as JSON.
    Eval {
        #[command(flatten)]
        variants: VariantArgs,
    },
    /// Observables over a one- or two-axis grid, as CSV.
    Sweep {
        /// `name:start:stop:count[:lin|log]`; the first axis varies slowest.
        #[arg(long = "axis", required = true, value_name = "SPEC")]
        axes: Vec<String>,
        #[command(flatten)]
        variants: VariantArgs,
    },
    /// Data behind a figure, written as `fig<ID>.csv` into `--out`.
    Figure {
        /// 2, 3a, 3b, 4, 5, 6, 7, 8 or `all`.
        #[arg(required = true, value_name = "ID")]
        ids: Vec<String>,
        /// Grid resolution of the swept axis.
        #[arg(long, default_value_t = figure::DEFAULT_POINTS)]
        points: usize,
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        n_list: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        phi_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        gamma_list: Option<Vec<f64>>,
        /// Readout error rates, applied to both directions.
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        q_list: Option<Vec<f64>>,
        /// Also write a matplotlib script `fig<ID>.py` per figure.
        #[arg(long)]
        plot_script: bool,
    },
    /// Analytic-vs-oracle invariant suite; exits 2 on any failure.
    Selftest {
        #[arg(long, default_value = "full", value_parser = ["quick", "full"])]
        profile: String,
        /// Print the JSON report instead of the text one.
        #[arg(long)]
        json: bool,
        /// Print nothing; the exit status and `--out` carry the result.
        #[arg(long, conflicts_with = "json")]
        quiet: bool,
        /// Relative error injected into analytic formulas.
        #[arg(long, hide = true, default_value_t = 0.0)]
        inject_perturbation: f64,
    },
    /// Replicated maximum-likelihood estimation of `g`.
    Mc {
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        #[arg(long, default_value_t = 200)]
        replicas: u64,
    },
}

/// Parse `args` (program name first), execute, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn scenario(cli: &Cli) -> Result<Overrides> {
    let file = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => Overrides::default(),
    };
    Ok(file.merged(cli.params.overrides()))
}

fn pool(jobs: Option<u64>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0) as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn out_dir(cli: &Cli) -> Result<&Path> {
    let dir = cli.out.as_deref().unwrap_or(Path::new("."));
    ensure_dir(dir)?;
    Ok(dir)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Eval { variants } => {
            let cfg = scenario(cli)?.config()?;
            let v = variants.variants();
            let doc = evaluate(&cfg, v).to_json(v);
            emit(cli.out.as_deref(), &json_bytes(&doc))
        }
        Command::Sweep { axes, variants } => {
            let spec = SweepSpec {
                fixed: scenario(cli)?,
                axes: axes
                    .iter()
                    .map(|a| a.parse::<Axis>())
                    .collect::<Result<_>>()?,
                variants: variants.variants(),
            };
            let records = run_sweep(&spec, &pool(cli.jobs)?)?;
            let mut table = output::Table::new(Record::csv_header());
            for r in &records {
                table.push(r.csv_row());
            }
            emit(cli.out.as_deref(), &table.to_csv_bytes())
        }
        Command::Figure {
            ids,
            points,
            n_list,
            phi_list,
            gamma_list,
            q_list,
            plot_script: with_script,
        } => {
            let mut figures = Vec::new();
            for id in ids {
                if id == "all" {
                    figures.extend(ALL_FIGURES);
                } else {
                    figures.push(id.parse::<FigureId>()?);
                }
            }
            let opts = FigureOptions {
                points: *points,
                n_list: n_list.clone(),
                phi_list: phi_list.clone(),
                gamma_list: gamma_list.clone(),
                q_list: q_list.clone(),
                fixed: scenario(cli)?,
            };
            let dir = out_dir(cli)?;
            for id in figures {
                let table = figure_table(id, &opts)?;
                let path = dir.join(format!("{}.csv", id.file_stem()));
                write_file(&path, &table.to_csv_bytes())?;
                log::info!("wrote {}", path.display());
                if *with_script {
                    let script = dir.join(format!("{}.py", id.file_stem()));
                    write_file(&script, plot_script(id).as_bytes())?;
                }
            }
            Ok(())
        }
        Command::Selftest {
            profile,
            json,
            quiet,
            inject_perturbation,
        } => {
            let profile: Profile = profile.parse()?;
            // Finite-difference probes step just outside the weak regime at
            // the grid edge; those warnings are expected here.
            let level = log::max_level();
            log::set_max_level(level.min(log::LevelFilter::Error));
            let report = run_selftest(SelftestOptions {
                profile,
                perturbation: *inject_perturbation,
            });
            log::set_max_level(level);
            let doc = serde_json::to_value(&report).expect("report serializes");
            if let Some(path) = &cli.out {
                write_file(path, &json_bytes(&doc))?;
            }
            if *json {
                emit(None, &json_bytes(&doc))?;
            } else if !*quiet {
                emit(None, report.to_text().as_bytes())?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::SelftestFailed {
                    failed: report.failed_count(),
                    total: report.checks.len(),
                })
            }
        }
        Command::Mc { shots, replicas } => {
            let cfg = scenario(cli)?.config()?;
            let spec = McSpec {
                shots: *shots,
                replicas: *replicas,
                seed: cli.seed,
            };
            let out = run_mc(&cfg, spec, &pool(cli.jobs)?)?;
            let dir = out_dir(cli)?;
            write_file(&dir.join("mc.csv"), &out.table.to_csv_bytes())?;
            write_file(&dir.join("mc_summary.json"), &json_bytes(&out.summary))
        }
    }
}
