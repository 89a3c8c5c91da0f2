//! Command-line front end. Each subcommand runs one pipeline stage.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use wormbench::abm::{self, Mode, SimConfig, WidgetConfig};
use wormbench::dataprep::{prepare, Dataset, PrepConfig};
use wormbench::ode::{integrate_rk4, OdeRun};
use wormbench::regress::{
    benchmark, BenchConfig, EvalReport, RegressorKind, RegressorSpec, RosterEntry,
};
use wormbench::report::{self, Format};
use wormbench::sweep::{run_sweep, ExperimentDesign};
use wormbench::{Error, Result};

#[derive(Parser)]
#[command(
    name = "wormbench",
    version,
    about = "Worm-epidemic simulation and regression benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the SEIRV equations with fixed-step RK4.
    Ode {
        /// Run file: {"params": {...}, "init": {...}, "dt": 0.01, "steps": N}.
        #[arg(long)]
        config: PathBuf,
        /// Override the number of steps.
        #[arg(long)]
        ticks: Option<usize>,
        /// Trace CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one agent-based simulation.
    Abm {
        #[arg(long, default_value = "widget")]
        mode: Mode,
        /// Config JSON; widget mode falls back to defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        ticks: u64,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment design into a dataset CSV plus `<out>.manifest.json`.
    Sweep {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the design's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the design's tick count.
        #[arg(long)]
        ticks: Option<u64>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Merge, profile, clean and transform datasets. Writes the result plus
    /// `<out>.profile.json` and `<out>.transforms.json`.
    Prep {
        /// Input CSV; repeat to merge several sheets in order.
        #[arg(long = "in", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Prep recipe JSON (renames, ops, thresholds, transforms).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Fit and score a regressor roster. Writes a JSON report plus
    /// `<out>.timings.json` (timings are kept apart so reruns are byte-identical).
    Bench {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        target: Option<String>,
        /// Bench config JSON; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated kinds (e.g. `ols,forest,gbt`) or a JSON roster file.
        #[arg(long)]
        models: Option<String>,
        /// JSON array of specs tuned together by cross-validation.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Validation fraction.
        #[arg(long)]
        split: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Render a bench report as md, csv or svg.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "md")]
        format: Format,
    },
}

/// `data.csv` + `manifest` -> `data.manifest.json`.
fn sidecar(path: &Path, tag: &str) -> PathBuf {
    path.with_extension(format!("{tag}.json"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn emit(out: Option<&Path>, bytes: Vec<u8>) -> Result<()> {
    match out {
        Some(p) => write_file(p, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn parse_models(arg: &str) -> Result<Vec<RosterEntry>> {
    if arg.ends_with(".json") {
        return read_json(Path::new(arg));
    }
    arg.split(',')
        .map(|k| {
            Ok(RosterEntry::Fixed(RegressorSpec::new(
                k.trim().parse::<RegressorKind>()?,
            )))
        })
        .collect()
}

fn thread_pool(n: usize) -> Result<rayon::ThreadPool> {
    if n == 0 {
        return Err(Error::config("parallel", "must be >= 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::config("parallel", e.to_string()))
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ode { config, ticks, out } => {
            let mut run = OdeRun::load(&config)?;
            if let Some(t) = ticks {
                run.steps = t;
            }
            let mut buf = Vec::new();
            integrate_rk4(&run)?
                .write_csv(&mut buf)
                .map_err(|e| Error::io("<buffer>", e))?;
            emit(out.as_deref(), buf)
        }
        Command::Abm {
            mode,
            config,
            ticks,
            seed,
            out,
        } => {
            let mut cfg = match (&config, mode) {
                (Some(p), m) => SimConfig::load(m, p)?,
                (None, Mode::Widget) => SimConfig::Widget(WidgetConfig::default()),
                (None, Mode::Rate) => {
                    return Err(Error::config("config", "rate mode needs --config"))
                }
            };
            if let Some(s) = seed {
                cfg.set_seed(s);
            }
            let mut buf = Vec::new();
            abm::run(cfg, ticks)?
                .write_csv(&mut buf)
                .map_err(|e| Error::io("<buffer>", e))?;
            emit(out.as_deref(), buf)
        }
        Command::Sweep {
            design,
            out,
            seed,
            ticks,
            parallel,
        } => {
            let mut design = ExperimentDesign::load(&design)?;
            if let Some(s) = seed {
                design.master_seed = s;
            }
            if let Some(t) = ticks {
                design.ticks = t;
            }
            let result = run_sweep(&design, parallel)?;
            result.dataset.save(&out)?;
            write_file(
                &sidecar(&out, "manifest"),
                result.manifest.to_json().as_bytes(),
            )
        }
        Command::Prep {
            inputs,
            out,
            config,
        } => {
            let cfg = match config {
                Some(p) => PrepConfig::load(p)?,
                None => PrepConfig::default(),
            };
            let sheets = inputs
                .iter()
                .map(Dataset::load)
                .collect::<Result<Vec<_>>>()?;
            let result = prepare(&sheets, &cfg)?;
            result.dataset.save(&out)?;
            write_file(
                &sidecar(&out, "profile"),
                result.profile.to_json().as_bytes(),
            )?;
            let transforms = serde_json::to_string_pretty(&result.transforms)?;
            write_file(&sidecar(&out, "transforms"), transforms.as_bytes())
        }
        Command::Bench {
            input,
            out,
            target,
            config,
            models,
            grid,
            split,
            seed,
            parallel,
        } => {
            let mut cfg = match (config, target.as_deref()) {
                (Some(p), _) => read_json::<BenchConfig>(&p)?,
                (None, Some(t)) => BenchConfig::new(t),
                (None, None) => return Err(Error::config("target", "pass --target or --config")),
            };
            if let Some(t) = target {
                cfg.target = t;
            }
            if let Some(m) = models {
                cfg.roster = parse_models(&m)?;
            }
            if let Some(g) = grid {
                cfg.roster.push(RosterEntry::Grid(read_json(&g)?));
            }
            if let Some(s) = split {
                cfg.val_fraction = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let d = Dataset::load(&input)?;
            let reports = thread_pool(parallel)?.install(|| benchmark(&d, &cfg))?;
            let timings: Vec<Value> = reports
                .iter()
                .map(|r| serde_json::json!({"algorithm": r.algorithm, "training_time_s": r.training_time_s}))
                .collect();
            let mut body = serde_json::to_value(&reports)?;
            if let Value::Array(items) = &mut body {
                for item in items {
                    if let Value::Object(m) = item {
                        m.remove("training_time_s");
                    }
                }
            }
            write_file(&out, serde_json::to_string_pretty(&body)?.as_bytes())?;
            write_file(
                &sidecar(&out, "timings"),
                serde_json::to_string_pretty(&timings)?.as_bytes(),
            )
        }
        Command::Report { input, out, format } => {
            let mut reports: Vec<EvalReport> = read_json(&input)?;
            let timings = sidecar(&input, "timings");
            if timings.exists() {
                let t: Vec<Value> = read_json(&timings)?;
                for (r, v) in reports.iter_mut().zip(t) {
                    r.training_time_s = v["training_time_s"].as_f64().unwrap_or(0.0);
                }
            }
            report::render(&reports, format, &out).map(|_| ())
        }
    }
}

fn exit_code(kind: &str) -> u8 {
    match kind {
        "usage" => 2,
        "missing_file" => 3,
        "schema_mismatch" => 4,
        _ => 1,
    }
}

fn fail(kind: &str, message: &str) -> ExitCode {
    let one_line = message.lines().next().unwrap_or("").trim();
    let quoted = serde_json::to_string(one_line).unwrap_or_default();
    eprintln!("error kind={kind} message={quoted}");
    ExitCode::from(exit_code(kind))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let msg = msg.strip_prefix("error: ").unwrap_or(&msg);
            return fail("usage", msg);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
