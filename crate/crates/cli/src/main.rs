use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lindkrylov::batch::{run_analytic, write_analytic, AnalyticConfig};
use lindkrylov::config::RunConfig;
use lindkrylov::harness::{run_evolve, run_lanczos, run_sweep, write_evolve, write_lanczos, write_sweep, OutputFormat};
use lindkrylov::verify::verify_suite;
use lindkrylov::Error;
use log::{error, info};

#[derive(Parser)]
#[command(name = "lindkrylov", version, about = "Krylov complexity of dissipative SYK models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lanczos coefficients for the base point of a config.
    Lanczos(Common),
    /// Every grid point, with slope, plateau and power-law fits.
    Sweep(Common),
    /// Realization-averaged K(t), OTOC and φ_n(t).
    Evolve(Common),
    /// Closed-form curves on a parameter grid.
    Analytic(Common),
    /// Run the built-in oracle and invariant checks.
    Verify(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config file; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if !e.is_validation() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn run_config(c: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).map_err(Error::from)?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(r) = c.realizations {
        cfg.realizations = r;
    }
    if let Some(d) = &c.out_dir {
        cfg.out_dir = d.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(c: &Common) -> PathBuf {
    c.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn execute(cmd: Command) -> anyhow::Result<u8> {
    let common = match &cmd {
        Command::Lanczos(c) | Command::Sweep(c) | Command::Evolve(c) | Command::Analytic(c) | Command::Verify(c) => c.clone(),
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let format = OutputFormat::from(common.format);
    match cmd {
        Command::Lanczos(c) => {
            let cfg = run_config(&c)?;
            let (summary, tables) = run_lanczos(&cfg)?;
            report(&write_lanczos(&cfg.out_dir, format, &cfg, &summary, &tables)?);
            if let Some(e) = summary.failures.first() {
                error!("{} of {} realizations failed; first: {}", summary.failures.len(), cfg.realizations, e.message);
                return Ok(if summary.failures.iter().any(|f| f.numerical) { EXIT_NUMERICAL } else { EXIT_VALIDATION });
            }
        }
        Command::Sweep(c) => {
            let cfg = run_config(&c)?;
            let result = run_sweep(&cfg)?;
            report(&write_sweep(&cfg.out_dir, format, &result)?);
            for g in &result.power_laws {
                if let Some(f) = g.fit {
                    info!("N = {}, M = {}: kappa = {}, beta = {} ± {}", g.n, g.m, f.kappa, f.beta, f.beta_stderr);
                }
            }
            if result.n_failures() > 0 {
                error!("{} realization runs failed", result.n_failures());
                return Ok(if result.has_numerical_failure() { EXIT_NUMERICAL } else { EXIT_VALIDATION });
            }
        }
        Command::Evolve(c) => {
            let cfg = run_config(&c)?;
            let result = run_evolve(&cfg)?;
            report(&write_evolve(&cfg.out_dir, format, &result)?);
            if !result.failures.is_empty() {
                error!("{} realizations failed", result.failures.len());
                return Ok(EXIT_NUMERICAL);
            }
        }
        Command::Analytic(c) => {
            let cfg = match &c.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    AnalyticConfig::from_json(&text)?
                }
                None => AnalyticConfig::standard(),
            };
            let tables = run_analytic(&cfg)?;
            report(&write_analytic(&out_dir(&c), &tables)?);
        }
        Command::Verify(c) => {
            let checks = verify_suite();
            let failed = checks.iter().filter(|c| !c.passed).count();
            match c.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&checks)?),
                Format::Csv => {
                    for ch in &checks {
                        let status = if ch.passed { "PASS" } else { "FAIL" };
                        let extra = ch.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
                        println!("{status} {} value={:e} tol={:e}{extra}", ch.name, ch.value, ch.tolerance);
                    }
                }
            }
            if failed > 0 {
                return Ok(EXIT_NUMERICAL);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
