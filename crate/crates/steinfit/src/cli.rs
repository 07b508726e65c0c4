use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{run_simulate, run_test, run_verify, TestRequest};
use crate::error::CliError;
use crate::json;

#[derive(Debug, Parser)]
#[command(name = "steinfit", version, about = "Goodness-of-fit tests from fixed-point characterizations")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bootstrap goodness-of-fit test of one data set.
    Test(TestArgs),
    /// Monte Carlo power study from a JSON config.
    Simulate(SimulateArgs),
    /// Regularity conditions and fixed-point residual of a catalog law.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TestArgs {
    /// One number per line, or a CSV file with --column.
    #[arg(long)]
    data: PathBuf,
    /// Read this column of a CSV file with a header row.
    #[arg(long)]
    column: Option<String>,
    /// burr, gamma or normal.
    #[arg(long, default_value = "burr")]
    family: String,
    /// B, L2, ks, ks_sqrt_n, cvm, ad, watson, or a tagged form such as B_3.
    #[arg(long, default_value = "B")]
    stat: String,
    /// Tuning parameter of B and L2.
    #[arg(long)]
    a: Option<f64>,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 100)]
    b: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON outcome here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Directory for power.csv, power.md and report.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    family: String,
    /// Comma-separated name=value pairs; omitted parameters take defaults.
    #[arg(long, default_value = "")]
    params: String,
    /// Points of the condition-check grid (at least 100).
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    json::to_string(v).map_err(|e| CliError::Input(format!("serializing output: {e}")))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Test(t) => {
            let outcome = run_test(&TestRequest {
                data: t.data,
                column: t.column,
                family: t.family,
                stat: t.stat,
                a: t.a,
                b: t.b,
                alpha: t.alpha,
                seed: t.seed,
            })?;
            emit(&to_json(&outcome)?, t.json.as_ref())?;
            if t.json.is_some() {
                println!(
                    "{} = {} (critical value {}, p = {}): {}",
                    outcome.statistic,
                    json::format_f64(outcome.statistic_value),
                    json::format_f64(outcome.critical_value),
                    json::format_f64(outcome.p_value),
                    if outcome.reject { "reject" } else { "do not reject" }
                );
            }
        }
        Command::Simulate(s) => {
            let files = run_simulate(&s.config, &s.out)?;
            println!("config sha256: {}", files.config_sha256);
            for p in [&files.csv, &files.markdown, &files.json] {
                println!("wrote {}", p.display());
            }
            eprintln!("wall time: {:.1} s", files.wall_time_secs);
        }
        Command::Verify(v) => {
            let out = run_verify(&v.family, &v.params, v.grid)?;
            emit(&to_json(&out)?, v.json.as_ref())?;
        }
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        pool = pool.num_threads(k);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
