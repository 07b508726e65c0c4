//! The work behind each subcommand, separated from argument parsing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use steinfit_core::bootstrap::{bootstrap_test, TestOutcome};
use steinfit_core::characterization::{
    check_conditions, fixed_point_residual, residual_grid, ConditionReport, OperatorKind,
};
use steinfit_core::distributions::DistributionSpec;
use steinfit_core::estimation::TestFamily;
use steinfit_core::gof::StatisticId;
use steinfit_core::simulation::{render_table, run_power_study, PowerStudyReport, TableFormat};
use steinfit_core::{RngStream, Sample};

use crate::config::{parse_config, sha256_hex};
use crate::error::CliError;
use crate::io::read_observations;
use crate::json;

/// Points of the quantile grid behind the reported fixed-point residual.
pub const RESIDUAL_POINTS: usize = 50;

#[derive(Clone, Debug)]
pub struct TestRequest {
    pub data: PathBuf,
    pub column: Option<String>,
    pub family: String,
    pub stat: String,
    pub a: Option<f64>,
    pub b: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// `B` and `L2` take their tuning parameter from `--a`; full tags such as
/// `B_3` or `ks` stand alone.
pub fn resolve_statistic(stat: &str, a: Option<f64>) -> Result<StatisticId, CliError> {
    let bare = stat.trim().to_ascii_lowercase();
    let tuned = bare == "b" || bare == "l2";
    let text = match (tuned, a) {
        (true, Some(a)) => format!("{bare}_{a}"),
        (true, None) => return Err(CliError::Input(format!("statistic {stat} needs --a"))),
        (false, Some(_)) => {
            return Err(CliError::Input(format!(
                "--a only applies to the B and L2 statistics, not {stat}"
            )))
        }
        (false, None) => stat.to_string(),
    };
    Ok(StatisticId::parse(&text)?)
}

pub fn run_test(req: &TestRequest) -> Result<TestOutcome, CliError> {
    let family = TestFamily::parse(&req.family)?;
    let stat = resolve_statistic(&req.stat, req.a)?;
    if !stat.supports(family) {
        return Err(CliError::Input(format!(
            "statistic {stat} cannot test the {} family",
            family.name()
        )));
    }
    if req.b == 0 {
        return Err(CliError::Input("--B must be at least 1".into()));
    }
    if !(req.alpha > 0.0 && req.alpha < 1.0) {
        return Err(CliError::Input(format!("--alpha must lie in (0, 1), got {}", req.alpha)));
    }
    let obs = read_observations(&req.data, req.column.as_deref())?;
    if obs.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: at least 2 observations are needed, got {}",
            req.data.display(),
            obs.len()
        )));
    }
    if matches!(family, TestFamily::Burr | TestFamily::Gamma) {
        if let Some(o) = obs.iter().find(|o| !(o.value > 0.0)) {
            return Err(CliError::Input(format!(
                "line {}: {} is outside the support (0, ∞) of the {} family",
                o.line,
                o.value,
                family.name()
            )));
        }
    }
    let sample = Sample::new(obs.iter().map(|o| o.value).collect())?;
    Ok(bootstrap_test(&sample, family, stat, req.b, req.alpha, &RngStream::new(req.seed, 0))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub config_sha256: String,
    pub report: PowerStudyReport,
}

#[derive(Clone, Debug)]
pub struct SimulationFiles {
    pub config_sha256: String,
    pub csv: PathBuf,
    pub markdown: PathBuf,
    pub json: PathBuf,
    pub wall_time_secs: f64,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run_simulate(config: &Path, out: &Path) -> Result<SimulationFiles, CliError> {
    let bytes = std::fs::read(config).map_err(|e| CliError::io(config, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{}: not UTF-8", config.display())))?;
    let cfg = parse_config(&text)?;
    let hash = sha256_hex(&bytes);
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;

    let started = Instant::now();
    let mut report = run_power_study(&cfg)?;
    let secs = started.elapsed().as_secs_f64();
    report.wall_time_secs = Some(secs);

    let csv = out.join("power.csv");
    let markdown = out.join("power.md");
    let json_path = out.join("report.json");
    write(&csv, &render_table(&report, TableFormat::Csv))?;
    let md = format!(
        "{}\nn = {}, B = {}, alpha = {}, {} Monte Carlo replicates, {} family, config sha256 {}\n",
        render_table(&report, TableFormat::Markdown),
        cfg.n,
        cfg.bootstrap_b,
        cfg.alpha,
        cfg.mc_reps,
        cfg.family.name(),
        hash
    );
    write(&markdown, &md)?;
    let output = SimulationOutput {
        config_sha256: hash.clone(),
        report,
    };
    write(&json_path, &json::to_string(&output).map_err(|e| CliError::Input(e.to_string()))?)?;
    Ok(SimulationFiles {
        config_sha256: hash,
        csv,
        markdown,
        json: json_path,
        wall_time_secs: secs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutput {
    pub distribution: String,
    pub family: &'static str,
    pub params: Vec<(String, f64)>,
    pub supported: bool,
    pub passes: bool,
    pub conditions: ConditionReport,
    /// Largest `|T(F)(t) - F(t)|` over the quantiles `(i + 1/2)/50`.
    pub fixed_point_residual: Option<f64>,
    pub residual_points: usize,
    /// Why the residual is missing, when a characterization exists.
    pub residual_error: Option<String>,
}

/// `k=1,c=1` into pairs; an empty string gives no pairs.
pub fn parse_params(text: &str) -> Result<Vec<(String, f64)>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("parameter `{p}` is not of the form name=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("parameter `{p}`: `{}` is not a number", v.trim())))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn run_verify(family: &str, params: &str, grid: usize) -> Result<VerifyOutput, CliError> {
    let dist = DistributionSpec::from_name(family, &parse_params(params)?)?;
    let conditions = check_conditions(&dist, grid);
    // the condition verdicts are the primary result, so a residual that
    // cannot be computed is reported rather than raised
    let residual = OperatorKind::for_distribution(&dist).ok().map(|kind| {
        residual_grid(&dist, RESIDUAL_POINTS).and_then(|points| fixed_point_residual(&dist, &kind, &points))
    });
    let (fixed_point_residual, residual_error) = match residual {
        Some(Ok(r)) => (Some(r), None),
        Some(Err(e)) => (None, Some(e.to_string())),
        None => (None, None),
    };
    Ok(VerifyOutput {
        distribution: dist.label(),
        family: dist.family_name(),
        params: dist.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        supported: conditions.supported(),
        passes: conditions.passes(),
        conditions,
        fixed_point_residual,
        residual_points: RESIDUAL_POINTS,
        residual_error,
    })
}
