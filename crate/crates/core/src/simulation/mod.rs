//! Monte Carlo power studies: rejection rates of bootstrap tests against a
//! list of alternatives, and their tabulation.
//!
//! Replicate `r` of alternative `A` uses the stream
//! `master.keyed(label(A)).substream(r)`; its data come from sub-stream 0
//! and its bootstrap from sub-stream 1. Counts therefore do not depend on
//! the order of the alternatives, on the other alternatives present, or on
//! the number of threads.


use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_test, bootstrap_test_many};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimation::TestFamily;
use crate::gof::StatisticId;
use crate::par::map_indices;
use crate::rng::RngStream;

/// A sampling law for a power study, written as a table label (`"W(0.5)"`)
/// or as `{"family": "weibull", "k": 0.5}` with omitted parameters taking
/// their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlternativeRepr", into = "String")]
pub struct Alternative(pub DistributionSpec);

#[derive(Deserialize)]
#[serde(untagged)]
enum AlternativeRepr {
    Label(String),
    Object {
        family: String,
        #[serde(flatten)]
        params: BTreeMap<String, f64>,
    },
}

impl TryFrom<AlternativeRepr> for Alternative {
    type Error = Error;
    fn try_from(r: AlternativeRepr) -> Result<Self> {
        match r {
            AlternativeRepr::Label(s) => Alternative::parse(&s),
            AlternativeRepr::Object { family, params } => {
                let pairs: Vec<(String, f64)> = params.into_iter().collect();
                DistributionSpec::from_name(&family, &pairs).map(Alternative)
            }
        }
    }
}

impl From<Alternative> for String {
    fn from(a: Alternative) -> String {
        a.label()
    }
}

impl Alternative {
    pub fn parse(label: &str) -> Result<Self> {
        DistributionSpec::parse_label(label).map(Alternative)
    }

    pub fn label(&self) -> String {
        self.0.label()
    }
}

fn default_family() -> TestFamily {
    TestFamily::Burr
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerStudyConfig {
    pub n: usize,
    pub alpha: f64,
    pub mc_reps: usize,
    #[serde(rename = "bootstrap_B")]
    pub bootstrap_b: usize,
    pub seed: u64,
    pub statistics: Vec<StatisticId>,
    pub alternatives: Vec<Alternative>,
    /// Hypothesized family.
    #[serde(default = "default_family")]
    pub family: TestFamily,
    /// Evaluate every statistic on the same bootstrap samples. When off,
    /// each statistic draws its own replicates.
    #[serde(default = "yes")]
    pub share_bootstrap: bool,
}

impl PowerStudyConfig {
    /// Every violated constraint, one message per field.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n < 2 {
            out.push(format!("n: must be at least 2, got {}", self.n));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            out.push(format!("alpha: must lie in (0, 1), got {}", self.alpha));
        }
        if self.mc_reps == 0 {
            out.push("mc_reps: must be at least 1".into());
        }
        if self.bootstrap_b == 0 {
            out.push("bootstrap_B: must be at least 1".into());
        }
        if self.statistics.is_empty() {
            out.push("statistics: must not be empty".into());
        }
        for st in &self.statistics {
            if !st.supports(self.family) {
                out.push(format!(
                    "statistics: {st} cannot test the {} family",
                    self.family.name()
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(p.join("; ")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub alternative: String,
    pub statistic: StatisticId,
    pub rejections: usize,
    /// Replicates that produced a decision.
    pub reps: usize,
    pub failed: usize,
    pub rate: f64,
    pub se: f64,
    /// More than 5% of the replicates failed; counts are partial.
    pub aborted: bool,
}

impl CellResult {
    /// `100·rate` rounded half up.
    pub fn percent(&self) -> Option<usize> {
        (self.reps > 0).then(|| (200 * self.rejections + self.reps) / (2 * self.reps))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerStudyReport {
    pub config: PowerStudyConfig,
    /// Alternative-major, in configuration order.
    pub cells: Vec<CellResult>,
    pub wall_time_secs: Option<f64>,
}

impl PowerStudyReport {
    pub fn cell(&self, alternative: &str, statistic: StatisticId) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.alternative == alternative && c.statistic == statistic)
    }
}

/// Decisions of one replicate, one per statistic; `None` marks a failure.
fn replicate(cfg: &PowerStudyConfig, alt: &DistributionSpec, stream: RngStream) -> Vec<Option<bool>> {
    let failed = || alloc::vec![None; cfg.statistics.len()];
    let Ok(data) = alt.sample(cfg.n, &stream.substream(0)) else {
        return failed();
    };
    let boot = stream.substream(1);
    if cfg.share_bootstrap {
        match bootstrap_test_many(&data, cfg.family, &cfg.statistics, cfg.bootstrap_b, cfg.alpha, &boot) {
            Ok(outcomes) => outcomes.into_iter().map(|o| o.ok().map(|o| o.reject)).collect(),
            Err(_) => failed(),
        }
    } else {
        cfg.statistics
            .iter()
            .map(|st| {
                bootstrap_test(&data, cfg.family, *st, cfg.bootstrap_b, cfg.alpha, &boot.keyed(&st.id()))
                    .ok()
                    .map(|o| o.reject)
            })
            .collect()
    }
}

/// Runs the study. Failures inside a cell are counted, not raised.
pub fn run_power_study(cfg: &PowerStudyConfig) -> Result<PowerStudyReport> {
    cfg.validate()?;
    let master = RngStream::new(cfg.seed, 0);
    let mut cells = Vec::with_capacity(cfg.alternatives.len() * cfg.statistics.len());
    for alt in &cfg.alternatives {
        let label = alt.label();
        let stream = master.keyed(&label);
        let decisions = map_indices(cfg.mc_reps, |r| replicate(cfg, &alt.0, stream.substream(r as u64)));
        for (i, st) in cfg.statistics.iter().enumerate() {
            let rejections = decisions.iter().filter(|d| d[i] == Some(true)).count();
            let failed = decisions.iter().filter(|d| d[i].is_none()).count();
            let reps = cfg.mc_reps - failed;
            let rate = if reps > 0 { rejections as f64 / reps as f64 } else { 0.0 };
            cells.push(CellResult {
                alternative: label.clone(),
                statistic: *st,
                rejections,
                reps,
                failed,
                rate,
                se: if reps > 0 { (rate * (1.0 - rate) / reps as f64).sqrt() } else { 0.0 },
                aborted: failed * 20 > cfg.mc_reps,
            });
        }
    }
    Ok(PowerStudyReport {
        config: cfg.clone(),
        cells,
        wall_time_secs: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_table(report: &PowerStudyReport, format: TableFormat) -> String {
    let stats = &report.config.statistics;
    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            out.push_str("| Alt./Test |");
            for st in stats {
                out.push_str(&format!(" {} |", st.heading()));
            }
            out.push_str("\n|---|");
            for _ in stats {
                out.push_str("---:|");
            }
            out.push('\n');
            for alt in &report.config.alternatives {
                let label = alt.label();
                out.push_str(&format!("| {label} |"));
                for st in stats {
                    let cell = report.cell(&label, *st);
                    let text = match cell.and_then(|c| c.percent().map(|p| (p, c.aborted))) {
                        Some((p, false)) => p.to_string(),
                        Some((p, true)) => format!("{p}*"),
                        None => "n/a".into(),
                    };
                    out.push_str(&format!(" {text} |"));
                }
                out.push('\n');
            }
        }
        TableFormat::Csv => {
            out.push_str("alternative,statistic,rejections,reps,rate,se,failed,aborted\n");
            for c in &report.cells {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    csv_field(&c.alternative),
                    csv_field(&c.statistic.id()),
                    c.rejections,
                    c.reps,
                    c.rate,
                    c.se,
                    c.failed,
                    c.aborted
                ));
            }
        }
    }
    out
}
