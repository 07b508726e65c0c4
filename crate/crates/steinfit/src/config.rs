//! Power-study configuration files: schema checks that report every bad
//! field, and the provenance hash.

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use steinfit_core::estimation::TestFamily;
use steinfit_core::gof::StatisticId;
use steinfit_core::simulation::{Alternative, PowerStudyConfig};

use crate::error::CliError;

const KEYS: &[&str] = &[
    "n",
    "alpha",
    "mc_reps",
    "bootstrap_B",
    "seed",
    "statistics",
    "alternatives",
    "family",
    "share_bootstrap",
];

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn field<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, problems: &mut Vec<String>) -> Option<T> {
    let Some(v) = obj.get(key) else {
        problems.push(format!("{key}: missing"));
        return None;
    };
    serde_json::from_value(v.clone())
        .map_err(|e| problems.push(format!("{key}: {e}")))
        .ok()
}

fn list<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, problems: &mut Vec<String>) -> Option<Vec<T>> {
    let Some(v) = obj.get(key) else {
        problems.push(format!("{key}: missing"));
        return None;
    };
    let Some(items) = v.as_array() else {
        problems.push(format!("{key}: expected a list"));
        return None;
    };
    let before = problems.len();
    let out: Vec<T> = items
        .iter()
        .enumerate()
        .filter_map(|(i, item)| {
            serde_json::from_value(item.clone())
                .map_err(|e| problems.push(format!("{key}[{i}]: {e}")))
                .ok()
        })
        .collect();
    (problems.len() == before).then_some(out)
}

/// Parses and validates a configuration; the error lists one problem per
/// line.
pub fn parse_config(text: &str) -> Result<PowerStudyConfig, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("config is not valid JSON: {e}")))?;
    let Value::Object(obj) = value else {
        return Err(CliError::Input("config must be a JSON object".into()));
    };
    let mut problems = Vec::new();
    for key in obj.keys() {
        if !KEYS.contains(&key.as_str()) {
            problems.push(format!("{key}: unknown field (expected one of: {})", KEYS.join(", ")));
        }
    }
    let n = field::<usize>(&obj, "n", &mut problems);
    let alpha = field::<f64>(&obj, "alpha", &mut problems);
    let mc_reps = field::<usize>(&obj, "mc_reps", &mut problems);
    let bootstrap_b = field::<usize>(&obj, "bootstrap_B", &mut problems);
    let seed = field::<u64>(&obj, "seed", &mut problems);
    let statistics = list::<StatisticId>(&obj, "statistics", &mut problems);
    let alternatives = list::<Alternative>(&obj, "alternatives", &mut problems);
    let family = match obj.get("family") {
        None => Some(TestFamily::Burr),
        Some(_) => field::<TestFamily>(&obj, "family", &mut problems),
    };
    let share_bootstrap = match obj.get("share_bootstrap") {
        None => Some(true),
        Some(_) => field::<bool>(&obj, "share_bootstrap", &mut problems),
    };
    if let (
        Some(n),
        Some(alpha),
        Some(mc_reps),
        Some(bootstrap_b),
        Some(seed),
        Some(statistics),
        Some(alternatives),
        Some(family),
        Some(share_bootstrap),
    ) = (n, alpha, mc_reps, bootstrap_b, seed, statistics, alternatives, family, share_bootstrap)
    {
        let cfg = PowerStudyConfig {
            n,
            alpha,
            mc_reps,
            bootstrap_b,
            seed,
            statistics,
            alternatives,
            family,
            share_bootstrap,
        };
        problems.extend(cfg.problems());
        if problems.is_empty() {
            return Ok(cfg);
        }
    }
    Err(CliError::Input(format!("invalid config:\n  {}", problems.join("\n  "))))
}
