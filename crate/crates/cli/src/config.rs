use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use topofield::fusion::RegWeights;
use topofield::losses::{GateSchedule, LossWeights};

use crate::UsageError;

/// Defaults read from `--config`; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub tau: Option<i64>,
    pub bins: Option<Vec<f64>>,
    pub train_years: Option<String>,
    pub test_years: Option<String>,
    pub clamp: Option<bool>,
    pub loss_weights: Option<LossWeights>,
    pub gate: Option<GateSchedule>,
    pub reg_weights: Option<RegWeights>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }
}

/// Parses `1980-2015,2017` style year lists.
pub fn parse_years(spec: &str) -> Result<BTreeSet<i32>> {
    let bad = || UsageError(format!("invalid year list {spec:?}"));
    let mut years = BTreeSet::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (i32, i32) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if a > b {
                    return Err(bad().into());
                }
                years.extend(a..=b);
            }
            None => {
                years.insert(part.parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(years)
}

/// Parses `3,4,5` bin edges.
pub fn parse_bins(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| UsageError(format!("invalid bin edges {spec:?}")).into())
        })
        .collect()
}
