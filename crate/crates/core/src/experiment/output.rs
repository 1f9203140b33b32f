//! CSV result files.
//!
//! `<id>_summary.csv` holds one row per campaign with the table columns and
//! enough provenance to rerun it. `<id>_trials.csv` holds one row per trial.
//! Floats are written in shortest round-trip form, so folding the trial rows
//! back up reproduces the summary row exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CampaignConfig, CampaignStats, TrialResult};
use crate::error::{Error, Result};
use crate::problems::Problem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub campaign_id: String,
    pub problem: String,
    pub problem_checksum: String,
    pub approach: String,
    pub policy: String,
    pub mutation_probability: f64,
    pub mutation_scope: String,
    pub population_size: usize,
    pub crossover_probability: f64,
    pub elite_count: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub avg_generations: f64,
    pub avg_lowest_cost: f64,
    pub optimum_count: usize,
    pub max_generations: usize,
    pub optimum_pct: f64,
    pub capped_count: usize,
}

impl SummaryRow {
    pub fn new(
        campaign_id: &str,
        problem: &dyn Problem,
        cfg: &CampaignConfig,
        stats: &CampaignStats,
    ) -> Self {
        let policy = &cfg.ga.mutation_policy;
        SummaryRow {
            campaign_id: campaign_id.to_string(),
            problem: problem.name().to_string(),
            problem_checksum: format!("{:016x}", problem.checksum()),
            approach: policy.display_name().to_string(),
            policy: policy.label().to_string(),
            mutation_probability: policy.ceiling(),
            mutation_scope: cfg.ga.scope().label().to_string(),
            population_size: cfg.ga.population_size,
            crossover_probability: cfg.ga.crossover_probability,
            elite_count: cfg.ga.elite_count,
            trials: stats.trials,
            base_seed: cfg.base_seed,
            avg_generations: stats.avg_generations,
            avg_lowest_cost: stats.avg_lowest_cost,
            optimum_count: stats.optimum_count,
            max_generations: stats.max_generations,
            optimum_pct: stats.optimum_pct,
            capped_count: stats.capped_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub generations_evolved: usize,
    pub lowest_cost: f64,
    pub optimum_hit: bool,
    pub capped: bool,
    pub mean_skewness: f64,
}

impl From<&TrialResult> for TrialRow {
    fn from(t: &TrialResult) -> Self {
        let n = t.skewness_trace.len().max(1) as f64;
        TrialRow {
            trial: t.index,
            seed: t.seed,
            generations_evolved: t.generations_evolved,
            lowest_cost: t.lowest_cost,
            optimum_hit: t.optimum_hit,
            capped: t.capped,
            mean_skewness: t.skewness_trace.iter().map(|s| s.value).sum::<f64>() / n,
        }
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
        }
        _ => Ok(()),
    }
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    ensure_parent(path)?;
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        writer.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn write_summary_csv(path: impl AsRef<Path>, rows: &[SummaryRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

pub fn write_trials_csv(path: impl AsRef<Path>, trials: &[TrialResult]) -> Result<()> {
    write_rows(path.as_ref(), trials.iter().map(TrialRow::from))
}

pub fn read_trials_csv(path: impl AsRef<Path>) -> Result<Vec<TrialRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::csv(path, e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignFiles {
    pub summary: PathBuf,
    pub trials: PathBuf,
}

/// Writes `<dir>/<id>_summary.csv` and `<dir>/<id>_trials.csv`.
pub fn write_campaign(
    dir: impl AsRef<Path>,
    summary: &SummaryRow,
    trials: &[TrialResult],
) -> Result<CampaignFiles> {
    let dir = dir.as_ref();
    let files = CampaignFiles {
        summary: dir.join(format!("{}_summary.csv", summary.campaign_id)),
        trials: dir.join(format!("{}_trials.csv", summary.campaign_id)),
    };
    write_summary_csv(&files.summary, std::slice::from_ref(summary))?;
    write_trials_csv(&files.trials, trials)?;
    Ok(files)
}
