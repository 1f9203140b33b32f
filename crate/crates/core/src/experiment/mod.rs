//! Multi-trial campaigns and their summary statistics.

mod output;
mod plot;
mod skewness;

pub use output::{
    read_trials_csv, write_campaign, write_summary_csv, write_trials_csv, CampaignFiles,
    SummaryRow, TrialRow,
};
pub use plot::{emit_plots, render_trace_svg, PlotFiles};
pub use skewness::{fitness_skewness, population_skewness, Skewness};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{self, GaConfig, GenerationObserver, GenerationSnapshot, StopReason};
use crate::problems::Problem;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// GA settings shared by every trial. `rng_seed` is replaced per trial.
    pub ga: GaConfig,
    pub trials: usize,
    pub base_seed: u64,
}

impl CampaignConfig {
    pub const DEFAULT_TRIALS: usize = 200;

    pub fn new(ga: GaConfig, trials: usize, base_seed: u64) -> Self {
        CampaignConfig {
            ga,
            trials,
            base_seed,
        }
    }

    pub fn trial_config(&self, index: usize) -> GaConfig {
        GaConfig {
            rng_seed: rng::trial_seed(self.base_seed, index as u64),
            ..self.ga.clone()
        }
    }

    /// `<problem>_<policy>_pop<N>`, safe for file names.
    pub fn campaign_id(&self, problem: &dyn Problem) -> String {
        let problem: String = problem
            .name()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
            .collect();
        format!(
            "{problem}_{}_pop{}",
            self.ga.mutation_policy.label(),
            self.ga.population_size
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub index: usize,
    pub seed: u64,
    pub generations_evolved: usize,
    pub lowest_cost: f64,
    pub optimum_hit: bool,
    pub capped: bool,
    /// Best-so-far cost after each generation, starting at generation 1.
    pub cost_trace: Vec<f64>,
    /// Fitness skewness of each generation, starting at generation 1.
    pub skewness_trace: Vec<Skewness>,
}

impl TrialResult {
    /// Mean fitness skewness over the last `window` generations.
    pub fn tail_skewness(&self, window: usize) -> f64 {
        let tail = &self.skewness_trace[self.skewness_trace.len().saturating_sub(window)..];
        if tail.is_empty() {
            return 0.0;
        }
        tail.iter().map(|s| s.value).sum::<f64>() / tail.len() as f64
    }
}

#[derive(Default)]
struct TraceRecorder {
    costs: Vec<f64>,
    skewness: Vec<Skewness>,
    scratch: Vec<f64>,
}

impl GenerationObserver for TraceRecorder {
    fn observe(&mut self, snapshot: &GenerationSnapshot<'_>) {
        self.scratch.clear();
        self.scratch
            .extend(snapshot.population.members().iter().map(|m| m.cost));
        self.costs.push(snapshot.best_so_far);
        self.skewness.push(fitness_skewness(&self.scratch));
    }
}

pub fn run_trial(cfg: &CampaignConfig, index: usize, problem: &dyn Problem) -> Result<TrialResult> {
    let ga = cfg.trial_config(index);
    let mut recorder = TraceRecorder::default();
    let outcome = ga::run_until_converged(&ga, problem, &mut recorder)?;
    Ok(TrialResult {
        index,
        seed: ga.rng_seed,
        generations_evolved: outcome.generations_evolved,
        lowest_cost: outcome.lowest_cost,
        optimum_hit: outcome.optimum_hit,
        capped: outcome.stop == StopReason::Capped,
        cost_trace: recorder.costs,
        skewness_trace: recorder.skewness,
    })
}

/// Aggregates matching the result table columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub trials: usize,
    pub avg_generations: f64,
    pub avg_lowest_cost: f64,
    pub optimum_count: usize,
    pub max_generations: usize,
    pub optimum_pct: f64,
    pub capped_count: usize,
}

impl CampaignStats {
    /// Folds `(generations, lowest_cost, optimum_hit, capped)` tuples in the
    /// order given.
    pub fn fold<I>(outcomes: I) -> CampaignStats
    where
        I: IntoIterator<Item = (usize, f64, bool, bool)>,
    {
        let mut trials = 0;
        let mut generations = 0usize;
        let mut cost_sum = 0.0;
        let mut optimum_count = 0;
        let mut max_generations = 0;
        let mut capped_count = 0;
        for (gens, cost, hit, capped) in outcomes {
            trials += 1;
            generations += gens;
            cost_sum += cost;
            optimum_count += hit as usize;
            capped_count += capped as usize;
            max_generations = max_generations.max(gens);
        }
        let n = trials.max(1) as f64;
        CampaignStats {
            trials,
            avg_generations: generations as f64 / n,
            avg_lowest_cost: cost_sum / n,
            optimum_count,
            max_generations,
            optimum_pct: 100.0 * optimum_count as f64 / n,
            capped_count,
        }
    }

    pub fn from_trials(trials: &[TrialResult]) -> CampaignStats {
        let mut ordered: Vec<&TrialResult> = trials.iter().collect();
        ordered.sort_by_key(|t| t.index);
        Self::fold(
            ordered
                .into_iter()
                .map(|t| (t.generations_evolved, t.lowest_cost, t.optimum_hit, t.capped)),
        )
    }
}

/// Runs every trial of a campaign on at most `workers` threads. Results come
/// back ordered by trial index whatever the schedule.
pub fn run_campaign(
    cfg: &CampaignConfig,
    problem: &dyn Problem,
    workers: usize,
    progress: &(dyn Fn(&TrialResult) + Sync),
) -> Result<(CampaignStats, Vec<TrialResult>)> {
    if cfg.trials == 0 {
        return Err(Error::config("a campaign needs at least one trial"));
    }
    cfg.ga.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let trials: Vec<TrialResult> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let trial = run_trial(cfg, i, problem)?;
                progress(&trial);
                Ok(trial)
            })
            .collect::<Result<_>>()
    })?;
    Ok((CampaignStats::from_trials(&trials), trials))
}

/// Index of the trial with the median lowest cost (lower median, ties by
/// index).
pub fn median_trial(trials: &[TrialResult]) -> Option<usize> {
    let mut order: Vec<&TrialResult> = trials.iter().collect();
    order.sort_by(|a, b| a.lowest_cost.total_cmp(&b.lowest_cost).then(a.index.cmp(&b.index)));
    order.get(order.len().checked_sub(1)? / 2).map(|t| t.index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::MutationPolicy;
    use crate::problems::Benchmark;

    fn config(trials: usize) -> CampaignConfig {
        CampaignConfig::new(
            GaConfig {
                mutation_policy: MutationPolicy::rank_adaptive(0.1),
                ..GaConfig::default()
            },
            trials,
            99,
        )
    }

    #[test]
    fn single_trial_stats_equal_trial() {
        let f1 = Benchmark::f1();
        let (stats, trials) = run_campaign(&config(1), &f1, 1, &|_| {}).unwrap();
        let t = &trials[0];
        assert_eq!(stats.trials, 1);
        assert_eq!(stats.avg_generations, t.generations_evolved as f64);
        assert_eq!(stats.avg_lowest_cost, t.lowest_cost);
        assert_eq!(stats.max_generations, t.generations_evolved);
        assert_eq!(stats.optimum_count, t.optimum_hit as usize);
        assert_eq!(t.skewness_trace.len(), t.generations_evolved);
        assert_eq!(t.cost_trace.len(), t.generations_evolved);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f7 = Benchmark::f7();
        let cfg = config(12);
        let (s1, t1) = run_campaign(&cfg, &f7, 1, &|_| {}).unwrap();
        let (s4, t4) = run_campaign(&cfg, &f7, 4, &|_| {}).unwrap();
        assert_eq!(s1, s4);
        assert_eq!(t1, t4);
    }

    #[test]
    fn stats_bounds() {
        let f1 = Benchmark::f1();
        let (stats, trials) = run_campaign(&config(20), &f1, 2, &|_| {}).unwrap();
        assert!(stats.avg_lowest_cost >= 0.0);
        assert!(stats.optimum_count <= stats.trials);
        assert!(trials.iter().all(|t| stats.max_generations >= t.generations_evolved));
        assert_eq!(stats.optimum_pct, 100.0 * stats.optimum_count as f64 / 20.0);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_campaign(&config(0), &Benchmark::f1(), 1, &|_| {}).is_err());
    }

    #[test]
    fn campaign_ids() {
        let cfg = config(1);
        assert_eq!(cfg.campaign_id(&Benchmark::f1()), "f1_rank_pop10");
    }

    #[test]
    fn median_pick() {
        let mk = |index, lowest_cost| TrialResult {
            index,
            seed: 0,
            generations_evolved: 1,
            lowest_cost,
            optimum_hit: false,
            capped: false,
            cost_trace: vec![lowest_cost],
            skewness_trace: vec![],
        };
        let trials = vec![mk(0, 5.0), mk(1, 1.0), mk(2, 3.0), mk(3, 9.0)];
        assert_eq!(median_trial(&trials), Some(2));
        assert_eq!(median_trial(&[]), None);
    }
}
