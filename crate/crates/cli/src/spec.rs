//! Run specification. Values come from built-in defaults, then an optional
//! TOML file, then command-line flags; later sources win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use rankga_core::problems::Tolerance;
use rankga_core::tsplib::read_tsplib;
use rankga_core::{
    Benchmark, DistanceMetric, FitnessTransform, GaConfig, MutationPolicy, MutationScope, Optimum,
    Problem,
};

pub const OUT_DIR_ENV: &str = "RANKGA_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "results";
const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    #[value(alias = "constant")]
    #[serde(alias = "constant")]
    Sga,
    Fitness,
    Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScopeName {
    PerGene,
    SingleGene,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TransformName {
    #[default]
    WorstMinusCost,
    Reciprocal,
}

impl From<ScopeName> for MutationScope {
    fn from(s: ScopeName) -> Self {
        match s {
            ScopeName::PerGene => MutationScope::PerGene,
            ScopeName::SingleGene => MutationScope::SingleGene,
        }
    }
}

impl From<TransformName> for FitnessTransform {
    fn from(t: TransformName) -> Self {
        match t {
            TransformName::WorstMinusCost => FitnessTransform::WorstMinusCost,
            TransformName::Reciprocal => FitnessTransform::Reciprocal,
        }
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is not a probability in [0, 1]"))
    }
}

/// Every setting as an optional value. Used both for flags and for the
/// TOML config file, whose keys are the field names.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// TOML file supplying any of these settings.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// `f1`, `f7` or `tsp:<path to TSPLIB file>`.
    #[arg(long)]
    pub problem: Option<String>,

    /// Mutation policy (`run` only; `suite` runs all three).
    #[arg(long, value_enum)]
    pub policy: Option<PolicyName>,

    /// Constant mutation probability for the SGA policy.
    #[arg(long, value_parser = probability)]
    pub p: Option<f64>,

    /// Maximum probability for the adaptive policies.
    #[arg(long = "pmax", value_parser = probability)]
    pub p_max: Option<f64>,

    /// Population size. Repeat for `suite` to run several sizes.
    #[arg(long)]
    pub pop: Option<Vec<usize>>,

    #[arg(long)]
    pub trials: Option<usize>,

    /// Base seed; trial seeds are derived from it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    pub seed: Option<u64>,

    /// Output directory [default: $RANKGA_OUT_DIR or ./results].
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads for trials [default: available cores].
    #[arg(long)]
    pub workers: Option<usize>,

    #[arg(long, value_parser = probability)]
    pub crossover: Option<f64>,

    /// Generations without improvement that end a trial.
    #[arg(long)]
    pub window: Option<usize>,

    /// Safety cap on generations per trial.
    #[arg(long)]
    pub max_generations: Option<usize>,

    /// Best parents copied unchanged into each generation; 0 disables
    /// elitism.
    #[arg(long)]
    pub elite: Option<usize>,

    /// How a chromosome's probability is applied [default: single-gene for
    /// sga, per-gene for the adaptive policies].
    #[arg(long, value_enum)]
    pub scope: Option<ScopeName>,

    /// Cost to fitness mapping for the fitness-adaptive policy.
    #[arg(long, value_enum)]
    pub transform: Option<TransformName>,

    /// Round TSP edge lengths to the nearest integer.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub rounded: Option<bool>,

    /// Optimum cost used to count hits; replaces the built-in target.
    #[arg(long)]
    pub optimum: Option<f64>,

    /// Hit tolerance: absolute for f1/f7, relative for TSP.
    #[arg(long)]
    pub optimum_tolerance: Option<f64>,

    /// Trial to plot [default: the median-cost trial].
    #[arg(long)]
    pub plot_trial: Option<usize>,

    /// Write per-trial trace plots.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub plots: Option<bool>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Suite,
}

/// Fully resolved settings. Written next to the results; feeding the file
/// back through `--config` reproduces them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSpec {
    pub problem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyName>,
    pub p: f64,
    pub p_max: f64,
    pub pop: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub workers: usize,
    pub crossover: f64,
    pub window: usize,
    pub max_generations: usize,
    pub elite: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<ScopeName>,
    pub transform: TransformName,
    pub rounded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_trial: Option<usize>,
    pub plots: bool,
}

fn check_probability(name: &str, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        bail!("{name} = {p} is not a probability in [0, 1]");
    }
    Ok(p)
}

impl RunSpec {
    pub fn resolve(mode: Mode, flags: Overrides) -> Result<RunSpec> {
        let file = match &flags.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        macro_rules! pick {
            ($field:ident) => {
                flags.$field.clone().or(file.$field.clone())
            };
        }
        let defaults = GaConfig::default();

        let Some(problem) = pick!(problem) else {
            bail!("no problem given; use --problem f1|f7|tsp:<path>");
        };
        let problem = normalize_problem(&problem)?;
        let is_tsp = problem.starts_with("tsp:");

        let policy = pick!(policy);
        if mode == Mode::Run && policy.is_none() {
            bail!("run needs --policy sga|fitness|rank");
        }
        let pop = pick!(pop).unwrap_or_else(|| match (mode, is_tsp) {
            (Mode::Run, false) => vec![10],
            (Mode::Run, true) => vec![250],
            (Mode::Suite, false) => vec![10, 20],
            (Mode::Suite, true) => vec![250, 500],
        });
        if pop.is_empty() {
            bail!("at least one population size is needed");
        }
        if mode == Mode::Run && pop.len() > 1 {
            bail!("run takes a single --pop; use suite for several sizes");
        }
        let out = pick!(out)
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let workers = pick!(workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

        let spec = RunSpec {
            problem,
            policy: if mode == Mode::Run { policy } else { None },
            p: check_probability("p", pick!(p).unwrap_or(MutationPolicy::DEFAULT_CONSTANT_P))?,
            p_max: check_probability("p_max", pick!(p_max).unwrap_or(MutationPolicy::DEFAULT_P_MAX))?,
            pop,
            trials: pick!(trials).unwrap_or(200),
            seed: pick!(seed).unwrap_or(DEFAULT_SEED),
            out,
            workers: workers.max(1),
            crossover: check_probability(
                "crossover",
                pick!(crossover).unwrap_or(defaults.crossover_probability),
            )?,
            window: pick!(window).unwrap_or(defaults.convergence_window),
            max_generations: pick!(max_generations).unwrap_or(defaults.max_generations),
            elite: pick!(elite).unwrap_or(defaults.elite_count),
            scope: pick!(scope),
            transform: pick!(transform).unwrap_or_default(),
            rounded: pick!(rounded).unwrap_or(false),
            optimum: pick!(optimum),
            optimum_tolerance: pick!(optimum_tolerance),
            plot_trial: pick!(plot_trial),
            plots: pick!(plots).unwrap_or(true),
        };
        if spec.trials == 0 {
            bail!("trials must be at least 1");
        }
        if spec.seed > i64::MAX as u64 {
            bail!("seed {} is above {}", spec.seed, i64::MAX);
        }
        if let Some(t) = spec.plot_trial {
            if t >= spec.trials {
                bail!("plot trial {t} is out of range for {} trials", spec.trials);
            }
        }
        if spec.optimum_tolerance.is_some_and(|t| t.is_nan() || t < 0.0) {
            bail!("optimum tolerance must be non-negative");
        }
        Ok(spec)
    }

    /// The policies this spec runs, in table order.
    pub fn policies(&self) -> Vec<MutationPolicy> {
        let all = [
            MutationPolicy::constant(self.p),
            MutationPolicy::fitness_adaptive(self.p_max),
            MutationPolicy::rank_adaptive(self.p_max),
        ];
        match self.policy {
            None => all.to_vec(),
            Some(PolicyName::Sga) => vec![all[0]],
            Some(PolicyName::Fitness) => vec![all[1]],
            Some(PolicyName::Rank) => vec![all[2]],
        }
    }

    pub fn ga_config(&self, policy: MutationPolicy, population_size: usize) -> GaConfig {
        GaConfig {
            population_size,
            crossover_probability: self.crossover,
            mutation_policy: policy,
            fitness_transform: self.transform.into(),
            convergence_window: self.window,
            max_generations: self.max_generations,
            mutation_scope: self.scope.map(Into::into),
            elite_count: self.elite,
            ..GaConfig::default()
        }
    }

    pub fn benchmark(&self) -> Result<Benchmark> {
        let bench = match self.problem.as_str() {
            "f1" => Benchmark::f1(),
            "f7" => Benchmark::f7(),
            other => {
                let path = other.strip_prefix("tsp:").expect("normalized problem");
                let instance = read_tsplib(path)
                    .with_context(|| format!("cannot load TSP instance {path}"))?;
                let metric = if self.rounded {
                    DistanceMetric::RoundedEuclidean
                } else {
                    DistanceMetric::Euclidean
                };
                Benchmark::tsp(instance, metric)
            }
        };
        let builtin = bench.optimum();
        let optimum = match (self.optimum, builtin) {
            (Some(target), _) if self.problem.starts_with("tsp:") => Some(Optimum::relative(
                target,
                self.optimum_tolerance.unwrap_or(Optimum::TOUR_TOLERANCE),
            )),
            (Some(target), _) => Some(Optimum::absolute(
                target,
                self.optimum_tolerance.unwrap_or(Optimum::FUNCTION_TOLERANCE),
            )),
            (None, Some(o)) => Some(match (o.tolerance, self.optimum_tolerance) {
                (Tolerance::Absolute(_), Some(t)) => Optimum::absolute(o.target, t),
                (Tolerance::Relative(_), Some(t)) => Optimum::relative(o.target, t),
                _ => o,
            }),
            (None, None) => None,
        };
        Ok(bench.with_optimum(optimum))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).context("cannot serialize run spec")
    }
}

fn normalize_problem(problem: &str) -> Result<String> {
    match problem {
        "f1" | "f7" => Ok(problem.to_string()),
        other => match other.strip_prefix("tsp:") {
            Some("") => bail!("tsp problem needs a path: tsp:<file>"),
            Some(path) => {
                let absolute = std::fs::canonicalize(path)
                    .with_context(|| format!("cannot open TSP instance {path}"))?;
                Ok(format!("tsp:{}", absolute.display()))
            }
            None => bail!("unknown problem '{other}'; expected f1, f7 or tsp:<path>"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(problem: &str) -> Overrides {
        Overrides {
            problem: Some(problem.into()),
            ..Overrides::default()
        }
    }

    #[test]
    fn suite_grid_follows_problem() {
        let f7 = RunSpec::resolve(Mode::Suite, flags("f7")).unwrap();
        assert_eq!(f7.pop, vec![10, 20]);
        assert_eq!(f7.policies().len(), 3);
    }

    #[test]
    fn run_requires_policy_and_one_size() {
        assert!(RunSpec::resolve(Mode::Run, flags("f1")).is_err());
        let mut f = flags("f1");
        f.policy = Some(PolicyName::Rank);
        f.pop = Some(vec![10, 20]);
        assert!(RunSpec::resolve(Mode::Run, f.clone()).is_err());
        f.pop = Some(vec![10]);
        let spec = RunSpec::resolve(Mode::Run, f).unwrap();
        assert_eq!(spec.policies(), vec![MutationPolicy::rank_adaptive(0.1)]);
        assert_eq!(spec.crossover, 0.8);
        assert_eq!(spec.window, 50);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.toml");
        std::fs::write(&path, "problem = \"f7\"\ntrials = 7\nseed = 3\npop = [12]\n").unwrap();
        let f = Overrides {
            config: Some(path),
            trials: Some(9),
            ..Overrides::default()
        };
        let spec = RunSpec::resolve(Mode::Suite, f).unwrap();
        assert_eq!((spec.problem.as_str(), spec.trials, spec.seed), ("f7", 9, 3));
        assert_eq!(spec.pop, vec![12]);
    }

    #[test]
    fn resolved_spec_round_trips_through_toml() {
        let mut f = flags("f1");
        f.policy = Some(PolicyName::Fitness);
        f.scope = Some(ScopeName::SingleGene);
        f.optimum = Some(0.0);
        let spec = RunSpec::resolve(Mode::Run, f).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("again.toml");
        std::fs::write(&path, spec.to_toml().unwrap()).unwrap();
        let again = RunSpec::resolve(
            Mode::Run,
            Overrides {
                config: Some(path),
                ..Overrides::default()
            },
        )
        .unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(RunSpec::resolve(Mode::Suite, flags("f9")).is_err());
        assert!(RunSpec::resolve(Mode::Suite, flags("tsp:")).is_err());
        assert!(RunSpec::resolve(Mode::Suite, flags("tsp:/no/such/file.tsp")).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "problem = \"f1\"\np_max = 1.5\n").unwrap();
        let f = Overrides {
            config: Some(path.clone()),
            ..Overrides::default()
        };
        assert!(RunSpec::resolve(Mode::Suite, f).is_err());
        std::fs::write(&path, "problem = \"f1\"\nbogus = 1\n").unwrap();
        let f = Overrides {
            config: Some(path),
            ..Overrides::default()
        };
        assert!(RunSpec::resolve(Mode::Suite, f).is_err());
    }
}
