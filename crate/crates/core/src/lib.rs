//! Generational genetic algorithm with interchangeable mutation-probability
//! policies and a multi-trial benchmark harness.
//!
//! Three policies decide how strongly each chromosome is mutated:
//!
//! - [`MutationPolicy::Constant`]: the classic simple GA, one probability for
//!   everybody.
//! - [`MutationPolicy::FitnessAdaptive`]: `p = p_max * (1 - f / f_max)`, so the
//!   probability shrinks as an individual's fitness approaches the best one.
//! - [`MutationPolicy::RankAdaptive`]: `p = p_max * (1 - (r - 1) / (N - 1))`,
//!   which only looks at the fitness order and therefore ignores the shape of
//!   the fitness distribution.
//!
//! The [`problems`] module provides De Jong's f1, the multimodal f7 and
//! random-key encoded TSP instances loaded through [`tsplib`]. Campaigns of
//! seeded trials are run and summarized by [`experiment`].

pub mod error;
pub mod experiment;
pub mod ga;
pub mod genome;
pub mod policy;
pub mod problems;
pub mod rng;
pub mod tsplib;

pub use error::{Error, Result};
pub use experiment::{
    population_skewness, run_campaign, CampaignConfig, CampaignStats, Skewness, TrialResult,
};
pub use ga::{
    initialize_population, mutate, next_generation, one_point_crossover, run_until_converged,
    tournament_select, GaConfig, GenerationObserver, MutationScope, GenerationSnapshot, Individual,
    Population, RunOutcome, StopReason,
};
pub use genome::{Genome, GenomeKind, GenomeSpec};
pub use policy::{FitnessTransform, MutationPolicy, RankAssignment, RateScale};
pub use problems::{Benchmark, DistanceMetric, Optimum, Problem, TspInstance};
pub use rng::RandomStream;
