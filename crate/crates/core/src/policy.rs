//! Per-individual mutation probabilities.
//!
//! All three strategies look at a population of evaluated costs and return
//! one probability per member. Costs are minimized everywhere in this crate;
//! the adaptive rules are phrased for fitness maximization, so costs are
//! first turned into fitness with a [`FitnessTransform`].

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MutationPolicy {
    /// Simple GA: every chromosome mutates at `p`.
    Constant { p: f64 },
    /// `p = p_max * (1 - f / f_max)`.
    FitnessAdaptive { p_max: f64 },
    /// `p = p_max * (1 - (r - 1) / (N - 1))`.
    RankAdaptive { p_max: f64 },
}

impl MutationPolicy {
    pub const DEFAULT_CONSTANT_P: f64 = 0.05;
    pub const DEFAULT_P_MAX: f64 = 0.1;

    pub fn constant(p: f64) -> Self {
        MutationPolicy::Constant { p }
    }

    pub fn fitness_adaptive(p_max: f64) -> Self {
        MutationPolicy::FitnessAdaptive { p_max }
    }

    pub fn rank_adaptive(p_max: f64) -> Self {
        MutationPolicy::RankAdaptive { p_max }
    }

    /// The three policies at their default probabilities, in table order.
    pub fn defaults() -> [MutationPolicy; 3] {
        [
            MutationPolicy::constant(Self::DEFAULT_CONSTANT_P),
            MutationPolicy::fitness_adaptive(Self::DEFAULT_P_MAX),
            MutationPolicy::rank_adaptive(Self::DEFAULT_P_MAX),
        ]
    }

    /// `p` for the constant policy, `p_max` for the adaptive ones.
    pub fn ceiling(&self) -> f64 {
        match *self {
            MutationPolicy::Constant { p } => p,
            MutationPolicy::FitnessAdaptive { p_max } | MutationPolicy::RankAdaptive { p_max } => {
                p_max
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.ceiling();
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::config(format!(
                "mutation probability {p} is outside [0, 1]"
            )))
        }
    }

    /// Short identifier used in CSV files and campaign ids.
    pub fn label(&self) -> &'static str {
        match self {
            MutationPolicy::Constant { .. } => "sga",
            MutationPolicy::FitnessAdaptive { .. } => "fitness",
            MutationPolicy::RankAdaptive { .. } => "rank",
        }
    }

    /// Human-readable name matching the result tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            MutationPolicy::Constant { .. } => "SGA",
            MutationPolicy::FitnessAdaptive { .. } => "Fitness Based AGA",
            MutationPolicy::RankAdaptive { .. } => "Rank Based AGA",
        }
    }
}

impl fmt::Display for MutationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationPolicy::Constant { p } => write!(f, "sga(p={p})"),
            MutationPolicy::FitnessAdaptive { p_max } => write!(f, "fitness(p_max={p_max})"),
            MutationPolicy::RankAdaptive { p_max } => write!(f, "rank(p_max={p_max})"),
        }
    }
}

/// How costs become the fitness values fed to the fitness-adaptive rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessTransform {
    /// `f = worst_cost - cost`: best member gets `f_max`, worst gets 0.
    #[default]
    WorstMinusCost,
    /// `f = 1 / (1 + cost)`.
    Reciprocal,
}

impl FitnessTransform {
    pub fn apply(&self, costs: &[f64]) -> Vec<f64> {
        match self {
            FitnessTransform::WorstMinusCost => {
                let worst = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                costs.iter().map(|&c| fitness_of(c, worst)).collect()
            }
            FitnessTransform::Reciprocal => costs.iter().map(|&c| 1.0 / (1.0 + c)).collect(),
        }
    }
}

/// Fitness of a cost relative to the worst cost in its population.
pub fn fitness_of(cost: f64, population_worst_cost: f64) -> f64 {
    debug_assert!(
        cost <= population_worst_cost,
        "cost {cost} exceeds population worst {population_worst_cost}"
    );
    population_worst_cost - cost
}

/// Fitness-based adaptive probability.
///
/// A collapsed population (`f_max == 0`) gets `p_max` for every member so
/// the search keeps exploring.
pub fn fitness_adaptive_p(f: f64, f_max: f64, p_max: f64) -> f64 {
    debug_assert!(f <= f_max, "fitness {f} exceeds f_max {f_max}");
    if f_max > 0.0 {
        (p_max * (1.0 - f / f_max)).clamp(0.0, p_max)
    } else {
        p_max
    }
}

/// Rank-based adaptive probability. Rank `n` is the fittest and gets 0.
pub fn rank_adaptive_p(r: usize, n: usize, p_max: f64) -> f64 {
    debug_assert!((1..=n).contains(&r), "rank {r} outside 1..={n}");
    if n <= 1 {
        return 0.0;
    }
    p_max * (1.0 - (r - 1) as f64 / (n - 1) as f64)
}

/// Ranks indexed like the population: `ranks[i]` is member `i`'s rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAssignment {
    ranks: Vec<usize>,
}

impl RankAssignment {
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_of(&self, index: usize) -> usize {
        self.ranks[index]
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.ranks
    }
}

/// Ranks `1..=N` by ascending fitness. Equal fitnesses share their block of
/// ranks in uniformly random order.
pub fn assign_ranks(fitnesses: &[f64], rng: &mut RandomStream) -> RankAssignment {
    let mut order: Vec<(usize, u64)> = (0..fitnesses.len())
        .map(|i| (i, rng.random::<u64>()))
        .collect();
    order.sort_by(|&(a, ka), &(b, kb)| {
        fitnesses[a]
            .total_cmp(&fitnesses[b])
            .then(ka.cmp(&kb))
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0; fitnesses.len()];
    for (position, &(index, _)) in order.iter().enumerate() {
        ranks[index] = position + 1;
    }
    RankAssignment { ranks }
}

/// Mutation probability of every member of a population, given its costs.
pub fn probabilities_for(
    costs: &[f64],
    policy: &MutationPolicy,
    transform: FitnessTransform,
    rng: &mut RandomStream,
) -> Vec<f64> {
    match *policy {
        MutationPolicy::Constant { p } => vec![p; costs.len()],
        MutationPolicy::FitnessAdaptive { p_max } => {
            let fitness = transform.apply(costs);
            let f_max = fitness.iter().copied().fold(0.0, f64::max);
            fitness
                .iter()
                .map(|&f| fitness_adaptive_p(f, f_max, p_max))
                .collect()
        }
        MutationPolicy::RankAdaptive { p_max } => {
            // Any fitness transform is monotone decreasing in cost, so ranking
            // negated costs gives the same order without a transform.
            let fitness: Vec<f64> = costs.iter().map(|&c| -c).collect();
            let n = costs.len();
            assign_ranks(&fitness, rng)
                .ranks()
                .iter()
                .map(|&r| rank_adaptive_p(r, n, p_max))
                .collect()
        }
    }
}

/// Parent-population statistics used to price a new chromosome before it is
/// mutated.
///
/// A child's cost is placed on the parents' scale: under the fitness rule it
/// is compared with the parents' best and worst, under the rank rule it
/// takes the rank it would hold among the parents. A child tied with parents
/// ranks below all of them, so a collapsed population mutates at `p_max`
/// under both adaptive rules. A child better than every parent is not mutated.
#[derive(Clone, Debug)]
pub struct RateScale {
    policy: MutationPolicy,
    transform: FitnessTransform,
    sorted_costs: Vec<f64>,
    worst: f64,
    f_max: f64,
}

impl RateScale {
    pub fn new(parent_costs: &[f64], policy: &MutationPolicy, transform: FitnessTransform) -> Self {
        assert!(!parent_costs.is_empty(), "rate scale needs parents");
        let mut sorted_costs = parent_costs.to_vec();
        sorted_costs.sort_by(f64::total_cmp);
        let worst = sorted_costs[sorted_costs.len() - 1];
        let mut scale = RateScale {
            policy: *policy,
            transform,
            sorted_costs,
            worst,
            f_max: 0.0,
        };
        scale.f_max = scale.fitness(scale.sorted_costs[0]);
        scale
    }

    fn fitness(&self, cost: f64) -> f64 {
        match self.transform {
            FitnessTransform::WorstMinusCost => self.worst - cost,
            FitnessTransform::Reciprocal => 1.0 / (1.0 + cost),
        }
    }

    /// Rank among the parents of a chromosome with this cost.
    pub fn rank_of(&self, cost: f64) -> usize {
        let n = self.sorted_costs.len();
        let worse = n - self.sorted_costs.partition_point(|&c| c <= cost);
        (worse + 1).min(n)
    }

    pub fn probability(&self, cost: f64) -> f64 {
        match self.policy {
            MutationPolicy::Constant { p } => p,
            MutationPolicy::FitnessAdaptive { .. } if cost < self.sorted_costs[0] => 0.0,
            MutationPolicy::FitnessAdaptive { p_max } => {
                let f = self.fitness(cost).clamp(0.0, self.f_max.max(0.0));
                fitness_adaptive_p(f, self.f_max.max(0.0), p_max)
            }
            MutationPolicy::RankAdaptive { p_max } => {
                rank_adaptive_p(self.rank_of(cost), self.sorted_costs.len(), p_max)
            }
        }
    }
}
