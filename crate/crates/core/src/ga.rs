//! Generational GA: initialization, tournament selection, one-point
//! crossover, per-gene mutation and stagnation-based convergence.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{Genome, GenomeKind};
use crate::policy::{self, FitnessTransform, MutationPolicy, RateScale};
use crate::problems::Problem;
use crate::rng::{self, RandomStream};

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub cost: f64,
    /// `worst_cost - cost` within the owning population.
    pub fitness: f64,
    /// 1 = poorest, N = fittest. Only set when a rank policy ran on the
    /// population.
    pub rank: Option<usize>,
}

impl Individual {
    pub fn evaluate(genome: Genome, problem: &dyn Problem) -> Self {
        let cost = problem.cost(&genome);
        debug_assert!(cost >= 0.0, "negative cost {cost}");
        Individual {
            genome,
            cost,
            fitness: 0.0,
            rank: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    generation: usize,
}

impl Population {
    /// Wraps evaluated members and refreshes their fitness.
    pub fn new(mut members: Vec<Individual>, generation: usize) -> Self {
        let worst = members.iter().map(|m| m.cost).fold(f64::NEG_INFINITY, f64::max);
        for m in &mut members {
            m.fitness = policy::fitness_of(m.cost, worst);
            m.rank = None;
        }
        Population {
            members,
            generation,
        }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.cost).collect()
    }

    /// Lowest-cost member; the first one on ties.
    pub fn best(&self) -> &Individual {
        self.members
            .iter()
            .reduce(|best, m| if m.cost < best.cost { m } else { best })
            .expect("population is never empty")
    }

    pub fn worst_cost(&self) -> f64 {
        self.members.iter().map(|m| m.cost).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean_cost(&self) -> f64 {
        self.members.iter().map(|m| m.cost).sum::<f64>() / self.len() as f64
    }

    /// Mutation probability of every member under `policy`. Rank policies
    /// also record each member's rank.
    pub fn mutation_probabilities(
        &mut self,
        policy: &MutationPolicy,
        transform: FitnessTransform,
        rng: &mut RandomStream,
    ) -> Vec<f64> {
        let costs = self.costs();
        match *policy {
            MutationPolicy::RankAdaptive { p_max } => {
                let neg: Vec<f64> = costs.iter().map(|c| -c).collect();
                let ranks = policy::assign_ranks(&neg, rng);
                let n = self.len();
                self.members
                    .iter_mut()
                    .zip(ranks.ranks())
                    .map(|(m, &r)| {
                        m.rank = Some(r);
                        policy::rank_adaptive_p(r, n, p_max)
                    })
                    .collect()
            }
            _ => policy::probabilities_for(&costs, policy, transform, rng),
        }
    }
}

/// How a chromosome's mutation probability is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationScope {
    /// Every gene mutates independently with probability `p`.
    PerGene,
    /// With probability `p` the chromosome mutates exactly one random gene.
    SingleGene,
}

impl MutationScope {
    /// Constant-rate runs mutate one gene per chromosome; adaptive policies
    /// apply their rate to every gene.
    pub fn default_for(policy: &MutationPolicy) -> Self {
        match policy {
            MutationPolicy::Constant { .. } => MutationScope::SingleGene,
            _ => MutationScope::PerGene,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MutationScope::PerGene => "per_gene",
            MutationScope::SingleGene => "single_gene",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_probability: f64,
    pub mutation_policy: MutationPolicy,
    pub fitness_transform: FitnessTransform,
    pub tournament_size: usize,
    /// Generations without improvement of the best-so-far cost before a run
    /// is considered converged.
    pub convergence_window: usize,
    pub max_generations: usize,
    /// `None` picks [`MutationScope::default_for`] the policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_scope: Option<MutationScope>,
    /// Number of best parents copied unchanged into the next generation.
    pub elite_count: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 10,
            crossover_probability: 0.8,
            mutation_policy: MutationPolicy::constant(MutationPolicy::DEFAULT_CONSTANT_P),
            fitness_transform: FitnessTransform::default(),
            tournament_size: 2,
            convergence_window: 50,
            max_generations: 10_000,
            mutation_scope: None,
            elite_count: 1,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn scope(&self) -> MutationScope {
        self.mutation_scope
            .unwrap_or_else(|| MutationScope::default_for(&self.mutation_policy))
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(Error::config(format!(
                "crossover probability {} is outside [0, 1]",
                self.crossover_probability
            )));
        }
        if self.tournament_size == 0 {
            return Err(Error::config("tournament size must be at least 1"));
        }
        if self.convergence_window == 0 {
            return Err(Error::config("convergence window must be at least 1"));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::config(format!(
                "elite count {} must be below the population size {}",
                self.elite_count, self.population_size
            )));
        }
        if self.max_generations == 0 {
            return Err(Error::config("max generations must be at least 1"));
        }
        self.mutation_policy.validate()
    }
}

pub fn random_genome(kind: GenomeKind, length: usize, rng: &mut RandomStream) -> Genome {
    match kind {
        GenomeKind::Binary => Genome::Binary((0..length).map(|_| rng.random::<bool>()).collect()),
        GenomeKind::RandomKey => {
            Genome::RandomKey((0..length).map(|_| rng.random::<f64>()).collect())
        }
    }
}

pub fn initialize_population(
    problem: &dyn Problem,
    n: usize,
    rng: &mut RandomStream,
) -> Result<Population> {
    if n < 2 {
        return Err(Error::config(format!(
            "population size must be at least 2, got {n}"
        )));
    }
    let spec = problem.genome_spec();
    let members = (0..n)
        .map(|_| Individual::evaluate(random_genome(spec.kind, spec.length, rng), problem))
        .collect();
    Ok(Population::new(members, 0))
}

/// Index of the tournament winner among `k` uniform draws with replacement.
/// The earliest draw wins ties.
pub fn tournament_index(pop: &Population, k: usize, rng: &mut RandomStream) -> usize {
    assert!(k >= 1 && !pop.is_empty(), "tournament needs k >= 1 and members");
    let mut winner = rng.random_range(0..pop.len());
    for _ in 1..k {
        let challenger = rng.random_range(0..pop.len());
        if pop.members[challenger].cost < pop.members[winner].cost {
            winner = challenger;
        }
    }
    winner
}

pub fn tournament_select<'p>(
    pop: &'p Population,
    k: usize,
    rng: &mut RandomStream,
) -> &'p Individual {
    &pop.members[tournament_index(pop, k, rng)]
}

/// Swaps the tails of `a` and `b` after position `cut`.
pub fn crossover_at(a: &Genome, b: &Genome, cut: usize) -> (Genome, Genome) {
    fn splice<T: Clone>(x: &[T], y: &[T], cut: usize) -> (Vec<T>, Vec<T>) {
        let mut c1 = x[..cut].to_vec();
        c1.extend_from_slice(&y[cut..]);
        let mut c2 = y[..cut].to_vec();
        c2.extend_from_slice(&x[cut..]);
        (c1, c2)
    }
    match (a, b) {
        (Genome::Binary(x), Genome::Binary(y)) if x.len() == y.len() && cut <= x.len() => {
            let (c1, c2) = splice(x, y, cut);
            (Genome::Binary(c1), Genome::Binary(c2))
        }
        (Genome::RandomKey(x), Genome::RandomKey(y)) if x.len() == y.len() && cut <= x.len() => {
            let (c1, c2) = splice(x, y, cut);
            (Genome::RandomKey(c1), Genome::RandomKey(c2))
        }
        _ => panic!(
            "crossover between incompatible genomes ({:?}/{} vs {:?}/{}, cut {cut})",
            a.kind(),
            a.len(),
            b.kind(),
            b.len()
        ),
    }
}

/// One-point crossover with the cut drawn uniformly from `1..L`.
pub fn one_point_crossover(a: &Genome, b: &Genome, rng: &mut RandomStream) -> (Genome, Genome) {
    assert!(a.len() >= 2, "one-point crossover needs at least 2 genes");
    let cut = rng.random_range(1..a.len());
    crossover_at(a, b, cut)
}

/// Mutates each gene independently with probability `p`: bits flip, keys are
/// redrawn from `[0, 1)`.
pub fn mutate(mut genome: Genome, p: f64, rng: &mut RandomStream) -> Genome {
    assert!((0.0..=1.0).contains(&p), "mutation probability {p} outside [0, 1]");
    if p == 0.0 {
        return genome;
    }
    match &mut genome {
        Genome::Binary(bits) => {
            for bit in bits.iter_mut() {
                if rng.random_bool(p) {
                    *bit = !*bit;
                }
            }
        }
        Genome::RandomKey(keys) => {
            for key in keys.iter_mut() {
                if rng.random_bool(p) {
                    *key = rng.random::<f64>();
                }
            }
        }
    }
    genome
}

/// With probability `p`, mutates one uniformly chosen gene.
pub fn mutate_single_gene(mut genome: Genome, p: f64, rng: &mut RandomStream) -> Genome {
    assert!((0.0..=1.0).contains(&p), "mutation probability {p} outside [0, 1]");
    if p == 0.0 || genome.is_empty() || !rng.random_bool(p) {
        return genome;
    }
    let gene = rng.random_range(0..genome.len());
    match &mut genome {
        Genome::Binary(bits) => bits[gene] = !bits[gene],
        Genome::RandomKey(keys) => keys[gene] = rng.random::<f64>(),
    }
    genome
}

pub fn mutate_scoped(genome: Genome, p: f64, scope: MutationScope, rng: &mut RandomStream) -> Genome {
    match scope {
        MutationScope::PerGene => mutate(genome, p, rng),
        MutationScope::SingleGene => mutate_single_gene(genome, p, rng),
    }
}

/// Builds the next generation by full replacement.
///
/// Each child's mutation probability comes from placing its pre-mutation
/// cost on the parent population's fitness or rank scale; see
/// [`RateScale`].
pub fn next_generation(
    pop: &mut Population,
    cfg: &GaConfig,
    problem: &dyn Problem,
    rng: &mut RandomStream,
) -> Result<Population> {
    let n = pop.len();
    let scale = RateScale::new(&pop.costs(), &cfg.mutation_policy, cfg.fitness_transform);
    let constant = matches!(cfg.mutation_policy, MutationPolicy::Constant { .. });
    let scope = cfg.scope();

    let mut offspring = Vec::with_capacity(n);
    if cfg.elite_count > 0 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| pop.members[a].cost.total_cmp(&pop.members[b].cost).then(a.cmp(&b)));
        offspring.extend(order[..cfg.elite_count].iter().map(|&i| pop.members[i].clone()));
    }
    let breed = |genome: Genome, known_cost: Option<f64>, rng: &mut RandomStream| {
        let p = if constant {
            scale.probability(0.0)
        } else {
            scale.probability(known_cost.unwrap_or_else(|| problem.cost(&genome)))
        };
        match known_cost {
            Some(cost) if p == 0.0 => Individual {
                genome,
                cost,
                fitness: 0.0,
                rank: None,
            },
            _ => Individual::evaluate(mutate_scoped(genome, p, scope, rng), problem),
        }
    };
    while offspring.len() < n {
        let ia = tournament_index(pop, cfg.tournament_size, rng);
        let ib = tournament_index(pop, cfg.tournament_size, rng);
        let (a, b) = (&pop.members[ia], &pop.members[ib]);
        let (c1, c2, costs) = if rng.random_bool(cfg.crossover_probability) {
            let (c1, c2) = one_point_crossover(&a.genome, &b.genome, rng);
            (c1, c2, None)
        } else {
            (a.genome.clone(), b.genome.clone(), Some((a.cost, b.cost)))
        };
        offspring.push(breed(c1, costs.map(|c| c.0), rng));
        if offspring.len() < n {
            offspring.push(breed(c2, costs.map(|c| c.1), rng));
        }
    }

    Ok(Population::new(offspring, pop.generation + 1))
}

/// What an observer sees after each new generation.
#[derive(Clone, Copy, Debug)]
pub struct GenerationSnapshot<'a> {
    pub population: &'a Population,
    pub best_so_far: f64,
}

impl GenerationSnapshot<'_> {
    pub fn generation(&self) -> usize {
        self.population.generation()
    }
}

pub trait GenerationObserver {
    fn observe(&mut self, snapshot: &GenerationSnapshot<'_>);
}

impl GenerationObserver for () {
    fn observe(&mut self, _: &GenerationSnapshot<'_>) {}
}

impl<F: FnMut(&GenerationSnapshot<'_>)> GenerationObserver for F {
    fn observe(&mut self, snapshot: &GenerationSnapshot<'_>) {
        self(snapshot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    Capped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub generations_evolved: usize,
    pub lowest_cost: f64,
    pub best_genome: Genome,
    pub optimum_hit: bool,
    pub stop: StopReason,
}

impl RunOutcome {
    pub fn capped(&self) -> bool {
        self.stop == StopReason::Capped
    }
}

/// Evolves until the best-so-far cost has not improved for
/// `convergence_window` generations, or `max_generations` is reached.
pub fn run_until_converged(
    cfg: &GaConfig,
    problem: &dyn Problem,
    observer: &mut dyn GenerationObserver,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut rng = rng::stream(cfg.rng_seed);
    let mut pop = initialize_population(problem, cfg.population_size, &mut rng)?;
    let mut best = pop.best().clone();
    let mut stale = 0;

    let stop = loop {
        if pop.generation() >= cfg.max_generations {
            break StopReason::Capped;
        }
        pop = next_generation(&mut pop, cfg, problem, &mut rng)?;
        let current = pop.best();
        if current.cost < best.cost {
            best = current.clone();
            stale = 0;
        } else {
            stale += 1;
        }
        observer.observe(&GenerationSnapshot {
            population: &pop,
            best_so_far: best.cost,
        });
        if stale >= cfg.convergence_window {
            break StopReason::Converged;
        }
    };

    let optimum_hit = problem.optimum().is_some_and(|o| o.is_hit(best.cost));
    Ok(RunOutcome {
        generations_evolved: pop.generation(),
        lowest_cost: best.cost,
        best_genome: best.genome,
        optimum_hit,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::GenomeSpec;
    use crate::problems::{Benchmark, Optimum};
    use crate::rng::stream;

    struct Flat;

    impl Problem for Flat {
        fn name(&self) -> &str {
            "flat"
        }
        fn genome_spec(&self) -> GenomeSpec {
            GenomeSpec::binary(8)
        }
        fn cost(&self, _: &Genome) -> f64 {
            0.0
        }
        fn optimum(&self) -> Option<Optimum> {
            Some(Optimum::absolute(0.0, 1e-4))
        }
    }

    fn with_costs(costs: &[f64]) -> Population {
        Population::new(
            costs
                .iter()
                .map(|&c| Individual {
                    genome: Genome::Binary(vec![c > 5.0]),
                    cost: c,
                    fitness: 0.0,
                    rank: None,
                })
                .collect(),
            0,
        )
    }

    #[test]
    fn initial_f1_population() {
        let f1 = Benchmark::f1();
        let pop = initialize_population(&f1, 10, &mut stream(1)).unwrap();
        assert_eq!(pop.len(), 10);
        assert_eq!(pop.generation(), 0);
        for m in pop.members() {
            assert_eq!(m.genome.len(), 30);
            assert!((0.0..=78.6432 + 1e-9).contains(&m.cost));
        }
        let again = initialize_population(&f1, 10, &mut stream(1)).unwrap();
        assert_eq!(pop, again);
    }

    #[test]
    fn population_too_small() {
        assert!(matches!(
            initialize_population(&Benchmark::f1(), 1, &mut stream(1)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn tournament_prefers_lower_cost() {
        let pop = with_costs(&[5.0, 9.0]);
        let mut rng = stream(2);
        for _ in 0..200 {
            let a = tournament_index(&pop, 2, &mut rng);
            // Losing requires both draws to hit the worse member.
            if a == 1 {
                continue;
            }
            assert_eq!(pop.members()[a].cost, 5.0);
        }
        // With k large enough the better member always wins.
        assert_eq!(tournament_select(&pop, 64, &mut rng).cost, 5.0);
    }

    #[test]
    fn unit_tournament_is_uniform() {
        let pop = with_costs(&[1.0, 2.0, 3.0, 4.0]);
        let mut rng = stream(3);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[tournament_index(&pop, 1, &mut rng)] += 1;
        }
        for c in counts {
            assert!((9_400..10_600).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn tied_tournament_is_reproducible() {
        let pop = with_costs(&[3.0; 6]);
        let picks = |seed| {
            let mut rng = stream(seed);
            (0..20).map(|_| tournament_index(&pop, 2, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(picks(4), picks(4));
    }

    #[test]
    fn crossover_examples() {
        let a = Genome::from_bit_str("000000").unwrap();
        let b = Genome::from_bit_str("111111").unwrap();
        let (c1, c2) = crossover_at(&a, &b, 3);
        assert_eq!(c1.to_string(), "000111");
        assert_eq!(c2.to_string(), "111000");

        let mut rng = stream(5);
        let (c1, c2) = one_point_crossover(&a, &a, &mut rng);
        assert_eq!((c1, c2), (a.clone(), a));

        let x = Genome::RandomKey(vec![0.1, 0.2, 0.3]);
        let y = Genome::RandomKey(vec![0.7, 0.8, 0.9]);
        let (c1, c2) = crossover_at(&x, &y, 1);
        assert_eq!(c1, Genome::RandomKey(vec![0.1, 0.8, 0.9]));
        assert_eq!(c2, Genome::RandomKey(vec![0.7, 0.2, 0.3]));
    }

    #[test]
    fn crossover_cut_stays_interior() {
        let a = Genome::from_bit_str("0000").unwrap();
        let b = Genome::from_bit_str("1111").unwrap();
        let mut rng = stream(6);
        for _ in 0..500 {
            let (c1, _) = one_point_crossover(&a, &b, &mut rng);
            let s = c1.to_string();
            assert!(s.starts_with('0') && s.ends_with('1'), "{s}");
        }
    }

    #[test]
    #[should_panic(expected = "incompatible")]
    fn crossover_mismatch_panics() {
        let a = Genome::Binary(vec![true; 4]);
        let b = Genome::RandomKey(vec![0.5; 4]);
        crossover_at(&a, &b, 2);
    }

    #[test]
    fn mutation_examples() {
        let mut rng = stream(7);
        let g = Genome::from_bit_str("1010").unwrap();
        assert_eq!(mutate(g.clone(), 0.0, &mut rng), g);
        assert_eq!(mutate(g, 1.0, &mut rng).to_string(), "0101");

        let keys = Genome::RandomKey(vec![0.25; 29]);
        let m = mutate(keys, 1.0, &mut rng);
        assert!(m.as_keys().unwrap().iter().all(|&k| (0.0..1.0).contains(&k) && k != 0.25));
    }

    #[test]
    fn mutation_rate_matches_binomial_mean() {
        // Binomial(30, 0.1) has mean 3.
        let mut rng = stream(8);
        let zero = Genome::Binary(vec![false; 30]);
        let trials = 100_000;
        let flips: usize = (0..trials)
            .map(|_| {
                mutate(zero.clone(), 0.1, &mut rng)
                    .as_bits()
                    .unwrap()
                    .iter()
                    .filter(|&&b| b)
                    .count()
            })
            .sum();
        let mean = flips as f64 / trials as f64;
        assert!((mean - 3.0).abs() < 0.1, "{mean}");
    }

    #[test]
    fn single_gene_flips_at_most_one() {
        let mut rng = stream(12);
        let zero = Genome::Binary(vec![false; 24]);
        let ones = |g: &Genome| g.as_bits().unwrap().iter().filter(|&&b| b).count();
        for _ in 0..1000 {
            assert_eq!(ones(&mutate_single_gene(zero.clone(), 1.0, &mut rng)), 1);
            assert_eq!(ones(&mutate_single_gene(zero.clone(), 0.0, &mut rng)), 0);
        }
        let hits = (0..20_000)
            .filter(|_| ones(&mutate_single_gene(zero.clone(), 0.05, &mut rng)) == 1)
            .count();
        assert!((800..1200).contains(&hits), "{hits}");
    }

    #[test]
    fn scope_follows_policy_unless_set() {
        let mut cfg = GaConfig::default();
        assert_eq!(cfg.scope(), MutationScope::SingleGene);
        cfg.mutation_policy = MutationPolicy::rank_adaptive(0.1);
        assert_eq!(cfg.scope(), MutationScope::PerGene);
        cfg.mutation_policy = MutationPolicy::fitness_adaptive(0.1);
        assert_eq!(cfg.scope(), MutationScope::PerGene);
        cfg.mutation_scope = Some(MutationScope::SingleGene);
        assert_eq!(cfg.scope(), MutationScope::SingleGene);
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn mutation_rejects_bad_probability() {
        mutate(Genome::Binary(vec![false]), 1.5, &mut stream(1));
    }

    #[test]
    fn next_generation_preserves_size() {
        let f1 = Benchmark::f1();
        for n in [10, 11] {
            let cfg = GaConfig {
                population_size: n,
                ..GaConfig::default()
            };
            let mut rng = stream(9);
            let mut pop = initialize_population(&f1, n, &mut rng).unwrap();
            let next = next_generation(&mut pop, &cfg, &f1, &mut rng).unwrap();
            assert_eq!(next.len(), n);
            assert_eq!(next.generation(), 1);
        }
    }

    #[test]
    fn selection_only_keeps_parent_genomes() {
        let f1 = Benchmark::f1();
        let cfg = GaConfig {
            crossover_probability: 0.0,
            mutation_policy: MutationPolicy::constant(0.0),
            ..GaConfig::default()
        };
        let mut rng = stream(10);
        let mut pop = initialize_population(&f1, 10, &mut rng).unwrap();
        let parents: Vec<Genome> = pop.members().iter().map(|m| m.genome.clone()).collect();
        for _ in 0..20 {
            pop = next_generation(&mut pop, &cfg, &f1, &mut rng).unwrap();
            assert!(pop.members().iter().all(|m| parents.contains(&m.genome)));
        }
    }

    #[test]
    fn elitism_keeps_best() {
        let f1 = Benchmark::f1();
        let cfg = GaConfig {
            elite_count: 1,
            mutation_policy: MutationPolicy::constant(0.5),
            ..GaConfig::default()
        };
        let mut rng = stream(11);
        let mut pop = initialize_population(&f1, 10, &mut rng).unwrap();
        for _ in 0..30 {
            let best = pop.best().cost;
            pop = next_generation(&mut pop, &cfg, &f1, &mut rng).unwrap();
            assert!(pop.best().cost <= best);
        }
    }

    #[test]
    fn rank_policy_records_ranks() {
        let mut pop = with_costs(&[4.0, 1.0, 9.0]);
        let p = pop.mutation_probabilities(
            &MutationPolicy::rank_adaptive(0.1),
            FitnessTransform::default(),
            &mut stream(1),
        );
        let ranks: Vec<_> = pop.members().iter().map(|m| m.rank.unwrap()).collect();
        assert_eq!(ranks, vec![2, 3, 1]);
        assert_eq!(p[1], 0.0);
        assert!((p[2] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn flat_problem_converges_after_window() {
        let cfg = GaConfig::default();
        let mut seen = 0;
        let out = run_until_converged(&cfg, &Flat, &mut |_: &GenerationSnapshot<'_>| seen += 1)
            .unwrap();
        assert_eq!(out.generations_evolved, 50);
        assert_eq!(seen, 50);
        assert_eq!(out.lowest_cost, 0.0);
        assert!(out.optimum_hit);
        assert_eq!(out.stop, StopReason::Converged);
    }

    #[test]
    fn cap_is_flagged() {
        let cfg = GaConfig {
            max_generations: 7,
            ..GaConfig::default()
        };
        let out = run_until_converged(&cfg, &Flat, &mut ()).unwrap();
        assert_eq!(out.generations_evolved, 7);
        assert!(out.capped());
    }

    #[test]
    fn seeded_runs_replay() {
        let f1 = Benchmark::f1();
        let cfg = GaConfig {
            rng_seed: 1234,
            ..GaConfig::default()
        };
        let a = run_until_converged(&cfg, &f1, &mut ()).unwrap();
        let b = run_until_converged(&cfg, &f1, &mut ()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn best_so_far_never_increases() {
        let f7 = Benchmark::f7();
        let cfg = GaConfig {
            mutation_policy: MutationPolicy::rank_adaptive(0.1),
            rng_seed: 77,
            ..GaConfig::default()
        };
        let mut last = f64::INFINITY;
        run_until_converged(&cfg, &f7, &mut |s: &GenerationSnapshot<'_>| {
            assert!(s.best_so_far <= last);
            last = s.best_so_far;
        })
        .unwrap();
    }
}
