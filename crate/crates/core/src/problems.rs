//! Benchmark problems: De Jong's f1, the multimodal f7, and random-key TSP.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{Genome, GenomeSpec};

/// A minimization problem over a fixed genome layout.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn genome_spec(&self) -> GenomeSpec;

    /// Cost of a genome admitted by [`Problem::genome_spec`]. Never negative.
    fn cost(&self, genome: &Genome) -> f64;

    /// Known optimum, if any, used to score optimum achievement.
    fn optimum(&self) -> Option<Optimum>;

    /// Content digest recorded next to results.
    fn checksum(&self) -> u64 {
        crate::tsplib::fnv1a(self.name().bytes())
    }
}

/// How close a cost must get to the target to count as reaching the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// `|cost - target| <= tol`
    Absolute(f64),
    /// `cost <= target * (1 + tol)`
    Relative(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub target: f64,
    pub tolerance: Tolerance,
}

impl Optimum {
    pub const FUNCTION_TOLERANCE: f64 = 1e-4;
    pub const TOUR_TOLERANCE: f64 = 1e-6;

    pub fn absolute(target: f64, tolerance: f64) -> Self {
        Optimum {
            target,
            tolerance: Tolerance::Absolute(tolerance),
        }
    }

    pub fn relative(target: f64, tolerance: f64) -> Self {
        Optimum {
            target,
            tolerance: Tolerance::Relative(tolerance),
        }
    }

    pub fn is_hit(&self, cost: f64) -> bool {
        match self.tolerance {
            Tolerance::Absolute(tol) => (cost - self.target).abs() <= tol,
            Tolerance::Relative(tol) => cost <= self.target * (1.0 + tol),
        }
    }
}

/// Decodes consecutive `bits_per_var` groups, most significant bit first,
/// onto `[lo, hi]`. All-zero maps to `lo` and all-one to `hi` exactly.
pub fn decode_binary(bits: &[bool], bits_per_var: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if bits_per_var == 0 || bits_per_var > 52 || bits.len() % bits_per_var != 0 {
        return Err(Error::config(format!(
            "cannot split {} bits into {}-bit variables",
            bits.len(),
            bits_per_var
        )));
    }
    let max = ((1u64 << bits_per_var) - 1) as f64;
    Ok(bits
        .chunks(bits_per_var)
        .map(|chunk| {
            let int = chunk.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            let t = int as f64 / max;
            lo * (1.0 - t) + hi * t
        })
        .collect())
}

/// Sphere function, `sum x_i^2`.
pub fn f1_cost(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `s^0.25 * (sin^2(50 * s^0.1) + 1)` with `s = x1^2 + x2^2`.
pub fn f7_cost(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum();
    let wave = (50.0 * s.powf(0.1)).sin();
    s.powf(0.25) * (wave * wave + 1.0)
}

/// Visit order encoded by random keys: ascending key, ties by city index.
pub fn decode_random_key(keys: &[f64]) -> Vec<usize> {
    let mut tour: Vec<usize> = (0..keys.len()).collect();
    tour.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    tour
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMetric {
    /// Plain Euclidean distance.
    #[default]
    Euclidean,
    /// TSPLIB `EUC_2D`: Euclidean distance rounded to the nearest integer.
    RoundedEuclidean,
}

impl DistanceMetric {
    pub fn distance(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let d = (a.0 - b.0).hypot(a.1 - b.1);
        match self {
            DistanceMetric::Euclidean => d,
            DistanceMetric::RoundedEuclidean => (d + 0.5).floor(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TspInstance {
    pub name: String,
    pub cities: Vec<(f64, f64)>,
}

impl TspInstance {
    pub fn new(name: impl Into<String>, cities: Vec<(f64, f64)>) -> Self {
        TspInstance {
            name: name.into(),
            cities,
        }
    }

    pub fn dimension(&self) -> usize {
        self.cities.len()
    }
}

/// Length of the closed tour, including the edge back to the start.
pub fn tour_cost(tour: &[usize], instance: &TspInstance, metric: DistanceMetric) -> f64 {
    assert!(is_permutation(tour, instance.dimension()), "tour is not a permutation");
    closed_length(tour, |a, b| {
        metric.distance(instance.cities[a], instance.cities[b])
    })
}

pub fn is_permutation(tour: &[usize], n: usize) -> bool {
    if tour.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    tour.iter()
        .all(|&c| c < n && !std::mem::replace(&mut seen[c], true))
}

fn closed_length(tour: &[usize], dist: impl Fn(usize, usize) -> f64) -> f64 {
    match tour {
        [] | [_] => 0.0,
        [first, .., last] => {
            tour.windows(2).map(|w| dist(w[0], w[1])).sum::<f64>() + dist(*last, *first)
        }
    }
}

/// Precomputed distance matrix of an instance.
#[derive(Clone, Debug)]
struct DistanceTable {
    n: usize,
    table: Vec<f64>,
}

impl DistanceTable {
    fn new(instance: &TspInstance, metric: DistanceMetric) -> Self {
        let n = instance.dimension();
        let mut table = Vec::with_capacity(n * n);
        for &a in &instance.cities {
            for &b in &instance.cities {
                table.push(metric.distance(a, b));
            }
        }
        DistanceTable { n, table }
    }

    fn tour_length(&self, tour: &[usize]) -> f64 {
        closed_length(tour, |a, b| self.table[a * self.n + b])
    }
}

#[derive(Clone, Debug)]
enum Kind {
    F1,
    F7,
    Tsp {
        instance: Arc<TspInstance>,
        metric: DistanceMetric,
        distances: Arc<DistanceTable>,
    },
}

/// The built-in benchmark problems.
#[derive(Clone, Debug)]
pub struct Benchmark {
    name: String,
    kind: Kind,
    optimum: Option<Optimum>,
}

impl Benchmark {
    pub const F1_BITS_PER_VAR: usize = 10;
    pub const F1_VARS: usize = 3;
    pub const F1_RANGE: (f64, f64) = (-5.12, 5.12);
    pub const F7_BITS_PER_VAR: usize = 12;
    pub const F7_VARS: usize = 2;
    pub const F7_RANGE: (f64, f64) = (0.0, 40.95);

    /// De Jong's f1 on a 30-bit genome, optimum 0 within 1e-4.
    pub fn f1() -> Self {
        Benchmark {
            name: "f1".into(),
            kind: Kind::F1,
            optimum: Some(Optimum::absolute(0.0, Optimum::FUNCTION_TOLERANCE)),
        }
    }

    /// f7 on a 24-bit genome, optimum 0 within 1e-4.
    pub fn f7() -> Self {
        Benchmark {
            name: "f7".into(),
            kind: Kind::F7,
            optimum: Some(Optimum::absolute(0.0, Optimum::FUNCTION_TOLERANCE)),
        }
    }

    /// Random-key TSP. No optimum is known unless set with
    /// [`Benchmark::with_optimum`].
    pub fn tsp(instance: TspInstance, metric: DistanceMetric) -> Self {
        let distances = Arc::new(DistanceTable::new(&instance, metric));
        Benchmark {
            name: format!("tsp:{}", instance.name),
            kind: Kind::Tsp {
                instance: Arc::new(instance),
                metric,
                distances,
            },
            optimum: None,
        }
    }

    pub fn with_optimum(mut self, optimum: Option<Optimum>) -> Self {
        self.optimum = optimum;
        self
    }

    pub fn tsp_instance(&self) -> Option<&TspInstance> {
        match &self.kind {
            Kind::Tsp { instance, .. } => Some(instance),
            _ => None,
        }
    }

    pub fn metric(&self) -> Option<DistanceMetric> {
        match &self.kind {
            Kind::Tsp { metric, .. } => Some(*metric),
            _ => None,
        }
    }

    /// Decoded phenotype of a binary genome, `None` for TSP.
    pub fn decode(&self, genome: &Genome) -> Option<Vec<f64>> {
        let bits = genome.as_bits()?;
        let (per_var, (lo, hi)) = match self.kind {
            Kind::F1 => (Self::F1_BITS_PER_VAR, Self::F1_RANGE),
            Kind::F7 => (Self::F7_BITS_PER_VAR, Self::F7_RANGE),
            Kind::Tsp { .. } => return None,
        };
        decode_binary(bits, per_var, lo, hi).ok()
    }
}

impl Problem for Benchmark {
    fn name(&self) -> &str {
        &self.name
    }

    fn genome_spec(&self) -> GenomeSpec {
        match &self.kind {
            Kind::F1 => GenomeSpec::binary(Self::F1_BITS_PER_VAR * Self::F1_VARS),
            Kind::F7 => GenomeSpec::binary(Self::F7_BITS_PER_VAR * Self::F7_VARS),
            Kind::Tsp { instance, .. } => GenomeSpec::random_key(instance.dimension()),
        }
    }

    fn cost(&self, genome: &Genome) -> f64 {
        match &self.kind {
            Kind::F1 | Kind::F7 => {
                let x = self
                    .decode(genome)
                    .unwrap_or_else(|| panic!("{} expects a {:?} genome", self.name, self.genome_spec()));
                match self.kind {
                    Kind::F1 => f1_cost(&x),
                    _ => f7_cost(&x),
                }
            }
            Kind::Tsp { distances, .. } => {
                let keys = genome.as_keys().expect("TSP expects a random-key genome");
                assert_eq!(keys.len(), distances.n, "random-key length mismatch");
                distances.tour_length(&decode_random_key(keys))
            }
        }
    }

    fn optimum(&self) -> Option<Optimum> {
        self.optimum
    }

    fn checksum(&self) -> u64 {
        match &self.kind {
            Kind::Tsp { instance, .. } => crate::tsplib::instance_checksum(instance),
            _ => crate::tsplib::fnv1a(self.name.bytes()),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
