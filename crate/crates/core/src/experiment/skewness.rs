use serde::{Deserialize, Serialize};

/// Sample skewness with a flag for samples where it is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skewness {
    pub value: f64,
    /// Fewer than three points or zero variance; `value` is then 0.
    pub degenerate: bool,
}

impl Skewness {
    const DEGENERATE: Skewness = Skewness {
        value: 0.0,
        degenerate: true,
    };

    pub fn negate(self) -> Skewness {
        Skewness {
            value: -self.value,
            ..self
        }
    }
}

/// Adjusted Fisher-Pearson coefficient
/// `G1 = n / ((n-1)(n-2)) * sum(((x - mean) / s)^3)` with `s` the sample
/// (n - 1) standard deviation.
pub fn population_skewness(sample: &[f64]) -> Skewness {
    let n = sample.len();
    if n < 3 {
        return Skewness::DEGENERATE;
    }
    if sample.iter().all(|&x| x == sample[0]) {
        return Skewness::DEGENERATE;
    }
    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let m2 = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    if m2 == 0.0 {
        return Skewness::DEGENERATE;
    }
    let s = (m2 / (nf - 1.0)).sqrt();
    let cubes: f64 = sample.iter().map(|x| ((x - mean) / s).powi(3)).sum();
    let value = nf / ((nf - 1.0) * (nf - 2.0)) * cubes;
    if value.is_finite() {
        Skewness {
            value,
            degenerate: false,
        }
    } else {
        Skewness::DEGENERATE
    }
}

/// Skewness of the fitness distribution given the costs.
///
/// Fitness is an affine reflection of cost, so its skewness is the negated
/// cost skewness.
pub fn fitness_skewness(costs: &[f64]) -> Skewness {
    population_skewness(costs).negate()
}
