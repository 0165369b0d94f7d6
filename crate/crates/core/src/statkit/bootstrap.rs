use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{task_rng, Key};
use crate::scalar::{mean, median, quantile_sorted, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
    Median,
}

impl Statistic {
    pub fn apply<T: Real>(self, xs: &[T]) -> Option<T> {
        match self {
            Statistic::Mean => mean(xs),
            Statistic::Median => median(xs),
        }
    }
}

/// Percentile bootstrap interval at the given confidence level.
pub fn bootstrap_ci<T: Real>(
    values: &[T],
    statistic: Statistic,
    level: f64,
    n_resamples: usize,
    seed: u64,
) -> Result<(T, T)> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs at least 2 values, got {}",
            values.len()
        )));
    }
    if !(0.0 < level && level < 1.0) || n_resamples == 0 {
        return Err(Error::Config(format!(
            "bootstrap level {level} / resamples {n_resamples} invalid"
        )));
    }
    let mut rng = task_rng(seed, &[Key::Str("bootstrap")]);
    let mut buf = vec![T::zero(); values.len()];
    let mut stats: Vec<T> = (0..n_resamples)
        .map(|_| {
            for slot in buf.iter_mut() {
                *slot = values[rng.random_range(0..values.len())];
            }
            statistic.apply(&buf).expect("non-empty resample")
        })
        .collect();
    stats.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let tail = (1.0 - level) / 2.0;
    let lo = quantile_sorted(&stats, tail).expect("non-empty");
    let hi = quantile_sorted(&stats, 1.0 - tail).expect("non-empty");
    Ok((lo, hi))
}
