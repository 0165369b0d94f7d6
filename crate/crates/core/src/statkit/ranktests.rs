//! Mann-Whitney U and Wilcoxon signed-rank tests.
//!
//! When no sample exceeds [`EXACT_MAX_N`] observations the null distribution
//! is counted exactly over the observed midranks (so ties are handled),
//! otherwise a tie-corrected normal approximation with continuity correction
//! is used.

use super::rank::midranks;
use super::{normal_two_sided, Method, TestResult};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest per-sample size tested by exact enumeration.
pub const EXACT_MAX_N: usize = 12;

/// Doubled midranks as integers (midranks are multiples of one half).
fn doubled<T: Real>(ranks: &[T]) -> Vec<usize> {
    ranks.iter().map(|r| (r.as_f64() * 2.0).round() as usize).collect()
}

/// `counts[k][s]`: subsets of size k whose doubled-rank sum is s.
fn subset_sum_counts(values: &[usize], max_k: usize) -> Vec<Vec<f64>> {
    let total: usize = values.iter().sum();
    let mut dp = vec![vec![0.0f64; total + 1]; max_k + 1];
    dp[0][0] = 1.0;
    for &v in values {
        for k in (1..=max_k).rev() {
            for s in (v..=total).rev() {
                dp[k][s] += dp[k - 1][s - v];
            }
        }
    }
    dp
}

fn tie_term(ties: &[usize]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

/// Two-sided Mann-Whitney U test. The statistic is `U` of the first sample.
pub fn mann_whitney_u<T: Real>(x: &[T], y: &[T]) -> Result<TestResult<T>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InsufficientData("Mann-Whitney U needs two non-empty samples".into()));
    }
    let (nx, ny) = (x.len(), y.len());
    let n = nx + ny;
    let pooled: Vec<T> = x.iter().chain(y).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let rank_sum_x: T = ranks[..nx].iter().copied().sum();
    let u = rank_sum_x - T::count(nx * (nx + 1)) / T::lit(2.0);

    if nx.max(ny) <= EXACT_MAX_N {
        let d = doubled(&ranks);
        let total: usize = d.iter().sum();
        let obs: usize = d[..nx].iter().sum();
        let counts = subset_sum_counts(&d, nx);
        // E[2 R_x] = nx * total / n; compare n * 2R_x to avoid fractions
        let center = (nx * total) as i64;
        let dev = |s: usize| ((n * s) as i64 - center).abs();
        let obs_dev = dev(obs);
        let (mut hit, mut all) = (0.0, 0.0);
        for (s, &c) in counts[nx].iter().enumerate() {
            all += c;
            if dev(s) >= obs_dev {
                hit += c;
            }
        }
        return Ok(TestResult::new(u, hit / all, vec![nx, ny], Method::MannWhitneyU, true));
    }

    let (fx, fy, fnn) = (nx as f64, ny as f64, n as f64);
    let mu = fx * fy / 2.0;
    let var = fx * fy / 12.0 * ((fnn + 1.0) - tie_term(&ties) / (fnn * (fnn - 1.0)));
    let p = if var <= 0.0 {
        1.0
    } else {
        let dev = ((u.as_f64() - mu).abs() - 0.5).max(0.0);
        normal_two_sided(dev / var.sqrt())
    };
    Ok(TestResult::new(u, p, vec![nx, ny], Method::MannWhitneyU, false))
}

/// Two-sided Wilcoxon signed-rank test on paired differences. Zero
/// differences are dropped; the statistic is `min(W+, W-)`.
pub fn wilcoxon_signed_rank<T: Real>(diffs: &[T]) -> Result<TestResult<T>> {
    let nonzero: Vec<T> = diffs.iter().copied().filter(|d| !d.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::InsufficientData("all paired differences are zero".into()));
    }
    let n = nonzero.len();
    let abs: Vec<T> = nonzero.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let w_plus: T = ranks
        .iter()
        .zip(&nonzero)
        .filter(|(_, d)| **d > T::zero())
        .map(|(r, _)| *r)
        .sum();
    let w_total = T::count(n * (n + 1)) / T::lit(2.0);
    let w_minus = w_total - w_plus;
    let stat = w_plus.min(w_minus);

    if n <= EXACT_MAX_N {
        let d = doubled(&ranks);
        let total: usize = d.iter().sum();
        let obs: usize = d
            .iter()
            .zip(&nonzero)
            .filter(|(_, x)| **x > T::zero())
            .map(|(r, _)| *r)
            .sum();
        let counts = subset_sum_counts(&d, n);
        // every subset is a sign pattern; sum over sizes
        let dev = |s: usize| (2 * s as i64 - total as i64).abs();
        let obs_dev = dev(obs);
        let (mut hit, mut all) = (0.0, 0.0);
        for row in &counts {
            for (s, &c) in row.iter().enumerate() {
                all += c;
                if dev(s) >= obs_dev {
                    hit += c;
                }
            }
        }
        return Ok(TestResult::new(stat, hit / all, vec![n], Method::WilcoxonSigned, true));
    }

    let fnn = n as f64;
    let mu = fnn * (fnn + 1.0) / 4.0;
    let var = fnn * (fnn + 1.0) * (2.0 * fnn + 1.0) / 24.0 - tie_term(&ties) / 48.0;
    let dev = ((w_plus.as_f64() - mu).abs() - 0.5).max(0.0);
    let p = if var <= 0.0 { 1.0 } else { normal_two_sided(dev / var.sqrt()) };
    Ok(TestResult::new(stat, p, vec![n], Method::WilcoxonSigned, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_triples() {
        let r = mann_whitney_u::<f64>(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 0.1).abs() < 1e-12);
        assert!(r.exact);
    }

    #[test]
    fn identical_samples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let r = mann_whitney_u::<f64>(&x, &x).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let big: Vec<f64> = (0..40).map(|i| (i % 7) as f64).collect();
        let r = mann_whitney_u(&big, &big).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_sample_is_error() {
        assert!(mann_whitney_u::<f64>(&[], &[1.0]).is_err());
    }

    #[test]
    fn wilcoxon_small_cases() {
        let r = wilcoxon_signed_rank::<f64>(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 0.25).abs() < 1e-12);
        let r = wilcoxon_signed_rank::<f64>(&[-1.0, 1.0]).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert!(wilcoxon_signed_rank(&[0.0, 0.0]).is_err());
        let r = wilcoxon_signed_rank::<f64>(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.n, vec![3]);
    }

    #[test]
    fn works_in_f32() {
        let r = mann_whitney_u(&[1.0f32, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((r.p_value - 0.1).abs() < 1e-6);
    }
}
