use statrs::function::factorial::ln_binomial;

use super::{Method, TestResult};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Two-sided exact binomial test of `k` successes in `n` trials against `p0`.
///
/// The p-value sums the probabilities of every outcome no more likely than
/// the observed one.
pub fn binomial_sign_test<T: Real>(k: u64, n: u64, p0: f64) -> Result<TestResult<T>> {
    if n == 0 {
        return Err(Error::InsufficientData("binomial test with zero trials".into()));
    }
    if k > n {
        return Err(Error::InsufficientData(format!("{k} successes out of {n} trials")));
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::Config(format!("p0 {p0} outside [0, 1]")));
    }
    let ln_pmf = |i: u64| -> f64 {
        let a = if i == 0 { 0.0 } else { i as f64 * p0.ln() };
        let b = if i == n { 0.0 } else { (n - i) as f64 * (1.0 - p0).ln() };
        ln_binomial(n, i) + a + b
    };
    let observed = ln_pmf(k);
    // relative slack so numerically equal tails count as equally likely
    let cutoff = observed + 1e-7;
    let p: f64 = (0..=n).map(ln_pmf).filter(|&l| l <= cutoff).map(f64::exp).sum();
    Ok(TestResult::new(T::lit(k as f64), p, vec![n as usize], Method::BinomialSign, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_successes() {
        let r = binomial_sign_test::<f64>(10, 10, 0.5).unwrap();
        assert!((r.p_value - 2.0 / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn centre_is_one() {
        let r = binomial_sign_test::<f64>(5, 10, 0.5).unwrap();
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_trials() {
        assert!(binomial_sign_test::<f64>(0, 0, 0.5).is_err());
    }

    #[test]
    fn extreme_tail() {
        let r = binomial_sign_test::<f64>(230, 242, 0.5).unwrap();
        assert!(r.p_value < 1e-9);
    }
}
