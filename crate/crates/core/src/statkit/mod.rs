//! Rank tests, sign test, correlation, bootstrap intervals, multiple-testing
//! correction and the fixed-effects panel regression.

mod bootstrap;
mod holm;
mod rank;
mod ranktests;
mod regression;
mod sign;
mod spearman;

use serde::{Deserialize, Serialize};

pub use bootstrap::{bootstrap_ci, Statistic};
pub use holm::holm_bonferroni;
pub use rank::midranks;
pub use ranktests::{mann_whitney_u, wilcoxon_signed_rank, EXACT_MAX_N};
pub use regression::{panel_regression, PanelRow, RegressionResult, TERM_FEATURE, TERM_NOW};
pub use sign::binomial_sign_test;
pub use spearman::spearman;

use crate::scalar::Real;

/// Smallest reported p-value; anything below is reported as `< P_FLOOR`.
pub const P_FLOOR: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    MannWhitneyU,
    WilcoxonSigned,
    BinomialSign,
    Spearman,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult<T> {
    pub statistic: T,
    /// Two-sided p-value in `(0, 1]`.
    pub p_value: T,
    pub n: Vec<usize>,
    pub method: Method,
    /// True when the p-value comes from full enumeration of the null distribution.
    pub exact: bool,
    /// True when the true p-value fell below [`P_FLOOR`].
    pub p_floored: bool,
}

impl<T: Real> TestResult<T> {
    pub(crate) fn new(statistic: T, p: f64, n: Vec<usize>, method: Method, exact: bool) -> Self {
        let p = if p.is_nan() { 1.0 } else { p.min(1.0) };
        let floored = p < P_FLOOR;
        TestResult {
            statistic,
            p_value: T::lit(p.max(P_FLOOR)),
            n,
            method,
            exact,
            p_floored: floored,
        }
    }

    /// p-value formatted for reports, `"<2.2e-16"` when floored.
    pub fn p_display(&self) -> String {
        if self.p_floored {
            format!("<{P_FLOOR:.1e}")
        } else {
            format!("{:.6e}", self.p_value.as_f64())
        }
    }
}

pub(crate) fn normal_two_sided(z: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    2.0 * n.sf(z.abs())
}
