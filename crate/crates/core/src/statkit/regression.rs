//! Panel regression of next-month loyalty on current loyalty and a network
//! feature, with community and month fixed effects.
//!
//! Community intercepts are absorbed by demeaning within community; month
//! indicators (first month dropped) stay explicit. The network feature is
//! standardized first, so its coefficient reads per standard deviation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::normal_two_sided;
use crate::corpus::MonthKey;
use crate::error::{Error, Result};
use crate::scalar::{mean, sample_sd, Real};

pub const TERM_NOW: &str = "loyalty_rate_now";
pub const TERM_FEATURE: &str = "network_feature";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow<T> {
    pub community: String,
    pub month: MonthKey,
    pub loyalty_rate_next: T,
    pub loyalty_rate_now: T,
    pub network_feature: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult<T> {
    pub coefficients: BTreeMap<String, T>,
    pub std_errors: BTreeMap<String, T>,
    pub z_scores: BTreeMap<String, T>,
    pub p_values: BTreeMap<String, T>,
    pub n_obs: usize,
    pub n_communities: usize,
    pub residual_dof: usize,
}

impl<T: Real> RegressionResult<T> {
    pub fn feature(&self) -> (T, T) {
        (self.coefficients[TERM_FEATURE], self.std_errors[TERM_FEATURE])
    }
}

/// Modified Gram-Schmidt with a second orthogonalization pass. Columns that
/// lose almost all of their norm are reported as collinear.
fn qr<T: Real>(cols: &[Vec<T>], names: &[String]) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>)> {
    let k = cols.len();
    let tol = T::epsilon().sqrt() * T::lit(10.0);
    let mut q: Vec<Vec<T>> = Vec::with_capacity(k);
    let mut r = vec![vec![T::zero(); k]; k];
    let mut collinear = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let norm0 = col.iter().map(|&x| x * x).sum::<T>().sqrt();
        let mut v = col.clone();
        for _pass in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let d: T = qi.iter().zip(&v).map(|(&a, &b)| a * b).sum();
                r[i][j] = r[i][j] + d;
                for (vv, &qq) in v.iter_mut().zip(qi) {
                    *vv = *vv - d * qq;
                }
            }
        }
        let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm0 <= T::zero() || norm <= tol * norm0 {
            collinear.push(names[j].clone());
            q.push(vec![T::zero(); v.len()]);
            continue;
        }
        r[j][j] = norm;
        q.push(v.into_iter().map(|x| x / norm).collect());
    }
    if !collinear.is_empty() {
        return Err(Error::RankDeficient(collinear));
    }
    Ok((q, r))
}

/// Inverse of an upper-triangular matrix.
fn invert_upper<T: Real>(r: &[Vec<T>]) -> Vec<Vec<T>> {
    let k = r.len();
    let mut inv = vec![vec![T::zero(); k]; k];
    for j in 0..k {
        inv[j][j] = T::one() / r[j][j];
        for i in (0..j).rev() {
            let s: T = (i + 1..=j).map(|m| r[i][m] * inv[m][j]).sum();
            inv[i][j] = -s / r[i][i];
        }
    }
    inv
}

pub fn panel_regression<T: Real>(rows: &[PanelRow<T>]) -> Result<RegressionResult<T>> {
    let communities: BTreeSet<&str> = rows.iter().map(|r| r.community.as_str()).collect();
    let months: BTreeSet<MonthKey> = rows.iter().map(|r| r.month).collect();
    if communities.len() < 2 || months.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "panel regression needs 2 communities and 2 months, got {} and {}",
            communities.len(),
            months.len()
        )));
    }
    let feature: Vec<T> = rows.iter().map(|r| r.network_feature).collect();
    let f_mean = mean(&feature).expect("non-empty");
    let f_sd = sample_sd(&feature).unwrap_or_else(T::zero);
    if !(f_sd > T::zero()) {
        return Err(Error::RankDeficient(vec![TERM_FEATURE.to_string()]));
    }

    let mut names = vec![TERM_NOW.to_string(), TERM_FEATURE.to_string()];
    let month_terms: Vec<MonthKey> = months.iter().copied().skip(1).collect();
    names.extend(month_terms.iter().map(|m| format!("month[{m}]")));
    let n = rows.len();
    let mut cols: Vec<Vec<T>> = vec![Vec::with_capacity(n); names.len()];
    for r in rows {
        cols[0].push(r.loyalty_rate_now);
        cols[1].push((r.network_feature - f_mean) / f_sd);
        for (j, m) in month_terms.iter().enumerate() {
            cols[2 + j].push(if r.month == *m { T::one() } else { T::zero() });
        }
    }
    let mut y: Vec<T> = rows.iter().map(|r| r.loyalty_rate_next).collect();

    // absorb community intercepts
    let group: Vec<usize> = {
        let idx: BTreeMap<&str, usize> = communities.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        rows.iter().map(|r| idx[r.community.as_str()]).collect()
    };
    let g = communities.len();
    let mut sizes = vec![0usize; g];
    for &gi in &group {
        sizes[gi] += 1;
    }
    let demean = |v: &mut Vec<T>| {
        let mut sums = vec![T::zero(); g];
        for (x, &gi) in v.iter().zip(&group) {
            sums[gi] = sums[gi] + *x;
        }
        for (x, &gi) in v.iter_mut().zip(&group) {
            *x = *x - sums[gi] / T::count(sizes[gi]);
        }
    };
    for c in cols.iter_mut() {
        demean(c);
    }
    demean(&mut y);

    let k = names.len();
    if n <= k + g {
        return Err(Error::InsufficientData(format!(
            "{n} observations for {} parameters",
            k + g
        )));
    }
    let (q, r) = qr(&cols, &names)?;
    let qty: Vec<T> = q.iter().map(|qi| qi.iter().zip(&y).map(|(&a, &b)| a * b).sum()).collect();
    let mut beta = vec![T::zero(); k];
    for i in (0..k).rev() {
        let s: T = (i + 1..k).map(|j| r[i][j] * beta[j]).sum();
        beta[i] = (qty[i] - s) / r[i][i];
    }
    let rss: T = (0..n)
        .map(|row| {
            let fit: T = (0..k).map(|j| cols[j][row] * beta[j]).sum();
            let e = y[row] - fit;
            e * e
        })
        .sum();
    let dof = n - k - g;
    let sigma2 = rss / T::count(dof);
    let rinv = invert_upper(&r);

    let mut out = RegressionResult {
        coefficients: BTreeMap::new(),
        std_errors: BTreeMap::new(),
        z_scores: BTreeMap::new(),
        p_values: BTreeMap::new(),
        n_obs: n,
        n_communities: g,
        residual_dof: dof,
    };
    for (j, name) in names.iter().enumerate() {
        // (R^T R)^-1 diagonal = squared row norm of R^-1
        let var = sigma2 * rinv[j].iter().map(|&x| x * x).sum::<T>();
        let se = var.sqrt();
        let z = beta[j] / se;
        out.coefficients.insert(name.clone(), beta[j]);
        out.std_errors.insert(name.clone(), se);
        out.z_scores.insert(name.clone(), z);
        out.p_values
            .insert(name.clone(), T::lit(normal_two_sided(z.as_f64()).max(super::P_FLOOR)));
    }
    Ok(out)
}
