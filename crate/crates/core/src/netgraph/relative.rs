use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::InteractionGraph;
use super::rewire::rewire_null;
use super::stats::{assortativity, avg_clustering, ActivityTransform};
use crate::error::{Error, Result};
use crate::rng::{task_rng, Key};
use crate::scalar::{median, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NullOptions {
    pub n_null: usize,
    pub iterations_multiplier: usize,
    pub transform: ActivityTransform,
}

impl Default for NullOptions {
    fn default() -> Self {
        NullOptions {
            n_null: 10,
            iterations_multiplier: 10_000,
            transform: ActivityTransform::Raw,
        }
    }
}

/// Empirical statistics of one graph next to the medians over its rewired samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullComparison<T> {
    pub clustering: Option<T>,
    pub assortativity: Option<T>,
    pub null_clustering: Option<T>,
    pub null_assortativity: Option<T>,
}

fn relative<T: Real>(emp: Option<T>, null: Option<T>) -> Option<T> {
    match (emp, null) {
        (Some(e), Some(n)) if n != T::zero() => Some((e - n) / n.abs()),
        _ => None,
    }
}

impl<T: Real> NullComparison<T> {
    pub fn clustering_rel(&self) -> Option<T> {
        relative(self.clustering, self.null_clustering)
    }

    pub fn assortativity_rel(&self) -> Option<T> {
        relative(self.assortativity, self.null_assortativity)
    }
}

/// Rewires `g` `n_null` times. Sample `i` draws from the stream
/// `(seed, community, month, i)`.
pub fn null_samples(g: &InteractionGraph, opts: &NullOptions, seed: u64) -> Vec<InteractionGraph> {
    (0..opts.n_null)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, &[Key::from(&g.community), Key::from(g.month), Key::from(i)]);
            rewire_null(g, opts.iterations_multiplier, &mut rng)
        })
        .collect()
}

pub fn compare_to_null<T: Real>(g: &InteractionGraph, opts: &NullOptions, seed: u64) -> NullComparison<T> {
    let samples = null_samples(g, opts, seed);
    let cl: Vec<T> = samples.iter().filter_map(avg_clustering).collect();
    let asr: Vec<T> = samples.iter().filter_map(|s| assortativity(s, opts.transform)).collect();
    NullComparison {
        clustering: avg_clustering(g),
        assortativity: assortativity(g, opts.transform),
        null_clustering: median(&cl),
        null_assortativity: median(&asr),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeStats<T> {
    pub clustering_rel: Option<T>,
    pub assortativity_rel: Option<T>,
    pub n_null_samples: usize,
    pub seed: u64,
    pub n_months: usize,
}

/// Relative difference between the median monthly empirical statistic and
/// the median monthly null statistic, per statistic.
pub fn relative_stats<T: Real>(monthly: &[InteractionGraph], opts: &NullOptions, seed: u64) -> Result<RelativeStats<T>> {
    let comparisons: Vec<NullComparison<T>> = monthly.iter().map(|g| compare_to_null(g, opts, seed)).collect();
    summarize(&comparisons, opts, seed)
}

/// Aggregates precomputed monthly comparisons into relative statistics.
pub fn summarize<T: Real>(comparisons: &[NullComparison<T>], opts: &NullOptions, seed: u64) -> Result<RelativeStats<T>> {
    let pick = |f: fn(&NullComparison<T>) -> (Option<T>, Option<T>)| -> (Option<T>, Option<T>) {
        let (emp, null): (Vec<T>, Vec<T>) = comparisons
            .iter()
            .filter_map(|c| match f(c) {
                (Some(e), Some(n)) => Some((e, n)),
                _ => None,
            })
            .unzip();
        (median(&emp), median(&null))
    };
    let (ce, cn) = pick(|c| (c.clustering, c.null_clustering));
    let (ae, an) = pick(|c| (c.assortativity, c.null_assortativity));
    if ce.is_none() && ae.is_none() {
        return Err(Error::InsufficientData(
            "no monthly graph has defined clustering or assortativity".into(),
        ));
    }
    Ok(RelativeStats {
        clustering_rel: relative(ce, cn),
        assortativity_rel: relative(ae, an),
        n_null_samples: opts.n_null,
        seed,
        n_months: comparisons.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_of_relative_difference() {
        let c: NullComparison<f64> = NullComparison {
            clustering: Some(0.3),
            assortativity: Some(-0.2),
            null_clustering: Some(0.2),
            null_assortativity: Some(-0.2),
        };
        assert!((c.clustering_rel().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(c.assortativity_rel(), Some(0.0));
        let s = summarize(&[c], &NullOptions::default(), 0).unwrap();
        assert!((s.clustering_rel.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_null_median_is_undefined() {
        let c = NullComparison {
            clustering: Some(0.1),
            assortativity: None,
            null_clustering: Some(0.0),
            null_assortativity: None,
        };
        let s = summarize(&[c], &NullOptions::default(), 0).unwrap();
        assert_eq!(s.clustering_rel, None);
        assert_eq!(s.assortativity_rel, None);
    }

    #[test]
    fn all_undefined_is_error() {
        let c: NullComparison<f64> = NullComparison {
            clustering: None,
            assortativity: None,
            null_clustering: None,
            null_assortativity: None,
        };
        assert!(summarize(&[c], &NullOptions::default(), 0).is_err());
    }

    #[test]
    fn caveman_graph_is_more_clustered_than_null() {
        // ring of 8 cliques of 5, neighbouring cliques joined by one edge
        let mut edges = Vec::new();
        for k in 0..8u32 {
            let base = k * 5;
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
            edges.push((base + 4, ((k + 1) % 8) * 5));
        }
        let g = InteractionGraph::from_edges(40, &edges);
        let opts = NullOptions {
            n_null: 5,
            iterations_multiplier: 50,
            ..NullOptions::default()
        };
        let s: RelativeStats<f64> = relative_stats(std::slice::from_ref(&g), &opts, 11).unwrap();
        let direct_emp: f64 = avg_clustering(&g).unwrap();
        assert!(direct_emp > 0.8);
        assert!(s.clustering_rel.unwrap() > 0.0);
    }
}
