use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::rng::{task_rng, Key, TaskRng};
use crate::scalar::Real;

/// Number of candidate features drawn at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `floor(sqrt(d))`, at least one.
    #[default]
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        let m = match self {
            MaxFeatures::Sqrt => (d as f64).sqrt().floor() as usize,
            MaxFeatures::All => d,
            MaxFeatures::Fixed(k) => k,
        };
        m.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            min_samples_split: 10,
            max_features: MaxFeatures::Sqrt,
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be at least 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node<T> {
    Leaf(Class),
    /// Rows with `x[feature] <= threshold` go left.
    Split { feature: usize, threshold: T, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree<T> {
    nodes: Vec<Node<T>>,
}

impl<T: Real> DecisionTree<T> {
    pub fn predict(&self, x: &[T]) -> Class {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf(c) => return *c,
                Node::Split { feature, threshold, left, right } => {
                    at = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_split_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf(_) => None,
            })
            .max()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel<T> {
    trees: Vec<DecisionTree<T>>,
    feature_count: usize,
}

impl<T: Real> ForestModel<T> {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn trees(&self) -> &[DecisionTree<T>] {
        &self.trees
    }

    /// Fraction of trees voting positive.
    pub fn positive_share(&self, x: &[T]) -> f64 {
        let pos = self.trees.iter().filter(|t| t.predict(x).is_positive()).count();
        pos as f64 / self.trees.len() as f64
    }

    /// Majority vote; an even split goes to the negative class.
    pub fn predict(&self, x: &[T]) -> Class {
        let pos = self.trees.iter().filter(|t| t.predict(x).is_positive()).count();
        Class::from_bool(2 * pos > self.trees.len())
    }
}

/// Node impurity scaled by node size: `n * gini = n - (p^2 + q^2) / n`.
fn weighted_gini(n: usize, pos: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (n, p) = (n as f64, pos as f64);
    n - (p * p + (n - p) * (n - p)) / n
}

struct Grower<'a, T> {
    x: Vec<&'a [T]>,
    y: Vec<bool>,
    min_split: usize,
    mtry: usize,
    d: usize,
}

struct Best<T> {
    score: f64,
    feature: usize,
    threshold: T,
}

impl<T: Real> Grower<'_, T> {
    fn best_split_on(&self, rows: &[usize], f: usize, best: &mut Option<Best<T>>) {
        let mut vals: Vec<(T, bool)> = rows.iter().map(|&r| (self.x[r][f], self.y[r])).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("NaN feature value"));
        let n = vals.len();
        let total_pos = vals.iter().filter(|v| v.1).count();
        let mut left_pos = 0;
        for i in 0..n - 1 {
            left_pos += usize::from(vals[i].1);
            if vals[i].0 >= vals[i + 1].0 {
                continue;
            }
            let score = weighted_gini(i + 1, left_pos) + weighted_gini(n - i - 1, total_pos - left_pos);
            if best.as_ref().is_none_or(|b| score < b.score - 1e-12) {
                let mut threshold = (vals[i].0 + vals[i + 1].0) / T::lit(2.0);
                if threshold >= vals[i + 1].0 {
                    threshold = vals[i].0;
                }
                *best = Some(Best { score, feature: f, threshold });
            }
        }
    }

    fn grow(&self, rows: Vec<usize>, rng: &mut TaskRng) -> DecisionTree<T> {
        let mut nodes: Vec<Node<T>> = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, rows)];
        nodes.push(Node::Leaf(Class::Negative));
        let mut features: Vec<usize> = (0..self.d).collect();
        while let Some((slot, rows)) = stack.pop() {
            let pos = rows.iter().filter(|&&r| self.y[r]).count();
            let majority = Class::from_bool(2 * pos > rows.len());
            if rows.len() < self.min_split || pos == 0 || pos == rows.len() {
                nodes[slot] = Node::Leaf(majority);
                continue;
            }
            features.shuffle(rng);
            let mut best = None;
            for (i, &f) in features.iter().enumerate() {
                if i >= self.mtry && best.is_some() {
                    break;
                }
                self.best_split_on(&rows, f, &mut best);
            }
            let Some(best) = best else {
                nodes[slot] = Node::Leaf(majority);
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&row| self.x[row][best.feature] <= best.threshold);
            let (li, ri) = (nodes.len(), nodes.len() + 1);
            nodes.push(Node::Leaf(Class::Negative));
            nodes.push(Node::Leaf(Class::Negative));
            nodes[slot] = Node::Split {
                feature: best.feature,
                threshold: best.threshold,
                left: li,
                right: ri,
            };
            stack.push((ri, r));
            stack.push((li, l));
        }
        DecisionTree { nodes }
    }
}

/// Fits a random forest of Gini CART trees, each on a bootstrap resample.
/// Tree `i` draws from the stream `(seed, i)`, so the model does not depend
/// on thread scheduling.
pub fn train_forest<T: Real>(train: &Dataset<T>, params: &ForestParams) -> Result<ForestModel<T>> {
    params.validate()?;
    if train.len() < params.min_samples_split {
        return Err(Error::InsufficientData(format!(
            "{} training rows, need at least {}",
            train.len(),
            params.min_samples_split
        )));
    }
    let (neg, pos) = train.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass);
    }
    let d = train.dim();
    let grower = Grower {
        x: train.examples().iter().map(|e| e.features.as_slice()).collect(),
        y: train.examples().iter().map(|e| e.label.is_positive()).collect(),
        min_split: params.min_samples_split,
        mtry: params.max_features.resolve(d),
        d,
    };
    let n = train.len();
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(params.seed, &[Key::from("tree"), Key::from(t)]);
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            grower.grow(rows, &mut rng)
        })
        .collect();
    Ok(ForestModel { trees, feature_count: d })
}
