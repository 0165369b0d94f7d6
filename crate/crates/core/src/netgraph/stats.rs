use serde::{Deserialize, Serialize};

use super::graph::InteractionGraph;
use crate::scalar::{pearson, Real};

/// Node attribute used for activity assortativity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityTransform {
    #[default]
    Raw,
    Log1p,
}

impl ActivityTransform {
    fn apply<T: Real>(self, x: u32) -> T {
        let v = T::lit(x as f64);
        match self {
            ActivityTransform::Raw => v,
            ActivityTransform::Log1p => v.ln_1p(),
        }
    }
}

/// Structural statistics of one interaction graph. `None` marks a statistic
/// that is undefined for the graph (too few nodes, zero variance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats<T> {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub density: Option<T>,
    pub avg_clustering: Option<T>,
    pub assortativity: Option<T>,
    pub gini: Option<T>,
}

pub fn density<T: Real>(g: &InteractionGraph) -> Option<T> {
    let n = g.node_count();
    (n >= 2).then(|| T::count(g.edge_count()) / (T::count(n) * T::count(n - 1) / T::lit(2.0)))
}

/// Local clustering per node; nodes of degree below two score zero.
pub fn local_clustering<T: Real>(g: &InteractionGraph) -> Vec<T> {
    let adj = g.adjacency();
    adj.iter()
        .enumerate()
        .map(|(v, nbrs)| {
            let k = nbrs.len();
            if k < 2 {
                return T::zero();
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                let na = &adj[a as usize];
                links += nbrs[i + 1..].iter().filter(|b| na.binary_search(b).is_ok()).count();
            }
            debug_assert!(nbrs.iter().all(|&u| u as usize != v));
            T::count(2 * links) / T::count(k * (k - 1))
        })
        .collect()
}

pub fn avg_clustering<T: Real>(g: &InteractionGraph) -> Option<T> {
    (g.node_count() >= 3).then(|| {
        let local = local_clustering::<T>(g);
        local.iter().copied().sum::<T>() / T::count(local.len())
    })
}

/// Pearson correlation of endpoint attributes over both orientations of every edge.
pub fn assortativity<T: Real>(g: &InteractionGraph, transform: ActivityTransform) -> Option<T> {
    let attr: Vec<T> = g.activity().iter().map(|&a| transform.apply(a)).collect();
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for &(a, b) in g.edges() {
        let (fa, fb) = (attr[a as usize], attr[b as usize]);
        xs.push(fa);
        ys.push(fb);
        xs.push(fb);
        ys.push(fa);
    }
    pearson(&xs, &ys)
}

/// Gini coefficient `sum_ij |x_i - x_j| / (2 n^2 mean)`, via the sorted-order identity.
pub fn gini<T: Real>(values: &[T]) -> Option<T> {
    let n = values.len();
    let total: T = values.iter().copied().sum();
    if n == 0 || total <= T::zero() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("gini of NaN"));
    // the weights sum to zero, so shifting by the minimum is free and makes constants exact
    let lo = v[0];
    let weighted: T = v
        .iter()
        .enumerate()
        .map(|(i, &x)| T::lit((2 * (i + 1)) as f64 - n as f64 - 1.0) * (x - lo))
        .sum();
    Some(weighted / (T::count(n) * total))
}

pub fn graph_stats<T: Real>(g: &InteractionGraph, transform: ActivityTransform) -> GraphStats<T> {
    let acts: Vec<T> = g.activity().iter().map(|&a| T::lit(a as f64)).collect();
    GraphStats {
        n_nodes: g.node_count(),
        n_edges: g.edge_count(),
        density: density(g),
        avg_clustering: avg_clustering(g),
        assortativity: assortativity(g, transform),
        gini: gini(&acts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::MonthKey;

    fn with_activity(n: usize, edges: &[(u32, u32)], act: &[u32]) -> InteractionGraph {
        InteractionGraph::new(
            "c",
            MonthKey::new(2014, 1).unwrap(),
            (0..n).map(|i| i.to_string()).collect(),
            act.to_vec(),
            edges.iter().copied(),
        )
    }

    #[test]
    fn triangle_and_path() {
        let k3 = InteractionGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let s: GraphStats<f64> = graph_stats(&k3, ActivityTransform::Raw);
        assert_eq!(s.density, Some(1.0));
        assert_eq!(s.avg_clustering, Some(1.0));
        let path = InteractionGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let s: GraphStats<f64> = graph_stats(&path, ActivityTransform::Raw);
        assert_eq!(s.avg_clustering, Some(0.0));
        assert!((s.density.unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gini_values() {
        assert!((gini::<f64>(&[1.0, 1.0, 2.0]).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(gini(&[4.0, 4.0, 4.0]), Some(0.0));
        assert_eq!(gini::<f64>(&[]), None);
    }

    #[test]
    fn single_edge_assortativity() {
        let g = with_activity(2, &[(0, 1)], &[1, 2]);
        let r: f64 = assortativity(&g, ActivityTransform::Raw).unwrap();
        assert!((r + 1.0).abs() < 1e-12);
        let flat = with_activity(2, &[(0, 1)], &[3, 3]);
        assert_eq!(assortativity::<f64>(&flat, ActivityTransform::Raw), None);
        let logged: f32 = assortativity(&g, ActivityTransform::Log1p).unwrap();
        assert!((logged + 1.0).abs() < 1e-6);
    }
}
