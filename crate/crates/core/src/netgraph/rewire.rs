use std::collections::HashSet;

use rand::Rng;

use super::graph::InteractionGraph;

fn key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}

/// Degree-preserving randomization by double-edge swaps.
///
/// Runs `iterations_multiplier * |E|` attempts. Each attempt picks two edges
/// `{a,b}`, `{c,d}` (random orientation) and rewires them to `{a,d}`, `{c,b}`
/// unless that would create a self-loop or a parallel edge.
pub fn rewire_null<R: Rng + ?Sized>(g: &InteractionGraph, iterations_multiplier: usize, rng: &mut R) -> InteractionGraph {
    let m = g.edge_count();
    if m < 2 {
        return g.clone();
    }
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    let mut present: HashSet<u64> = edges.iter().map(|&(a, b)| key(a, b)).collect();
    let attempts = iterations_multiplier.saturating_mul(m);
    for _ in 0..attempts {
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.random::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b {
            continue;
        }
        let (k1, k2) = (key(a, d), key(c, b));
        if present.contains(&k1) || present.contains(&k2) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(k1);
        present.insert(k2);
        edges[i] = (a.min(d), a.max(d));
        edges[j] = (c.min(b), c.max(b));
    }
    g.with_edges(edges)
}
