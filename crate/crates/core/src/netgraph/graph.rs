use std::collections::BTreeSet;

use crate::corpus::MonthKey;

/// Undirected simple user-user graph for one community-month.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    pub community: String,
    pub month: MonthKey,
    users: Vec<String>,
    activity: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl InteractionGraph {
    /// Builds a graph from node attributes and an edge list over node
    /// indices. Self-loops are dropped and parallel edges merged.
    pub fn new(
        community: impl Into<String>,
        month: MonthKey,
        users: Vec<String>,
        activity: Vec<u32>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        assert_eq!(users.len(), activity.len(), "one activity value per user");
        let n = users.len() as u32;
        let set: BTreeSet<(u32, u32)> = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| {
                assert!(a < n && b < n, "edge endpoint out of range");
                (a.min(b), a.max(b))
            })
            .collect();
        InteractionGraph {
            community: community.into(),
            month,
            users,
            activity,
            edges: set.into_iter().collect(),
        }
    }

    /// Unlabeled graph with unit activities, convenient for structural tests.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let users = (0..n).map(|i| format!("n{i}")).collect();
        Self::new("", MonthKey { year: 1970, month: 1 }, users, vec![1; n], edges.iter().copied())
    }

    pub fn node_count(&self) -> usize {
        self.users.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn activity(&self) -> &[u32] {
        &self.activity
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.users.len()];
        for &(a, b) in &self.edges {
            d[a as usize] += 1;
            d[b as usize] += 1;
        }
        d
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.users.len()];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Same nodes with a different edge set.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        Self::new(
            self.community.clone(),
            self.month,
            self.users.clone(),
            self.activity.clone(),
            edges,
        )
    }
}
