use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, Datelike};
use serde::{Deserialize, Serialize};

use super::graph::InteractionGraph;
use crate::corpus::{Comment, CorpusStore, MonthKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    /// Authors of comments on the same linear chain within `max_chain_distance` steps.
    Chain,
    /// Replier and the author replied to.
    DirectReply,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphOptions {
    pub mode: EdgeMode,
    /// Users need this many comments (all kinds) in the calendar year to become nodes.
    pub min_annual_comments: u32,
    /// Largest depth difference along a chain that still yields an edge.
    pub max_chain_distance: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            mode: EdgeMode::Chain,
            min_annual_comments: 50,
            max_chain_distance: 2,
        }
    }
}

fn year_of(ts: i64) -> i32 {
    DateTime::from_timestamp(ts, 0).map(|d| d.year()).unwrap_or(1970)
}

/// Builds monthly interaction graphs; yearly activity counts are computed once.
pub struct GraphBuilder<'a> {
    store: &'a CorpusStore,
    opts: GraphOptions,
    annual: HashMap<(&'a str, i32), u32>,
}

impl<'a> GraphBuilder<'a> {
    pub fn new(store: &'a CorpusStore, opts: GraphOptions) -> Self {
        let mut annual = HashMap::new();
        for c in store.comments() {
            *annual.entry((c.author.as_str(), year_of(c.created_at))).or_insert(0) += 1;
        }
        GraphBuilder { store, opts, annual }
    }

    pub fn options(&self) -> &GraphOptions {
        &self.opts
    }

    fn eligible(&self, author: &str, year: i32) -> bool {
        self.annual.get(&(author, year)).copied().unwrap_or(0) >= self.opts.min_annual_comments
    }

    pub fn build(&self, community: &str, month: MonthKey) -> InteractionGraph {
        let in_bucket: Vec<&Comment> = self.store.comments_in(community, month).collect();
        let mut activity: BTreeMap<&str, u32> = BTreeMap::new();
        for c in &in_bucket {
            *activity.entry(c.author.as_str()).or_insert(0) += 1;
        }
        let ids: BTreeSet<&str> = in_bucket.iter().map(|c| c.id.as_str()).collect();
        let year = month.year;
        let depth = match self.opts.mode {
            EdgeMode::Chain => self.opts.max_chain_distance,
            EdgeMode::DirectReply => 1,
        };

        let mut pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
        for c in &in_bucket {
            if !self.eligible(&c.author, year) {
                continue;
            }
            let mut cursor = c.parent_id.as_deref();
            for _ in 0..depth {
                let Some(pid) = cursor else { break };
                if !ids.contains(pid) {
                    break;
                }
                let Some(parent) = self.store.comment(pid) else { break };
                if parent.author != c.author && self.eligible(&parent.author, year) {
                    let (a, b) = if c.author < parent.author {
                        (c.author.as_str(), parent.author.as_str())
                    } else {
                        (parent.author.as_str(), c.author.as_str())
                    };
                    pairs.insert((a, b));
                }
                cursor = parent.parent_id.as_deref();
            }
        }

        let nodes: BTreeSet<&str> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let index: HashMap<&str, u32> = nodes.iter().enumerate().map(|(i, u)| (*u, i as u32)).collect();
        let users: Vec<String> = nodes.iter().map(|u| u.to_string()).collect();
        let acts: Vec<u32> = nodes.iter().map(|u| activity[u]).collect();
        InteractionGraph::new(
            community,
            month,
            users,
            acts,
            pairs.iter().map(|(a, b)| (index[a], index[b])),
        )
    }
}

/// One-off convenience around [`GraphBuilder`].
pub fn build_graph(store: &CorpusStore, community: &str, month: MonthKey, opts: &GraphOptions) -> InteractionGraph {
    GraphBuilder::new(store, opts.clone()).build(community, month)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testkit::*;

    fn chain_store(authors: &[&str]) -> CorpusStore {
        let t = MonthKey::new(2014, 5).unwrap().start_timestamp() + 100;
        let mut cs = vec![comment("c0", "A", authors[0], t)];
        for (i, a) in authors.iter().enumerate().skip(1) {
            cs.push(reply(&format!("c{i}"), &format!("c{}", i - 1), "A", a, t + i as i64));
        }
        store_of(cs, vec![])
    }

    fn edge_names(g: &InteractionGraph) -> Vec<String> {
        g.edges()
            .iter()
            .map(|&(a, b)| format!("{}{}", g.users()[a as usize], g.users()[b as usize]))
            .collect()
    }

    fn opts(mode: EdgeMode) -> GraphOptions {
        GraphOptions {
            mode,
            min_annual_comments: 1,
            max_chain_distance: 2,
        }
    }

    #[test]
    fn chain_window_of_two() {
        let store = chain_store(&["A", "B", "C", "D"]);
        let g = build_graph(&store, "A", MonthKey::new(2014, 5).unwrap(), &opts(EdgeMode::Chain));
        assert_eq!(edge_names(&g), vec!["AB", "AC", "BC", "BD", "CD"]);
    }

    #[test]
    fn direct_reply_edges() {
        let store = chain_store(&["A", "B", "C", "D"]);
        let g = build_graph(&store, "A", MonthKey::new(2014, 5).unwrap(), &opts(EdgeMode::DirectReply));
        assert_eq!(edge_names(&g), vec!["AB", "BC", "CD"]);
    }

    #[test]
    fn consecutive_self_replies_make_no_loop() {
        let store = chain_store(&["A", "A", "B"]);
        let g = build_graph(&store, "A", MonthKey::new(2014, 5).unwrap(), &opts(EdgeMode::Chain));
        assert_eq!(edge_names(&g), vec!["AB"]);
        assert_eq!(g.activity(), &[2, 1]);
    }

    #[test]
    fn annual_activity_screen() {
        let store = chain_store(&["A", "B", "C", "D"]);
        let mut o = opts(EdgeMode::Chain);
        o.min_annual_comments = 2;
        let g = build_graph(&store, "A", MonthKey::new(2014, 5).unwrap(), &o);
        assert_eq!(g.node_count(), 0);
    }

    #[test]
    fn empty_bucket_gives_empty_graph() {
        let store = chain_store(&["A", "B"]);
        let g = build_graph(&store, "A", MonthKey::new(2014, 6).unwrap(), &opts(EdgeMode::Chain));
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
    }
}
