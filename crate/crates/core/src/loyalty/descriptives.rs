use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::labels::{tenures, LabelSet};
use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::scalar::{mean, median};

/// Size, activity and thread-shape summaries of one community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityDescriptives {
    pub community: String,
    /// Mean over months of distinct commenters.
    pub commenters_per_month: f64,
    /// Mean over months of comments per commenter (all comments).
    pub comments_per_user: f64,
    pub thread_length_median: f64,
    pub thread_unique_contributors_median: f64,
    /// Mean months labeled loyal among users with at least one loyal label.
    pub loyal_tenure_mean: Option<f64>,
}

pub fn community_descriptives(store: &CorpusStore, labels: &LabelSet, community: &str) -> Result<CommunityDescriptives> {
    if !store.has_community(community) {
        return Err(Error::UnknownCommunity(community.to_string()));
    }
    let mut commenters = Vec::new();
    let mut per_user = Vec::new();
    let mut threads: BTreeMap<&str, (usize, BTreeSet<&str>)> = BTreeMap::new();
    for month in store.months_of(community) {
        let mut users = BTreeSet::new();
        let mut n = 0usize;
        for c in store.comments_in(community, month) {
            users.insert(c.author.as_str());
            n += 1;
            let t = threads.entry(c.post_id.as_str()).or_default();
            t.0 += 1;
            t.1.insert(c.author.as_str());
        }
        commenters.push(users.len() as f64);
        per_user.push(n as f64 / users.len() as f64);
    }
    let lengths: Vec<f64> = threads.values().map(|(n, _)| *n as f64).collect();
    let contributors: Vec<f64> = threads.values().map(|(_, u)| u.len() as f64).collect();
    let tenure: Vec<f64> = tenures(labels, community).values().map(|&t| t as f64).collect();
    Ok(CommunityDescriptives {
        community: community.to_string(),
        commenters_per_month: mean(&commenters).unwrap_or(0.0),
        comments_per_user: mean(&per_user).unwrap_or(0.0),
        thread_length_median: median(&lengths).unwrap_or(0.0),
        thread_unique_contributors_median: median(&contributors).unwrap_or(0.0),
        loyal_tenure_mean: mean(&tenure),
    })
}
