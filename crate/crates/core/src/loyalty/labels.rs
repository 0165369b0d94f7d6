use std::collections::{BTreeMap, BTreeSet, HashSet};

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::LoyaltyParams;
use crate::corpus::{MonthKey, Profiles, UserMonthProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LabelKind {
    Loyal,
    Vagrant,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LoyaltyLabel {
    pub author: String,
    pub community: String,
    pub month: MonthKey,
    pub kind: LabelKind,
}

/// The single community a user prefers in a month, if any.
///
/// Share mode: the community with the largest share at or above the
/// threshold; an exact tie goes to the lexicographically first name.
/// Plurality mode: the community with strictly more top-level comments
/// than every other community.
pub fn preferred_community<'p>(profile: &'p UserMonthProfile, params: &LoyaltyParams) -> Result<Option<&'p str>> {
    let total = profile.top_level_total();
    if total < params.min_monthly_comments {
        return Err(Error::NotEligible {
            total,
            required: params.min_monthly_comments,
        });
    }
    if total == 0 {
        return Ok(None);
    }
    let max = profile.per_community_top_level.values().copied().max().unwrap_or(0);
    let leaders: Vec<&str> = profile
        .per_community_top_level
        .iter()
        .filter(|&(_, &n)| n == max)
        .map(|(c, _)| c.as_str())
        .collect();
    if params.relaxed_preference {
        return Ok(if leaders.len() == 1 { Some(leaders[0]) } else { None });
    }
    if (max as f64) < params.preference_threshold * total as f64 {
        return Ok(None);
    }
    if leaders.len() > 1 {
        debug!(
            "preference tie for {} in {} among {:?}; taking {}",
            profile.author, profile.month, leaders, leaders[0]
        );
    }
    Ok(Some(leaders[0]))
}

/// Whether the profile's user prefers `community`; ineligible users yield `NotEligible`.
pub fn prefers(profile: &UserMonthProfile, community: &str, params: &LoyaltyParams) -> Result<bool> {
    Ok(preferred_community(profile, params)? == Some(community))
}

fn eligible_preference<'p>(profile: Option<&'p UserMonthProfile>, params: &LoyaltyParams) -> Option<&'p str> {
    profile.and_then(|p| preferred_community(p, params).ok().flatten())
}

/// Loyal labels: the user prefers the same community at `t` and `t + 1`.
pub fn label_loyal(profiles: &Profiles, params: &LoyaltyParams) -> Vec<LoyaltyLabel> {
    let authors: Vec<&str> = profiles.authors().collect();
    authors
        .par_iter()
        .flat_map_iter(|&author| {
            profiles.of(author).filter_map(move |p| {
                if !profiles.has_successor(p.month) {
                    return None;
                }
                let now = eligible_preference(Some(p), params)?;
                let next = eligible_preference(profiles.get(author, p.month.succ()), params)?;
                (now == next).then(|| LoyaltyLabel {
                    author: author.to_string(),
                    community: now.to_string(),
                    month: p.month,
                    kind: LabelKind::Loyal,
                })
            })
        })
        .collect()
}

/// Vagrant labels: a few top-level comments in a community at `t`, none
/// there at `t + 1`, while still commenting somewhere at `t + 1`.
pub fn label_vagrants(profiles: &Profiles, params: &LoyaltyParams) -> Vec<LoyaltyLabel> {
    let authors: Vec<&str> = profiles.authors().collect();
    authors
        .par_iter()
        .flat_map_iter(|&author| {
            profiles.of(author).flat_map(move |p| {
                let next = profiles
                    .has_successor(p.month)
                    .then(|| profiles.get(author, p.month.succ()))
                    .flatten()
                    .filter(|n| n.total() > 0);
                p.per_community_top_level
                    .iter()
                    .filter(move |&(c, &n)| {
                        next.is_some_and(|next| {
                            (params.vagrant_min..=params.vagrant_max).contains(&n) && next.total_in(c) == 0
                        })
                    })
                    .map(move |(c, _)| LoyaltyLabel {
                        author: author.to_string(),
                        community: c.clone(),
                        month: p.month,
                        kind: LabelKind::Vagrant,
                    })
            })
        })
        .collect()
}

/// Indexed collection of loyal and vagrant labels.
#[derive(Debug, Clone, Default)]
pub struct LabelSet {
    labels: Vec<LoyaltyLabel>,
    index: HashSet<(String, String, MonthKey, LabelKind)>,
}

impl LabelSet {
    pub fn new(mut labels: Vec<LoyaltyLabel>) -> Self {
        labels.sort();
        labels.dedup();
        let index = labels
            .iter()
            .map(|l| (l.author.clone(), l.community.clone(), l.month, l.kind))
            .collect();
        LabelSet { labels, index }
    }

    /// Labels both kinds with `params` (share mode).
    pub fn compute(profiles: &Profiles, params: &LoyaltyParams) -> Self {
        let mut all = label_loyal(profiles, params);
        all.extend(label_vagrants(profiles, params));
        Self::new(all)
    }

    /// All labels, sorted by author, community, month, kind.
    pub fn labels(&self) -> &[LoyaltyLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn has(&self, kind: LabelKind, author: &str, community: &str, month: MonthKey) -> bool {
        self.index
            .contains(&(author.to_string(), community.to_string(), month, kind))
    }

    pub fn of_kind(&self, kind: LabelKind) -> impl Iterator<Item = &LoyaltyLabel> {
        self.labels.iter().filter(move |l| l.kind == kind)
    }

    pub fn in_community<'a>(&'a self, community: &'a str, kind: LabelKind) -> impl Iterator<Item = &'a LoyaltyLabel> {
        self.of_kind(kind).filter(move |l| l.community == community)
    }

    /// Distinct users holding a label of `kind` for the community.
    pub fn users<'a>(&'a self, community: &str, kind: LabelKind) -> BTreeSet<&'a str> {
        self.labels
            .iter()
            .filter(|l| l.kind == kind && l.community == community)
            .map(|l| l.author.as_str())
            .collect()
    }

    /// Months in which the user holds a label of `kind` for the community.
    pub fn months_for(&self, author: &str, community: &str, kind: LabelKind) -> Vec<MonthKey> {
        self.in_community(community, kind)
            .filter(|l| l.author == author)
            .map(|l| l.month)
            .collect()
    }

    /// Label counts per month for one community.
    pub fn monthly_counts(&self, community: &str, kind: LabelKind) -> BTreeMap<MonthKey, usize> {
        let mut out = BTreeMap::new();
        for l in self.in_community(community, kind) {
            *out.entry(l.month).or_insert(0) += 1;
        }
        out
    }

    pub fn communities(&self) -> BTreeSet<&str> {
        self.labels.iter().map(|l| l.community.as_str()).collect()
    }
}

/// Months each user holds a Loyal label for the community (not necessarily consecutive).
pub fn tenures(labels: &LabelSet, community: &str) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for l in labels.in_community(community, LabelKind::Loyal) {
        *out.entry(l.author.clone()).or_insert(0) += 1;
    }
    out
}
