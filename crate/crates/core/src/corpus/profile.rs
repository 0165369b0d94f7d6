use std::collections::BTreeMap;

use serde::Serialize;

use super::month::{month_of, MonthKey};
use super::store::CorpusStore;

/// One user's comment tallies for one month.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserMonthProfile {
    pub author: String,
    pub month: MonthKey,
    pub per_community_total: BTreeMap<String, u32>,
    pub per_community_top_level: BTreeMap<String, u32>,
}

impl UserMonthProfile {
    pub fn total(&self) -> u32 {
        self.per_community_total.values().sum()
    }

    pub fn top_level_total(&self) -> u32 {
        self.per_community_top_level.values().sum()
    }

    pub fn total_in(&self, community: &str) -> u32 {
        self.per_community_total.get(community).copied().unwrap_or(0)
    }

    pub fn top_level_in(&self, community: &str) -> u32 {
        self.per_community_top_level.get(community).copied().unwrap_or(0)
    }
}

/// Profiles for every active `(author, month)`.
#[derive(Debug, Clone, Default)]
pub struct Profiles {
    by_author: BTreeMap<String, BTreeMap<MonthKey, UserMonthProfile>>,
    months: Vec<MonthKey>,
}

impl Profiles {
    pub fn get(&self, author: &str, month: MonthKey) -> Option<&UserMonthProfile> {
        self.by_author.get(author).and_then(|m| m.get(&month))
    }

    pub fn authors(&self) -> impl Iterator<Item = &str> {
        self.by_author.keys().map(String::as_str)
    }

    /// Monthly profiles of one author, ascending by month.
    pub fn of(&self, author: &str) -> impl Iterator<Item = &UserMonthProfile> {
        self.by_author.get(author).into_iter().flat_map(|m| m.values())
    }

    pub fn iter(&self) -> impl Iterator<Item = &UserMonthProfile> {
        self.by_author.values().flat_map(|m| m.values())
    }

    pub fn len(&self) -> usize {
        self.by_author.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_author.is_empty()
    }

    /// Corpus months, ascending. A month `t` can carry labels only when
    /// `t.succ()` is also inside this horizon.
    pub fn months(&self) -> &[MonthKey] {
        &self.months
    }

    pub fn last_month(&self) -> Option<MonthKey> {
        self.months.last().copied()
    }

    /// True when activity at `t + 1` is observable.
    pub fn has_successor(&self, t: MonthKey) -> bool {
        self.last_month().is_some_and(|last| t < last)
    }
}

/// Tallies every comment into its author's monthly profile.
pub fn build_profiles(store: &CorpusStore) -> Profiles {
    let mut by_author: BTreeMap<String, BTreeMap<MonthKey, UserMonthProfile>> = BTreeMap::new();
    for c in store.comments() {
        let month = month_of(c.created_at).expect("validated timestamp");
        let profile = by_author
            .entry(c.author.clone())
            .or_default()
            .entry(month)
            .or_insert_with(|| UserMonthProfile {
                author: c.author.clone(),
                month,
                per_community_total: BTreeMap::new(),
                per_community_top_level: BTreeMap::new(),
            });
        *profile.per_community_total.entry(c.community.clone()).or_insert(0) += 1;
        if c.is_top_level() {
            *profile.per_community_top_level.entry(c.community.clone()).or_insert(0) += 1;
        }
    }
    Profiles {
        by_author,
        months: store.months().to_vec(),
    }
}
