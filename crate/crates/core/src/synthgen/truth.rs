use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::SynthConfig;
use crate::corpus::MonthKey;
use crate::loyalty::{LabelKind, LabelSet, LoyaltyLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cohort {
    Core,
    Casual,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlantedLabel {
    pub author: String,
    pub community: String,
    pub month: MonthKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedUser {
    pub name: String,
    pub cohort: Cohort,
    pub home: String,
    pub arrival: MonthKey,
}

/// Core-member transitions out of one community-month.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transitions {
    pub stayed: u32,
    pub switched: u32,
    pub left: u32,
}

impl Transitions {
    pub fn rate(&self) -> Option<f64> {
        let den = self.stayed + self.switched;
        (den > 0).then(|| self.stayed as f64 / den as f64)
    }
}

/// Expected per-comment features of a cohort, as configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortMeans {
    pub verbosity: f64,
    pub rate_i: f64,
    pub rate_you: f64,
    pub rate_we: f64,
    pub rate_affect_pos: f64,
    pub rate_affect_neg: f64,
    pub niche_preference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub config: SynthConfig,
    pub users: Vec<PlantedUser>,
    pub loyal: Vec<PlantedLabel>,
    pub vagrant: Vec<PlantedLabel>,
    pub planted_rates: BTreeMap<String, f64>,
    /// Keyed by `community` then month.
    pub transitions: BTreeMap<String, BTreeMap<MonthKey, Transitions>>,
    pub cohort_means: BTreeMap<Cohort, CohortMeans>,
    /// Posts with at least one planted-loyal and one planted-vagrant top-level response.
    pub co_commented_posts: BTreeMap<String, usize>,
}

impl GroundTruth {
    /// Pooled realized rate per community over all transitions.
    pub fn realized_rates(&self) -> BTreeMap<String, f64> {
        self.transitions
            .iter()
            .filter_map(|(c, months)| {
                let (s, w) = months.values().fold((0u32, 0u32), |(s, w), t| (s + t.stayed, w + t.switched));
                (s + w > 0).then(|| (c.clone(), s as f64 / (s + w) as f64))
            })
            .collect()
    }

    pub fn label_set(&self) -> LabelSet {
        let mk = |l: &PlantedLabel, kind| LoyaltyLabel {
            author: l.author.clone(),
            community: l.community.clone(),
            month: l.month,
            kind,
        };
        LabelSet::new(
            self.loyal
                .iter()
                .map(|l| mk(l, LabelKind::Loyal))
                .chain(self.vagrant.iter().map(|l| mk(l, LabelKind::Vagrant)))
                .collect(),
        )
    }
}
