use serde::{Deserialize, Serialize};

use crate::corpus::{MonthKey, MonthRange};
use crate::error::{Error, Result};

/// Language and post-choice behavior of one user cohort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CohortProfile {
    pub tokens_min: u32,
    pub tokens_max: u32,
    pub rate_i: f64,
    pub rate_you: f64,
    pub rate_we: f64,
    pub rate_affect_pos: f64,
    pub rate_affect_neg: f64,
    /// Probability that a top-level comment answers a niche (low-score, esoteric) post.
    pub niche_preference: f64,
}

impl Default for CohortProfile {
    fn default() -> Self {
        CohortProfile {
            tokens_min: 10,
            tokens_max: 30,
            rate_i: 0.04,
            rate_you: 0.03,
            rate_we: 0.02,
            rate_affect_pos: 0.03,
            rate_affect_neg: 0.02,
            niche_preference: 0.5,
        }
    }
}

impl CohortProfile {
    pub fn loyal_default() -> Self {
        CohortProfile {
            tokens_min: 20,
            tokens_max: 40,
            rate_i: 0.03,
            rate_we: 0.04,
            niche_preference: 0.7,
            ..Self::default()
        }
    }

    pub fn vagrant_default() -> Self {
        CohortProfile {
            tokens_min: 8,
            tokens_max: 24,
            rate_i: 0.07,
            rate_we: 0.01,
            niche_preference: 0.3,
            ..Self::default()
        }
    }

    pub fn lexicon_rates(&self) -> [f64; 5] {
        [self.rate_i, self.rate_you, self.rate_we, self.rate_affect_pos, self.rate_affect_neg]
    }

    fn validate(&self, who: &str) -> Result<()> {
        let rates = self.lexicon_rates();
        if rates.iter().chain([&self.niche_preference]).any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::Config(format!("{who} profile rates must lie in [0, 1]")));
        }
        if rates.iter().sum::<f64>() > 1.0 {
            return Err(Error::Config(format!("{who} lexicon rates sum above 1")));
        }
        if self.tokens_min == 0 || self.tokens_max < self.tokens_min {
            return Err(Error::Config(format!("{who} token range must satisfy 1 <= min <= max")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySpec {
    pub name: String,
    /// Probability that a core member keeps preferring the community next month,
    /// given they stay on the platform.
    pub loyalty_rate: f64,
    /// Probability of each potential reply to a top-level comment.
    pub reply_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PostProfile {
    pub posts_per_community_month: usize,
    pub niche_fraction: f64,
    pub niche_score_min: i64,
    pub niche_score_max: i64,
    pub popular_score_min: i64,
    pub popular_score_max: i64,
}

impl Default for PostProfile {
    fn default() -> Self {
        PostProfile {
            posts_per_community_month: 30,
            niche_fraction: 0.5,
            niche_score_min: 1,
            niche_score_max: 20,
            popular_score_min: 50,
            popular_score_max: 500,
        }
    }
}

/// Shape of reply trees below top-level comments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReplyGeometry {
    pub max_children: u32,
    /// Probability of each potential child of a reply.
    pub continue_prob: f64,
    pub max_depth: u32,
}

impl Default for ReplyGeometry {
    fn default() -> Self {
        ReplyGeometry {
            max_children: 2,
            continue_prob: 0.35,
            max_depth: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub communities: Vec<CommunitySpec>,
    pub months: MonthRange,
    /// Users whose first community is this one.
    pub users_per_community: usize,
    /// Share of users who are core members (at least ten top-level comments a month).
    pub loyal_fraction: f64,
    /// Monthly probability that a casual user moves to another community.
    pub vagrant_rate: f64,
    /// Monthly probability that a core member leaves the platform for good.
    pub leave_rate: f64,
    pub comments_per_loyal_user_month: u32,
    /// Extra top-level comments per core month, drawn uniformly from `0..=extra`.
    pub extra_loyal_comments: u32,
    /// Users start in one of the first `arrival_months` months, uniformly.
    pub arrival_months: usize,
    pub loyal_profile: CohortProfile,
    pub vagrant_profile: CohortProfile,
    pub posts: PostProfile,
    pub esoteric_vocab_size: usize,
    pub replies: ReplyGeometry,
    /// Without text every comment body is empty, which is much faster.
    pub render_text: bool,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            communities: vec![
                CommunitySpec {
                    name: "sub0".into(),
                    loyalty_rate: 0.7,
                    reply_rate: 0.3,
                },
                CommunitySpec {
                    name: "sub1".into(),
                    loyalty_rate: 0.3,
                    reply_rate: 0.3,
                },
            ],
            months: MonthRange {
                start: MonthKey { year: 2014, month: 1 },
                end: MonthKey { year: 2014, month: 4 },
            },
            users_per_community: 200,
            loyal_fraction: 0.5,
            vagrant_rate: 0.8,
            leave_rate: 0.05,
            comments_per_loyal_user_month: 10,
            extra_loyal_comments: 4,
            arrival_months: 1,
            loyal_profile: CohortProfile::loyal_default(),
            vagrant_profile: CohortProfile::vagrant_default(),
            posts: PostProfile::default(),
            esoteric_vocab_size: 60,
            replies: ReplyGeometry::default(),
            render_text: true,
            seed: 0,
        }
    }
}

impl SynthConfig {
    /// Communities `sub0, sub1, ...` with the given planted loyalty rates.
    pub fn with_rates(rates: &[f64]) -> Self {
        let reply_rate = SynthConfig::default().communities[0].reply_rate;
        SynthConfig {
            communities: rates
                .iter()
                .enumerate()
                .map(|(i, &r)| CommunitySpec {
                    name: format!("sub{i}"),
                    loyalty_rate: r,
                    reply_rate,
                })
                .collect(),
            ..SynthConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.communities.is_empty() {
            return Err(Error::Config("at least one community is required".into()));
        }
        let mut names: Vec<&str> = self.communities.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) || names.iter().any(|n| n.is_empty()) {
            return Err(Error::Config("community names must be unique and non-empty".into()));
        }
        let unit = [self.loyal_fraction, self.vagrant_rate, self.leave_rate, self.posts.niche_fraction];
        let per_comm = self.communities.iter().flat_map(|c| [c.loyalty_rate, c.reply_rate]);
        if unit.into_iter().chain(per_comm).chain([self.replies.continue_prob]).any(|r| !(0.0..=1.0).contains(&r)) {
            return Err(Error::Config("all rates must lie in [0, 1]".into()));
        }
        if self.comments_per_loyal_user_month < 10 {
            return Err(Error::Config("comments_per_loyal_user_month must be at least 10".into()));
        }
        self.loyal_profile.validate("loyal")?;
        self.vagrant_profile.validate("vagrant")?;
        if self.posts.posts_per_community_month < 2 {
            return Err(Error::Config("posts_per_community_month must be at least 2".into()));
        }
        if self.posts.niche_score_max < self.posts.niche_score_min || self.posts.popular_score_max < self.posts.popular_score_min {
            return Err(Error::Config("post score ranges must satisfy min <= max".into()));
        }
        if self.replies.max_depth > 100 {
            return Err(Error::Config("reply max_depth above 100 does not fit in a month".into()));
        }
        if self.arrival_months == 0 {
            return Err(Error::Config("arrival_months must be at least 1".into()));
        }
        if self.communities.len() < 2 {
            let casual = self.loyal_fraction < 1.0 && self.vagrant_rate > 0.0;
            let switching = self.loyal_fraction > 0.0 && self.communities[0].loyalty_rate < 1.0 && self.leave_rate < 1.0;
            if casual || switching {
                return Err(Error::Infeasible(
                    "vagrants and switching members need a second community to move to".into(),
                ));
            }
        }
        Ok(())
    }
}
