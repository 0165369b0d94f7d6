use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use rand::seq::{index, IndexedRandom};
use serde::{Deserialize, Serialize};

use crate::corpus::{month_of, CorpusStore, MonthKey};
use crate::loyalty::{LabelKind, LabelSet};
use crate::rng::{task_rng, Key};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedPost {
    pub author: String,
    pub post_id: String,
    pub month: MonthKey,
    pub score: i64,
    pub num_comments: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedPosts {
    pub loyal_selected: Vec<SelectedPost>,
    pub vagrant_selected: Vec<SelectedPost>,
}

/// Samples up to `n` labeled users per cohort and one post each user
/// commented on in the community during one of their labeled months.
pub fn sample_selected_posts(store: &CorpusStore, labels: &LabelSet, community: &str, n: usize, seed: u64) -> SelectedPosts {
    let pick = |kind: LabelKind, tag: &str| -> Vec<SelectedPost> {
        let mut rng = task_rng(seed, &[Key::from("selected_posts"), Key::from(community), Key::from(tag)]);
        let users: Vec<&str> = labels.users(community, kind).into_iter().collect();
        if users.len() < n {
            warn!("{community}: only {} {tag} users for a sample of {n}", users.len());
        }
        let take = n.min(users.len());
        let mut chosen: Vec<&str> = index::sample(&mut rng, users.len(), take).into_iter().map(|i| users[i]).collect();
        chosen.sort_unstable();
        chosen
            .into_iter()
            .filter_map(|author| {
                let mut candidates: BTreeMap<&str, MonthKey> = BTreeMap::new();
                for m in labels.months_for(author, community, kind) {
                    for c in store.comments_by(author, m).filter(|c| c.community == community) {
                        if store.post(&c.post_id).is_some() {
                            candidates.entry(c.post_id.as_str()).or_insert(m);
                        }
                    }
                }
                let options: Vec<(&str, MonthKey)> = candidates.into_iter().collect();
                let &(post_id, month) = options.choose(&mut rng)?;
                let post = store.post(post_id)?;
                Some(SelectedPost {
                    author: author.to_string(),
                    post_id: post_id.to_string(),
                    month,
                    score: post.score,
                    num_comments: post.num_comments,
                })
            })
            .collect()
    };
    SelectedPosts {
        loyal_selected: pick(LabelKind::Loyal, "loyal"),
        vagrant_selected: pick(LabelKind::Vagrant, "vagrant"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CommentPair {
    pub post_id: String,
    pub loyal_comment_id: String,
    pub vagrant_comment_id: String,
}

/// How many loyal/vagrant pairs to draw from one post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSampling {
    PerPost(usize),
    CrossProduct,
}

impl Default for PairSampling {
    fn default() -> Self {
        PairSampling::PerPost(1)
    }
}

/// Top-level comment ids per post, split by the author's label for the
/// comment's month.
pub fn cohort_comments_by_post(store: &CorpusStore, labels: &LabelSet, community: &str) -> BTreeMap<String, (Vec<String>, Vec<String>)> {
    let mut by_post: BTreeMap<String, (Vec<String>, Vec<String>)> = BTreeMap::new();
    for m in store.months_of(community) {
        for c in store.comments_in(community, m).filter(|c| c.is_top_level()) {
            let month = month_of(c.created_at).expect("stored timestamps are valid");
            let entry = || (Vec::new(), Vec::new());
            if labels.has(LabelKind::Loyal, &c.author, community, month) {
                by_post.entry(c.post_id.clone()).or_insert_with(entry).0.push(c.id.clone());
            } else if labels.has(LabelKind::Vagrant, &c.author, community, month) {
                by_post.entry(c.post_id.clone()).or_insert_with(entry).1.push(c.id.clone());
            }
        }
    }
    by_post
}

/// Pairs of loyal- and vagrant-authored top-level responses to the same post.
pub fn build_comment_pairs(store: &CorpusStore, labels: &LabelSet, community: &str, sampling: PairSampling, seed: u64) -> Vec<CommentPair> {
    let mut out = Vec::new();
    for (post_id, (loyal, vagrant)) in cohort_comments_by_post(store, labels, community) {
        if loyal.is_empty() || vagrant.is_empty() {
            continue;
        }
        let total = loyal.len() * vagrant.len();
        let cells: BTreeSet<usize> = match sampling {
            PairSampling::CrossProduct => (0..total).collect(),
            PairSampling::PerPost(k) => {
                let mut rng = task_rng(seed, &[Key::from("pairs"), Key::from(community), Key::from(&post_id)]);
                index::sample(&mut rng, total, k.min(total)).into_iter().collect()
            }
        };
        for cell in cells {
            out.push(CommentPair {
                post_id: post_id.clone(),
                loyal_comment_id: loyal[cell / vagrant.len()].clone(),
                vagrant_comment_id: vagrant[cell % vagrant.len()].clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testkit::{comment, on_post, post, store_of};
    use crate::loyalty::LoyaltyLabel;

    const JAN: i64 = 1_389_000_000;

    fn label(author: &str, kind: LabelKind) -> LoyaltyLabel {
        LoyaltyLabel {
            author: author.into(),
            community: "A".into(),
            month: MonthKey::new(2014, 1).unwrap(),
            kind,
        }
    }

    fn fixture() -> (CorpusStore, LabelSet) {
        let comments = vec![
            on_post(comment("c1", "A", "l1", JAN), "p1"),
            on_post(comment("c2", "A", "v1", JAN + 1), "p1"),
            on_post(comment("c3", "A", "l1", JAN + 2), "p2"),
            on_post(comment("c4", "A", "l2", JAN + 3), "p2"),
            on_post(comment("c5", "A", "v1", JAN + 4), "p2"),
            on_post(comment("c6", "A", "v2", JAN + 5), "p2"),
            on_post(comment("c7", "A", "v3", JAN + 6), "p2"),
            on_post(comment("c8", "A", "l2", JAN + 7), "p3"),
        ];
        let posts = vec![post("p1", "A", JAN, "t", 5), post("p2", "A", JAN, "t", 9), post("p3", "A", JAN, "t", 1)];
        let labels = LabelSet::new(vec![
            label("l1", LabelKind::Loyal),
            label("l2", LabelKind::Loyal),
            label("v1", LabelKind::Vagrant),
            label("v2", LabelKind::Vagrant),
            label("v3", LabelKind::Vagrant),
        ]);
        (store_of(comments, posts), labels)
    }

    #[test]
    fn forced_and_sampled_pairs() {
        let (store, labels) = fixture();
        let pairs = build_comment_pairs(&store, &labels, "A", PairSampling::PerPost(1), 3);
        assert_eq!(pairs.len(), 2);
        assert_eq!(
            pairs[0],
            CommentPair {
                post_id: "p1".into(),
                loyal_comment_id: "c1".into(),
                vagrant_comment_id: "c2".into()
            }
        );
        assert_eq!(pairs[1].post_id, "p2");
        assert_eq!(pairs, build_comment_pairs(&store, &labels, "A", PairSampling::PerPost(1), 3));
        let full = build_comment_pairs(&store, &labels, "A", PairSampling::CrossProduct, 3);
        assert_eq!(full.len(), 1 + 2 * 3);
    }

    #[test]
    fn selected_posts_cover_small_cohorts() {
        let (store, labels) = fixture();
        let s = sample_selected_posts(&store, &labels, "A", 100, 8);
        assert_eq!(s.loyal_selected.len(), 2);
        assert_eq!(s.vagrant_selected.len(), 3);
        let v2 = s.vagrant_selected.iter().find(|p| p.author == "v2").unwrap();
        assert_eq!((v2.post_id.as_str(), v2.score), ("p2", 9));
        assert_eq!(s, sample_selected_posts(&store, &labels, "A", 100, 8));
        let one = sample_selected_posts(&store, &labels, "A", 1, 8);
        assert_eq!((one.loyal_selected.len(), one.vagrant_selected.len()), (1, 1));
    }
}
