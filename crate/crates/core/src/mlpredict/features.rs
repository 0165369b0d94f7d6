use std::collections::{BTreeMap, HashMap};

use log::warn;
use serde::{Deserialize, Serialize};

use super::dataset::{sample_up_to, Class, Dataset, Example};
use crate::corpus::{month_of, Comment, CorpusStore, MonthKey, MonthRange, Post};
use crate::error::{Error, Result};
use crate::loyalty::{LabelKind, LabelSet};
use crate::rng::{task_rng, Key};
use crate::scalar::Real;
use crate::textfeat::{linguistic_features, IdfTable, Lexicons};

/// Columns of the per-comment feature vector.
pub const COMMENT_FEATURES: [&str; 16] = [
    "comment_verbosity",
    "comment_rate_i",
    "comment_rate_you",
    "comment_rate_we",
    "comment_rate_affect_pos",
    "comment_rate_affect_neg",
    "post_score",
    "post_verbosity",
    "post_rate_i",
    "post_rate_you",
    "post_rate_we",
    "post_rate_affect_pos",
    "post_rate_affect_neg",
    "post_esotericity",
    "post_esotericity_missing",
    "post_missing",
];

/// Column subsets used for the ablation comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureGroup {
    All,
    PostScore,
    /// Lexical features of the comment and of the replied-to post.
    Linguistic,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 3] = [FeatureGroup::All, FeatureGroup::PostScore, FeatureGroup::Linguistic];

    pub fn columns(self) -> Vec<usize> {
        match self {
            FeatureGroup::All => (0..COMMENT_FEATURES.len()).collect(),
            FeatureGroup::PostScore => vec![6],
            FeatureGroup::Linguistic => (0..6).chain(7..13).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureGroup::All => "all",
            FeatureGroup::PostScore => "post_score",
            FeatureGroup::Linguistic => "linguistic",
        }
    }
}

fn lexical<T: Real>(text: &str, lex: &Lexicons) -> [T; 6] {
    linguistic_features::<T>(text, lex).linguistic().unwrap_or([T::zero(); 6])
}

/// Per-comment feature vectors over one store. IDF tables are built per
/// (community, month) of posts; every post's own features are precomputed.
pub struct FeatureExtractor<'a, T> {
    store: &'a CorpusStore,
    lex: &'a Lexicons,
    post_features: HashMap<&'a str, [T; 9]>,
}

impl<'a, T: Real> FeatureExtractor<'a, T> {
    pub fn new(store: &'a CorpusStore, lex: &'a Lexicons) -> Self {
        let mut buckets: BTreeMap<(&str, MonthKey), Vec<&Post>> = BTreeMap::new();
        for p in store.posts() {
            if let Ok(m) = month_of(p.created_at) {
                buckets.entry((p.community.as_str(), m)).or_default().push(p);
            }
        }
        let mut post_features = HashMap::new();
        for posts in buckets.values() {
            let idf = IdfTable::<T>::from_posts(posts.iter().copied(), lex);
            for p in posts {
                let text = p.text();
                let l = lexical::<T>(&text, lex);
                let eso = idf.esotericity(&text);
                post_features.insert(
                    p.id.as_str(),
                    [
                        T::lit(p.score as f64),
                        l[0],
                        l[1],
                        l[2],
                        l[3],
                        l[4],
                        l[5],
                        eso.unwrap_or_else(T::zero),
                        if eso.is_some() { T::zero() } else { T::one() },
                    ],
                );
            }
        }
        FeatureExtractor { store, lex, post_features }
    }

    pub fn store(&self) -> &'a CorpusStore {
        self.store
    }

    /// The replied-to post's features; `None` if the post is not in the store.
    pub fn post_vector(&self, post_id: &str) -> Option<&[T; 9]> {
        self.post_features.get(post_id)
    }

    pub fn comment_vector(&self, c: &Comment) -> Vec<T> {
        let mut v = Vec::with_capacity(COMMENT_FEATURES.len());
        v.extend(lexical::<T>(&c.body, self.lex));
        match self.post_vector(&c.post_id) {
            Some(p) => {
                v.extend(p.iter().copied());
                v.push(T::zero());
            }
            None => {
                v.extend([T::zero(); 8]);
                v.push(T::one());
                v.push(T::one());
            }
        }
        v
    }

    /// Column means of the comment vectors.
    pub fn mean_vector(&self, comments: &[&Comment]) -> Vec<T> {
        let mut acc = vec![T::zero(); COMMENT_FEATURES.len()];
        for c in comments {
            for (a, x) in acc.iter_mut().zip(self.comment_vector(c)) {
                *a = *a + x;
            }
        }
        let n = T::count(comments.len().max(1));
        acc.into_iter().map(|a| a / n).collect()
    }
}

/// A community's comments grouped by author, each list in time order.
pub fn comments_by_author<'s>(store: &'s CorpusStore, community: &str) -> BTreeMap<&'s str, Vec<&'s Comment>> {
    let mut by: BTreeMap<&str, Vec<&Comment>> = BTreeMap::new();
    for m in store.months_of(community) {
        for c in store.comments_in(community, m) {
            by.entry(c.author.as_str()).or_default().push(c);
        }
    }
    by
}

/// Averaged features of the author's first `k` comments in the community.
pub fn first_k_features<T: Real>(extractor: &FeatureExtractor<'_, T>, author: &str, community: &str, k: usize) -> Option<Vec<T>> {
    let by = comments_by_author(extractor.store(), community);
    let mine = by.get(author)?;
    (mine.len() >= k).then(|| extractor.mean_vector(&mine[..k]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FirstKOptions {
    pub k: usize,
    pub train_window: MonthRange,
    pub test_window: MonthRange,
    /// A positive becomes loyal at most this many months after arrival.
    pub horizon_months: i64,
}

impl Default for FirstKOptions {
    fn default() -> Self {
        let m = |mo| MonthKey { year: 2014, month: mo };
        FirstKOptions {
            k: 3,
            train_window: MonthRange { start: m(1), end: m(6) },
            test_window: MonthRange { start: m(7), end: m(10) },
            horizon_months: 2,
        }
    }
}

/// A user considered for the first-k task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstKUnit {
    pub author: String,
    pub arrival: MonthKey,
    pub label: Class,
    /// Timestamp of the k-th comment, the last one the features may see.
    pub cutoff: i64,
}

/// Users who arrive in either window with at least `k` comments, labeled
/// positive when loyal within the horizon and negative when never loyal.
/// Users loyal only later are left out.
pub fn first_k_units(store: &CorpusStore, labels: &LabelSet, community: &str, opts: &FirstKOptions) -> Vec<FirstKUnit> {
    comments_by_author(store, community)
        .into_iter()
        .filter(|(_, cs)| cs.len() >= opts.k.max(1))
        .filter_map(|(author, cs)| {
            let arrival = month_of(cs[0].created_at).ok()?;
            if !opts.train_window.contains(arrival) && !opts.test_window.contains(arrival) {
                return None;
            }
            let loyal = labels.months_for(author, community, LabelKind::Loyal);
            let label = if loyal.is_empty() {
                Class::Negative
            } else if loyal.iter().any(|&m| m >= arrival && arrival.months_until(m) <= opts.horizon_months) {
                Class::Positive
            } else {
                return None;
            };
            Some(FirstKUnit {
                author: author.to_string(),
                arrival,
                label,
                cutoff: cs[opts.k.max(1) - 1].created_at,
            })
        })
        .collect()
}

/// Train and test sets for one community, each balanced by downsampling.
pub fn build_first_k_dataset<T: Real>(
    extractor: &FeatureExtractor<'_, T>,
    labels: &LabelSet,
    community: &str,
    opts: &FirstKOptions,
    seed: u64,
) -> Result<(Dataset<T>, Dataset<T>)> {
    let by = comments_by_author(extractor.store(), community);
    let units = first_k_units(extractor.store(), labels, community, opts);
    let mut train = Dataset::new(COMMENT_FEATURES);
    let mut test = Dataset::new(COMMENT_FEATURES);
    for u in units {
        let ex = Example {
            features: extractor.mean_vector(&by[u.author.as_str()][..opts.k.max(1)]),
            label: u.label,
            group: community.to_string(),
            unit: u.author,
        };
        if opts.train_window.contains(u.arrival) {
            train.push(ex)?;
        } else {
            test.push(ex)?;
        }
    }
    for (name, ds) in [("train", &train), ("test", &test)] {
        let (neg, pos) = ds.class_counts();
        if neg == 0 || pos == 0 {
            return Err(Error::InsufficientData(format!(
                "{community}: first-k {name} split has {pos} positive and {neg} negative users"
            )));
        }
    }
    let train = train.balanced(seed, &format!("first_k_train/{community}"));
    let test = test.balanced(seed, &format!("first_k_test/{community}"));
    Ok((train, test))
}

/// Equal numbers of loyal- and vagrant-authored top-level comments per
/// community (positive = loyal), at most `per_community` each.
pub fn build_loco_dataset<T: Real>(
    extractor: &FeatureExtractor<'_, T>,
    labels: &LabelSet,
    communities: &[String],
    per_community: usize,
    seed: u64,
) -> Result<Dataset<T>> {
    let store = extractor.store();
    let mut ds = Dataset::new(COMMENT_FEATURES);
    for community in communities {
        let mut loyal = Vec::new();
        let mut vagrant = Vec::new();
        for m in store.months_of(community) {
            for c in store.comments_in(community, m).filter(|c| c.is_top_level()) {
                if labels.has(LabelKind::Loyal, &c.author, community, m) {
                    loyal.push(c);
                } else if labels.has(LabelKind::Vagrant, &c.author, community, m) {
                    vagrant.push(c);
                }
            }
        }
        let n = per_community.min(loyal.len()).min(vagrant.len());
        if n == 0 {
            warn!("{community}: no loyal/vagrant comments to sample, skipped");
            continue;
        }
        if n < per_community {
            warn!("{community}: {n} comments per cohort, fewer than {per_community}");
        }
        let mut rng = task_rng(seed, &[Key::from("loco"), Key::from(community)]);
        for (cohort, label) in [(&loyal, Class::Positive), (&vagrant, Class::Negative)] {
            for c in sample_up_to(cohort, n, &mut rng, community) {
                ds.push(Example {
                    features: extractor.comment_vector(c),
                    label,
                    group: community.clone(),
                    unit: c.id.clone(),
                })?;
            }
        }
    }
    Ok(ds)
}
