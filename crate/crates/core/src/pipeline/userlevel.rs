use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::context::{load_labels, load_lexicons, load_store, reporter};
use super::report::RunOutcome;
use crate::corpus::{build_profiles, CorpusStore};
use crate::error::Result;
use crate::loyalty::{LabelKind, LabelSet};
use crate::mlpredict::FeatureExtractor;
use crate::rng::{stream_seed, Key};
use crate::scalar::{mean, median};
use crate::statkit::{binomial_sign_test, mann_whitney_u, wilcoxon_signed_rank};
use crate::textfeat::{build_comment_pairs, linguistic_features, sample_selected_posts, Lexicons, PairSampling, SelectedPost, LINGUISTIC_FEATURES};

#[derive(Serialize)]
struct ExcludedRow {
    community: String,
    loyal_users: usize,
    vagrant_users: usize,
}

#[derive(Serialize)]
struct PostRow {
    community: String,
    metric: &'static str,
    n_loyal: usize,
    n_vagrant: usize,
    loyal: Option<f64>,
    vagrant: Option<f64>,
    p_value: Option<f64>,
}

#[derive(Serialize)]
struct PairRow {
    community: String,
    feature: &'static str,
    n_pairs: usize,
    mean_difference: Option<f64>,
    statistic: Option<f64>,
    p_value: Option<f64>,
    significant: bool,
}

#[derive(Serialize)]
struct DirectionRow {
    analysis: &'static str,
    feature: &'static str,
    n_communities: usize,
    loyal_higher: usize,
    loyal_lower: usize,
    ties: usize,
    share_loyal_higher: Option<f64>,
    p_value: Option<f64>,
    share_significant_higher: Option<f64>,
    share_significant_lower: Option<f64>,
}

/// Post metrics and the per-cohort aggregate used to compare them.
const POST_METRICS: [(&str, &str); 3] = [("score", "median"), ("num_comments", "median"), ("esotericity", "mean")];

fn post_values(ext: &FeatureExtractor<'_, f64>, posts: &[SelectedPost], metric: &str) -> Vec<f64> {
    posts
        .iter()
        .filter_map(|p| match metric {
            "score" => Some(p.score as f64),
            "num_comments" => Some(p.num_comments as f64),
            _ => ext.post_vector(&p.post_id).filter(|v| v[8] == 0.0).map(|v| v[7]),
        })
        .collect()
}

fn screen(labels: &LabelSet, store: &CorpusStore, min: usize) -> (Vec<String>, Vec<ExcludedRow>) {
    let mut keep = Vec::new();
    let mut excluded = Vec::new();
    for c in store.communities() {
        let l = labels.users(&c, LabelKind::Loyal).len();
        let v = labels.users(&c, LabelKind::Vagrant).len();
        if l >= min && v >= min {
            keep.push(c);
        } else {
            excluded.push(ExcludedRow {
                community: c,
                loyal_users: l,
                vagrant_users: v,
            });
        }
    }
    (keep, excluded)
}

fn pair_rows(cfg: &RunConfig, store: &CorpusStore, labels: &LabelSet, lex: &Lexicons, community: &str) -> Vec<PairRow> {
    let pairs = build_comment_pairs(store, labels, community, cfg.userlevel.pairs, cfg.seed);
    let feats = |id: &str| store.comment(id).and_then(|c| linguistic_features::<f64>(&c.body, lex).linguistic());
    let diffs: Vec<[f64; 6]> = pairs
        .iter()
        .filter_map(|p| {
            let (a, b) = (feats(&p.loyal_comment_id)?, feats(&p.vagrant_comment_id)?);
            Some(std::array::from_fn(|i| a[i] - b[i]))
        })
        .collect();
    LINGUISTIC_FEATURES
        .iter()
        .enumerate()
        .map(|(j, &feature)| {
            let d: Vec<f64> = diffs.iter().map(|row| row[j]).collect();
            let test = wilcoxon_signed_rank(&d).ok();
            let p = test.as_ref().map(|t| t.p_value);
            PairRow {
                community: community.to_string(),
                feature,
                n_pairs: d.len(),
                mean_difference: mean(&d),
                statistic: test.map(|t| t.statistic),
                p_value: p,
                significant: p.is_some_and(|p| p < cfg.userlevel.significance),
            }
        })
        .collect()
}

/// Counts communities per direction and tests the split against a fair coin.
fn direction(
    analysis: &'static str,
    feature: &'static str,
    effects: impl IntoIterator<Item = (Option<f64>, bool)>,
) -> DirectionRow {
    let (mut hi, mut lo, mut ties, mut sig_hi, mut sig_lo, mut n) = (0, 0, 0, 0, 0, 0);
    for (effect, sig) in effects {
        let Some(e) = effect else { continue };
        n += 1;
        if e > 0.0 {
            hi += 1;
            sig_hi += usize::from(sig);
        } else if e < 0.0 {
            lo += 1;
            sig_lo += usize::from(sig);
        } else {
            ties += 1;
        }
    }
    let decided = hi + lo;
    let test = binomial_sign_test::<f64>(hi as u64, decided as u64, 0.5).ok();
    let share = |k: usize| (n > 0).then(|| k as f64 / n as f64);
    DirectionRow {
        analysis,
        feature,
        n_communities: n,
        loyal_higher: hi,
        loyal_lower: lo,
        ties,
        share_loyal_higher: (decided > 0).then(|| hi as f64 / decided as f64),
        p_value: test.map(|t| t.p_value),
        share_significant_higher: share(sig_hi),
        share_significant_lower: share(sig_lo),
    }
}

/// Loyal- versus vagrant-selected posts and paired comment language, per
/// community and across communities.
pub fn cmd_userlevel(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let store = load_store(cfg)?;
    let lex = load_lexicons(cfg)?;
    let profiles = build_profiles(&store);
    let labels = load_labels(cfg, &profiles)?;
    let mut rep = reporter(cfg, "userlevel")?;
    rep.flag("min_cohort_users", cfg.userlevel.min_cohort_users);
    rep.flag("selected_posts", cfg.userlevel.selected_posts);
    rep.flag(
        "pair_sampling",
        match cfg.userlevel.pairs {
            PairSampling::PerPost(k) => format!("per_post_{k}"),
            PairSampling::CrossProduct => "cross_product".to_string(),
        },
    );
    rep.flag("noun_mode", format!("{:?}", lex.noun_mode()).to_lowercase());
    rep.flag("idf_scope", "community_month_posts");

    let (keep, excluded) = screen(&labels, &store, cfg.userlevel.min_cohort_users);
    rep.csv("excluded.csv", &excluded)?;
    if keep.is_empty() {
        rep.warn("no community passes the loyal/vagrant cohort screen");
    }
    let ext = FeatureExtractor::<f64>::new(&store, &lex);

    let per_community: Vec<(Vec<PostRow>, Vec<PairRow>)> = keep
        .par_iter()
        .map(|c| {
            let seed = stream_seed(cfg.seed, &[Key::from("selected_posts")]);
            let sel = sample_selected_posts(&store, &labels, c, cfg.userlevel.selected_posts, seed);
            let posts = POST_METRICS
                .iter()
                .map(|&(metric, agg)| {
                    let l = post_values(&ext, &sel.loyal_selected, metric);
                    let v = post_values(&ext, &sel.vagrant_selected, metric);
                    let summary = |xs: &[f64]| if agg == "mean" { mean(xs) } else { median(xs) };
                    PostRow {
                        community: c.clone(),
                        metric,
                        n_loyal: l.len(),
                        n_vagrant: v.len(),
                        loyal: summary(&l),
                        vagrant: summary(&v),
                        p_value: mann_whitney_u(&l, &v).ok().map(|t| t.p_value),
                    }
                })
                .collect();
            (posts, pair_rows(cfg, &store, &labels, &lex, c))
        })
        .collect();
    let (posts, pairs): (Vec<Vec<PostRow>>, Vec<Vec<PairRow>>) = per_community.into_iter().unzip();
    let posts: Vec<PostRow> = posts.into_iter().flatten().collect();
    let pairs: Vec<PairRow> = pairs.into_iter().flatten().collect();

    let mut directions = Vec::new();
    for &(metric, _) in &POST_METRICS {
        directions.push(direction(
            "selected_posts",
            metric,
            posts.iter().filter(|r| r.metric == metric).map(|r| {
                let effect = r.loyal.zip(r.vagrant).map(|(l, v)| l - v);
                (effect, r.p_value.is_some_and(|p| p < cfg.userlevel.significance))
            }),
        ));
    }
    let mut by_feature: BTreeMap<&str, Vec<&PairRow>> = BTreeMap::new();
    for r in &pairs {
        by_feature.entry(r.feature).or_default().push(r);
    }
    for &feature in &LINGUISTIC_FEATURES {
        let rows = by_feature.remove(feature).unwrap_or_default();
        directions.push(direction(
            "comment_pairs",
            feature,
            rows.iter().map(|r| (r.mean_difference, r.significant)),
        ));
    }
    rep.flag("significance", cfg.userlevel.significance);
    rep.csv("userlevel_posts.csv", &posts)?;
    rep.csv("userlevel_pairs.csv", &pairs)?;
    rep.csv("userlevel_directions.csv", &directions)?;
    rep.finish()
}
