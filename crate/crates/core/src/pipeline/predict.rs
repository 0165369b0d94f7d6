use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::context::{load_labels, load_lexicons, load_store, reporter};
use super::report::{Reporter, RunOutcome};
use crate::corpus::build_profiles;
use crate::error::{Error, Result};
use crate::loyalty::LabelSet;
use crate::mlpredict::{
    build_first_k_dataset, build_loco_dataset, evaluate, loco_evaluate, train_forest, Dataset, Evaluation, FeatureExtractor,
    FeatureGroup, ForestParams,
};
use crate::rng::{stream_seed, Key};
use crate::scalar::mean;
use crate::statkit::{bootstrap_ci, Statistic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictTask {
    FirstK,
    Loco,
}

impl PredictTask {
    pub fn name(self) -> &'static str {
        match self {
            PredictTask::FirstK => "first_k",
            PredictTask::Loco => "loco",
        }
    }
}

impl std::str::FromStr for PredictTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first_k" => Ok(PredictTask::FirstK),
            "loco" => Ok(PredictTask::Loco),
            other => Err(Error::Config(format!("unknown prediction task `{other}`"))),
        }
    }
}

/// Column label of the permutation control in accuracy tables.
const SHUFFLED: &str = "shuffled_control";

#[derive(Serialize)]
struct AccuracyRow {
    community: String,
    features: &'static str,
    n_test: usize,
    accuracy: f64,
    p_value: f64,
    significant: bool,
}

#[derive(Serialize)]
struct SkippedRow {
    community: String,
    reason: String,
}

#[derive(Serialize)]
struct GroupSummary {
    features: &'static str,
    n_communities: usize,
    mean_accuracy: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    share_significant: Option<f64>,
}

#[derive(Serialize)]
struct HistogramRow {
    features: &'static str,
    bin_low: f64,
    bin_high: f64,
    count: usize,
}

const BIN_WIDTH: f64 = 0.05;

fn forest_params(cfg: &RunConfig, parts: &[Key<'_>]) -> ForestParams {
    ForestParams {
        seed: stream_seed(cfg.seed, parts),
        ..cfg.forest.clone()
    }
}

fn feature_sets(shuffle: bool) -> Vec<(&'static str, Option<FeatureGroup>)> {
    let mut sets: Vec<_> = FeatureGroup::ALL.iter().map(|g| (g.name(), Some(*g))).collect();
    if shuffle {
        sets.push((SHUFFLED, None));
    }
    sets
}

fn row(community: &str, features: &'static str, e: &Evaluation, alpha: f64) -> AccuracyRow {
    AccuracyRow {
        community: community.to_string(),
        features,
        n_test: e.n,
        accuracy: e.accuracy,
        p_value: e.p_value,
        significant: e.p_value < alpha && e.accuracy > 0.5,
    }
}

fn first_k_rows(
    cfg: &RunConfig,
    ext: &FeatureExtractor<'_, f64>,
    labels: &LabelSet,
    community: &str,
) -> std::result::Result<Vec<AccuracyRow>, String> {
    let opts = &cfg.predict.first_k;
    let (train, test) = build_first_k_dataset(ext, labels, community, opts, cfg.seed).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (name, group) in feature_sets(cfg.predict.shuffle_control) {
        let params = forest_params(cfg, &[Key::from("first_k"), Key::from(community), Key::from(name)]);
        let (tr, te) = match group {
            Some(g) => (train.select_features(&g.columns()), test.select_features(&g.columns())),
            None => (train.with_shuffled_labels(params.seed), test.clone()),
        };
        let model = train_forest(&tr, &params).map_err(|e| e.to_string())?;
        let e = evaluate(&model, &te).map_err(|e| e.to_string())?;
        rows.push(row(community, name, &e, cfg.predict.significance));
    }
    Ok(rows)
}

fn loco_rows(cfg: &RunConfig, data: &Dataset<f64>) -> Result<Vec<AccuracyRow>> {
    let mut rows = Vec::new();
    for (name, group) in feature_sets(cfg.predict.shuffle_control) {
        let params = forest_params(cfg, &[Key::from("loco"), Key::from(name)]);
        let ds = match group {
            Some(g) => data.select_features(&g.columns()),
            None => data.with_shuffled_labels(params.seed),
        };
        let res = loco_evaluate(&ds, &params)?;
        rows.extend(res.folds.iter().map(|(c, e)| row(c, name, e, cfg.predict.significance)));
    }
    Ok(rows)
}

fn summaries(cfg: &RunConfig, rep: &mut Reporter, rows: &[AccuracyRow]) -> Result<()> {
    let mut by: BTreeMap<&str, Vec<&AccuracyRow>> = BTreeMap::new();
    for r in rows {
        by.entry(r.features).or_default().push(r);
    }
    let mut summary = Vec::new();
    let mut hist = Vec::new();
    for (name, _) in feature_sets(cfg.predict.shuffle_control) {
        let rs = by.remove(name).unwrap_or_default();
        let acc: Vec<f64> = rs.iter().map(|r| r.accuracy).collect();
        let seed = stream_seed(cfg.seed, &[Key::from("accuracy_ci"), Key::from(name)]);
        let ci = bootstrap_ci(&acc, Statistic::Mean, cfg.predict.ci_level, cfg.bootstrap_resamples, seed).ok();
        summary.push(GroupSummary {
            features: name,
            n_communities: acc.len(),
            mean_accuracy: mean(&acc),
            ci_low: ci.map(|c| c.0),
            ci_high: ci.map(|c| c.1),
            share_significant: (!rs.is_empty())
                .then(|| rs.iter().filter(|r| r.significant).count() as f64 / rs.len() as f64),
        });
        let n_bins = (1.0 / BIN_WIDTH).round() as usize;
        let mut counts = vec![0usize; n_bins];
        for a in &acc {
            counts[((a / BIN_WIDTH) as usize).min(n_bins - 1)] += 1;
        }
        hist.extend(counts.into_iter().enumerate().map(|(i, count)| HistogramRow {
            features: name,
            bin_low: i as f64 * BIN_WIDTH,
            bin_high: (i + 1) as f64 * BIN_WIDTH,
            count,
        }));
    }
    rep.json("summary.json", &summary)?;
    rep.csv("accuracy_histogram.csv", &hist)
}

/// Random-forest prediction of loyalty, either from a newcomer's first `k`
/// comments or across communities with one community held out.
pub fn cmd_predict(cfg: &RunConfig, task: PredictTask) -> Result<RunOutcome> {
    cfg.validate()?;
    cfg.forest.validate()?;
    let store = load_store(cfg)?;
    let lex = load_lexicons(cfg)?;
    let profiles = build_profiles(&store);
    let labels = load_labels(cfg, &profiles)?;
    let mut rep = reporter(cfg, &format!("predict_{}", task.name()))?;
    rep.flag("n_trees", cfg.forest.n_trees);
    rep.flag("min_samples_split", cfg.forest.min_samples_split);
    rep.flag("max_features", format!("{:?}", cfg.forest.max_features).to_lowercase());
    rep.flag("accuracy_test", "two_sided_binomial_vs_half");
    rep.flag("significance", cfg.predict.significance);
    let ext = FeatureExtractor::<f64>::new(&store, &lex);

    let rows = match task {
        PredictTask::FirstK => {
            let fk = &cfg.predict.first_k;
            rep.flag("k", fk.k);
            rep.flag("horizon_months", fk.horizon_months);
            rep.flag("train_window", format!("{}..{}", fk.train_window.start, fk.train_window.end));
            rep.flag("test_window", format!("{}..{}", fk.test_window.start, fk.test_window.end));
            rep.flag("negatives", "never_loyal_right_censored");
            let results: Vec<(String, std::result::Result<Vec<AccuracyRow>, String>)> = store
                .communities()
                .into_par_iter()
                .map(|c| {
                    let r = first_k_rows(cfg, &ext, &labels, &c);
                    (c, r)
                })
                .collect();
            let mut rows = Vec::new();
            let mut skipped = Vec::new();
            for (community, r) in results {
                match r {
                    Ok(rs) => rows.extend(rs),
                    Err(reason) => skipped.push(SkippedRow { community, reason }),
                }
            }
            rep.csv("skipped.csv", &skipped)?;
            rows
        }
        PredictTask::Loco => {
            rep.flag("loco_per_community", cfg.predict.loco_per_community);
            rep.flag("loco_unit", "top_level_comment_positive_loyal");
            let communities = store.communities();
            let data = build_loco_dataset(&ext, &labels, &communities, cfg.predict.loco_per_community, cfg.seed)?;
            let present = data.groups();
            let skipped: Vec<SkippedRow> = communities
                .iter()
                .filter(|c| !present.contains(c))
                .map(|c| SkippedRow {
                    community: c.clone(),
                    reason: "no loyal or no vagrant top-level comments".into(),
                })
                .collect();
            rep.csv("skipped.csv", &skipped)?;
            match loco_rows(cfg, &data) {
                Ok(rows) => rows,
                Err(e) => {
                    rep.warn(format!("leave-one-community-out not run: {e}"));
                    Vec::new()
                }
            }
        }
    };
    if rows.is_empty() {
        rep.warn("no community produced a prediction result");
    }
    rep.csv("accuracy.csv", &rows)?;
    summaries(cfg, &mut rep, &rows)?;
    rep.finish()
}
