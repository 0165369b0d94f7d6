use std::collections::BTreeMap;
use std::fs;

use log::info;
use serde::Serialize;

use super::config::RunConfig;
use super::context::{load_labels, load_store, reporter};
use super::report::{Reporter, RunOutcome};
use crate::corpus::{build_profiles, MonthKey};
use crate::error::{Error, Result};
use crate::loyalty::{community_descriptives, loyalty_reports, mean_rates, tier_communities, LabelKind, LabelSet};
use crate::rng::{stream_seed, Key};
use crate::scalar::{mean, median};
use crate::statkit::{bootstrap_ci, spearman, Statistic};

#[derive(Serialize)]
struct LabelCountRow<'a> {
    community: &'a str,
    month: MonthKey,
    loyal: usize,
    vagrant: usize,
}

#[derive(Serialize)]
struct CategoryRow {
    category: String,
    n_communities: usize,
    mean_rate: f64,
    median_rate: f64,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
}

#[derive(Serialize)]
struct SpearmanReport {
    n_communities: usize,
    rho: f64,
    p_value: f64,
    p_floored: bool,
}

/// Reads `community,category` rows; a header row is optional.
fn read_categories(path: &std::path::Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            continue;
        }
        if i == 0 && &rec[0] == "community" {
            continue;
        }
        out.insert(rec[0].trim().to_string(), rec[1].trim().to_string());
    }
    Ok(out)
}

fn category_report(cfg: &RunConfig, rep: &mut Reporter, rates: &BTreeMap<String, f64>) -> Result<()> {
    let Some(path) = &cfg.paths.categories else { return Ok(()) };
    let cats = read_categories(path)?;
    if cats.is_empty() {
        info!("category file {} is empty; category report skipped", path.display());
        return Ok(());
    }
    let mut grouped: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (community, cat) in &cats {
        if let Some(&r) = rates.get(community) {
            grouped.entry(cat).or_default().push(r);
        }
    }
    let mut rows = Vec::new();
    for (cat, vals) in grouped {
        let seed = stream_seed(cfg.seed, &[Key::from("category"), Key::from(cat)]);
        let ci = bootstrap_ci(&vals, Statistic::Mean, cfg.tiers.category_ci_level, cfg.bootstrap_resamples, seed).ok();
        rows.push(CategoryRow {
            category: cat.to_string(),
            n_communities: vals.len(),
            mean_rate: mean(&vals).unwrap_or(f64::NAN),
            median_rate: median(&vals).unwrap_or(f64::NAN),
            ci_low: ci.map(|c| c.0),
            ci_high: ci.map(|c| c.1),
        });
    }
    rep.flag("category_ci_level", cfg.tiers.category_ci_level);
    rep.csv("categories.csv", rows)
}

fn label_counts(labels: &LabelSet) -> Vec<LabelCountRow<'_>> {
    let mut rows = Vec::new();
    for c in labels.communities() {
        let loyal = labels.monthly_counts(c, LabelKind::Loyal);
        let vagrant = labels.monthly_counts(c, LabelKind::Vagrant);
        let months: std::collections::BTreeSet<MonthKey> = loyal.keys().chain(vagrant.keys()).copied().collect();
        for m in months {
            rows.push(LabelCountRow {
                community: c,
                month: m,
                loyal: loyal.get(&m).copied().unwrap_or(0),
                vagrant: vagrant.get(&m).copied().unwrap_or(0),
            });
        }
    }
    rows
}

/// Monthly loyalty rates, tiers, descriptives, tenure correlation and
/// optional category summaries.
pub fn cmd_loyalty(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let store = load_store(cfg)?;
    let profiles = build_profiles(&store);
    let labels = load_labels(cfg, &profiles)?;
    let mut rep = reporter(cfg, "loyalty")?;
    rep.flag("mean_rate", "pooled_over_user_months");
    rep.flag("tier_split", "quartiles_of_pooled_rate");
    rep.flag("tier_min_loyal_users", cfg.tiers.min_loyal_users);

    let reports = loyalty_reports(&profiles, &cfg.loyalty.community_level());
    rep.csv("loyalty_monthly.csv", &reports)?;
    let rates = mean_rates(&reports);
    match tier_communities(&reports, cfg.tiers.min_loyal_users) {
        Ok(tiers) => rep.csv("tiers.csv", &tiers)?,
        Err(e) => rep.warn(format!("tiering skipped: {e}")),
    }
    rep.csv("labels_monthly.csv", label_counts(&labels))?;

    let descriptives: Vec<_> = store
        .communities()
        .iter()
        .filter_map(|c| community_descriptives(&store, &labels, c).ok())
        .collect();
    rep.csv("descriptives.csv", &descriptives)?;

    let (xs, ys): (Vec<f64>, Vec<f64>) = descriptives
        .iter()
        .filter_map(|d| Some((*rates.get(&d.community)?, d.loyal_tenure_mean?)))
        .unzip();
    match spearman::<f64>(&xs, &ys) {
        Ok(t) => rep.json(
            "tenure_spearman.json",
            &SpearmanReport {
                n_communities: xs.len(),
                rho: t.statistic,
                p_value: t.p_value,
                p_floored: t.p_floored,
            },
        )?,
        Err(e) => rep.warn(format!("tenure/rate correlation skipped: {e}")),
    }
    category_report(cfg, &mut rep, &rates)?;
    rep.finish()
}
