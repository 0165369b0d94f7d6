use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::context::{load_store, reporter};
use super::report::{file_safe, Reporter, RunOutcome};
use crate::corpus::{build_profiles, CorpusStore, MonthKey};
use crate::error::Result;
use crate::loyalty::{community_descriptives, loyalty_reports, tier_communities, CommunityTier, Tier};
use crate::netgraph::{
    activity_matched_pairs, compare_to_null, graph_stats, null_samples, summarize, write_edge_list,
    write_node_attributes, GraphBuilder, InteractionGraph, NullComparison,
};
use crate::rng::{stream_seed, Key};
use crate::scalar::median;
use crate::statkit::{
    bootstrap_ci, holm_bonferroni, mann_whitney_u, panel_regression, wilcoxon_signed_rank, PanelRow, RegressionResult,
    Statistic,
};

#[derive(Serialize)]
struct MonthlyRow {
    community: String,
    month: MonthKey,
    n_nodes: usize,
    n_edges: usize,
    density: Option<f64>,
    clustering: Option<f64>,
    assortativity: Option<f64>,
    gini: Option<f64>,
    null_clustering: Option<f64>,
    null_assortativity: Option<f64>,
    clustering_rel: Option<f64>,
    assortativity_rel: Option<f64>,
}

#[derive(Serialize, Clone)]
struct CommunityRow {
    community: String,
    tier: Option<Tier>,
    months: usize,
    density: Option<f64>,
    clustering: Option<f64>,
    assortativity: Option<f64>,
    gini: Option<f64>,
    clustering_rel: Option<f64>,
    assortativity_rel: Option<f64>,
}

const STATS: [&str; 6] = ["density", "clustering", "assortativity", "gini", "clustering_rel", "assortativity_rel"];

impl CommunityRow {
    fn stat(&self, name: &str) -> Option<f64> {
        match name {
            "density" => self.density,
            "clustering" => self.clustering,
            "assortativity" => self.assortativity,
            "gini" => self.gini,
            "clustering_rel" => self.clustering_rel,
            "assortativity_rel" => self.assortativity_rel,
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct TierTestRow {
    statistic: &'static str,
    n_loyal: usize,
    n_nonloyal: usize,
    median_loyal: Option<f64>,
    median_nonloyal: Option<f64>,
    loyal_ci_low: Option<f64>,
    loyal_ci_high: Option<f64>,
    nonloyal_ci_low: Option<f64>,
    nonloyal_ci_high: Option<f64>,
    u: Option<f64>,
    p_value: Option<f64>,
}

#[derive(Serialize)]
struct MatchedRow {
    loyal: String,
    nonloyal: String,
    loyal_activity: f64,
    nonloyal_activity: f64,
    loyal_density: Option<f64>,
    nonloyal_density: Option<f64>,
}

#[derive(Serialize)]
struct MatchedSummary {
    n_pairs: usize,
    median_difference: Option<f64>,
    statistic: Option<f64>,
    p_value: Option<f64>,
}

#[derive(Serialize)]
struct RegressionReport {
    feature: &'static str,
    result: Option<RegressionResult<f64>>,
    error: Option<String>,
    holm_reject: Option<bool>,
}

struct Monthly {
    graph: InteractionGraph,
    cmp: NullComparison<f64>,
}

fn analyse_months(cfg: &RunConfig, store: &CorpusStore) -> Vec<Monthly> {
    let builder = GraphBuilder::new(store, cfg.network.graph.clone());
    let cells: Vec<(&str, MonthKey)> = store.community_months().collect();
    cells
        .par_iter()
        .map(|&(c, m)| {
            let graph = builder.build(c, m);
            let cmp = compare_to_null(&graph, &cfg.network.null, cfg.seed);
            Monthly { graph, cmp }
        })
        .collect()
}

fn export_graphs(cfg: &RunConfig, rep: &mut Reporter, monthly: &[Monthly]) -> Result<()> {
    for mo in monthly {
        let g = &mo.graph;
        let base = format!("graphs/{}/{}", file_safe(&g.community), g.month);
        write_edge_list(g, rep.raw(&format!("{base}.edges.tsv"))?)?;
        write_node_attributes(g, rep.raw(&format!("{base}.nodes.tsv"))?)?;
        let null = null_samples(g, &cfg.network.null, cfg.seed);
        if let Some(first) = null.first() {
            write_edge_list(first, rep.raw(&format!("{base}.null.edges.tsv"))?)?;
        }
    }
    Ok(())
}

fn tier_tests(cfg: &RunConfig, rows: &[CommunityRow]) -> Vec<TierTestRow> {
    STATS
        .iter()
        .map(|&name| {
            let side = |t: Tier| -> Vec<f64> {
                rows.iter().filter(|r| r.tier == Some(t)).filter_map(|r| r.stat(name)).collect()
            };
            let (l, n) = (side(Tier::Loyal), side(Tier::NonLoyal));
            let ci = |xs: &[f64], tag: &str| {
                let seed = stream_seed(cfg.seed, &[Key::from("tier_ci"), Key::from(name), Key::from(tag)]);
                bootstrap_ci(xs, Statistic::Median, cfg.network.ci_level, cfg.bootstrap_resamples, seed).ok()
            };
            let (lci, nci) = (ci(&l, "loyal"), ci(&n, "nonloyal"));
            let test = mann_whitney_u(&l, &n).ok();
            TierTestRow {
                statistic: name,
                n_loyal: l.len(),
                n_nonloyal: n.len(),
                median_loyal: median(&l),
                median_nonloyal: median(&n),
                loyal_ci_low: lci.map(|c| c.0),
                loyal_ci_high: lci.map(|c| c.1),
                nonloyal_ci_low: nci.map(|c| c.0),
                nonloyal_ci_high: nci.map(|c| c.1),
                u: test.as_ref().map(|t| t.statistic),
                p_value: test.map(|t| t.p_value),
            }
        })
        .collect()
}

/// Interaction-network statistics per community-month, null comparisons,
/// tier contrasts, the activity-matched density test and the panel
/// regressions of next-month loyalty on network structure.
pub fn cmd_network(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let store = load_store(cfg)?;
    let profiles = build_profiles(&store);
    let mut rep = reporter(cfg, "network")?;
    rep.flag("edge_mode", format!("{:?}", cfg.network.graph.mode).to_lowercase());
    rep.flag("max_chain_distance", cfg.network.graph.max_chain_distance);
    rep.flag("min_annual_comments", cfg.network.graph.min_annual_comments);
    rep.flag("n_null", cfg.network.null.n_null);
    rep.flag("iterations_multiplier", cfg.network.null.iterations_multiplier);
    rep.flag("assortativity_activity", format!("{:?}", cfg.network.null.transform).to_lowercase());
    rep.flag("relative_stat", "median_monthly_emp_minus_null_over_abs_null");
    rep.flag("regression_fixed_effects", "community_demeaned_month_dummies");

    let reports = loyalty_reports(&profiles, &cfg.loyalty.community_level());
    let tiers: Vec<CommunityTier> = match tier_communities(&reports, cfg.tiers.min_loyal_users) {
        Ok(t) => t,
        Err(e) => {
            rep.warn(format!("tiering failed, tier contrasts skipped: {e}"));
            Vec::new()
        }
    };
    let tier_of: BTreeMap<&str, Tier> = tiers.iter().map(|t| (t.community.as_str(), t.tier)).collect();
    for t in [Tier::Loyal, Tier::NonLoyal] {
        let n = tiers.iter().filter(|c| c.tier == t).count();
        if n < 2 {
            rep.warn(format!("only {n} communities in the {t} tier"));
        }
    }

    let monthly = analyse_months(cfg, &store);
    let mrows: Vec<MonthlyRow> = monthly
        .iter()
        .map(|mo| {
            let s = graph_stats::<f64>(&mo.graph, cfg.network.null.transform);
            MonthlyRow {
                community: mo.graph.community.clone(),
                month: mo.graph.month,
                n_nodes: s.n_nodes,
                n_edges: s.n_edges,
                density: s.density,
                clustering: s.avg_clustering,
                assortativity: s.assortativity,
                gini: s.gini,
                null_clustering: mo.cmp.null_clustering,
                null_assortativity: mo.cmp.null_assortativity,
                clustering_rel: mo.cmp.clustering_rel(),
                assortativity_rel: mo.cmp.assortativity_rel(),
            }
        })
        .collect();

    let mut by_comm: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in mrows.iter().enumerate() {
        by_comm.entry(&r.community).or_default().push(i);
    }
    let crows: Vec<CommunityRow> = by_comm
        .iter()
        .map(|(&c, idx)| {
            let med = |f: fn(&MonthlyRow) -> Option<f64>| median(&idx.iter().filter_map(|&i| f(&mrows[i])).collect::<Vec<_>>());
            let cmps: Vec<NullComparison<f64>> = idx.iter().map(|&i| monthly[i].cmp.clone()).collect();
            let rel = summarize(&cmps, &cfg.network.null, cfg.seed).ok();
            CommunityRow {
                community: c.to_string(),
                tier: tier_of.get(c).copied(),
                months: idx.len(),
                density: med(|r| r.density),
                clustering: med(|r| r.clustering),
                assortativity: med(|r| r.assortativity),
                gini: med(|r| r.gini),
                clustering_rel: rel.as_ref().and_then(|r| r.clustering_rel),
                assortativity_rel: rel.as_ref().and_then(|r| r.assortativity_rel),
            }
        })
        .collect();
    rep.csv("network_monthly.csv", &mrows)?;
    rep.csv("network_community.csv", &crows)?;

    if !tiers.is_empty() {
        rep.csv("network_tier_tests.csv", tier_tests(cfg, &crows))?;
        matched_density(cfg, &mut rep, &store, &tiers, &crows)?;
    }
    regressions(cfg, &mut rep, &reports, &mrows)?;
    if cfg.network.export_graphs {
        export_graphs(cfg, &mut rep, &monthly)?;
    }
    rep.finish()
}

fn matched_density(
    cfg: &RunConfig,
    rep: &mut Reporter,
    store: &CorpusStore,
    tiers: &[CommunityTier],
    crows: &[CommunityRow],
) -> Result<()> {
    let empty = crate::loyalty::LabelSet::new(Vec::new());
    let activity: BTreeMap<String, f64> = tiers
        .iter()
        .filter_map(|t| community_descriptives(store, &empty, &t.community).ok())
        .map(|d| (d.community, d.comments_per_user))
        .collect();
    let density: BTreeMap<&str, Option<f64>> = crows.iter().map(|r| (r.community.as_str(), r.density)).collect();
    let pairs = activity_matched_pairs(tiers, &activity, cfg.network.match_max_gap_sd);
    let rows: Vec<MatchedRow> = pairs
        .iter()
        .map(|(l, n)| MatchedRow {
            loyal: l.clone(),
            nonloyal: n.clone(),
            loyal_activity: activity[l],
            nonloyal_activity: activity[n],
            loyal_density: density.get(l.as_str()).copied().flatten(),
            nonloyal_density: density.get(n.as_str()).copied().flatten(),
        })
        .collect();
    let diffs: Vec<f64> = rows
        .iter()
        .filter_map(|r| Some(r.loyal_density? - r.nonloyal_density?))
        .collect();
    let test = wilcoxon_signed_rank(&diffs).ok();
    if test.is_none() {
        rep.warn(format!("matched density test skipped: {} usable pairs", diffs.len()));
    }
    rep.csv("network_matched_pairs.csv", &rows)?;
    rep.json(
        "network_matched_density.json",
        &MatchedSummary {
            n_pairs: diffs.len(),
            median_difference: median(&diffs),
            statistic: test.as_ref().map(|t| t.statistic),
            p_value: test.map(|t| t.p_value),
        },
    )
}

fn regressions(
    cfg: &RunConfig,
    rep: &mut Reporter,
    reports: &[crate::loyalty::CommunityLoyaltyReport],
    mrows: &[MonthlyRow],
) -> Result<()> {
    let rate: BTreeMap<(&str, MonthKey), f64> = reports
        .iter()
        .filter_map(|r| Some(((r.community.as_str(), r.month), r.loyalty_rate?)))
        .collect();
    let panel = |f: fn(&MonthlyRow) -> Option<f64>| -> Vec<PanelRow<f64>> {
        mrows
            .iter()
            .filter_map(|r| {
                Some(PanelRow {
                    community: r.community.clone(),
                    month: r.month,
                    loyalty_rate_now: *rate.get(&(r.community.as_str(), r.month))?,
                    loyalty_rate_next: *rate.get(&(r.community.as_str(), r.month.succ()))?,
                    network_feature: f(r)?,
                })
            })
            .collect()
    };
    let specs: [(&'static str, fn(&MonthlyRow) -> Option<f64>); 2] =
        [("clustering_rel", |r| r.clustering_rel), ("assortativity", |r| r.assortativity)];
    let mut out: Vec<RegressionReport> = specs
        .iter()
        .map(|&(name, f)| match panel_regression(&panel(f)) {
            Ok(r) => RegressionReport {
                feature: name,
                result: Some(r),
                error: None,
                holm_reject: None,
            },
            Err(e) => RegressionReport {
                feature: name,
                result: None,
                error: Some(e.to_string()),
                holm_reject: None,
            },
        })
        .collect();
    let fitted: Vec<usize> = (0..out.len()).filter(|&i| out[i].result.is_some()).collect();
    let ps: Vec<f64> = fitted
        .iter()
        .map(|&i| out[i].result.as_ref().unwrap().p_values[crate::statkit::TERM_FEATURE])
        .collect();
    for (&i, reject) in fitted.iter().zip(holm_bonferroni(&ps, cfg.network.holm_alpha)) {
        out[i].holm_reject = Some(reject);
    }
    for r in &out {
        if let Some(e) = &r.error {
            rep.warn(format!("{} regression not fitted: {e}", r.feature));
        }
    }
    rep.flag("holm_alpha", cfg.network.holm_alpha);
    rep.json("network_regression.json", &out)
}
