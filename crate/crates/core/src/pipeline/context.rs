use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use log::info;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{hex, RunConfig};
use super::report::{Meta, Reporter};
use crate::corpus::{CorpusStore, Profiles};
use crate::error::{Error, Result};
use crate::loyalty::{LabelSet, LoyaltyLabel};
use crate::textfeat::Lexicons;

pub(crate) fn reporter(cfg: &RunConfig, command: &str) -> Result<Reporter> {
    let flags: BTreeMap<String, String> = [
        ("preference_threshold", cfg.loyalty.preference_threshold.to_string()),
        ("min_monthly_comments", cfg.loyalty.min_monthly_comments.to_string()),
        ("community_rate_mode", "plurality_excluding_platform_leavers".to_string()),
        ("preference_tie_break", "lexicographic".to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let meta = Meta {
        tool: "commloyalty".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config_sha256: cfg.hash(),
        seed: cfg.seed,
        design_flags: flags,
    };
    Reporter::new(&cfg.out_dir().join(command), meta)
}

fn required<'a>(p: &'a Option<std::path::PathBuf>, what: &str) -> Result<&'a Path> {
    let p = p
        .as_deref()
        .ok_or_else(|| Error::Config(format!("paths.{what} is not set")))?;
    if !p.exists() {
        return Err(Error::Config(format!("{what} file {} does not exist", p.display())));
    }
    Ok(p)
}

pub(crate) fn load_store(cfg: &RunConfig) -> Result<CorpusStore> {
    let comments = required(&cfg.paths.comments, "comments")?;
    let posts = required(&cfg.paths.posts, "posts")?;
    let store = CorpusStore::from_paths(comments, posts, &cfg.ingest)?;
    info!(
        "loaded {} comments and {} posts ({} records skipped)",
        store.stats().comments,
        store.stats().posts,
        store.stats().skipped()
    );
    Ok(store)
}

pub(crate) fn load_lexicons(cfg: &RunConfig) -> Result<Lexicons> {
    match &cfg.paths.lexicons {
        Some(dir) => Lexicons::from_dir(dir),
        None => Ok(Lexicons::default()),
    }
}

#[derive(Serialize)]
struct CacheKey<'a> {
    inputs: Vec<(String, u64, u64)>,
    ingest: &'a crate::corpus::IngestOptions,
    loyalty: &'a crate::loyalty::LoyaltyParams,
}

fn labels_cache_key(cfg: &RunConfig) -> Result<String> {
    let mut inputs = Vec::new();
    for p in [&cfg.paths.comments, &cfg.paths.posts].into_iter().flatten() {
        let md = fs::metadata(p).map_err(|e| Error::io(p, e))?;
        let mtime = md
            .modified()
            .ok()
            .and_then(|t| t.duration_since(std::time::UNIX_EPOCH).ok())
            .map_or(0, |d| d.as_secs());
        inputs.push((p.display().to_string(), md.len(), mtime));
    }
    let key = CacheKey {
        inputs,
        ingest: &cfg.ingest,
        loyalty: &cfg.loyalty,
    };
    Ok(hex(&Sha256::digest(serde_json::to_vec(&key)?))[..16].to_string())
}

/// Loyal and vagrant labels, read from `out/cache` when an entry for the
/// same inputs and parameters exists.
pub(crate) fn load_labels(cfg: &RunConfig, profiles: &Profiles) -> Result<LabelSet> {
    let dir = cfg.out_dir().join("cache");
    let path = dir.join(format!("labels-{}.json", labels_cache_key(cfg)?));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(labels) = serde_json::from_str::<Vec<LoyaltyLabel>>(&text) {
            info!("labels read from cache {}", path.display());
            return Ok(LabelSet::new(labels));
        }
    }
    let labels = LabelSet::compute(profiles, &cfg.loyalty);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    fs::write(&path, serde_json::to_vec(labels.labels())?).map_err(|e| Error::io(&path, e))?;
    Ok(labels)
}
