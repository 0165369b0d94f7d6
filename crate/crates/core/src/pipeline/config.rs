use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::IngestOptions;
use crate::error::{Error, Result};
use crate::loyalty::LoyaltyParams;
use crate::mlpredict::{FirstKOptions, ForestParams};
use crate::netgraph::{GraphOptions, NullOptions};
use crate::synthgen::SynthConfig;
use crate::textfeat::PairSampling;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub comments: Option<PathBuf>,
    pub posts: Option<PathBuf>,
    /// Directory of word-list files; built-in lists when absent.
    pub lexicons: Option<PathBuf>,
    /// CSV with `community,category` rows.
    pub categories: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TierOptions {
    /// A community is tiered when some month has at least this many sustained preferrers.
    pub min_loyal_users: u32,
    pub category_ci_level: f64,
}

impl Default for TierOptions {
    fn default() -> Self {
        TierOptions {
            min_loyal_users: 25,
            category_ci_level: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkOptions {
    #[serde(flatten)]
    pub graph: GraphOptions,
    #[serde(flatten)]
    pub null: NullOptions,
    pub match_max_gap_sd: f64,
    pub ci_level: f64,
    pub holm_alpha: f64,
    /// Write edge and node files for every graph and its first null sample.
    pub export_graphs: bool,
}

impl Default for NetworkOptions {
    fn default() -> Self {
        NetworkOptions {
            graph: GraphOptions::default(),
            null: NullOptions::default(),
            match_max_gap_sd: 0.1,
            ci_level: 0.999,
            holm_alpha: 0.05,
            export_graphs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UserLevelOptions {
    pub selected_posts: usize,
    pub pairs: PairSampling,
    /// Communities need this many distinct loyal and vagrant users each.
    pub min_cohort_users: usize,
    /// Level at which a per-community paired test counts as significant.
    pub significance: f64,
}

impl Default for UserLevelOptions {
    fn default() -> Self {
        UserLevelOptions {
            selected_posts: 100,
            pairs: PairSampling::PerPost(1),
            min_cohort_users: 25,
            significance: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredictOptions {
    #[serde(flatten)]
    pub first_k: FirstKOptions,
    pub loco_per_community: usize,
    /// Also train on label-permuted data as a chance-level control.
    pub shuffle_control: bool,
    pub significance: f64,
    pub ci_level: f64,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions {
            first_k: FirstKOptions::default(),
            loco_per_community: 250,
            shuffle_control: true,
            significance: 0.05,
            ci_level: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub bootstrap_resamples: usize,
    pub paths: Paths,
    pub ingest: IngestOptions,
    pub loyalty: LoyaltyParams,
    pub tiers: TierOptions,
    pub network: NetworkOptions,
    pub userlevel: UserLevelOptions,
    pub predict: PredictOptions,
    pub forest: ForestParams,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            bootstrap_resamples: 2000,
            paths: Paths::default(),
            ingest: IngestOptions::default(),
            loyalty: LoyaltyParams::default(),
            tiers: TierOptions::default(),
            network: NetworkOptions::default(),
            userlevel: UserLevelOptions::default(),
            predict: PredictOptions::default(),
            forest: ForestParams::default(),
            synth: SynthConfig::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl RunConfig {
    /// Parses TOML, rejecting keys that do not map to a setting.
    pub fn from_toml(text: &str) -> Result<Self> {
        let input: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg: RunConfig = toml::Value::Table(input.clone())
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let known = toml::Table::try_from(&cfg).map_err(|e| Error::Config(e.to_string()))?;
        let mut unknown = Vec::new();
        unknown_keys(&input, &known, "", &mut unknown);
        if !unknown.is_empty() {
            return Err(Error::Config(format!("unknown config keys: {}", unknown.join(", "))));
        }
        Ok(cfg)
    }

    /// Parses a TOML config file. Relative paths are taken relative to the file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.paths.comments,
            &mut cfg.paths.posts,
            &mut cfg.paths.lexicons,
            &mut cfg.paths.categories,
            &mut cfg.paths.out,
        ] {
            resolve(base, p);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.loyalty.validate()?;
        self.forest.validate()?;
        if self.bootstrap_resamples == 0 {
            return Err(Error::Config("bootstrap_resamples must be positive".into()));
        }
        for (name, p) in [
            ("comments", &self.paths.comments),
            ("posts", &self.paths.posts),
            ("lexicons", &self.paths.lexicons),
            ("categories", &self.paths.categories),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    return Err(Error::Config(format!("{name} path {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.paths.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// SHA-256 of the analysis settings. Paths are left out so that the same
    /// analysis of copied inputs hashes identically.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.paths = Paths::default();
        let json = serde_json::to_vec(&c).expect("config serializes");
        hex(&Sha256::digest(&json))
    }
}

fn unknown_keys(input: &toml::Table, known: &toml::Table, prefix: &str, out: &mut Vec<String>) {
    for (k, v) in input {
        match (v, known.get(k)) {
            (_, None) => out.push(format!("{prefix}{k}")),
            (toml::Value::Table(a), Some(toml::Value::Table(b))) => unknown_keys(a, b, &format!("{prefix}{k}."), out),
            _ => {}
        }
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_and_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            r#"
seed = 9
[paths]
comments = "c.jsonl"
out = "/tmp/x"
[loyalty]
min_monthly_comments = 12
[network]
mode = "direct_reply"
n_null = 3
[userlevel]
pairs = "cross_product"
[predict]
k = 1
train_window = { start = "2014-01", end = "2014-03" }
"#,
        )
        .unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.paths.comments.as_deref(), Some(dir.path().join("c.jsonl").as_path()));
        assert_eq!(cfg.paths.out.as_deref(), Some(Path::new("/tmp/x")));
        assert_eq!(cfg.loyalty.min_monthly_comments, 12);
        assert_eq!(cfg.network.null.n_null, 3);
        assert_eq!(cfg.network.graph.mode, crate::netgraph::EdgeMode::DirectReply);
        assert_eq!(cfg.userlevel.pairs, PairSampling::CrossProduct);
        assert_eq!(cfg.predict.first_k.k, 1);
        assert!(cfg.validate().is_err());

        let mut moved = cfg.clone();
        moved.paths.out = Some("elsewhere".into());
        assert_eq!(moved.hash(), cfg.hash());
        moved.seed = 10;
        assert_ne!(moved.hash(), cfg.hash());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_toml("[loyalty]\nthreshold = 0.4\n[network]\nn_nul = 2").unwrap_err();
        assert!(err.to_string().contains("loyalty.threshold"), "{err}");
        assert!(err.to_string().contains("network.n_nul"), "{err}");
        assert!(RunConfig::from_toml("sed = 1").is_err());
        assert!(RunConfig::from_toml("[synth]\nseed = 3\n[synth.replies]\nmax_depth = 2").is_ok());
    }
}
