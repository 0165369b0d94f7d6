use serde::Serialize;

use super::config::RunConfig;
use super::context::reporter;
use super::report::RunOutcome;
use crate::error::Result;
use crate::synthgen::{generate, SynthConfig};

#[derive(Serialize)]
struct SynthSummary {
    comments: usize,
    posts: usize,
    users: usize,
    loyal_labels: usize,
    vagrant_labels: usize,
    realized_rates: std::collections::BTreeMap<String, f64>,
}

/// Generates a planted-truth corpus into the output directory. The run seed
/// replaces the generator's own.
pub fn cmd_synth(cfg: &RunConfig) -> Result<RunOutcome> {
    let synth = SynthConfig {
        seed: cfg.seed,
        ..cfg.synth.clone()
    };
    synth.validate()?;
    let mut rep = reporter(cfg, "synth")?;
    let corpus = generate(&synth)?;
    corpus.write_to(rep.dir())?;
    rep.json(
        "synth_summary.json",
        &SynthSummary {
            comments: corpus.comments.len(),
            posts: corpus.posts.len(),
            users: corpus.truth.users.len(),
            loyal_labels: corpus.truth.loyal.len(),
            vagrant_labels: corpus.truth.vagrant.len(),
            realized_rates: corpus.truth.realized_rates(),
        },
    )?;
    rep.finish()
}
