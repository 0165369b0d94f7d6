//! End-to-end subcommands: load a corpus, run an analysis, write reports.

mod config;
mod context;
mod ingest;
mod loyalty;
mod network;
mod predict;
mod report;
mod synth;
mod userlevel;

pub use config::{NetworkOptions, Paths, PredictOptions, RunConfig, TierOptions, UserLevelOptions};
pub use ingest::cmd_ingest;
pub use loyalty::cmd_loyalty;
pub use network::cmd_network;
pub use predict::{cmd_predict, PredictTask};
pub use report::{file_safe, Meta, Reporter, RunOutcome};
pub use synth::cmd_synth;
pub use userlevel::cmd_userlevel;
