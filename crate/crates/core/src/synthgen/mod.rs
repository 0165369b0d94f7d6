//! Synthetic multi-community corpora with planted loyalty, vagrancy,
//! language profiles and post choices, written in the dump format.

mod config;
mod generate;
mod io;
mod text;
mod truth;

pub use config::{CohortProfile, CommunitySpec, PostProfile, ReplyGeometry, SynthConfig};
pub use generate::{generate, SynthCorpus};
pub use io::{write_jsonl, SynthPaths};
pub use truth::{Cohort, CohortMeans, GroundTruth, PlantedLabel, PlantedUser, Transitions};

#[cfg(test)]
mod tests;
