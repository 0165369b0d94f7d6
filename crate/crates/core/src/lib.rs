//! Community loyalty analysis over multi-community comment corpora.

pub mod corpus;
pub mod error;
pub mod loyalty;
pub mod mlpredict;
pub mod netgraph;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod statkit;
pub mod synthgen;
pub mod textfeat;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GraphStats = netgraph::GraphStats<f64>;
pub type NullComparison = netgraph::NullComparison<f64>;
pub type RelativeStats = netgraph::RelativeStats<f64>;
pub type TestResult = statkit::TestResult<f64>;
pub type PanelRow = statkit::PanelRow<f64>;
pub type RegressionResult = statkit::RegressionResult<f64>;
pub type FeatureVector = textfeat::FeatureVector<f64>;
pub type IdfTable = textfeat::IdfTable<f64>;
pub type Dataset = mlpredict::Dataset<f64>;
pub type Example = mlpredict::Example<f64>;
pub type ForestModel = mlpredict::ForestModel<f64>;
pub type FeatureExtractor<'a> = mlpredict::FeatureExtractor<'a, f64>;
