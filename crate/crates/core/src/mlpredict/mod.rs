//! Random-forest prediction of loyalty from early contributions and of
//! loyal versus vagrant comments across communities.

mod dataset;
mod eval;
mod features;
mod forest;

pub use dataset::{Class, Dataset, Example};
pub use eval::{evaluate, loco_evaluate, predict_all, Evaluation, LocoResult};
pub use features::{
    build_first_k_dataset, build_loco_dataset, comments_by_author, first_k_features, first_k_units, FeatureExtractor, FeatureGroup,
    FirstKOptions, FirstKUnit, COMMENT_FEATURES,
};
pub use forest::{train_forest, DecisionTree, ForestModel, ForestParams, MaxFeatures};
