//! Tokenization, lexicon features, noun IDF, and the cohort post and
//! comment-pair samples.

mod features;
mod idf;
mod lexicon;
mod sampling;
mod tokenize;

pub use features::{linguistic_features, FeatureVector, LexiconRates, LINGUISTIC_FEATURES};
pub use idf::IdfTable;
pub use lexicon::{Lexicons, NounMode};
pub use sampling::{
    build_comment_pairs, cohort_comments_by_post, sample_selected_posts, CommentPair, PairSampling, SelectedPost, SelectedPosts,
};
pub use tokenize::tokenize;
