//! Monthly user-user interaction networks, their statistics, and
//! configuration-model null comparisons.

mod build;
mod export;
mod graph;
mod matching;
mod relative;
mod rewire;
mod stats;

pub use build::{build_graph, EdgeMode, GraphBuilder, GraphOptions};
pub use export::{read_graph, write_edge_list, write_node_attributes};
pub use graph::InteractionGraph;
pub use matching::activity_matched_pairs;
pub use relative::{compare_to_null, null_samples, relative_stats, summarize, NullComparison, NullOptions, RelativeStats};
pub use rewire::rewire_null;
pub use stats::{assortativity, avg_clustering, density, gini, graph_stats, local_clustering, ActivityTransform, GraphStats};
