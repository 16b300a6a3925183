//! Comparing plane graphs through the merge trees of their height functions.
//!
//! The pipeline is: [`graph_io`] loads an [`EmbeddedGraph`]; [`filtration`]
//! projects it onto a direction; [`merge_tree`] builds the tail-less merge
//! tree of that height function; [`branching`] compares two merge trees with
//! the branching distance; [`abd`] averages branching distances over a set of
//! evenly spaced directions; [`analysis`] turns pairwise distances into
//! dendrograms and planar embeddings.

pub mod abd;
pub mod analysis;
pub mod branching;
pub mod error;
pub mod filtration;
pub mod graph_io;
pub mod merge_tree;
pub mod synth;
pub mod verify;

pub use abd::{average_branching_distance, frame_angles, AbdConfig, FrameSet};
pub use branching::{branching_distance, DistanceMode, Engine};
pub use error::{Error, Result};
pub use filtration::{collapse_equal_adjacent, direction_filter, ScalarGraph};
pub use graph_io::{largest_component, load_graph, write_graph, EmbeddedGraph, GraphFormat, Vertex};
pub use merge_tree::{compute_merge_tree, merge_tree_oracle, shift_median_zero, Centering, MergeTree};
