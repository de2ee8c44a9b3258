//! Algebraic regular neighborhoods: the block-cut tree of an almost-inclusion cubing,
//! enclosure of parts by its V0 orbits, and compatibility trees.

mod blocks;
mod compat;
mod conditions;
mod enclosure;
mod iso;
mod tree;

pub use blocks::{check_components_against_blocks, cross_connected_components, decompose, Block, Decomposition};
pub use compat::{compatibility_tree, CollapseCheck, CompatibilityTree};
pub use conditions::{
    isolated_parts, verify_arn_conditions, verify_tree_conditions, ArnCandidate, ArnConditionReport, ConditionResult,
    ConditionStatus, OrbitSummary,
};
pub use enclosure::{verify_enclosure, EnclosureResult, RefinedEdge, Refinement};
pub use iso::gtree_isomorphic;
pub use tree::{build_arn, Arn, BipartiteTree, Color, GraphMap, Origin, TreeNode};
