//! Splittings of free groups, their half-spaces as regular languages, and the pocsets they
//! generate over a ball of translates.

mod automaton;
mod ball;
mod inumber;
mod probe;
mod splitting;
mod stallings;
mod word;

pub use automaton::{Dfa, Nfa, RegularSet};
pub use word::{inv, normalize_word, Alphabet, Automorphism, Letter, Word};
pub use stallings::{commensurable, double_coset_language, subgroup_membership, Commensurability, StallingsGraph};
pub use splitting::{image_language, SpecSet, SplittingKind, SplittingSpec};
pub use ball::{corner_smallness, corner_statuses, element_name, sigma_ball, BallAlias, BallElement, SigmaBall, Smallness, SmallnessBound};
pub use inumber::{intersection_number, IntersectionReport, IntersectionValue};
pub use probe::{run_probe, ProbeInput, ProbeMode, ProbeOutcome, ProbeReport};
