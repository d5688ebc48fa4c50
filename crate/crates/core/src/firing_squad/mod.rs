//! The firing squad: its rule, simulation, history diagrams and their
//! continuous lifts, and the backward-history oracle.

mod rule;

pub use rule::{fs_alphabet, fs_rule, fs_rule_file, BLANK, FIRING, FS_STATES, KILLER, SHARP, SHARP_PRIME};
mod sim;

pub use sim::{
    doubling_chain, doubling_time, firing_outcome, firing_time, sharp_config, simulate, simulate_with, spacing_set,
    spacing_successor, ChainLink, FiringOutcome, Orbit,
};
mod euclid;
mod history;

pub use euclid::{lift_euclidean, validate_euclidean, EuclidViolation, EuclideanDiagram, HalfPoint, Segment, Signal};
pub use history::{validate_history, HistoryDiagram, Violation};
mod oracle;

pub use oracle::{backward_automaton, backward_reach, backward_reach_with, live_mask, DEFAULT_MAX_STATES};
