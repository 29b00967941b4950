//! The game itself: arrays, protocols, runs, edge graphs and cost measures.

mod cells;
mod enumerate;
mod graph;
mod metrics;
mod protocol;
mod run;

pub use cells::{
    bit_symbol, external_symbol, internal_symbol, render_symbol, CellArray, HypercubeEdge,
    Permutation, Symbol, MAX_ALPHABET, MAX_PACKED_LEN, STAR,
};
pub use enumerate::{
    edge_multiplicities, enumerate_edge_graph, reachable_states, EnumMode, Limits,
};
pub use graph::{canonical_bob, EdgeGraph, EdgeGraphReport};
pub use metrics::{
    conditional_entropy, cost, expected_cost, EntropyEstimate, ExpectedCost, MetricMode, Rational,
};
pub use protocol::{Alice, Bob, Flags, Protocol};
pub use run::{alice_edge, run_protocol, GameRunRecord};
pub(crate) use run::checked_write;
