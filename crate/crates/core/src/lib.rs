//! Simulation and analysis of the streaming array-filling game.
//!
//! Alice receives a permutation of `n` locations one element at a time and
//! must fill each arriving cell of an array before seeing the next one; the
//! last cell receives a forced symbol `b`. Bob sees only the finished array
//! and must name a set of locations containing the last arrival. The crate
//! runs such protocols, enumerates the hypercube edges they realise, measures
//! worst-case cost, expected cost and conditional entropy, and provides the
//! concrete protocols, codes and structural constructions built around the
//! game.
//!
//! Locations are 0-based internally and 1-based in every external rendering
//! (JSON, DOT, CLI). Symbols are `1..=w` with `0` reserved for the empty cell.

pub mod codes;
pub mod error;
pub mod game;
pub mod protocols;
pub mod theory;

pub use error::{Error, Result};
pub use game::{
    canonical_bob, conditional_entropy, cost, enumerate_edge_graph, expected_cost, run_protocol,
    Alice, Bob, CellArray, EdgeGraph, EnumMode, GameRunRecord, HypercubeEdge, Limits,
    MetricMode, Permutation, Protocol, Symbol, STAR,
};
