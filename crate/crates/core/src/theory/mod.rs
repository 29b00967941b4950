//! Boolean-function measures and the structural results about protocols:
//! compiling functions to protocols, order-oblivious conversion, the two
//! lower-bound witnesses and an exact solver for the minimum cost.

pub mod assignment;
pub mod boolean;
pub mod bridge;
pub mod monotone;
pub mod oblivious;
pub mod solver;
pub mod witness;

pub use assignment::{assignment_oblivious_witness, swap, written_after_set, HalvingStep, HalvingTrace};
pub use boolean::{BooleanFunction, MultilinearPoly, SensitivityProfile, Subfunction};
pub use bridge::function_to_protocol;
pub use monotone::{
    arrival_word, bump, check_monotone, lex_min_order, monotone_witness, MonotoneCheck,
    MonotoneViolation, MONOTONE_MAX_N,
};
pub use oblivious::{
    order_oblivious_convert, previous_smaller_strategy, random_order_sensitive_strategy,
    verify_assignment_oblivious, verify_order_oblivious, ObliviousnessViolation,
    OBLIVIOUS_MAX_N,
};
pub use solver::{exact_c_solver, min_cost, MinCostReport, SolverOutcome, SOLVER_MAX_N};
pub use witness::{WitnessKind, WitnessReport, WitnessVertex};
