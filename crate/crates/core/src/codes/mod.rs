//! Coding-theoretic building blocks for the constructed protocols.

pub mod coloring;
pub mod greedy;
pub mod proper;
pub mod syndrome;
pub mod vt;

pub use coloring::{color_count, recover_missing, symdiff_color};
pub use greedy::{GreedyDeletionCode, MAX_GREEDY_LEN};
pub use proper::{
    binomial, build_proper_code, build_proper_code_with, ProperCode, ProperCodeReport,
    ProperParams, Verification,
};
pub use syndrome::{
    canonical_completion, gamma, index_bits, index_vector, is_admissible, render_syndrome,
    Completion,
};
pub use vt::{bits_from_str, bits_to_string, VtCode};
