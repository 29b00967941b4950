use std::sync::Arc;

use crate::game::{bit_symbol, Flags, Protocol};

/// Alice writes 0 at every step. Its edge set is the sensitive-edge set of OR.
pub fn zeros_protocol(n: usize) -> Protocol {
    Protocol::new(
        "zeros",
        n,
        2,
        Arc::new(|_: &[usize], _: &crate::game::CellArray, _: usize| Ok(bit_symbol(false))),
    )
    .with_flags(Flags {
        order_oblivious: true,
        assignment_oblivious: true,
    })
}
