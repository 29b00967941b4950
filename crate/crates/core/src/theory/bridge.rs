//! Compiling a full-degree boolean function into an order-oblivious protocol
//! whose edges are all sensitive edges of the function.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{bit_symbol, Alice, CellArray, Flags, Protocol, Symbol, MAX_PACKED_LEN};

use super::boolean::{top_coefficient, BooleanFunction};

struct DegreeKeepingAlice {
    f: BooleanFunction,
}

impl DegreeKeepingAlice {
    /// Whether `f` restricted to the filled cells of `array` plus `loc = bit`
    /// still has full degree in the remaining free variables.
    fn keeps_full_degree(&self, array: &CellArray, loc: usize, bit: bool) -> bool {
        let mut base = 0usize;
        for l in array.filled() {
            if array.bit(l) == Some(true) {
                base |= 1 << l;
            }
        }
        if bit {
            base |= 1 << loc;
        }
        let free: Vec<usize> = array.stars().filter(|&l| l != loc).collect();
        top_coefficient(free.len(), |y| {
            let x = free
                .iter()
                .enumerate()
                .filter(|&(r, _)| y >> r & 1 == 1)
                .fold(base, |acc, (_, &l)| acc | 1 << l);
            self.f.eval(x)
        }) != 0
    }
}

impl Alice for DegreeKeepingAlice {
    fn write(&self, _history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        if self.keeps_full_degree(array, loc, false) {
            return Ok(bit_symbol(false));
        }
        if self.keeps_full_degree(array, loc, true) {
            return Ok(bit_symbol(true));
        }
        Err(Error::Contract(format!(
            "restriction lost full degree before location {} arrived",
            loc + 1
        )))
    }
}

/// The protocol in which Alice fixes each arriving variable so that the
/// restriction of `f` stays of full degree. Requires `deg f = n`.
pub fn function_to_protocol(f: &BooleanFunction) -> Result<Protocol> {
    let n = f.n();
    if n == 0 || n > MAX_PACKED_LEN {
        return Err(Error::TooLarge {
            what: "function-protocol variables",
            n,
            limit: MAX_PACKED_LEN,
        });
    }
    if !f.has_full_degree() {
        return Err(Error::InvalidParameter(format!(
            "function has degree {} on {n} variables; take a full-degree subfunction first",
            f.degree()
        )));
    }
    Ok(Protocol::new(
        "function",
        n,
        2,
        Arc::new(DegreeKeepingAlice { f: f.clone() }),
    )
    .with_flags(Flags {
        order_oblivious: true,
        assignment_oblivious: false,
    }))
}
