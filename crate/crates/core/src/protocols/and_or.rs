//! The AND-OR protocol: locations are split into contiguous blocks of size
//! `k = ceil(sqrt(n))` and a location receives 1 exactly when it is the last of
//! its block to arrive.

use std::sync::Arc;

use crate::error::Result;
use crate::game::{bit_symbol, Alice, Bob, CellArray, Flags, Protocol, Symbol};

/// Smallest `k` with `k * k >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut k = (n as f64).sqrt() as usize;
    while k * k < n {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= n {
        k -= 1;
    }
    k
}

/// Contiguous blocks `{0..k}, {k..2k}, ...`; the last one may be short.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    k: usize,
}

impl BlockPartition {
    pub fn new(n: usize) -> Self {
        BlockPartition { n, k: ceil_sqrt(n).max(1) }
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.n.div_ceil(self.k)
    }

    pub fn block_of(&self, loc: usize) -> usize {
        loc / self.k
    }

    pub fn block(&self, index: usize) -> std::ops::Range<usize> {
        index * self.k..((index + 1) * self.k).min(self.n)
    }

    pub fn blocks(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        (0..self.block_count()).map(|i| self.block(i))
    }
}

struct AndOrAlice(BlockPartition);

impl Alice for AndOrAlice {
    fn write(&self, _history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        let block = self.0.block(self.0.block_of(loc));
        let last = block.clone().all(|l| l == loc || !array.is_star(l));
        Ok(bit_symbol(last))
    }
}

struct AndOrBob(BlockPartition);

impl Bob for AndOrBob {
    fn decode(&self, array: &CellArray) -> Result<Vec<usize>> {
        if let Some(block) = self
            .0
            .blocks()
            .find(|b| b.clone().all(|l| array.bit(l) == Some(false)))
        {
            return Ok(block.collect());
        }
        Ok(array.positions_of(bit_symbol(true)))
    }
}

pub fn and_or_protocol(n: usize) -> Protocol {
    let part = BlockPartition::new(n);
    Protocol::new("and_or", n, 2, Arc::new(AndOrAlice(part.clone())))
        .with_flags(Flags {
            order_oblivious: true,
            assignment_oblivious: true,
        })
        .with_bob(Arc::new(AndOrBob(part)))
}
