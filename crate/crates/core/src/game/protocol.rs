use std::fmt;
use std::sync::Arc;

use crate::error::Result;

use super::cells::{CellArray, Symbol};

/// Alice's deterministic streaming strategy.
///
/// `history` is the sequence of locations that arrived before `loc`, in arrival
/// order, and `array` is the partial array they produced. The return value is
/// the symbol written on `loc`. The final arrival is never passed here: the
/// runner writes the forced symbol itself.
///
/// Strategies declared order-oblivious must not look at the order of
/// `history`; the state-space enumerator passes it sorted ascending.
pub trait Alice: Send + Sync {
    fn write(&self, history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol>;
}

/// A protocol-specific decoder mapping a completed array to candidate locations.
pub trait Bob: Send + Sync {
    fn decode(&self, array: &CellArray) -> Result<Vec<usize>>;
}

impl<F> Alice for F
where
    F: Fn(&[usize], &CellArray, usize) -> Result<Symbol> + Send + Sync,
{
    fn write(&self, history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        self(history, array, loc)
    }
}

/// Declared structural properties of a strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// The written symbol depends only on the current array and the arriving location.
    pub order_oblivious: bool,
    /// The written symbol depends only on the set of earlier arrivals.
    pub assignment_oblivious: bool,
}

/// An Alice strategy together with an optional native decoder.
#[derive(Clone)]
pub struct Protocol {
    name: String,
    n: usize,
    w: u8,
    flags: Flags,
    alice: Arc<dyn Alice>,
    bob: Option<Arc<dyn Bob>>,
}

impl Protocol {
    pub fn new(name: impl Into<String>, n: usize, w: u8, alice: Arc<dyn Alice>) -> Self {
        Protocol {
            name: name.into(),
            n,
            w,
            flags: Flags::default(),
            alice,
            bob: None,
        }
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_bob(mut self, bob: Arc<dyn Bob>) -> Self {
        self.bob = Some(bob);
        self
    }

    /// Drops the native decoder so that metrics fall back to the canonical one.
    pub fn without_bob(mut self) -> Self {
        self.bob = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> u8 {
        self.w
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn alice(&self) -> &dyn Alice {
        self.alice.as_ref()
    }

    pub fn bob(&self) -> Option<&dyn Bob> {
        self.bob.as_deref()
    }
}

impl fmt::Debug for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Protocol")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("w", &self.w)
            .field("flags", &self.flags)
            .field("native_bob", &self.bob.is_some())
            .finish()
    }
}
