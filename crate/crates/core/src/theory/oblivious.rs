//! Order-obliviousness: verification, the lexicographic conversion, and
//! order-sensitive test strategies.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{bit_symbol, Alice, CellArray, Flags, Protocol, Symbol, MAX_PACKED_LEN, STAR};

/// Permutation-sweep size limit for the checks in this module.
pub const OBLIVIOUS_MAX_N: usize = 8;

/// Two arrival orders that reach the same `(array, location)` and write different symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObliviousnessViolation {
    pub array: String,
    /// 1-based.
    pub location: usize,
    pub first: Vec<usize>,
    pub first_symbol: u8,
    pub second: Vec<usize>,
    pub second_symbol: u8,
}

/// Checks that every reachable `(partial array, arriving location)` pair gets
/// the same symbol under every arrival order. `None` means the check passed.
pub fn verify_order_oblivious(p: &Protocol) -> Result<Option<ObliviousnessViolation>> {
    verify_by_key(p, |_history, array| array.pack())
}

/// Checks that the written symbol depends only on the set of earlier arrivals.
pub fn verify_assignment_oblivious(p: &Protocol) -> Result<Option<ObliviousnessViolation>> {
    verify_by_key(p, |history, _array| {
        history.iter().fold(0u64, |acc, &l| acc | 1 << l)
    })
}

fn verify_by_key(
    p: &Protocol,
    key: impl Fn(&[usize], &CellArray) -> u64,
) -> Result<Option<ObliviousnessViolation>> {
    let n = p.n();
    check_n(n)?;
    let mut seen: HashMap<(u64, usize), (Symbol, Vec<usize>)> = HashMap::new();
    let mut history = Vec::with_capacity(n);
    let mut array = CellArray::empty(n, p.alphabet());
    let mut found = None;
    sweep(p, &mut history, &mut array, &mut |history, array, loc, sym| {
        let k = (key(history, array), loc);
        match seen.get(&k) {
            Some((s, first)) if *s != sym => {
                found = Some(ObliviousnessViolation {
                    array: array.render(),
                    location: loc + 1,
                    first: first.iter().map(|l| l + 1).collect(),
                    first_symbol: *s,
                    second: history.iter().map(|l| l + 1).collect(),
                    second_symbol: sym,
                });
                false
            }
            Some(_) => true,
            None => {
                seen.insert(k, (sym, history.to_vec()));
                true
            }
        }
    })?;
    Ok(found)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > OBLIVIOUS_MAX_N {
        return Err(Error::TooLarge {
            what: "order sweep",
            n,
            limit: OBLIVIOUS_MAX_N,
        });
    }
    Ok(())
}

/// Visits every non-final step of every arrival order. The visitor returns
/// `false` to stop.
fn sweep(
    p: &Protocol,
    history: &mut Vec<usize>,
    array: &mut CellArray,
    visit: &mut impl FnMut(&[usize], &CellArray, usize, Symbol) -> bool,
) -> Result<bool> {
    let n = p.n();
    if history.len() + 1 >= n {
        return Ok(true);
    }
    for loc in 0..n {
        if !array.is_star(loc) {
            continue;
        }
        let sym = crate::game::checked_write(p, history, array, loc)?;
        if !visit(history, array, loc, sym) {
            return Ok(false);
        }
        array.set(loc, sym);
        history.push(loc);
        let go_on = sweep(p, history, array, visit)?;
        history.pop();
        array.set(loc, STAR);
        if !go_on {
            return Ok(false);
        }
    }
    Ok(true)
}

struct ConvertedAlice {
    inner: Protocol,
}

impl ConvertedAlice {
    /// Lexicographically smallest order of the filled cells under which the
    /// original strategy writes exactly the current array.
    fn smallest_order(&self, target: &CellArray) -> Option<Vec<usize>> {
        let filled: Vec<usize> = target.filled().collect();
        let mut order = Vec::with_capacity(filled.len());
        let mut array = CellArray::empty(target.len(), target.alphabet());
        self.search(target, &filled, &mut order, &mut array)
            .then_some(order)
    }

    fn search(
        &self,
        target: &CellArray,
        filled: &[usize],
        order: &mut Vec<usize>,
        array: &mut CellArray,
    ) -> bool {
        if order.len() == filled.len() {
            return true;
        }
        for &l in filled {
            if !array.is_star(l) {
                continue;
            }
            match self.inner.alice().write(order, array, l) {
                Ok(sym) if sym == target.get(l) => {}
                _ => continue,
            }
            array.set(l, target.get(l));
            order.push(l);
            if self.search(target, filled, order, array) {
                return true;
            }
            order.pop();
            array.set(l, STAR);
        }
        false
    }
}

impl Alice for ConvertedAlice {
    fn write(&self, _history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        let tau = self.smallest_order(array).ok_or_else(|| {
            Error::Contract(format!(
                "no arrival order of the filled cells reproduces {}",
                array.render()
            ))
        })?;
        self.inner.alice().write(&tau, array, loc)
    }
}

/// The order-oblivious protocol that, facing a partial array, replays the
/// lexicographically smallest order reproducing it and writes what the
/// original protocol would write after that order.
pub fn order_oblivious_convert(p: &Protocol) -> Result<Protocol> {
    let n = p.n();
    check_n(n)?;
    debug_assert!(n <= MAX_PACKED_LEN);
    Ok(Protocol::new(
        format!("{}_oblivious", p.name()),
        n,
        p.alphabet(),
        Arc::new(ConvertedAlice {
            inner: p.clone().without_bob(),
        }),
    )
    .with_flags(Flags {
        order_oblivious: true,
        assignment_oblivious: false,
    }))
}

/// Writes 1 exactly when the previous arrival has a smaller index.
pub fn previous_smaller_strategy(n: usize) -> Protocol {
    Protocol::new(
        "previous_smaller",
        n,
        2,
        Arc::new(|history: &[usize], _: &CellArray, loc: usize| {
            Ok(bit_symbol(history.last().is_some_and(|&prev| prev < loc)))
        }),
    )
}

/// A seeded pseudo-random strategy whose bit depends on the whole arrival
/// history, order included.
pub fn random_order_sensitive_strategy(n: usize, seed: u64) -> Protocol {
    Protocol::new(
        format!("order_sensitive_{seed}"),
        n,
        2,
        Arc::new(move |history: &[usize], _: &CellArray, loc: usize| {
            let mut h = splitmix(seed ^ 0x9e37_79b9_7f4a_7c15);
            for &l in history {
                h = splitmix(h ^ (l as u64 + 1));
            }
            h = splitmix(h ^ ((loc as u64 + 1) << 32));
            Ok(bit_symbol(h & 1 == 1))
        }),
    )
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
