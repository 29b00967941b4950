use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::cells::{CellArray, MAX_PACKED_LEN, STAR};
use super::graph::EdgeGraph;
use super::protocol::Protocol;
use super::run::checked_write;

/// Exhaustive-mode size limits.
///
/// The permutation sweep visits all `n!` orders (40 320 at `n = 8`); the state
/// traversal stores at most `3^n` packed partial arrays (about 531k at
/// `n = 12`); exact entropy buckets `2 * n!` runs (7.3M at `n = 10`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub sweep_max_n: usize,
    pub dfs_max_n: usize,
    pub entropy_max_n: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        sweep_max_n: 8,
        dfs_max_n: 12,
        entropy_max_n: 10,
    };
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

/// How to enumerate the edge set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMode {
    /// Every arrival order; works for any protocol.
    Sweep,
    /// Depth-first over reachable partial arrays; order-oblivious protocols only.
    StateDfs,
    /// State traversal when the protocol is declared order-oblivious, sweep otherwise.
    Auto,
}

pub fn enumerate_edge_graph(p: &Protocol, mode: EnumMode, limits: &Limits) -> Result<EdgeGraph> {
    let mode = match mode {
        EnumMode::Auto if p.flags().order_oblivious => EnumMode::StateDfs,
        EnumMode::Auto => EnumMode::Sweep,
        m => m,
    };
    match mode {
        EnumMode::Sweep => {
            let counts = edge_multiplicities(p, limits.sweep_max_n)?;
            Ok(EdgeGraph::from_packed(p.n(), p.alphabet(), counts.into_keys()))
        }
        EnumMode::StateDfs => {
            if !p.flags().order_oblivious {
                return Err(Error::NotOrderOblivious(format!(
                    "{} is not declared order-oblivious; state traversal refused",
                    p.name()
                )));
            }
            let edges = state_dfs_edges(p, limits.dfs_max_n)?;
            Ok(EdgeGraph::from_packed(p.n(), p.alphabet(), edges))
        }
        EnumMode::Auto => unreachable!(),
    }
}

fn check_size(p: &Protocol, what: &'static str, limit: usize) -> Result<()> {
    let n = p.n();
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let limit = limit.min(MAX_PACKED_LEN);
    if n > limit {
        return Err(Error::TooLarge { what, n, limit });
    }
    Ok(())
}

/// Number of permutations producing each edge (packed base), over all `n!`
/// orders. Parallel over the first arrival; the merge is order-independent.
pub fn edge_multiplicities(p: &Protocol, limit: usize) -> Result<BTreeMap<u64, u64>> {
    check_size(p, "permutation sweep", limit)?;
    let n = p.n();
    if n == 1 {
        return Ok(BTreeMap::from([(0u64, 1u64)]));
    }
    let partials: Vec<HashMap<u64, u64>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = HashMap::new();
            let mut array = CellArray::empty(n, p.alphabet());
            let mut history = Vec::with_capacity(n);
            let sym = checked_write(p, &history, &array, first)?;
            array.set(first, sym);
            history.push(first);
            sweep_rec(p, &mut history, &mut array, 1u32 << first, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut merged = BTreeMap::new();
    for part in partials {
        for (k, c) in part {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    Ok(merged)
}

fn sweep_rec(
    p: &Protocol,
    history: &mut Vec<usize>,
    array: &mut CellArray,
    used: u32,
    out: &mut HashMap<u64, u64>,
) -> Result<()> {
    let n = p.n();
    if history.len() == n - 1 {
        *out.entry(array.pack()).or_insert(0) += 1;
        return Ok(());
    }
    for loc in 0..n {
        if used & (1 << loc) != 0 {
            continue;
        }
        let sym = checked_write(p, history, array, loc)?;
        array.set(loc, sym);
        history.push(loc);
        sweep_rec(p, history, array, used | (1 << loc), out)?;
        history.pop();
        array.set(loc, STAR);
    }
    Ok(())
}

/// All reachable partial arrays (packed) of an order-oblivious protocol with
/// at most `n - 1` filled cells, including the empty array.
pub fn reachable_states(p: &Protocol, limit: usize) -> Result<HashSet<u64>> {
    check_size(p, "state traversal", limit)?;
    let n = p.n();
    let w = p.alphabet();
    let mut seen = HashSet::new();
    let mut stack = vec![0u64];
    seen.insert(0u64);
    while let Some(key) = stack.pop() {
        let array = CellArray::unpack(key, n, w);
        let history: Vec<usize> = array.filled().collect();
        if history.len() + 1 >= n {
            continue;
        }
        for loc in array.stars().collect::<Vec<_>>() {
            let sym = checked_write(p, &history, &array, loc)?;
            let next = super::graph::with_cell(key, loc, sym);
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    Ok(seen)
}

fn state_dfs_edges(p: &Protocol, limit: usize) -> Result<Vec<u64>> {
    let n = p.n();
    let states = reachable_states(p, limit)?;
    Ok(states
        .into_iter()
        .filter(|&k| (0..n).filter(|&i| (k >> (4 * i)) & 0xf != 0).count() == n - 1)
        .collect())
}
