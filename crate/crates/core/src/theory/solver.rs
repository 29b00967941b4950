//! Exact minimum cost over all protocols for tiny `n`.
//!
//! Order-oblivious strategies suffice, so a strategy is a bit for every
//! reachable `(partial array, location)` pair. Reachable arrays are expanded
//! layer by layer in `(filled count, packed key)` order; each expansion
//! branches on the bits written at all its empty cells, and a branch dies as
//! soon as some vertex exceeds the degree budget.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{bit_symbol, CellArray};

pub const SOLVER_MAX_N: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverOutcome {
    pub n: usize,
    pub budget: usize,
    pub feasible: bool,
    /// Search nodes expanded.
    pub nodes: u64,
    /// Edges of a protocol meeting the budget, when one exists.
    pub edges: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinCostReport {
    pub n: usize,
    /// The least feasible budget.
    pub c: usize,
    /// Every budget tried, in the order tried.
    pub trials: Vec<SolverOutcome>,
}

struct Search {
    n: usize,
    budget: usize,
    pending: BTreeSet<(u32, u64)>,
    reached: HashMap<u64, u32>,
    edges: HashMap<u64, u32>,
    degree: HashMap<u64, usize>,
    nodes: u64,
}

enum Undo {
    Pending((u32, u64)),
    Reached(u64),
    Edge(u64),
}

fn filled(key: u64, n: usize) -> u32 {
    (0..n).filter(|&l| key >> (4 * l) & 0xf != 0).count() as u32
}

impl Search {
    fn run(&mut self) -> bool {
        let Some(&next) = self.pending.iter().next() else {
            return true;
        };
        self.pending.remove(&next);
        self.nodes += 1;
        let (_, key) = next;
        let stars: Vec<usize> = (0..self.n).filter(|&l| key >> (4 * l) & 0xf == 0).collect();
        for bits in 0..1u32 << stars.len() {
            let mut log = Vec::new();
            let ok = stars.iter().enumerate().all(|(i, &l)| {
                let sym = bit_symbol(bits >> i & 1 == 1);
                self.add_child(key | u64::from(sym) << (4 * l), &mut log)
            });
            if ok && self.run() {
                return true;
            }
            self.undo(log);
        }
        self.pending.insert(next);
        false
    }

    /// Records a child array; returns false when the budget is broken.
    fn add_child(&mut self, child: u64, log: &mut Vec<Undo>) -> bool {
        let f = filled(child, self.n) as usize;
        if f + 1 < self.n {
            let count = self.reached.entry(child).or_insert(0);
            *count += 1;
            log.push(Undo::Reached(child));
            if *count == 1 {
                self.pending.insert((f as u32, child));
                log.push(Undo::Pending((f as u32, child)));
            }
            return true;
        }
        let count = self.edges.entry(child).or_insert(0);
        *count += 1;
        log.push(Undo::Edge(child));
        if *count > 1 {
            return true;
        }
        let mut ok = true;
        for v in self.endpoints(child) {
            let d = self.degree.entry(v).or_insert(0);
            *d += 1;
            ok &= *d <= self.budget;
        }
        ok
    }

    fn endpoints(&self, edge: u64) -> [u64; 2] {
        let free = (0..self.n)
            .find(|&l| edge >> (4 * l) & 0xf == 0)
            .expect("edge has a free cell");
        [
            edge | u64::from(bit_symbol(false)) << (4 * free),
            edge | u64::from(bit_symbol(true)) << (4 * free),
        ]
    }

    fn undo(&mut self, log: Vec<Undo>) {
        for u in log.into_iter().rev() {
            match u {
                Undo::Pending(p) => {
                    self.pending.remove(&p);
                }
                Undo::Reached(k) => {
                    let c = self.reached.get_mut(&k).expect("logged");
                    *c -= 1;
                    if *c == 0 {
                        self.reached.remove(&k);
                    }
                }
                Undo::Edge(k) => {
                    let c = self.edges.get_mut(&k).expect("logged");
                    *c -= 1;
                    if *c == 0 {
                        self.edges.remove(&k);
                        for v in self.endpoints(k) {
                            let d = self.degree.get_mut(&v).expect("counted");
                            *d -= 1;
                        }
                    }
                }
            }
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > SOLVER_MAX_N {
        return Err(Error::TooLarge {
            what: "exact solver",
            n,
            limit: SOLVER_MAX_N,
        });
    }
    Ok(())
}

/// Whether some protocol on `n` cells has cost at most `budget`.
pub fn exact_c_solver(n: usize, budget: usize) -> Result<SolverOutcome> {
    check_n(n)?;
    if n == 1 {
        // The single edge is the free cell itself.
        return Ok(SolverOutcome {
            n,
            budget,
            feasible: budget >= 1,
            nodes: 0,
            edges: (budget >= 1).then(|| vec!["*".to_string()]),
        });
    }
    let mut s = Search {
        n,
        budget,
        pending: BTreeSet::from([(0, 0)]),
        reached: HashMap::from([(0, 1)]),
        edges: HashMap::new(),
        degree: HashMap::new(),
        nodes: 0,
    };
    let feasible = s.run();
    let edges = feasible.then(|| {
        let mut keys: Vec<u64> = s.edges.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|k| CellArray::unpack(k, n, 2).render())
            .collect()
    });
    Ok(SolverOutcome {
        n,
        budget,
        feasible,
        nodes: s.nodes,
        edges,
    })
}

/// The minimum cost `C(n)`, found by lowering the budget from `n` until it
/// becomes infeasible.
pub fn min_cost(n: usize) -> Result<MinCostReport> {
    check_n(n)?;
    let mut trials = Vec::new();
    let mut c = n;
    for budget in (1..=n).rev() {
        let out = exact_c_solver(n, budget)?;
        let feasible = out.feasible;
        trials.push(out);
        if !feasible {
            break;
        }
        c = budget;
    }
    Ok(MinCostReport { n, c, trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_values() {
        assert_eq!(min_cost(1).unwrap().c, 1);
        assert_eq!(min_cost(2).unwrap().c, 2);
        assert!(!exact_c_solver(2, 1).unwrap().feasible);
    }

    #[test]
    fn rejects_large() {
        assert!(exact_c_solver(5, 3).unwrap_err().is_size_rejection());
    }
}
