//! The collision witness for assignment-oblivious protocols.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    alice_edge, bit_symbol, checked_write, enumerate_edge_graph, CellArray, EnumMode,
    HypercubeEdge, Limits, Protocol, MAX_PACKED_LEN,
};
use crate::protocols::ceil_log2;

use super::witness::{WitnessKind, WitnessReport, WitnessVertex};

/// Exchanges the positions of element `k` and the last element.
pub fn swap(sigma: &[usize], k: usize) -> Vec<usize> {
    let mut out = sigma.to_vec();
    if let (Some(i), Some(last)) = (out.iter().position(|&x| x == k), out.len().checked_sub(1)) {
        out.swap(i, last);
    }
    out
}

/// One halving step; all locations 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingStep {
    /// The element fixed at position `n - i`.
    pub fixed: usize,
    /// Candidates for the last arrival that make Alice write 1 on `fixed`.
    pub r: Vec<usize>,
    /// The surviving candidates (the larger side).
    pub t: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingTrace {
    pub steps: Vec<HalvingStep>,
}

/// The bit Alice writes on `loc` when exactly `prior` arrived before it.
/// Replays `prior` in ascending order so the strategy sees a consistent array.
pub fn written_after_set(p: &Protocol, prior: &[usize], loc: usize) -> Result<bool> {
    let mut array = CellArray::empty(p.n(), p.alphabet());
    let mut sorted = prior.to_vec();
    sorted.sort_unstable();
    for i in 0..sorted.len() {
        let sym = checked_write(p, &sorted[..i], &array, sorted[i])?;
        array.set(sorted[i], sym);
    }
    Ok(checked_write(p, &sorted, &array, loc)? == bit_symbol(true))
}

/// Fixes the suffix of `sigma` from the back, each time keeping the larger
/// half of the remaining last-arrival candidates, then checks which swaps
/// with the last arrival yield colliding edges.
pub fn assignment_oblivious_witness(p: &Protocol) -> Result<WitnessReport> {
    if !p.flags().assignment_oblivious {
        return Err(Error::NotAssignmentOblivious(format!(
            "{} is not declared assignment-oblivious",
            p.name()
        )));
    }
    let n = p.n();
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > MAX_PACKED_LEN {
        return Err(Error::TooLarge {
            what: "assignment witness",
            n,
            limit: MAX_PACKED_LEN,
        });
    }

    let mut suffix = Vec::new();
    let mut candidates: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    while candidates.len() > 1 {
        let fixed = candidates[0];
        suffix.push(fixed);
        let rest: Vec<usize> = candidates[1..].to_vec();
        let mut r = Vec::new();
        for &c in &rest {
            let prior: Vec<usize> = (0..n).filter(|l| *l != c && !suffix.contains(l)).collect();
            if written_after_set(p, &prior, fixed)? {
                r.push(c);
            }
        }
        let complement: Vec<usize> = rest.iter().copied().filter(|c| !r.contains(c)).collect();
        candidates = if r.len() >= complement.len() { r.clone() } else { complement };
        steps.push(HalvingStep {
            fixed: fixed + 1,
            r: r.iter().map(|l| l + 1).collect(),
            t: candidates.iter().map(|l| l + 1).collect(),
        });
    }
    let last = candidates[0];
    let mut sigma: Vec<usize> = (0..n).filter(|l| *l != last && !suffix.contains(l)).collect();
    sigma.extend(suffix.iter().rev());
    sigma.push(last);

    let base = HypercubeEdge::new(alice_edge(p, &sigma)?)?;
    let mut colliding = vec![base.clone()];
    for &k in &suffix {
        let e = HypercubeEdge::new(alice_edge(p, &swap(&sigma, k))?)?;
        if base.collides(&e) {
            colliding.push(e);
        }
    }
    // Each colliding edge meets the base edge in the endpoint carrying its
    // value at the base's free cell.
    let endpoints = base.endpoints();
    let mut realized: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); endpoints.len()];
    for e in &colliding {
        for (i, v) in endpoints.iter().enumerate() {
            if e.contains(v) {
                realized[i].insert(e.free_location());
            }
        }
    }

    let exact = if n <= Limits::DEFAULT.sweep_max_n
        || (p.flags().order_oblivious && n <= Limits::DEFAULT.dfs_max_n)
    {
        Some(enumerate_edge_graph(p, EnumMode::Auto, &Limits::DEFAULT)?)
    } else {
        None
    };
    let bound = ceil_log2(n).div_ceil(2);
    let vertices: Vec<WitnessVertex> = endpoints
        .iter()
        .zip(&realized)
        .enumerate()
        .map(|(i, (v, dirs))| WitnessVertex {
            label: format!("endpoint_{}", crate::game::render_symbol(i as u8 + 1, p.alphabet())),
            vertex: v.render(),
            degree: exact.as_ref().map_or(dirs.len(), |g| g.degree(v)),
            claimed: dirs.len(),
        })
        .collect();
    let achieved = vertices.iter().map(|v| v.degree).max().unwrap_or(0);
    let verified = vertices.iter().all(|v| v.degree >= v.claimed) && achieved >= bound;
    Ok(WitnessReport {
        protocol: p.name().to_string(),
        kind: WitnessKind::Assignment,
        n,
        sigma: sigma.iter().map(|l| l + 1).collect(),
        vertices,
        collisions: Some(colliding.len()),
        bound,
        achieved,
        verified,
        degree_source: if exact.is_some() { "edge_graph" } else { "realized_edges" }.into(),
        w: None,
        t: None,
        j_star: None,
        halving: Some(HalvingTrace { steps }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{and_or_protocol, zeros_protocol};

    #[test]
    fn swap_example() {
        assert_eq!(swap(&[6, 5, 4, 3, 2, 1], 3), vec![6, 5, 4, 1, 2, 3]);
    }

    #[test]
    fn halving_sets_shrink() {
        let r = assignment_oblivious_witness(&and_or_protocol(8)).unwrap();
        let trace = r.halving.as_ref().unwrap();
        let mut prev: usize = 8;
        for s in &trace.steps {
            assert!(s.t.len() >= (prev - 1).div_ceil(2));
            assert!(s.t.len() < prev);
            prev = s.t.len();
        }
        assert!(trace.steps.len() >= 3);
        assert!(r.verified);
    }

    #[test]
    fn zeros_collide_everywhere() {
        let r = assignment_oblivious_witness(&zeros_protocol(8)).unwrap();
        assert_eq!(r.degree_source, "edge_graph");
        assert_eq!(r.achieved, 8);
    }
}
