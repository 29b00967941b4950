//! Monotonicity under the extension order and the lower-bound witness for
//! monotone protocols.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    alice_edge, bit_symbol, checked_write, enumerate_edge_graph, reachable_states, CellArray,
    EnumMode, Limits, Protocol, STAR,
};

use super::witness::{WitnessKind, WitnessReport, WitnessVertex};

/// Largest `n` accepted by the monotonicity check and the witness search.
pub const MONOTONE_MAX_N: usize = 9;

/// Moves element `k` to the end, keeping the relative order of the rest.
pub fn bump(sigma: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = sigma.iter().copied().filter(|&x| x != k).collect();
    if out.len() < sigma.len() {
        out.push(k);
    }
    out
}

/// A triple showing that some write rule decreases under extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneViolation {
    pub alpha: String,
    pub beta: String,
    /// 1-based.
    pub location: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneCheck {
    pub monotone: bool,
    /// Reachable partial arrays on which Alice writes.
    pub states: usize,
    /// Comparable reachable pairs `alpha < beta` that were checked.
    pub pairs: usize,
    pub counterexample: Option<MonotoneViolation>,
}

fn require_monotone_input(p: &Protocol) -> Result<()> {
    if !p.flags().order_oblivious {
        return Err(Error::NotOrderOblivious(format!(
            "{} is not declared order-oblivious",
            p.name()
        )));
    }
    if p.alphabet() != 2 {
        return Err(Error::InvalidParameter(format!(
            "monotonicity is defined here for binary protocols, got alphabet {}",
            p.alphabet()
        )));
    }
    if p.n() > MONOTONE_MAX_N {
        return Err(Error::TooLarge {
            what: "monotonicity check",
            n: p.n(),
            limit: MONOTONE_MAX_N,
        });
    }
    Ok(())
}

/// Checks `A_l(alpha) <= A_l(beta)` for every pair of reachable partial arrays
/// with `beta` extending `alpha` and every location empty in both.
///
/// Restricting to reachable arrays loses nothing: a binary rule that is
/// monotone on the reachable arrays extends monotonically to all of them
/// (set it to 1 exactly above some reachable 1).
pub fn check_monotone(p: &Protocol) -> Result<MonotoneCheck> {
    require_monotone_input(p)?;
    let n = p.n();
    let mut writes: BTreeMap<u64, u32> = BTreeMap::new();
    for key in reachable_states(p, MONOTONE_MAX_N)? {
        let array = CellArray::unpack(key, n, 2);
        let history: Vec<usize> = array.filled().collect();
        if history.len() + 2 > n {
            continue;
        }
        let mut ones = 0u32;
        for loc in array.stars() {
            if checked_write(p, &history, &array, loc)? == bit_symbol(true) {
                ones |= 1 << loc;
            }
        }
        writes.insert(key, ones);
    }
    let mut pairs = 0usize;
    for (&beta, &beta_ones) in &writes {
        let filled: Vec<usize> = (0..n).filter(|&l| beta >> (4 * l) & 0xf != 0).collect();
        for mask in 0..(1u32 << filled.len()) - 1 {
            let alpha = filled
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 0)
                .fold(beta, |acc, (_, &l)| acc & !(0xfu64 << (4 * l)));
            let Some(&alpha_ones) = writes.get(&alpha) else {
                continue;
            };
            pairs += 1;
            let bad = alpha_ones & !beta_ones & star_mask(beta, n);
            if bad != 0 {
                return Ok(MonotoneCheck {
                    monotone: false,
                    states: writes.len(),
                    pairs,
                    counterexample: Some(MonotoneViolation {
                        alpha: CellArray::unpack(alpha, n, 2).render(),
                        beta: CellArray::unpack(beta, n, 2).render(),
                        location: bad.trailing_zeros() as usize + 1,
                    }),
                });
            }
        }
    }
    Ok(MonotoneCheck {
        monotone: true,
        states: writes.len(),
        pairs,
        counterexample: None,
    })
}

fn star_mask(key: u64, n: usize) -> u32 {
    (0..n)
        .filter(|&l| key >> (4 * l) & 0xf == u64::from(STAR))
        .fold(0, |acc, l| acc | 1 << l)
}

/// `w(sigma)`: the bits Alice wrote, listed in arrival order (length `n - 1`).
pub fn arrival_word(p: &Protocol, sigma: &[usize]) -> Result<Vec<bool>> {
    let edge = alice_edge(p, sigma)?;
    Ok(sigma[..sigma.len().saturating_sub(1)]
        .iter()
        .map(|&l| edge.bit(l) == Some(true))
        .collect())
}

/// An arrival order whose word `w(sigma)` is lexicographically least.
///
/// Exact for order-oblivious protocols: all partial arrays reachable with the
/// least prefix are kept level by level, so the search never commits early.
pub fn lex_min_order(p: &Protocol) -> Result<(Vec<usize>, Vec<bool>)> {
    let n = p.n();
    let mut levels: Vec<BTreeMap<u64, (u64, usize)>> = vec![BTreeMap::from([(0, (0, n))])];
    let mut word = Vec::with_capacity(n.saturating_sub(1));
    for _ in 0..n.saturating_sub(1) {
        let frontier = levels.last().expect("nonempty");
        let mut moves = Vec::new();
        for &key in frontier.keys() {
            let array = CellArray::unpack(key, n, 2);
            let history: Vec<usize> = array.filled().collect();
            for loc in array.stars() {
                let sym = checked_write(p, &history, &array, loc)?;
                moves.push((key, loc, sym));
            }
        }
        let best = moves.iter().map(|m| m.2).min().expect("a free cell");
        let mut next = BTreeMap::new();
        for (key, loc, sym) in moves.into_iter().filter(|m| m.2 == best) {
            let child = key | u64::from(sym) << (4 * loc);
            next.entry(child).or_insert((key, loc));
        }
        word.push(best == bit_symbol(true));
        levels.push(next);
    }
    let mut key = *levels.last().and_then(|l| l.keys().next()).expect("nonempty");
    let mut sigma = Vec::with_capacity(n);
    for level in levels.iter().skip(1).rev() {
        let (parent, loc) = level[&key];
        sigma.push(loc);
        key = parent;
    }
    sigma.reverse();
    let last = (0..n).find(|l| !sigma.contains(l)).expect("one location left");
    sigma.push(last);
    Ok((sigma, word))
}

/// Builds the two high-degree vertices of the monotone lower bound and checks
/// their degrees in the enumerated edge graph.
///
/// With `sigma` minimizing `w(sigma)`, the word is `0^(n-t) 1^(t-1)`. The
/// indicator `x` of the last `t` arrivals `T` lies on an edge in every
/// direction of `T`. Bumping each of the first `n - t` elements to the end
/// leaves at most one 0 after the leading zeros; grouping by its position
/// gives a vertex `y = T - {u}` lying on edges in `max |S_j|` directions.
pub fn monotone_witness(p: &Protocol) -> Result<WitnessReport> {
    let check = check_monotone(p)?;
    if let Some(v) = check.counterexample {
        return Err(Error::NotMonotone(format!(
            "A_{}({}) = 1 but A_{}({}) = 0",
            v.location, v.alpha, v.location, v.beta
        )));
    }
    let n = p.n();
    let (sigma, w) = lex_min_order(p)?;
    let zeros = w.iter().take_while(|&&b| !b).count();
    if w[zeros..].iter().any(|&b| !b) {
        return Err(Error::Contract(format!(
            "least word {} is not a block of 0s followed by 1s",
            render_word(&w)
        )));
    }
    let t = n - zeros;
    let tail = &sigma[n - t..];

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &k in &sigma[..n - t] {
        let tau = bump(&sigma, k);
        let wk = arrival_word(p, &tau)?;
        let lead_ok = wk[..n - t - 1].iter().all(|&b| !b);
        let late_zeros: Vec<usize> = (n - t - 1..n - 1).filter(|&i| !wk[i]).collect();
        if !lead_ok || late_zeros.len() > 1 {
            return Err(Error::Contract(format!(
                "bumped word {} breaks the monotone shape",
                render_word(&wk)
            )));
        }
        // 1-based position of the late zero, or n when there is none.
        let j = late_zeros.first().map_or(n, |&i| i + 1);
        groups.entry(j).or_default().push(k);
    }

    let x = indicator(n, tail);
    let (j_star, members) = groups
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
        .map(|(&j, m)| (j, m.len()))
        .unwrap_or((n, 0));
    let y_set: Vec<usize> = if j_star == n {
        tail.to_vec()
    } else {
        let u = sigma[j_star];
        tail.iter().copied().filter(|&l| l != u).collect()
    };
    let y = indicator(n, &y_set);

    let g = enumerate_edge_graph(p, EnumMode::Auto, &Limits::DEFAULT)?;
    let dx = g.degree(&x);
    let dy = g.degree(&y);
    let bound = (n as f64).sqrt().floor() as usize;
    let achieved = dx.max(dy);
    Ok(WitnessReport {
        protocol: p.name().to_string(),
        kind: WitnessKind::Monotone,
        n,
        sigma: sigma.iter().map(|l| l + 1).collect(),
        vertices: vec![
            WitnessVertex {
                label: "x".into(),
                vertex: x.render(),
                degree: dx,
                claimed: t,
            },
            WitnessVertex {
                label: "y".into(),
                vertex: y.render(),
                degree: dy,
                claimed: members,
            },
        ],
        collisions: None,
        bound,
        achieved,
        verified: dx >= t && dy >= members && achieved >= bound,
        degree_source: "edge_graph".into(),
        w: Some(render_word(&w)),
        t: Some(t),
        j_star: Some(j_star),
        halving: None,
    })
}

fn indicator(n: usize, ones: &[usize]) -> CellArray {
    let mut v = CellArray::from_bits(&vec![false; n]);
    for &l in ones {
        v.set(l, bit_symbol(true));
    }
    v
}

fn render_word(w: &[bool]) -> String {
    w.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{and_or_protocol, zeros_protocol};

    #[test]
    fn bump_example() {
        assert_eq!(bump(&[3, 2, 1, 6, 5, 4], 1), vec![3, 2, 6, 5, 4, 1]);
    }

    #[test]
    fn zeros_writer_is_monotone() {
        let c = check_monotone(&zeros_protocol(5)).unwrap();
        assert!(c.monotone);
        let r = monotone_witness(&zeros_protocol(5)).unwrap();
        assert_eq!(r.t, Some(1));
        assert_eq!(r.vertices[1].vertex, "00000");
        assert_eq!(r.achieved, 5);
    }

    #[test]
    fn and_or_witness_small() {
        let r = monotone_witness(&and_or_protocol(4)).unwrap();
        assert!(r.verified);
        assert!(r.achieved >= 2);
    }
}
