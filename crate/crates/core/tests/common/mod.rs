//! Independent oracles shared by the integration tests. Nothing here calls the
//! crate's enumeration or metric code; only the strategies themselves.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use streamgame::{CellArray, Protocol, STAR};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Plays the first `n - 1` arrivals and returns the rendered edge.
pub fn play_edge(p: &Protocol, sigma: &[usize]) -> String {
    let n = sigma.len();
    let mut a = CellArray::empty(n, p.alphabet());
    for i in 0..n - 1 {
        let s = p.alice().write(&sigma[..i], &a, sigma[i]).unwrap();
        assert!(s != STAR && s <= p.alphabet());
        a.set(sigma[i], s);
    }
    a.render()
}

/// Edge set by brute force over every arrival order.
pub fn sweep_edges(p: &Protocol) -> BTreeSet<String> {
    permutations(p.n()).iter().map(|s| play_edge(p, s)).collect()
}

/// Symbols as rendered for alphabet `w`.
pub fn symbols(w: u8) -> Vec<char> {
    if w == 2 {
        vec!['0', '1']
    } else {
        (1..=w).map(|s| char::from(b'0' + s)).collect()
    }
}

/// Vertex degrees of an edge set given as rendered strings.
pub fn degrees(edges: &BTreeSet<String>, w: u8) -> HashMap<String, usize> {
    let mut d = HashMap::new();
    for e in edges {
        for c in symbols(w) {
            *d.entry(e.replacen('*', &c.to_string(), 1)).or_insert(0) += 1;
        }
    }
    d
}

pub fn max_degree(edges: &BTreeSet<String>, w: u8) -> usize {
    degrees(edges, w).values().copied().max().unwrap_or(0)
}

/// Whether an order-oblivious protocol can write `edge` (one star): searches
/// arrival orders, extending only with cells whose written symbol matches.
/// Reached filled sets are memoized, which is sound for order-oblivious
/// strategies since the array is then a function of the set.
pub fn edge_realizable(p: &Protocol, edge: &str) -> bool {
    let target = CellArray::parse(edge, p.alphabet()).unwrap();
    let n = target.len();
    let free = target.stars().next().unwrap();
    let goal: u32 = ((1u32 << n) - 1) & !(1 << free);
    let mut seen = HashSet::new();
    let mut stack = vec![0u32];
    while let Some(set) = stack.pop() {
        if set == goal {
            return true;
        }
        let mut a = CellArray::empty(n, p.alphabet());
        let history: Vec<usize> = (0..n).filter(|l| set >> l & 1 == 1).collect();
        for &l in &history {
            a.set(l, target.get(l));
        }
        for l in 0..n {
            if l == free || set >> l & 1 == 1 {
                continue;
            }
            if p.alice().write(&history, &a, l).unwrap() == target.get(l) {
                let next = set | 1 << l;
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    false
}

/// Degree of a complete binary vertex by membership queries.
pub fn degree_by_membership(p: &Protocol, vertex: &str) -> usize {
    (0..vertex.len())
        .filter(|&l| {
            let mut e: Vec<char> = vertex.chars().collect();
            e[l] = '*';
            edge_realizable(p, &e.into_iter().collect::<String>())
        })
        .count()
}

/// `H(last | final array)` in bits from a straight count of every run.
pub fn entropy_by_recount(p: &Protocol) -> f64 {
    let n = p.n();
    let mut joint: HashMap<(String, usize), u64> = HashMap::new();
    let mut total = 0u64;
    for sigma in permutations(n) {
        let edge = play_edge(p, &sigma);
        for c in symbols(p.alphabet()) {
            let v = edge.replacen('*', &c.to_string(), 1);
            *joint.entry((v, sigma[n - 1])).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut marginal: HashMap<&str, u64> = HashMap::new();
    for ((v, _), c) in &joint {
        *marginal.entry(v.as_str()).or_insert(0) += c;
    }
    joint
        .iter()
        .map(|((v, _), &c)| {
            let pj = c as f64 / total as f64;
            let pv = marginal[v.as_str()] as f64 / total as f64;
            -pj * (pj / pv).log2()
        })
        .sum()
}

/// Length of a longest common subsequence.
pub fn lcs(a: &[bool], b: &[bool]) -> usize {
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..a.len() {
        for j in 0..b.len() {
            dp[i + 1][j + 1] = if a[i] == b[j] {
                dp[i][j] + 1
            } else {
                dp[i][j + 1].max(dp[i + 1][j])
            };
        }
    }
    dp[a.len()][b.len()]
}

/// Möbius coefficients of a truth table, computed by the subset sum formula.
pub fn mobius(table: &[bool]) -> Vec<i64> {
    (0..table.len())
        .map(|s| {
            let mut c = 0i64;
            let mut t = s;
            loop {
                let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 { 1 } else { -1 };
                c += sign * i64::from(table[t]);
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            c
        })
        .collect()
}

pub fn scan_sensitivity(table: &[bool], n: usize) -> usize {
    (0..table.len())
        .map(|x| (0..n).filter(|i| table[x] != table[x ^ (1 << i)]).count())
        .max()
        .unwrap_or(0)
}
