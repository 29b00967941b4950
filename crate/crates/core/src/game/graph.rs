use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::cells::{CellArray, HypercubeEdge, Symbol, STAR};

/// The set of edges a protocol realises, with per-vertex degrees.
///
/// Arrays are stored packed (see [`CellArray::pack`]), so graphs are limited
/// to 16 cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    n: usize,
    w: u8,
    edges: BTreeSet<u64>,
    degree: BTreeMap<u64, usize>,
}

/// Summary written by `analyze`: `{n, w, edge_count, max_degree, degree_histogram}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeGraphReport {
    pub n: usize,
    pub w: u8,
    pub edge_count: usize,
    pub max_degree: usize,
    /// degree -> number of vertices with that degree (degree >= 1 only)
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl EdgeGraph {
    /// Builds the graph from packed edge bases.
    pub fn from_packed(n: usize, w: u8, edges: impl IntoIterator<Item = u64>) -> Self {
        let edges: BTreeSet<u64> = edges.into_iter().collect();
        let mut degree = BTreeMap::new();
        for &e in &edges {
            let free = free_of(e, n);
            for s in 1..=w {
                *degree.entry(e | (u64::from(s) << (4 * free))).or_insert(0) += 1;
            }
        }
        EdgeGraph {
            n,
            w,
            edges,
            degree,
        }
    }

    pub fn from_edges<'a>(
        n: usize,
        w: u8,
        edges: impl IntoIterator<Item = &'a HypercubeEdge>,
    ) -> Self {
        EdgeGraph::from_packed(n, w, edges.into_iter().map(|e| e.base().pack()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> u8 {
        self.w
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn packed_edges(&self) -> &BTreeSet<u64> {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = HypercubeEdge> + '_ {
        self.edges.iter().map(move |&e| {
            HypercubeEdge::new(CellArray::unpack(e, self.n, self.w))
                .expect("stored edge has one star")
        })
    }

    pub fn contains_edge(&self, base: &CellArray) -> bool {
        self.edges.contains(&base.pack())
    }

    /// Whether the edge `v` with location `loc` freed is present.
    pub fn contains_freed(&self, v: &CellArray, loc: usize) -> bool {
        let key = v.pack() & !(0xfu64 << (4 * loc));
        self.edges.contains(&key)
    }

    pub fn degree(&self, v: &CellArray) -> usize {
        self.degree.get(&v.pack()).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degree.values().copied().max().unwrap_or(0)
    }

    /// A vertex of maximum degree (smallest packed key among ties).
    pub fn max_degree_vertex(&self) -> Option<(CellArray, usize)> {
        let max = self.max_degree();
        self.degree
            .iter()
            .find(|(_, &d)| d == max)
            .map(|(&k, &d)| (CellArray::unpack(k, self.n, self.w), d))
    }

    pub fn vertices(&self) -> impl Iterator<Item = (CellArray, usize)> + '_ {
        self.degree
            .iter()
            .map(move |(&k, &d)| (CellArray::unpack(k, self.n, self.w), d))
    }

    pub fn is_subgraph_of(&self, other: &EdgeGraph) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for &d in self.degree.values() {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    pub fn report(&self) -> EdgeGraphReport {
        EdgeGraphReport {
            n: self.n,
            w: self.w,
            edge_count: self.edges.len(),
            max_degree: self.max_degree(),
            degree_histogram: self.degree_histogram(),
        }
    }

    /// Graphviz rendering: vertices are rendered arrays, edge labels are the
    /// 1-based free location. Edges of alphabets larger than two are drawn as
    /// a path through their endpoints.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph E {\n");
        for e in self.edges() {
            let ends = e.endpoints();
            for pair in ends.windows(2) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -- \"{}\" [label=\"{}\"];",
                    pair[0],
                    pair[1],
                    e.free_location() + 1
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn free_of(key: u64, n: usize) -> usize {
    (0..n)
        .find(|&i| (key >> (4 * i)) & 0xf == u64::from(STAR))
        .expect("edge key without a free cell")
}

/// Bob's best response: every location `l` such that freeing `l` in `v` gives
/// an edge of `g`. An empty result means `v` is not reachable as a protocol
/// output.
pub fn canonical_bob(g: &EdgeGraph, v: &CellArray) -> Vec<usize> {
    (0..v.len()).filter(|&l| g.contains_freed(v, l)).collect()
}

/// Packed key of `v` with cell `loc` set to `sym`.
pub(crate) fn with_cell(key: u64, loc: usize, sym: Symbol) -> u64 {
    (key & !(0xfu64 << (4 * loc))) | (u64::from(sym) << (4 * loc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_from_edges() {
        let e1 = HypercubeEdge::new(CellArray::parse("0*", 2).unwrap()).unwrap();
        let e2 = HypercubeEdge::new(CellArray::parse("*0", 2).unwrap()).unwrap();
        let g = EdgeGraph::from_edges(2, 2, [&e1, &e2]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(&CellArray::parse("00", 2).unwrap()), 2);
        assert_eq!(g.degree(&CellArray::parse("01", 2).unwrap()), 1);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(
            canonical_bob(&g, &CellArray::parse("00", 2).unwrap()),
            vec![0, 1]
        );
        assert!(canonical_bob(&g, &CellArray::parse("11", 2).unwrap()).is_empty());
        let hist = g.degree_histogram();
        assert_eq!(hist.get(&1), Some(&2));
        assert_eq!(hist.get(&2), Some(&1));
    }

    #[test]
    fn dot_uses_one_based_labels() {
        let e = HypercubeEdge::new(CellArray::parse("1*", 2).unwrap()).unwrap();
        let g = EdgeGraph::from_edges(2, 2, [&e]);
        assert_eq!(g.to_dot(), "graph E {\n  \"10\" -- \"11\" [label=\"2\"];\n}\n");
    }
}
