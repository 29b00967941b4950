use serde::Serialize;

use super::assignment::HalvingTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Monotone,
    Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessVertex {
    pub label: String,
    pub vertex: String,
    /// Degree confirmed against the edge set (see `degree_source`).
    pub degree: usize,
    /// Degree the construction promises.
    pub claimed: usize,
}

/// A concrete high-degree vertex certificate for one protocol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub protocol: String,
    pub kind: WitnessKind,
    pub n: usize,
    /// 1-based arrival order the construction starts from.
    pub sigma: Vec<usize>,
    pub vertices: Vec<WitnessVertex>,
    /// Edges found colliding with the base edge, itself included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collisions: Option<usize>,
    pub bound: usize,
    pub achieved: usize,
    pub verified: bool,
    /// `edge_graph` (exhaustive enumeration) or `realized_edges` (edges
    /// produced by explicit arrival orders, a lower bound on the degree).
    pub degree_source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_star: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halving: Option<HalvingTrace>,
}
