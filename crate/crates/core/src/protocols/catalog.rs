//! Named protocol configurations, buildable from serialized parameters.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::Protocol;

use super::and_or::and_or_protocol;
use super::block_code::{BlockCodeParams, BlockCodeProtocol};
use super::iterated::{IteratedParams, IteratedProtocol};
use super::syndrome::{syndrome_protocol, SyndromeParams};
use super::zeros::zeros_protocol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum ProtocolConfig {
    AndOr { n: usize },
    Zeros { n: usize },
    Syndrome(SyndromeParams),
    Iterated(IteratedParams),
    BlockCode(BlockCodeParams),
}

impl ProtocolConfig {
    pub fn n(&self) -> usize {
        match self {
            ProtocolConfig::AndOr { n } | ProtocolConfig::Zeros { n } => *n,
            ProtocolConfig::Syndrome(p) => p.n,
            ProtocolConfig::Iterated(p) => p.n,
            ProtocolConfig::BlockCode(p) => p.n,
        }
    }

    pub fn build(&self) -> Result<Protocol> {
        match self {
            ProtocolConfig::AndOr { n } => Ok(and_or_protocol(*n)),
            ProtocolConfig::Zeros { n } => Ok(zeros_protocol(*n)),
            ProtocolConfig::Syndrome(p) => syndrome_protocol(*p),
            ProtocolConfig::Iterated(p) => Ok(IteratedProtocol::build(p.clone())?.protocol()),
            ProtocolConfig::BlockCode(p) => Ok(BlockCodeProtocol::build(p.clone())?.protocol()),
        }
    }
}

/// Every catalog protocol that can be built at size `n` with default parameters.
/// The block-code protocol appears when `n` is a perfect square (`theta = 1`).
pub fn catalog(n: usize) -> Vec<ProtocolConfig> {
    let mut out = vec![ProtocolConfig::AndOr { n }, ProtocolConfig::Zeros { n }];
    let syn = SyndromeParams::with_default_tail(n);
    if syn.validate().is_ok() {
        out.push(ProtocolConfig::Syndrome(syn));
    }
    out.push(ProtocolConfig::Iterated(IteratedParams::new(n, 0)));
    out.push(ProtocolConfig::Iterated(IteratedParams::new(n, 1)));
    let block = BlockCodeParams {
        theta: 1.0,
        ..BlockCodeParams::new(n)
    };
    if block.k() * block.k() == n {
        out.push(ProtocolConfig::BlockCode(block));
    }
    out
}
