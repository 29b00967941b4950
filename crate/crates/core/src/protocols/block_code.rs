//! The proper-code block protocol.
//!
//! With `k` the least integer such that `k^2 >= theta * n`, Alice writes 0 on
//! the first `n - k^2` arrivals. The `k^2` open locations form `S`, split in
//! sorted order into `k` blocks of `k`. A tail location receives its bit of
//! `x_S`, flipped when it is the last of its block to arrive. Bob decodes `S`
//! from the nearest codeword, then reports a block that agrees with `x_S`
//! everywhere, or else the set of disagreements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::proper::{build_proper_code_with, ProperCode, ProperParams};
use crate::error::{Error, Result};
use crate::game::{bit_symbol, Alice, Bob, CellArray, Protocol, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCodeParams {
    pub n: usize,
    /// Fraction of `n` the tail must cover, in `(0, 1]`.
    pub theta: f64,
    pub seed: u64,
    /// Candidate words tried per support.
    pub retries: usize,
}

impl BlockCodeParams {
    pub fn new(n: usize) -> Self {
        BlockCodeParams {
            n,
            theta: 0.8,
            seed: 0,
            retries: 200,
        }
    }

    /// Least `k` with `k^2 >= theta * n`.
    pub fn k(&self) -> usize {
        let target = self.theta * self.n as f64;
        let mut k = 0usize;
        while ((k * k) as f64) < target - 1e-9 {
            k += 1;
        }
        k
    }

    pub fn validate(&self) -> Result<usize> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta {} outside (0, 1]",
                self.theta
            )));
        }
        let k = self.k();
        if k == 0 || k * k > self.n {
            return Err(Error::InvalidParameter(format!(
                "k = {k} gives k^2 = {} outside 1..=n = {}",
                k * k,
                self.n
            )));
        }
        Ok(k)
    }
}

#[derive(Debug)]
pub struct BlockCodeProtocol {
    params: BlockCodeParams,
    k: usize,
    code: ProperCode,
}

impl BlockCodeProtocol {
    /// Builds the code with target distance `2k + 1`. A relaxed code is kept
    /// and reported; decoding may then fail on some runs.
    pub fn build(params: BlockCodeParams) -> Result<Self> {
        let k = params.validate()?;
        let code = build_proper_code_with(
            ProperParams {
                n: params.n,
                m: k * k,
                target_d: 2 * k + 1,
                retries: params.retries,
                min_d: 1,
            },
            params.seed,
        )?;
        if !code.is_materialized() {
            return Err(Error::TooLarge {
                what: "block-code support count",
                n: params.n,
                limit: params.n,
            });
        }
        Ok(BlockCodeProtocol { params, k, code })
    }

    pub fn params(&self) -> &BlockCodeParams {
        &self.params
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn code(&self) -> &ProperCode {
        &self.code
    }

    /// Whether the code meets `d >= 2k + 1` (vacuously true for one support).
    pub fn distance_met(&self) -> bool {
        self.code.d_achieved().is_none_or(|d| d > 2 * self.k)
    }

    /// `k / sqrt(n)`.
    pub fn ratio(&self) -> f64 {
        self.k as f64 / (self.params.n as f64).sqrt()
    }

    pub fn protocol(self) -> Protocol {
        let shared = Arc::new(self);
        Protocol::new(
            "block_code",
            shared.params.n,
            2,
            Arc::new(BlockAlice(shared.clone())),
        )
        .with_bob(Arc::new(BlockBob(shared)))
    }
}

struct BlockAlice(Arc<BlockCodeProtocol>);

impl Alice for BlockAlice {
    fn write(&self, history: &[usize], _array: &CellArray, loc: usize) -> Result<Symbol> {
        let n = self.0.params.n;
        let k = self.0.k;
        let prefix = n - k * k;
        if history.len() < prefix {
            return Ok(bit_symbol(false));
        }
        let mut opened = vec![true; n];
        for &l in &history[..prefix] {
            opened[l] = false;
        }
        let s: Vec<usize> = (0..n).filter(|&l| opened[l]).collect();
        let word = self.0.code.word_for(&s)?;
        let rank = s
            .binary_search(&loc)
            .map_err(|_| Error::Contract(format!("location {} outside the tail", loc + 1)))?;
        let block = &s[rank / k * k..(rank / k + 1) * k];
        let mut arrived = vec![false; n];
        for &l in history {
            arrived[l] = true;
        }
        let last = block.iter().all(|&l| l == loc || arrived[l]);
        Ok(bit_symbol((word >> loc & 1 == 1) != last))
    }
}

struct BlockBob(Arc<BlockCodeProtocol>);

impl Bob for BlockBob {
    fn decode(&self, v: &CellArray) -> Result<Vec<usize>> {
        let k = self.0.k;
        let word = (0..v.len())
            .filter(|&l| v.bit(l) == Some(true))
            .fold(0u64, |acc, l| acc | 1 << l);
        let (s, _) = self.0.code.nearest_codeword(word)?;
        let x = self.0.code.word_for(&s)?;
        let mut disagreements = Vec::new();
        for block in s.chunks(k) {
            let diff: Vec<usize> = block
                .iter()
                .copied()
                .filter(|&l| (word ^ x) >> l & 1 == 1)
                .collect();
            if diff.is_empty() {
                return Ok(block.to_vec());
            }
            disagreements.extend(diff);
        }
        Ok(disagreements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_is_least_with_square_covering() {
        let p = BlockCodeParams::new(26);
        assert_eq!(p.k(), 5);
        assert_eq!(BlockCodeParams { theta: 1.0, ..BlockCodeParams::new(16) }.k(), 4);
        assert_eq!(BlockCodeParams::new(80).k(), 8);
    }

    #[test]
    fn rejects_bad_theta() {
        let p = BlockCodeParams {
            theta: 0.0,
            ..BlockCodeParams::new(10)
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn full_square_has_one_codeword() {
        let p = BlockCodeProtocol::build(BlockCodeParams {
            theta: 1.0,
            ..BlockCodeParams::new(9)
        })
        .unwrap();
        assert_eq!(p.code().size(), 1);
        assert!(p.distance_met());
    }
}
