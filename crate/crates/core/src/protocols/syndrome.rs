//! The low-entropy syndrome protocol.
//!
//! Alice writes 0 on the first `n - t` arrivals. Every later arrival copies its
//! cell from the canonical completion of the current array, which stays the
//! same completion for the rest of the run. If the forced bit disagrees with
//! that completion, the final array's syndrome names the last arrival.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::binomial;
use crate::codes::syndrome::{canonical_completion, gamma, index_bits};
use crate::error::{Error, Result};
use crate::game::{bit_symbol, Alice, Bob, CellArray, Flags, Protocol, Symbol, STAR};

/// Subsets enumerated by the native decoder before it gives up on pruning.
const DECODER_SUBSET_CAP: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeParams {
    pub n: usize,
    /// Number of arrivals filled from the completion (the tail).
    pub t: usize,
}

/// `ceil(log2 n)`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl SyndromeParams {
    /// Tail length `min(ceil(log2 n)^2, n - 1)`.
    pub fn with_default_tail(n: usize) -> Self {
        let k = ceil_log2(n);
        SyndromeParams {
            n,
            t: (k * k).min(n.saturating_sub(1)),
        }
    }

    pub fn k(&self) -> usize {
        ceil_log2(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if self.t <= k {
            return Err(Error::InvalidParameter(format!(
                "syndrome tail t={} must exceed ceil(log2 n)={k}",
                self.t
            )));
        }
        if self.t > self.n {
            return Err(Error::InvalidParameter(format!(
                "syndrome tail t={} exceeds n={}",
                self.t, self.n
            )));
        }
        Ok(())
    }
}

struct SyndromeAlice {
    prefix: usize,
}

impl Alice for SyndromeAlice {
    fn write(&self, _history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        if array.filled_count() < self.prefix {
            return Ok(bit_symbol(false));
        }
        Ok(canonical_completion(array)?.output.get(loc))
    }
}

struct SyndromeBob {
    params: SyndromeParams,
}

impl Bob for SyndromeBob {
    /// A nonzero syndrome is the index vector of the last arrival. A zero
    /// syndrome means the forced bit matched the completion: the last arrival
    /// is a 1, or a 0 that some consistent tail set puts in its zero set.
    fn decode(&self, v: &CellArray) -> Result<Vec<usize>> {
        let n = self.params.n;
        let s = gamma(v) as usize;
        if s != 0 {
            return Ok(if s <= n { vec![s - 1] } else { (0..n).collect() });
        }
        let ones = v.positions_of(bit_symbol(true));
        let zeros = v.positions_of(bit_symbol(false));
        let mut out = ones.clone();
        let Some(extra) = self.params.t.checked_sub(ones.len()) else {
            return Ok(out);
        };
        if extra == 0 || extra > index_bits(n) || extra > zeros.len() {
            return Ok(out);
        }
        if binomial(zeros.len(), extra) > DECODER_SUBSET_CAP {
            out.extend(zeros);
            return Ok(out);
        }
        let mut hit = vec![false; zeros.len()];
        for_each_subset(zeros.len(), extra, |idx| {
            let mut w = CellArray::from_cells(2, vec![bit_symbol(false); n]).expect("binary");
            for &l in &ones {
                w.set(l, STAR);
            }
            for &i in idx {
                w.set(zeros[i], STAR);
            }
            if let Ok(c) = canonical_completion(&w) {
                if c.zero_set.len() == extra && idx.iter().all(|&i| c.zero_set.contains(&zeros[i])) {
                    for &i in idx {
                        hit[i] = true;
                    }
                }
            }
        });
        out.extend(zeros.iter().zip(&hit).filter(|(_, &h)| h).map(|(&z, _)| z));
        Ok(out)
    }
}

fn for_each_subset(m: usize, size: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + m - size {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn syndrome_protocol(params: SyndromeParams) -> Result<Protocol> {
    params.validate()?;
    Ok(Protocol::new(
        "syndrome",
        params.n,
        2,
        Arc::new(SyndromeAlice {
            prefix: params.n - params.t,
        }),
    )
    .with_flags(Flags {
        order_oblivious: true,
        assignment_oblivious: false,
    })
    .with_bob(Arc::new(SyndromeBob { params })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_protocol, Permutation};

    #[test]
    fn default_tail() {
        assert_eq!(SyndromeParams::with_default_tail(4).t, 3);
        assert_eq!(SyndromeParams::with_default_tail(8).t, 7);
        assert_eq!(SyndromeParams::with_default_tail(16).t, 15);
        assert_eq!(SyndromeParams::with_default_tail(64).t, 36);
    }

    #[test]
    fn rejects_short_tail() {
        assert!(syndrome_protocol(SyndromeParams { n: 8, t: 3 }).is_err());
        assert!(syndrome_protocol(SyndromeParams { n: 8, t: 9 }).is_err());
        assert!(syndrome_protocol(SyndromeParams::with_default_tail(3)).is_err());
    }

    #[test]
    fn worked_example() {
        let p = syndrome_protocol(SyndromeParams { n: 4, t: 3 }).unwrap();
        let sigma = Permutation::from_one_based(&[4, 1, 2, 3]).unwrap();
        let r = run_protocol(&p, &sigma, bit_symbol(false)).unwrap();
        assert_eq!(r.final_array.render(), "1100");
        assert_eq!(gamma(&r.final_array), 3);
        assert_eq!(r.bob_output, Some(vec![2]));

        let r = run_protocol(&p, &sigma, bit_symbol(true)).unwrap();
        assert_eq!(r.final_array.render(), "1110");
        assert_eq!(gamma(&r.final_array), 0);
        assert!(r.bob_output.unwrap().contains(&2));
    }

    #[test]
    fn empty_prefix() {
        let p = syndrome_protocol(SyndromeParams { n: 5, t: 5 }).unwrap();
        let sigma = Permutation::identity(5);
        assert!(run_protocol(&p, &sigma, 1).is_ok());
    }
}
