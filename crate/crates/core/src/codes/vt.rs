//! Varshamov–Tenengolts single-deletion codes.
//!
//! `VT_a(t)` is the set of binary words `x` of length `t` with
//! `sum_i i * x_i = a (mod t + 1)`, positions counted from 1. Messages are
//! encoded systematically: data bits occupy the positions that are not powers
//! of two, and the power-of-two positions are set to hit the residue.

use serde::Serialize;

use crate::error::{Error, Result};

/// Longest word length handled.
pub const MAX_VT_LEN: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VtCode {
    t: usize,
    a: usize,
}

impl VtCode {
    pub fn new(t: usize, a: usize) -> Result<Self> {
        if t == 0 || t > MAX_VT_LEN {
            return Err(Error::InvalidParameter(format!(
                "VT length {t} outside 1..={MAX_VT_LEN}"
            )));
        }
        if a > t {
            return Err(Error::InvalidParameter(format!(
                "VT residue {a} must be below {}",
                t + 1
            )));
        }
        Ok(VtCode { t, a })
    }

    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn residue(&self) -> usize {
        self.a
    }

    pub fn syndrome(&self, word: &[bool]) -> usize {
        weighted_sum(word) % (self.t + 1)
    }

    pub fn is_codeword(&self, word: &[bool]) -> bool {
        word.len() == self.t && self.syndrome(word) == self.a
    }

    fn parity_positions(&self) -> usize {
        // ceil(log2(t + 1))
        (usize::BITS - self.t.leading_zeros()) as usize
    }

    fn data_positions(&self) -> impl Iterator<Item = usize> {
        (1..=self.t).filter(|i| !i.is_power_of_two())
    }

    /// Number of messages the systematic encoder accepts: `2^(t - ceil(log2(t+1)))`.
    pub fn capacity(&self) -> u64 {
        1u64 << (self.t - self.parity_positions())
    }

    /// Exact `|VT_a(t)|`, by counting words per residue.
    pub fn size(&self) -> u64 {
        self.syndrome_table()[self.a]
    }

    /// Number of length-`t` words for each residue `0..=t`.
    pub fn syndrome_table(&self) -> Vec<u64> {
        let m = self.t + 1;
        let mut counts = vec![0u64; m];
        counts[0] = 1;
        for i in 1..=self.t {
            let mut next = counts.clone();
            for (r, &c) in counts.iter().enumerate() {
                next[(r + i) % m] += c;
            }
            counts = next;
        }
        counts
    }

    pub fn encode(&self, index: u64) -> Result<Vec<bool>> {
        if index >= self.capacity() {
            return Err(Error::InvalidParameter(format!(
                "message {index} exceeds VT({}) capacity {}",
                self.t,
                self.capacity()
            )));
        }
        let mut word = vec![false; self.t];
        for (bit, pos) in self.data_positions().enumerate() {
            word[pos - 1] = index >> bit & 1 == 1;
        }
        let m = self.t + 1;
        let need = (self.a + m - weighted_sum(&word) % m) % m;
        for i in 0..self.parity_positions() {
            if need >> i & 1 == 1 {
                word[(1 << i) - 1] = true;
            }
        }
        debug_assert!(self.is_codeword(&word));
        Ok(word)
    }

    /// Inverse of [`encode`](Self::encode) on a full codeword.
    pub fn message(&self, word: &[bool]) -> u64 {
        self.data_positions()
            .enumerate()
            .filter(|&(_, pos)| word[pos - 1])
            .fold(0, |acc, (bit, _)| acc | 1 << bit)
    }

    /// Recovers the codeword from a word with at most one deletion.
    pub fn decode(&self, received: &[bool]) -> Result<Vec<bool>> {
        if received.len() == self.t {
            return if self.is_codeword(received) {
                Ok(received.to_vec())
            } else {
                Err(Error::Decode(format!(
                    "length-{} word is not in VT_{}({})",
                    self.t, self.a, self.t
                )))
            };
        }
        if received.len() + 1 != self.t {
            return Err(Error::Decode(format!(
                "received length {} is not within one deletion of {}",
                received.len(),
                self.t
            )));
        }
        let m = self.t + 1;
        let weight = received.iter().filter(|&&b| b).count();
        let deficiency = (self.a + m - weighted_sum(received) % m) % m;
        let mut word = Vec::with_capacity(self.t);
        if deficiency <= weight {
            // a 0 was deleted; it sat left of exactly `deficiency` ones
            let mut ones_right = weight;
            let mut inserted = false;
            for &b in received {
                if !inserted && ones_right == deficiency {
                    word.push(false);
                    inserted = true;
                }
                word.push(b);
                if b {
                    ones_right -= 1;
                }
            }
            if !inserted {
                word.push(false);
            }
        } else {
            // a 1 was deleted; it sat right of exactly `deficiency - weight - 1` zeros
            let zeros_left_target = deficiency - weight - 1;
            let mut zeros_left = 0;
            let mut inserted = false;
            for &b in received {
                if !inserted && zeros_left == zeros_left_target {
                    word.push(true);
                    inserted = true;
                }
                word.push(b);
                if !b {
                    zeros_left += 1;
                }
            }
            if !inserted {
                word.push(true);
            }
        }
        if self.is_codeword(&word) {
            Ok(word)
        } else {
            Err(Error::Decode("no VT codeword within one deletion".into()))
        }
    }

    /// Every codeword in lexicographic order. Intended for small `t`.
    pub fn codewords(&self) -> Result<Vec<Vec<bool>>> {
        if self.t > 24 {
            return Err(Error::TooLarge {
                what: "VT codeword listing",
                n: self.t,
                limit: 24,
            });
        }
        Ok((0u32..1 << self.t)
            .map(|x| (0..self.t).map(|i| x >> (self.t - 1 - i) & 1 == 1).collect::<Vec<_>>())
            .filter(|w| self.is_codeword(w))
            .collect())
    }
}

fn weighted_sum(word: &[bool]) -> usize {
    word.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i + 1)
        .sum()
}

/// `0`/`1` rendering.
pub fn bits_to_string(word: &[bool]) -> String {
    word.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidParameter(format!(
                "unexpected character '{other}' in bit string"
            ))),
        })
        .collect()
}
