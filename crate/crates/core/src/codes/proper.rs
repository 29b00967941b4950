//! Proper codes: one word `x_S` per `m`-subset `S` of `[n]`, supported inside
//! `S`, with large pairwise Hamming distance.
//!
//! Supports are listed in lexicographic order. The word for the `i`-th support
//! is drawn from a ChaCha stream keyed by `(seed, i, attempt)`; in greedy mode
//! a candidate is kept only if it is far enough from every earlier word, so the
//! whole code is a deterministic function of the parameters and the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe handled (words are packed into a `u64`).
pub const MAX_PROPER_N: usize = 64;
/// Above this many supports the code is generated lazily and verified by sampling.
pub const MATERIALIZE_LIMIT: u64 = 10_000;
/// Pairs checked in sampled verification.
pub const SAMPLED_PAIRS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperParams {
    pub n: usize,
    pub m: usize,
    pub target_d: usize,
    /// Candidates tried per support before the target is lowered.
    pub retries: usize,
    /// Smallest distance accepted after relaxation.
    pub min_d: usize,
}

#[derive(Clone, Debug)]
pub struct ProperCode {
    params: ProperParams,
    seed: u64,
    /// Every support in lexicographic order, as bit masks. Empty in lazy mode.
    supports: Vec<u64>,
    words: Vec<u64>,
    size: u64,
    d_achieved: Option<usize>,
    verification: Verification,
}

/// JSON form of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperCodeReport {
    pub kind: &'static str,
    pub params: ProperParams,
    pub seed: u64,
    pub size: u64,
    pub d_achieved: Option<usize>,
    pub relaxed: bool,
    pub verified: Verification,
    /// Codewords as 0/1 strings, one per support in lexicographic order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<String>>,
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Builds a proper code with pairwise distance at least `target_d`, lowering
/// the target one step at a time down to `min_d` when some support exhausts its
/// retries. The achieved distance is then measured independently.
pub fn build_proper_code(
    n: usize,
    m: usize,
    target_d: usize,
    seed: u64,
    retries: usize,
) -> Result<ProperCode> {
    let params = ProperParams {
        n,
        m,
        target_d,
        retries,
        min_d: 1,
    };
    build_proper_code_with(params, seed)
}

pub fn build_proper_code_with(params: ProperParams, seed: u64) -> Result<ProperCode> {
    let ProperParams {
        n, m, target_d, min_d, ..
    } = params;
    if n == 0 || n > MAX_PROPER_N {
        return Err(Error::TooLarge {
            what: "proper code universe",
            n,
            limit: MAX_PROPER_N,
        });
    }
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "support size {m} exceeds universe {n}"
        )));
    }
    if params.retries == 0 {
        return Err(Error::InvalidParameter("retries must be positive".into()));
    }
    let size = binomial(n, m);
    if size > MATERIALIZE_LIMIT {
        let mut code = ProperCode {
            params,
            seed,
            supports: Vec::new(),
            words: Vec::new(),
            size,
            d_achieved: None,
            verification: Verification::Sampled,
        };
        code.d_achieved = code.sampled_distance();
        return Ok(code);
    }

    let supports = all_supports(n, m);
    let mut best: Option<(usize, usize)> = None;
    let mut d = target_d;
    loop {
        match greedy_words(&supports, d, seed, params.retries) {
            Ok(words) => {
                let mut code = ProperCode {
                    params,
                    seed,
                    supports,
                    words,
                    size,
                    d_achieved: None,
                    verification: Verification::Exhaustive,
                };
                code.d_achieved = code.exhaustive_distance();
                return Ok(code);
            }
            Err(placed) => {
                if best.is_none_or(|(_, p)| placed > p) {
                    best = Some((d, placed));
                }
            }
        }
        if d <= min_d.max(1) {
            let (bd, bp) = best.expect("at least one attempt");
            return Err(Error::CodeUnavailable(format!(
                "no proper code for n={n}, m={m} with distance >= {min_d} after {} retries per support; \
                 best attempt placed {bp} of {size} words at distance {bd}",
                params.retries
            )));
        }
        d -= 1;
    }
}

/// Greedy pass at distance `d`. On failure returns how many words were placed.
fn greedy_words(supports: &[u64], d: usize, seed: u64, retries: usize) -> Result<Vec<u64>, usize> {
    let mut words: Vec<u64> = Vec::with_capacity(supports.len());
    for (i, &s) in supports.iter().enumerate() {
        let hit = (0..retries)
            .map(|attempt| candidate(seed, i as u64, attempt as u64, s))
            .find(|&x| words.iter().all(|&y| ((x ^ y).count_ones() as usize) >= d));
        match hit {
            Some(x) => words.push(x),
            None => return Err(words.len()),
        }
    }
    Ok(words)
}

fn candidate(seed: u64, index: u64, attempt: u64, support: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.set_word_pos(u128::from(attempt) * 2);
    rng.gen::<u64>() & support
}

fn all_supports(n: usize, m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | 1 << i));
        let mut i = m;
        while i > 0 && idx[i - 1] == i - 1 + n - m {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Support mask of the `rank`-th `m`-subset of `[n]` in lexicographic order.
fn unrank_support(n: usize, m: usize, mut rank: u64) -> u64 {
    let mut mask = 0;
    let mut next = 0;
    for left in (1..=m).rev() {
        loop {
            let c = binomial(n - next - 1, left - 1);
            if rank < c {
                break;
            }
            rank -= c;
            next += 1;
        }
        mask |= 1 << next;
        next += 1;
    }
    mask
}

impl ProperCode {
    pub fn params(&self) -> &ProperParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn support_size(&self) -> usize {
        self.params.m
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_materialized(&self) -> bool {
        self.verification == Verification::Exhaustive
    }

    pub fn d_achieved(&self) -> Option<usize> {
        self.d_achieved
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    /// Whether the code fell short of the requested distance.
    pub fn relaxed(&self) -> bool {
        self.d_achieved.is_some_and(|d| d < self.params.target_d)
    }

    /// The word for support `set` (0-based locations, any order).
    pub fn word_for(&self, set: &[usize]) -> Result<u64> {
        let mask = set.iter().fold(0u64, |acc, &l| acc | 1 << l);
        if set.len() != self.params.m
            || mask.count_ones() as usize != self.params.m
            || set.iter().any(|&l| l >= self.params.n)
        {
            return Err(Error::InvalidParameter(format!(
                "support must be {} distinct locations below {}",
                self.params.m, self.params.n
            )));
        }
        if self.is_materialized() {
            let i = self.supports.binary_search_by(|s| lex_cmp(*s, mask)).map_err(|_| {
                Error::Contract("support missing from materialized code".into())
            })?;
            Ok(self.words[i])
        } else {
            Ok(candidate(self.seed, rank_support(mask, self.params.n), 0, mask))
        }
    }

    /// `(support, word)` pairs of a materialized code.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.supports.iter().copied().zip(self.words.iter().copied())
    }

    /// Closest codeword to `word` as `(support, distance)`. Ties are an error
    /// unless the distance is within the unique-decoding radius.
    pub fn nearest_codeword(&self, word: u64) -> Result<(Vec<usize>, usize)> {
        if !self.is_materialized() {
            return Err(Error::CodeUnavailable(
                "nearest-codeword search needs a materialized code".into(),
            ));
        }
        let mut best = usize::MAX;
        let mut at = Vec::new();
        for (i, &x) in self.words.iter().enumerate() {
            let dist = (x ^ word).count_ones() as usize;
            if dist < best {
                best = dist;
                at.clear();
            }
            if dist == best {
                at.push(i);
            }
        }
        if at.len() > 1 {
            return Err(Error::Decode(format!(
                "{} codewords tie at distance {best}",
                at.len()
            )));
        }
        let s = self.supports[at[0]];
        Ok(((0..self.params.n).filter(|&l| s >> l & 1 == 1).collect(), best))
    }

    /// Minimum pairwise distance over every pair of words.
    pub fn exhaustive_distance(&self) -> Option<usize> {
        let w = &self.words;
        (0..w.len())
            .into_par_iter()
            .filter_map(|i| {
                w[i + 1..]
                    .iter()
                    .map(|&y| (w[i] ^ y).count_ones() as usize)
                    .min()
            })
            .min()
    }

    fn sampled_distance(&self) -> Option<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5a5a_5a5a);
        let (n, m) = (self.params.n, self.params.m);
        (0..SAMPLED_PAIRS)
            .filter_map(|_| {
                let a = rng.gen_range(0..self.size);
                let b = rng.gen_range(0..self.size);
                (a != b).then(|| {
                    let (sa, sb) = (unrank_support(n, m, a), unrank_support(n, m, b));
                    let xa = candidate(self.seed, a, 0, sa);
                    let xb = candidate(self.seed, b, 0, sb);
                    (xa ^ xb).count_ones() as usize
                })
            })
            .min()
    }

    /// Recomputes the code from its parameters and seed and compares.
    pub fn reproduces(&self) -> bool {
        match build_proper_code_with(self.params.clone(), self.seed) {
            Ok(other) => other.words == self.words && other.d_achieved == self.d_achieved,
            Err(_) => false,
        }
    }

    pub fn report(&self, include_words: bool) -> ProperCodeReport {
        let n = self.params.n;
        ProperCodeReport {
            kind: "proper",
            params: self.params.clone(),
            seed: self.seed,
            size: self.size,
            d_achieved: self.d_achieved,
            relaxed: self.relaxed(),
            verified: self.verification,
            words: (include_words && self.is_materialized()).then(|| {
                self.words
                    .iter()
                    .map(|&x| (0..n).map(|l| if x >> l & 1 == 1 { '1' } else { '0' }).collect())
                    .collect()
            }),
        }
    }
}

/// Lexicographic order of sorted subsets, expressed on masks.
fn lex_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    // the lowest differing element decides: the set containing it comes first
    let diff = a ^ b;
    if diff == 0 {
        return std::cmp::Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    if a & low != 0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

fn rank_support(mask: u64, n: usize) -> u64 {
    let m = mask.count_ones() as usize;
    let mut rank = 0;
    let mut left = m;
    for l in 0..n {
        if left == 0 {
            break;
        }
        if mask >> l & 1 == 1 {
            left -= 1;
        } else {
            rank += binomial(n - l - 1, left - 1);
        }
    }
    rank
}
