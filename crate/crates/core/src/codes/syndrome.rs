//! F2 index vectors, the syndrome map and canonical completions.
//!
//! Location `l` (1-based) is identified with its binary expansion, a nonzero
//! vector of `F2^k` where `k` is the bit length of `n`. Summing vectors over
//! F2 is XOR of the location numbers, so a syndrome is stored as a `u32`.

use crate::error::{Error, Result};
use crate::game::CellArray;

/// Number of bits needed for every index vector of an `n`-cell array.
pub fn index_bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Index vector of the 0-based location `loc`.
pub fn index_vector(loc: usize) -> u32 {
    (loc + 1) as u32
}

/// Sum of the index vectors of the cells holding 1. Stars and 0s contribute nothing.
pub fn gamma(v: &CellArray) -> u32 {
    v.cells()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 2)
        .fold(0, |acc, (l, _)| acc ^ index_vector(l))
}

/// A syndrome as a bit string of width `index_bits(n)`, most significant bit first.
pub fn render_syndrome(s: u32, n: usize) -> String {
    let k = index_bits(n);
    (0..k)
        .rev()
        .map(|i| if s >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// The zero-syndrome completion with fewest 0s among the starred cells, ties
/// broken by the lexicographically smallest sorted zero set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub output: CellArray,
    /// Starred locations assigned 0, ascending.
    pub zero_set: Vec<usize>,
}

/// Canonical completion of a binary partial array.
///
/// Filling every star with 1 leaves a deficiency `d`; turning the star set `Z`
/// to 0 instead fixes it exactly when the index vectors of `Z` sum to `d`. The
/// search runs over `|Z| = 0, 1, 2, ...` with combinations in lexicographic
/// order, so the first hit is the canonical one. A minimal `Z` is linearly
/// independent, so sizes beyond the bit width never need to be tried.
pub fn canonical_completion(v: &CellArray) -> Result<Completion> {
    if v.alphabet() != 2 {
        return Err(Error::InvalidParameter(
            "canonical completion needs a binary array".into(),
        ));
    }
    let stars: Vec<usize> = v.stars().collect();
    let deficiency = gamma(v) ^ stars.iter().fold(0, |acc, &l| acc ^ index_vector(l));
    let max_size = stars.len().min(index_bits(v.len()));
    for size in 0..=max_size {
        if let Some(zero_set) = first_subset_with_xor(&stars, size, deficiency) {
            let mut output = v.clone();
            for &l in &stars {
                output.set(l, 2);
            }
            for &l in &zero_set {
                output.set(l, 1);
            }
            return Ok(Completion { output, zero_set });
        }
    }
    Err(Error::Inadmissible)
}

/// Whether some completion of `v` has zero syndrome.
pub fn is_admissible(v: &CellArray) -> bool {
    canonical_completion(v).is_ok()
}

fn first_subset_with_xor(items: &[usize], size: usize, target: u32) -> Option<Vec<usize>> {
    if size == 0 {
        return (target == 0).then(Vec::new);
    }
    if size > items.len() {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let x = idx.iter().fold(0, |acc, &i| acc ^ index_vector(items[i]));
        if x == target {
            return Some(idx.iter().map(|&i| items[i]).collect());
        }
        // next combination in lexicographic order
        let m = items.len();
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + m - size {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
