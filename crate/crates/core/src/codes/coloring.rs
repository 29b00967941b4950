//! A coloring of subsets separating sets whose symmetric difference has size
//! one or two.
//!
//! `color(S) = (|S| mod 3) * n + (sum of S mod n)`, with 1-based elements.
//! Sets of different sizes within distance two differ in the first part; sets
//! of equal size differ by swapping one element, which moves the sum by a
//! nonzero amount smaller than `n`.

/// Color of a set of 0-based locations drawn from `0..n`.
pub fn symdiff_color(set: &[usize], n: usize) -> usize {
    assert!(n > 0, "empty universe");
    let sum: usize = set.iter().map(|&l| (l + 1) % n).sum::<usize>() % n;
    (set.len() % 3) * n + sum
}

/// Number of colors used for subsets of an `n`-element universe.
pub fn color_count(n: usize) -> usize {
    3 * n
}

/// Given all of `S` but one element and the color of `S`, finds the missing
/// element among `candidates`. Returns every matching candidate; when the
/// true `S` is `known + {x}` for some candidate `x`, exactly one matches.
pub fn recover_missing(known: &[usize], candidates: &[usize], color: usize, n: usize) -> Vec<usize> {
    let mut set: Vec<usize> = known.to_vec();
    candidates
        .iter()
        .copied()
        .filter(|&x| {
            set.push(x);
            let hit = symdiff_color(&set, n) == color;
            set.pop();
            hit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(symdiff_color(&[], 4), 0);
        // S = {1,3}: (2 mod 3, 4 mod 4) -> 2*4 + 0
        assert_eq!(symdiff_color(&[0, 2], 4), 8);
    }

    #[test]
    fn fits_in_n_squared() {
        for n in 3..20 {
            assert!(color_count(n) <= n * n);
        }
    }

    #[test]
    fn recovers_missing_element() {
        let n = 10;
        let s = [1, 4, 7];
        let c = symdiff_color(&s, n);
        assert_eq!(recover_missing(&[1, 7], &[0, 2, 3, 4, 9], c, n), vec![4]);
    }
}
