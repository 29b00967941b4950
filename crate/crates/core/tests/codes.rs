mod common;

use common::*;
use streamgame::codes::{
    bits_from_str, build_proper_code, canonical_completion, color_count, gamma, index_bits,
    index_vector, recover_missing, render_syndrome, symdiff_color, GreedyDeletionCode, VtCode,
};
use streamgame::CellArray;

fn arr(s: &str) -> CellArray {
    CellArray::parse(s, 2).unwrap()
}

#[test]
fn index_vectors_are_nonzero() {
    for n in 1..=64 {
        for l in 0..n {
            let b = index_vector(l);
            assert!(b != 0 && b < 1 << index_bits(n));
        }
    }
}

#[test]
fn gamma_examples() {
    assert_eq!(gamma(&arr("0000")), 0);
    assert_eq!(render_syndrome(gamma(&arr("1100")), 4), "011");
}

#[test]
fn gamma_is_linear() {
    let n = 7;
    for x in 0u32..1 << n {
        for y in [0b1010101u32, 0b0110011, 0b1111111] {
            let to = |m: u32| {
                CellArray::from_bits(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            };
            assert_eq!(gamma(&to(x ^ y)), gamma(&to(x)) ^ gamma(&to(y)));
        }
    }
}

#[test]
fn completion_examples() {
    let c = canonical_completion(&arr("***0")).unwrap();
    assert!(c.zero_set.is_empty());
    assert_eq!(c.output.render(), "1110");

    // stars {1,2}, cell 3 set: 01 + 10 = 11 = b(3)
    let c = canonical_completion(&arr("**10")).unwrap();
    assert_eq!(c.output.render(), "1110");

    let c = canonical_completion(&arr("11*")).unwrap();
    assert_eq!(c.output.render(), "111");
    assert!(canonical_completion(&arr("01*")).is_err());
}

#[test]
fn completion_minimal_by_sweep() {
    // Every partial array on 6 cells with at least one star.
    let n = 6;
    for code in 0..3usize.pow(n as u32) {
        let cells: Vec<u8> = (0..n).map(|i| (code / 3usize.pow(i as u32) % 3) as u8).collect();
        if !cells.contains(&0) {
            continue;
        }
        let v = CellArray::from_cells(2, cells.clone()).unwrap();
        let stars: Vec<usize> = v.stars().collect();
        let mut best: Option<Vec<usize>> = None;
        for m in 0u32..1 << stars.len() {
            let z: Vec<usize> = (0..stars.len()).filter(|i| m >> i & 1 == 1).map(|i| stars[i]).collect();
            let mut w = v.clone();
            for &l in &stars {
                w.set(l, if z.contains(&l) { 1 } else { 2 });
            }
            if gamma(&w) != 0 {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => (z.len(), &z) < (b.len(), b),
            };
            if better {
                best = Some(z);
            }
        }
        match (best, canonical_completion(&v)) {
            (Some(z), Ok(c)) => {
                assert_eq!(c.zero_set, z, "{}", v.render());
                assert_eq!(gamma(&c.output), 0);
                for l in v.filled() {
                    assert_eq!(c.output.get(l), v.get(l));
                }
            }
            (None, Err(_)) => {}
            (b, c) => panic!("{}: oracle {b:?} library {c:?}", v.render()),
        }
    }
}

#[test]
fn vt_roundtrip_exhaustive() {
    for t in 1..=12 {
        let code = VtCode::new(t, 0).unwrap();
        let words = code.codewords().unwrap();
        assert_eq!(words.len() as u64, code.size());
        for w in &words {
            assert_eq!(code.decode(w).unwrap(), *w);
            for i in 0..t {
                let mut r = w.clone();
                r.remove(i);
                assert_eq!(code.decode(&r).unwrap(), *w, "t={t}");
            }
        }
    }
}

#[test]
fn vt_encode_decode_messages() {
    let code = VtCode::new(10, 0).unwrap();
    for m in 0..code.capacity() {
        let w = code.encode(m).unwrap();
        assert!(code.is_codeword(&w));
        assert_eq!(code.message(&w), m);
    }
    assert!(code.encode(code.capacity()).is_err());
}

#[test]
fn vt_size_matches_count() {
    // |VT_0(t)| for t = 1..10
    let known = [1, 2, 2, 4, 6, 10, 16, 30, 52, 94];
    for (t, &k) in (1..=10).zip(&known) {
        assert_eq!(VtCode::new(t, 0).unwrap().size(), k);
    }
}

#[test]
fn greedy_distinguishes_pairs() {
    for k in 2..=10 {
        for d in 1..k.min(3) {
            let code = GreedyDeletionCode::build(k, d).unwrap();
            let words: Vec<_> = code.words().collect();
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    assert!(lcs(&words[i], &words[j]) < k - d);
                }
            }
        }
    }
}

#[test]
fn greedy_no_deletions_keeps_everything() {
    assert_eq!(GreedyDeletionCode::build(5, 0).unwrap().size(), 32);
}

#[test]
fn greedy_meets_vt_floor_at_six() {
    let size = GreedyDeletionCode::build(6, 1).unwrap().size();
    assert!(size * 7 >= 64);
    assert!(size as u64 >= VtCode::new(6, 0).unwrap().size());
}

#[test]
fn greedy_is_maximal() {
    for k in 2..=8 {
        for d in 1..k.min(3) {
            let words: Vec<_> = GreedyDeletionCode::build(k, d).unwrap().words().collect();
            for x in 0u32..1 << k {
                let x: Vec<bool> = (0..k).map(|i| x >> (k - 1 - i) & 1 == 1).collect();
                assert!(words.iter().any(|w| lcs(w, &x) >= k - d), "k={k} d={d}");
            }
        }
    }
}

#[test]
fn greedy_decodes_deletions() {
    let code = GreedyDeletionCode::build(8, 2).unwrap();
    for (idx, w) in code.words().enumerate() {
        for i in 0..8 {
            for j in i + 1..8 {
                let r: Vec<bool> = (0..8).filter(|&p| p != i && p != j).map(|p| w[p]).collect();
                assert_eq!(code.decode(&r).unwrap(), idx);
            }
        }
    }
}

#[test]
fn coloring_examples() {
    assert_eq!(symdiff_color(&[], 4), 0);
    assert_eq!(symdiff_color(&[0, 2], 4), 8);
    assert!(color_count(5) <= 25);
}

#[test]
fn coloring_recovers_missing() {
    let n = 7;
    for s in 0u32..1 << n {
        let set: Vec<usize> = (0..n).filter(|&l| s >> l & 1 == 1).collect();
        let c = symdiff_color(&set, n);
        for &x in &set {
            let known: Vec<usize> = set.iter().copied().filter(|&l| l != x).collect();
            let outside: Vec<usize> = (0..n).filter(|l| !known.contains(l)).collect();
            assert_eq!(recover_missing(&known, &outside, c, n), vec![x]);
        }
    }
}

#[test]
fn proper_code_small_case() {
    let code = build_proper_code(10, 9, 7, 0, 200).unwrap();
    assert_eq!(code.size(), 10);
    let words: Vec<(u64, u64)> = code.entries().collect();
    let mut d = usize::MAX;
    for i in 0..words.len() {
        assert_eq!(words[i].1 & !words[i].0, 0, "support escapes the set");
        for j in i + 1..words.len() {
            d = d.min((words[i].1 ^ words[j].1).count_ones() as usize);
        }
    }
    assert_eq!(code.d_achieved(), Some(d));
    assert_eq!(code.exhaustive_distance(), Some(d));
}

#[test]
fn proper_code_single_support() {
    let code = build_proper_code(6, 6, 5, 0, 10).unwrap();
    assert_eq!(code.size(), 1);
}

#[test]
fn proper_code_is_reproducible() {
    let a = build_proper_code(12, 9, 7, 42, 500).unwrap();
    let b = build_proper_code(12, 9, 7, 42, 500).unwrap();
    assert_eq!(a.report(true), b.report(true));
    assert!(a.reproduces());
}

#[test]
fn nearest_codeword_tolerates_perturbation() {
    let code = build_proper_code(26, 25, 11, 0, 2000).unwrap();
    assert!(code.d_achieved().unwrap() >= 11);
    for (support, word) in code.entries() {
        let s: Vec<usize> = (0..26).filter(|&l| support >> l & 1 == 1).collect();
        assert_eq!(code.nearest_codeword(word).unwrap(), (s.clone(), 0));
        for l in 0..26 {
            assert_eq!(code.nearest_codeword(word ^ 1 << l).unwrap().0, s);
        }
        let radius5 = word ^ 0b10101_01010;
        assert_eq!(code.nearest_codeword(radius5).unwrap().0, s);
    }
}

#[test]
fn bit_strings_parse() {
    assert_eq!(bits_from_str("0110").unwrap(), vec![false, true, true, false]);
    assert!(bits_from_str("01x").is_err());
}
