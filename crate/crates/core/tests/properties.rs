mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use streamgame::codes::{canonical_completion, gamma, index_bits, symdiff_color, VtCode};
use streamgame::game::{EnumMode, HypercubeEdge};
use streamgame::protocols::{
    and_or_protocol, catalog, syndrome_protocol, zeros_protocol, IteratedParams,
    IteratedProtocol, SyndromeParams,
};
use streamgame::theory::{bump, swap, BooleanFunction};
use streamgame::{canonical_bob, enumerate_edge_graph, run_protocol, CellArray, Limits, Permutation};

fn perm(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn partial_array(n: usize) -> impl Strategy<Value = CellArray> {
    prop::collection::vec(0u8..=2, n).prop_map(|c| CellArray::from_cells(2, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutations_are_bijections(n in 1usize..40, seed: u64) {
        let p = perm(n, seed);
        let mut sorted = p.as_slice().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(Permutation::from_one_based(&p.to_one_based()).unwrap(), p);
    }

    #[test]
    fn packing_round_trips(w in 2u8..=9, cells in prop::collection::vec(0u8..=9, 1..=16)) {
        let cells: Vec<u8> = cells.into_iter().map(|c| c % (w + 1)).collect();
        let a = CellArray::from_cells(w, cells.clone()).unwrap();
        let back = CellArray::unpack(a.pack(), cells.len(), w);
        prop_assert_eq!(back.cells(), &cells[..]);
        prop_assert_eq!(CellArray::parse(&a.render(), w).unwrap(), a);
    }

    #[test]
    fn edge_endpoints_differ_at_the_star(cells in prop::collection::vec(1u8..=2, 1..=12), free in 0usize..12) {
        let free = free % cells.len();
        let mut base = CellArray::from_cells(2, cells).unwrap();
        base.set(free, 0);
        let e = HypercubeEdge::new(base.clone()).unwrap();
        prop_assert_eq!(e.free_location(), free);
        let ends = e.endpoints();
        prop_assert_eq!(ends.len(), 2);
        for l in 0..base.len() {
            prop_assert_eq!(ends[0].get(l) == ends[1].get(l), l != free);
        }
    }

    #[test]
    fn runs_respect_the_rules(n in 1usize..=14, seed: u64, b in 1u8..=2) {
        let sigma = perm(n, seed);
        let mut ps = vec![and_or_protocol(n), zeros_protocol(n)];
        if let Ok(p) = syndrome_protocol(SyndromeParams::with_default_tail(n)) {
            ps.push(p);
        }
        for p in ps {
            let r = run_protocol(&p, &sigma, b).unwrap();
            prop_assert!(r.final_array.is_complete());
            prop_assert_eq!(r.final_array.get(sigma.last()), b);
            prop_assert_eq!(r.edge.free_location(), sigma.last());
            for &(l, s) in &r.transcript {
                prop_assert_eq!(r.final_array.get(l), s);
            }
            if let Some(j) = r.bob_output {
                prop_assert!(j.contains(&sigma.last()));
            }
        }
    }

    #[test]
    fn canonical_bob_is_sound(n in 2usize..=6, seed: u64, b in 1u8..=3) {
        let sigma = perm(n, seed);
        for cfg in catalog(n) {
            let p = cfg.build().unwrap();
            let b = 1 + (b - 1) % p.alphabet();
            let g = enumerate_edge_graph(&p, EnumMode::Auto, &Limits::DEFAULT).unwrap();
            let r = run_protocol(&p, &sigma, b).unwrap();
            prop_assert!(canonical_bob(&g, &r.final_array).contains(&sigma.last()));
        }
    }

    #[test]
    fn gamma_is_additive(x in prop::collection::vec(any::<bool>(), 1..=40), y in prop::collection::vec(any::<bool>(), 40)) {
        let y = &y[..x.len()];
        let z: Vec<bool> = x.iter().zip(y).map(|(a, b)| a ^ b).collect();
        prop_assert_eq!(
            gamma(&CellArray::from_bits(&z)),
            gamma(&CellArray::from_bits(&x)) ^ gamma(&CellArray::from_bits(y))
        );
    }

    #[test]
    fn completions_are_valid(v in (1usize..=16).prop_flat_map(partial_array)) {
        if let Ok(c) = canonical_completion(&v) {
            prop_assert_eq!(gamma(&c.output), 0);
            prop_assert!(c.output.is_complete());
            prop_assert!(c.zero_set.len() <= index_bits(v.len()));
            for l in 0..v.len() {
                if !v.is_star(l) {
                    prop_assert_eq!(c.output.get(l), v.get(l));
                } else {
                    prop_assert_eq!(c.output.bit(l) == Some(false), c.zero_set.contains(&l));
                }
            }
        }
    }

    #[test]
    fn vt_corrects_one_deletion(t in 2usize..=40, m: u64, pos: usize) {
        let code = VtCode::new(t, 0).unwrap();
        let w = code.encode(m % code.capacity()).unwrap();
        let mut r = w.clone();
        r.remove(pos % t);
        prop_assert_eq!(code.decode(&r).unwrap(), w);
    }

    #[test]
    fn coloring_separates_close_sets(n in 1usize..=60, s: u64, flips in prop::collection::vec(0usize..60, 1..=2)) {
        let s = s & ((1u64 << n) - 1);
        let mut t = s;
        for f in &flips {
            t ^= 1 << (f % n);
        }
        prop_assume!(t != s);
        let set = |m: u64| (0..n).filter(|&l| m >> l & 1 == 1).collect::<Vec<_>>();
        prop_assert_ne!(symdiff_color(&set(s), n), symdiff_color(&set(t), n));
        prop_assert!(symdiff_color(&set(s), n) < 3 * n);
    }

    #[test]
    fn surgeries_permute(n in 1usize..20, seed: u64, k in 1usize..20) {
        let sigma = perm(n, seed).to_one_based();
        let k = 1 + (k - 1) % n;
        for out in [bump(&sigma, k), swap(&sigma, k)] {
            let mut sorted = out.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (1..=n).collect::<Vec<_>>());
            prop_assert_eq!(*out.last().unwrap(), k);
        }
    }

    #[test]
    fn boolean_analysis_matches_oracles(n in 1usize..=6, bits: u64) {
        let table: Vec<bool> = (0..1 << n).map(|x| bits >> x & 1 == 1).collect();
        let f = BooleanFunction::from_table(table.clone()).unwrap();
        let poly = f.multilinear();
        for (x, &bit) in table.iter().enumerate() {
            prop_assert_eq!(poly.eval(x), i64::from(bit));
        }
        let coeffs = mobius(&table);
        let deg = (0..coeffs.len()).filter(|&s| coeffs[s] != 0).map(|s| s.count_ones() as usize).max().unwrap_or(0);
        prop_assert_eq!(f.degree(), deg);
        prop_assert_eq!(f.sensitivity().max, scan_sensitivity(&table, n));
        if f.has_full_degree() && n > 1 {
            for l in 0..n {
                let b = f.degree_preserving_bit(l).unwrap();
                prop_assert!(f.restrict(l, b).has_full_degree());
            }
        }
        if !f.is_constant() {
            let sub = f.full_degree_subfunction().unwrap();
            prop_assert_eq!(sub.g.n(), deg);
            prop_assert!(sub.g.has_full_degree());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ternary_protocol_is_sound(n in 20usize..=120, seed: u64, b in 1u8..=3) {
        let proto = IteratedProtocol::build(IteratedParams::new(n, 1)).unwrap();
        let t1 = proto.schedule()[proto.schedule().len() - 1];
        let p = proto.protocol();
        let sigma = perm(n, seed);
        let r = run_protocol(&p, &sigma, b).unwrap();
        let j = r.bob_output.unwrap();
        prop_assert!(j.contains(&sigma.last()));
        prop_assert!(j.len() <= t1);
        if b == 3 && !proto.is_trivial() {
            prop_assert_eq!(j.len(), 1);
        }
    }
}
