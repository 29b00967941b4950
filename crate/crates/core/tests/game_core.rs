mod common;

use std::collections::BTreeSet;

use common::*;
use streamgame::game::{bit_symbol, EnumMode, MetricMode, Rational};
use streamgame::protocols::{and_or_protocol, syndrome_protocol, zeros_protocol, SyndromeParams};
use streamgame::{
    canonical_bob, conditional_entropy, cost, enumerate_edge_graph, expected_cost, run_protocol,
    CellArray, Limits, Permutation, Protocol,
};

fn run(p: &Protocol, sigma: &[usize], b: bool) -> (String, Vec<usize>) {
    let r = run_protocol(p, &Permutation::from_one_based(sigma).unwrap(), bit_symbol(b)).unwrap();
    let j = r.bob_output.unwrap().iter().map(|l| l + 1).collect();
    (r.final_array.render(), j)
}

#[test]
fn and_or_runs_match_hand_simulation() {
    let p = and_or_protocol(4);
    assert_eq!(run(&p, &[1, 3, 2, 4], true), ("0101".into(), vec![2, 4]));
    assert_eq!(run(&p, &[1, 2, 3, 4], false), ("0100".into(), vec![3, 4]));
    assert_eq!(run(&p, &[2, 1, 4, 3], false), ("1000".into(), vec![3, 4]));
}

#[test]
fn single_cell_game() {
    for p in [and_or_protocol(1), zeros_protocol(1)] {
        let g = enumerate_edge_graph(&p, EnumMode::Sweep, &Limits::DEFAULT).unwrap();
        for b in [false, true] {
            let r = run_protocol(&p, &Permutation::identity(1), bit_symbol(b)).unwrap();
            assert_eq!(r.final_array.render(), if b { "1" } else { "0" });
            assert_eq!(canonical_bob(&g, &r.final_array), vec![0]);
        }
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.max_degree(), 1);
        assert_eq!(cost(&p, &Limits::DEFAULT).unwrap(), 1);
    }
}

#[test]
fn transcript_agrees_with_final_array() {
    let p = and_or_protocol(5);
    for sigma in permutations(5) {
        let r = run_protocol(&p, &Permutation::new(sigma.clone()).unwrap(), 2).unwrap();
        assert_eq!(r.transcript.len(), 5);
        for (i, &(l, s)) in r.transcript.iter().enumerate() {
            assert_eq!(l, sigma[i]);
            assert_eq!(r.final_array.get(l), s);
        }
        assert_eq!(r.transcript[4].1, 2);
    }
}

#[test]
fn two_cell_edge_graph() {
    let g = enumerate_edge_graph(&and_or_protocol(2), EnumMode::Sweep, &Limits::DEFAULT).unwrap();
    let edges: BTreeSet<String> = g.edges().map(|e| e.base().render()).collect();
    assert_eq!(edges, sweep_edges(&and_or_protocol(2)));
    assert_eq!(g.max_degree(), 2);
}

#[test]
fn enumeration_modes_agree() {
    for n in 1..=6 {
        for p in [and_or_protocol(n), zeros_protocol(n)] {
            let a = enumerate_edge_graph(&p, EnumMode::Sweep, &Limits::DEFAULT).unwrap();
            let b = enumerate_edge_graph(&p, EnumMode::StateDfs, &Limits::DEFAULT).unwrap();
            assert_eq!(a.packed_edges(), b.packed_edges(), "{} n={n}", p.name());
            let rendered: BTreeSet<String> = a.edges().map(|e| e.base().render()).collect();
            assert_eq!(rendered, sweep_edges(&p));
        }
    }
}

#[test]
fn sweep_limit_is_enforced() {
    let p = and_or_protocol(9);
    assert!(enumerate_edge_graph(&p, EnumMode::Sweep, &Limits::DEFAULT).is_err());
    assert!(enumerate_edge_graph(&p, EnumMode::StateDfs, &Limits::DEFAULT).is_ok());
}

#[test]
fn degrees_match_oracle() {
    let p = and_or_protocol(6);
    let g = enumerate_edge_graph(&p, EnumMode::Auto, &Limits::DEFAULT).unwrap();
    let oracle = degrees(&sweep_edges(&p), 2);
    for (v, d) in g.vertices() {
        assert_eq!(oracle[&v.render()], d);
    }
    assert_eq!(g.max_degree(), *oracle.values().max().unwrap());
}

#[test]
fn canonical_bob_on_and_or() {
    let g = enumerate_edge_graph(&and_or_protocol(4), EnumMode::Sweep, &Limits::DEFAULT).unwrap();
    let v = CellArray::parse("0101", 2).unwrap();
    assert_eq!(canonical_bob(&g, &v), vec![1, 3]);
}

#[test]
fn canonical_bob_on_single_edge() {
    let g = enumerate_edge_graph(&zeros_protocol(1), EnumMode::Sweep, &Limits::DEFAULT).unwrap();
    assert_eq!(canonical_bob(&g, &CellArray::parse("1", 2).unwrap()), vec![0]);
}

#[test]
fn and_or_cost_is_ceil_sqrt() {
    for (n, c) in [(1, 1), (2, 2), (4, 2), (5, 3), (9, 3), (10, 4)] {
        assert_eq!(cost(&and_or_protocol(n), &Limits::DEFAULT).unwrap(), c, "n={n}");
    }
}

#[test]
fn zeros_expected_cost() {
    let e = expected_cost(&zeros_protocol(6), MetricMode::Exhaustive, &Limits::DEFAULT).unwrap();
    assert_eq!(e.exact, Some(Rational::new(7, 2)));
    assert!((e.value - 3.0).abs() <= 1.0);
    let one = expected_cost(&zeros_protocol(1), MetricMode::Exhaustive, &Limits::DEFAULT).unwrap();
    assert_eq!(one.value, 1.0);
}

#[test]
fn expected_cost_matches_recount() {
    // Every (sigma, b) is equally likely; the canonical decoder returns the
    // freed locations of the final array's edges.
    for p in [and_or_protocol(5), zeros_protocol(5)] {
        let edges = sweep_edges(&p);
        let deg = degrees(&edges, 2);
        let mut total = 0usize;
        let mut runs = 0usize;
        for sigma in permutations(5) {
            let e = play_edge(&p, &sigma);
            for c in ['0', '1'] {
                total += deg[&e.replacen('*', &c.to_string(), 1)];
                runs += 1;
            }
        }
        let got = expected_cost(&p, MetricMode::Exhaustive, &Limits::DEFAULT).unwrap();
        assert!((got.value - total as f64 / runs as f64).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_expected_cost_is_close() {
    let p = and_or_protocol(6);
    let exact = expected_cost(&p, MetricMode::Exhaustive, &Limits::DEFAULT).unwrap().value;
    let mc = expected_cost(&p, MetricMode::MonteCarlo { seed: 7, trials: 20_000 }, &Limits::DEFAULT)
        .unwrap()
        .value;
    assert!((exact - mc).abs() < 0.1, "exact {exact} mc {mc}");
}

#[test]
fn zeros_entropy_is_one_bit() {
    let h = conditional_entropy(&zeros_protocol(4), MetricMode::Exhaustive, &Limits::DEFAULT).unwrap();
    assert!((h.bits - 1.0).abs() < 1e-12);
}

#[test]
fn entropy_matches_recount_and_log_cost() {
    let protocols = [
        and_or_protocol(4),
        and_or_protocol(6),
        zeros_protocol(5),
        syndrome_protocol(SyndromeParams::with_default_tail(6)).unwrap(),
    ];
    for p in protocols {
        let h = conditional_entropy(&p, MetricMode::Exhaustive, &Limits::DEFAULT).unwrap().bits;
        assert!((h - entropy_by_recount(&p)).abs() < 1e-9, "{}", p.name());
        let c = cost(&p, &Limits::DEFAULT).unwrap();
        assert!(h <= (c as f64).log2() + 1e-9, "{}: {h} > log2 {c}", p.name());
    }
}

#[test]
fn syndrome_entropy_below_and_or() {
    let a = conditional_entropy(&and_or_protocol(8), MetricMode::Exhaustive, &Limits::DEFAULT).unwrap();
    let s = conditional_entropy(
        &syndrome_protocol(SyndromeParams { n: 8, t: 7 }).unwrap(),
        MetricMode::Exhaustive,
        &Limits::DEFAULT,
    )
    .unwrap();
    assert!(s.bits < a.bits, "syndrome {} and_or {}", s.bits, a.bits);
}

#[test]
fn entropy_limit_is_enforced() {
    assert!(conditional_entropy(&zeros_protocol(11), MetricMode::Exhaustive, &Limits::DEFAULT).is_err());
    let mc = conditional_entropy(
        &zeros_protocol(11),
        MetricMode::MonteCarlo { seed: 1, trials: 1000 },
        &Limits::DEFAULT,
    )
    .unwrap();
    assert!(mc.warning.is_some());
}

#[test]
fn runs_are_deterministic() {
    let p = syndrome_protocol(SyndromeParams::with_default_tail(7)).unwrap();
    let mc = MetricMode::MonteCarlo { seed: 99, trials: 500 };
    let a = serde_json::to_string(&expected_cost(&p, mc, &Limits::DEFAULT).unwrap()).unwrap();
    let b = serde_json::to_string(&expected_cost(&p, mc, &Limits::DEFAULT).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn permutation_validation() {
    assert!(Permutation::from_one_based(&[1, 1, 2]).is_err());
    assert!(Permutation::from_one_based(&[0, 1]).is_err());
    assert!(Permutation::from_one_based(&[2, 3, 1]).is_ok());
}
