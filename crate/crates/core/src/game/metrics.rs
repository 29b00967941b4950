use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::cells::{CellArray, Permutation};
use super::enumerate::{edge_multiplicities, enumerate_edge_graph, EnumMode, Limits};
use super::graph::{canonical_bob, EdgeGraph};
use super::protocol::Protocol;
use super::run::run_protocol;

/// Worst-case cost: the maximum vertex degree of the protocol's edge graph.
pub fn cost(p: &Protocol, limits: &Limits) -> Result<usize> {
    Ok(enumerate_edge_graph(p, EnumMode::Auto, limits)?.max_degree())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Exhaustive,
    MonteCarlo { seed: u64, trials: usize },
}

/// An exact non-negative rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: u128,
    pub den: u128,
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        format!("{}/{}", self.num, self.den).serialize(s)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Mean output size over uniform `(sigma, b)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedCost {
    pub value: f64,
    /// Exact value in exhaustive mode.
    pub exact: Option<Rational>,
    pub mode: &'static str,
    pub trials: u64,
    pub seed: Option<u64>,
    /// Which decoder produced the output sets.
    pub decoder: &'static str,
}

/// Expected output size. Exhaustive mode uses the canonical decoder over the
/// enumerated edge graph. Monte Carlo mode uses the native decoder when the
/// protocol has one and the canonical decoder otherwise.
pub fn expected_cost(p: &Protocol, mode: MetricMode, limits: &Limits) -> Result<ExpectedCost> {
    match mode {
        MetricMode::Exhaustive => {
            let counts = edge_multiplicities(p, limits.sweep_max_n)?;
            let g = EdgeGraph::from_packed(p.n(), p.alphabet(), counts.keys().copied());
            let mut total: u128 = 0;
            let mut runs: u128 = 0;
            for (&e, &c) in &counts {
                let edge = CellArray::unpack(e, p.n(), p.alphabet());
                let free = edge.stars().next().expect("edge has a free cell");
                for s in 1..=p.alphabet() {
                    let mut v = edge.clone();
                    v.set(free, s);
                    total += u128::from(c) * g.degree(&v) as u128;
                    runs += u128::from(c);
                }
            }
            let exact = Rational::new(total, runs);
            Ok(ExpectedCost {
                value: exact.to_f64(),
                exact: Some(exact),
                mode: "exhaustive",
                trials: runs as u64,
                seed: None,
                decoder: "canonical",
            })
        }
        MetricMode::MonteCarlo { seed, trials } => {
            let graph = match p.bob() {
                Some(_) => None,
                None => Some(enumerate_edge_graph(p, EnumMode::Auto, limits)?),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut total: u64 = 0;
            for _ in 0..trials {
                let sigma = Permutation::random(p.n(), &mut rng);
                let b = rng.gen_range(1..=p.alphabet());
                let rec = run_protocol(p, &sigma, b)?;
                let size = match (&graph, rec.bob_output) {
                    (Some(g), _) => canonical_bob(g, &rec.final_array).len(),
                    (None, Some(j)) => j.len(),
                    (None, None) => unreachable!("native decoder present"),
                };
                total += size as u64;
            }
            Ok(ExpectedCost {
                value: if trials == 0 {
                    0.0
                } else {
                    total as f64 / trials as f64
                },
                exact: None,
                mode: "monte_carlo",
                trials: trials as u64,
                seed: Some(seed),
                decoder: if graph.is_some() { "canonical" } else { "native" },
            })
        }
    }
}

/// `H(last arrival | final array)` in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub bits: f64,
    pub mode: &'static str,
    pub samples: u64,
    pub seed: Option<u64>,
    pub warning: Option<&'static str>,
}

const PLUG_IN_WARNING: &str = "plug-in estimator, biased low";

/// Conditional entropy of the last arrival given the final array.
///
/// Exhaustive mode weighs each edge by the number of permutations producing
/// it; every `(sigma, b)` pair is equally likely.
pub fn conditional_entropy(
    p: &Protocol,
    mode: MetricMode,
    limits: &Limits,
) -> Result<EntropyEstimate> {
    match mode {
        MetricMode::Exhaustive => {
            if p.n() > limits.entropy_max_n {
                return Err(Error::TooLarge {
                    what: "exhaustive entropy",
                    n: p.n(),
                    limit: limits.entropy_max_n,
                });
            }
            let counts = edge_multiplicities(p, limits.entropy_max_n)?;
            // vertex -> counts of each possible last arrival
            let mut buckets: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
            let mut runs: u64 = 0;
            for (&e, &c) in &counts {
                let free = (0..p.n())
                    .find(|&i| (e >> (4 * i)) & 0xf == 0)
                    .expect("edge has a free cell");
                for s in 1..=p.alphabet() {
                    let v = e | (u64::from(s) << (4 * free));
                    buckets.entry(v).or_default().push(c);
                    runs += c;
                }
            }
            let bits = entropy_from_buckets(buckets.values().map(|v| v.as_slice()), runs);
            Ok(EntropyEstimate {
                bits,
                mode: "exhaustive",
                samples: runs,
                seed: None,
                warning: None,
            })
        }
        MetricMode::MonteCarlo { seed, trials } => {
            let q = p.clone().without_bob();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut buckets: BTreeMap<CellArray, HashMap<usize, u64>> = BTreeMap::new();
            for _ in 0..trials {
                let sigma = Permutation::random(p.n(), &mut rng);
                let b = rng.gen_range(1..=p.alphabet());
                let rec = run_protocol(&q, &sigma, b)?;
                *buckets
                    .entry(rec.final_array)
                    .or_default()
                    .entry(sigma.last())
                    .or_insert(0) += 1;
            }
            let sorted: Vec<Vec<u64>> = buckets
                .into_values()
                .map(|m| {
                    let mut pairs: Vec<(usize, u64)> = m.into_iter().collect();
                    pairs.sort_unstable();
                    pairs.into_iter().map(|(_, c)| c).collect()
                })
                .collect();
            let bits = entropy_from_buckets(sorted.iter().map(|v| v.as_slice()), trials as u64);
            Ok(EntropyEstimate {
                bits,
                mode: "monte_carlo",
                samples: trials as u64,
                seed: Some(seed),
                warning: Some(PLUG_IN_WARNING),
            })
        }
    }
}

/// `sum_v sum_l c(v,l)/N * log2(c(v)/c(v,l))`.
fn entropy_from_buckets<'a>(buckets: impl Iterator<Item = &'a [u64]>, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut h = 0.0;
    for counts in buckets {
        let cv: u64 = counts.iter().sum();
        for &c in counts {
            if c > 0 {
                h += c as f64 / total * (cv as f64 / c as f64).log2();
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reduces() {
        let r = Rational::new(14, 4);
        assert_eq!((r.num, r.den), (7, 2));
        assert_eq!(r.to_f64(), 3.5);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"7/2\"");
    }

    #[test]
    fn entropy_of_uniform_bucket() {
        let b = [vec![1u64, 1, 1, 1]];
        let h = entropy_from_buckets(b.iter().map(|v| v.as_slice()), 4);
        assert!((h - 2.0).abs() < 1e-12);
    }
}
