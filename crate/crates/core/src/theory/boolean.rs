//! Boolean functions given by truth tables.
//!
//! Input `x` is an integer whose bit `i` is variable `i` (0-based), which is
//! identified with array location `i`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{bit_symbol, CellArray, EdgeGraph, MAX_PACKED_LEN};

pub const MAX_VARS: usize = 20;
pub const MAX_DECISION_TREE_VARS: usize = 14;

#[derive(Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

/// Exact real multilinear representation: `coeffs[S]` for each subset mask `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearPoly {
    pub n: usize,
    pub coeffs: Vec<i64>,
}

impl MultilinearPoly {
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: usize) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(s, _)| s & !x == 0)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Nonzero terms as `(sorted variables, coefficient)`.
    pub fn terms(&self) -> Vec<(Vec<usize>, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| ((0..self.n).filter(|i| s >> i & 1 == 1).collect(), c))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SensitivityProfile {
    /// `s_x(f)` for every input `x`.
    pub per_point: Vec<usize>,
    pub max: usize,
    /// Sensitive edges as `(lower endpoint, flipped variable)`.
    pub edges: Vec<(usize, usize)>,
}

/// A full-degree subfunction and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subfunction {
    pub g: BooleanFunction,
    /// Variables of `f` kept, in the order they appear in `g`.
    pub kept: Vec<usize>,
    /// Variables of `f` fixed to 0.
    pub fixed_to_zero: Vec<usize>,
}

impl BooleanFunction {
    pub fn from_table(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "truth table length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_VARS {
            return Err(Error::TooLarge {
                what: "boolean function variables",
                n,
                limit: MAX_VARS,
            });
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::TooLarge {
                what: "boolean function variables",
                n,
                limit: MAX_VARS,
            });
        }
        Ok(BooleanFunction {
            n,
            table: (0..1usize << n).map(f).collect(),
        })
    }

    /// Parses a hex truth table on `n` variables. The table is read as one
    /// number whose least significant bit is `f(0...0)`.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::TooLarge {
                what: "boolean function variables",
                n,
                limit: MAX_VARS,
            });
        }
        let hex = hex.trim().trim_start_matches("0x");
        let digits: Vec<u8> = hex
            .chars()
            .map(|c| {
                c.to_digit(16)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit '{c}'")))
            })
            .collect::<Result<_>>()?;
        let len = 1usize << n;
        let mut table = vec![false; len];
        for (pos, &d) in digits.iter().rev().enumerate() {
            for b in 0..4 {
                if d >> b & 1 == 1 {
                    let i = 4 * pos + b;
                    if i >= len {
                        return Err(Error::InvalidParameter(format!(
                            "hex table sets bit {i} beyond 2^{n}"
                        )));
                    }
                    table[i] = true;
                }
            }
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn to_hex(&self) -> String {
        let digits = self.table.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|pos| {
                let d = (0..4)
                    .filter(|b| self.table.get(4 * pos + b).copied().unwrap_or(false))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(d, 16).expect("digit")
            })
            .collect()
    }

    /// `or`, `and`, `xor`, `majority`, or `and_or` (AND of ORs over `sqrt(n)`
    /// consecutive blocks; `n` must be a perfect square).
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        match name {
            "or" => Self::from_fn(n, |x| x != 0),
            "and" => Self::from_fn(n, |x| x == (1 << n) - 1),
            "xor" => Self::from_fn(n, |x| x.count_ones() % 2 == 1),
            "majority" => Self::from_fn(n, |x| 2 * x.count_ones() as usize > n),
            "and_or" => {
                let k = (n as f64).sqrt().round() as usize;
                if k * k != n || k == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "and_or needs a perfect square number of variables, got {n}"
                    )));
                }
                let block = (1usize << k) - 1;
                Self::from_fn(n, |x| (0..k).all(|i| x >> (i * k) & block != 0))
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown function '{other}' (expected or, and, xor, majority, and_or)"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&b| b == self.table[0])
    }

    /// Möbius transform: `c_S = sum over T subset of S of (-1)^{|S|-|T|} f(T)`.
    pub fn multilinear(&self) -> MultilinearPoly {
        let mut c: Vec<i64> = self.table.iter().map(|&b| i64::from(b)).collect();
        for i in 0..self.n {
            for s in 0..c.len() {
                if s >> i & 1 == 1 {
                    c[s] -= c[s ^ (1 << i)];
                }
            }
        }
        MultilinearPoly {
            n: self.n,
            coeffs: c,
        }
    }

    pub fn degree(&self) -> usize {
        self.multilinear().degree()
    }

    pub fn has_full_degree(&self) -> bool {
        top_coefficient(self.n, |x| self.eval(x)) != 0
    }

    pub fn sensitivity(&self) -> SensitivityProfile {
        let mut per_point = vec![0; self.table.len()];
        let mut edges = Vec::new();
        for (x, count) in per_point.iter_mut().enumerate() {
            for i in 0..self.n {
                if self.table[x] != self.table[x ^ (1 << i)] {
                    *count += 1;
                    if x >> i & 1 == 0 {
                        edges.push((x, i));
                    }
                }
            }
        }
        let max = per_point.iter().copied().max().unwrap_or(0);
        SensitivityProfile {
            per_point,
            max,
            edges,
        }
    }

    /// The sensitive edges as an edge graph over binary arrays.
    pub fn sensitive_edge_graph(&self) -> Result<EdgeGraph> {
        if self.n == 0 || self.n > MAX_PACKED_LEN {
            return Err(Error::TooLarge {
                what: "sensitive-edge graph variables",
                n: self.n,
                limit: MAX_PACKED_LEN,
            });
        }
        let keys = self.sensitivity().edges.into_iter().map(|(x, i)| {
            let mut a = point_array(self.n, x);
            a.set(i, crate::game::STAR);
            a.pack()
        });
        Ok(EdgeGraph::from_packed(self.n, 2, keys))
    }

    /// Restriction `x_var = bit`, as a function of the remaining variables in order.
    pub fn restrict(&self, var: usize, bit: bool) -> BooleanFunction {
        let low = (1usize << var) - 1;
        let table = (0..1usize << (self.n - 1))
            .map(|y| {
                let x = (y & low) | ((y & !low) << 1) | (usize::from(bit) << var);
                self.table[x]
            })
            .collect();
        BooleanFunction {
            n: self.n - 1,
            table,
        }
    }

    /// A maximum-size monomial `S` with nonzero coefficient (lexicographically
    /// first among the largest), with every other variable fixed to 0.
    pub fn full_degree_subfunction(&self) -> Result<Subfunction> {
        if self.is_constant() {
            return Err(Error::InvalidParameter(
                "constant function has no full-degree subfunction".into(),
            ));
        }
        let poly = self.multilinear();
        let d = poly.degree();
        let s = poly
            .terms()
            .into_iter()
            .map(|(vars, _)| vars)
            .filter(|v| v.len() == d)
            .min()
            .expect("nonconstant function has a top monomial");
        let g = BooleanFunction::from_fn(d, |y| {
            let x = s
                .iter()
                .enumerate()
                .filter(|&(r, _)| y >> r & 1 == 1)
                .fold(0usize, |acc, (_, &v)| acc | 1 << v);
            self.table[x]
        })?;
        debug_assert!(g.has_full_degree());
        Ok(Subfunction {
            g,
            fixed_to_zero: (0..self.n).filter(|v| !s.contains(v)).collect(),
            kept: s,
        })
    }

    /// For a full-degree `f`, a bit such that `f` with `x_var` fixed to it keeps
    /// full degree: 0 when the restriction to 0 has a nonzero top coefficient.
    pub fn degree_preserving_bit(&self, var: usize) -> Result<bool> {
        if var >= self.n {
            return Err(Error::InvalidParameter(format!(
                "variable {var} out of range for {} variables",
                self.n
            )));
        }
        if !self.has_full_degree() {
            return Err(Error::InvalidParameter("function is not of full degree".into()));
        }
        let bit = !self.restrict(var, false).has_full_degree();
        if !self.restrict(var, bit).has_full_degree() {
            return Err(Error::Contract(
                "neither restriction keeps full degree".into(),
            ));
        }
        Ok(bit)
    }

    /// Exact deterministic decision-tree depth by dynamic programming over
    /// the `3^n` subcubes (digit 0/1 fixed, 2 free).
    pub fn decision_tree_depth(&self) -> Result<usize> {
        let n = self.n;
        if n > MAX_DECISION_TREE_VARS {
            return Err(Error::TooLarge {
                what: "decision-tree variables",
                n,
                limit: MAX_DECISION_TREE_VARS,
            });
        }
        let pow3: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
        let total = pow3[n];
        // bit 0: some input is false, bit 1: some input is true
        let mut reach = vec![0u8; total];
        let mut depth = vec![0u8; total];
        for s in 0..total {
            let mut rest = s;
            let mut first_free = None;
            let mut x = 0usize;
            for (i, p) in pow3.iter().take(n).enumerate() {
                match rest % 3 {
                    1 => x |= 1 << i,
                    2 if first_free.is_none() => first_free = Some(*p),
                    _ => {}
                }
                rest /= 3;
            }
            match first_free {
                None => {
                    reach[s] = if self.table[x] { 2 } else { 1 };
                    depth[s] = 0;
                }
                Some(p) => {
                    reach[s] = reach[s - 2 * p] | reach[s - p];
                    if reach[s] != 3 {
                        depth[s] = 0;
                        continue;
                    }
                    let mut best = u8::MAX;
                    let mut rest = s;
                    for q in pow3.iter().take(n) {
                        if rest % 3 == 2 {
                            let d = 1 + depth[s - 2 * q].max(depth[s - q]);
                            best = best.min(d);
                        }
                        rest /= 3;
                    }
                    depth[s] = best;
                }
            }
        }
        Ok(depth[total - 1] as usize)
    }

    pub fn is_evasive(&self) -> Result<bool> {
        Ok(self.decision_tree_depth()? == self.n)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, 0x{})", self.n, self.to_hex())
    }
}

/// `sum over T of (-1)^{n-|T|} h(T)`: the coefficient of the full monomial.
pub(crate) fn top_coefficient(n: usize, h: impl Fn(usize) -> bool) -> i64 {
    (0..1usize << n)
        .filter(|&x| h(x))
        .map(|x| if (n - x.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 })
        .sum()
}

/// The binary array of input `x`.
pub fn point_array(n: usize, x: usize) -> CellArray {
    CellArray::from_cells(2, (0..n).map(|i| bit_symbol(x >> i & 1 == 1)).collect())
        .expect("binary")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and2_polynomial() {
        let f = BooleanFunction::builtin("and", 2).unwrap();
        let p = f.multilinear();
        assert_eq!(p.coeffs, vec![0, 0, 0, 1]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn hex_round_trip() {
        let f = BooleanFunction::builtin("or", 3).unwrap();
        assert_eq!(f.to_hex(), "fe");
        assert_eq!(BooleanFunction::from_hex(3, "fe").unwrap(), f);
        assert_eq!(BooleanFunction::from_hex(2, "8").unwrap(), BooleanFunction::builtin("and", 2).unwrap());
        assert!(BooleanFunction::from_hex(2, "18").is_err());
    }

    #[test]
    fn restrict_indexes_remaining_variables() {
        // f = x0 AND NOT x2
        let f = BooleanFunction::from_fn(3, |x| x & 1 == 1 && x & 4 == 0).unwrap();
        let g = f.restrict(1, true);
        assert_eq!(g.table(), &[false, true, false, false]);
    }

    #[test]
    fn decision_tree_small() {
        assert_eq!(BooleanFunction::builtin("or", 3).unwrap().decision_tree_depth().unwrap(), 3);
        let dictator = BooleanFunction::from_fn(3, |x| x & 1 == 1).unwrap();
        assert_eq!(dictator.decision_tree_depth().unwrap(), 1);
        let constant = BooleanFunction::from_fn(2, |_| true).unwrap();
        assert_eq!(constant.decision_tree_depth().unwrap(), 0);
    }
}
