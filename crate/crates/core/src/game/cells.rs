use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cell value. `1..=w` are symbols, [`STAR`] marks an empty cell.
pub type Symbol = u8;

pub const STAR: Symbol = 0;

/// Largest supported alphabet.
pub const MAX_ALPHABET: u8 = 9;

/// Arrays up to this length can be packed into a `u64` key (4 bits per cell).
pub const MAX_PACKED_LEN: usize = 16;

/// The array Alice fills and Bob reads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellArray {
    w: u8,
    cells: Vec<Symbol>,
}

impl CellArray {
    pub fn empty(n: usize, w: u8) -> Self {
        CellArray {
            w,
            cells: vec![STAR; n],
        }
    }

    pub fn from_cells(w: u8, cells: Vec<Symbol>) -> Result<Self> {
        if w == 0 || w > MAX_ALPHABET {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {w} outside 1..={MAX_ALPHABET}"
            )));
        }
        if let Some(bad) = cells.iter().find(|&&c| c > w) {
            return Err(Error::InvalidParameter(format!(
                "cell value {bad} outside alphabet 1..={w}"
            )));
        }
        Ok(CellArray { w, cells })
    }

    /// Binary array from 0/1 values (external notation).
    pub fn from_bits(bits: &[bool]) -> Self {
        CellArray {
            w: 2,
            cells: bits.iter().map(|&b| bit_symbol(b)).collect(),
        }
    }

    /// Parses the external rendering: `*` for empty cells, `0`/`1` for binary
    /// symbols, digits `1..=w` otherwise.
    pub fn parse(s: &str, w: u8) -> Result<Self> {
        let cells = s
            .chars()
            .map(|ch| match ch {
                '*' => Ok(STAR),
                d if d.is_ascii_digit() => {
                    let v = d as u8 - b'0';
                    let sym = if w == 2 { v + 1 } else { v };
                    if sym == 0 || sym > w {
                        Err(Error::InvalidParameter(format!(
                            "symbol '{d}' outside alphabet of size {w}"
                        )))
                    } else {
                        Ok(sym)
                    }
                }
                other => Err(Error::InvalidParameter(format!(
                    "unexpected character '{other}' in array"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        CellArray::from_cells(w, cells)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn alphabet(&self) -> u8 {
        self.w
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn get(&self, loc: usize) -> Symbol {
        self.cells[loc]
    }

    pub fn set(&mut self, loc: usize, sym: Symbol) {
        self.cells[loc] = sym;
    }

    pub fn is_star(&self, loc: usize) -> bool {
        self.cells[loc] == STAR
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != STAR).count()
    }

    pub fn stars(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == STAR)
            .map(|(i, _)| i)
    }

    pub fn filled(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != STAR)
            .map(|(i, _)| i)
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|&c| c != STAR)
    }

    /// Locations holding `sym`.
    pub fn positions_of(&self, sym: Symbol) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == sym)
            .map(|(i, _)| i)
            .collect()
    }

    /// Binary value of a cell: `Some(false)` for external 0, `Some(true)` for 1.
    pub fn bit(&self, loc: usize) -> Option<bool> {
        match self.cells[loc] {
            STAR => None,
            s => Some(s == 2),
        }
    }

    /// 4 bits per cell, cell 0 in the low nibble. Requires `len() <= 16`.
    pub fn pack(&self) -> u64 {
        debug_assert!(self.cells.len() <= MAX_PACKED_LEN);
        self.cells
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (u64::from(c) << (4 * i)))
    }

    pub fn unpack(key: u64, n: usize, w: u8) -> Self {
        let cells = (0..n).map(|i| ((key >> (4 * i)) & 0xf) as Symbol).collect();
        CellArray { w, cells }
    }

    /// External rendering: binary symbols as `0`/`1`, others as digits, `*` for stars.
    pub fn render(&self) -> String {
        self.cells
            .iter()
            .map(|&c| render_symbol(c, self.w))
            .collect()
    }
}

impl fmt::Display for CellArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Internal symbol for an external bit.
pub fn bit_symbol(b: bool) -> Symbol {
    if b {
        2
    } else {
        1
    }
}

pub fn render_symbol(sym: Symbol, w: u8) -> char {
    match sym {
        STAR => '*',
        s if w == 2 => (b'0' + s - 1) as char,
        s => (b'0' + s) as char,
    }
}

/// External value of a symbol (`0`/`1` for binary alphabets).
pub fn external_symbol(sym: Symbol, w: u8) -> u8 {
    if w == 2 {
        sym - 1
    } else {
        sym
    }
}

/// Inverse of [`external_symbol`].
pub fn internal_symbol(ext: u8, w: u8) -> Result<Symbol> {
    let sym = if w == 2 { ext.wrapping_add(1) } else { ext };
    if sym == 0 || sym > w {
        return Err(Error::InvalidParameter(format!(
            "symbol {ext} outside alphabet of size {w}"
        )));
    }
    Ok(sym)
}

/// An arrival order of the `n` locations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// From 0-based locations.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &l in &order {
            if l >= n || seen[l] {
                return Err(Error::InvalidParameter(format!(
                    "{:?} is not a permutation of 0..{n}",
                    order
                )));
            }
            seen[l] = true;
        }
        Ok(Permutation(order))
    }

    /// From 1-based locations, as written externally.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidParameter(
                "locations are 1-based; got 0".into(),
            ));
        }
        Permutation::new(order.iter().map(|&l| l - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Permutation(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("empty permutation")
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_one_based(&v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.to_one_based()
    }
}

/// A hypercube (or Hamming-graph) edge: an array with exactly one empty cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HypercubeEdge {
    base: CellArray,
    free: usize,
}

impl HypercubeEdge {
    pub fn new(base: CellArray) -> Result<Self> {
        let stars: Vec<usize> = base.stars().collect();
        match stars.as_slice() {
            [free] => Ok(HypercubeEdge { free: *free, base }),
            _ => Err(Error::InvalidParameter(format!(
                "edge base {} must have exactly one star",
                base
            ))),
        }
    }

    pub fn base(&self) -> &CellArray {
        &self.base
    }

    pub fn free_location(&self) -> usize {
        self.free
    }

    /// The endpoint with the free cell set to `sym`.
    pub fn endpoint(&self, sym: Symbol) -> CellArray {
        let mut v = self.base.clone();
        v.set(self.free, sym);
        v
    }

    pub fn endpoints(&self) -> Vec<CellArray> {
        (1..=self.base.alphabet()).map(|s| self.endpoint(s)).collect()
    }

    pub fn contains(&self, v: &CellArray) -> bool {
        v.len() == self.base.len()
            && v.cells()
                .iter()
                .zip(self.base.cells())
                .enumerate()
                .all(|(i, (a, b))| i == self.free || a == b)
    }

    /// Whether two edges share a vertex.
    pub fn collides(&self, other: &HypercubeEdge) -> bool {
        self.base
            .cells()
            .iter()
            .zip(other.base.cells())
            .enumerate()
            .all(|(i, (a, b))| i == self.free || i == other.free || a == b)
    }
}
