//! The `(2j+1)`-ary protocol `Pi_j`.
//!
//! Phase 0 writes `2j+1` on the first `t_0 - t_1` arrivals. The `t_1` cells
//! still empty form the set `S`; phase 1 writes the deletion-code word for the
//! color of `S` over the symbols `{2j-1, 2j}`. After `t_1 - t_2` such writes
//! the rest of the run is `Pi_{j-1}` on `S`, with `2j` read as `2j-1`. The
//! innermost level writes its codeword on every remaining arrival.
//!
//! Every step depends only on the current array, so the protocol is order
//! oblivious. At level `j` a symbol `s` is read as `min(s, 2j+1)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::coloring::{color_count, symdiff_color};
use crate::codes::greedy::{GreedyDeletionCode, MAX_GREEDY_LEN};
use crate::codes::vt::VtCode;
use crate::error::{Error, Result};
use crate::game::{Alice, Bob, CellArray, Flags, Protocol, Symbol, MAX_ALPHABET, STAR};

/// Largest depth whose alphabet fits in the cell type.
pub const MAX_DEPTH: usize = (MAX_ALPHABET as usize - 1) / 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedParams {
    pub n: usize,
    pub j: usize,
    /// Base cutoff: the schedule never drops below it, and `n <= k0` gives the
    /// trivial protocol, as does a default schedule that fails to shrink.
    pub k0: usize,
    /// Explicit `t_0, ..., t_j`; computed from `k0` when absent.
    #[serde(default)]
    pub schedule: Option<Vec<usize>>,
    /// Accept deletion codes weaker than the schedule requires. The decoder
    /// then falls back to a consistency filter and stays sound.
    #[serde(default)]
    pub weak_codes: bool,
}

impl IteratedParams {
    pub fn new(n: usize, j: usize) -> Self {
        IteratedParams {
            n,
            j,
            k0: 8,
            schedule: None,
            weak_codes: false,
        }
    }
}

/// `ceil(4 log2 x)`, the smallest `c` with `2^c >= x^4`.
pub fn four_log2_ceil(x: usize) -> usize {
    let x4 = (x as u128).pow(4);
    if x4 <= 1 {
        0
    } else {
        (u128::BITS - (x4 - 1).leading_zeros()) as usize
    }
}

/// `t_0 = n`, `t_i = max(k0, ceil(4 log2 t_{i-1}))`.
pub fn default_schedule(n: usize, j: usize, k0: usize) -> Vec<usize> {
    let mut t = vec![n];
    for _ in 0..j {
        let prev = *t.last().expect("non-empty");
        t.push(k0.max(four_log2_ceil(prev)));
    }
    t
}

#[derive(Clone, Debug)]
enum LevelCode {
    Vt(VtCode),
    Greedy(GreedyDeletionCode),
}

impl LevelCode {
    fn word(&self, index: usize) -> Vec<bool> {
        match self {
            LevelCode::Vt(c) => c.encode(index as u64).expect("capacity checked"),
            LevelCode::Greedy(c) => c.word(index),
        }
    }

    fn decode(&self, received: &[bool]) -> Option<usize> {
        match self {
            LevelCode::Vt(c) => c.decode(received).ok().map(|w| c.message(&w) as usize),
            LevelCode::Greedy(c) => c.decode(received).ok(),
        }
    }
}

/// Per-level construction data, outermost first.
#[derive(Clone, Debug)]
struct Level {
    /// Depth of the protocol run at this level.
    depth: usize,
    universe: usize,
    /// Number of codeword symbols written before handing over to the next level.
    written: usize,
    code: LevelCode,
    /// Whether the code corrects every deletion pattern this level produces.
    robust: bool,
}

impl Level {
    fn top(&self) -> Symbol {
        (2 * self.depth + 1) as Symbol
    }

    fn view(&self, s: Symbol) -> Symbol {
        s.min(self.top())
    }

    /// Codeword for the set `s` (positions sorted ascending within the level universe).
    fn codeword(&self, universe: &[usize], s: &[usize]) -> Vec<bool> {
        let ranks: Vec<usize> = s
            .iter()
            .map(|l| universe.binary_search(l).expect("subset of universe"))
            .collect();
        self.code.word(symdiff_color(&ranks, self.universe))
    }
}

/// Description of one level's code, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelInfo {
    pub depth: usize,
    pub universe: usize,
    pub code: &'static str,
    pub code_len: usize,
    pub deletions_needed: usize,
    pub deletions_corrected: usize,
    pub codewords_needed: usize,
    pub codewords_available: u64,
}

#[derive(Clone, Debug)]
pub struct IteratedProtocol {
    params: IteratedParams,
    schedule: Vec<usize>,
    levels: Vec<Level>,
    infos: Vec<LevelInfo>,
}

impl IteratedProtocol {
    pub fn build(params: IteratedParams) -> Result<Self> {
        let IteratedParams { n, j, k0, .. } = params;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if j > MAX_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "depth {j} needs {} symbols; at most {MAX_ALPHABET} are supported",
                2 * j + 1
            )));
        }
        // A default schedule that fails to shrink leaves nothing to recurse on.
        let stalled = params.schedule.is_none()
            && default_schedule(n, j, k0).windows(2).any(|w| w[1] >= w[0]);
        let trivial = j == 0 || (params.schedule.is_none() && n <= k0) || stalled;
        if trivial {
            let schedule = if j == 0 { vec![n] } else { vec![n; j + 1] };
            return Ok(IteratedProtocol {
                params,
                schedule,
                levels: Vec::new(),
                infos: Vec::new(),
            });
        }
        let schedule = match &params.schedule {
            Some(s) => s.clone(),
            None => default_schedule(n, j, k0),
        };
        if schedule.len() != j + 1 || schedule[0] != n {
            return Err(Error::InvalidParameter(format!(
                "schedule must list t_0 = n through t_{j}; got {schedule:?}"
            )));
        }
        if schedule.windows(2).any(|w| w[1] >= w[0]) || schedule[j] < 2 {
            return Err(Error::InvalidParameter(format!(
                "schedule {schedule:?} must be strictly decreasing and end at 2 or more"
            )));
        }

        let mut levels = Vec::with_capacity(j);
        let mut infos = Vec::with_capacity(j);
        for i in 0..j {
            let depth = j - i;
            let universe = schedule[i];
            let code_len = schedule[i + 1];
            let written = if depth >= 2 {
                schedule[i + 1] - schedule[i + 2]
            } else {
                code_len - 1
            };
            let needed_d = code_len - written;
            let needed_words = color_count(universe);
            let (code, corrected, available) =
                level_code(code_len, needed_d, needed_words, params.weak_codes)?;
            infos.push(LevelInfo {
                depth,
                universe,
                code: match code {
                    LevelCode::Vt(_) => "vt",
                    LevelCode::Greedy(_) => "greedy",
                },
                code_len,
                deletions_needed: needed_d,
                deletions_corrected: corrected,
                codewords_needed: needed_words,
                codewords_available: available,
            });
            levels.push(Level {
                depth,
                universe,
                written,
                code,
                robust: corrected >= needed_d,
            });
        }
        Ok(IteratedProtocol {
            params,
            schedule,
            levels,
            infos,
        })
    }

    pub fn params(&self) -> &IteratedParams {
        &self.params
    }

    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }

    pub fn alphabet(&self) -> Symbol {
        (2 * self.params.j + 1) as Symbol
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[LevelInfo] {
        &self.infos
    }

    /// Symbols written in each phase: `t_i - t_{i+1}` and finally `t_j - 1`.
    pub fn phase_budgets(&self) -> Vec<usize> {
        let t = &self.schedule;
        let j = self.params.j;
        if self.is_trivial() {
            return vec![self.params.n - 1];
        }
        (0..=j)
            .map(|i| if i < j { t[i] - t[i + 1] } else { t[j] - 1 })
            .collect()
    }

    /// Phase whose writes use `sym`: `2j+1` is phase 0, `{2(j-i)+1, 2(j-i)+2}` phase `i`.
    pub fn phase_of_symbol(&self, sym: Symbol) -> usize {
        self.params.j - (sym as usize - 1) / 2
    }

    pub fn protocol(&self) -> Protocol {
        let shared = Arc::new(self.clone());
        Protocol::new(
            format!("iterated_j{}", self.params.j),
            self.params.n,
            self.alphabet(),
            Arc::new(IteratedAlice(shared.clone())),
        )
        .with_flags(Flags {
            order_oblivious: true,
            assignment_oblivious: false,
        })
        .with_bob(Arc::new(IteratedBob(shared)))
    }
}

fn level_code(
    len: usize,
    deletions: usize,
    needed: usize,
    weak: bool,
) -> Result<(LevelCode, usize, u64)> {
    if deletions <= 1 {
        let code = VtCode::new(len, 0)?;
        if code.capacity() < needed as u64 {
            return Err(Error::CodeUnavailable(format!(
                "VT code of length {len} encodes {} messages, {needed} colors required",
                code.capacity()
            )));
        }
        return Ok((LevelCode::Vt(code), 1, code.capacity()));
    }
    if len > MAX_GREEDY_LEN {
        return Err(Error::CodeUnavailable(format!(
            "{deletions}-deletion code of length {len} required; greedy construction stops at length {MAX_GREEDY_LEN}"
        )));
    }
    let mut d = deletions;
    loop {
        let code = GreedyDeletionCode::build(len, d)?;
        if code.size() >= needed {
            let size = code.size() as u64;
            return Ok((LevelCode::Greedy(code), d, size));
        }
        if !weak || d == 1 {
            return Err(Error::CodeUnavailable(format!(
                "greedy {d}-deletion code of length {len} has {} words, {needed} colors required",
                code.size()
            )));
        }
        d -= 1;
    }
}

struct IteratedAlice(Arc<IteratedProtocol>);

impl Alice for IteratedAlice {
    fn write(&self, _history: &[usize], array: &CellArray, loc: usize) -> Result<Symbol> {
        let proto = &self.0;
        let mut universe: Vec<usize> = (0..array.len()).collect();
        for (i, level) in proto.levels.iter().enumerate() {
            let top = level.top();
            let filled = universe.iter().filter(|&&l| !array.is_star(l)).count();
            if filled < proto.schedule[i] - proto.schedule[i + 1] {
                return Ok(top);
            }
            let s: Vec<usize> = universe
                .iter()
                .copied()
                .filter(|&l| array.is_star(l) || level.view(array.get(l)) < top)
                .collect();
            let filled_s = s.iter().filter(|&&l| !array.is_star(l)).count();
            if filled_s < level.written {
                let word = level.codeword(&universe, &s);
                let rank = s.binary_search(&loc).map_err(|_| {
                    Error::Contract(format!("location {} outside the open set", loc + 1))
                })?;
                return Ok(top - 2 + Symbol::from(word[rank]));
            }
            universe = s;
        }
        Ok(1)
    }
}

struct IteratedBob(Arc<IteratedProtocol>);

impl Bob for IteratedBob {
    fn decode(&self, v: &CellArray) -> Result<Vec<usize>> {
        let proto = &self.0;
        let mut universe: Vec<usize> = (0..v.len()).collect();
        for (i, level) in proto.levels.iter().enumerate() {
            let top = level.top();
            let tops: Vec<usize> = universe
                .iter()
                .copied()
                .filter(|&l| level.view(v.get(l)) == top)
                .collect();
            let phase0 = proto.schedule[i] - proto.schedule[i + 1];
            if tops.len() == phase0 + 1 {
                return Ok(recover_last(level, &universe, &tops, v));
            }
            if tops.len() != phase0 {
                return Err(Error::Decode(format!(
                    "level {}: {} cells hold symbol {top}, expected {phase0} or {}",
                    level.depth,
                    tops.len(),
                    phase0 + 1
                )));
            }
            universe.retain(|&l| level.view(v.get(l)) < top);
        }
        Ok(universe)
    }
}

/// The last arrival is one of `tops`; the rest of the universe is `S'`.
/// Candidates are those `x` whose set `S' + {x}` has a codeword agreeing with
/// every phase-1 cell. A robust code leaves exactly one.
fn recover_last(level: &Level, universe: &[usize], tops: &[usize], v: &CellArray) -> Vec<usize> {
    let top = level.top();
    let rest: Vec<usize> = universe
        .iter()
        .copied()
        .filter(|&l| v.get(l) != STAR && level.view(v.get(l)) < top)
        .collect();
    let code_syms = [top - 2, top - 1];
    let consistent = |x: usize| -> bool {
        let mut s = rest.clone();
        let pos = s.partition_point(|&l| l < x);
        s.insert(pos, x);
        let word = level.codeword(universe, &s);
        s.iter().enumerate().all(|(r, &l)| {
            let c = v.get(l);
            l == x || !code_syms.contains(&c) || Symbol::from(word[r]) == c - (top - 2)
        })
    };
    if level.robust {
        let received: Vec<bool> = rest
            .iter()
            .filter_map(|&l| {
                let c = v.get(l);
                code_syms.contains(&c).then_some(c == top - 1)
            })
            .collect();
        if let Some(color) = level.code.decode(&received) {
            let ranks: Vec<usize> = rest
                .iter()
                .map(|l| universe.binary_search(l).expect("subset"))
                .collect();
            let hits: Vec<usize> = tops
                .iter()
                .copied()
                .filter(|&x| {
                    let mut r = ranks.clone();
                    r.push(universe.binary_search(&x).expect("subset"));
                    symdiff_color(&r, level.universe) == color
                })
                .collect();
            if let [x] = hits[..] {
                if consistent(x) {
                    return vec![x];
                }
            }
        }
    }
    tops.iter().copied().filter(|&x| consistent(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_values() {
        assert_eq!(four_log2_ceil(64), 24);
        assert_eq!(four_log2_ceil(256), 32);
        assert_eq!(four_log2_ceil(24), 19);
        assert_eq!(default_schedule(64, 1, 8), vec![64, 24]);
        assert_eq!(default_schedule(256, 2, 8), vec![256, 32, 20]);
    }

    #[test]
    fn trivial_cases() {
        let p = IteratedProtocol::build(IteratedParams::new(5, 0)).unwrap();
        assert!(p.is_trivial());
        assert_eq!(p.alphabet(), 1);
        let p = IteratedProtocol::build(IteratedParams::new(6, 1)).unwrap();
        assert!(p.is_trivial());
    }

    #[test]
    fn phase_symbols() {
        let p = IteratedProtocol::build(IteratedParams::new(64, 1)).unwrap();
        assert_eq!(p.phase_of_symbol(3), 0);
        assert_eq!(p.phase_of_symbol(2), 1);
        assert_eq!(p.phase_of_symbol(1), 1);
        assert_eq!(p.phase_budgets(), vec![40, 23]);
    }

    #[test]
    fn collapsed_schedule_rejected() {
        let mut params = IteratedParams::new(20, 2);
        params.k0 = 8;
        // 20 -> 18 -> 17 is fine, but an explicit flat schedule is not
        params.schedule = Some(vec![20, 12, 12]);
        assert!(IteratedProtocol::build(params).is_err());
    }

    #[test]
    fn small_vt_rejected_with_sizes() {
        let mut params = IteratedParams::new(40, 1);
        params.schedule = Some(vec![40, 8]);
        let err = IteratedProtocol::build(params).unwrap_err();
        assert!(matches!(err, Error::CodeUnavailable(_)));
    }
}
