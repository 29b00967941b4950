use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

use super::cells::{external_symbol, CellArray, HypercubeEdge, Permutation, Symbol, STAR};
use super::protocol::Protocol;

/// Asks Alice for the symbol on `loc` and checks it against the alphabet.
pub(crate) fn checked_write(
    p: &Protocol,
    history: &[usize],
    array: &CellArray,
    loc: usize,
) -> Result<Symbol> {
    let sym = p.alice().write(history, array, loc)?;
    if sym == STAR || sym > p.alphabet() {
        return Err(Error::Contract(format!(
            "{} wrote symbol {sym} on location {} (alphabet 1..={})",
            p.name(),
            loc + 1,
            p.alphabet()
        )));
    }
    Ok(sym)
}

/// Runs the first `n - 1` steps of `sigma` and returns the resulting array,
/// whose only star is at `sigma`'s last element.
pub fn alice_edge(p: &Protocol, sigma: &[usize]) -> Result<CellArray> {
    let n = sigma.len();
    let mut array = CellArray::empty(n, p.alphabet());
    for i in 0..n.saturating_sub(1) {
        let sym = checked_write(p, &sigma[..i], &array, sigma[i])?;
        array.set(sigma[i], sym);
    }
    Ok(array)
}

/// One play of the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRunRecord {
    pub sigma: Permutation,
    pub b: Symbol,
    /// `(location, symbol)` per step, the last entry being the forced write.
    pub transcript: Vec<(usize, Symbol)>,
    pub final_array: CellArray,
    pub edge: HypercubeEdge,
    /// Output of the native decoder, if the protocol has one.
    pub bob_output: Option<Vec<usize>>,
}

/// Plays `sigma` followed by the forced symbol `b`.
///
/// When the protocol carries a native decoder its output is checked to contain
/// the last arrival; a miss is returned as [`Error::DecoderViolation`].
pub fn run_protocol(p: &Protocol, sigma: &Permutation, b: Symbol) -> Result<GameRunRecord> {
    let n = p.n();
    if sigma.len() != n {
        return Err(Error::InvalidParameter(format!(
            "permutation has length {}, protocol expects {n}",
            sigma.len()
        )));
    }
    if b == STAR || b > p.alphabet() {
        return Err(Error::InvalidParameter(format!(
            "final symbol {b} outside alphabet 1..={}",
            p.alphabet()
        )));
    }
    let order = sigma.as_slice();
    let mut array = CellArray::empty(n, p.alphabet());
    let mut transcript = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let sym = checked_write(p, &order[..i], &array, order[i])?;
        array.set(order[i], sym);
        transcript.push((order[i], sym));
    }
    let last = sigma.last();
    let edge = HypercubeEdge::new(array.clone())?;
    array.set(last, b);
    transcript.push((last, b));

    let bob_output = match p.bob() {
        Some(bob) => {
            let mut j = bob.decode(&array)?;
            j.sort_unstable();
            j.dedup();
            if j.binary_search(&last).is_err() {
                return Err(Error::DecoderViolation {
                    sigma: sigma.to_one_based(),
                    b: external_symbol(b, p.alphabet()),
                    last: last + 1,
                    output: j.iter().map(|l| l + 1).collect(),
                });
            }
            Some(j)
        }
        None => None,
    };

    Ok(GameRunRecord {
        sigma: sigma.clone(),
        b,
        transcript,
        final_array: array,
        edge,
        bob_output,
    })
}

#[derive(Serialize)]
struct TranscriptEntry {
    location: usize,
    symbol: u8,
}

#[derive(Serialize)]
struct EdgeJson {
    base: String,
    free_location: usize,
}

impl Serialize for GameRunRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let w = self.final_array.alphabet();
        let mut st = serializer.serialize_struct("GameRunRecord", 7)?;
        st.serialize_field("n", &self.sigma.len())?;
        st.serialize_field("sigma", &self.sigma.to_one_based())?;
        st.serialize_field("b", &external_symbol(self.b, w))?;
        let transcript: Vec<TranscriptEntry> = self
            .transcript
            .iter()
            .map(|&(l, s)| TranscriptEntry {
                location: l + 1,
                symbol: external_symbol(s, w),
            })
            .collect();
        st.serialize_field("transcript", &transcript)?;
        st.serialize_field("final_array", &self.final_array.render())?;
        st.serialize_field(
            "edge",
            &EdgeJson {
                base: self.edge.base().render(),
                free_location: self.edge.free_location() + 1,
            },
        )?;
        st.serialize_field(
            "bob_output",
            &self
                .bob_output
                .as_ref()
                .map(|j| j.iter().map(|l| l + 1).collect::<Vec<_>>()),
        )?;
        st.end()
    }
}
