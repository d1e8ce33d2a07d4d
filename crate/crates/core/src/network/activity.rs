//! Channel activity signals and header-free sender identification.

use std::fmt;
use std::str::FromStr;

use super::trace::{SimTrace, SlotRecord};
use crate::error::{Error, Result};
use crate::protocol::{ProtocolSequence, SequenceSet};

/// What a node observes in one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActivitySymbol {
    /// `Δ`: the node itself is transmitting.
    Transmit,
    /// `0`: silence.
    Idle,
    /// `1`: exactly one neighbor transmitted.
    Single,
    /// `*`: both neighbors transmitted.
    Collision,
}

impl ActivitySymbol {
    pub fn as_char(self) -> char {
        match self {
            ActivitySymbol::Transmit => 'Δ',
            ActivitySymbol::Idle => '0',
            ActivitySymbol::Single => '1',
            ActivitySymbol::Collision => '*',
        }
    }

    fn from_record(rec: SlotRecord) -> Self {
        match rec {
            SlotRecord::Transmit(_) => ActivitySymbol::Transmit,
            SlotRecord::Receive { .. } => ActivitySymbol::Single,
            SlotRecord::Collision => ActivitySymbol::Collision,
            SlotRecord::Idle => ActivitySymbol::Idle,
        }
    }
}

/// A window of activity symbols observed by one node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChannelActivitySignal {
    pub symbols: Vec<ActivitySymbol>,
}

impl ChannelActivitySignal {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count(&self, symbol: ActivitySymbol) -> usize {
        self.symbols.iter().filter(|&&s| s == symbol).count()
    }
}

impl fmt::Display for ChannelActivitySignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl FromStr for ChannelActivitySignal {
    type Err = Error;

    /// Accepts `Δ` (or `D`), `0`, `1` and `*`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'Δ' | 'D' => Ok(ActivitySymbol::Transmit),
                '0' => Ok(ActivitySymbol::Idle),
                '1' => Ok(ActivitySymbol::Single),
                '*' => Ok(ActivitySymbol::Collision),
                other => Err(Error::parse(1, format!("invalid activity symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelActivitySignal { symbols })
    }
}

/// Activity of node `i` over global slots `[start, start + len)`.
pub fn activity_window(trace: &SimTrace, i: usize, start: usize, len: usize) -> Result<ChannelActivitySignal> {
    if i == 0 || i > trace.nodes() {
        return Err(Error::invalid(format!("node {i} outside 1..={}", trace.nodes())));
    }
    if start + len > trace.slots() {
        return Err(Error::invalid(format!(
            "window [{start}, {}) exceeds the {} simulated slots",
            start + len,
            trace.slots()
        )));
    }
    Ok(ChannelActivitySignal {
        symbols: (start..start + len)
            .map(|k| ActivitySymbol::from_record(trace.record(k, i)))
            .collect(),
    })
}

/// Activity of node `i` over its local frame 0, i.e. global slots
/// `[τ_i, τ_i + P)`.
pub fn activity_signal(trace: &SimTrace, i: usize) -> Result<ChannelActivitySignal> {
    let start = *trace
        .offsets()
        .get(i.wrapping_sub(1))
        .ok_or_else(|| Error::invalid(format!("node {i} outside 1..={}", trace.nodes())))?;
    activity_window(trace, i, start, trace.period())
}

/// What node `i` knows when labelling an observed window: its own schedule
/// and offset and its neighbors' sequences (but not their offsets).
#[derive(Clone, Copy, Debug)]
pub struct NodeView<'a> {
    pub node: usize,
    pub own: &'a ProtocolSequence,
    pub own_offset: usize,
    /// `s_{i−1}`, absent at the left end.
    pub left: Option<&'a ProtocolSequence>,
    /// `s_{i+1}`, absent at the right end.
    pub right: Option<&'a ProtocolSequence>,
    /// Global slot of the first observed symbol.
    pub window_start: usize,
}

impl<'a> NodeView<'a> {
    pub fn from_set(set: &'a SequenceSet, node: usize, own_offset: usize, window_start: usize) -> Result<Self> {
        let own = set
            .get(node)
            .ok_or_else(|| Error::invalid(format!("node {node} outside 1..={}", set.len())))?;
        Ok(NodeView {
            node,
            own,
            own_offset,
            left: set.get(node.wrapping_sub(1)),
            right: set.get(node + 1),
            window_start,
        })
    }
}

/// Sender of every single-packet slot in an observed window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenderLabels {
    /// Per observed slot: the neighbor (node index) that sent the packet.
    pub labels: Vec<Option<usize>>,
    /// Offsets `(τ'_{i−1}, τ'_{i+1})` of the accepted hypothesis on the
    /// global clock.
    pub hypothesis: (usize, usize),
}

impl SenderLabels {
    /// Number of slots attributed to node `n`.
    pub fn count_from(&self, n: usize) -> usize {
        self.labels.iter().filter(|&&l| l == Some(n)).count()
    }

    /// 1-based positions in the window attributed to node `n`.
    pub fn positions_from(&self, n: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(k, &l)| (l == Some(n)).then_some(k + 1))
            .collect()
    }
}

/// Labels the sender of every `1` in `signal` without packet headers.
///
/// Every neighbor offset pair `(τ'_{i−1}, τ'_{i+1}) ∈ {0..P−1}²` is tried in
/// lexicographic order; the first whose predicted activity equals the
/// observation is accepted, and each single-packet slot is attributed to
/// the neighbor the hypothesis has transmitting there. For consecutively
/// 3-wise shift-invariant sequences every consistent hypothesis yields the
/// true labels, so the tie-break does not matter.
pub fn identify_senders(signal: &ChannelActivitySignal, view: &NodeView<'_>) -> Result<SenderLabels> {
    let p = view.own.period();
    for s in [view.left, view.right].into_iter().flatten() {
        if s.period() != p {
            return Err(Error::invalid("neighbor sequences must share the observer's period"));
        }
    }
    let w = view.window_start as i64;
    let own: Vec<bool> = (0..signal.len() as i64)
        .map(|l| view.own.bit(w + l - view.own_offset as i64))
        .collect();
    for (l, (&sym, &tx)) in signal.symbols.iter().zip(&own).enumerate() {
        if (sym == ActivitySymbol::Transmit) != tx {
            return Err(Error::InconsistentObservation(format!(
                "slot {} of the window disagrees with node {}'s own schedule",
                l + 1,
                view.node
            )));
        }
    }

    let shifts = |s: Option<&ProtocolSequence>| if s.is_some() { p } else { 1 };
    let predict = |s: Option<&ProtocolSequence>, tau: usize, l: usize| {
        s.is_some_and(|s| s.bit(w + l as i64 - tau as i64))
    };
    for a in 0..shifts(view.left) {
        'hyp: for b in 0..shifts(view.right) {
            for (l, &sym) in signal.symbols.iter().enumerate() {
                if own[l] {
                    continue;
                }
                let expected = match (predict(view.left, a, l), predict(view.right, b, l)) {
                    (false, false) => ActivitySymbol::Idle,
                    (true, true) => ActivitySymbol::Collision,
                    _ => ActivitySymbol::Single,
                };
                if expected != sym {
                    continue 'hyp;
                }
            }
            let labels = signal
                .symbols
                .iter()
                .enumerate()
                .map(|(l, &sym)| {
                    (sym == ActivitySymbol::Single).then(|| {
                        if predict(view.left, a, l) {
                            view.node - 1
                        } else {
                            view.node + 1
                        }
                    })
                })
                .collect();
            return Ok(SenderLabels {
                labels,
                hypothesis: (a, b),
            });
        }
    }
    Err(Error::InconsistentObservation(format!(
        "no neighbor offsets reproduce the activity observed at node {}",
        view.node
    )))
}
