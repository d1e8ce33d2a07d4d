use std::io::Write;

use crate::coding::FieldElem;
use crate::error::{Error, Result};

/// What one node did or heard in one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotRecord {
    /// The node transmitted this packet (and therefore heard nothing).
    Transmit(FieldElem),
    /// Exactly one neighbor transmitted; `from` is the ground-truth sender.
    Receive { from: usize, value: FieldElem },
    /// Both neighbors transmitted; both packets are lost.
    Collision,
    /// Nobody nearby transmitted.
    Idle,
}

impl SlotRecord {
    pub fn action(&self) -> &'static str {
        match self {
            SlotRecord::Transmit(_) => "tx",
            SlotRecord::Receive { .. } => "rx",
            SlotRecord::Collision => "collision",
            SlotRecord::Idle => "idle",
        }
    }

    pub fn value(&self) -> Option<FieldElem> {
        match *self {
            SlotRecord::Transmit(v) | SlotRecord::Receive { value: v, .. } => Some(v),
            _ => None,
        }
    }
}

/// Applies the half-duplex collision rule to one slot.
///
/// `tx[i]` is node `i + 1`'s packet, if it transmits. A listening node
/// receives iff exactly one of its (at most two) neighbors transmits.
pub(crate) fn resolve_slot(tx: &[Option<FieldElem>]) -> Vec<SlotRecord> {
    let m = tx.len();
    (0..m)
        .map(|i| {
            if let Some(v) = tx[i] {
                return SlotRecord::Transmit(v);
            }
            let left = (i > 0).then(|| tx[i - 1]).flatten().map(|v| (i, v));
            let right = (i + 1 < m).then(|| tx[i + 1]).flatten().map(|v| (i + 2, v));
            match (left, right) {
                (None, None) => SlotRecord::Idle,
                (Some((from, value)), None) | (None, Some((from, value))) => {
                    SlotRecord::Receive { from, value }
                }
                (Some(_), Some(_)) => SlotRecord::Collision,
            }
        })
        .collect()
}

/// Slot-by-slot record of a run on the global clock.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    period: usize,
    offsets: Vec<usize>,
    records: Vec<Vec<SlotRecord>>,
}

impl SimTrace {
    pub(crate) fn new(period: usize, offsets: Vec<usize>) -> Self {
        SimTrace {
            period,
            offsets,
            records: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, slot: Vec<SlotRecord>) {
        debug_assert_eq!(slot.len(), self.offsets.len());
        self.records.push(slot);
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Normalized offsets `τ_1, …, τ_M`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn nodes(&self) -> usize {
        self.offsets.len()
    }

    /// Number of simulated global slots.
    pub fn slots(&self) -> usize {
        self.records.len()
    }

    /// Record of node `i` (1-based) in global slot `k`.
    pub fn record(&self, k: usize, i: usize) -> SlotRecord {
        self.records[k][i - 1]
    }

    pub fn slot(&self, k: usize) -> &[SlotRecord] {
        &self.records[k]
    }

    /// Writes `slot,node,action,value` rows (value empty when absent).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::invalid(format!("trace export failed: {e}"));
        w.write_record(["slot", "node", "action", "value"]).map_err(io)?;
        for (k, slot) in self.records.iter().enumerate() {
            for (i, rec) in slot.iter().enumerate() {
                let value = rec.value().map(|v| v.to_string()).unwrap_or_default();
                w.write_record([k.to_string(), (i + 1).to_string(), rec.action().into(), value])
                    .map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::invalid(format!("trace export failed: {e}")))
    }
}
