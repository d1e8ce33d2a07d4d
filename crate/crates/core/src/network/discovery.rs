//! Offset discovery by initialization frames.
//!
//! Before sending data, the transmitter sends one all-ones frame followed
//! by `P f_i` unit frames (the `a`-th unit frame has a single `1` in packet
//! `a`); earlier frames carry zero packets. Two received `1`s from the
//! transmitter that are `aP` slots apart must be packet `a` of the all-ones
//! frame and of unit frame `a`, which pins the transmitter's offset to the
//! position of the `a`-th one in its sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::activity::{activity_signal, identify_senders, NodeView};
use super::sim::channel_trace_with;
use super::trace::{SimTrace, SlotRecord};
use crate::coding::{Field, FieldElem};
use crate::error::{Error, Result};
use crate::protocol::SequenceSet;

/// Marker value carried by initialization packets.
pub const MARKER: FieldElem = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandshakeConfig {
    /// Local frame index of the all-ones frame; earlier frames are zeros.
    pub start_frame: usize,
    /// Periods the receiver may extend its buffer beyond `P f_i + 1` when
    /// no marker pair has been seen yet.
    pub timeout_periods: usize,
    /// Seed for the data packets of every other frame and node.
    pub seed: u64,
}

impl Default for HandshakeConfig {
    fn default() -> Self {
        HandshakeConfig {
            start_frame: 1,
            timeout_periods: 2,
            seed: 0,
        }
    }
}

/// Simulates the channel while `transmitter` runs its initialization;
/// every other node sends random data on its own schedule.
pub fn simulate_handshake(
    set: &SequenceSet,
    offsets: &[i64],
    transmitter: usize,
    field: &Field,
    config: &HandshakeConfig,
) -> Result<SimTrace> {
    let seq = set
        .get(transmitter)
        .ok_or_else(|| Error::invalid(format!("transmitter {transmitter} outside 1..={}", set.len())))?;
    let p = set.period() as i64;
    let tau = offsets
        .get(transmitter - 1)
        .ok_or_else(|| Error::invalid("missing transmitter offset"))?
        .rem_euclid(p);
    let weight = seq.weight() as i64;
    let ranks = seq.one_ranks();
    let start = config.start_frame as i64;
    let frames = config.start_frame + seq.weight() + 3 + config.timeout_periods;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let q = field.order();

    channel_trace_with(set, offsets, frames * set.period(), |node, k| {
        let data = rng.random_range(0..q);
        if node != transmitter {
            return data;
        }
        let local = k as i64 - tau;
        let frame = local.div_euclid(p) - start;
        let rank = ranks[local.rem_euclid(p) as usize].expect("transmitting slot") as i64;
        match frame {
            f if f < 0 => 0,
            0 => MARKER,
            f if f <= weight => if rank == f - 1 { MARKER } else { 0 },
            _ => data,
        }
    })
}

/// Result of a successful discovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveredOffset {
    /// Transmitter offset modulo `P`.
    pub offset: usize,
    /// Global slots of the marker pair.
    pub pair: (usize, usize),
    /// The pair is `multiple · P` slots apart.
    pub multiple: usize,
    /// Buffered window `[start, end)` used.
    pub window: (usize, usize),
}

/// Node `receiver` recovers the offset of its neighbor `transmitter` from
/// a handshake trace.
///
/// Senders are separated with [`identify_senders`] on the receiver's local
/// frame 0; the accepted hypothesis labels every later slot as well, since
/// all schedules are periodic. Each candidate offset is verified against
/// the whole buffer: every packet labelled as the transmitter's must fall
/// on one of its transmission slots and carry the value the handshake
/// predicts.
pub fn discover_offset(
    trace: &SimTrace,
    set: &SequenceSet,
    receiver: usize,
    transmitter: usize,
    config: &HandshakeConfig,
) -> Result<DiscoveredOffset> {
    if receiver.abs_diff(transmitter) != 1 {
        return Err(Error::invalid("receiver and transmitter must be neighbors"));
    }
    let seq = set
        .get(transmitter)
        .ok_or_else(|| Error::invalid(format!("transmitter {transmitter} outside 1..={}", set.len())))?;
    let p = set.period();
    let own_offset = trace.offsets()[receiver - 1];
    let view = NodeView::from_set(set, receiver, own_offset, own_offset)?;
    let hypothesis = identify_senders(&activity_signal(trace, receiver)?, &view)?.hypothesis;
    let sender_offset = if transmitter < receiver { hypothesis.0 } else { hypothesis.1 };

    // value of every packet the receiver attributes to the transmitter
    let from_tx = |k: usize| -> Option<FieldElem> {
        match trace.record(k, receiver) {
            SlotRecord::Receive { value, .. } if seq.bit(k as i64 - sender_offset as i64) => Some(value),
            _ => None,
        }
    };

    let w0 = (0..trace.slots())
        .find(|&k| from_tx(k) == Some(MARKER))
        .ok_or_else(|| Error::DiscoveryFailed(format!(
            "node {receiver} never received a marker packet from node {transmitter}"
        )))?;

    let weight = seq.weight();
    let ones = seq.ones();
    let base_len = (weight + 1) * p;
    let mut end = (w0 + base_len).min(trace.slots());
    let limit = (w0 + base_len + config.timeout_periods * p).min(trace.slots());
    loop {
        for g1 in (w0..(w0 + p).min(end)).filter(|&k| from_tx(k) == Some(MARKER)) {
            for a in 1..=weight {
                let g2 = g1 + a * p;
                if g2 >= end || from_tx(g2) != Some(MARKER) {
                    continue;
                }
                let offset = (g2 + p - ones[a - 1]) % p;
                if verify(offset, w0, end, p, weight, set, transmitter, &from_tx) {
                    return Ok(DiscoveredOffset {
                        offset,
                        pair: (g1, g2),
                        multiple: a,
                        window: (w0, end),
                    });
                }
            }
        }
        if end >= limit {
            break;
        }
        end = (end + p).min(limit);
    }
    Err(Error::DiscoveryFailed(format!(
        "no consistent marker pair from node {transmitter} in slots [{w0}, {end}) at node {receiver}"
    )))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    offset: usize,
    w0: usize,
    end: usize,
    p: usize,
    weight: usize,
    set: &SequenceSet,
    transmitter: usize,
    from_tx: &impl Fn(usize) -> Option<FieldElem>,
) -> bool {
    let seq = &set.sequences()[transmitter - 1];
    let ranks = seq.one_ranks();
    let first_frame = (w0 as i64 - offset as i64).div_euclid(p as i64);
    (w0..end).all(|k| {
        let Some(value) = from_tx(k) else { return true };
        let local = k as i64 - offset as i64;
        let Some(rank) = ranks[local.rem_euclid(p as i64) as usize] else {
            return false;
        };
        match local.div_euclid(p as i64) - first_frame {
            0 => value == MARKER,
            f if f as usize <= weight => value == if rank as i64 == f - 1 { MARKER } else { 0 },
            _ => true,
        }
    })
}

/// Runs the handshake and the discovery in one go.
pub fn run_offset_discovery(
    set: &SequenceSet,
    offsets: &[i64],
    transmitter: usize,
    receiver: usize,
    field: &Field,
    config: &HandshakeConfig,
) -> Result<DiscoveredOffset> {
    let trace = simulate_handshake(set, offsets, transmitter, field, config)?;
    discover_offset(&trace, set, receiver, transmitter, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{construct_sequences, DutyFactor};

    fn thirds(m: usize) -> SequenceSet {
        construct_sequences(&vec![DutyFactor::new(1, 3).unwrap(); m]).unwrap()
    }

    #[test]
    fn two_nodes_exact_offset() {
        let set = thirds(2);
        let field = Field::new(11).unwrap();
        let cfg = HandshakeConfig::default();
        for tau in [7, 0, 26] {
            let found = run_offset_discovery(&set, &[tau, 3], 1, 2, &field, &cfg).unwrap();
            assert_eq!(found.offset, tau as usize);
        }
    }

    #[test]
    fn right_neighbor_discovery() {
        let set = thirds(3);
        let field = Field::new(11).unwrap();
        let cfg = HandshakeConfig::default();
        let found = run_offset_discovery(&set, &[4, 0, 19], 3, 2, &field, &cfg).unwrap();
        assert_eq!(found.offset, 19);
    }

    #[test]
    fn non_neighbors_rejected() {
        let set = thirds(3);
        let field = Field::new(11).unwrap();
        let cfg = HandshakeConfig::default();
        assert!(run_offset_discovery(&set, &[0, 0, 0], 1, 3, &field, &cfg).is_err());
    }

    #[test]
    fn silent_link_fails_cleanly() {
        // node 2 transmits all the time, so it never hears node 1
        let set = construct_sequences(&[DutyFactor::new(1, 3).unwrap(), DutyFactor::new(3, 3).unwrap()]).unwrap();
        let field = Field::new(11).unwrap();
        let err = run_offset_discovery(&set, &[2, 0], 1, 2, &field, &HandshakeConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DiscoveryFailed(_)));
    }
}
