//! Slot-synchronous end-to-end simulator.
//!
//! # Schedule
//!
//! Node `i`'s local frame `t` occupies global slots
//! `[tP + τ_i, (t+1)P + τ_i)`. Slots before `τ_i` belong to frame `−1`,
//! which carries all-zero packets. A neighbor's frame is decoded the moment
//! it ends, and a node builds frame `t` the moment it starts, so a symbol
//! needs at most two frames to cross one hop. The pipeline therefore uses
//! a fixed two-frame hop latency: the frame of node `i` at local time `t`
//! carries
//!
//! * its own source at generation `t`,
//! * forward relay source `j` at generation `t − 2(i − α(j))`,
//! * backward relay source `j` at generation `t − 2(α(j) − i)`,
//!
//! with negative generations standing for all-zero symbols. Receivers
//! attribute packets to senders using the neighbors' (already discovered)
//! offsets.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{NetworkSpec, RelaySets};
use super::trace::{resolve_slot, SimTrace, SlotRecord};
use crate::coding::{
    decode_from_left, decode_from_right, symbols_per_period, ErasedCodeword, Field, FieldElem,
    NestedLayout, NodeCoderState,
};
use crate::error::{Error, Result};
use crate::protocol::SequenceSet;
use crate::Rational;

/// Delivery report for one (source, destination) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub source: usize,
    pub destination: usize,
    /// Generations checked (`0..periods`).
    pub generations: usize,
    /// Generations the destination never decoded.
    pub missing: usize,
    /// Symbols decoded with the wrong value.
    pub symbol_errors: usize,
}

impl Delivery {
    pub fn is_exact(&self) -> bool {
        self.missing == 0 && self.symbol_errors == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOutcome {
    pub trace: SimTrace,
    pub deliveries: Vec<Delivery>,
}

impl SimOutcome {
    /// True iff every destination decoded every checked generation exactly.
    pub fn is_zero_error(&self) -> bool {
        self.deliveries.iter().all(Delivery::is_exact)
    }
}

type SymbolKey = (usize, i64);

/// A validated network ready to be run under different offsets.
#[derive(Clone, Debug)]
pub struct Simulation {
    spec: NetworkSpec,
    set: SequenceSet,
    field: Field,
    relay: Vec<RelaySets>,
    layouts: Vec<NestedLayout>,
    /// Symbols per period for each source (index `j − 1`).
    source_symbols: Vec<usize>,
    ranks: Vec<Vec<Option<usize>>>,
}

impl Simulation {
    /// Checks that the rates translate into whole symbols per period and
    /// fit every node's frame, and that the field is large enough.
    pub fn new(
        spec: &NetworkSpec,
        set: &SequenceSet,
        field: &Field,
        rates: &[Rational],
    ) -> Result<Self> {
        let m = spec.nodes();
        if set.len() != m {
            return Err(Error::invalid(format!(
                "{} sequences for a network of {m} nodes",
                set.len()
            )));
        }
        if rates.len() != spec.source_count() {
            return Err(Error::invalid(format!(
                "{} rates for {} sources",
                rates.len(),
                spec.source_count()
            )));
        }
        let period = set.period();
        let source_symbols = rates
            .iter()
            .map(|&r| symbols_per_period(r, period))
            .collect::<Result<Vec<_>>>()?;
        let relay = spec.relay_sets();
        let mut layouts = Vec::with_capacity(m);
        for i in 1..=m {
            let sets = &relay[i - 1];
            let layout = NestedLayout {
                source: spec.source_at(i).map_or(0, |s| source_symbols[s.id - 1]),
                forward: sets.forward.iter().map(|&j| source_symbols[j - 1]).sum(),
                backward: sets.backward.iter().map(|&j| source_symbols[j - 1]).sum(),
            };
            let frame_len = set.sequences()[i - 1].weight();
            if frame_len > field.order() as usize {
                return Err(Error::invalid(format!(
                    "node {i} sends {frame_len} packets per frame but GF({}) has only {} elements",
                    field.order(),
                    field.order()
                )));
            }
            NodeCoderState::with_layout(i, layout, frame_len)?;
            layouts.push(layout);
        }
        Ok(Simulation {
            spec: spec.clone(),
            set: set.clone(),
            field: field.clone(),
            relay,
            layouts,
            source_symbols,
            ranks: set.sequences().iter().map(|s| s.one_ranks()).collect(),
        })
    }

    pub fn layouts(&self) -> &[NestedLayout] {
        &self.layouts
    }

    fn source_part(&self, i: usize, t: i64) -> Option<SymbolKey> {
        self.spec.source_at(i).map(|s| (s.id, t))
    }

    fn forward_parts(&self, i: usize, t: i64) -> Vec<SymbolKey> {
        self.relay[i - 1]
            .forward
            .iter()
            .map(|&j| {
                let hops = (i - self.spec.sources()[j - 1].attach) as i64;
                (j, t - 2 * hops)
            })
            .collect()
    }

    fn backward_parts(&self, i: usize, t: i64) -> Vec<SymbolKey> {
        self.relay[i - 1]
            .backward
            .iter()
            .map(|&j| {
                let hops = (self.spec.sources()[j - 1].attach - i) as i64;
                (j, t - 2 * hops)
            })
            .collect()
    }

    /// Runs `periods` generations of every source under `offsets`
    /// (`τ_1, …, τ_M`, reduced modulo `P`), with source data drawn from
    /// `seed`.
    pub fn run(&self, offsets: &[i64], periods: usize, seed: u64) -> Result<SimOutcome> {
        let m = self.spec.nodes();
        if offsets.len() != m {
            return Err(Error::invalid(format!(
                "{} offsets for a network of {m} nodes",
                offsets.len()
            )));
        }
        let p = self.set.period();
        let pi = p as i64;
        let tau: Vec<usize> = offsets.iter().map(|&o| o.rem_euclid(pi) as usize).collect();
        let total_slots = (periods + 2 * m - 1) * p;
        let generations = (total_slots / p + 1) as i64;

        // ground truth, drawn in a fixed (source, generation) order
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = self.field.order();
        let mut truth: HashMap<SymbolKey, Vec<FieldElem>> = HashMap::new();
        for (k, &len) in self.source_symbols.iter().enumerate() {
            for gen in 0..generations {
                let symbols = (0..len).map(|_| rng.random_range(0..q)).collect();
                truth.insert((k + 1, gen), symbols);
            }
        }

        let mut stores: Vec<HashMap<SymbolKey, Vec<FieldElem>>> = vec![HashMap::new(); m];
        for s in self.spec.sources() {
            let own = &mut stores[s.attach - 1];
            for gen in 0..generations {
                own.insert((s.id, gen), truth[&(s.id, gen)].clone());
            }
        }

        let frame_len: Vec<usize> = self.set.sequences().iter().map(|s| s.weight()).collect();
        let mut current: Vec<Vec<FieldElem>> = frame_len.iter().map(|&n| vec![0; n]).collect();
        // rx[r][0] buffers the left neighbor's current frame, rx[r][1] the right's
        let mut rx: Vec<[Vec<Option<FieldElem>>; 2]> = (1..=m)
            .map(|r| {
                let left = if r > 1 { frame_len[r - 2] } else { 0 };
                let right = if r < m { frame_len[r] } else { 0 };
                [vec![None; left], vec![None; right]]
            })
            .collect();

        let mut trace = SimTrace::new(p, tau.clone());
        for k in 0..=total_slots {
            // frames ending now are decoded before any frame starting now is built
            for r in 1..=m {
                for (side, n) in [(0usize, r.wrapping_sub(1)), (1, r + 1)] {
                    if n == 0 || n > m || (k < tau[n - 1]) || !(k - tau[n - 1]).is_multiple_of(p) {
                        continue;
                    }
                    let ended = ((k - tau[n - 1]) / p) as i64 - 1;
                    let packets = std::mem::replace(&mut rx[r - 1][side], vec![None; frame_len[n - 1]]);
                    if ended >= 0 {
                        self.decode(&mut stores[r - 1], r, n, ended, packets)?;
                    }
                }
            }
            if k == total_slots {
                break;
            }
            for i in 1..=m {
                if k >= tau[i - 1] && (k - tau[i - 1]).is_multiple_of(p) {
                    let t = ((k - tau[i - 1]) / p) as i64;
                    current[i - 1] = self.encode(&stores[i - 1], i, t, frame_len[i - 1])?;
                }
            }

            let tx: Vec<Option<FieldElem>> = (0..m)
                .map(|n| {
                    let local = (k as i64 - tau[n] as i64).rem_euclid(pi) as usize;
                    self.ranks[n][local].map(|rank| current[n][rank])
                })
                .collect();
            let records = resolve_slot(&tx);
            for (r0, rec) in records.iter().enumerate() {
                if let SlotRecord::Receive { from, value } = *rec {
                    let side = if from < r0 + 1 { 0 } else { 1 };
                    let local = (k as i64 - tau[from - 1] as i64).rem_euclid(pi) as usize;
                    let rank = self.ranks[from - 1][local].expect("sender transmits in this slot");
                    rx[r0][side][rank] = Some(value);
                }
            }
            trace.push(records);
        }

        let deliveries = self.check_deliveries(&stores, &truth, periods);
        Ok(SimOutcome { trace, deliveries })
    }

    fn lookup(
        &self,
        store: &HashMap<SymbolKey, Vec<FieldElem>>,
        node: usize,
        key: SymbolKey,
    ) -> Result<Vec<FieldElem>> {
        let len = self.source_symbols[key.0 - 1];
        if key.1 < 0 {
            return Ok(vec![0; len]);
        }
        store.get(&key).cloned().ok_or_else(|| {
            Error::invalid(format!(
                "node {node} has not decoded source {} generation {} in time",
                key.0, key.1
            ))
        })
    }

    fn gather(
        &self,
        store: &HashMap<SymbolKey, Vec<FieldElem>>,
        node: usize,
        keys: &[SymbolKey],
    ) -> Result<Vec<FieldElem>> {
        let mut out = Vec::new();
        for &key in keys {
            out.extend(self.lookup(store, node, key)?);
        }
        Ok(out)
    }

    fn encode(
        &self,
        store: &HashMap<SymbolKey, Vec<FieldElem>>,
        i: usize,
        t: i64,
        frame_len: usize,
    ) -> Result<Vec<FieldElem>> {
        let mut state = NodeCoderState::with_layout(i, self.layouts[i - 1], frame_len)?;
        let source = match self.source_part(i, t) {
            Some(key) => self.lookup(store, i, key)?,
            None => Vec::new(),
        };
        let forward = self.gather(store, i, &self.forward_parts(i, t))?;
        let backward = self.gather(store, i, &self.backward_parts(i, t))?;
        state.load(source, forward, backward)?;
        state.nested_encode(&self.field)
    }

    /// Node `r` decodes frame `t` of its neighbor `n`.
    fn decode(
        &self,
        store: &mut HashMap<SymbolKey, Vec<FieldElem>>,
        r: usize,
        n: usize,
        t: i64,
        packets: Vec<Option<FieldElem>>,
    ) -> Result<()> {
        let layout = self.layouts[n - 1];
        let cw = ErasedCodeword::new(self.field.first_elements(packets.len())?, packets)?;
        let (g, relayed, relayed_keys) = if n < r {
            let known = self.gather(store, r, &self.backward_parts(n, t))?;
            let (g, hf) = decode_from_left(&self.field, &cw, layout, &known)
                .map_err(|e| link_error(e, n, r, t))?;
            (g, hf, self.forward_parts(n, t))
        } else {
            let known = self.gather(store, r, &self.forward_parts(n, t))?;
            let (g, hb) = decode_from_right(&self.field, &cw, layout, &known)
                .map_err(|e| link_error(e, n, r, t))?;
            (g, hb, self.backward_parts(n, t))
        };
        if let Some(key) = self.source_part(n, t) {
            store.entry(key).or_insert(g);
        }
        let mut rest = relayed.as_slice();
        for key in relayed_keys {
            let (head, tail) = rest.split_at(self.source_symbols[key.0 - 1]);
            rest = tail;
            if key.1 >= 0 {
                store.entry(key).or_insert_with(|| head.to_vec());
            }
        }
        Ok(())
    }

    fn check_deliveries(
        &self,
        stores: &[HashMap<SymbolKey, Vec<FieldElem>>],
        truth: &HashMap<SymbolKey, Vec<FieldElem>>,
        periods: usize,
    ) -> Vec<Delivery> {
        let mut out = Vec::new();
        for s in self.spec.sources() {
            for &d in s.demands.iter().filter(|&&d| d != s.attach) {
                let mut report = Delivery {
                    source: s.id,
                    destination: d,
                    generations: periods,
                    missing: 0,
                    symbol_errors: 0,
                };
                for gen in 0..periods as i64 {
                    let want = &truth[&(s.id, gen)];
                    match stores[d - 1].get(&(s.id, gen)) {
                        None => report.missing += 1,
                        Some(got) => {
                            report.symbol_errors +=
                                got.iter().zip(want).filter(|(a, b)| a != b).count()
                        }
                    }
                }
                out.push(report);
            }
        }
        out
    }
}

fn link_error(e: Error, from: usize, to: usize, frame: i64) -> Error {
    match e {
        Error::InsufficientData { needed, available } => Error::LinkInfeasible {
            from,
            to,
            frame,
            needed,
            available,
        },
        other => other,
    }
}

/// One-shot form of [`Simulation::new`] followed by [`Simulation::run`].
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    spec: &NetworkSpec,
    set: &SequenceSet,
    offsets: &[i64],
    field: &Field,
    rates: &[Rational],
    periods: usize,
    seed: u64,
) -> Result<SimOutcome> {
    Simulation::new(spec, set, field, rates)?.run(offsets, periods, seed)
}

/// Transmission-only trace: every node sends zero packets on its own
/// schedule. Useful for activity signals where packet contents are
/// irrelevant.
pub fn channel_trace(set: &SequenceSet, offsets: &[i64], slots: usize) -> Result<SimTrace> {
    channel_trace_with(set, offsets, slots, |_, _| 0)
}

/// Transmission trace with packet contents supplied per (node, slot).
pub(crate) fn channel_trace_with(
    set: &SequenceSet,
    offsets: &[i64],
    slots: usize,
    mut packet: impl FnMut(usize, usize) -> FieldElem,
) -> Result<SimTrace> {
    if offsets.len() != set.len() {
        return Err(Error::invalid(format!(
            "{} offsets for {} sequences",
            offsets.len(),
            set.len()
        )));
    }
    let p = set.period() as i64;
    let tau: Vec<usize> = offsets.iter().map(|&o| o.rem_euclid(p) as usize).collect();
    let mut trace = SimTrace::new(set.period(), tau.clone());
    for k in 0..slots {
        let tx: Vec<Option<FieldElem>> = (0..set.len())
            .map(|n| {
                set.sequences()[n]
                    .bit(k as i64 - tau[n] as i64)
                    .then(|| packet(n + 1, k))
            })
            .collect();
        trace.push(resolve_slot(&tx));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{construct_sequences, DutyFactor};

    fn thirds(m: usize) -> SequenceSet {
        construct_sequences(&vec![DutyFactor::new(1, 3).unwrap(); m]).unwrap()
    }

    #[test]
    fn two_way_boundary_rate_is_exact() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let field = Field::new(11).unwrap();
        let rates = [Rational::new(4, 27), Rational::new(4, 27)];
        let out = simulate(&spec, &thirds(4), &[0, 0, 0, 0], &field, &rates, 3, 1).unwrap();
        assert!(out.is_zero_error(), "{:?}", out.deliveries);
        assert_eq!(out.deliveries.len(), 2);
    }

    #[test]
    fn two_way_survives_skewed_offsets() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let field = Field::new(11).unwrap();
        let rates = [Rational::new(4, 27), Rational::new(4, 27)];
        let sim = Simulation::new(&spec, &thirds(4), &field, &rates).unwrap();
        for (seed, offs) in [[26, 0, 13, 5], [1, 2, 3, 4], [20, 7, 0, 26]].iter().enumerate() {
            let out = sim.run(offs, 3, seed as u64).unwrap();
            assert!(out.is_zero_error());
        }
    }

    #[test]
    fn excess_rate_fails_on_first_hop() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let field = Field::new(11).unwrap();
        let rates = [Rational::new(5, 27), Rational::new(4, 27)];
        let err = simulate(&spec, &thirds(4), &[0, 0, 0, 0], &field, &rates, 3, 1).unwrap_err();
        assert_eq!(
            err,
            Error::LinkInfeasible {
                from: 1,
                to: 2,
                frame: 0,
                needed: 5,
                available: 4
            }
        );
    }

    #[test]
    fn half_duplex_and_collision_invariants() {
        let set = thirds(4);
        let trace = channel_trace(&set, &[3, 0, 9, 14], 81).unwrap();
        let on = |j: usize, k: usize| {
            (1..=4).contains(&j) && set.bit(j as isize, k as i64 - trace.offsets()[j - 1] as i64)
        };
        for k in 0..trace.slots() {
            for i in 1..=4 {
                let (own, left, right) = (on(i, k), on(i - 1, k), on(i + 1, k));
                let expected = match (own, left, right) {
                    (true, _, _) => "tx",
                    (false, true, true) => "collision",
                    (false, false, false) => "idle",
                    _ => "rx",
                };
                assert_eq!(trace.record(k, i).action(), expected);
            }
        }
    }
}
