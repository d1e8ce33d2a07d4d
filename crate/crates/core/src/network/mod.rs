//! Tandem collision networks: topology, the slot-level channel, sender
//! identification, offset discovery and the sub-slot model.
//!
//! Nodes `1..=M` sit on a line; each hears only its immediate neighbors,
//! is half-duplex, and loses both packets when its two neighbors transmit
//! in the same slot. All traces use one global slot clock; node `i`'s local
//! slot `k` is global slot `k + τ_i`.

mod activity;
mod discovery;
mod sim;
mod spec;
mod subslot;
mod trace;

pub use activity::{
    activity_signal, activity_window, identify_senders, ActivitySymbol, ChannelActivitySignal,
    NodeView, SenderLabels,
};
pub use discovery::{
    discover_offset, run_offset_discovery, simulate_handshake, DiscoveredOffset, HandshakeConfig,
    MARKER,
};
pub use sim::{channel_trace, simulate, Delivery, SimOutcome, Simulation};
pub use spec::{NetworkSpec, RelaySets, Source};
pub use subslot::{simulate_subslot, SubslotCounts};
pub use trace::{SimTrace, SlotRecord};
