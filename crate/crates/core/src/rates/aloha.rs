//! Random-access baselines: pure ALOHA, slotted ALOHA, and slotted ALOHA
//! with XOR network coding at the relays.
//!
//! Every node splits its transmissions between its own source packets and
//! packets relayed left or right. Under saturated queues, a packet is
//! received when no node within two hops of the receiver interferes. For
//! pure ALOHA the packet is vulnerable for two packet durations:
//!
//! ```text
//! R_σ            ≤ p^s_i λ_i e^{−2(λ_{i−2} + λ_{i−1} + λ_{i+1} + λ_{i+2})}
//! Σ_{S_i^f} R_j  ≤ p^r_i λ_i e^{−2(λ_{i+1} + λ_{i+2})}
//! Σ_{S_i^b} R_j  ≤ p^ℓ_i λ_i e^{−2(λ_{i−1} + λ_{i−2})}
//! ```
//!
//! Slotted ALOHA replaces the exponentials by `Π (1 − f_k)` over the same
//! nodes. With network coding, a relay XORs one packet from each side and
//! broadcasts it, so both directions share the probability `1 − p^s_i`.

use std::fmt;
use std::str::FromStr;

use super::region::{broadcast_throughput, check_rates, dir_name, duty_at, indicator, link_throughput};
use super::region::{LinearRegion, RateConstraint};
use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::protocol::Direction;

const SPLIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlohaScheme {
    Pure,
    Slotted,
    NcSlotted,
}

impl AlohaScheme {
    pub fn name(self) -> &'static str {
        match self {
            AlohaScheme::Pure => "pure",
            AlohaScheme::Slotted => "slotted",
            AlohaScheme::NcSlotted => "nc-slotted",
        }
    }
}

impl fmt::Display for AlohaScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlohaScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(AlohaScheme::Pure),
            "slotted" => Ok(AlohaScheme::Slotted),
            "nc-slotted" => Ok(AlohaScheme::NcSlotted),
            other => Err(Error::invalid(format!("unknown ALOHA scheme {other:?}"))),
        }
    }
}

/// How one node divides its transmissions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Split {
    /// `p^s`: own source packet.
    pub source: f64,
    /// `p^ℓ`: share usable toward the left neighbor.
    pub left: f64,
    /// `p^r`: share usable toward the right neighbor.
    pub right: f64,
}

impl Split {
    /// A split for the uncoded schemes; the three shares must sum to one.
    pub fn uncoded(source: f64, left: f64, right: f64) -> Self {
        Split { source, left, right }
    }

    /// A split for the coded scheme: with probability `1 − p^s` the node
    /// sends an XOR that serves both directions at once.
    pub fn coded(source: f64) -> Self {
        Split {
            source,
            left: 1.0 - source,
            right: 1.0 - source,
        }
    }

    fn shares(&self) -> [f64; 3] {
        [self.source, self.left, self.right]
    }
}

/// Parameters of one ALOHA operating point.
#[derive(Clone, Debug, PartialEq)]
pub struct AlohaParams {
    pub scheme: AlohaScheme,
    /// Per node: Poisson intensity `λ_i` (pure) or attempt probability
    /// `f_i` (slotted schemes).
    pub activity: Vec<f64>,
    /// Per node, index `i − 1`.
    pub splits: Vec<Split>,
}

impl AlohaParams {
    pub fn new(scheme: AlohaScheme, activity: Vec<f64>, splits: Vec<Split>) -> Self {
        AlohaParams {
            scheme,
            activity,
            splits,
        }
    }

    fn validate(&self, spec: &NetworkSpec) -> Result<()> {
        let m = spec.nodes();
        if self.activity.len() != m || self.splits.len() != m {
            return Err(Error::invalid(format!(
                "{} activity values and {} splits for {m} nodes",
                self.activity.len(),
                self.splits.len()
            )));
        }
        for (k, &a) in self.activity.iter().enumerate() {
            let ok = match self.scheme {
                AlohaScheme::Pure => a.is_finite() && a >= 0.0,
                _ => (0.0..=1.0).contains(&a),
            };
            if !ok {
                return Err(Error::invalid(format!("node {} activity {a} out of range", k + 1)));
            }
        }
        for (k, split) in self.splits.iter().enumerate() {
            let i = k + 1;
            if split.shares().iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::invalid(format!("node {i}: split probabilities must lie in [0, 1]")));
            }
            if spec.source_at(i).is_none() && split.source != 0.0 {
                return Err(Error::invalid(format!("node {i} hosts no source but p^s = {}", split.source)));
            }
            let consistent = match self.scheme {
                AlohaScheme::Pure | AlohaScheme::Slotted => {
                    (split.shares().iter().sum::<f64>() - 1.0).abs() <= SPLIT_TOLERANCE
                }
                AlohaScheme::NcSlotted => {
                    (split.left - (1.0 - split.source)).abs() <= SPLIT_TOLERANCE
                        && (split.right - (1.0 - split.source)).abs() <= SPLIT_TOLERANCE
                }
            };
            if !consistent {
                return Err(Error::invalid(format!(
                    "node {i}: split {:?} does not fit the {} scheme",
                    split.shares(),
                    self.scheme
                )));
            }
        }
        Ok(())
    }
}

/// Success probability of a packet from node `i` heard by the listed
/// neighbors' side (`None` = both neighbors).
pub(crate) fn success(scheme: AlohaScheme, activity: &[f64], i: usize, dir: Option<Direction>) -> f64 {
    match scheme {
        AlohaScheme::Pure => {
            let ii = i as isize;
            let lam = |k: isize| duty_at(activity, ii + k);
            let exposure: f64 = match dir {
                Some(Direction::Forward) => lam(1) + lam(2),
                Some(Direction::Backward) => lam(-1) + lam(-2),
                None => lam(-2) + lam(-1) + lam(1) + lam(2),
            };
            lam(0) * (-2.0 * exposure).exp()
        }
        AlohaScheme::Slotted | AlohaScheme::NcSlotted => match dir {
            Some(d) => link_throughput(activity, i, d),
            None => broadcast_throughput(activity, i),
        },
    }
}

/// The scheme's inequality system at the given operating point.
pub fn aloha_region(spec: &NetworkSpec, params: &AlohaParams) -> Result<LinearRegion<f64>> {
    params.validate(spec)?;
    let n = spec.source_count();
    let a = &params.activity;
    let mut rows = Vec::new();
    for (k, sets) in spec.relay_sets().into_iter().enumerate() {
        let i = k + 1;
        let split = params.splits[k];
        if let Some(src) = spec.source_at(i) {
            rows.push(RateConstraint {
                weights: indicator(n, [src.id]),
                bound: split.source * success(params.scheme, a, i, None),
                label: format!("node {i} source"),
            });
        }
        for (dir, members, share) in [
            (Direction::Forward, sets.forward, split.right),
            (Direction::Backward, sets.backward, split.left),
        ] {
            if members.is_empty() {
                continue;
            }
            rows.push(RateConstraint {
                weights: indicator(n, members),
                bound: share * success(params.scheme, a, i, Some(dir)),
                label: format!("node {i} {}", dir_name(dir)),
            });
        }
    }
    Ok(LinearRegion::new(rows))
}

/// Whether `rates` is supported by the ALOHA operating point `params`.
pub fn aloha_region_point(spec: &NetworkSpec, params: &AlohaParams, rates: &[f64]) -> Result<bool> {
    check_rates(spec, rates)?;
    Ok(aloha_region(spec, params)?.contains(rates))
}
