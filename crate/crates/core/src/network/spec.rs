use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// One data source: attached to node `attach`, demanded by `demands`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    /// 1-based source index `j`.
    pub id: usize,
    /// `α(j)`.
    pub attach: usize,
    /// `β(j)`.
    pub demands: BTreeSet<usize>,
}

/// A line of `M` nodes with `N` multicast sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    nodes: usize,
    sources: Vec<Source>,
}

/// Relay sets of one node.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RelaySets {
    /// `𝓢_i^f`: sources attached strictly left of `i` and demanded right of it.
    pub forward: BTreeSet<usize>,
    /// `𝓢_i^b`: the mirror image.
    pub backward: BTreeSet<usize>,
    /// `𝓢̄_i^f`: as `forward` but attached at or left of `i`.
    pub forward_closed: BTreeSet<usize>,
    /// `𝓢̄_i^b`: as `backward` but attached at or right of `i`.
    pub backward_closed: BTreeSet<usize>,
}

impl NetworkSpec {
    /// Validates the topology. Sources must be numbered `1..=N` in order,
    /// attach to distinct nodes in `1..=M`, and have non-empty demand sets
    /// inside `1..=M`.
    pub fn new(nodes: usize, sources: Vec<Source>) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::invalid("network needs at least one node"));
        }
        let mut attached = BTreeSet::new();
        for (k, s) in sources.iter().enumerate() {
            if s.id != k + 1 {
                return Err(Error::invalid(format!(
                    "source ids must be 1..=N in order; position {} has id {}",
                    k + 1,
                    s.id
                )));
            }
            if s.attach == 0 || s.attach > nodes {
                return Err(Error::invalid(format!(
                    "source {} attaches to node {} outside 1..={nodes}",
                    s.id, s.attach
                )));
            }
            if !attached.insert(s.attach) {
                return Err(Error::invalid(format!(
                    "node {} hosts more than one source",
                    s.attach
                )));
            }
            if s.demands.is_empty() {
                return Err(Error::invalid(format!("source {} has no destination", s.id)));
            }
            if let Some(&bad) = s.demands.iter().find(|&&d| d == 0 || d > nodes) {
                return Err(Error::invalid(format!(
                    "source {} is demanded by node {bad} outside 1..={nodes}",
                    s.id
                )));
            }
        }
        Ok(NetworkSpec { nodes, sources })
    }

    /// Convenience constructor from `(attach, demands)` pairs numbered in order.
    pub fn from_pairs(nodes: usize, pairs: &[(usize, &[usize])]) -> Result<Self> {
        let sources = pairs
            .iter()
            .enumerate()
            .map(|(k, (attach, demands))| Source {
                id: k + 1,
                attach: *attach,
                demands: demands.iter().copied().collect(),
            })
            .collect();
        NetworkSpec::new(nodes, sources)
    }

    /// The two-way network: the two end nodes exchange messages through the
    /// pure relays between them.
    pub fn two_way(nodes: usize) -> Result<Self> {
        NetworkSpec::from_pairs(nodes, &[(1, &[nodes]), (nodes, &[1])])
    }

    /// The five-node bi-directional multicast network: sources at nodes 2
    /// and 4, both demanded by nodes 1 and 5.
    pub fn bidirectional_multicast() -> Self {
        NetworkSpec::from_pairs(5, &[(2, &[1, 5]), (4, &[1, 5])]).expect("valid topology")
    }

    /// Node count `M`.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    /// Source count `N`.
    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn source(&self, id: usize) -> Option<&Source> {
        id.checked_sub(1).and_then(|k| self.sources.get(k))
    }

    /// The source hosted by node `i`, if any.
    pub fn source_at(&self, i: usize) -> Option<&Source> {
        self.sources.iter().find(|s| s.attach == i)
    }

    /// Relay sets for nodes `1..=M` (index `i − 1`).
    pub fn relay_sets(&self) -> Vec<RelaySets> {
        (1..=self.nodes)
            .map(|i| {
                let mut sets = RelaySets::default();
                for s in &self.sources {
                    let right = s.demands.iter().any(|&d| d > i);
                    let left = s.demands.iter().any(|&d| d < i);
                    if right && s.attach < i {
                        sets.forward.insert(s.id);
                    }
                    if right && s.attach <= i {
                        sets.forward_closed.insert(s.id);
                    }
                    if left && s.attach > i {
                        sets.backward.insert(s.id);
                    }
                    if left && s.attach >= i {
                        sets.backward_closed.insert(s.id);
                    }
                }
                sets
            })
            .collect()
    }

    /// True iff every source attached to an interior node is demanded on
    /// both sides of it.
    pub fn is_bidirectional(&self) -> bool {
        self.sources
            .iter()
            .filter(|s| s.attach != 1 && s.attach != self.nodes)
            .all(|s| {
                s.demands.iter().any(|&d| d < s.attach) && s.demands.iter().any(|&d| d > s.attach)
            })
    }
}
