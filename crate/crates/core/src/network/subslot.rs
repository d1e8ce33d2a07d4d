//! Slot-asynchronous operation on a sub-slot grid.
//!
//! Time is divided into sub-slots of `T/g`. A packet occupies `g`
//! consecutive sub-slots, and node `n` starts its packets at
//! `ℓ·g + o_n` for every `ℓ` with `s_n[ℓ] = 1`. A packet reaches a neighbor
//! iff neither that neighbor nor the neighbor's other neighbor occupies any
//! sub-slot of the packet's span: an interfering packet that starts within
//! `g` sub-slots of `t₀` in either direction overlaps, one that starts
//! exactly `g` away does not. With `g = 1` this is the slot-synchronous
//! collision rule.
//!
//! Counting is cyclic over one period, which is the steady state reached
//! after the first period of a session.

use crate::error::{Error, Result};
use crate::protocol::{Direction, SequenceSet};

/// Non-collided packets per period on every link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubslotCounts {
    /// `forward[i − 1]`: packets from node `i` received by node `i + 1`.
    pub forward: Vec<u64>,
    /// `backward[i − 1]`: packets from node `i` received by node `i − 1`.
    pub backward: Vec<u64>,
}

impl SubslotCounts {
    pub fn link(&self, i: usize, dir: Direction) -> u64 {
        match dir {
            Direction::Forward => self.forward[i - 1],
            Direction::Backward => self.backward[i - 1],
        }
    }
}

/// Counts, per period, the packets each node delivers to each neighbor when
/// offsets are given in sub-slots (`0 ≤ o_n < g·P`). Nodes past either end
/// are silent, so the counts for end nodes toward the outside equal their
/// packet counts.
pub fn simulate_subslot(set: &SequenceSet, offsets: &[i64], g: usize) -> Result<SubslotCounts> {
    if g == 0 {
        return Err(Error::invalid("sub-slot granularity must be at least 1"));
    }
    if offsets.len() != set.len() {
        return Err(Error::invalid(format!(
            "{} offsets for {} sequences",
            offsets.len(),
            set.len()
        )));
    }
    let cycle = g * set.period();
    let starts: Vec<Vec<usize>> = set
        .sequences()
        .iter()
        .zip(offsets)
        .map(|(s, &o)| {
            let o = o.rem_euclid(cycle as i64) as usize;
            s.ones().into_iter().map(|l| (l * g + o) % cycle).collect()
        })
        .collect();
    let busy: Vec<Vec<bool>> = starts
        .iter()
        .map(|st| {
            let mut occ = vec![false; cycle];
            for &u0 in st {
                for u in 0..g {
                    occ[(u0 + u) % cycle] = true;
                }
            }
            occ
        })
        .collect();

    let m = set.len() as isize;
    let occupied = |n: isize, u0: usize| -> bool {
        (1..=m).contains(&n) && (0..g).any(|u| busy[n as usize - 1][(u0 + u) % cycle])
    };
    let count = |i: isize, dir: Direction| -> u64 {
        let (near, far) = (i + dir.step(), i + 2 * dir.step());
        starts[i as usize - 1]
            .iter()
            .filter(|&&u0| !occupied(near, u0) && !occupied(far, u0))
            .count() as u64
    };
    Ok(SubslotCounts {
        forward: (1..=m).map(|i| count(i, Direction::Forward)).collect(),
        backward: (1..=m).map(|i| count(i, Direction::Backward)).collect(),
    })
}
