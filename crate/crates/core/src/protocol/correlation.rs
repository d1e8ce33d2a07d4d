//! Cross-correlation, shift-invariance certification and throughput.
//!
//! Exhaustive sweeps run on rotation tables: for every sequence we keep one
//! packed bitset per cyclic shift, so a generalized Hamming value at any
//! offset tuple is a handful of word ANDs plus a popcount.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ProtocolSequence, SequenceSet};
use crate::error::{Error, Result};
use crate::Rational;

/// Direction of traffic along the line of nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Left to right: node `i` to node `i + 1`.
    Forward,
    /// Right to left: node `i` to node `i - 1`.
    Backward,
}

impl Direction {
    /// Signed step toward the receiver.
    pub fn step(self) -> isize {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// Limits for [`SequenceSet::check_shift_invariance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceBudget {
    /// Largest number of term evaluations allowed for the exhaustive check.
    pub max_terms: u64,
    /// Offset tuples drawn per subset when falling back to sampling.
    pub samples: usize,
    pub seed: u64,
}

impl Default for InvarianceBudget {
    fn default() -> Self {
        InvarianceBudget {
            max_terms: 1_000_000_000,
            samples: 10_000,
            seed: 0,
        }
    }
}

/// How a shift-invariance verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Every offset tuple of every consecutive subset was evaluated.
    Exhaustive,
    /// The exhaustive sweep exceeded the budget; random tuples were drawn.
    Sampled { samples: usize, note: String },
}

/// Two offset tuples of one subset with differing correlation values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceWitness {
    /// 1-based sequence indices.
    pub subset: Vec<usize>,
    pub offsets_a: Vec<i64>,
    pub value_a: u64,
    pub offsets_b: Vec<i64>,
    pub value_b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub mode: CheckMode,
    pub witness: Option<InvarianceWitness>,
    /// Offset tuples evaluated across all subsets.
    pub tuples_checked: u64,
}

/// Distinct throughputs of one node over a set of offset tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThroughputSweep {
    pub node: usize,
    pub direction: Direction,
    pub values: BTreeSet<Rational>,
    pub tuples: u64,
}

impl ThroughputSweep {
    /// The single value seen, if the throughput never varied.
    pub fn constant(&self) -> Option<Rational> {
        (self.values.len() == 1).then(|| *self.values.iter().next().unwrap())
    }
}

/// All cyclic shifts of one sequence, packed 64 slots per word.
#[derive(Clone, Debug)]
pub(crate) struct RotationTable {
    words: usize,
    rows: Vec<u64>,
}

impl RotationTable {
    /// Row `τ` holds `s[k − τ]` at bit `k`.
    pub(crate) fn new(seq: &ProtocolSequence) -> Self {
        let period = seq.period();
        let words = period.div_ceil(64);
        let mut rows = vec![0u64; words * period];
        for tau in 0..period {
            let row = &mut rows[tau * words..(tau + 1) * words];
            for k in 0..period {
                if seq.bits()[(k + period - tau) % period] {
                    row[k / 64] |= 1 << (k % 64);
                }
            }
        }
        RotationTable { words, rows }
    }

    /// An all-zero table standing in for a sequence past either end.
    pub(crate) fn zero(period: usize) -> Self {
        let words = period.div_ceil(64);
        RotationTable {
            words,
            rows: vec![0; words * period],
        }
    }

    pub(crate) fn row(&self, tau: usize) -> &[u64] {
        &self.rows[tau * self.words..(tau + 1) * self.words]
    }
}

fn popcount_and(rows: &[&[u64]]) -> u64 {
    let words = rows[0].len();
    (0..words)
        .map(|w| rows.iter().fold(u64::MAX, |acc, r| acc & r[w]).count_ones() as u64)
        .sum()
}

/// Popcount of `a & !b & !c` — ones of `a` where neither neighbor is on.
fn popcount_clear(a: &[u64], b: &[u64], c: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((a, b), c)| (a & !b & !c).count_ones() as u64)
        .sum()
}

impl SequenceSet {
    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::invalid(format!(
                "sequence index {i} outside 1..={}",
                self.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn rotation_tables(&self) -> Vec<RotationTable> {
        self.sequences.iter().map(RotationTable::new).collect()
    }

    /// Generalized Hamming cross-correlation
    /// `Σ_k Π_μ s_{i_μ}[k − τ_μ]` over one period.
    pub fn generalized_hamming(&self, subset: &[usize], offsets: &[i64]) -> Result<u64> {
        if subset.is_empty() {
            return Err(Error::invalid("subset must not be empty"));
        }
        if subset.len() != offsets.len() {
            return Err(Error::invalid(format!(
                "{} indices but {} offsets",
                subset.len(),
                offsets.len()
            )));
        }
        for &i in subset {
            self.check_index(i)?;
        }
        let p = self.period as i64;
        let count = (0..p)
            .filter(|&k| {
                subset
                    .iter()
                    .zip(offsets)
                    .all(|(&i, &tau)| self.sequences[i - 1].bit(k - tau))
            })
            .count();
        Ok(count as u64)
    }

    /// Cost of the exhaustive check in term evaluations,
    /// dominated by `P³ · (M − 2)`.
    pub fn exhaustive_cost(&self) -> u64 {
        let p = self.period as u64;
        let m = self.len() as u64;
        let mut cost = p.saturating_mul(m);
        if m >= 2 {
            cost = cost.saturating_add(p.saturating_pow(2).saturating_mul(m - 1));
        }
        if m >= 3 {
            cost = cost.saturating_add(p.saturating_pow(3).saturating_mul(m - 2));
        }
        cost
    }

    /// Consecutively 3-wise shift invariance with the default budget.
    pub fn is_consecutively_3wise_shift_invariant(&self) -> InvarianceReport {
        self.check_shift_invariance(&InvarianceBudget::default())
    }

    /// Checks that every run of at most three consecutive sequences has an
    /// offset-independent generalized Hamming correlation.
    ///
    /// The sweep is exhaustive (`O(P³)` per triple) while
    /// [`exhaustive_cost`](Self::exhaustive_cost) fits the budget; otherwise
    /// random offset tuples are compared against the all-zero tuple and the
    /// report says so.
    pub fn check_shift_invariance(&self, budget: &InvarianceBudget) -> InvarianceReport {
        let tables = self.rotation_tables();
        let p = self.period;
        let exhaustive = self.exhaustive_cost() <= budget.max_terms;
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let mut tuples_checked = 0u64;

        for size in 1..=3.min(self.len()) {
            for start in 0..=self.len() - size {
                let members: Vec<&RotationTable> = tables[start..start + size].iter().collect();
                let value_at = |offs: &[usize]| {
                    let rows: Vec<&[u64]> =
                        members.iter().zip(offs).map(|(t, &o)| t.row(o)).collect();
                    popcount_and(&rows)
                };
                let zeros = vec![0usize; size];
                let reference = value_at(&zeros);
                let mut mismatch = None;

                if exhaustive {
                    let total = p.pow(size as u32);
                    for code in 0..total {
                        let mut offs = vec![0usize; size];
                        let mut c = code;
                        for slot in offs.iter_mut().rev() {
                            *slot = c % p;
                            c /= p;
                        }
                        tuples_checked += 1;
                        let v = value_at(&offs);
                        if v != reference {
                            mismatch = Some((offs, v));
                            break;
                        }
                    }
                } else {
                    for _ in 0..budget.samples {
                        let offs: Vec<usize> = (0..size).map(|_| rng.random_range(0..p)).collect();
                        tuples_checked += 1;
                        let v = value_at(&offs);
                        if v != reference {
                            mismatch = Some((offs, v));
                            break;
                        }
                    }
                }

                if let Some((offs, v)) = mismatch {
                    return InvarianceReport {
                        invariant: false,
                        mode: self.mode(exhaustive, budget),
                        witness: Some(InvarianceWitness {
                            subset: (start + 1..=start + size).collect(),
                            offsets_a: vec![0; size],
                            value_a: reference,
                            offsets_b: offs.into_iter().map(|o| o as i64).collect(),
                            value_b: v,
                        }),
                        tuples_checked,
                    };
                }
            }
        }
        InvarianceReport {
            invariant: true,
            mode: self.mode(exhaustive, budget),
            witness: None,
            tuples_checked,
        }
    }

    fn mode(&self, exhaustive: bool, budget: &InvarianceBudget) -> CheckMode {
        if exhaustive {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled {
                samples: budget.samples,
                note: format!(
                    "exhaustive cost {} exceeds budget {}; {} random offset tuples per subset \
                     were compared, so invariance is supported but not certified",
                    self.exhaustive_cost(),
                    budget.max_terms,
                    budget.samples
                ),
            }
        }
    }

    /// Fraction of slots in which node `i` reaches node `i + 1` without a
    /// collision: `(1/P) Σ_k s_i[k−τ_i](1 − s_{i+1}[k−τ_{i+1}])(1 − s_{i+2}[k−τ_{i+2}])`.
    ///
    /// `offsets` are `(τ_i, τ_{i+1}, τ_{i+2})`; neighbors past the right end
    /// are treated as silent and their offsets ignored.
    pub fn throughput_forward(&self, i: usize, offsets: [i64; 3]) -> Result<Rational> {
        self.throughput(i, offsets, Direction::Forward)
    }

    /// Mirror of [`throughput_forward`](Self::throughput_forward) toward
    /// node `i − 1`; `offsets` are `(τ_i, τ_{i−1}, τ_{i−2})`.
    pub fn throughput_backward(&self, i: usize, offsets: [i64; 3]) -> Result<Rational> {
        self.throughput(i, offsets, Direction::Backward)
    }

    fn throughput(&self, i: usize, offsets: [i64; 3], dir: Direction) -> Result<Rational> {
        self.check_index(i)?;
        let i = i as isize;
        let (near, far) = (i + dir.step(), i + 2 * dir.step());
        let p = self.period as i64;
        let count = (0..p)
            .filter(|&k| {
                self.bit(i, k - offsets[0])
                    && !self.bit(near, k - offsets[1])
                    && !self.bit(far, k - offsets[2])
            })
            .count();
        Ok(Rational::new(count as i64, p))
    }

    /// Lemma-style throughput prediction `f_i (1 − f_{i±1}) (1 − f_{i±2})`
    /// computed from measured duties.
    pub fn predicted_throughput(&self, i: usize, dir: Direction) -> Result<Rational> {
        self.check_index(i)?;
        let i = i as isize;
        let one = Rational::from_integer(1);
        Ok(self.duty(i)
            * (one - self.duty(i + dir.step()))
            * (one - self.duty(i + 2 * dir.step())))
    }

    /// Throughput of node `i` in direction `dir` for every offset tuple in
    /// `{0..P−1}³`, collecting the distinct values seen.
    pub fn throughput_sweep(&self, i: usize, dir: Direction) -> Result<ThroughputSweep> {
        self.check_index(i)?;
        let p = self.period;
        let tables = self.rotation_tables();
        let zero = RotationTable::zero(p);
        let pick = |j: isize| -> &RotationTable {
            if j < 1 || j as usize > self.len() {
                &zero
            } else {
                &tables[j as usize - 1]
            }
        };
        let ii = i as isize;
        let (own, near, far) = (pick(ii), pick(ii + dir.step()), pick(ii + 2 * dir.step()));

        let mut counts = BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    counts.insert(popcount_clear(own.row(a), near.row(b), far.row(c)));
                }
            }
        }
        Ok(ThroughputSweep {
            node: i,
            direction: dir,
            values: counts
                .into_iter()
                .map(|c| Rational::new(c as i64, p as i64))
                .collect(),
            tuples: (p as u64).pow(3),
        })
    }
}
