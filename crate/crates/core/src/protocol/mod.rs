//! Protocol sequences: construction, correlation and throughput.
//!
//! A protocol sequence is a periodic zero-one schedule; node `i` transmits in
//! slot `k` exactly when `s_i[k - τ_i] = 1`, where `τ_i` is its (unknown)
//! delay offset. Offsets are always reduced modulo the period.

mod correlation;
mod expansion;

pub use expansion::expand_sequence;

use std::fmt;
use std::str::FromStr;

pub use correlation::{
    CheckMode, Direction, InvarianceBudget, InvarianceReport, InvarianceWitness, ThroughputSweep,
};

use crate::error::{Error, Result};
use crate::Rational;

/// Duty factor `n/d` of a protocol sequence, kept as an exact fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DutyFactor {
    numer: u32,
    denom: u32,
}

impl DutyFactor {
    pub fn new(numer: u32, denom: u32) -> Result<Self> {
        if denom == 0 {
            return Err(Error::invalid("duty factor denominator must be positive"));
        }
        if numer > denom {
            return Err(Error::invalid(format!(
                "duty factor {numer}/{denom} exceeds one"
            )));
        }
        Ok(DutyFactor { numer, denom })
    }

    pub fn numer(&self) -> u32 {
        self.numer
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numer as i64, self.denom as i64)
    }

    /// Re-expresses the same value over `denom`, if that is exact.
    pub fn with_denominator(&self, denom: u32) -> Result<Self> {
        let scaled = self.numer as u64 * denom as u64;
        if denom == 0 || !scaled.is_multiple_of(self.denom as u64) {
            return Err(Error::invalid(format!(
                "{self} cannot be written over denominator {denom}"
            )));
        }
        DutyFactor::new((scaled / self.denom as u64) as u32, denom)
    }

    /// Rewrites a list of duty factors over their least common denominator.
    pub fn common_denominator(duties: &[DutyFactor]) -> Result<Vec<DutyFactor>> {
        let lcm = duties
            .iter()
            .fold(1u64, |acc, d| num_integer::lcm(acc, d.denom as u64));
        let lcm = u32::try_from(lcm).map_err(|_| Error::invalid("common denominator overflow"))?;
        duties.iter().map(|d| d.with_denominator(lcm)).collect()
    }
}

impl fmt::Display for DutyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for DutyFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::invalid(format!("duty factor {s:?} is not of the form n/d")))?;
        let numer = n
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad duty numerator in {s:?}")))?;
        let denom = d
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad duty denominator in {s:?}")))?;
        DutyFactor::new(numer, denom)
    }
}

/// One period of a zero-one protocol sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProtocolSequence {
    bits: Vec<bool>,
    duty: DutyFactor,
}

impl ProtocolSequence {
    /// Builds a sequence with a declared duty factor; the declaration must
    /// match the Hamming weight exactly.
    pub fn new(bits: Vec<bool>, duty: DutyFactor) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("protocol sequence period must be positive"));
        }
        let ones = bits.iter().filter(|&&b| b).count() as u64;
        if ones * duty.denom as u64 != bits.len() as u64 * duty.numer as u64 {
            return Err(Error::invalid(format!(
                "declared duty {duty} does not match weight {ones} over period {}",
                bits.len()
            )));
        }
        Ok(ProtocolSequence { bits, duty })
    }

    /// Builds a sequence whose duty factor is `weight / period`.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        let ones = bits.iter().filter(|&&b| b).count() as u32;
        let period = u32::try_from(bits.len()).map_err(|_| Error::invalid("period too long"))?;
        let duty = DutyFactor::new(ones, period.max(1))?;
        ProtocolSequence::new(bits, duty)
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn duty(&self) -> DutyFactor {
        self.duty
    }

    /// Number of ones in one period.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `s[k]` with `k` reduced modulo the period.
    pub fn bit(&self, k: i64) -> bool {
        self.bits[k.rem_euclid(self.bits.len() as i64) as usize]
    }

    /// Positions (0-based) of the ones, in order.
    pub fn ones(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
            .collect()
    }

    /// For each position, the rank of that one within the period (or `None`).
    pub(crate) fn one_ranks(&self) -> Vec<Option<usize>> {
        let mut rank = 0;
        self.bits
            .iter()
            .map(|&b| {
                b.then(|| {
                    rank += 1;
                    rank - 1
                })
            })
            .collect()
    }
}

impl fmt::Display for ProtocolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `u(n, d)`: `n` ones followed by `d - n` zeros.
pub fn unit_vector(n: usize, d: usize) -> Result<Vec<bool>> {
    if d == 0 {
        return Err(Error::invalid("unit vector length must be positive"));
    }
    if n > d {
        return Err(Error::invalid(format!("unit vector weight {n} exceeds length {d}")));
    }
    Ok((0..d).map(|k| k < n).collect())
}

/// An ordered set of protocol sequences sharing one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSet {
    sequences: Vec<ProtocolSequence>,
    period: usize,
    denominator: u32,
}

impl SequenceSet {
    pub fn new(sequences: Vec<ProtocolSequence>, denominator: u32) -> Result<Self> {
        let period = sequences
            .first()
            .ok_or_else(|| Error::invalid("sequence set must not be empty"))?
            .period();
        if let Some(bad) = sequences.iter().position(|s| s.period() != period) {
            return Err(Error::invalid(format!(
                "sequence {} has period {}, expected {period}",
                bad + 1,
                sequences[bad].period()
            )));
        }
        if denominator == 0 {
            return Err(Error::invalid("denominator must be positive"));
        }
        Ok(SequenceSet {
            sequences,
            period,
            denominator,
        })
    }

    /// Number of sequences `M`.
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn sequences(&self) -> &[ProtocolSequence] {
        &self.sequences
    }

    /// Sequence `i` (1-based).
    pub fn get(&self, i: usize) -> Option<&ProtocolSequence> {
        i.checked_sub(1).and_then(|k| self.sequences.get(k))
    }

    /// `s_i[k]`, with indices outside `1..=M` reading as the all-zero sequence.
    pub fn bit(&self, i: isize, k: i64) -> bool {
        if i < 1 {
            return false;
        }
        self.get(i as usize).is_some_and(|s| s.bit(k))
    }

    /// Measured duty factor of sequence `i`; zero outside `1..=M`.
    pub fn duty(&self, i: isize) -> Rational {
        if i < 1 {
            return Rational::from_integer(0);
        }
        match self.get(i as usize) {
            Some(s) => Rational::new(s.weight() as i64, self.period as i64),
            None => Rational::from_integer(0),
        }
    }

    /// Plain-text form: a `P M d` header and one line of `0`/`1` per sequence.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.period, self.len(), self.denominator);
        for s in &self.sequences {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// `m`-expansion of every member.
    pub fn expand(&self, m: usize) -> Result<SequenceSet> {
        let sequences = self
            .sequences
            .iter()
            .map(|s| s.expand(m))
            .collect::<Result<Vec<_>>>()?;
        SequenceSet::new(sequences, self.denominator * m as u32)
    }
}

impl FromStr for SequenceSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(hline + 1, "header must be `P M d`"));
        }
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(hline + 1, format!("bad header field {s:?}")))
        };
        let (period, count, denom) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
        let denom = u32::try_from(denom).map_err(|_| Error::parse(hline + 1, "denominator too large"))?;

        let mut sequences = Vec::with_capacity(count);
        for (lineno, line) in lines {
            let line = line.trim();
            if line.len() != period {
                return Err(Error::parse(
                    lineno + 1,
                    format!("expected {period} symbols, found {}", line.len()),
                ));
            }
            let bits = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::parse(lineno + 1, format!("invalid symbol {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            sequences.push(ProtocolSequence::from_bits(bits)?);
        }
        if sequences.len() != count {
            return Err(Error::parse(
                hline + 1,
                format!("header declares {count} sequences, found {}", sequences.len()),
            ));
        }
        SequenceSet::new(sequences, denom)
    }
}

/// The period-`d³` construction from duty factors `n_i/d`.
///
/// Sequence `i` (1-based) is `d²` copies of `u(n_i, d)` when `i ≡ 1 (mod 3)`,
/// `d` copies of `u(d·n_i, d²)` when `i ≡ 2`, and `u(d²·n_i, d³)` when
/// `i ≡ 0`.
pub fn construct_sequences(duties: &[DutyFactor]) -> Result<SequenceSet> {
    let d = duties
        .first()
        .ok_or_else(|| Error::invalid("need at least one duty factor"))?
        .denom() as usize;
    if duties.iter().any(|f| f.denom() as usize != d) {
        return Err(Error::invalid(
            "all duty factors must share one denominator (see DutyFactor::common_denominator)",
        ));
    }
    let period = d
        .checked_pow(3)
        .ok_or_else(|| Error::invalid("period d^3 overflows"))?;

    let sequences = duties
        .iter()
        .enumerate()
        .map(|(idx, duty)| {
            let n = duty.numer() as usize;
            let (block, copies) = match (idx + 1) % 3 {
                1 => (unit_vector(n, d)?, d * d),
                2 => (unit_vector(d * n, d * d)?, d),
                _ => (unit_vector(d * d * n, period)?, 1),
            };
            let bits = block.iter().copied().cycle().take(block.len() * copies).collect();
            ProtocolSequence::new(bits, *duty)
        })
        .collect::<Result<Vec<_>>>()?;
    SequenceSet::new(sequences, d as u32)
}
