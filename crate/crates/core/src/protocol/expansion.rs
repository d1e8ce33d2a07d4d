//! The `m`-expansion used when slot boundaries are not aligned.

use super::{DutyFactor, ProtocolSequence};
use crate::error::{Error, Result};

impl ProtocolSequence {
    /// Replaces every 0 by `m` zeros and every 1 by `m − 1` ones followed by
    /// a single zero. The period grows to `m·P` and the duty factor shrinks
    /// by exactly `(m − 1)/m`.
    pub fn expand(&self, m: usize) -> Result<ProtocolSequence> {
        if m < 2 {
            return Err(Error::invalid(format!("expansion factor must be at least 2, got {m}")));
        }
        let mut bits = Vec::with_capacity(self.period() * m);
        for &b in self.bits() {
            if b {
                bits.extend(std::iter::repeat_n(true, m - 1));
                bits.push(false);
            } else {
                bits.extend(std::iter::repeat_n(false, m));
            }
        }
        let m32 = u32::try_from(m).map_err(|_| Error::invalid("expansion factor too large"))?;
        let duty = DutyFactor::new(
            self.duty().numer() * (m32 - 1),
            self.duty().denom() * m32,
        )?;
        ProtocolSequence::new(bits, duty)
    }
}

/// Free-function form of [`ProtocolSequence::expand`].
pub fn expand_sequence(seq: &ProtocolSequence, m: usize) -> Result<ProtocolSequence> {
    seq.expand(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn seq(bits: &str) -> ProtocolSequence {
        ProtocolSequence::from_bits(bits.chars().map(|c| c == '1').collect()).unwrap()
    }

    #[test]
    fn worked_expansions() {
        assert_eq!(seq("1010").expand(3).unwrap().to_string(), "110000110000");
        assert_eq!(seq("1100").expand(3).unwrap().to_string(), "110110000000");
    }

    #[test]
    fn all_zero_stays_zero() {
        let e = seq("0000").expand(4).unwrap();
        assert_eq!(e.period(), 16);
        assert_eq!(e.weight(), 0);
    }

    #[test]
    fn duty_scales_exactly() {
        let e = seq("110").expand(4).unwrap();
        assert_eq!(
            e.duty().to_rational(),
            Rational::new(2, 3) * Rational::new(3, 4)
        );
        assert!(seq("1").expand(1).is_err());
    }
}
