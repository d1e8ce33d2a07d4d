use super::field::{Field, FieldElem};

/// A polynomial over `GF(q)`, coefficients lowest degree first.
///
/// Trailing zero coefficients are kept: the length doubles as the declared
/// dimension `k` (degree `< k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<FieldElem>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<FieldElem>) -> Self {
        Polynomial { coeffs }
    }

    /// The zero polynomial of dimension `k`.
    pub fn zero(k: usize) -> Self {
        Polynomial { coeffs: vec![0; k] }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    /// Declared dimension (number of stored coefficients).
    pub fn dimension(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, field: &Field, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// `self · x^shift`.
    pub fn shifted(&self, shift: usize) -> Polynomial {
        let mut coeffs = vec![0; shift];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { coeffs }
    }

    /// Coefficient-wise sum; the result has the larger dimension.
    pub fn add(&self, field: &Field, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(0);
                let b = other.coeffs.get(k).copied().unwrap_or(0);
                field.add(a, b)
            })
            .collect();
        Polynomial { coeffs }
    }

    /// Splits into degrees `0..at` and `at..`, padding with zeros if short.
    pub fn split_at(&self, at: usize) -> (Polynomial, Polynomial) {
        let mut low = self.coeffs.clone();
        low.resize(at.max(low.len()), 0);
        let high = low.split_off(at);
        (Polynomial { coeffs: low }, Polynomial { coeffs: high })
    }

    /// Pads or truncates to exactly `k` coefficients. Truncation drops
    /// coefficients, so callers use it only with known-zero tails.
    pub fn with_dimension(mut self, k: usize) -> Polynomial {
        self.coeffs.resize(k, 0);
        self
    }
}

impl From<Vec<FieldElem>> for Polynomial {
    fn from(coeffs: Vec<FieldElem>) -> Self {
        Polynomial::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_power_sum() {
        let f = Field::new(13).unwrap();
        let p = Polynomial::new(vec![3, 0, 5, 7]);
        for x in 0..13 {
            let direct = (0..4).fold(0, |acc, k| f.add(acc, f.mul(p.coeffs()[k], f.pow(x, k as u64))));
            assert_eq!(p.eval(&f, x), direct);
        }
    }

    #[test]
    fn shift_and_split_round_trip() {
        let p = Polynomial::new(vec![1, 2, 3]);
        let s = p.shifted(2);
        assert_eq!(s.coeffs(), &[0, 0, 1, 2, 3]);
        let (low, high) = s.split_at(2);
        assert!(low.is_zero());
        assert_eq!(high, p);
        let (low, high) = p.split_at(5);
        assert_eq!(low.coeffs(), &[1, 2, 3, 0, 0]);
        assert_eq!(high.dimension(), 0);
    }
}
