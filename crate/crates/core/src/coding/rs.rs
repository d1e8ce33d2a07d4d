//! Reed-Solomon evaluation codes with erasure decoding by Vandermonde
//! interpolation.

use std::collections::HashSet;

use super::field::{Field, FieldElem};
use super::poly::Polynomial;
use crate::error::{Error, Result};

fn check_points(field: &Field, eval_set: &[FieldElem]) -> Result<()> {
    let mut seen = HashSet::with_capacity(eval_set.len());
    for &x in eval_set {
        if !field.contains(x) {
            return Err(Error::invalid(format!(
                "evaluation point {x} is not an element of GF({})",
                field.order()
            )));
        }
        if !seen.insert(x) {
            return Err(Error::invalid(format!("duplicate evaluation point {x}")));
        }
    }
    Ok(())
}

/// `eval_𝒳(f) = (f(ω))_{ω ∈ 𝒳}`.
pub fn rs_encode(field: &Field, poly: &Polynomial, eval_set: &[FieldElem]) -> Result<Vec<FieldElem>> {
    check_points(field, eval_set)?;
    if let Some(&c) = poly.coeffs().iter().find(|&&c| !field.contains(c)) {
        return Err(Error::invalid(format!("coefficient {c} is not a field element")));
    }
    Ok(eval_set.iter().map(|&x| poly.eval(field, x)).collect())
}

/// A codeword whose erased components are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedCodeword {
    eval_set: Vec<FieldElem>,
    values: Vec<Option<FieldElem>>,
}

impl ErasedCodeword {
    pub fn new(eval_set: Vec<FieldElem>, values: Vec<Option<FieldElem>>) -> Result<Self> {
        if eval_set.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} evaluation points but {} values",
                eval_set.len(),
                values.len()
            )));
        }
        let mut seen = HashSet::with_capacity(eval_set.len());
        if let Some(&dup) = eval_set.iter().find(|&&x| !seen.insert(x)) {
            return Err(Error::invalid(format!("duplicate evaluation point {dup}")));
        }
        Ok(ErasedCodeword { eval_set, values })
    }

    /// A codeword with nothing erased.
    pub fn complete(eval_set: Vec<FieldElem>, values: Vec<FieldElem>) -> Result<Self> {
        ErasedCodeword::new(eval_set, values.into_iter().map(Some).collect())
    }

    pub fn eval_set(&self) -> &[FieldElem] {
        &self.eval_set
    }

    pub fn values(&self) -> &[Option<FieldElem>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Erases component `index`.
    pub fn erase(&mut self, index: usize) {
        self.values[index] = None;
    }

    /// `(ω, value)` for every non-erased component, in order.
    pub fn survivors(&self) -> impl Iterator<Item = (FieldElem, FieldElem)> + '_ {
        self.eval_set
            .iter()
            .zip(&self.values)
            .filter_map(|(&x, v)| v.map(|v| (x, v)))
    }

    pub fn survivor_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Subtracts `eval(poly)` from every surviving component.
    pub fn subtract(&self, field: &Field, poly: &Polynomial) -> ErasedCodeword {
        let values = self
            .eval_set
            .iter()
            .zip(&self.values)
            .map(|(&x, v)| v.map(|v| field.sub(v, poly.eval(field, x))))
            .collect();
        ErasedCodeword {
            eval_set: self.eval_set.clone(),
            values,
        }
    }
}

/// Recovers the unique polynomial of degree `< k` through the survivors.
///
/// The `k × k` Vandermonde system on the first `k` survivors is solved by
/// Gauss-Jordan elimination; the result is then checked against every
/// survivor, so inconsistent input is reported rather than silently
/// interpolated.
pub fn rs_decode(field: &Field, cw: &ErasedCodeword, k: usize) -> Result<Polynomial> {
    let survivors: Vec<(FieldElem, FieldElem)> = cw.survivors().collect();
    if survivors.len() < k {
        return Err(Error::InsufficientData {
            needed: k,
            available: survivors.len(),
        });
    }
    if let Some(&(_, v)) = survivors.iter().find(|&&(_, v)| !field.contains(v)) {
        return Err(Error::invalid(format!("received value {v} is not a field element")));
    }

    let poly = Polynomial::new(solve_vandermonde(field, &survivors[..k])?);
    if survivors.iter().any(|&(x, v)| poly.eval(field, x) != v) {
        return Err(Error::CorruptCodeword { dimension: k });
    }
    Ok(poly)
}

/// Solves `Σ_l c_l x_j^l = y_j` for `j = 1..k`, with `k` = `points.len()`.
fn solve_vandermonde(field: &Field, points: &[(FieldElem, FieldElem)]) -> Result<Vec<FieldElem>> {
    let k = points.len();
    // augmented matrix, one row per point
    let mut rows: Vec<Vec<FieldElem>> = points
        .iter()
        .map(|&(x, y)| {
            let mut row = Vec::with_capacity(k + 1);
            let mut power = 1;
            for _ in 0..k {
                row.push(power);
                power = field.mul(power, x);
            }
            row.push(y);
            row
        })
        .collect();

    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| rows[r][col] != 0)
            .ok_or_else(|| Error::invalid("singular interpolation system"))?;
        rows.swap(col, pivot);
        let inv = field.inv(rows[col][col])?;
        for entry in rows[col].iter_mut() {
            *entry = field.mul(*entry, inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if r == col || factor == 0 {
                continue;
            }
            for (entry, &p) in row.iter_mut().zip(&pivot_row) {
                *entry = field.sub(*entry, field.mul(factor, p));
            }
        }
    }
    Ok(rows.into_iter().map(|row| row[k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_polynomial_encodes_flat() {
        let f = Field::new(7).unwrap();
        let cw = rs_encode(&f, &Polynomial::new(vec![5]), &[0, 1, 2, 3, 6]).unwrap();
        assert_eq!(cw, vec![5; 5]);
    }

    #[test]
    fn identity_polynomial_returns_points() {
        let f = Field::new(16).unwrap();
        let pts: Vec<u32> = (0..10).collect();
        assert_eq!(rs_encode(&f, &Polynomial::new(vec![0, 1]), &pts).unwrap(), pts);
    }

    #[test]
    fn duplicate_or_foreign_points_rejected() {
        let f = Field::new(7).unwrap();
        let p = Polynomial::new(vec![1, 1]);
        assert!(rs_encode(&f, &p, &[1, 2, 1]).is_err());
        assert!(rs_encode(&f, &p, &[1, 7]).is_err());
        assert!(ErasedCodeword::new(vec![0, 0], vec![None, None]).is_err());
        assert!(ErasedCodeword::new(vec![0, 1], vec![None]).is_err());
    }

    #[test]
    fn all_erased_is_insufficient() {
        let f = Field::new(11).unwrap();
        let cw = ErasedCodeword::new((0..9).collect(), vec![None; 9]).unwrap();
        assert_eq!(
            rs_decode(&f, &cw, 1),
            Err(Error::InsufficientData {
                needed: 1,
                available: 0
            })
        );
        assert!(rs_decode(&f, &cw, 0).unwrap().is_zero());
    }

    #[test]
    fn inconsistent_survivors_are_corrupt() {
        let f = Field::new(11).unwrap();
        let mut values = rs_encode(&f, &Polynomial::new(vec![1, 2]), &[0, 1, 2, 3]).unwrap();
        values[3] = (values[3] + 1) % 11;
        let cw = ErasedCodeword::complete(vec![0, 1, 2, 3], values).unwrap();
        assert_eq!(rs_decode(&f, &cw, 2), Err(Error::CorruptCodeword { dimension: 2 }));
        assert!(rs_decode(&f, &cw, 4).is_ok());
    }

    #[test]
    fn decodes_with_maximal_erasure() {
        let f = Field::new(13).unwrap();
        let pts: Vec<u32> = (0..9).collect();
        let poly = Polynomial::new(vec![4, 0, 11, 2]);
        let values = rs_encode(&f, &poly, &pts).unwrap();
        let mut cw = ErasedCodeword::complete(pts, values).unwrap();
        for i in [0, 2, 3, 5, 8] {
            cw.erase(i);
        }
        assert_eq!(rs_decode(&f, &cw, 4).unwrap(), poly);
    }
}
