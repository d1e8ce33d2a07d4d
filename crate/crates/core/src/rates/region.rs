use num_integer::Integer;
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::protocol::Direction;
use crate::Rational;

/// Numeric types a region can be evaluated in: exact rationals, floats
/// inside the optimizers, and scaled integers for bulk sweeps.
pub trait RateNum: Clone + PartialOrd + Num {}

impl<T: Clone + PartialOrd + Num> RateNum for T {}

/// `Σ_j weights[j] · R_j ≤ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateConstraint<T> {
    pub weights: Vec<T>,
    pub bound: T,
    /// Where the row comes from, e.g. `"node 2 forward"`.
    pub label: String,
}

/// Rate vectors satisfying a list of linear constraints (for fixed duty
/// factors or ALOHA parameters), intersected with the non-negative orthant.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRegion<T> {
    pub constraints: Vec<RateConstraint<T>>,
}

impl<T: RateNum> LinearRegion<T> {
    pub fn new(constraints: Vec<RateConstraint<T>>) -> Self {
        LinearRegion { constraints }
    }

    /// Membership of a rate vector; negative components are rejected.
    pub fn contains(&self, rates: &[T]) -> bool {
        if rates.iter().any(|r| *r < T::zero()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let load = c
                .weights
                .iter()
                .zip(rates)
                .fold(T::zero(), |acc, (w, r)| acc + w.clone() * r.clone());
            load <= c.bound
        })
    }

    /// Largest `t ≥ 0` with `t · direction` in the region, or `None` if the
    /// ray never leaves it. A row with a negative bound makes the region
    /// empty, reported as `Some(0)`.
    pub fn ray_max(&self, direction: &[T]) -> Option<T> {
        let mut best: Option<T> = None;
        for c in &self.constraints {
            if c.bound < T::zero() {
                return Some(T::zero());
            }
            let slope = c
                .weights
                .iter()
                .zip(direction)
                .fold(T::zero(), |acc, (w, d)| acc + w.clone() * d.clone());
            if slope > T::zero() {
                let t = c.bound.clone() / slope;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        best
    }

    /// For a two-source region: the largest `R_2` with `(r1, R_2)` inside,
    /// or `None` if no such point exists. Unbounded `R_2` is reported as
    /// `Some(None)`.
    pub fn max_second_given_first(&self, r1: T) -> Option<Option<T>> {
        if r1 < T::zero() {
            return None;
        }
        let mut best: Option<T> = None;
        for c in &self.constraints {
            let (w1, w2) = (c.weights[0].clone(), c.weights[1].clone());
            let slack = c.bound.clone() - w1 * r1.clone();
            if slack < T::zero() {
                return None;
            }
            if w2 > T::zero() {
                let t = slack / w2;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        Some(best)
    }
}

impl LinearRegion<Rational> {
    /// Integer form for rate vectors `n_j / denom`: each row is multiplied
    /// by the least common denominator of its weights, and the bound is
    /// rounded down, which preserves membership exactly for integer `n_j`.
    pub fn scaled(&self, denom: i64) -> LinearRegion<i64> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let lcm = c.weights.iter().fold(1i64, |acc, w| acc.lcm(w.denom()));
                let weights = c
                    .weights
                    .iter()
                    .map(|w| (w * Rational::from_integer(lcm)).to_integer())
                    .collect();
                let bound = (c.bound * Rational::from_integer(lcm * denom)).floor().to_integer();
                RateConstraint {
                    weights,
                    bound,
                    label: c.label.clone(),
                }
            })
            .collect();
        LinearRegion { constraints }
    }

    /// Floating-point copy for plotting or optimizers.
    pub fn to_f64(&self) -> LinearRegion<f64> {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        LinearRegion {
            constraints: self
                .constraints
                .iter()
                .map(|c| RateConstraint {
                    weights: c.weights.iter().map(f).collect(),
                    bound: f(&c.bound),
                    label: c.label.clone(),
                })
                .collect(),
        }
    }
}

/// `f_i` with the convention `f_i = 0` outside `1..=M`.
pub(crate) fn duty_at<T: RateNum>(f: &[T], i: isize) -> T {
    if i < 1 || i as usize > f.len() {
        T::zero()
    } else {
        f[i as usize - 1].clone()
    }
}

/// `f_i (1 − f_{i±1}) (1 − f_{i±2})`: the collision-free fraction of node
/// `i`'s slots toward its neighbor in direction `dir`.
pub fn link_throughput<T: RateNum>(f: &[T], i: usize, dir: Direction) -> T {
    let i = i as isize;
    let s = dir.step();
    duty_at(f, i) * (T::one() - duty_at(f, i + s)) * (T::one() - duty_at(f, i + 2 * s))
}

/// `f_i Π_{k ∈ {±1, ±2}} (1 − f_{i+k})`: a packet heard by both neighbors.
pub fn broadcast_throughput<T: RateNum>(f: &[T], i: usize) -> T {
    let i = i as isize;
    [-2, -1, 1, 2]
        .iter()
        .fold(duty_at(f, i), |acc, &k| acc * (T::one() - duty_at(f, i + k)))
}

pub(crate) fn check_unit_interval<T: RateNum>(spec: &NetworkSpec, values: &[T], what: &str) -> Result<()> {
    if values.len() != spec.nodes() {
        return Err(Error::invalid(format!(
            "{} {what} values for {} nodes",
            values.len(),
            spec.nodes()
        )));
    }
    if values.iter().any(|v| *v < T::zero() || *v > T::one()) {
        return Err(Error::invalid(format!("{what} values must lie in [0, 1]")));
    }
    Ok(())
}

pub(crate) fn check_rates<T: RateNum>(spec: &NetworkSpec, rates: &[T]) -> Result<()> {
    if rates.len() != spec.source_count() {
        return Err(Error::invalid(format!(
            "{} rates for {} sources",
            rates.len(),
            spec.source_count()
        )));
    }
    Ok(())
}

pub(crate) fn indicator<T: RateNum>(n: usize, members: impl IntoIterator<Item = usize>) -> Vec<T> {
    let mut w = vec![T::zero(); n];
    for j in members {
        w[j - 1] = T::one();
    }
    w
}

/// The linear system of the achievable region for fixed duty factors:
/// for every node, its own source (if any) plus the relayed sources must
/// fit the collision-free throughput toward each neighbor.
pub fn capacity_region<T: RateNum>(spec: &NetworkSpec, f: &[T]) -> Result<LinearRegion<T>> {
    check_unit_interval(spec, f, "duty")?;
    let n = spec.source_count();
    let mut rows = Vec::new();
    for (k, sets) in spec.relay_sets().into_iter().enumerate() {
        let i = k + 1;
        let own = spec.source_at(i).map(|s| s.id);
        for (dir, members) in [(Direction::Forward, sets.forward), (Direction::Backward, sets.backward)] {
            let weights: Vec<T> = indicator(n, members.into_iter().chain(own));
            if weights.iter().all(|w| *w == T::zero()) {
                continue;
            }
            rows.push(RateConstraint {
                weights,
                bound: link_throughput(f, i, dir),
                label: format!("node {i} {}", dir_name(dir)),
            });
        }
    }
    Ok(LinearRegion::new(rows))
}

/// The outer-bound system for fixed duty factors, over the closed relay
/// sets (which include the node's own source when it is demanded on that
/// side).
pub fn outer_region<T: RateNum>(spec: &NetworkSpec, f: &[T]) -> Result<LinearRegion<T>> {
    check_unit_interval(spec, f, "duty")?;
    let n = spec.source_count();
    let mut rows = Vec::new();
    for (k, sets) in spec.relay_sets().into_iter().enumerate() {
        let i = k + 1;
        for (dir, members) in [
            (Direction::Forward, sets.forward_closed),
            (Direction::Backward, sets.backward_closed),
        ] {
            if members.is_empty() {
                continue;
            }
            rows.push(RateConstraint {
                weights: indicator(n, members),
                bound: link_throughput(f, i, dir),
                label: format!("node {i} {}", dir_name(dir)),
            });
        }
    }
    Ok(LinearRegion::new(rows))
}

pub(crate) fn dir_name(dir: Direction) -> &'static str {
    match dir {
        Direction::Forward => "forward",
        Direction::Backward => "backward",
    }
}

/// Whether `rates` is achievable with duty factors `f`.
pub fn achievable_point<T: RateNum>(spec: &NetworkSpec, f: &[T], rates: &[T]) -> Result<bool> {
    check_rates(spec, rates)?;
    Ok(capacity_region(spec, f)?.contains(rates))
}

/// Whether `rates` satisfies the outer bound with duty factors `f`.
pub fn outer_point<T: RateNum>(spec: &NetworkSpec, f: &[T], rates: &[T]) -> Result<bool> {
    check_rates(spec, rates)?;
    Ok(outer_region(spec, f)?.contains(rates))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn two_way() -> NetworkSpec {
        NetworkSpec::two_way(4).unwrap()
    }

    #[test]
    fn symmetric_thirds_hit_four_over_twenty_seven() {
        let f = vec![r(1, 3); 4];
        let rates = [r(4, 27), r(4, 27)];
        assert!(achievable_point(&two_way(), &f, &rates).unwrap());
        assert!(!achievable_point(&two_way(), &f, &[r(5, 27), r(4, 27)]).unwrap());
        let region = capacity_region(&two_way(), &f).unwrap();
        assert_eq!(region.ray_max(&[r(1, 1), r(1, 1)]), Some(r(4, 27)));
        let binding = region
            .constraints
            .iter()
            .filter(|c| c.bound == r(4, 27))
            .count();
        assert!(binding >= 2);
    }

    #[test]
    fn extreme_point_one_third() {
        let f = [r(0, 1), r(1, 3), r(1, 2), r(1, 1)];
        assert!(achievable_point(&two_way(), &f, &[r(0, 1), r(1, 3)]).unwrap());
        assert!(!achievable_point(&two_way(), &f, &[r(0, 1), r(1, 3) + r(1, 1000)]).unwrap());
    }

    #[test]
    fn zero_rate_always_inside() {
        let f = [r(3, 7), r(1, 1), r(0, 1), r(2, 9)];
        assert!(achievable_point(&two_way(), &f, &[r(0, 1), r(0, 1)]).unwrap());
        assert!(outer_point(&two_way(), &f, &[r(0, 1), r(0, 1)]).unwrap());
    }

    #[test]
    fn multicast_reduced_system() {
        let spec = NetworkSpec::bidirectional_multicast();
        let f = [0.0, 0.3, 0.4, 0.3, 0.0];
        let region = capacity_region(&spec, &f).unwrap();
        // with f_1 = f_5 = 0 the six rows become
        //   R1 ≤ f2(1−f3)(1−f4), R1+R2 ≤ f2, R1 ≤ f3(1−f4),
        //   R2 ≤ f3(1−f2), R2 ≤ f4(1−f3)(1−f2), R1+R2 ≤ f4
        let expect = [
            (vec![1.0, 0.0], 0.3 * 0.6 * 0.7),
            (vec![1.0, 1.0], 0.3),
            (vec![1.0, 0.0], 0.4 * 0.7),
            (vec![0.0, 1.0], 0.4 * 0.7),
            (vec![0.0, 1.0], 0.3 * 0.6 * 0.7),
            (vec![1.0, 1.0], 0.3),
        ];
        let mut got: Vec<(Vec<f64>, f64)> = region
            .constraints
            .iter()
            .map(|c| (c.weights.clone(), c.bound))
            .collect();
        let key = |x: &(Vec<f64>, f64)| (x.0.clone(), (x.1 * 1e9).round() as i64);
        let mut want = expect.to_vec();
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert_eq!(g.0, w.0);
            assert!((g.1 - w.1).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_region_preserves_membership() {
        let f = [r(1, 3), r(5, 12), r(1, 4), r(1, 3)];
        let region = capacity_region(&two_way(), &f).unwrap();
        let scaled = region.scaled(1728);
        for a in (0..400).step_by(7) {
            for b in (0..400).step_by(11) {
                let exact = region.contains(&[r(a, 1728), r(b, 1728)]);
                assert_eq!(scaled.contains(&[a, b]), exact);
            }
        }
    }

    #[test]
    fn conditional_maximum() {
        let f = vec![r(1, 3); 4];
        let region = capacity_region(&two_way(), &f).unwrap();
        assert_eq!(region.max_second_given_first(r(0, 1)), Some(Some(r(4, 27))));
        assert_eq!(region.max_second_given_first(r(1, 5)), None);
    }

    #[test]
    fn duty_validation() {
        assert!(capacity_region(&two_way(), &[r(1, 2); 3]).is_err());
        assert!(capacity_region(&two_way(), &[r(3, 2), r(0, 1), r(0, 1), r(0, 1)]).is_err());
        assert!(achievable_point(&two_way(), &[r(0, 1); 4], &[r(0, 1)]).is_err());
    }
}
