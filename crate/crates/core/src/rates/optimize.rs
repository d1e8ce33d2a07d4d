//! Maximal symmetric rates and two-source region boundaries.
//!
//! For fixed duty factors (or intensities) every region here is a polytope
//! in the rate vector, so the symmetric rate is a closed-form ray maximum.
//! The split probabilities of the ALOHA schemes are eliminated exactly: a
//! node can carry source load `a`, left load `b` and right load `c` with
//! success probabilities `A, B, C` iff `a/A + b/B + c/C ≤ 1` (uncoded), or iff
//! `a/A + b/B ≤ 1` and `a/A + c/C ≤ 1` (XOR relaying). What remains is a
//! search over duty factors, done on a rational lattice, or over Poisson
//! intensities, done by seeded pattern search.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::aloha::{success, AlohaScheme};
use super::region::{capacity_region, outer_region, LinearRegion, RateConstraint};
use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::protocol::Direction;
use crate::{rational_to_f64, Rational};

/// Which region to optimize over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// The achievable region of the protocol-sequence scheme.
    Capacity,
    /// The outer bound.
    Outer,
    PureAloha,
    SlottedAloha,
    NcSlottedAloha,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Capacity,
        Scheme::Outer,
        Scheme::PureAloha,
        Scheme::SlottedAloha,
        Scheme::NcSlottedAloha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Capacity => "capacity",
            Scheme::Outer => "outer",
            Scheme::PureAloha => "pure",
            Scheme::SlottedAloha => "slotted",
            Scheme::NcSlottedAloha => "nc-slotted",
        }
    }

    fn aloha(self) -> Option<AlohaScheme> {
        match self {
            Scheme::PureAloha => Some(AlohaScheme::Pure),
            Scheme::SlottedAloha => Some(AlohaScheme::Slotted),
            Scheme::NcSlottedAloha => Some(AlohaScheme::NcSlotted),
            _ => None,
        }
    }

    /// Whether the free parameters are duty factors searched on the lattice
    /// (everything but pure ALOHA).
    pub fn is_lattice(self) -> bool {
        self != Scheme::PureAloha
    }

    /// Whether results can be re-evaluated exactly.
    pub fn is_exact(self) -> bool {
        matches!(self, Scheme::Capacity | Scheme::Outer)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown scheme {s:?}")))
    }
}

/// Search settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Duty lattice step; must be `1/L`.
    pub grid_step: Rational,
    /// Exhaustive lattice searches are used up to this many points; beyond
    /// it a coarse sub-lattice is scanned and the best points refined.
    pub exhaustive_limit: u64,
    /// Coarse sub-lattice step (a multiple of `grid_step`).
    pub coarse_step: Rational,
    /// Coarse points refined by lattice hill climbing.
    pub candidates: usize,
    /// Random restarts of the intensity search.
    pub restarts: usize,
    /// Intensities are searched in `[0, max_intensity]`.
    pub max_intensity: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_step: Rational::new(1, 60),
            exhaustive_limit: 200_000,
            coarse_step: Rational::new(1, 12),
            candidates: 8,
            restarts: 20,
            max_intensity: 1.0,
            seed: 0,
        }
    }
}

impl SearchConfig {
    fn lattice(&self) -> Result<(i64, i64)> {
        let l = lattice_size(self.grid_step, "grid step")?;
        let c = lattice_size(self.coarse_step, "coarse step")?;
        if l % c != 0 && c < l {
            return Err(Error::invalid("coarse step must be a multiple of the grid step"));
        }
        Ok((l, (l / c).max(1)))
    }
}

fn lattice_size(step: Rational, what: &str) -> Result<i64> {
    if *step.numer() != 1 || *step.denom() < 1 {
        return Err(Error::invalid(format!("{what} must be 1/L, got {step}")));
    }
    Ok(*step.denom())
}

/// Result of a symmetric-rate search.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricRate {
    pub scheme: Scheme,
    pub rate: f64,
    /// Exact value at the witness, for the capacity and outer regions.
    pub exact: Option<Rational>,
    /// Duty factors (or intensities for pure ALOHA) attaining `rate`.
    pub witness: Vec<f64>,
    pub exact_witness: Option<Vec<Rational>>,
}

/// One sample of a two-source boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub r1: f64,
    pub r2: f64,
    pub exact: Option<(Rational, Rational)>,
    pub witness: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
enum Success {
    Link(usize, Direction),
    Broadcast(usize),
}

/// One row after split elimination: `Σ_k (w_k · R) / c_k ≤ 1`.
#[derive(Clone, Debug)]
struct TemplateRow {
    terms: Vec<(Vec<f64>, Success)>,
    label: String,
}

/// The row structure of a scheme on a spec, independent of the parameters.
#[derive(Clone, Debug)]
struct Template {
    scheme: Scheme,
    sources: usize,
    rows: Vec<TemplateRow>,
}

impl Template {
    fn new(spec: &NetworkSpec, scheme: Scheme) -> Self {
        let n = spec.source_count();
        let ind = |members: &[usize]| {
            let mut w = vec![0.0; n];
            for &j in members {
                w[j - 1] = 1.0;
            }
            w
        };
        let mut rows = Vec::new();
        for (k, sets) in spec.relay_sets().into_iter().enumerate() {
            let i = k + 1;
            let own: Vec<usize> = spec.source_at(i).map(|s| s.id).into_iter().collect();
            let fwd: Vec<usize> = sets.forward.iter().copied().collect();
            let bwd: Vec<usize> = sets.backward.iter().copied().collect();
            let link_f = Success::Link(i, Direction::Forward);
            let link_b = Success::Link(i, Direction::Backward);
            let mut push = |terms: Vec<(Vec<usize>, Success)>, tag: &str| {
                let terms: Vec<_> = terms
                    .into_iter()
                    .filter(|(m, _)| !m.is_empty())
                    .map(|(m, s)| (ind(&m), s))
                    .collect();
                if !terms.is_empty() {
                    rows.push(TemplateRow {
                        terms,
                        label: format!("node {i} {tag}"),
                    });
                }
            };
            match scheme {
                Scheme::Capacity => {
                    push(vec![([own.clone(), fwd].concat(), link_f)], "forward");
                    push(vec![([own, bwd].concat(), link_b)], "backward");
                }
                Scheme::Outer => {
                    push(vec![(sets.forward_closed.iter().copied().collect(), link_f)], "forward");
                    push(vec![(sets.backward_closed.iter().copied().collect(), link_b)], "backward");
                }
                Scheme::PureAloha | Scheme::SlottedAloha => push(
                    vec![(own, Success::Broadcast(i)), (fwd, link_f), (bwd, link_b)],
                    "split",
                ),
                Scheme::NcSlottedAloha => {
                    push(vec![(own.clone(), Success::Broadcast(i)), (fwd, link_f)], "split forward");
                    push(vec![(own, Success::Broadcast(i)), (bwd, link_b)], "split backward");
                }
            }
        }
        Template {
            scheme,
            sources: n,
            rows,
        }
    }

    fn success(&self, params: &[f64], s: Success) -> f64 {
        let scheme = self.scheme.aloha().unwrap_or(AlohaScheme::Slotted);
        match s {
            Success::Link(i, d) => success(scheme, params, i, Some(d)),
            Success::Broadcast(i) => success(scheme, params, i, None),
        }
    }

    /// The region for fixed parameters as an explicit system.
    fn region(&self, params: &[f64]) -> LinearRegion<f64> {
        let mut rows = Vec::new();
        for row in &self.rows {
            let mut weights = vec![0.0; self.sources];
            for (w, s) in &row.terms {
                let c = self.success(params, *s);
                if c > 0.0 {
                    for (acc, x) in weights.iter_mut().zip(w) {
                        *acc += x / c;
                    }
                } else {
                    rows.push(RateConstraint {
                        weights: w.clone(),
                        bound: 0.0,
                        label: format!("{} (no throughput)", row.label),
                    });
                }
            }
            rows.push(RateConstraint {
                weights,
                bound: 1.0,
                label: row.label.clone(),
            });
        }
        LinearRegion::new(rows)
    }

    /// Largest `t` with `t · dir` inside; zero-throughput terms that carry
    /// load force `t = 0`.
    fn ray_max(&self, params: &[f64], dir: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for row in &self.rows {
            let mut slope = 0.0;
            for (w, s) in &row.terms {
                let load: f64 = w.iter().zip(dir).map(|(a, b)| a * b).sum();
                if load > 0.0 {
                    let c = self.success(params, *s);
                    if c <= 0.0 {
                        return 0.0;
                    }
                    slope += load / c;
                }
            }
            if slope > 0.0 {
                best = best.min(1.0 / slope);
            }
        }
        best
    }

    /// Largest `R_2` with `(r1, R_2)` inside, `-∞` if none.
    fn second_given_first(&self, params: &[f64], r1: f64) -> f64 {
        let mut best = f64::INFINITY;
        for row in &self.rows {
            let (mut used, mut slope) = (0.0, 0.0);
            for (w, s) in &row.terms {
                let (a, b) = (w[0] * r1, w[1]);
                if a <= 0.0 && b <= 0.0 {
                    continue;
                }
                let c = self.success(params, *s);
                if c <= 0.0 {
                    if a > 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    best = best.min(0.0);
                    continue;
                }
                used += a / c;
                slope += b / c;
            }
            // tolerate round-off at the end of the R_1 range
            let slack = 1.0 - used;
            if slack < -1e-12 {
                return f64::NEG_INFINITY;
            }
            if slope > 0.0 {
                best = best.min(slack.max(0.0) / slope);
            }
        }
        best
    }
}

/// The region of `scheme` at fixed parameters (duty factors, or intensities
/// for pure ALOHA), with ALOHA split probabilities eliminated.
pub fn scheme_region(spec: &NetworkSpec, scheme: Scheme, params: &[f64]) -> Result<LinearRegion<f64>> {
    check_params(spec, scheme, params)?;
    Ok(Template::new(spec, scheme).region(params))
}

fn check_params(spec: &NetworkSpec, scheme: Scheme, params: &[f64]) -> Result<()> {
    if params.len() != spec.nodes() {
        return Err(Error::invalid(format!(
            "{} parameters for {} nodes",
            params.len(),
            spec.nodes()
        )));
    }
    let ok = |x: &f64| {
        if scheme.is_lattice() {
            (0.0..=1.0).contains(x)
        } else {
            x.is_finite() && *x >= 0.0
        }
    };
    if !params.iter().all(ok) {
        return Err(Error::invalid(format!("parameters out of range for {scheme}")));
    }
    Ok(())
}

/// Search state: larger value wins, ties go to the lexicographically
/// smaller point.
fn better(value: f64, point: &[i64], best: &Option<(f64, Vec<i64>)>) -> bool {
    match best {
        None => true,
        Some((v, p)) => value > *v || (value == *v && point < p.as_slice()),
    }
}

/// Maximizes `objective` over `{0, 1/L, …, 1}^M`.
fn lattice_search(m: usize, config: &SearchConfig, objective: impl Fn(&[f64]) -> f64) -> Result<(f64, Vec<i64>)> {
    let (l, coarse) = config.lattice()?;
    let to_f = |p: &[i64]| p.iter().map(|&k| k as f64 / l as f64).collect::<Vec<f64>>();
    let eval = |p: &[i64]| objective(&to_f(p));

    let full = (l as u64 + 1).checked_pow(m as u32).unwrap_or(u64::MAX);
    let (axis, refine) = if full <= config.exhaustive_limit {
        ((0..=l).collect::<Vec<_>>(), false)
    } else {
        let mut axis: Vec<i64> = (0..=l).step_by(coarse as usize).collect();
        if axis.last() != Some(&l) {
            axis.push(l);
        }
        (axis, true)
    };

    // scan the (possibly coarse) grid, keeping the top candidates
    let keep = if refine { config.candidates.max(1) } else { 1 };
    let mut top: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let point: Vec<i64> = idx.iter().map(|&k| axis[k]).collect();
        let v = eval(&point);
        let pos = top
            .iter()
            .position(|(tv, tp)| v > *tv || (v == *tv && point < *tp))
            .unwrap_or(top.len());
        if pos < keep {
            top.insert(pos, (v, point));
            top.truncate(keep);
        }
        let mut d = 0;
        while d < m {
            idx[d] += 1;
            if idx[d] < axis.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == m {
            break;
        }
    }
    if !refine {
        return Ok(top.remove(0));
    }

    let mut best: Option<(f64, Vec<i64>)> = None;
    for (v0, p0) in top {
        let (v, p) = hill_climb(m, l, coarse, v0, p0, &eval);
        if better(v, &p, &best) {
            best = Some((v, p));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Steepest ascent over the `3^M − 1` lattice moves, halving the stride
/// when stuck.
fn hill_climb(m: usize, l: i64, start_stride: i64, mut value: f64, mut point: Vec<i64>, eval: &impl Fn(&[i64]) -> f64) -> (f64, Vec<i64>) {
    let mut stride = (start_stride / 2).max(1);
    loop {
        let mut improved = false;
        let moves = 3usize.pow(m as u32);
        let mut step_best: Option<(f64, Vec<i64>)> = None;
        for code in 0..moves {
            let mut c = code;
            let mut cand = point.clone();
            for x in cand.iter_mut() {
                *x = (*x + (c % 3) as i64 * stride - stride).clamp(0, l);
                c /= 3;
            }
            if cand == point {
                continue;
            }
            let v = eval(&cand);
            if v > value && better(v, &cand, &step_best) {
                step_best = Some((v, cand));
            }
        }
        if let Some((v, p)) = step_best {
            value = v;
            point = p;
            improved = true;
        }
        if !improved {
            if stride == 1 {
                return (value, point);
            }
            stride = (stride / 2).max(1);
        }
    }
}

/// Maximizes `objective` over `[0, hi]^M` by compass search from seeded
/// random starts.
fn intensity_search(m: usize, config: &SearchConfig, objective: impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let hi = config.max_intensity;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut starts: Vec<Vec<f64>> = vec![vec![0.25 * hi; m]];
    for _ in 0..config.restarts {
        starts.push((0..m).map(|_| rng.random_range(0.0..=hi)).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let mut x = start;
        let mut v = objective(&x);
        let mut step = 0.25 * hi;
        while step > 1e-9 {
            let moves = 3usize.pow(m as u32);
            let mut round: Option<(f64, Vec<f64>)> = None;
            for code in 0..moves {
                let mut c = code;
                let mut cand = x.clone();
                for xi in cand.iter_mut() {
                    *xi = (*xi + ((c % 3) as f64 - 1.0) * step).clamp(0.0, hi);
                    c /= 3;
                }
                let cv = objective(&cand);
                if cv > v && round.as_ref().is_none_or(|(rv, _)| cv > *rv) {
                    round = Some((cv, cand));
                }
            }
            match round {
                Some((cv, cand)) => {
                    v = cv;
                    x = cand;
                }
                None => step *= 0.5,
            }
        }
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, x));
        }
    }
    best.expect("at least one start")
}

fn search(spec: &NetworkSpec, scheme: Scheme, config: &SearchConfig, objective: impl Fn(&[f64]) -> f64) -> Result<(f64, Vec<f64>, Option<Vec<Rational>>)> {
    let m = spec.nodes();
    if scheme.is_lattice() {
        let (l, _) = config.lattice()?;
        let (v, p) = lattice_search(m, config, objective)?;
        let exact: Vec<Rational> = p.iter().map(|&k| Rational::new(k, l)).collect();
        Ok((v, exact.iter().map(rational_to_f64).collect(), Some(exact)))
    } else {
        let (v, x) = intensity_search(m, config, objective);
        Ok((v, x, None))
    }
}

fn exact_region(spec: &NetworkSpec, scheme: Scheme, f: &[Rational]) -> Result<Option<LinearRegion<Rational>>> {
    Ok(match scheme {
        Scheme::Capacity => Some(capacity_region(spec, f)?),
        Scheme::Outer => Some(outer_region(spec, f)?),
        _ => None,
    })
}

/// The largest `R` with `(R, …, R)` in the region, maximized over the
/// scheme's parameters.
pub fn max_symmetric_rate(spec: &NetworkSpec, scheme: Scheme, config: &SearchConfig) -> Result<SymmetricRate> {
    let template = Template::new(spec, scheme);
    let ones = vec![1.0; spec.source_count()];
    let (rate, witness, exact_witness) = search(spec, scheme, config, |p| template.ray_max(p, &ones))?;
    let exact = match &exact_witness {
        Some(f) => exact_region(spec, scheme, f)?
            .map(|r| r.ray_max(&vec![Rational::from_integer(1); spec.source_count()]))
            .map(|t| t.ok_or_else(|| Error::invalid("symmetric rate is unbounded")))
            .transpose()?,
        None => None,
    };
    Ok(SymmetricRate {
        scheme,
        rate: exact.as_ref().map(rational_to_f64).unwrap_or(rate),
        exact,
        witness,
        exact_witness: exact_witness.filter(|_| scheme.is_exact()),
    })
}

/// Samples the boundary of a two-source region at `resolution + 1` evenly
/// spaced values of `R_1` from `0` to its maximum.
pub fn region_boundary(spec: &NetworkSpec, scheme: Scheme, resolution: usize, config: &SearchConfig) -> Result<Vec<BoundaryPoint>> {
    if spec.source_count() != 2 {
        return Err(Error::Unsupported(format!(
            "boundary tracing needs exactly two sources, got {}",
            spec.source_count()
        )));
    }
    if resolution == 0 {
        return Err(Error::invalid("resolution must be at least 1"));
    }
    let template = Template::new(spec, scheme);
    let (r1max, w_end, exact_end) = search(spec, scheme, config, |p| template.ray_max(p, &[1.0, 0.0]))?;
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    let r1max_exact = match &exact_end {
        Some(f) => exact_region(spec, scheme, f)?.and_then(|r| r.ray_max(&[one, zero])),
        None => None,
    };

    let mut out = Vec::with_capacity(resolution + 1);
    for k in 0..=resolution {
        if k == resolution {
            // the witness of the R_1 maximum is a witness for this end
            let r2 = template.second_given_first(&w_end, r1max).max(0.0);
            let exact = match (&exact_end, r1max_exact) {
                (Some(f), Some(r1)) => exact_region(spec, scheme, f)?
                    .and_then(|r| r.max_second_given_first(r1))
                    .map(|r2| (r1, r2.unwrap_or(zero))),
                _ => None,
            };
            out.push(point(r1max, r2, exact, w_end.clone()));
            continue;
        }
        let r1 = r1max * k as f64 / resolution as f64;
        let (r2, witness, exact_witness) = search(spec, scheme, config, |p| template.second_given_first(p, r1))?;
        let exact = match (&exact_witness, r1max_exact) {
            (Some(f), Some(r1max)) => {
                let r1 = r1max * Rational::new(k as i64, resolution as i64);
                exact_region(spec, scheme, f)?
                    .and_then(|r| r.max_second_given_first(r1))
                    .and_then(|r2| r2.map(|r2| (r1, r2)))
            }
            _ => None,
        };
        out.push(point(r1, r2, exact, witness));
    }
    Ok(out)
}

fn point(r1: f64, r2: f64, exact: Option<(Rational, Rational)>, witness: Vec<f64>) -> BoundaryPoint {
    match exact {
        Some((a, b)) => BoundaryPoint {
            r1: rational_to_f64(&a),
            r2: rational_to_f64(&b),
            exact: Some((a, b)),
            witness,
        },
        None => BoundaryPoint {
            r1,
            r2,
            exact: None,
            witness,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Source;
    use std::collections::BTreeSet;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn two_way_capacity_is_four_over_twenty_seven() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let got = max_symmetric_rate(&spec, Scheme::Capacity, &SearchConfig::default()).unwrap();
        assert_eq!(got.exact, Some(r(4, 27)));
        assert_eq!(got.exact_witness, Some(vec![r(1, 3); 4]));
    }

    #[test]
    fn single_hop_full_rate() {
        let src = Source {
            id: 1,
            attach: 1,
            demands: BTreeSet::from([2]),
        };
        let spec = NetworkSpec::new(2, vec![src]).unwrap();
        let got = max_symmetric_rate(&spec, Scheme::Capacity, &SearchConfig::default()).unwrap();
        assert_eq!(got.exact, Some(r(1, 1)));
        assert_eq!(got.exact_witness, Some(vec![r(1, 1), r(0, 1)]));
    }

    #[test]
    fn template_matches_exact_capacity_rows() {
        let spec = NetworkSpec::bidirectional_multicast();
        let f = [0.1, 0.35, 0.4, 0.25, 0.6];
        let fr: Vec<Rational> = [6, 21, 24, 15, 36].iter().map(|&k| r(k, 60)).collect();
        let exact = capacity_region(&spec, &fr).unwrap().to_f64();
        let template = scheme_region(&spec, Scheme::Capacity, &f).unwrap();
        for a in 0..20 {
            for b in 0..20 {
                let rates = [a as f64 * 0.013 + 1e-7, b as f64 * 0.011 + 1e-7];
                assert_eq!(exact.contains(&rates), template.contains(&rates));
            }
        }
    }

    #[test]
    fn coded_equals_capacity_on_two_way() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let cfg = SearchConfig::default();
        let cap = max_symmetric_rate(&spec, Scheme::Capacity, &cfg).unwrap();
        let nc = max_symmetric_rate(&spec, Scheme::NcSlottedAloha, &cfg).unwrap();
        assert!((cap.rate - nc.rate).abs() < 1e-9);
    }

    #[test]
    fn boundary_needs_two_sources() {
        let src = Source {
            id: 1,
            attach: 1,
            demands: BTreeSet::from([2]),
        };
        let spec = NetworkSpec::new(2, vec![src]).unwrap();
        let err = region_boundary(&spec, Scheme::Capacity, 4, &SearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("tdma".parse::<Scheme>().is_err());
    }

    #[test]
    fn bad_grid_step() {
        let spec = NetworkSpec::two_way(4).unwrap();
        let cfg = SearchConfig {
            grid_step: r(2, 7),
            ..SearchConfig::default()
        };
        assert!(max_symmetric_rate(&spec, Scheme::Capacity, &cfg).is_err());
    }
}
