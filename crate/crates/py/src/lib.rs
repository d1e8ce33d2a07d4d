//! Python bindings: sequence construction, invariance checks, the
//! collision-network simulator, Reed-Solomon coding and rate optimizers.
//!
//! Rationals cross the boundary as `"p/q"` strings so nothing is lost to
//! floating point; rates that are only known numerically come back as
//! floats.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use tandem_core::coding::{rs_decode, rs_encode, ErasedCodeword, Field, Polynomial};
use tandem_core::config::Config;
use tandem_core::network::{self, NetworkSpec};
use tandem_core::protocol::{self, Direction, DutyFactor, InvarianceBudget};
use tandem_core::rates::{self, Scheme, SearchConfig};
use tandem_core::{format_rational, parse_rational, Rational};

create_exception!(tandem, TandemError, PyException);

fn err(e: tandem_core::Error) -> PyErr {
    TandemError::new_err(e.to_string())
}

fn rationals(items: &[String]) -> PyResult<Vec<Rational>> {
    items.iter().map(|s| parse_rational(s).map_err(err)).collect()
}

fn direction(name: &str) -> PyResult<Direction> {
    match name {
        "forward" => Ok(Direction::Forward),
        "backward" => Ok(Direction::Backward),
        other => Err(TandemError::new_err(format!("direction must be forward or backward, not {other:?}"))),
    }
}

/// A set of protocol sequences sharing one period.
#[pyclass(name = "SequenceSet", frozen)]
struct PySequenceSet {
    inner: protocol::SequenceSet,
}

#[pymethods]
impl PySequenceSet {
    /// Builds the shift-invariant set for duty factors such as `["1/3", "2/3"]`.
    #[staticmethod]
    fn construct(duties: Vec<String>) -> PyResult<Self> {
        let duties = duties
            .iter()
            .map(|s| s.parse::<DutyFactor>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let common = DutyFactor::common_denominator(&duties).map_err(err)?;
        let inner = protocol::construct_sequences(&common).map_err(err)?;
        Ok(PySequenceSet { inner })
    }

    #[getter]
    fn period(&self) -> usize {
        self.inner.period()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Sequences as `"0"`/`"1"` strings, node 1 first.
    fn sequences(&self) -> Vec<String> {
        self.inner.sequences().iter().map(|s| s.to_string()).collect()
    }

    fn is_shift_invariant(&self, seed: u64) -> bool {
        let budget = InvarianceBudget {
            seed,
            ..InvarianceBudget::default()
        };
        self.inner.check_shift_invariance(&budget).invariant
    }

    /// Packets per period node `i` receives from its neighbour in `direction`
    /// (`"forward"` means from node i-1), as a fraction of the period.
    fn throughput(&self, i: usize, direction: &str) -> PyResult<String> {
        let t = self.inner.predicted_throughput(i, self::direction(direction)?).map_err(err)?;
        Ok(format_rational(&t))
    }

    /// Slot-asynchronous version with expansion factor `m`.
    fn expand(&self, m: usize) -> PyResult<Self> {
        Ok(PySequenceSet {
            inner: self.inner.expand(m).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("SequenceSet(period={}, sequences={})", self.inner.period(), self.inner.len())
    }
}

/// Line network with its sources and demands.
#[pyclass(name = "Network", frozen)]
struct PyNetwork {
    spec: NetworkSpec,
    config: Option<Config>,
}

#[pymethods]
impl PyNetwork {
    /// Two sources at the ends, each demanded by the other end.
    #[staticmethod]
    fn two_way(nodes: usize) -> PyResult<Self> {
        Ok(PyNetwork {
            spec: NetworkSpec::two_way(nodes).map_err(err)?,
            config: None,
        })
    }

    /// Parses a JSON network config (the same schema the CLI reads).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let config = Config::from_json(text).map_err(err)?;
        Ok(PyNetwork {
            spec: config.spec.clone(),
            config: Some(config),
        })
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.spec.nodes()
    }

    #[getter]
    fn source_count(&self) -> usize {
        self.spec.source_count()
    }

    /// Duties from the config, if it had any.
    #[getter]
    fn duties(&self) -> Option<Vec<String>> {
        let d = self.config.as_ref()?.duties.as_ref()?;
        Some(d.iter().map(|x| x.to_string()).collect())
    }

    /// Rates from the config, if it had any.
    #[getter]
    fn rates(&self) -> Option<Vec<String>> {
        let r = self.config.as_ref()?.rates.as_ref()?;
        Some(r.iter().map(format_rational).collect())
    }

    /// Whether `rates` lies in the achievable region at duties `f`.
    fn achievable(&self, f: Vec<String>, rates: Vec<String>) -> PyResult<bool> {
        rates::achievable_point(&self.spec, &rationals(&f)?, &rationals(&rates)?).map_err(err)
    }

    /// Whether `rates` lies inside the outer bound at duties `f`.
    fn within_outer_bound(&self, f: Vec<String>, rates: Vec<String>) -> PyResult<bool> {
        rates::outer_point(&self.spec, &rationals(&f)?, &rationals(&rates)?).map_err(err)
    }

    /// Largest common rate for `scheme` (`capacity`, `outer`, `pure`,
    /// `slotted`, `nc-slotted`); returns `(rate, witness_parameters)`.
    #[pyo3(signature = (scheme, seed = 0))]
    fn max_symmetric_rate(&self, scheme: &str, seed: u64) -> PyResult<(f64, Vec<f64>)> {
        let scheme: Scheme = scheme.parse().map_err(err)?;
        let cfg = SearchConfig {
            seed,
            ..SearchConfig::default()
        };
        let res = rates::max_symmetric_rate(&self.spec, scheme, &cfg).map_err(err)?;
        Ok((res.rate, res.witness))
    }

    /// `(R1, R2)` points on the boundary of a two-source region.
    #[pyo3(signature = (scheme, resolution = 20, seed = 0))]
    fn boundary(&self, scheme: &str, resolution: usize, seed: u64) -> PyResult<Vec<(f64, f64)>> {
        let scheme: Scheme = scheme.parse().map_err(err)?;
        let cfg = SearchConfig {
            seed,
            ..SearchConfig::default()
        };
        let points = rates::region_boundary(&self.spec, scheme, resolution, &cfg).map_err(err)?;
        Ok(points.iter().map(|p| (p.r1, p.r2)).collect())
    }

    /// Runs the coded scheme; returns whether every destination decoded
    /// every generation exactly. Infeasible rates raise `TandemError`
    /// naming the link.
    #[pyo3(signature = (sequences, offsets, rates, field_q = 11, periods = 3, seed = 0))]
    fn simulate(
        &self,
        sequences: &PySequenceSet,
        offsets: Vec<i64>,
        rates: Vec<String>,
        field_q: u32,
        periods: usize,
        seed: u64,
    ) -> PyResult<bool> {
        let field = Field::new(field_q).map_err(err)?;
        let out = network::simulate(&self.spec, &sequences.inner, &offsets, &field, &rationals(&rates)?, periods, seed)
            .map_err(err)?;
        Ok(out.is_zero_error())
    }

    fn __repr__(&self) -> String {
        format!("Network(nodes={}, sources={})", self.spec.nodes(), self.spec.source_count())
    }
}

/// Evaluates the polynomial with coefficients `message` (constant first) at
/// the first `n` elements of GF(q).
#[pyfunction]
fn rs_encode_message(q: u32, message: Vec<u32>, n: usize) -> PyResult<Vec<u32>> {
    let field = Field::new(q).map_err(err)?;
    let points = field.first_elements(n).map_err(err)?;
    rs_encode(&field, &Polynomial::new(message), &points).map_err(err)
}

/// Recovers a `k`-symbol message from a codeword with erasures (`None`).
#[pyfunction]
fn rs_decode_message(q: u32, codeword: Vec<Option<u32>>, k: usize) -> PyResult<Vec<u32>> {
    let field = Field::new(q).map_err(err)?;
    let points = field.first_elements(codeword.len()).map_err(err)?;
    let rx = ErasedCodeword::new(points, codeword).map_err(err)?;
    let mut coeffs = rs_decode(&field, &rx, k).map_err(err)?.coeffs().to_vec();
    coeffs.resize(k, 0);
    Ok(coeffs)
}

#[pymodule]
fn tandem(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TandemError", m.py().get_type::<TandemError>())?;
    m.add_class::<PySequenceSet>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(rs_encode_message, m)?)?;
    m.add_function(wrap_pyfunction!(rs_decode_message, m)?)?;
    Ok(())
}
