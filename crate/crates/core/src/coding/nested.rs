//! Nested joint channel-network coding.
//!
//! Every frame a node sends is one Reed-Solomon codeword of
//!
//! ```text
//! g(x) + (h^f(x) + h^b(x)) · x^s,      s = R_σ P
//! ```
//!
//! where `g` carries the node's own source symbols and `h^f`, `h^b` the
//! relayed forward and backward symbols. The two relay polynomials share a
//! shift, so the codeword dimension is `s + max(r^f P, r^b P)`. A left
//! neighbor already knows every symbol in `h^b` (it sent them), so it
//! subtracts that part and interpolates only `g + h^f x^s`; the right
//! neighbor does the mirror image.

use super::field::{Field, FieldElem};
use super::poly::Polynomial;
use super::rs::{rs_decode, rs_encode, ErasedCodeword};
use crate::error::{Error, Result};
use crate::Rational;

/// Symbol counts per period for one node's frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct NestedLayout {
    /// Own source symbols `R_σ P` (zero for a non-source node).
    pub source: usize,
    /// Forward relay symbols `r^f P`.
    pub forward: usize,
    /// Backward relay symbols `r^b P`.
    pub backward: usize,
}

impl NestedLayout {
    /// Degree at which the relay polynomials are nested.
    pub fn shift(&self) -> usize {
        self.source
    }

    /// Dimension of the transmitted codeword.
    pub fn dimension(&self) -> usize {
        self.source + self.forward.max(self.backward)
    }

    /// Dimension seen by the right neighbor after removing `h^b`.
    pub fn forward_dimension(&self) -> usize {
        self.source + self.forward
    }

    /// Dimension seen by the left neighbor after removing `h^f`.
    pub fn backward_dimension(&self) -> usize {
        self.source + self.backward
    }
}

/// Converts a rate into a whole number of symbols per period, rejecting
/// fractional counts.
pub fn symbols_per_period(rate: Rational, period: usize) -> Result<usize> {
    if rate < Rational::from_integer(0) {
        return Err(Error::RateInfeasible(format!("negative rate {rate}")));
    }
    let count = rate * Rational::from_integer(period as i64);
    if !count.is_integer() {
        return Err(Error::RateInfeasible(format!(
            "rate {rate} gives {count} symbols per period of {period}; only whole symbols are sent"
        )));
    }
    Ok(count.to_integer() as usize)
}

/// Encoder-side state of one node for one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCoderState {
    node: usize,
    layout: NestedLayout,
    frame_len: usize,
    source: Vec<FieldElem>,
    forward: Vec<FieldElem>,
    backward: Vec<FieldElem>,
}

impl NodeCoderState {
    /// Validates the per-period rates of node `node` once, at set-up.
    ///
    /// `frame_len` is the number of packets per frame (`n_i d²`, the weight
    /// of the node's sequence); the nested codeword must fit into it.
    pub fn new(
        node: usize,
        period: usize,
        frame_len: usize,
        source_rate: Rational,
        forward_rate: Rational,
        backward_rate: Rational,
    ) -> Result<Self> {
        let layout = NestedLayout {
            source: symbols_per_period(source_rate, period)?,
            forward: symbols_per_period(forward_rate, period)?,
            backward: symbols_per_period(backward_rate, period)?,
        };
        NodeCoderState::with_layout(node, layout, frame_len)
    }

    pub fn with_layout(node: usize, layout: NestedLayout, frame_len: usize) -> Result<Self> {
        if layout.dimension() > frame_len {
            return Err(Error::RateInfeasible(format!(
                "node {node}: {} source + max({}, {}) relay symbols exceed a frame of {frame_len} packets",
                layout.source, layout.forward, layout.backward
            )));
        }
        Ok(NodeCoderState {
            node,
            layout,
            frame_len,
            source: vec![0; layout.source],
            forward: vec![0; layout.forward],
            backward: vec![0; layout.backward],
        })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn layout(&self) -> NestedLayout {
        self.layout
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    /// Fills the buffers for the coming period; lengths must match the
    /// layout exactly.
    pub fn load(
        &mut self,
        source: Vec<FieldElem>,
        forward: Vec<FieldElem>,
        backward: Vec<FieldElem>,
    ) -> Result<()> {
        for (name, got, want) in [
            ("source", source.len(), self.layout.source),
            ("forward", forward.len(), self.layout.forward),
            ("backward", backward.len(), self.layout.backward),
        ] {
            if got != want {
                return Err(Error::invalid(format!(
                    "node {}: {name} buffer holds {got} symbols, layout needs {want}",
                    self.node
                )));
            }
        }
        self.source = source;
        self.forward = forward;
        self.backward = backward;
        Ok(())
    }

    pub fn source(&self) -> &[FieldElem] {
        &self.source
    }

    pub fn forward(&self) -> &[FieldElem] {
        &self.forward
    }

    pub fn backward(&self) -> &[FieldElem] {
        &self.backward
    }

    /// `g(x) + (h^f(x) + h^b(x)) · x^s` with dimension
    /// [`NestedLayout::dimension`].
    pub fn nested_polynomial(&self, field: &Field) -> Polynomial {
        let relay = Polynomial::new(self.forward.clone()).add(field, &Polynomial::new(self.backward.clone()));
        Polynomial::new(self.source.clone())
            .with_dimension(self.layout.source)
            .add(field, &relay.shifted(self.layout.shift()))
            .with_dimension(self.layout.dimension())
    }

    /// The frame: the nested polynomial evaluated at `ω_1, …, ω_{frame_len}`.
    pub fn nested_encode(&self, field: &Field) -> Result<Vec<FieldElem>> {
        if self.frame_len > field.order() as usize {
            return Err(Error::RateInfeasible(format!(
                "frame of {} packets needs at least that many field elements, GF({}) has {}",
                self.frame_len,
                field.order(),
                field.order()
            )));
        }
        let points = field.first_elements(self.frame_len)?;
        rs_encode(field, &self.nested_polynomial(field), &points)
    }
}

/// Removes a known polynomial `known · x^shift` from the survivors and
/// interpolates what remains with dimension `expected_dim`.
pub fn nested_decode(
    field: &Field,
    received: &ErasedCodeword,
    known: &Polynomial,
    shift: usize,
    expected_dim: usize,
) -> Result<Polynomial> {
    let residual = received.subtract(field, &known.shifted(shift));
    rs_decode(field, &residual, expected_dim)
}

/// Decodes a frame from the left neighbor: given the backward symbols it
/// relays (which this node supplied), returns its source and forward parts.
pub fn decode_from_left(
    field: &Field,
    received: &ErasedCodeword,
    sender: NestedLayout,
    known_backward: &[FieldElem],
) -> Result<(Vec<FieldElem>, Vec<FieldElem>)> {
    if known_backward.len() != sender.backward {
        return Err(Error::invalid("known backward part has the wrong length"));
    }
    let poly = nested_decode(
        field,
        received,
        &Polynomial::new(known_backward.to_vec()),
        sender.shift(),
        sender.forward_dimension(),
    )?;
    let (g, hf) = poly.split_at(sender.shift());
    Ok((g.into_coeffs(), hf.into_coeffs()))
}

/// Decodes a frame from the right neighbor: given the forward symbols it
/// relays, returns its source and backward parts.
pub fn decode_from_right(
    field: &Field,
    received: &ErasedCodeword,
    sender: NestedLayout,
    known_forward: &[FieldElem],
) -> Result<(Vec<FieldElem>, Vec<FieldElem>)> {
    if known_forward.len() != sender.forward {
        return Err(Error::invalid("known forward part has the wrong length"));
    }
    let poly = nested_decode(
        field,
        received,
        &Polynomial::new(known_forward.to_vec()),
        sender.shift(),
        sender.backward_dimension(),
    )?;
    let (g, hb) = poly.split_at(sender.shift());
    Ok((g.into_coeffs(), hb.into_coeffs()))
}
