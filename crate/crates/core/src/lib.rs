//! Deterministic protocol-sequence multiple access for tandem collision
//! networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`protocol`] builds and certifies consecutively 3-wise shift-invariant
//!   protocol sequences, measures their throughput and expands them for
//!   slot-asynchronous operation.
//! * [`coding`] provides `GF(q)` arithmetic, Reed-Solomon evaluation codes
//!   with Vandermonde erasure decoding, and the nested joint channel-network
//!   coder run by every node.
//! * [`network`] models the line topology and simulates the half-duplex
//!   collision channel, including header-free sender identification and
//!   the offset-discovery handshake.
//! * [`rates`] evaluates the achievable region, the outer bound and three
//!   ALOHA baselines, and searches them for symmetric rates and boundaries.
//! * [`config`] is the JSON network/experiment description shared by the
//!   command-line tool and the Python bindings.
//!
//! Node and source indices are 1-based throughout the public API.

pub mod coding;
pub mod config;
pub mod error;
pub mod network;
pub mod protocol;
pub mod rates;

pub use error::{Error, Result};

/// Exact rational used for duty factors, throughputs and region formulas.
pub type Rational = num_rational::Ratio<i64>;

/// Parses `"p/q"` or a bare integer into a [`Rational`].
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: i64 = numer
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {text:?}")))?;
    let denom: i64 = denom
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {text:?}")))?;
    if denom == 0 {
        return Err(Error::invalid(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(value: &Rational) -> String {
    if *value.denom() == 1 {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Converts an exact rational to the nearest `f64`.
pub fn rational_to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = parse_rational(" 8/36 ").unwrap();
        assert_eq!(r, Rational::new(2, 9));
        assert_eq!(format_rational(&r), "2/9");
        assert_eq!(format_rational(&parse_rational("3").unwrap()), "3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("one/2").is_err());
    }
}
