//! Finite fields, Reed-Solomon erasure codes and the nested coder.

mod field;
mod nested;
mod poly;
mod rs;

use std::fmt;
use std::str::FromStr;

pub use field::{tabulated_extensions, Field, FieldElem, MAX_ORDER};
pub use nested::{
    decode_from_left, decode_from_right, nested_decode, symbols_per_period, NestedLayout,
    NodeCoderState,
};
pub use poly::Polynomial;
pub use rs::{rs_decode, rs_encode, ErasedCodeword};

use crate::error::{Error, Result};

/// The packets one node sends, or one neighbor hears, in one period;
/// `None` marks an erased packet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Frame {
    pub packets: Vec<Option<FieldElem>>,
}

impl Frame {
    pub fn new(packets: Vec<Option<FieldElem>>) -> Self {
        Frame { packets }
    }

    /// A frame with nothing erased.
    pub fn complete(values: &[FieldElem]) -> Self {
        Frame {
            packets: values.iter().copied().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    /// Pairs the packets with `ω_1, …, ω_n` for decoding.
    pub fn to_codeword(&self, field: &Field) -> Result<ErasedCodeword> {
        ErasedCodeword::new(field.first_elements(self.len())?, self.packets.clone())
    }
}

/// One line: decimal values separated by spaces, `*` for an erasure.
impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.packets.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match p {
                Some(v) => write!(f, "{v}")?,
                None => f.write_str("*")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Frame {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let packets = line
            .split_whitespace()
            .map(|tok| match tok {
                "*" => Ok(None),
                v => v
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::parse(1, format!("invalid packet {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Frame { packets })
    }
}
