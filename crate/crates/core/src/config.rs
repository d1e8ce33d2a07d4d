//! JSON network description shared by the command-line tool and the Python
//! bindings.
//!
//! ```json
//! {
//!   "M": 4,
//!   "sources": [
//!     {"id": 1, "attach": 1, "demands": [4]},
//!     {"id": 2, "attach": 4, "demands": [1]}
//!   ],
//!   "duties": ["1/3", "1/3", "1/3", "1/3"],
//!   "offsets": [0, 0, 0, 0],
//!   "field_q": 11,
//!   "rates": ["4/27", "4/27"],
//!   "periods": 3,
//!   "m": 2,
//!   "g": 4
//! }
//! ```
//!
//! Only `M` and `sources` are required. Unknown keys are rejected. Every
//! error carries the 1-based line of the offending key.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coding::Field;
use crate::error::{Error, Result};
use crate::network::{NetworkSpec, Source};
use crate::protocol::DutyFactor;
use crate::{parse_rational, Rational};

pub const DEFAULT_FIELD: u32 = 11;
pub const DEFAULT_PERIODS: usize = 3;
pub const DEFAULT_EXPANSION: usize = 2;
pub const DEFAULT_GRANULARITY: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub id: usize,
    pub attach: usize,
    pub demands: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(rename = "M")]
    pub nodes: usize,
    pub sources: Vec<SourceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duties: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
}

/// A parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub raw: NetworkConfig,
    pub spec: NetworkSpec,
    pub duties: Option<Vec<DutyFactor>>,
    pub rates: Option<Vec<Rational>>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: NetworkConfig = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let at = |key: &str, e: Error| -> Error {
            let message = match e {
                Error::InvalidArgument(m) => m,
                other => other.to_string(),
            };
            Error::parse(line_of(text, key), message)
        };

        let sources = raw
            .sources
            .iter()
            .map(|s| Source {
                id: s.id,
                attach: s.attach,
                demands: s.demands.iter().copied().collect(),
            })
            .collect();
        let spec = NetworkSpec::new(raw.nodes, sources).map_err(|e| at("sources", e))?;
        let m = raw.nodes;

        let duties = raw
            .duties
            .as_ref()
            .map(|d| {
                if d.len() != m {
                    return Err(Error::invalid(format!("{} duties for {m} nodes", d.len())));
                }
                d.iter().map(|s| s.parse::<DutyFactor>()).collect::<Result<Vec<_>>>()
            })
            .transpose()
            .map_err(|e| at("duties", e))?;

        let rates = raw
            .rates
            .as_ref()
            .map(|r| {
                if r.len() != spec.source_count() {
                    return Err(Error::invalid(format!(
                        "{} rates for {} sources",
                        r.len(),
                        spec.source_count()
                    )));
                }
                r.iter()
                    .map(|s| {
                        let v = parse_rational(s)?;
                        if v < Rational::from_integer(0) {
                            return Err(Error::invalid(format!("negative rate {s}")));
                        }
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()
            .map_err(|e| at("rates", e))?;

        if let Some(o) = &raw.offsets {
            if o.len() != m {
                return Err(at("offsets", Error::invalid(format!("{} offsets for {m} nodes", o.len()))));
            }
            if o.iter().any(|&x| x < 0) {
                return Err(at("offsets", Error::invalid("offsets must be non-negative")));
            }
        }
        if let Some(q) = raw.field_q {
            Field::new(q).map_err(|e| at("field_q", e))?;
        }
        if raw.periods == Some(0) {
            return Err(at("periods", Error::invalid("periods must be at least 1")));
        }
        if raw.m.is_some_and(|x| x < 2) {
            return Err(at("\"m\"", Error::invalid("expansion factor m must be at least 2")));
        }
        if raw.g == Some(0) {
            return Err(at("\"g\"", Error::invalid("granularity g must be at least 1")));
        }

        Ok(Config {
            raw,
            spec,
            duties,
            rates,
        })
    }

    /// Validates an in-memory description, e.g. after overriding fields of
    /// a loaded one. Line numbers refer to its pretty-printed form.
    pub fn from_raw(raw: NetworkConfig) -> Result<Self> {
        Config::from_json(&serde_json::to_string_pretty(&raw).expect("config serializes"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.raw).expect("config serializes")
    }

    /// Offsets, defaulting to all zeros.
    pub fn offsets(&self) -> Vec<i64> {
        self.raw.offsets.clone().unwrap_or_else(|| vec![0; self.spec.nodes()])
    }

    pub fn field(&self) -> Field {
        Field::new(self.raw.field_q.unwrap_or(DEFAULT_FIELD)).expect("validated field order")
    }

    pub fn periods(&self) -> usize {
        self.raw.periods.unwrap_or(DEFAULT_PERIODS)
    }

    pub fn expansion(&self) -> usize {
        self.raw.m.unwrap_or(DEFAULT_EXPANSION)
    }

    pub fn granularity(&self) -> usize {
        self.raw.g.unwrap_or(DEFAULT_GRANULARITY)
    }

    pub fn require_duties(&self) -> Result<&[DutyFactor]> {
        self.duties
            .as_deref()
            .ok_or_else(|| Error::invalid("config has no \"duties\""))
    }

    pub fn require_rates(&self) -> Result<&[Rational]> {
        self.rates
            .as_deref()
            .ok_or_else(|| Error::invalid("config has no \"rates\""))
    }
}

/// First line mentioning `key` (quoted unless the caller already quoted it),
/// or line 1.
fn line_of(text: &str, key: &str) -> usize {
    let needle = if key.starts_with('"') {
        key.to_string()
    } else {
        format!("\"{key}\"")
    };
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|k| k + 1)
        .unwrap_or(1)
}
