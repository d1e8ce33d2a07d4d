//! Rate regions: the achievable region of the protocol-sequence scheme, its
//! outer bound, the ALOHA baselines, and optimizers over their parameters.
//!
//! Membership tests are exact when given rationals. The optimizers work in
//! floating point but re-evaluate the capacity and outer regions exactly at
//! the lattice point they return.

mod aloha;
mod optimize;
mod region;

pub use aloha::{aloha_region, aloha_region_point, AlohaParams, AlohaScheme, Split};
pub use optimize::{
    max_symmetric_rate, region_boundary, scheme_region, BoundaryPoint, Scheme, SearchConfig, SymmetricRate,
};
pub use region::{
    achievable_point, broadcast_throughput, capacity_region, link_throughput, outer_point, outer_region,
    LinearRegion, RateConstraint, RateNum,
};
