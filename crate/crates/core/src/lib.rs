#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod dic;
pub mod dist;
pub mod error;
pub mod metaanalysis;
pub mod optim;
pub mod sampler;
pub mod special;
pub mod summarize;
pub mod svg;

pub use dist::DistributionSpec;
pub use error::{Error, Result};

/// Version stamped into every JSON document the crate writes.
pub const SCHEMA_VERSION: u32 = 1;
