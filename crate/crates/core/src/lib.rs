//! Trace-defined binary linear codes over GF(2^m).
//!
//! For a in {0, 1} the code C_{D_a} has one coordinate per d with Tr(d) = a
//! and codewords (Tr(x d^(2^h+1)))_d for messages x in GF(2^m). The crate
//! builds these codes, enumerates their weight distributions, evaluates the
//! Weil sums that predict them and checks the predicted tables.

pub mod bitmatrix;
pub mod cli;
pub mod code;
pub mod error;
pub mod gf2m;
pub mod predict;
pub mod weil;

pub use code::{
    build_code, punctured_code, DefiningSet, DefiningSetKind, LinearCode, Variant,
    WeightDistribution,
};
pub use error::{Error, Result};
pub use gf2m::{FieldCtx, FieldElement};
