//! Choquet integration over finite capacity spaces and Bernstein-operator
//! approximation of random functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bernstein;
pub mod capacity;
pub mod choquet;
pub mod error;
pub mod experiments;
pub mod format;
pub mod randomfn;
pub mod stochastic;

pub use error::{Error, Result};
