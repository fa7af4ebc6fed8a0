//! Exact computation in graph inverse semigroups, Leavitt inverse semigroups
//! and Leavitt path algebras of finite directed graphs.

pub mod congruence;
pub mod contraction;
pub mod error;
pub mod gis;
pub mod graph;
pub mod leavitt;
pub mod lpa;

pub use error::{Error, Result};
