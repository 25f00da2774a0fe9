//! Exact computations in the Brauer category and its corner algebras.

pub mod acceptance;
pub mod algebra;
pub mod cells;
pub mod diagrams;
pub mod error;
pub mod gtheory;
pub mod klmod;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod symgrp;
pub mod transition;

pub use error::{Error, Result};
