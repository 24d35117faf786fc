//! Exact truncated Fourier expansions of Jacobi forms of lattice index.

pub mod arith;
pub mod codec;
pub mod error;
pub mod formlang;
pub mod forms;
pub mod hecke;
pub mod lattice;
pub mod linalg;
pub mod series;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
