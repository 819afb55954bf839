//! Spin-j coherent, squeezed and cat states with their number distribution
//! `p(m)` and phase distribution `p(φ)`.

pub mod acceptance;
pub mod analysis;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod output;
pub mod quadrature;
pub mod specfun;
pub mod spin;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use spin::{MLevel, SpinJ};
