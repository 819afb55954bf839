//! Numerically stable special functions: log-gamma family, Beta, and the
//! Wigner d-matrix at β = π/2.

mod gamma;
mod signed_log;
mod wigner;

pub use gamma::{beta_fn, ln_beta, ln_binomial, ln_factorial, ln_gamma};
pub use signed_log::{compensated_sum, SignedLogValue};
pub use wigner::{
    wigner_d_m0_pi2, wigner_d_m0_pi2_column, wigner_d_pi2, wigner_d_pi2_alternating,
    wigner_d_pi2_column,
};

pub(crate) use gamma::{ln_beta_unchecked, ln_binomial_unchecked};
