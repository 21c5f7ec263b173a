//! Special functions behind the q-Gaussian family: log-gamma, Beta, the
//! regularized incomplete beta and its inverse, a restricted Gauss
//! hypergeometric function, and erf.
//!
//! Everything here is a pure function of its arguments.

mod erf;
mod gamma;
mod hyp2f1;
mod incbeta;

pub use erf::{erf, erfc, inv_erf, inv_erfc};
pub use gamma::{beta_fn, ln_beta, log_gamma};
pub use hyp2f1::{gauss_2f1_restricted, power_series};
pub use incbeta::{
    inv_reg_inc_beta, inv_reg_inc_beta_pair, reg_inc_beta, reg_inc_beta_pair, BetaParams, Complementary,
    INVERSE_MAX_ITER, INVERSE_RESIDUAL_TOL,
};
