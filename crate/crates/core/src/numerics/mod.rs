//! Special-function evaluation and quadrature engines underpinning the
//! physics layers. Everything here is a pure function of its inputs.

mod dd;
mod gamma;
mod kummer;
mod quad;

pub use kummer::{kummer_m, sinh_cosh_r, squeezing_parameter};
pub use quad::{
    integrate_adaptive, truncate_semiinfinite, QuadratureResult, DEFAULT_N_SIGMAS, FREQ_FLOOR,
    MAX_DEPTH,
};
