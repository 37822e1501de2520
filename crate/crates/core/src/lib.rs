//! Simulation of a perfectly reflecting mirror confined to a causal diamond
//! interacting with the Minkowski vacuum of a (1+1)D massless scalar field:
//! Bogoliubov kernels, non-perturbative circuit moments, particle numbers,
//! and two-mode Gaussian entanglement measures.

pub mod bogoliubov;
pub mod circuit;
pub mod error;
pub mod gaussian;
pub mod modes;
pub mod numerics;

pub use bogoliubov::{alpha0, beta0, detector_commutator, overlaps, unruh_a, unruh_b, OverlapSet};
pub use circuit::{
    covariance_from_moments, energy_decay_exponent, fit_loglog_slope, output_moments_ll,
    output_moments_lr, particle_number, particle_number_fast, DetectorChannel, MirrorUnitary,
    MomentSet, DEFAULT_OVERLAP_GATE,
};
pub use error::{Error, Result};
pub use gaussian::{
    entropy_of_entanglement, eof, epr_variance_product, is_physical, log_negativity,
    standard_form, CovarianceMatrix, StandardForm, EOF_DEFAULT_TOL,
};
pub use modes::{
    diamond_coords_3p1, diamond_mode_exterior, diamond_mode_interior, gaussian_diamond_waveform,
    gaussian_minkowski_waveform, klein_gordon_inner, minkowski_mode, worldline_time,
    DiamondScale, DiamondWaveform, Direction, Frame, LightconePoint, MinkowskiWaveform,
    WavepacketSpec, Waveform,
};
pub use numerics::{
    integrate_adaptive, kummer_m, squeezing_parameter, truncate_semiinfinite, QuadratureResult,
};
