//! Numerical dynamics of the Hurwitz map on I_D: geometry, level sets, the
//! Ulam discretization of the (twisted) transfer operator and the spectral
//! quantities derived from it.

mod geometry;
mod levels;
mod spectral;
mod ulam;

pub use geometry::{
    branch_image_volume, integrate_domain, psi_levels, Domain, Quadrature, Step, TwoStep,
};
pub use levels::{level_sum, LevelComparison, LevelSum};
pub use spectral::{
    a_constant, level_masses, mu_level, mu_level_pullback, osc_integral, osc_integral_single,
    s0_solve, LevelMasses, LevelSetId, S0Solution,
};
pub use ulam::{
    leading_eigen, twisted_eigen, ulam_build, ulam_twisted, Cell, DensityEstimate, Eigen,
    Sample, SampleBank, UlamGrid, UlamOperator,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("z = 0 has no digit")]
    ZeroPoint,
    #[error("digit {0} has norm < 2")]
    SmallDigit(String),
    #[error("quadrature did not converge (achieved relative error {achieved:.3e})")]
    Quadrature { achieved: f64 },
    #[error("power iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("no sign change of Re λ(s, t) − 1 on [{s_lo}, {s_hi}]: values {f_lo:.6e}, {f_hi:.6e}")]
    NoBracket { s_lo: f64, s_hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
