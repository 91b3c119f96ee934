//! Exact finite-n distributions, large-deviation rate functions and
//! simulation tools for the extreme singular values of the chiral Ginibre
//! ensemble.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod logspace;
pub mod params;
pub mod quadrature;
pub mod rates;
pub mod sampler;
pub mod special;
pub mod tau;
pub mod verify;

pub use error::{Error, Result};
pub use params::{
    derived_scales, gumbel_cdf, gumbel_centering, AlphaRegime, Direction, EnsembleParams,
    LogProbability, Scales, Statistic, TailQuery,
};
pub use quadrature::{integrate_log, LogIntegral, QuadratureSpec};
