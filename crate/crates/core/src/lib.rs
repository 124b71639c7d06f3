//! Adaptive model selection for periodic signals observed under Lévy-driven
//! Ornstein-Uhlenbeck noise.
//!
//! The pipeline is: simulate or ingest increments of `dy = S dt + dξ`,
//! estimate Fourier coefficients, and pick a Pinsker weight sequence by
//! minimizing a penalized cost. [`transforms`] gives the exact second moments
//! of the noise integrals and [`risklab`] runs the Monte Carlo audits.

pub mod basis;
pub mod error;
pub mod io;
pub mod noise;
pub mod parallel;
pub mod quadrature;
pub mod risklab;
pub mod seed;
pub mod selector;
pub mod signals;
pub mod transforms;

pub use basis::{BasisFn, BasisIndex, CoeffVector, Integrand, QuadratureConfig};
pub use error::{Error, Result};
pub use noise::{simulate_noise, FamilyBounds, JumpLaw, NoisePath, NoiseParams, ObservationPath};
pub use parallel::Execution;
pub use risklab::{Estimate, FamilyGrid, MonteCarlo, RiskReport};
pub use selector::{EstimationResult, Observations, SelectionConfig, SigmaMode, WeightGrid, WeightSequence};
pub use signals::SignalSpec;
pub use transforms::{MomentConstants, TransformConfig};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
