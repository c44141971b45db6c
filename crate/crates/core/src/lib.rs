//! Randomized and LFC-based p-values for replicability (partial conjunction)
//! hypotheses, Schweder–Spjøtvoll estimation of the proportion of true nulls, and a
//! Monte Carlo engine with an exact oracle for the Z model.
//!
//! The statistical core is generic over [`Real`]; the aliases below fix the scalar
//! to `f64`. Simulation, exact CDFs and the analysis pipeline work in `f64` only.

pub mod analysis;
pub mod combiners;
pub mod error;
pub mod exact;
pub mod fdr;
pub mod marginal;
pub mod numerics;
pub mod pi0;
pub mod quadrature;
pub mod replicability;
pub mod scalar;
pub mod simulation;
pub mod summary;
pub mod validity;

pub use analysis::{analyze, AnalysisParams, AnalysisReport, ZScoreMatrix};
pub use error::{Error, Result};
pub use marginal::MarginalModelKind;
pub use scalar::Real;
pub use simulation::{EffectMatrix, PValueKind, SimulationSetting, TableCell};

pub type Probability = numerics::Probability<f64>;
pub type StudySample = marginal::StudySample<f64>;
pub type MarginalResult = marginal::MarginalResult<f64>;
pub type ReplicabilityConfig = replicability::ReplicabilityConfig<f64>;
pub type PValueRecord = replicability::PValueRecord<f64>;
pub type Pi0Estimate = pi0::Pi0Estimate<f64>;
