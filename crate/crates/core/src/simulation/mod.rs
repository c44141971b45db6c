//! Monte Carlo engine for the expected value of the Schweder–Spjøtvoll estimator
//! under replicability p-values, plus a semi-analytic oracle for the Z model.
//!
//! Every replicate owns a ChaCha8 stream: the generator is seeded with the master
//! seed and switched to stream `replicate_index`, so a replicate's output does not
//! depend on which thread runs it or when.

mod config;
mod effects;
mod engine;
mod oracle;
mod output;

use std::fmt;
use std::str::FromStr;

use crate::error::{config as config_err, Error, Result};
use crate::marginal::MarginalModelKind;
use crate::replicability::ReplicabilityConfig;

pub use config::{parse_grid, GridSpec};
pub use effects::{draw_effect_matrix, EffectMatrix};
pub use engine::{
    ecdf_curves, lambda_sweep_curve, replicate_rng, run_table, simulate_replication,
    CurvePoint, Replication, TableCell,
};
pub use oracle::{
    expectation_oracle, expectation_oracle_at, rejection_probability, std_oracle, std_oracle_at,
};
pub use output::{write_curve_csv, write_table_csv};
pub(crate) use engine::thread_pool as engine_pool;

/// Which p-value feeds the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PValueKind {
    Lfc,
    Rand,
    Stouffer,
    Fisher,
}

impl PValueKind {
    pub const ALL: [PValueKind; 4] = [
        PValueKind::Lfc,
        PValueKind::Rand,
        PValueKind::Stouffer,
        PValueKind::Fisher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PValueKind::Lfc => "lfc",
            PValueKind::Rand => "rand",
            PValueKind::Stouffer => "stouffer",
            PValueKind::Fisher => "fisher",
        }
    }
}

impl fmt::Display for PValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lfc" => Ok(PValueKind::Lfc),
            "rand" => Ok(PValueKind::Rand),
            "stouffer" => Ok(PValueKind::Stouffer),
            "fisher" => Ok(PValueKind::Fisher),
            other => Err(config_err(format!("unknown p-value kind `{other}`"))),
        }
    }
}

/// One simulation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSetting {
    /// Number of endpoints.
    pub m: usize,
    /// Number of studies.
    pub s: usize,
    pub gamma: usize,
    /// True proportion of null endpoints; `m * pi0` must be an integer.
    pub pi0: f64,
    /// Non-positive effects are uniform on `(mu_min / sqrt(n), 0]`.
    pub mu_min: f64,
    /// Positive effects are uniform on `(0, mu_max]`.
    pub mu_max: f64,
    /// Success probability of the positive-study count on null endpoints.
    pub p0: f64,
    /// Success probability of the positive-study count on alternative endpoints.
    pub p1: f64,
    /// Per-study sample size.
    pub n: usize,
    pub lambda: f64,
    pub seed: u64,
    pub reps: usize,
    pub model: MarginalModelKind,
    pub pvalue_kinds: Vec<PValueKind>,
}

impl Default for SimulationSetting {
    fn default() -> Self {
        Self {
            m: 100,
            s: 10,
            gamma: 6,
            pi0: 0.7,
            mu_min: -1.0,
            mu_max: 4.0,
            p0: 0.8,
            p1: 0.8,
            n: 50,
            lambda: 0.5,
            seed: 1,
            reps: 10_000,
            model: MarginalModelKind::ZKnownUnitVariance,
            pvalue_kinds: vec![PValueKind::Lfc, PValueKind::Rand],
        }
    }
}

fn is_probability(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

impl SimulationSetting {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(config_err(format!("m must be at least 2, got {}", self.m)));
        }
        ReplicabilityConfig::<f64>::with_half(self.s, self.gamma)?;
        if !is_probability(self.pi0) {
            return Err(config_err(format!("pi0 must lie in [0, 1], got {}", self.pi0)));
        }
        let m0 = self.m as f64 * self.pi0;
        if (m0 - m0.round()).abs() > 1e-9 {
            return Err(config_err(format!(
                "m * pi0 = {m0} is not an integer"
            )));
        }
        if !(self.mu_min <= 0.0) || !self.mu_min.is_finite() {
            return Err(config_err(format!("mu_min must be finite and <= 0, got {}", self.mu_min)));
        }
        if !(self.mu_max > 0.0) || !self.mu_max.is_finite() {
            return Err(config_err(format!("mu_max must be finite and > 0, got {}", self.mu_max)));
        }
        for (name, p) in [("p0", self.p0), ("p1", self.p1)] {
            if !is_probability(p) {
                return Err(config_err(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.n < self.model.min_sample_size() {
            return Err(config_err(format!(
                "n = {} too small for the {} model",
                self.n, self.model
            )));
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(config_err(format!("lambda must lie in [0, 1), got {}", self.lambda)));
        }
        if self.reps == 0 {
            return Err(config_err("reps must be positive"));
        }
        if self.pvalue_kinds.is_empty() {
            return Err(config_err("no p-value kinds requested"));
        }
        Ok(())
    }

    /// Number of true null endpoints, `m * pi0`.
    pub fn m0(&self) -> usize {
        (self.m as f64 * self.pi0).round() as usize
    }

    pub fn replicability_config(&self) -> Result<ReplicabilityConfig<f64>> {
        ReplicabilityConfig::with_half(self.s, self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trip() {
        for k in PValueKind::ALL {
            assert_eq!(k.to_string().parse::<PValueKind>().unwrap(), k);
        }
        assert!("bonferroni".parse::<PValueKind>().is_err());
    }

    #[test]
    fn validation() {
        let ok = SimulationSetting::default();
        ok.validate().unwrap();
        assert_eq!(ok.m0(), 70);
        let bad = [
            SimulationSetting { m: 1, ..ok.clone() },
            SimulationSetting { gamma: 11, ..ok.clone() },
            SimulationSetting { gamma: 1, ..ok.clone() },
            SimulationSetting { pi0: 0.705, ..ok.clone() },
            SimulationSetting { mu_min: 0.1, ..ok.clone() },
            SimulationSetting { mu_max: 0.0, ..ok.clone() },
            SimulationSetting { p1: 1.5, ..ok.clone() },
            SimulationSetting { lambda: 1.0, ..ok.clone() },
            SimulationSetting { reps: 0, ..ok.clone() },
            SimulationSetting { pvalue_kinds: vec![], ..ok.clone() },
            SimulationSetting {
                n: 1,
                model: MarginalModelKind::TUnknownVariance,
                ..ok.clone()
            },
        ];
        for b in bad {
            assert!(matches!(b.validate(), Err(Error::Config(_))), "{b:?}");
        }
    }
}
