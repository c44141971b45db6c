//! Exact distribution of the partial-conjunction p-values under the Z model.
//!
//! With per-study success probabilities `P(p_i <= x)` the event `p_(gamma) <= x`
//! is "at least `gamma` successes", a Poisson-binomial tail computed by dynamic
//! programming over studies.

use std::fmt;

use crate::error::{domain, Result};
use crate::numerics::{std_normal_cdf, std_normal_isf, std_normal_sf};
use crate::replicability::{threshold_c, ReplicabilityConfig};

/// True effect of one study on one endpoint. `PlusInfinity` makes the study's
/// p-value zero almost surely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Effect {
    Finite(f64),
    PlusInfinity,
}

impl Effect {
    pub fn is_positive(self) -> bool {
        match self {
            Effect::Finite(v) => v > 0.0,
            Effect::PlusInfinity => true,
        }
    }
}

impl From<f64> for Effect {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Effect::PlusInfinity
        } else {
            Effect::Finite(v)
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Finite(v) => write!(f, "{v}"),
            Effect::PlusInfinity => f.write_str("inf"),
        }
    }
}

/// Probability pair `(P(E), P(not E))`, each computed without subtracting from one.
pub type ProbPair = (f64, f64);

/// `(P(p_i <= x), P(p_i > x))` for a Z-model study with `n` observations.
pub fn study_below_prob(effect: Effect, x: f64, n: usize) -> Result<ProbPair> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("threshold {x} outside [0, 1]")));
    }
    let theta = match effect {
        Effect::PlusInfinity => return Ok((1.0, 0.0)),
        Effect::Finite(t) if !t.is_finite() => {
            return Err(domain(format!("effect {t} must be finite or +inf")))
        }
        Effect::Finite(t) => t,
    };
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == 1.0 {
        return Ok((1.0, 0.0));
    }
    let z = std_normal_isf(x)? - (n as f64).sqrt() * theta;
    Ok((std_normal_sf(z)?, std_normal_cdf(z)?))
}

/// Distribution of the number of successes among independent trials.
pub fn poisson_binomial_pmf(trials: &[ProbPair]) -> Vec<f64> {
    let mut pmf = vec![0.0; trials.len() + 1];
    pmf[0] = 1.0;
    for (done, &(p, q)) in trials.iter().enumerate() {
        for c in (1..=done + 1).rev() {
            pmf[c] = pmf[c] * q + pmf[c - 1] * p;
        }
        pmf[0] *= q;
    }
    pmf
}

/// `(P(S >= k), P(S < k))` for a Poisson-binomial count `S`.
pub fn poisson_binomial_tail(trials: &[ProbPair], k: usize) -> ProbPair {
    let pmf = poisson_binomial_pmf(trials);
    let k = k.min(pmf.len());
    let upper: f64 = pmf[k..].iter().sum();
    let lower: f64 = pmf[..k].iter().sum();
    (upper.min(1.0), lower.min(1.0))
}

/// Threshold on `p_(gamma)` equivalent to `p_lfc <= t`: `1 - (1 - t)^(1/k)`.
pub fn order_statistic_threshold(t: f64, k: usize) -> f64 {
    if t >= 1.0 {
        return 1.0;
    }
    -((-t).ln_1p() / k as f64).exp_m1()
}

fn check_theta(theta: &[Effect], config: &ReplicabilityConfig<f64>) -> Result<()> {
    if theta.len() != config.s() {
        return Err(crate::Error::Config(format!(
            "expected {} effects, got {}",
            config.s(),
            theta.len()
        )));
    }
    Ok(())
}

/// `P(p_lfc <= t)` for one endpoint.
pub fn lfc_cdf_at(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    t: f64,
) -> Result<f64> {
    check_theta(theta, config)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("t = {t} outside [0, 1]")));
    }
    let x = order_statistic_threshold(t, config.k());
    let trials = theta
        .iter()
        .map(|&e| study_below_prob(e, x, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(poisson_binomial_tail(&trials, config.gamma()).0)
}

/// `P(p_rand <= t) = t (1 - P(p_lfc <= c)) + P(p_lfc <= t c)`.
pub fn rand_cdf_at(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    t: f64,
) -> Result<f64> {
    let c = threshold_c(config);
    let at_c = lfc_cdf_at(theta, config, n, c)?;
    let scaled = lfc_cdf_at(theta, config, n, t * c)?;
    Ok((t * (1.0 - at_c) + scaled).min(1.0))
}
