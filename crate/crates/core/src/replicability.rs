//! Partial-conjunction replicability p-values.
//!
//! For `s` studies and a replication requirement `gamma`, the null hypothesis of an
//! endpoint is that fewer than `gamma` studies carry a positive effect. The test
//! statistic is the `gamma`-th smallest per-study p-value `p_(gamma)`; at the least
//! favourable configuration (`gamma - 1` effects at `+inf`, the rest at zero) it is
//! distributed as the minimum of `k = s - gamma + 1` uniforms, giving the LFC p-value
//! `1 - (1 - p_(gamma))^k`.
//!
//! The randomized p-value rescales the LFC p-value by `c = 1 - (1 - d)^k`, the LFC
//! probability that the effect estimate falls into the alternative, and replaces it by
//! an independent uniform whenever the estimate lies in the null.

use crate::error::{config, domain, Result};
use crate::numerics::{beta_k1_cdf, check_unit};
use crate::scalar::Real;

/// Number of studies `s`, replication requirement `gamma` and per-study sign threshold `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicabilityConfig<T> {
    s: usize,
    gamma: usize,
    d: T,
}

impl<T: Real> ReplicabilityConfig<T> {
    pub fn new(s: usize, gamma: usize, d: T) -> Result<Self> {
        if s < 2 {
            return Err(config(format!("need at least 2 studies, got {s}")));
        }
        if gamma < 2 || gamma > s {
            return Err(config(format!("gamma must lie in [2, {s}], got {gamma}")));
        }
        if !(d > T::zero() && d < T::one()) {
            return Err(config(format!("d must lie in (0, 1), got {d}")));
        }
        Ok(Self { s, gamma, d })
    }

    /// Configuration with `d = 1/2`, the value for the Z and t models.
    pub fn with_half(s: usize, gamma: usize) -> Result<Self> {
        Self::new(s, gamma, T::half())
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// `k = s - gamma + 1`, the number of studies left free at the LFC.
    pub fn k(&self) -> usize {
        self.s - self.gamma + 1
    }

    pub(crate) fn k_u32(&self) -> u32 {
        self.k() as u32
    }
}

/// All quantities computed for one endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueRecord<T> {
    pub per_study: Vec<T>,
    pub lfc: T,
    pub randomized: T,
    pub uniform_used: T,
    /// Whether at least `gamma` per-study p-values fall below `d`.
    pub in_alternative_estimate: bool,
}

/// Rescaling constant `c = 1 - (1 - d)^(s - gamma + 1)`.
pub fn threshold_c<T: Real>(config: &ReplicabilityConfig<T>) -> T {
    T::one() - (T::one() - config.d).powi(config.k() as i32)
}

/// `rank`-th smallest value (1-based), reordering `values` in place.
pub fn order_statistic<T: Real>(values: &mut [T], rank: usize) -> T {
    assert!(rank >= 1 && rank <= values.len(), "rank out of range");
    let (_, nth, _) = values.select_nth_unstable_by(rank - 1, |a, b| {
        a.partial_cmp(b).expect("p-values are never NaN")
    });
    *nth
}

fn validate_per_study<T: Real>(per_study: &[T], config: &ReplicabilityConfig<T>) -> Result<()> {
    if per_study.len() != config.s {
        return Err(crate::Error::Config(format!(
            "expected {} per-study p-values, got {}",
            config.s,
            per_study.len()
        )));
    }
    for &p in per_study {
        check_unit(p, "per-study p-value")?;
    }
    Ok(())
}

/// LFC p-value from a precomputed `gamma`-th order statistic.
#[inline]
pub fn lfc_from_order_statistic<T: Real>(p_gamma: T, config: &ReplicabilityConfig<T>) -> T {
    // 1 - F_Beta(k,1)(1 - p)
    T::one() - (T::one() - p_gamma).powi(config.k() as i32)
}

/// LFC p-value `1 - (1 - p_(gamma))^(s - gamma + 1)`.
pub fn partial_conjunction_lfc_pvalue<T: Real>(
    per_study: &[T],
    config: &ReplicabilityConfig<T>,
) -> Result<T> {
    validate_per_study(per_study, config)?;
    let mut scratch = per_study.to_vec();
    let p_gamma = order_statistic(&mut scratch, config.gamma);
    Ok(T::one() - beta_k1_cdf(T::one() - p_gamma, config.k_u32())?)
}

/// Conditional CDF of the LFC p-value given the estimate lies in the alternative:
/// `t / c` on `[0, c]`, `1` above.
pub fn conditional_cdf_g<T: Real>(t: T, c: T) -> Result<T> {
    check_unit(t, "t")?;
    if !(c > T::zero() && c <= T::one()) {
        return Err(domain(format!("c must lie in (0, 1], got {c}")));
    }
    Ok(if t <= c { t / c } else { T::one() })
}

/// Randomized p-value: `lfc / c` below `c`, `u` above, `1` at the tie `lfc = c`.
#[inline]
pub fn randomize<T: Real>(lfc: T, c: T, u: T) -> T {
    if lfc < c {
        lfc / c
    } else if lfc > c {
        u
    } else {
        T::one()
    }
}

/// Checked form of [`randomize`].
pub fn randomize_checked<T: Real>(lfc: T, c: T, u: T) -> Result<T> {
    check_unit(lfc, "lfc")?;
    check_unit(u, "u")?;
    if !(c > T::zero() && c < T::one()) {
        return Err(domain(format!("c must lie in (0, 1), got {c}")));
    }
    Ok(randomize(lfc, c, u))
}

/// Computes the LFC and randomized p-values of one endpoint.
pub fn evaluate_endpoint<T: Real>(
    per_study: &[T],
    config: &ReplicabilityConfig<T>,
    u: T,
) -> Result<PValueRecord<T>> {
    validate_per_study(per_study, config)?;
    check_unit(u, "u")?;
    let mut scratch = per_study.to_vec();
    let p_gamma = order_statistic(&mut scratch, config.gamma);
    let lfc = lfc_from_order_statistic(p_gamma, config);
    let c = threshold_c(config);
    Ok(PValueRecord {
        per_study: per_study.to_vec(),
        lfc,
        randomized: randomize(lfc, c, u),
        uniform_used: u,
        in_alternative_estimate: p_gamma < config.d,
    })
}

/// Level-`alpha` decision: reject when `lfc < alpha`.
pub fn reject<T: Real>(lfc: T, alpha: T) -> Result<bool> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(lfc < alpha)
}
