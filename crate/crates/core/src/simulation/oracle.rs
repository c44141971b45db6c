//! Semi-analytic expectation of the estimator under the Z model.
//!
//! Within an endpoint class the effects of positive studies are i.i.d. uniform on
//! `(0, mu_max]` and those of the other studies uniform on `(mu_min / sqrt(n), 0]`,
//! so each study's p-value falls below `x` with a probability obtained by
//! integrating the per-effect probability over the uniform law. Given the number of
//! positive studies `K`, the event `p_(gamma) <= x` is a Poisson-binomial tail; the
//! result is then mixed over the binomial law of `K`.

use crate::error::{Error, Result};
use crate::exact::{order_statistic_threshold, poisson_binomial_tail, study_below_prob, Effect, ProbPair};
use crate::marginal::MarginalModelKind;
use crate::quadrature::adaptive_simpson;
use crate::replicability::threshold_c;

use super::{PValueKind, SimulationSetting};

const RELATIVE_TOLERANCE: f64 = 1e-8;

fn binomial_pmf(trials: usize, k: usize, p: f64) -> f64 {
    let mut coef = 1.0;
    for i in 0..k {
        coef *= (trials - i) as f64 / (i + 1) as f64;
    }
    coef * p.powi(k as i32) * (1.0 - p).powi((trials - k) as i32)
}

/// Integral of `f` over `[lo, hi]` divided by the width, to relative accuracy.
fn uniform_average<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return f(lo);
    }
    // coarse composite Simpson estimate sets the scale of the tolerance
    let panels = 32;
    let h = (hi - lo) / panels as f64;
    let mut rough = f(lo) + f(hi);
    for i in 1..panels {
        rough += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    rough *= h / 3.0;
    let tol = (RELATIVE_TOLERANCE * rough.abs()).max(f64::MIN_POSITIVE);
    adaptive_simpson(f, lo, hi, tol) / (hi - lo)
}

/// Averaged `(P(p_i <= x), P(p_i > x))` for one study whose effect is uniform on
/// `[lo, hi]`.
fn averaged_study_prob(x: f64, lo: f64, hi: f64, n: usize) -> ProbPair {
    let pair = |theta: f64| study_below_prob(Effect::Finite(theta), x, n).expect("x in [0, 1]");
    let below = uniform_average(|t| pair(t).0, lo, hi);
    let above = uniform_average(|t| pair(t).1, lo, hi);
    (below, above)
}

/// `P(p_lfc <= t)` for an endpoint of the null (`null = true`) or alternative class.
fn class_lfc_cdf(setting: &SimulationSetting, null: bool, t: f64) -> f64 {
    let (s, gamma) = (setting.s, setting.gamma);
    let x = order_statistic_threshold(t, s - gamma + 1);
    let positive = averaged_study_prob(x, 0.0, setting.mu_max, setting.n);
    let other = averaged_study_prob(
        x,
        setting.mu_min / (setting.n as f64).sqrt(),
        0.0,
        setting.n,
    );
    let counts: Vec<(usize, f64)> = if null {
        (0..gamma)
            .map(|k| (k, binomial_pmf(gamma - 1, k, setting.p0)))
            .collect()
    } else {
        (gamma..=s)
            .map(|k| (k, binomial_pmf(s - gamma, k - gamma, setting.p1)))
            .collect()
    };
    let mut trials = Vec::with_capacity(s);
    counts
        .into_iter()
        .map(|(k, w)| {
            trials.clear();
            trials.extend(std::iter::repeat(positive).take(k));
            trials.extend(std::iter::repeat(other).take(s - k));
            w * poisson_binomial_tail(&trials, gamma).0
        })
        .sum()
}

fn check_supported(setting: &SimulationSetting, kind: PValueKind) -> Result<()> {
    setting.validate()?;
    if setting.model != MarginalModelKind::ZKnownUnitVariance {
        return Err(Error::UnsupportedModel(format!(
            "the oracle needs the z model, got {}",
            setting.model
        )));
    }
    if !matches!(kind, PValueKind::Lfc | PValueKind::Rand) {
        return Err(Error::UnsupportedModel(format!(
            "no oracle for {kind} p-values"
        )));
    }
    Ok(())
}

/// `P(p_j <= t)` for one endpoint of the null or alternative class.
fn class_rejection(setting: &SimulationSetting, kind: PValueKind, null: bool, t: f64, c: f64) -> f64 {
    match kind {
        PValueKind::Lfc => class_lfc_cdf(setting, null, t),
        _ => t * (1.0 - class_lfc_cdf(setting, null, c)) + class_lfc_cdf(setting, null, t * c),
    }
    .min(1.0)
}

/// Per-class rejection probabilities `(null, alternative)` at `t`, with `None` for
/// an empty class.
fn class_rejections(
    setting: &SimulationSetting,
    kind: PValueKind,
    t: f64,
) -> Result<(Option<f64>, Option<f64>)> {
    check_supported(setting, kind)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(crate::error::domain(format!("t = {t} outside [0, 1]")));
    }
    let c = threshold_c(&setting.replicability_config()?);
    let m0 = setting.m0();
    let null = (m0 > 0).then(|| class_rejection(setting, kind, true, t, c));
    let alt = (m0 < setting.m).then(|| class_rejection(setting, kind, false, t, c));
    Ok((null, alt))
}

/// Average over endpoints of `P(p_j <= t)`.
pub fn rejection_probability(setting: &SimulationSetting, kind: PValueKind, t: f64) -> Result<f64> {
    let (null, alt) = class_rejections(setting, kind, t)?;
    let pi0 = setting.m0() as f64 / setting.m as f64;
    let total = null.map_or(0.0, |q| pi0 * q) + alt.map_or(0.0, |q| (1.0 - pi0) * q);
    Ok(total.min(1.0))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(crate::error::domain(format!("lambda = {lambda} outside [0, 1)")));
    }
    Ok(())
}

/// `E[pi0_hat(lambda)] = (1 - mean_j P(p_j <= lambda)) / (1 - lambda)`.
pub fn expectation_oracle_at(setting: &SimulationSetting, kind: PValueKind, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok((1.0 - rejection_probability(setting, kind, lambda)?) / (1.0 - lambda))
}

/// Expectation at the setting's own `lambda`.
pub fn expectation_oracle(setting: &SimulationSetting, kind: PValueKind) -> Result<f64> {
    expectation_oracle_at(setting, kind, setting.lambda)
}

/// Standard deviation of `pi0_hat(lambda)` over replicates. Endpoints are
/// independent, so the count of p-values above `lambda` is a sum of two binomials.
pub fn std_oracle_at(setting: &SimulationSetting, kind: PValueKind, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (null, alt) = class_rejections(setting, kind, lambda)?;
    let m0 = setting.m0() as f64;
    let m1 = (setting.m - setting.m0()) as f64;
    let var_count = null.map_or(0.0, |q| m0 * q * (1.0 - q)) + alt.map_or(0.0, |q| m1 * q * (1.0 - q));
    Ok(var_count.sqrt() / (setting.m as f64 * (1.0 - lambda)))
}

/// Standard deviation at the setting's own `lambda`.
pub fn std_oracle(setting: &SimulationSetting, kind: PValueKind) -> Result<f64> {
    std_oracle_at(setting, kind, setting.lambda)
}
