//! Numeric checks of validity and stochastic-order properties on exact CDFs.
//!
//! Everything here works under the Z model with equal per-study sample size `n`.
//! Effects are passed per study; [`Effect::PlusInfinity`] pins a study's p-value to
//! zero, which is how least favourable configurations are expressed.

use std::io::Write;

use crate::error::{domain, Error, Result};
use crate::exact::{
    lfc_cdf_at, poisson_binomial_tail, rand_cdf_at, study_below_prob, Effect, ProbPair,
};
use crate::numerics::std_normal_sf;
use crate::replicability::{threshold_c, ReplicabilityConfig};

/// Tolerance separating genuine order violations from rounding noise.
pub const ORDER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CdfCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl CdfCurve {
    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheckReport {
    pub holds: bool,
    pub max_violation: f64,
    /// Grid point of the largest violation, if any was positive.
    pub witness: Option<f64>,
}

impl OrderCheckReport {
    fn from_violations(points: impl IntoIterator<Item = (f64, f64)>, tolerance: f64) -> Self {
        let mut max_violation = 0.0f64;
        let mut witness = None;
        for (x, v) in points {
            if v > max_violation {
                max_violation = v;
                witness = Some(x);
            }
        }
        Self {
            holds: max_violation <= tolerance,
            max_violation,
            witness,
        }
    }
}

/// `n` equally spaced points from `0` to `1` inclusive.
pub fn unit_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(domain("empty grid"));
    }
    if let Some(t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(domain(format!("grid point {t} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(domain("grid must be sorted"));
    }
    Ok(())
}

/// Rounding can make adjacent CDF values decrease by an ulp; the running maximum
/// restores monotonicity without moving any value by more than that.
fn running_max(mut values: Vec<f64>) -> Vec<f64> {
    for i in 1..values.len() {
        values[i] = values[i].max(values[i - 1]);
    }
    values
}

pub fn exact_lfc_cdf(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    grid: &[f64],
) -> Result<CdfCurve> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&t| lfc_cdf_at(theta, config, n, t))
        .collect::<Result<Vec<_>>>()?;
    let values = running_max(values);
    Ok(CdfCurve {
        grid: grid.to_vec(),
        values,
        label: "lfc".into(),
    })
}

pub fn exact_rand_cdf(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    grid: &[f64],
) -> Result<CdfCurve> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&t| rand_cdf_at(theta, config, n, t))
        .collect::<Result<Vec<_>>>()?;
    let values = running_max(values);
    Ok(CdfCurve {
        grid: grid.to_vec(),
        values,
        label: "rand".into(),
    })
}

/// Whether an effect column lies in the null: fewer than `gamma` positive effects.
pub fn in_null(theta: &[Effect], config: &ReplicabilityConfig<f64>) -> bool {
    theta.iter().filter(|e| e.is_positive()).count() < config.gamma()
}

/// Validity condition for the randomized p-value at a null effect column:
/// `P(p_lfc <= z) <= z P(estimate in alternative) / c` for `z` in `[0, c]`.
pub fn check_theorem2_condition(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    z_grid: &[f64],
) -> Result<OrderCheckReport> {
    if theta.len() != config.s() {
        return Err(Error::Config(format!(
            "expected {} effects, got {}",
            config.s(),
            theta.len()
        )));
    }
    if !in_null(theta, config) {
        return Err(Error::Precondition(
            "effect column lies in the alternative".into(),
        ));
    }
    let c = threshold_c(config);
    check_grid(z_grid)?;
    if let Some(z) = z_grid.iter().find(|&&z| z > c) {
        return Err(domain(format!("z = {z} exceeds c = {c}")));
    }
    let in_alt = lfc_cdf_at(theta, config, n, c)?;
    let mut points = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let lhs = lfc_cdf_at(theta, config, n, z)?;
        let rhs = z * in_alt / c;
        points.push((z, lhs - rhs));
    }
    Ok(OrderCheckReport::from_violations(points, ORDER_TOLERANCE))
}

/// Checks that `sf_y / sf_x` does not decrease along `grid` (hazard rate order
/// `X <=hr Y`). Decreases are measured relative to the previous ratio; `a / 0` is
/// infinite for `a > 0`, and points where both survivals vanish are skipped.
fn survival_ratio_report(grid: &[f64], survivals: &[(f64, f64)]) -> OrderCheckReport {
    let mut prev: Option<f64> = None;
    let mut points = Vec::new();
    for (&t, &(sx, sy)) in grid.iter().zip(survivals) {
        let ratio = if sx > 0.0 {
            sy / sx
        } else if sy > 0.0 {
            f64::INFINITY
        } else {
            continue;
        };
        if let Some(r0) = prev {
            let drop = if r0 == f64::INFINITY {
                if ratio.is_finite() {
                    1.0
                } else {
                    0.0
                }
            } else if r0 > 0.0 {
                (r0 - ratio) / r0
            } else {
                0.0
            };
            points.push((t, drop));
        }
        prev = Some(ratio);
    }
    OrderCheckReport::from_violations(points, ORDER_TOLERANCE)
}

/// Hazard rate order between `N(mean1, variance)` and `N(mean2, variance)`:
/// holds when the survival ratio `(1 - G) / (1 - F)` is nondecreasing on `grid`.
pub fn check_hazard_rate_order(
    mean1: f64,
    mean2: f64,
    variance: f64,
    grid: &[f64],
) -> Result<OrderCheckReport> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(domain("variance must be positive"));
    }
    let sd = variance.sqrt();
    let survivals = grid
        .iter()
        .map(|&t| Ok((std_normal_sf((t - mean1) / sd)?, std_normal_sf((t - mean2) / sd)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(survival_ratio_report(grid, &survivals))
}

/// Order-statistic lemma: with `X_k = Phi(sqrt(n) mean_k + Z_k)` (one minus a
/// Z-model p-value), checks `X_(i:s) <=hr U_(i:i)` where `U_(i:i)` is the maximum of
/// `i` uniforms.
pub fn check_order_statistic_lemma(
    s: usize,
    i: usize,
    shifted_means: &[f64],
    n: usize,
    grid: &[f64],
) -> Result<OrderCheckReport> {
    if shifted_means.len() != s {
        return Err(Error::Config(format!(
            "expected {s} means, got {}",
            shifted_means.len()
        )));
    }
    if i == 0 || i > s {
        return Err(Error::Config(format!("order {i} outside 1..={s}")));
    }
    check_grid(grid)?;
    let mut survivals = Vec::with_capacity(grid.len());
    for &t in grid {
        // X_k <= t  <=>  p_k >= 1 - t
        let trials = shifted_means
            .iter()
            .map(|&m| study_below_prob(Effect::Finite(m), 1.0 - t, n).map(|(p, q)| (q, p)))
            .collect::<Result<Vec<ProbPair>>>()?;
        let (_, sx) = poisson_binomial_tail(&trials, i);
        let sy = if t >= 1.0 {
            0.0
        } else {
            -(i as f64 * t.ln()).exp_m1()
        };
        survivals.push((sx, sy));
    }
    Ok(survival_ratio_report(grid, &survivals))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichRegime {
    /// `F_lfc <= F_rand <= identity`
    Null,
    /// `identity <= F_rand <= F_lfc`
    Alternative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub regime: SandwichRegime,
    /// Left inequality: `F_lfc <= F_rand` (null) or `t <= F_rand` (alternative).
    pub lower: OrderCheckReport,
    /// Right inequality: `F_rand <= t` (null) or `F_rand <= F_lfc` (alternative).
    pub upper: OrderCheckReport,
    /// Both inequalities together.
    pub report: OrderCheckReport,
}

/// Checks the stochastic ordering of uniform, randomized and LFC p-values. The regime
/// follows from whether the column lies in the null or the alternative.
pub fn check_stochastic_sandwich(
    theta: &[Effect],
    config: &ReplicabilityConfig<f64>,
    n: usize,
    grid: &[f64],
) -> Result<SandwichReport> {
    let lfc = exact_lfc_cdf(theta, config, n, grid)?;
    let rand = exact_rand_cdf(theta, config, n, grid)?;
    let regime = if in_null(theta, config) {
        SandwichRegime::Null
    } else {
        SandwichRegime::Alternative
    };
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    for (idx, &t) in grid.iter().enumerate() {
        let (fl, fr) = (lfc.values[idx], rand.values[idx]);
        let (lo, hi) = match regime {
            SandwichRegime::Null => (fl - fr, fr - t),
            SandwichRegime::Alternative => (t - fr, fr - fl),
        };
        lower.push((t, lo));
        upper.push((t, hi));
    }
    let both = lower.iter().zip(&upper).map(|(&(t, a), &(_, b))| (t, a.max(b)));
    Ok(SandwichReport {
        regime,
        report: OrderCheckReport::from_violations(both, ORDER_TOLERANCE),
        lower: OrderCheckReport::from_violations(lower, ORDER_TOLERANCE),
        upper: OrderCheckReport::from_violations(upper, ORDER_TOLERANCE),
    })
}

/// Writes `t,F_lfc,F_rand,identity` rows.
pub fn write_curves_csv<W: Write>(out: &mut W, lfc: &CdfCurve, rand: &CdfCurve) -> Result<()> {
    if lfc.grid != rand.grid {
        return Err(domain("curves evaluated on different grids"));
    }
    writeln!(out, "t,F_lfc,F_rand,identity")?;
    for (idx, &t) in lfc.grid.iter().enumerate() {
        writeln!(out, "{t},{},{},{t}", lfc.values[idx], rand.values[idx])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: usize, gamma: usize) -> ReplicabilityConfig<f64> {
        ReplicabilityConfig::with_half(s, gamma).unwrap()
    }

    fn lfc_config(s: usize, gamma: usize) -> Vec<Effect> {
        let mut v = vec![Effect::PlusInfinity; gamma - 1];
        v.resize(s, Effect::Finite(0.0));
        v
    }

    fn mixed_null_column(n: usize) -> Vec<Effect> {
        let neg = -1.5 / (n as f64).sqrt();
        let mut v = vec![Effect::Finite(neg); 5];
        v.extend(std::iter::repeat_n(Effect::Finite(1.0), 5));
        v
    }

    #[test]
    fn lfc_configuration_is_uniform() {
        let c = cfg(10, 6);
        let grid = unit_grid(201);
        let theta = lfc_config(10, 6);
        let lfc = exact_lfc_cdf(&theta, &c, 50, &grid).unwrap();
        let rand = exact_rand_cdf(&theta, &c, 50, &grid).unwrap();
        for (idx, &t) in grid.iter().enumerate() {
            assert!((lfc.values[idx] - t).abs() < 1e-10);
            assert!((rand.values[idx] - t).abs() < 1e-10);
        }
        let rep = check_theorem2_condition(&theta, &c, 50, &[0.0, 0.3, 0.9]).unwrap();
        assert!(rep.holds && rep.max_violation < 1e-10);
    }

    #[test]
    fn very_negative_effects_push_mass_to_one() {
        let c = cfg(10, 6);
        let theta = vec![Effect::Finite(-40.0); 10];
        let curve = exact_lfc_cdf(&theta, &c, 50, &[0.0, 0.5, 0.99]).unwrap();
        assert!(curve.values.iter().all(|&v| v < 1e-12));
    }

    #[test]
    fn mixed_null_column_is_valid_and_sandwiched() {
        let c = cfg(10, 6);
        let grid = unit_grid(1001);
        let theta = mixed_null_column(50);
        let lfc = exact_lfc_cdf(&theta, &c, 50, &grid).unwrap();
        for (idx, &t) in grid.iter().enumerate().skip(1).take(999) {
            assert!(lfc.values[idx] < t);
        }
        let s = check_stochastic_sandwich(&theta, &c, 50, &grid).unwrap();
        assert_eq!(s.regime, SandwichRegime::Null);
        assert!(s.report.holds, "{:?}", s.report);
        let zg: Vec<f64> = grid.iter().map(|t| t * threshold_c(&c)).collect();
        assert!(check_theorem2_condition(&theta, &c, 50, &zg).unwrap().holds);
    }

    #[test]
    fn shifted_column_upper_sandwich_only() {
        let c = cfg(10, 6);
        let theta = vec![Effect::Finite(2.0 / 50f64.sqrt()); 10];
        let s = check_stochastic_sandwich(&theta, &c, 50, &unit_grid(1001)).unwrap();
        assert_eq!(s.regime, SandwichRegime::Alternative);
        // randomized p-value is stochastically larger than the LFC one ...
        assert!(s.upper.holds, "{:?}", s.upper);
        // ... but its CDF starts below the identity: the LFC CDF is not concave near 0
        assert!(!s.lower.holds);
        let w = s.lower.witness.unwrap();
        assert!(w > 0.0 && w < 0.03, "witness {w}");
        assert!(check_theorem2_condition(&theta, &c, 50, &[0.1]).is_err());
    }

    #[test]
    fn validity_condition_on_flat_column() {
        let c = cfg(10, 2);
        let mut theta = vec![Effect::Finite(0.0); 9];
        theta.push(Effect::Finite(-3.0));
        let zg: Vec<f64> = unit_grid(500).iter().map(|t| t * threshold_c(&c)).collect();
        assert!(check_theorem2_condition(&theta, &c, 50, &zg).unwrap().holds);
        assert!(check_theorem2_condition(&theta, &c, 50, &[0.999]).is_err());
    }

    #[test]
    fn hazard_rate_examples() {
        let grid: Vec<f64> = (0..=2000).map(|i| -2.0 + i as f64 * 0.002).collect();
        let r = check_hazard_rate_order(0.3, 0.3, 1.0, &grid).unwrap();
        assert!(r.holds && r.max_violation == 0.0);
        assert!(check_hazard_rate_order(-1.0, 0.0, 1.0 / 50.0, &grid).unwrap().holds);
        let r = check_hazard_rate_order(1.0, 0.0, 1.0 / 50.0, &grid).unwrap();
        assert!(!r.holds && r.max_violation > 0.0 && r.witness.is_some());
        assert!(check_hazard_rate_order(0.0, 1.0, 0.0, &grid).is_err());
    }

    #[test]
    fn order_statistic_lemma_examples() {
        let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
        let r = check_order_statistic_lemma(4, 4, &[0.0; 4], 50, &grid).unwrap();
        assert!(r.holds && r.max_violation < 1e-12, "{r:?}");
        assert!(check_order_statistic_lemma(3, 2, &[-1.0, -1.0, 0.0], 50, &grid).unwrap().holds);
        assert!(!check_order_statistic_lemma(2, 1, &[2.0, 2.0], 50, &grid).unwrap().holds);
        assert!(check_order_statistic_lemma(2, 3, &[0.0, 0.0], 50, &grid).is_err());
    }

    #[test]
    fn rand_cdf_endpoints() {
        let c = cfg(6, 3);
        let theta: Vec<Effect> = [0.3, -0.2, 0.1, 0.0, -1.0, 2.0].map(Effect::Finite).to_vec();
        let curve = exact_rand_cdf(&theta, &c, 20, &[0.0, 1.0]).unwrap();
        assert_eq!(curve.values[0], 0.0);
        assert!((curve.values[1] - 1.0).abs() < 1e-15);
        assert!(exact_rand_cdf(&theta, &c, 20, &[1.5]).is_err());
    }
}
