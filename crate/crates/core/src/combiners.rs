//! Stouffer- and Fisher-type partial-conjunction p-values built from the
//! `s - gamma + 1` largest per-study p-values.
//!
//! Per-study values of exactly `0` or `1` are rejected; callers that want clamping
//! must do it themselves.

use crate::error::{config, domain, Result};
use crate::numerics::{check_unit, chi_square_sf, std_normal_isf, std_normal_sf};
use crate::scalar::Real;

/// Sorts a copy of the inputs and returns the order statistics `gamma..=s`.
fn largest_order_statistics<T: Real>(per_study: &[T], gamma: usize) -> Result<Vec<T>> {
    if gamma < 1 || gamma > per_study.len() {
        return Err(config(format!(
            "gamma = {gamma} incompatible with {} studies",
            per_study.len()
        )));
    }
    for &p in per_study {
        check_unit(p, "per-study p-value")?;
    }
    let mut sorted = per_study.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("checked above"));
    Ok(sorted.split_off(gamma - 1))
}

/// `1 - Phi(T)` with `T = (s - gamma + 1)^{-1/2} sum_{i >= gamma} Phi^{-1}(1 - p_(i))`.
pub fn stouffer_pc_pvalue<T: Real>(per_study: &[T], gamma: usize) -> Result<T> {
    let tail = largest_order_statistics(per_study, gamma)?;
    let mut sum = T::zero();
    for &p in &tail {
        if p == T::zero() || p == T::one() {
            return Err(domain(format!(
                "Stouffer combination needs p in (0, 1), got {p}"
            )));
        }
        sum = sum + std_normal_isf(p)?;
    }
    let stat = sum / T::from_count(tail.len()).sqrt();
    std_normal_sf(stat)
}

/// `1 - F_{chi^2_{2(s - gamma + 1)}}(T)` with `T = -2 sum_{i >= gamma} ln p_(i)`.
pub fn fisher_pc_pvalue<T: Real>(per_study: &[T], gamma: usize) -> Result<T> {
    let tail = largest_order_statistics(per_study, gamma)?;
    let mut stat = T::zero();
    for &p in &tail {
        if p == T::zero() {
            return Err(domain("Fisher combination needs p > 0"));
        }
        stat = stat - T::two() * p.ln();
    }
    chi_square_sf(stat, 2 * tail.len() as u64)
}
