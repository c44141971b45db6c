//! Schweder–Spjøtvoll estimation of the proportion of true null hypotheses.

use crate::error::{domain, Result};
use crate::numerics::check_unit;
use crate::scalar::Real;

/// `pi0_hat(lambda) = #{p > lambda} / (m (1 - lambda))`. Not truncated at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi0Estimate<T> {
    pub value: T,
    pub lambda: T,
    pub count_above: usize,
    pub m: usize,
}

/// Empirical CDF `#{v <= t} / n`.
pub fn ecdf<T: Real>(values: &[T], t: T) -> Result<T> {
    if values.is_empty() {
        return Err(domain("empirical CDF of an empty sample"));
    }
    let below = values.iter().filter(|&&v| v <= t).count();
    Ok(T::from_count(below) / T::from_count(values.len()))
}

pub fn schweder_spjotvoll<T: Real>(pvalues: &[T], lambda: T) -> Result<Pi0Estimate<T>> {
    check_unit(lambda, "lambda")?;
    if lambda >= T::one() {
        return Err(domain("lambda must be < 1"));
    }
    if pvalues.is_empty() {
        return Err(domain("no p-values to estimate from"));
    }
    let count_above = pvalues.iter().filter(|&&p| p > lambda).count();
    let m = pvalues.len();
    Ok(Pi0Estimate {
        value: T::from_count(count_above) / (T::from_count(m) * (T::one() - lambda)),
        lambda,
        count_above,
        m,
    })
}

pub fn lambda_sweep<T: Real>(pvalues: &[T], lambdas: &[T]) -> Result<Vec<Pi0Estimate<T>>> {
    lambdas
        .iter()
        .map(|&l| schweder_spjotvoll(pvalues, l))
        .collect()
}
