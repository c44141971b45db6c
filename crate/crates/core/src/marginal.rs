//! Per-study one-sided tests of `theta <= 0` against `theta > 0`.
//!
//! Two models are supported: a Z-test on observations with unit variance and a
//! one-sample t-test with unknown variance. Both have `d = 1/2`: the LFC p-value is
//! below one half exactly when the effect estimate is positive.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::numerics::{check_unit, std_normal_sf, student_t_cdf};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MarginalModelKind {
    /// Normal observations with known unit variance.
    #[default]
    ZKnownUnitVariance,
    /// Normal observations with unknown variance.
    TUnknownVariance,
}

impl MarginalModelKind {
    /// Smallest sample size for which the statistic is defined.
    pub fn min_sample_size(self) -> usize {
        match self {
            MarginalModelKind::ZKnownUnitVariance => 1,
            MarginalModelKind::TUnknownVariance => 2,
        }
    }
}

impl fmt::Display for MarginalModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarginalModelKind::ZKnownUnitVariance => "z",
            MarginalModelKind::TUnknownVariance => "t",
        })
    }
}

impl FromStr for MarginalModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" => Ok(MarginalModelKind::ZKnownUnitVariance),
            "t" => Ok(MarginalModelKind::TUnknownVariance),
            other => Err(Error::Config(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Observations of one study on one endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySample<T> {
    observations: Vec<T>,
}

impl<T: Real> StudySample<T> {
    pub fn new(observations: Vec<T>) -> Result<Self> {
        if observations.is_empty() {
            return Err(domain("study sample must not be empty"));
        }
        if let Some(x) = observations.iter().find(|x| !x.is_finite()) {
            return Err(domain(format!("non-finite observation {x}")));
        }
        Ok(Self { observations })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[T] {
        &self.observations
    }

    pub fn mean(&self) -> T {
        let n = T::from_count(self.observations.len());
        self.observations.iter().copied().sum::<T>() / n
    }

    /// Sample variance with divisor `n - 1`.
    pub fn variance(&self) -> Option<T> {
        let n = self.observations.len();
        if n < 2 {
            return None;
        }
        let mean = self.mean();
        let ss: T = self
            .observations
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .sum();
        Some(ss / T::from_count(n - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalResult<T> {
    /// Test statistic: the sample mean (Z) or the t-statistic (T).
    pub statistic: T,
    pub lfc_pvalue: T,
    /// Whether the effect estimate (the sample mean) is positive.
    pub estimator_positive: bool,
}

/// Test statistic of a study sample.
pub fn marginal_statistic<T: Real>(sample: &StudySample<T>, kind: MarginalModelKind) -> Result<T> {
    if sample.len() < kind.min_sample_size() {
        return Err(domain(format!(
            "{kind} model needs at least {} observations",
            kind.min_sample_size()
        )));
    }
    match kind {
        MarginalModelKind::ZKnownUnitVariance => Ok(sample.mean()),
        MarginalModelKind::TUnknownVariance => {
            let var = sample.variance().expect("length checked");
            if !(var > T::zero()) {
                return Err(Error::DegenerateSample("zero sample variance".into()));
            }
            let n = T::from_count(sample.len());
            Ok(n.sqrt() * sample.mean() / var.sqrt())
        }
    }
}

/// LFC p-value `1 - F(statistic)` where `F` is the null law at `theta = 0`.
pub fn marginal_lfc_pvalue<T: Real>(statistic: T, kind: MarginalModelKind, n: usize) -> Result<T> {
    if !statistic.is_finite() {
        return Err(domain(format!("statistic must be finite, got {statistic}")));
    }
    if n < kind.min_sample_size() {
        return Err(domain(format!("{kind} model needs n >= {}", kind.min_sample_size())));
    }
    match kind {
        MarginalModelKind::ZKnownUnitVariance => {
            std_normal_sf(T::from_count(n).sqrt() * statistic)
        }
        MarginalModelKind::TUnknownVariance => {
            // 1 - F(t) = F(-t) by symmetry, which avoids cancellation.
            student_t_cdf(-statistic, (n - 1) as u64)
        }
    }
}

/// Randomized single-study p-value with `c = 1/2`: `2p` below one half, `u` above.
/// The tie `p = 1/2` returns `1`.
pub fn marginal_randomized_pvalue<T: Real>(lfc_pvalue: T, u: T) -> Result<T> {
    check_unit(lfc_pvalue, "lfc p-value")?;
    check_unit(u, "u")?;
    if lfc_pvalue <= T::half() {
        Ok(lfc_pvalue + lfc_pvalue)
    } else {
        Ok(u)
    }
}

/// Statistic, LFC p-value and estimate sign for one study sample.
pub fn evaluate_sample<T: Real>(
    sample: &StudySample<T>,
    kind: MarginalModelKind,
) -> Result<MarginalResult<T>> {
    let statistic = marginal_statistic(sample, kind)?;
    let lfc_pvalue = marginal_lfc_pvalue(statistic, kind, sample.len())?;
    Ok(MarginalResult {
        statistic,
        lfc_pvalue,
        estimator_positive: sample.mean() > T::zero(),
    })
}
