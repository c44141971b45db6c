//! Compensated summation and sample moments.
//!
//! Results depend only on the order of the input, never on how it was produced, so
//! parallel producers that collect in index order give reproducible summaries.

use crate::scalar::Real;

/// Kahan–Babuška (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> FromIterator<T> for KahanSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sample mean and standard deviation (divisor `n - 1`; zero for a single value).
/// Returns `None` for an empty slice.
pub fn mean_and_std<T: Real>(values: &[T]) -> Option<(T, T)> {
    if values.is_empty() {
        return None;
    }
    let n = T::from_count(values.len());
    let mean = values.iter().copied().collect::<KahanSum<T>>().value() / n;
    if values.len() < 2 {
        return Some((mean, T::zero()));
    }
    let ss = values
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .collect::<KahanSum<T>>()
        .value();
    Some((mean, (ss / T::from_count(values.len() - 1)).sqrt()))
}
