//! Benjamini–Hochberg step-up selection.

use crate::error::{domain, Result};
use crate::numerics::check_unit;
use crate::scalar::Real;

/// Indices (ascending) of the hypotheses rejected by the step-up rule at level `q`:
/// the `k` smallest p-values for the largest `k` with `p_(k) <= k q / m`.
pub fn bh_select<T: Real>(pvalues: &[T], q: T) -> Result<Vec<usize>> {
    if !(q > T::zero() && q < T::one()) {
        return Err(domain(format!("q must lie in (0, 1), got {q}")));
    }
    for &p in pvalues {
        check_unit(p, "p-value")?;
    }
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].partial_cmp(&pvalues[b]).expect("checked above").then(a.cmp(&b)));
    let mf = T::from_count(m);
    let cutoff = (1..=m)
        .rev()
        .find(|&k| pvalues[order[k - 1]] <= T::from_count(k) * q / mf)
        .unwrap_or(0);
    let mut selected = order[..cutoff].to_vec();
    selected.sort_unstable();
    Ok(selected)
}
