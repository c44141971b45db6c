#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use randrep::exact::Effect;
use randrep::marginal::{marginal_lfc_pvalue, MarginalModelKind};
use randrep::replicability::evaluate_endpoint;
use randrep::simulation::replicate_rng;
use randrep::ReplicabilityConfig;

/// DKW half-width for `draws` samples at confidence `1 - alpha`.
pub fn dkw_epsilon(draws: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * draws as f64)).sqrt()
}

/// Fraction of `sorted` that is `<= t`.
pub fn ecdf_sorted(sorted: &[f64], t: f64) -> f64 {
    sorted.partition_point(|&v| v <= t) as f64 / sorted.len() as f64
}

/// Kolmogorov distance between the sample and a continuous CDF, evaluated exactly at
/// the sample points.
pub fn ks_uniform(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            (x - i as f64 / n).max((i + 1) as f64 / n - x)
        })
        .fold(0.0, f64::max)
}

/// Largest gap between the sample ECDF and `cdf` over the given grid points.
pub fn max_gap_on_grid(sorted: &[f64], grid: &[f64], cdf: &[f64]) -> f64 {
    grid.iter()
        .zip(cdf)
        .map(|(&t, &f)| (ecdf_sorted(sorted, t) - f).abs())
        .fold(0.0, f64::max)
}

/// Simulated LFC and randomized p-values of one Z-model endpoint with the given
/// effects, both sorted ascending.
pub fn simulate_endpoint(
    theta: &[Effect],
    cfg: &ReplicabilityConfig,
    n: usize,
    draws: usize,
    seed: u64,
    stream: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut rng = replicate_rng(seed, stream);
    let sqrt_n = (n as f64).sqrt();
    let mut per_study = vec![0.0; theta.len()];
    let mut lfc = Vec::with_capacity(draws);
    let mut rand = Vec::with_capacity(draws);
    for _ in 0..draws {
        for (p, e) in per_study.iter_mut().zip(theta) {
            *p = match *e {
                Effect::PlusInfinity => 0.0,
                Effect::Finite(t) => {
                    let mean = t + rng.sample::<f64, _>(StandardNormal) / sqrt_n;
                    marginal_lfc_pvalue(mean, MarginalModelKind::ZKnownUnitVariance, n).unwrap()
                }
            };
        }
        let rec = evaluate_endpoint(&per_study, cfg, rng.random()).unwrap();
        lfc.push(rec.lfc);
        rand.push(rec.randomized);
    }
    lfc.sort_by(f64::total_cmp);
    rand.sort_by(f64::total_cmp);
    (lfc, rand)
}

/// A random effect column with `s` studies. With `null = true` fewer than `gamma`
/// effects are positive.
pub fn random_column<R: Rng>(rng: &mut R, s: usize, gamma: usize, null: bool) -> Vec<Effect> {
    let positives = if null {
        rng.random_range(0..gamma)
    } else {
        rng.random_range(gamma..=s)
    };
    let mut col: Vec<Effect> = (0..s)
        .map(|i| {
            if i < positives {
                if rng.random_bool(0.2) {
                    Effect::PlusInfinity
                } else {
                    Effect::Finite(rng.random_range(0.01..0.6))
                }
            } else if rng.random_bool(0.3) {
                Effect::Finite(0.0)
            } else {
                Effect::Finite(-rng.random_range(0.0..0.4))
            }
        })
        .collect();
    // shuffle so the positive studies are not always first
    for i in (1..s).rev() {
        col.swap(i, rng.random_range(0..=i));
    }
    col
}

pub fn lfc_configuration(s: usize, gamma: usize) -> Vec<Effect> {
    let mut v = vec![Effect::PlusInfinity; gamma - 1];
    v.resize(s, Effect::Finite(0.0));
    v
}

/// Fig. 1 effect vectors for `s = 10`, `gamma = 6`, `n = 50`.
pub fn mixed_null_column(n: usize) -> Vec<Effect> {
    let mut v = vec![Effect::Finite(-1.5 / (n as f64).sqrt()); 5];
    v.extend(std::iter::repeat_n(Effect::Finite(1.0), 5));
    v
}

pub fn shifted_alternative_column(n: usize) -> Vec<Effect> {
    vec![Effect::Finite(2.0 / (n as f64).sqrt()); 10]
}
