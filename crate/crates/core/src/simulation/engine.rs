use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::combiners::{fisher_pc_pvalue, stouffer_pc_pvalue};
use crate::error::{config, Result};
use crate::marginal::{marginal_lfc_pvalue, marginal_statistic, MarginalModelKind, StudySample};
use crate::pi0::{ecdf, schweder_spjotvoll, Pi0Estimate};
use crate::replicability::{lfc_from_order_statistic, order_statistic, randomize, threshold_c};
use crate::summary::{mean_and_std, KahanSum};

use super::effects::{draw_effect_matrix, EffectMatrix};
use super::{PValueKind, SimulationSetting};

/// Largest `f64` below one; combiners reject exact zeros and ones.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Random stream of one replicate: the master seed on stream `replicate_index`.
pub fn replicate_rng(seed: u64, replicate_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate_index);
    rng
}

/// Output of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub replicate_index: usize,
    pub effects: EffectMatrix,
    /// Kinds in the order requested by the setting.
    pub kinds: Vec<PValueKind>,
    /// `pvalues[k][j]`: p-value of kind `kinds[k]` on endpoint `j`.
    pub pvalues: Vec<Vec<f64>>,
    pub estimates: Vec<Pi0Estimate<f64>>,
}

impl Replication {
    fn position(&self, kind: PValueKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    pub fn pvalues_of(&self, kind: PValueKind) -> Option<&[f64]> {
        self.position(kind).map(|k| self.pvalues[k].as_slice())
    }

    pub fn estimate_of(&self, kind: PValueKind) -> Option<&Pi0Estimate<f64>> {
        self.position(kind).map(|k| &self.estimates[k])
    }
}

fn draw_statistic<R: Rng>(
    rng: &mut R,
    theta: f64,
    model: MarginalModelKind,
    n: usize,
    sqrt_n: f64,
) -> Result<f64> {
    match model {
        // the sample mean of n unit-variance normals is N(theta, 1/n)
        MarginalModelKind::ZKnownUnitVariance => {
            Ok(theta + rng.sample::<f64, _>(StandardNormal) / sqrt_n)
        }
        MarginalModelKind::TUnknownVariance => {
            let obs = (0..n)
                .map(|_| theta + rng.sample::<f64, _>(StandardNormal))
                .collect();
            marginal_statistic(&StudySample::new(obs)?, model)
        }
    }
}

/// Simulates one replicate: a fresh effect matrix, per-study data from the marginal
/// model, and every requested p-value kind with its estimate at `setting.lambda`.
pub fn simulate_replication(
    setting: &SimulationSetting,
    replicate_index: usize,
) -> Result<Replication> {
    setting.validate()?;
    if replicate_index >= setting.reps {
        return Err(config(format!(
            "replicate index {replicate_index} out of range for {} reps",
            setting.reps
        )));
    }
    let mut rng = replicate_rng(setting.seed, replicate_index as u64);
    let effects = draw_effect_matrix(setting, &mut rng)?;

    let cfg = setting.replicability_config()?;
    let c = threshold_c(&cfg);
    let (s, n, model) = (setting.s, setting.n, setting.model);
    let sqrt_n = (n as f64).sqrt();
    // p_(gamma) belongs to the gamma-th largest statistic
    let stat_rank = s - setting.gamma + 1;
    let kinds = setting.pvalue_kinds.clone();
    let combiners_needed = kinds
        .iter()
        .any(|k| matches!(k, PValueKind::Stouffer | PValueKind::Fisher));

    let mut pvalues: Vec<Vec<f64>> = kinds.iter().map(|_| Vec::with_capacity(setting.m)).collect();
    let mut stats = vec![0.0; s];
    let mut scratch = vec![0.0; s];
    let mut per_study = vec![0.0; s];
    for j in 0..setting.m {
        for (stat, &theta) in stats.iter_mut().zip(effects.column(j)) {
            *stat = draw_statistic(&mut rng, theta, model, n, sqrt_n)?;
        }
        let u: f64 = rng.random();

        scratch.copy_from_slice(&stats);
        let p_gamma = marginal_lfc_pvalue(order_statistic(&mut scratch, stat_rank), model, n)?;
        let lfc = lfc_from_order_statistic(p_gamma, &cfg);
        if combiners_needed {
            for (p, &stat) in per_study.iter_mut().zip(&stats) {
                *p = marginal_lfc_pvalue(stat, model, n)?.clamp(f64::MIN_POSITIVE, BELOW_ONE);
            }
        }
        for (k, kind) in kinds.iter().enumerate() {
            let p = match kind {
                PValueKind::Lfc => lfc,
                PValueKind::Rand => randomize(lfc, c, u),
                PValueKind::Stouffer => stouffer_pc_pvalue(&per_study, setting.gamma)?,
                PValueKind::Fisher => fisher_pc_pvalue(&per_study, setting.gamma)?,
            };
            pvalues[k].push(p);
        }
    }
    let estimates = pvalues
        .iter()
        .map(|ps| schweder_spjotvoll(ps, setting.lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(Replication {
        replicate_index,
        effects,
        kinds,
        pvalues,
        estimates,
    })
}

/// Monte Carlo summary of the estimator for one setting and p-value kind.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub setting: SimulationSetting,
    pub kind: PValueKind,
    pub mean: f64,
    pub std: f64,
    /// `std / sqrt(reps)`.
    pub mc_standard_error: f64,
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(config("need at least one worker"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))
}

/// Runs `f` for every replicate of `setting` on `pool`, returning results in
/// replicate order.
fn collect_replicates<T, F>(pool: &rayon::ThreadPool, setting: &SimulationSetting, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Replication) -> T + Sync,
{
    pool.install(|| {
        (0..setting.reps)
            .into_par_iter()
            .map(|r| simulate_replication(setting, r).map(&f))
            .collect()
    })
}

/// One cell per (setting, kind), in grid order and then in the setting's kind order.
/// Output is identical for every worker count.
pub fn run_table(grid: &[SimulationSetting], workers: usize) -> Result<Vec<TableCell>> {
    if grid.is_empty() {
        return Err(config("empty setting grid"));
    }
    for setting in grid {
        setting.validate()?;
    }
    let pool = thread_pool(workers)?;
    let mut cells = Vec::new();
    for setting in grid {
        let rows = collect_replicates(&pool, setting, |rep| {
            rep.estimates.iter().map(|e| e.value).collect::<Vec<f64>>()
        })?;
        for (k, &kind) in setting.pvalue_kinds.iter().enumerate() {
            let column: Vec<f64> = rows.iter().map(|row| row[k]).collect();
            let (mean, std) = mean_and_std(&column).expect("reps > 0");
            cells.push(TableCell {
                setting: setting.clone(),
                kind,
                mean,
                std,
                mc_standard_error: std / (setting.reps as f64).sqrt(),
            });
        }
    }
    Ok(cells)
}

/// One point of an exported curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// Either `t` (ECDF curves) or `lambda` (estimator sweeps).
    pub x: f64,
    pub value: f64,
    pub label: String,
}

/// Mean of `pi0_hat(lambda)` over all replicates, for every kind and every lambda.
pub fn lambda_sweep_curve(
    setting: &SimulationSetting,
    lambdas: &[f64],
    workers: usize,
) -> Result<Vec<CurvePoint>> {
    setting.validate()?;
    if lambdas.is_empty() {
        return Err(config("empty lambda grid"));
    }
    for &l in lambdas {
        schweder_spjotvoll(&[0.5], l)?;
    }
    let pool = thread_pool(workers)?;
    let rows = collect_replicates(&pool, setting, |rep| {
        rep.pvalues
            .iter()
            .map(|ps| {
                lambdas
                    .iter()
                    .map(|&l| schweder_spjotvoll(ps, l).expect("lambda checked").value)
                    .collect::<Vec<f64>>()
            })
            .collect::<Vec<_>>()
    })?;
    let mut points = Vec::new();
    for (k, kind) in setting.pvalue_kinds.iter().enumerate() {
        for (l, &lambda) in lambdas.iter().enumerate() {
            let sum: KahanSum<f64> = rows.iter().map(|row| row[k][l]).collect();
            points.push(CurvePoint {
                x: lambda,
                value: sum.value() / setting.reps as f64,
                label: kind.to_string(),
            });
        }
    }
    Ok(points)
}

/// Empirical CDFs of each kind's p-values in a single replicate, followed by the
/// reference line from `(0, 1 - pi0)` to `(1, 1)`.
pub fn ecdf_curves(
    setting: &SimulationSetting,
    replicate_index: usize,
    grid: &[f64],
) -> Result<Vec<CurvePoint>> {
    let rep = simulate_replication(setting, replicate_index)?;
    let mut points = Vec::new();
    for (kind, ps) in rep.kinds.iter().zip(&rep.pvalues) {
        for &t in grid {
            points.push(CurvePoint {
                x: t,
                value: ecdf(ps, t)?,
                label: kind.to_string(),
            });
        }
    }
    for &t in grid {
        points.push(CurvePoint {
            x: t,
            value: 1.0 - setting.pi0 + setting.pi0 * t,
            label: "reference".into(),
        });
    }
    Ok(points)
}
