use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{config, Result};

use super::SimulationSetting;

/// True effects `theta[i, j]` of `s` studies on `m` endpoints, stored column by
/// column, together with the truth of each endpoint's null hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectMatrix {
    s: usize,
    m: usize,
    effects: Vec<f64>,
    truth: Vec<bool>,
}

impl EffectMatrix {
    /// Builds a matrix from column-major effects. Endpoint `j` is a true null when
    /// fewer than `gamma` of its effects are positive.
    pub fn from_columns(s: usize, m: usize, effects: Vec<f64>, gamma: usize) -> Result<Self> {
        if effects.len() != s * m {
            return Err(config(format!(
                "expected {} effects for a {s}x{m} matrix, got {}",
                s * m,
                effects.len()
            )));
        }
        if effects.iter().any(|e| e.is_nan()) {
            return Err(config("effects must not be NaN"));
        }
        let truth = effects
            .chunks(s)
            .map(|col| col.iter().filter(|&&e| e > 0.0).count() < gamma)
            .collect();
        Ok(Self {
            s,
            m,
            effects,
            truth,
        })
    }

    pub fn studies(&self) -> usize {
        self.s
    }

    pub fn endpoints(&self) -> usize {
        self.m
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.effects[j * self.s..(j + 1) * self.s]
    }

    pub fn effect(&self, study: usize, endpoint: usize) -> f64 {
        self.effects[endpoint * self.s + study]
    }

    /// `truth()[j]` is `true` when the null hypothesis of endpoint `j` holds.
    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    pub fn positive_count(&self, j: usize) -> usize {
        self.column(j).iter().filter(|&&e| e > 0.0).count()
    }
}

/// Draws a fresh effect matrix. The first `m0` endpoints are true nulls.
pub fn draw_effect_matrix<R: Rng + ?Sized>(
    setting: &SimulationSetting,
    rng: &mut R,
) -> Result<EffectMatrix> {
    setting.validate()?;
    let (s, gamma) = (setting.s, setting.gamma);
    let null_count = Binomial::new((gamma - 1) as u64, setting.p0)
        .map_err(|e| config(format!("p0: {e}")))?;
    let alt_count = Binomial::new((s - gamma) as u64, setting.p1)
        .map_err(|e| config(format!("p1: {e}")))?;
    let neg_scale = setting.mu_min / (setting.n as f64).sqrt();
    let m0 = setting.m0();

    let mut effects = Vec::with_capacity(s * setting.m);
    let mut positive = vec![false; s];
    for j in 0..setting.m {
        let k = if j < m0 {
            null_count.sample(rng) as usize
        } else {
            gamma + alt_count.sample(rng) as usize
        };
        positive.fill(false);
        for i in index::sample(rng, s, k) {
            positive[i] = true;
        }
        for &pos in &positive {
            let u: f64 = rng.random();
            effects.push(if pos {
                // (0, mu_max]
                setting.mu_max * (1.0 - u)
            } else {
                // (mu_min / sqrt(n), 0]
                neg_scale * u
            });
        }
    }
    EffectMatrix::from_columns(s, setting.m, effects, gamma)
}
