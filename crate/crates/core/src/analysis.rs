//! Replicability analysis of a marker-by-study z-score table.
//!
//! One study is designated primary: its one-sided p-values `1 - Phi(z)` drive a
//! Benjamini–Hochberg selection. The selected markers are then tested for
//! replicability on the remaining studies, and the proportion of true nulls among
//! them is estimated from LFC and randomized p-values. The randomized estimate is
//! averaged over independent uniform draws with the data held fixed.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{config, domain, Error, Result};
use crate::fdr::bh_select;
use crate::numerics::std_normal_sf;
use crate::pi0::schweder_spjotvoll;
use crate::replicability::{
    lfc_from_order_statistic, order_statistic, randomize, threshold_c, ReplicabilityConfig,
};
use crate::simulation::{draw_effect_matrix, replicate_rng, EffectMatrix, SimulationSetting};
use crate::summary::mean_and_std;

/// z-scores of markers (rows) in studies (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ZScoreMatrix {
    marker_ids: Vec<String>,
    study_ids: Vec<String>,
    /// Row-major: `z[marker * studies + study]`.
    z: Vec<f64>,
}

fn data(msg: impl Into<String>) -> Error {
    Error::Data(msg.into())
}

impl ZScoreMatrix {
    pub fn new(marker_ids: Vec<String>, study_ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if study_ids.is_empty() {
            return Err(data("no studies"));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = study_ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(data(format!("duplicate study id `{dup}`")));
        }
        if rows.len() != marker_ids.len() {
            return Err(data(format!(
                "{} marker ids for {} rows",
                marker_ids.len(),
                rows.len()
            )));
        }
        let mut z = Vec::with_capacity(rows.len() * study_ids.len());
        for (id, row) in marker_ids.iter().zip(&rows) {
            if row.len() != study_ids.len() {
                return Err(data(format!(
                    "marker `{id}` has {} values, expected {}",
                    row.len(),
                    study_ids.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(data(format!("marker `{id}` has a non-finite z-score")));
            }
            z.extend_from_slice(row);
        }
        Ok(Self {
            marker_ids,
            study_ids,
            z,
        })
    }

    pub fn marker_ids(&self) -> &[String] {
        &self.marker_ids
    }

    pub fn study_ids(&self) -> &[String] {
        &self.study_ids
    }

    pub fn markers(&self) -> usize {
        self.marker_ids.len()
    }

    pub fn studies(&self) -> usize {
        self.study_ids.len()
    }

    pub fn row(&self, marker: usize) -> &[f64] {
        let s = self.studies();
        &self.z[marker * s..(marker + 1) * s]
    }

    pub fn z(&self, study: usize, marker: usize) -> f64 {
        self.z[marker * self.studies() + study]
    }

    pub fn study_index(&self, id: &str) -> Option<usize> {
        self.study_ids.iter().position(|s| s == id)
    }

    /// Reads a table whose header row holds a label for the marker column followed by
    /// the study ids. Lines starting with `#` are skipped.
    pub fn read<R: Read>(reader: R, delimiter: u8) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() < 2 {
            return Err(data("header must name at least one study"));
        }
        let study_ids = header.iter().skip(1).map(str::to_string).collect();
        let mut marker_ids = Vec::new();
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let mut fields = record.iter();
            let id = fields.next().unwrap_or_default().to_string();
            let row = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| data(format!("record {}: bad z-score `{f}`", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            marker_ids.push(id);
            rows.push(row);
        }
        Self::new(marker_ids, study_ids, rows)
    }

    /// Reads a file, taking the delimiter from the first non-comment line: tab if it
    /// contains one, comma otherwise.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut first = String::new();
        let mut lines = BufReader::new(File::open(path)?);
        loop {
            first.clear();
            if lines.read_line(&mut first)? == 0 || !first.starts_with('#') {
                break;
            }
        }
        let delimiter = if first.contains('\t') { b'\t' } else { b',' };
        Self::read(File::open(path)?, delimiter)
    }

    pub fn write<W: Write>(&self, out: W, delimiter: u8, marker_label: &str) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
        w.write_record(std::iter::once(marker_label).chain(self.study_ids.iter().map(String::as_str)))?;
        for (j, id) in self.marker_ids.iter().enumerate() {
            let values = self.row(j).iter().map(f64::to_string);
            w.write_record(std::iter::once(id.clone()).chain(values))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisParams {
    pub primary_study: String,
    pub q: f64,
    pub gamma: usize,
    pub lambda: f64,
    pub rand_repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub primary_study: String,
    pub q: f64,
    pub gamma: usize,
    pub lambda: f64,
    pub total_markers: usize,
    /// Studies used for the replicability stage (all but the primary one).
    pub studies: usize,
    pub selected_count: usize,
    pub pi0_lfc: f64,
    pub pi0_rand_mean: f64,
    pub pi0_rand_std: f64,
    pub rand_repeats: usize,
    pub seed: u64,
}

impl fmt::Display for AnalysisReport {
    /// One `key=value` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "primary_study={}", self.primary_study)?;
        writeln!(f, "q={}", self.q)?;
        writeln!(f, "gamma={}", self.gamma)?;
        writeln!(f, "lambda={}", self.lambda)?;
        writeln!(f, "total_markers={}", self.total_markers)?;
        writeln!(f, "studies={}", self.studies)?;
        writeln!(f, "selected_count={}", self.selected_count)?;
        writeln!(f, "pi0_lfc={}", self.pi0_lfc)?;
        writeln!(f, "pi0_rand_mean={}", self.pi0_rand_mean)?;
        writeln!(f, "pi0_rand_std={}", self.pi0_rand_std)?;
        writeln!(f, "rand_repeats={}", self.rand_repeats)?;
        writeln!(f, "seed={}", self.seed)
    }
}

/// LFC p-values of the selected markers on the non-primary studies, `d = 1/2`.
pub fn replicability_lfc_pvalues(
    matrix: &ZScoreMatrix,
    primary: usize,
    markers: &[usize],
    cfg: &ReplicabilityConfig<f64>,
) -> Result<Vec<f64>> {
    let mut scratch = Vec::with_capacity(cfg.s());
    markers
        .iter()
        .map(|&j| {
            scratch.clear();
            for (i, &z) in matrix.row(j).iter().enumerate() {
                if i != primary {
                    scratch.push(std_normal_sf(z)?);
                }
            }
            let p_gamma = order_statistic(&mut scratch, cfg.gamma());
            Ok(lfc_from_order_statistic(p_gamma, cfg))
        })
        .collect()
}

pub fn analyze(matrix: &ZScoreMatrix, params: &AnalysisParams, workers: usize) -> Result<AnalysisReport> {
    let primary = matrix
        .study_index(&params.primary_study)
        .ok_or_else(|| config(format!("unknown study id `{}`", params.primary_study)))?;
    let studies = matrix.studies() - 1;
    if params.gamma < 2 || params.gamma > studies {
        return Err(config(format!(
            "gamma must lie in [2, {studies}], got {}",
            params.gamma
        )));
    }
    if !(params.q > 0.0 && params.q < 1.0) {
        return Err(config(format!("q must lie in (0, 1), got {}", params.q)));
    }
    if !(0.0..1.0).contains(&params.lambda) {
        return Err(config(format!("lambda must lie in [0, 1), got {}", params.lambda)));
    }
    if params.rand_repeats == 0 {
        return Err(config("rand_repeats must be positive"));
    }
    let cfg = ReplicabilityConfig::with_half(studies, params.gamma)?;

    let primary_p = (0..matrix.markers())
        .map(|j| std_normal_sf(matrix.z(primary, j)))
        .collect::<Result<Vec<_>>>()?;
    let selected = bh_select(&primary_p, params.q)?;
    if selected.is_empty() {
        return Err(domain(format!("no markers selected at q = {}", params.q)));
    }
    let lfc = replicability_lfc_pvalues(matrix, primary, &selected, &cfg)?;
    let pi0_lfc = schweder_spjotvoll(&lfc, params.lambda)?.value;

    let c = threshold_c(&cfg);
    let pool = crate::simulation::engine_pool(workers)?;
    let estimates = pool.install(|| {
        (0..params.rand_repeats)
            .into_par_iter()
            .map(|r| {
                let mut rng = replicate_rng(params.seed, r as u64);
                let rand: Vec<f64> = lfc.iter().map(|&p| randomize(p, c, rng.random())).collect();
                schweder_spjotvoll(&rand, params.lambda).map(|e| e.value)
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let (pi0_rand_mean, pi0_rand_std) = mean_and_std(&estimates).expect("repeats > 0");
    Ok(AnalysisReport {
        primary_study: params.primary_study.clone(),
        q: params.q,
        gamma: params.gamma,
        lambda: params.lambda,
        total_markers: matrix.markers(),
        studies,
        selected_count: selected.len(),
        pi0_lfc,
        pi0_rand_mean,
        pi0_rand_std,
        rand_repeats: params.rand_repeats,
        seed: params.seed,
    })
}

/// A z-score table drawn from a simulation setting (Z model): study `i` on marker
/// `j` has `z = sqrt(n) theta[i, j] + N(0, 1)`. A leading column `primary` holds the
/// constant `primary_z` so that every marker passes selection. Marker ids are
/// `m1, m2, ...` and study ids `primary, s1, s2, ...`.
pub fn synthetic_matrix(
    setting: &SimulationSetting,
    replicate_index: u64,
    primary_z: f64,
) -> Result<(ZScoreMatrix, EffectMatrix)> {
    let mut rng = replicate_rng(setting.seed, replicate_index);
    let effects = draw_effect_matrix(setting, &mut rng)?;
    let sqrt_n = (setting.n as f64).sqrt();
    let rows = (0..setting.m)
        .map(|j| {
            std::iter::once(primary_z)
                .chain(
                    effects
                        .column(j)
                        .iter()
                        .map(|&t| sqrt_n * t + rng.sample::<f64, _>(StandardNormal)),
                )
                .collect()
        })
        .collect();
    let markers = (1..=setting.m).map(|j| format!("m{j}")).collect();
    let studies = std::iter::once("primary".to_string())
        .chain((1..=setting.s).map(|i| format!("s{i}")))
        .collect();
    Ok((ZScoreMatrix::new(markers, studies, rows)?, effects))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<f64>>) -> ZScoreMatrix {
        let s = rows[0].len();
        let markers = (0..rows.len()).map(|j| format!("rs{j}")).collect();
        let studies = (0..s).map(|i| format!("study{}", i + 1)).collect();
        ZScoreMatrix::new(markers, studies, rows).unwrap()
    }

    fn params(gamma: usize) -> AnalysisParams {
        AnalysisParams {
            primary_study: "study1".into(),
            q: 0.2,
            gamma,
            lambda: 0.5,
            rand_repeats: 50,
            seed: 7,
        }
    }

    #[test]
    fn read_write_round_trip() {
        let m = matrix(vec![vec![1.5, -0.25, 3.0], vec![0.1, 1e-17, -7.75]]);
        for delim in [b'\t', b','] {
            let mut buf = Vec::new();
            m.write(&mut buf, delim, "marker").unwrap();
            assert_eq!(ZScoreMatrix::read(buf.as_slice(), delim).unwrap(), m);
        }
        let text = "# comment\nsnp\tA\tB\nrs1\t1.0\t2.0\n";
        let parsed = ZScoreMatrix::read(text.as_bytes(), b'\t').unwrap();
        assert_eq!(parsed.study_ids(), &["A", "B"]);
        assert_eq!(parsed.z(1, 0), 2.0);
    }

    #[test]
    fn rejects_malformed_tables() {
        for text in [
            "snp\tA\tB\nrs1\t1.0\n",
            "snp\tA\tB\nrs1\t1.0\tx\n",
            "snp\tA\tA\nrs1\t1.0\t2.0\n",
            "snp\nrs1\n",
            "snp\tA\nrs1\tNaN\n",
        ] {
            assert!(matches!(ZScoreMatrix::read(text.as_bytes(), b'\t'), Err(Error::Data(_))), "{text}");
        }
    }

    #[test]
    fn extreme_signal_means_no_nulls() {
        let rows = (0..20).map(|_| vec![6.0; 8]).collect();
        let r = analyze(&matrix(rows), &params(2), 1).unwrap();
        assert_eq!(r.selected_count, 20);
        assert_eq!(r.studies, 7);
        assert_eq!(r.pi0_lfc, 0.0);
        assert_eq!(r.pi0_rand_mean, 0.0);
    }

    #[test]
    fn zero_z_scores_give_closed_form() {
        // each non-primary p is 1/2, so p_lfc = 1 - 2^-6 ~ 0.984 > lambda for every marker
        let rows = (0..10).map(|_| {
            let mut r = vec![0.0; 8];
            r[0] = 6.0;
            r
        }).collect::<Vec<_>>();
        let m = matrix(rows);
        let cfg = ReplicabilityConfig::with_half(7, 2).unwrap();
        let lfc = replicability_lfc_pvalues(&m, 0, &[0, 1], &cfg).unwrap();
        assert!((lfc[0] - (1.0 - 0.5f64.powi(6))).abs() < 1e-15);
        let r = analyze(&m, &params(2), 1).unwrap();
        assert_eq!(r.pi0_lfc, 2.0);
        // p_lfc equals c = 1 - 2^-6 exactly, and the tie maps to 1
        assert_eq!(lfc[0], threshold_c(&cfg));
        assert_eq!((r.pi0_rand_mean, r.pi0_rand_std), (2.0, 0.0));
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let setting = SimulationSetting { m: 50, s: 7, gamma: 2, pi0: 0.6, ..Default::default() };
        let (m, _) = synthetic_matrix(&setting, 3, 5.0).unwrap();
        let p = AnalysisParams { primary_study: "primary".into(), ..params(2) };
        let a = analyze(&m, &p, 1).unwrap();
        assert_eq!(a, analyze(&m, &p, 4).unwrap());
        let one = AnalysisParams { rand_repeats: 1, ..p.clone() };
        assert_eq!(analyze(&m, &one, 1).unwrap(), analyze(&m, &one, 1).unwrap());
        assert_eq!(analyze(&m, &one, 1).unwrap().pi0_rand_std, 0.0);
        assert_eq!(a.selected_count, 50);
        let text = a.to_string();
        for key in ["q=", "gamma=", "selected_count=", "pi0_lfc=", "pi0_rand_mean=", "pi0_rand_std=", "rand_repeats="] {
            assert!(text.lines().any(|l| l.starts_with(key)), "{key}");
        }
    }

    #[test]
    fn argument_errors() {
        let m = matrix(vec![vec![3.0; 4]; 3]);
        let bad_study = AnalysisParams { primary_study: "nope".into(), ..params(2) };
        assert!(matches!(analyze(&m, &bad_study, 1), Err(Error::Config(_))));
        assert!(matches!(analyze(&m, &params(4), 1), Err(Error::Config(_))));
        assert!(matches!(analyze(&m, &params(1), 1), Err(Error::Config(_))));
        let none = matrix(vec![vec![-3.0; 4]; 3]);
        assert!(matches!(analyze(&none, &params(2), 1), Err(Error::Domain(_))));
    }
}
