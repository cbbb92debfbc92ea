//! Benchmark protocols: identification accuracy against the orientation-blind
//! baseline, nearest-neighbor query counts, and wall-clock timing. All output
//! is CSV with schema `experiment,algorithm,metric,n,m,param,value,seed`.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use opm_core::matchers::{base_gr_unoriented, base_tr_large, base_tr_small};
use opm_core::{MatchResult, Metric, MotionClass, PointSet};

use crate::harness::{plant, random_background};

/// Algorithm labels: `GR` is the orientation-blind rigid baseline, `LD`/`SD`
/// the oriented large-/small-diameter matchers under μ1 (`h1`) or μ2 (`h2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "GR")]
    Gr,
    #[serde(rename = "LD_h1")]
    LdH1,
    #[serde(rename = "LD_h2")]
    LdH2,
    #[serde(rename = "SD_h1")]
    SdH1,
    #[serde(rename = "SD_h2")]
    SdH2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Gr,
        Algorithm::LdH1,
        Algorithm::LdH2,
        Algorithm::SdH1,
        Algorithm::SdH2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Gr => "GR",
            Algorithm::LdH1 => "LD_h1",
            Algorithm::LdH2 => "LD_h2",
            Algorithm::SdH1 => "SD_h1",
            Algorithm::SdH2 => "SD_h2",
        }
    }

    pub fn metric_label(self) -> &'static str {
        match self {
            Algorithm::Gr => "pos",
            Algorithm::LdH1 | Algorithm::SdH1 => "h1",
            Algorithm::LdH2 | Algorithm::SdH2 => "h2",
        }
    }

    /// Run the labeled matcher with an exact index.
    pub fn run(self, pattern: &PointSet, background: &PointSet) -> Result<MatchResult> {
        let r = match self {
            Algorithm::Gr => base_gr_unoriented(pattern, background, 0.0),
            Algorithm::LdH1 => base_tr_large(pattern, background, Metric::L1Oriented, 0.0),
            Algorithm::LdH2 => base_tr_large(pattern, background, Metric::L2Oriented, 0.0),
            Algorithm::SdH1 => base_tr_small(pattern, background, Metric::L1Oriented, 0.0),
            Algorithm::SdH2 => base_tr_small(pattern, background, Metric::L2Oriented, 0.0),
        }?;
        Ok(r)
    }
}

fn default_box_scale() -> f64 {
    10.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub num_backgrounds: usize,
    pub background_size: usize,
    pub pattern_size: usize,
    /// `(delta_pos, delta_ang)` perturbation radii for planted patterns.
    pub perturbation: (f64, f64),
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Side of the square positions are drawn from.
    #[serde(default = "default_box_scale")]
    pub box_scale: f64,
    /// Background sizes for the query-count sweep; defaults to
    /// `[background_size]`.
    #[serde(default)]
    pub n_sweep: Vec<usize>,
    /// Pattern sizes for the timing sweep; defaults to `[pattern_size]`.
    #[serde(default)]
    pub m_sweep: Vec<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_backgrounds == 0 || self.trials == 0 {
            bail!("num_backgrounds and trials must be >= 1");
        }
        if self.pattern_size < 2 {
            bail!("pattern_size must be >= 2 (the rigid matchers need a positive diameter)");
        }
        if self.pattern_size > self.background_size {
            bail!("pattern_size exceeds background_size");
        }
        if self.algorithms.is_empty() {
            bail!("at least one algorithm required");
        }
        if !(self.box_scale.is_finite() && self.box_scale > 0.0) {
            bail!("box_scale must be positive");
        }
        if self.perturbation.0 < 0.0 || self.perturbation.1 < 0.0 {
            bail!("perturbation radii must be >= 0");
        }
        for &n in &self.n_sweep {
            if n < self.pattern_size {
                bail!("n_sweep entry {n} below pattern_size");
            }
        }
        for &m in &self.m_sweep {
            if m < 2 || m > self.background_size {
                bail!("m_sweep entry {m} out of range");
            }
        }
        Ok(())
    }

    fn n_values(&self) -> Vec<usize> {
        if self.n_sweep.is_empty() {
            vec![self.background_size]
        } else {
            self.n_sweep.clone()
        }
    }

    fn m_values(&self) -> Vec<usize> {
        if self.m_sweep.is_empty() {
            vec![self.pattern_size]
        } else {
            self.m_sweep.clone()
        }
    }
}

/// One CSV measurement row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: &'static str,
    pub algorithm: &'static str,
    pub metric: &'static str,
    pub n: usize,
    pub m: usize,
    pub param: &'static str,
    pub value: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "experiment,algorithm,metric,n,m,param,value,seed";

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.experiment, r.algorithm, r.metric, r.n, r.m, r.param, r.value, r.seed
        );
    }
    out
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    rng
}

/// Identification accuracy: plant a perturbed pattern from one of several
/// random backgrounds and count how often each algorithm ranks the origin
/// background strictly best.
pub fn run_accuracy(config: &ExperimentConfig) -> Result<Vec<Row>> {
    config.validate()?;
    let n = config.background_size;
    let m = config.pattern_size;
    let mut successes = vec![0_u64; config.algorithms.len()];
    for trial in 0..config.trials as u64 {
        let mut rng = trial_rng(config.seed, trial);
        let backgrounds: Vec<PointSet> = (0..config.num_backgrounds)
            .map(|_| random_background(n, config.box_scale, &mut rng))
            .collect();
        let origin = rng.random_range(0..config.num_backgrounds);
        let inst = plant(
            &backgrounds[origin],
            m,
            MotionClass::TR,
            Metric::L2Oriented,
            config.perturbation.0,
            config.perturbation.1,
            rng.random(),
        )?;
        for (ai, alg) in config.algorithms.iter().enumerate() {
            let mut best = (f64::INFINITY, usize::MAX);
            for (bi, b) in backgrounds.iter().enumerate() {
                let h = alg.run(&inst.pattern, b)?.hausdorff;
                if (h, bi) < best {
                    best = (h, bi);
                }
            }
            if best.1 == origin {
                successes[ai] += 1;
            }
        }
    }
    Ok(config
        .algorithms
        .iter()
        .zip(&successes)
        .map(|(alg, &s)| Row {
            experiment: "accuracy",
            algorithm: alg.label(),
            metric: alg.metric_label(),
            n,
            m,
            param: "success_rate",
            value: s as f64 / config.trials as f64,
            seed: config.seed,
        })
        .collect())
}

fn planted_for_size(
    config: &ExperimentConfig,
    n: usize,
    m: usize,
    stream: u64,
) -> Result<(PointSet, PointSet)> {
    let mut rng = trial_rng(config.seed, stream);
    let background = random_background(n, config.box_scale, &mut rng);
    let inst = plant(
        &background,
        m,
        MotionClass::TR,
        Metric::L2Oriented,
        config.perturbation.0,
        config.perturbation.1,
        rng.random(),
    )?;
    Ok((inst.pattern, background))
}

/// Nearest-neighbor query totals per algorithm across the `n` sweep. Counts
/// come from index instrumentation and are deterministic (no early exit
/// anywhere in the matchers).
pub fn run_query_counts(config: &ExperimentConfig) -> Result<Vec<Row>> {
    config.validate()?;
    let mut rows = Vec::new();
    for (i, n) in config.n_values().into_iter().enumerate() {
        let (pattern, background) = planted_for_size(config, n, config.pattern_size, i as u64)?;
        for alg in &config.algorithms {
            let r = alg.run(&pattern, &background)?;
            rows.push(Row {
                experiment: "queries",
                algorithm: alg.label(),
                metric: alg.metric_label(),
                n,
                m: config.pattern_size,
                param: "nn_queries",
                value: r.nn_queries as f64,
                seed: config.seed,
            });
        }
    }
    Ok(rows)
}

/// Median-of-`trials` wall time per algorithm across the `m` sweep.
pub fn run_timing(config: &ExperimentConfig) -> Result<Vec<Row>> {
    config.validate()?;
    let runs = config.trials.max(1);
    let mut rows = Vec::new();
    for (i, m) in config.m_values().into_iter().enumerate() {
        let (pattern, background) = planted_for_size(config, config.background_size, m, i as u64)?;
        for alg in &config.algorithms {
            let mut samples: Vec<f64> = (0..runs)
                .map(|_| {
                    let start = Instant::now();
                    let _ = alg.run(&pattern, &background)?;
                    Ok(start.elapsed().as_secs_f64())
                })
                .collect::<Result<_>>()?;
            samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rows.push(Row {
                experiment: "time",
                algorithm: alg.label(),
                metric: alg.metric_label(),
                n: config.background_size,
                m,
                param: "median_s",
                value: samples[samples.len() / 2],
                seed: config.seed,
            });
        }
    }
    Ok(rows)
}
