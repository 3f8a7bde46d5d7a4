//! Run configuration: one optional TOML file plus flag overrides, flags
//! winning. The resolved configuration is hashed into every output file
//! so a result can always be traced back to its exact inputs.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cobacs_core::population::{MetaScoreMode, PerformanceDistribution, PopulationSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sweep: SweepSection,
    pub analyze: AnalyzeSection,
    pub predict: PredictSection,
    pub roc: RocSection,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PerfDistConfig {
    Uniform { lo: f64, hi: f64 },
    Fixed { value: f64 },
}

impl PerfDistConfig {
    pub fn to_core(&self) -> PerformanceDistribution {
        match *self {
            PerfDistConfig::Uniform { lo, hi } => PerformanceDistribution::Uniform { lo, hi },
            PerfDistConfig::Fixed { value } => PerformanceDistribution::Fixed(value),
        }
    }

    pub fn describe(&self) -> String {
        self.to_core().describe()
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub n_users: usize,
    pub n_questions: usize,
    pub replicates: usize,
    pub perf_dist: PerfDistConfig,
    pub archetype_mix: [f64; 3],
    pub prior_a1: f64,
    pub c_max: u8,
    pub perf_thresholds: Vec<f64>,
    pub meta_thresholds: Vec<f64>,
    /// "archetype" scores simulated workers by their known archetype;
    /// "estimated" re-scores them from a simulated pre-test.
    pub meta_score: String,
    pub pretest_questions: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            n_users: 100,
            n_questions: 200,
            replicates: 10_000,
            perf_dist: PerfDistConfig::Uniform { lo: 0.01, hi: 0.99 },
            archetype_mix: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            prior_a1: 0.5,
            c_max: 5,
            perf_thresholds: vec![0.0, 0.4, 0.5, 0.6, 0.7],
            meta_thresholds: vec![0.0, 0.5, 0.6, 0.7],
            meta_score: "archetype".into(),
            pretest_questions: 200,
        }
    }
}

impl SweepSection {
    pub fn population_spec(&self, seed: u64) -> Result<PopulationSpec> {
        let meta_score_mode = match self.meta_score.as_str() {
            "archetype" => MetaScoreMode::ArchetypeTrue,
            "estimated" => MetaScoreMode::Estimated {
                pretest_questions: self.pretest_questions,
            },
            other => bail!("meta_score must be \"archetype\" or \"estimated\", got {other:?}"),
        };
        Ok(PopulationSpec {
            n_users: self.n_users,
            n_questions: self.n_questions,
            perf_dist: self.perf_dist.to_core(),
            archetype_mix: self.archetype_mix,
            prior_a1: self.prior_a1,
            c_max: self.c_max,
            seed,
            meta_score_mode,
        })
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzeSection {
    pub input: Option<PathBuf>,
    pub resamples: usize,
    pub sample_fraction: f64,
    pub perf_filters: Vec<f64>,
    pub meta_filters: Vec<f64>,
    /// Tweet trials 1..=score_split are the recruitment score; the rest
    /// are the holdout the systems are compared on.
    pub score_split: u32,
}

impl Default for AnalyzeSection {
    fn default() -> Self {
        Self {
            input: None,
            resamples: 100,
            sample_fraction: 0.6,
            perf_filters: vec![0.4, 0.5, 0.6, 0.7],
            meta_filters: vec![0.5, 0.6, 0.7],
            score_split: 30,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct PredictSection {
    pub perfs: Vec<f64>,
    pub n_users: Vec<usize>,
    /// "low" | "medium" | "high" | "thresholds"
    pub policy: String,
    pub threshold_offsets: Vec<f64>,
    pub c_max: u8,
    pub prior_a1: f64,
    pub n_questions: usize,
    pub replicates: usize,
}

impl Default for PredictSection {
    fn default() -> Self {
        Self {
            perfs: vec![0.55, 0.6, 0.7, 0.85],
            n_users: vec![11, 51, 101],
            policy: "medium".into(),
            threshold_offsets: vec![0.5, 1.0, 1.5, 2.0],
            c_max: 5,
            prior_a1: 0.5,
            n_questions: 200,
            replicates: 200,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RocSection {
    pub input: Option<PathBuf>,
}

/// FNV-1a over the canonical serialization of the effective config.
pub fn config_hash(serialized: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in serialized.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn hash_bytes(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
