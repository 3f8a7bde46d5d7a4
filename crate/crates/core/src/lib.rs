//! Simulation and analysis toolkit for confidence-based crowd answering.
//!
//! Two systems are modeled end to end:
//!
//! - **ReBaCS** — recruit workers by performance, aggregate answers by
//!   majority voting (MV).
//! - **CoBaCS** — recruit by performance *and* metacognitive ability,
//!   aggregate by confidence-weighted majority voting (WMV).
//!
//! The crate provides the signal-detection worker model that generates
//! responses and confidence ratings ([`decision`]), the two aggregators
//! ([`aggregate`]), closed-form expected-error predictors for both systems
//! ([`analytic`]), Type I / Type II ROC scoring including AUROC2
//! ([`roc`]), seeded population filter-sweep experiments ([`population`]),
//! and the bootstrap pipeline for trial-level study data ([`experiment`]).
//!
//! Everything stochastic takes an explicit seed and is bit-reproducible
//! across runs and thread counts.

pub mod aggregate;
pub mod analytic;
pub mod decision;
pub mod error;
pub mod experiment;
pub mod population;
pub mod roc;
pub mod stats;

pub use aggregate::{
    accuracy_against_key, majority_vote, weighted_majority_vote, AggregateResult, OptionLabel,
    ResponseMatrix,
};
pub use analytic::{
    expected_error_cobacs, expected_error_rebacs, mv_moments, wmv_moments, Moments,
    PopulationMoments,
};
pub use decision::{
    performance_to_mu, Archetype, ConfidencePolicy, DecisionRecord, TypeOneParams,
    TypeTwoThresholds, WorkerModel,
};
pub use error::{Error, Result};
pub use experiment::{
    bootstrap_filter_analysis, dk_effect_analysis, ingest_csv, rt_confidence_analysis,
    score_subjects, BootstrapParams, BootstrapReport, ScoreCard, Task, TrialRow,
};
pub use population::{
    apply_filters, generate_population, run_population, sweep, FilterGrid, PerformanceDistribution,
    PopulationSpec, SweepResult,
};
pub use roc::{auroc2_score, type1_roc, type2_roc, RocCurve, TrialRecord};
pub use stats::{
    derive_seed, gauss_upper_tail, gauss_upper_tail_inv, paired_t_test_one_tailed,
    pearson_correlation, sample_without_replacement, seeded_rng, trapezoid_auc, Alternative,
    PairedSamples, TestResult,
};
