//! Trial-level study analysis: ingest a trials CSV, score subjects,
//! bootstrap the filter comparison between the two systems, and run the
//! self-estimate (Dunning-Kruger) and response-time side analyses.
//!
//! Scoring splits the tweet task: accuracy on the first `split` trials is
//! the recruitment performance score, the remaining trials are held out
//! and crowd errors are computed on them only. Metacognition is scored as
//! AUROC2 on the memory task, which has enough trials for a stable
//! estimate.
//!
//! Input CSV schema (UTF-8, comma separated, header required):
//!
//! ```text
//! subject_id,task,trial_index,response,true_answer,confidence,response_time_ms,self_estimate_pct
//! ```
//!
//! `task` is `memory` or `tweet`; `response`/`true_answer` are `1` or `2`;
//! `confidence` is 1..=5; the last two columns may be empty.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::aggregate::{majority_vote, weighted_majority_vote, OptionLabel, ResponseMatrix};
use crate::decision::{performance_to_mu, Archetype, ConfidencePolicy, TypeTwoThresholds, WorkerModel};
use crate::error::{Error, Result};
use crate::roc::{auroc2_score, TrialRecord};
use crate::stats::{
    self, derive_seed, paired_t_test_one_tailed, pearson_correlation, sample_without_replacement,
    seeded_rng, Alternative, PairedSamples,
};

pub const TRIALS_CSV_HEADER: &str =
    "subject_id,task,trial_index,response,true_answer,confidence,response_time_ms,self_estimate_pct";

/// Confidence scale used by the study tasks.
pub const STUDY_C_MAX: u8 = 5;

/// Which study task a trial belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Memory,
    Tweet,
}

impl Task {
    pub fn parse(s: &str) -> Result<Task> {
        match s {
            "memory" => Ok(Task::Memory),
            "tweet" => Ok(Task::Tweet),
            other => Err(Error::Domain(format!(
                "task must be \"memory\" or \"tweet\", got {other:?}"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Memory => "memory",
            Task::Tweet => "tweet",
        }
    }
}

/// One row of the trials file.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub subject_id: String,
    pub task: Task,
    /// 1-based presentation order within (subject, task).
    pub trial_index: u32,
    pub response: OptionLabel,
    pub true_answer: OptionLabel,
    pub confidence: u8,
    pub response_time_ms: Option<f64>,
    pub self_estimate_pct: Option<f64>,
}

impl TrialRow {
    pub fn is_correct(&self) -> bool {
        self.response == self.true_answer
    }
}

// ---------------------------------------------------------------------------
// CSV ingest / emit
// ---------------------------------------------------------------------------

/// Read and validate a trials CSV from disk.
pub fn ingest_csv(path: &Path) -> Result<Vec<TrialRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_trials_csv(&text)
}

/// Parse the trials CSV schema; every violation names its 1-based line.
pub fn parse_trials_csv(text: &str) -> Result<Vec<TrialRow>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing header row".into(),
    })?;
    if header.trim_end() != TRIALS_CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must be exactly {TRIALS_CSV_HEADER:?}"),
        });
    }

    let mut rows = Vec::new();
    let mut seen: BTreeSet<(String, Task, u32)> = BTreeSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 8 fields, got {}", fields.len()),
            });
        }
        let fail = |message: String| Error::Parse {
            line: line_no,
            message,
        };

        let subject_id = fields[0].trim();
        if subject_id.is_empty() {
            return Err(fail("subject_id must be nonempty".into()));
        }
        let task = Task::parse(fields[1].trim()).map_err(|e| fail(e.to_string()))?;
        let trial_index: u32 = fields[2]
            .trim()
            .parse()
            .map_err(|_| fail(format!("trial_index {:?} is not a count", fields[2])))?;
        if trial_index == 0 {
            return Err(fail("trial_index is 1-based".into()));
        }
        let response = OptionLabel::parse(fields[3].trim()).map_err(|e| fail(e.to_string()))?;
        let true_answer = OptionLabel::parse(fields[4].trim()).map_err(|e| fail(e.to_string()))?;
        let confidence: u8 = fields[5]
            .trim()
            .parse()
            .map_err(|_| fail(format!("confidence {:?} is not an integer", fields[5])))?;
        if !(1..=STUDY_C_MAX).contains(&confidence) {
            return Err(fail(format!(
                "confidence {confidence} outside [1, {STUDY_C_MAX}]"
            )));
        }
        let response_time_ms = parse_optional(fields[6], line_no, "response_time_ms")?;
        if let Some(rt) = response_time_ms {
            if rt < 0.0 {
                return Err(fail(format!("response_time_ms {rt} is negative")));
            }
        }
        let self_estimate_pct = parse_optional(fields[7], line_no, "self_estimate_pct")?;
        if let Some(est) = self_estimate_pct {
            if !(0.0..=100.0).contains(&est) {
                return Err(fail(format!("self_estimate_pct {est} outside [0, 100]")));
            }
        }

        if !seen.insert((subject_id.to_string(), task, trial_index)) {
            return Err(Error::Integrity(format!(
                "duplicate trial ({subject_id}, {}, {trial_index}) at line {line_no}",
                task.as_str()
            )));
        }
        rows.push(TrialRow {
            subject_id: subject_id.to_string(),
            task,
            trial_index,
            response,
            true_answer,
            confidence,
            response_time_ms,
            self_estimate_pct,
        });
    }
    Ok(rows)
}

fn parse_optional(field: &str, line: usize, name: &str) -> Result<Option<f64>> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Parse {
            line,
            message: format!("{name} {field:?} is not a number"),
        })
}

/// Write rows in the trials CSV schema.
pub fn write_trials_csv<W: Write>(out: &mut W, rows: &[TrialRow]) -> std::io::Result<()> {
    writeln!(out, "{TRIALS_CSV_HEADER}")?;
    for r in rows {
        let rt = r
            .response_time_ms
            .map(|v| format!("{v:.1}"))
            .unwrap_or_default();
        let est = r
            .self_estimate_pct
            .map(|v| format!("{v:.1}"))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.subject_id,
            r.task.as_str(),
            r.trial_index,
            r.response,
            r.true_answer,
            r.confidence,
            rt,
            est
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subject scoring
// ---------------------------------------------------------------------------

/// Per-subject recruitment scores and holdout accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCard {
    pub subject_id: String,
    /// Accuracy on tweet trials 1..=split.
    pub perf_score: f64,
    /// Accuracy on the remaining tweet trials.
    pub holdout_accuracy: f64,
    /// Memory-task AUROC2; absent when the memory data cannot score it.
    pub meta_score: Option<f64>,
    pub self_estimate_pct: Option<f64>,
}

/// Scoring output: cards in subject order plus cohort-level diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringOutcome {
    pub cards: Vec<ScoreCard>,
    /// Pearson correlation between the scoring split and the holdout
    /// accuracies across subjects (stability check of the performance
    /// score); absent when undefined.
    pub split_half_correlation: Option<f64>,
    pub notes: Vec<String>,
}

/// Score every subject: tweet accuracy split at `split`, memory AUROC2.
pub fn score_subjects(rows: &[TrialRow], split: u32) -> Result<ScoringOutcome> {
    if split == 0 {
        return Err(Error::Config("split must be at least 1".into()));
    }
    let mut by_subject: BTreeMap<&str, Vec<&TrialRow>> = BTreeMap::new();
    for row in rows {
        by_subject.entry(&row.subject_id).or_default().push(row);
    }

    let mut cards = Vec::with_capacity(by_subject.len());
    let mut notes = Vec::new();
    for (subject, subject_rows) in by_subject {
        let tweet: Vec<&&TrialRow> = subject_rows
            .iter()
            .filter(|r| r.task == Task::Tweet)
            .collect();
        let n_scored = tweet.iter().filter(|r| r.trial_index <= split).count();
        let n_holdout = tweet.len() - n_scored;
        if n_scored < split as usize || n_holdout == 0 {
            return Err(Error::Input(format!(
                "subject {subject} has {n_scored} scoring and {n_holdout} holdout tweet trials; \
                 need {split} and at least 1"
            )));
        }
        let accuracy = |rows: &[&&TrialRow]| {
            rows.iter().filter(|r| r.is_correct()).count() as f64 / rows.len() as f64
        };
        let scored: Vec<&&TrialRow> = tweet
            .iter()
            .filter(|r| r.trial_index <= split)
            .copied()
            .collect();
        let holdout: Vec<&&TrialRow> = tweet
            .iter()
            .filter(|r| r.trial_index > split)
            .copied()
            .collect();

        let memory: Vec<TrialRecord> = subject_rows
            .iter()
            .filter(|r| r.task == Task::Memory)
            .map(|r| TrialRecord::new(r.response, r.true_answer, r.confidence))
            .collect();
        let meta_score = if memory.is_empty() {
            notes.push(format!("subject {subject}: no memory task, meta score absent"));
            None
        } else {
            match auroc2_score(&memory, STUDY_C_MAX) {
                Ok(v) => Some(v),
                Err(e) => {
                    notes.push(format!("subject {subject}: meta score absent ({e})"));
                    None
                }
            }
        };

        let self_estimate_pct = subject_rows.iter().find_map(|r| r.self_estimate_pct);
        cards.push(ScoreCard {
            subject_id: subject.to_string(),
            perf_score: accuracy(&scored),
            holdout_accuracy: accuracy(&holdout),
            meta_score,
            self_estimate_pct,
        });
    }

    let split_half_correlation = if cards.len() >= 2 {
        let a: Vec<f64> = cards.iter().map(|c| c.perf_score).collect();
        let b: Vec<f64> = cards.iter().map(|c| c.holdout_accuracy).collect();
        PairedSamples::new(a, b)
            .and_then(|s| pearson_correlation(&s))
            .ok()
    } else {
        None
    };

    Ok(ScoringOutcome {
        cards,
        split_half_correlation,
        notes,
    })
}

// ---------------------------------------------------------------------------
// Bootstrap filter analysis
// ---------------------------------------------------------------------------

/// Parameters of the bootstrap comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapParams {
    pub n_resamples: usize,
    pub sample_fraction: f64,
    pub perf_filters: Vec<f64>,
    pub meta_filters: Vec<f64>,
    /// Tweet trials with index strictly above this are the holdout set.
    pub holdout_after: u32,
    pub seed: u64,
}

impl Default for BootstrapParams {
    fn default() -> Self {
        Self {
            n_resamples: 100,
            sample_fraction: 0.6,
            perf_filters: vec![0.4, 0.5, 0.6, 0.7],
            meta_filters: vec![0.5, 0.6, 0.7],
            holdout_after: 30,
            seed: 0,
        }
    }
}

impl BootstrapParams {
    fn validate(&self) -> Result<()> {
        if self.n_resamples == 0 {
            return Err(Error::Config("n_resamples must be at least 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "sample_fraction must be in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        for (name, f) in [("perf", &self.perf_filters), ("meta", &self.meta_filters)] {
            if f.is_empty() {
                return Err(Error::Config(format!("{name} filters must be nonempty")));
            }
            if f.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Config(format!(
                    "{name} filters must be sorted ascending"
                )));
            }
        }
        Ok(())
    }
}

/// Result of a significance test that may be degenerate or unavailable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestOutcome {
    PValue(f64),
    /// All paired differences were zero: the systems never disagreed.
    NoEffect,
    /// Too few paired observations to test.
    Unavailable,
}

/// One filter cell of the bootstrap report.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub perf_min: f64,
    pub meta_min: f64,
    /// Resamples where at least one subject survived the filters.
    pub viable_resamples: usize,
    /// Error statistics over viable resamples, in percent.
    pub rebacs_mean_pct: f64,
    pub rebacs_sd_pct: f64,
    pub cobacs_mean_pct: f64,
    pub cobacs_sd_pct: f64,
    /// Mean survivor count over all resamples (zeros included).
    pub mean_survivors: f64,
    /// One-tailed paired test of H1: rebacs error > cobacs error.
    pub test: TestOutcome,
}

impl CellReport {
    pub fn available(&self) -> bool {
        self.viable_resamples > 0
    }
}

/// The full bootstrap comparison (the report behind the error and
/// survivor-count tables).
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapReport {
    pub n_subjects: usize,
    pub n_resamples: usize,
    pub sample_fraction: f64,
    pub perf_filters: Vec<f64>,
    pub meta_filters: Vec<f64>,
    /// Cells in meta-major order: `cells[meta_idx * n_perf + perf_idx]`.
    pub cells: Vec<CellReport>,
    /// Pooled one-tailed test over every (cell, resample) pair.
    pub pooled: TestOutcome,
}

impl BootstrapReport {
    pub fn cell(&self, perf_idx: usize, meta_idx: usize) -> &CellReport {
        &self.cells[meta_idx * self.perf_filters.len() + perf_idx]
    }
}

/// Holdout tweet responses of all subjects, aligned on a shared question
/// set, in scorecard order.
struct HoldoutMatrix {
    answer_key: Vec<OptionLabel>,
    /// Per subject, aligned with the scorecards.
    responses: Vec<Vec<OptionLabel>>,
    confidences: Vec<Vec<u8>>,
}

fn build_holdout_matrix(
    rows: &[TrialRow],
    cards: &[ScoreCard],
    holdout_after: u32,
) -> Result<HoldoutMatrix> {
    let mut question_ids: BTreeSet<u32> = BTreeSet::new();
    let mut key: BTreeMap<u32, OptionLabel> = BTreeMap::new();
    for row in rows {
        if row.task != Task::Tweet || row.trial_index <= holdout_after {
            continue;
        }
        question_ids.insert(row.trial_index);
        if let Some(&existing) = key.get(&row.trial_index) {
            if existing != row.true_answer {
                return Err(Error::Integrity(format!(
                    "tweet trial {} has conflicting true answers across subjects",
                    row.trial_index
                )));
            }
        } else {
            key.insert(row.trial_index, row.true_answer);
        }
    }
    if question_ids.is_empty() {
        return Err(Error::Input(format!(
            "no tweet trials beyond index {holdout_after} to evaluate on"
        )));
    }
    let question_ids: Vec<u32> = question_ids.into_iter().collect();
    let answer_key: Vec<OptionLabel> = question_ids.iter().map(|q| key[q]).collect();

    let mut per_subject: BTreeMap<&str, BTreeMap<u32, (OptionLabel, u8)>> = BTreeMap::new();
    for row in rows {
        if row.task == Task::Tweet && row.trial_index > holdout_after {
            per_subject
                .entry(&row.subject_id)
                .or_default()
                .insert(row.trial_index, (row.response, row.confidence));
        }
    }

    let mut responses = Vec::with_capacity(cards.len());
    let mut confidences = Vec::with_capacity(cards.len());
    for card in cards {
        let answers = per_subject.get(card.subject_id.as_str()).ok_or_else(|| {
            Error::Input(format!(
                "subject {} has no holdout tweet trials",
                card.subject_id
            ))
        })?;
        let mut r = Vec::with_capacity(question_ids.len());
        let mut c = Vec::with_capacity(question_ids.len());
        for q in &question_ids {
            let &(resp, conf) = answers.get(q).ok_or_else(|| {
                Error::Input(format!(
                    "subject {} is missing tweet trial {q}",
                    card.subject_id
                ))
            })?;
            r.push(resp);
            c.push(conf);
        }
        responses.push(r);
        confidences.push(c);
    }
    Ok(HoldoutMatrix {
        answer_key,
        responses,
        confidences,
    })
}

/// Resample subjects, filter, and compare both systems on the holdout
/// trials of the survivors. Deterministic in the seed.
pub fn bootstrap_filter_analysis(
    rows: &[TrialRow],
    cards: &[ScoreCard],
    params: &BootstrapParams,
) -> Result<BootstrapReport> {
    params.validate()?;
    if cards.is_empty() {
        return Err(Error::Input("no scored subjects".into()));
    }
    let holdout = build_holdout_matrix(rows, cards, params.holdout_after)?;

    let n = cards.len();
    let k = ((params.sample_fraction * n as f64).floor() as usize).clamp(1, n);
    let perf: Vec<f64> = cards.iter().map(|c| c.perf_score).collect();
    // Subjects without a meta score never pass a meta filter.
    let meta: Vec<f64> = cards
        .iter()
        .map(|c| c.meta_score.unwrap_or(f64::NAN))
        .collect();

    let n_cells = params.perf_filters.len() * params.meta_filters.len();
    // Per resample, per cell: errors if viable, and survivor count.
    type ResampleCells = Vec<(Option<(f64, f64)>, usize)>;
    let resamples: Vec<Result<ResampleCells>> = (0..params.n_resamples as u64)
        .into_par_iter()
        .map(|resample| {
            let sample =
                sample_without_replacement(n, k, derive_seed(params.seed, &[resample]))?;
            let mut out = Vec::with_capacity(n_cells);
            for &meta_min in &params.meta_filters {
                for &perf_min in &params.perf_filters {
                    let survivors: Vec<usize> = sample
                        .iter()
                        .copied()
                        .filter(|&i| perf[i] >= perf_min && meta[i] >= meta_min)
                        .collect();
                    if survivors.is_empty() {
                        out.push((None, 0));
                        continue;
                    }
                    let n_questions = holdout.answer_key.len();
                    let mut responses = Vec::with_capacity(survivors.len() * n_questions);
                    let mut confidences = Vec::with_capacity(survivors.len() * n_questions);
                    for &s in &survivors {
                        responses.extend_from_slice(&holdout.responses[s]);
                        confidences.extend_from_slice(&holdout.confidences[s]);
                    }
                    let matrix = ResponseMatrix::new(
                        survivors.len(),
                        n_questions,
                        responses,
                        Some(confidences),
                        holdout.answer_key.clone(),
                        STUDY_C_MAX,
                    )?;
                    let mv = majority_vote(&matrix)?;
                    let wmv = weighted_majority_vote(&matrix)?;
                    out.push((Some((mv.error, wmv.error)), survivors.len()));
                }
            }
            Ok(out)
        })
        .collect();

    // Deterministic reduction in resample order.
    let mut per_cell_pairs: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n_cells];
    let mut per_cell_survivors: Vec<f64> = vec![0.0; n_cells];
    for resample in resamples {
        for (idx, (errors, survivors)) in resample?.into_iter().enumerate() {
            per_cell_survivors[idx] += survivors as f64;
            if let Some(pair) = errors {
                per_cell_pairs[idx].push(pair);
            }
        }
    }

    let mut cells = Vec::with_capacity(n_cells);
    let mut pooled_re = Vec::new();
    let mut pooled_co = Vec::new();
    let mut idx = 0;
    for &meta_min in &params.meta_filters {
        for &perf_min in &params.perf_filters {
            let pairs = &per_cell_pairs[idx];
            pooled_re.extend(pairs.iter().map(|p| p.0));
            pooled_co.extend(pairs.iter().map(|p| p.1));
            cells.push(summarize_cell(
                perf_min,
                meta_min,
                pairs,
                per_cell_survivors[idx] / params.n_resamples as f64,
            ));
            idx += 1;
        }
    }

    let pooled = one_tailed_greater(&pooled_re, &pooled_co);
    Ok(BootstrapReport {
        n_subjects: n,
        n_resamples: params.n_resamples,
        sample_fraction: params.sample_fraction,
        perf_filters: params.perf_filters.clone(),
        meta_filters: params.meta_filters.clone(),
        cells,
        pooled,
    })
}

fn summarize_cell(
    perf_min: f64,
    meta_min: f64,
    pairs: &[(f64, f64)],
    mean_survivors: f64,
) -> CellReport {
    let v = pairs.len() as f64;
    let (mut re_mean, mut re_sd, mut co_mean, mut co_sd) = (f64::NAN, 0.0, f64::NAN, 0.0);
    if !pairs.is_empty() {
        re_mean = pairs.iter().map(|p| p.0).sum::<f64>() / v;
        co_mean = pairs.iter().map(|p| p.1).sum::<f64>() / v;
        if pairs.len() > 1 {
            re_sd = (pairs.iter().map(|p| (p.0 - re_mean).powi(2)).sum::<f64>() / (v - 1.0))
                .sqrt();
            co_sd = (pairs.iter().map(|p| (p.1 - co_mean).powi(2)).sum::<f64>() / (v - 1.0))
                .sqrt();
        }
    }
    let re: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let co: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    CellReport {
        perf_min,
        meta_min,
        viable_resamples: pairs.len(),
        rebacs_mean_pct: re_mean * 100.0,
        rebacs_sd_pct: re_sd * 100.0,
        cobacs_mean_pct: co_mean * 100.0,
        cobacs_sd_pct: co_sd * 100.0,
        mean_survivors,
        test: one_tailed_greater(&re, &co),
    }
}

/// Paired one-tailed test of H1: `mean(a) > mean(b)`, degenerating
/// gracefully on identical vectors.
fn one_tailed_greater(a: &[f64], b: &[f64]) -> TestOutcome {
    if a.len() < 2 {
        return TestOutcome::Unavailable;
    }
    match PairedSamples::new(a.to_vec(), b.to_vec())
        .and_then(|s| paired_t_test_one_tailed(&s, Alternative::Greater))
    {
        Ok(r) => TestOutcome::PValue(r.p_value),
        Err(Error::DegenerateTest(_)) => TestOutcome::NoEffect,
        Err(_) => TestOutcome::Unavailable,
    }
}

// ---------------------------------------------------------------------------
// Self-estimate (Dunning-Kruger) analysis
// ---------------------------------------------------------------------------

/// One self-estimate band: subjects estimating within `[lo, hi)` percent.
#[derive(Debug, Clone, PartialEq)]
pub struct DkBand {
    pub lo: f64,
    pub hi: f64,
    pub mean_actual_accuracy: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DkReport {
    pub bands: Vec<DkBand>,
    /// Correlation between self estimate and holdout accuracy (absent if
    /// undefined).
    pub correlation: Option<f64>,
}

/// Band self estimates against realized holdout accuracy, 10-point bands.
pub fn dk_effect_analysis(cards: &[ScoreCard]) -> DkReport {
    let with_estimates: Vec<(&ScoreCard, f64)> = cards
        .iter()
        .filter_map(|c| c.self_estimate_pct.map(|e| (c, e)))
        .collect();

    let mut bands = Vec::new();
    for band in 0..10 {
        let lo = 10.0 * band as f64;
        let hi = lo + 10.0;
        let members: Vec<&(&ScoreCard, f64)> = with_estimates
            .iter()
            .filter(|(_, e)| *e >= lo && (*e < hi || (band == 9 && *e <= hi)))
            .collect();
        if members.is_empty() {
            continue;
        }
        let mean = members
            .iter()
            .map(|(c, _)| c.holdout_accuracy)
            .sum::<f64>()
            / members.len() as f64;
        bands.push(DkBand {
            lo,
            hi,
            mean_actual_accuracy: mean,
            count: members.len(),
        });
    }

    let correlation = if with_estimates.len() >= 2 {
        let est: Vec<f64> = with_estimates.iter().map(|(_, e)| *e).collect();
        let acc: Vec<f64> = with_estimates
            .iter()
            .map(|(c, _)| c.holdout_accuracy)
            .collect();
        PairedSamples::new(est, acc)
            .and_then(|s| pearson_correlation(&s))
            .ok()
    } else {
        None
    };
    DkReport { bands, correlation }
}

// ---------------------------------------------------------------------------
// Response-time / confidence analysis
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct RtSubject {
    pub subject_id: String,
    pub correlation: f64,
    /// Two-sided p-value of the correlation.
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtTaskSummary {
    pub task: Task,
    pub per_subject: Vec<RtSubject>,
    pub n_negative: usize,
    /// Subjects with a significant (p < 0.05) negative correlation.
    pub n_significant_negative: usize,
    /// Subjects skipped for constant confidence or missing times.
    pub n_excluded: usize,
}

/// Per-subject correlation between response time and confidence, one
/// summary per task present in the rows.
pub fn rt_confidence_analysis(rows: &[TrialRow]) -> Vec<RtTaskSummary> {
    let mut summaries = Vec::new();
    for task in [Task::Memory, Task::Tweet] {
        let mut by_subject: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
        let mut subjects_seen: BTreeSet<&str> = BTreeSet::new();
        for row in rows.iter().filter(|r| r.task == task) {
            subjects_seen.insert(&row.subject_id);
            if let Some(rt) = row.response_time_ms {
                by_subject
                    .entry(&row.subject_id)
                    .or_default()
                    .push((rt, f64::from(row.confidence)));
            }
        }
        if subjects_seen.is_empty() {
            continue;
        }

        let mut per_subject = Vec::new();
        let mut n_excluded = 0;
        for (subject, pairs) in &by_subject {
            if pairs.len() < 3 {
                n_excluded += 1;
                continue;
            }
            let rt: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let conf: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let r = match PairedSamples::new(rt, conf).and_then(|s| pearson_correlation(&s)) {
                Ok(r) => r,
                Err(_) => {
                    n_excluded += 1;
                    continue;
                }
            };
            let n = pairs.len() as f64;
            let p_value = if (r.abs() - 1.0).abs() < 1e-12 {
                0.0
            } else {
                let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
                2.0 * stats::student_t_upper_tail(t.abs(), n - 2.0).unwrap_or(0.5)
            };
            per_subject.push(RtSubject {
                subject_id: subject.to_string(),
                correlation: r,
                p_value,
            });
        }
        n_excluded += subjects_seen.len() - by_subject.len();

        let n_negative = per_subject.iter().filter(|s| s.correlation < 0.0).count();
        let n_significant_negative = per_subject
            .iter()
            .filter(|s| s.correlation < 0.0 && s.p_value < 0.05)
            .count();
        summaries.push(RtTaskSummary {
            task,
            per_subject,
            n_negative,
            n_significant_negative,
            n_excluded,
        });
    }
    summaries
}

// ---------------------------------------------------------------------------
// Synthetic cohort
// ---------------------------------------------------------------------------

/// Shape of a generated cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortConfig {
    pub n_subjects: usize,
    pub n_tweet_questions: u32,
    pub n_memory_questions: u32,
    /// Fraction of subjects whose confidence tracks their decision
    /// evidence (threshold policy, informative confidence).
    pub informative_fraction: f64,
    /// Fraction reporting constant medium confidence; the remainder are
    /// inverted (confident when wrong).
    pub medium_fraction: f64,
    pub seed: u64,
}

impl Default for CohortConfig {
    fn default() -> Self {
        Self {
            n_subjects: 86,
            n_tweet_questions: 100,
            n_memory_questions: 60,
            informative_fraction: 0.8,
            medium_fraction: 0.1,
            seed: 1186,
        }
    }
}

/// Generate a full synthetic cohort in the trials CSV schema.
///
/// Subjects are simulated workers: tweet skill is spread over a band wide
/// enough for the performance filters to bite, most subjects report
/// informative confidence (so the weighted system has an edge), response
/// times fall with confidence for three quarters of subjects, and self
/// estimates are compressed toward the middle so low performers
/// overestimate and high performers underestimate.
pub fn synthetic_cohort(config: &CohortConfig) -> Result<Vec<TrialRow>> {
    if config.n_subjects == 0 {
        return Err(Error::Config("n_subjects must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&config.informative_fraction)
        || !(0.0..=1.0).contains(&config.medium_fraction)
        || config.informative_fraction + config.medium_fraction > 1.0
    {
        return Err(Error::Config(
            "informative and medium fractions must be probabilities summing to at most 1".into(),
        ));
    }
    let mut rng = seeded_rng(config.seed);

    let tweet_key: Vec<OptionLabel> = (0..config.n_tweet_questions)
        .map(|_| {
            if rng.random::<f64>() < 0.5 {
                OptionLabel::One
            } else {
                OptionLabel::Two
            }
        })
        .collect();
    let memory_key: Vec<OptionLabel> = (0..config.n_memory_questions)
        .map(|_| {
            if rng.random::<f64>() < 0.5 {
                OptionLabel::One
            } else {
                OptionLabel::Two
            }
        })
        .collect();

    let n_informative = (config.informative_fraction * config.n_subjects as f64).round() as usize;
    let n_medium = (config.medium_fraction * config.n_subjects as f64).round() as usize;

    let mut rows = Vec::new();
    for idx in 0..config.n_subjects {
        let subject_id = format!("S{:03}", idx + 1);
        let tweet_perf = 0.45 + 0.35 * rng.random::<f64>();
        let memory_perf = 0.55 + 0.20 * rng.random::<f64>();

        let policy = if idx < n_informative {
            // Band spacing varies per subject, spreading AUROC2.
            let scale = 0.5 + 1.2 * rng.random::<f64>();
            ConfidencePolicy::Thresholds(TypeTwoThresholds::symmetric(
                0.0,
                &[0.35 * scale, 0.8 * scale, 1.35 * scale, 2.0 * scale],
            )?)
        } else if idx < n_informative + n_medium {
            ConfidencePolicy::archetype(Archetype::Medium, STUDY_C_MAX)?
        } else {
            ConfidencePolicy::archetype(Archetype::Low, STUDY_C_MAX)?
        };

        let tweet_worker = WorkerModel::new(idx, performance_to_mu(tweet_perf)?, policy.clone());
        let memory_worker = WorkerModel::new(idx, performance_to_mu(memory_perf)?, policy);

        // Three quarters of subjects slow down when unsure.
        let rt_negative = idx % 4 != 3;
        let rt_for = |confidence: u8, rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
            let c = f64::from(confidence);
            let noise: f64 = rng.random::<f64>();
            let ms = if rt_negative {
                700.0 + 260.0 * (f64::from(STUDY_C_MAX) - c) + 420.0 * noise
            } else {
                850.0 + 40.0 * c + 900.0 * noise
            };
            (ms * 10.0).round() / 10.0
        };

        // Noisy, regression-to-the-mean self estimate: low guessers tend
        // to out-perform their guess and high guessers to fall short.
        let self_estimate = (62.5
            + 50.0 * (tweet_perf - 0.625)
            + 24.0 * (rng.random::<f64>() - 0.5))
            .clamp(1.0, 99.0);
        let self_estimate = (self_estimate * 10.0).round() / 10.0;

        for (q, &truth) in tweet_key.iter().enumerate() {
            let d = tweet_worker.simulate_decision_with(truth, &mut rng);
            let rt = rt_for(d.confidence, &mut rng);
            rows.push(TrialRow {
                subject_id: subject_id.clone(),
                task: Task::Tweet,
                trial_index: q as u32 + 1,
                response: d.response,
                true_answer: truth,
                confidence: d.confidence,
                response_time_ms: Some(rt),
                self_estimate_pct: Some(self_estimate),
            });
        }
        for (q, &truth) in memory_key.iter().enumerate() {
            let d = memory_worker.simulate_decision_with(truth, &mut rng);
            let rt = rt_for(d.confidence, &mut rng);
            rows.push(TrialRow {
                subject_id: subject_id.clone(),
                task: Task::Memory,
                trial_index: q as u32 + 1,
                response: d.response,
                true_answer: truth,
                confidence: d.confidence,
                response_time_ms: Some(rt),
                self_estimate_pct: None,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_csv() -> String {
        let mut s = String::from(TRIALS_CSV_HEADER);
        s.push('\n');
        s.push_str("S1,memory,1,1,1,3,512.0,\n");
        s.push_str("S1,memory,2,2,1,1,634.5,\n");
        s.push_str("S1,tweet,1,2,2,4,,55.0\n");
        s.push_str("S2,tweet,1,1,2,2,700.0,40.0\n");
        s.push_str("S2,tweet,2,2,2,5,650.1,40.0\n");
        s.push_str("S2,memory,1,1,2,3,,\n");
        s
    }

    #[test]
    fn parse_counts_rows() {
        let rows = parse_trials_csv(&tiny_csv()).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].subject_id, "S1");
        assert_eq!(rows[2].self_estimate_pct, Some(55.0));
        assert_eq!(rows[3].response_time_ms, Some(700.0));
    }

    #[test]
    fn parse_empty_data_section() {
        let rows = parse_trials_csv(&format!("{TRIALS_CSV_HEADER}\n")).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn parse_rejects_bad_confidence_with_line_number() {
        let text = format!("{TRIALS_CSV_HEADER}\nS1,tweet,1,1,1,6,,\n");
        match parse_trials_csv(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains('6') && message.contains('5'), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicates() {
        let text = format!("{TRIALS_CSV_HEADER}\nS1,tweet,1,1,1,3,,\nS1,tweet,1,2,1,3,,\n");
        assert!(matches!(
            parse_trials_csv(&text),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn parse_rejects_wrong_header_and_field_count() {
        assert!(matches!(
            parse_trials_csv("a,b,c\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = format!("{TRIALS_CSV_HEADER}\nS1,tweet,1,1,1,3,\n");
        assert!(matches!(
            parse_trials_csv(&text),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parse_rejects_out_of_range_optionals() {
        let negative_rt = format!("{TRIALS_CSV_HEADER}\nS1,tweet,1,1,1,3,-5.0,\n");
        assert!(matches!(
            parse_trials_csv(&negative_rt),
            Err(Error::Parse { line: 2, .. })
        ));
        let estimate_overflow = format!("{TRIALS_CSV_HEADER}\nS1,tweet,1,1,1,3,,105.0\n");
        assert!(matches!(
            parse_trials_csv(&estimate_overflow),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad_index = format!("{TRIALS_CSV_HEADER}\nS1,tweet,0,1,1,3,,\n");
        assert!(matches!(
            parse_trials_csv(&bad_index),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn conflicting_answer_keys_are_an_integrity_error() {
        let mut rows = cohort_rows(4, 33);
        // Flip one subject's recorded truth for a holdout question.
        let row = rows
            .iter_mut()
            .find(|r| r.subject_id == "S002" && r.task == Task::Tweet && r.trial_index == 50)
            .unwrap();
        row.true_answer = row.true_answer.other();
        let outcome = score_subjects(&rows, 30).unwrap();
        let result =
            bootstrap_filter_analysis(&rows, &outcome.cards, &BootstrapParams::default());
        assert!(matches!(result, Err(Error::Integrity(_))), "{result:?}");
    }

    #[test]
    fn csv_round_trips() {
        let config = CohortConfig {
            n_subjects: 4,
            n_tweet_questions: 35,
            n_memory_questions: 10,
            ..CohortConfig::default()
        };
        let rows = synthetic_cohort(&config).unwrap();
        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &rows).unwrap();
        let parsed = parse_trials_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed, rows);
    }

    fn cohort_rows(n_subjects: usize, seed: u64) -> Vec<TrialRow> {
        synthetic_cohort(&CohortConfig {
            n_subjects,
            seed,
            ..CohortConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn scoring_perfect_subject() {
        let mut rows = Vec::new();
        for q in 1..=40u32 {
            rows.push(TrialRow {
                subject_id: "S1".into(),
                task: Task::Tweet,
                trial_index: q,
                response: OptionLabel::One,
                true_answer: OptionLabel::One,
                confidence: 3,
                response_time_ms: None,
                self_estimate_pct: None,
            });
        }
        for q in 1..=10u32 {
            rows.push(TrialRow {
                subject_id: "S1".into(),
                task: Task::Memory,
                trial_index: q,
                response: if q % 2 == 0 {
                    OptionLabel::One
                } else {
                    OptionLabel::Two
                },
                true_answer: OptionLabel::One,
                confidence: if q % 2 == 0 { 4 } else { 2 },
                response_time_ms: None,
                self_estimate_pct: None,
            });
        }
        let outcome = score_subjects(&rows, 30).unwrap();
        assert_eq!(outcome.cards.len(), 1);
        assert_eq!(outcome.cards[0].perf_score, 1.0);
        assert_eq!(outcome.cards[0].holdout_accuracy, 1.0);
        assert!(outcome.cards[0].meta_score.is_some());
    }

    #[test]
    fn scoring_requires_enough_tweet_trials() {
        let rows = vec![TrialRow {
            subject_id: "S1".into(),
            task: Task::Tweet,
            trial_index: 1,
            response: OptionLabel::One,
            true_answer: OptionLabel::One,
            confidence: 3,
            response_time_ms: None,
            self_estimate_pct: None,
        }];
        assert!(matches!(score_subjects(&rows, 30), Err(Error::Input(_))));
    }

    #[test]
    fn scoring_recovers_known_skill_within_binomial_noise() {
        let rows = cohort_rows(30, 7);
        let outcome = score_subjects(&rows, 30).unwrap();
        assert_eq!(outcome.cards.len(), 30);
        // Every generated skill is in (0.42, 0.78); a 30-trial estimate
        // stays within a wide binomial band of it.
        for card in &outcome.cards {
            assert!(card.perf_score > 0.42 - 0.3 && card.perf_score < 0.78 + 0.22);
        }
    }

    #[test]
    fn scoring_missing_memory_task_leaves_meta_absent() {
        let mut rows = cohort_rows(3, 9);
        rows.retain(|r| !(r.subject_id == "S002" && r.task == Task::Memory));
        let outcome = score_subjects(&rows, 30).unwrap();
        let card = outcome
            .cards
            .iter()
            .find(|c| c.subject_id == "S002")
            .unwrap();
        assert!(card.meta_score.is_none());
        assert!(outcome.notes.iter().any(|n| n.contains("S002")));
    }

    #[test]
    fn split_half_correlation_is_positive_for_stable_skill() {
        let rows = cohort_rows(86, 13);
        let outcome = score_subjects(&rows, 30).unwrap();
        let r = outcome.split_half_correlation.unwrap();
        assert!(r > 0.0, "split-half correlation {r}");
        let n = outcome.cards.len() as f64;
        let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
        let p = stats::student_t_upper_tail(t, n - 2.0).unwrap();
        assert!(p < 0.05, "one-sided p {p}");
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let rows = cohort_rows(20, 3);
        let outcome = score_subjects(&rows, 30).unwrap();
        let params = BootstrapParams {
            n_resamples: 12,
            seed: 99,
            ..BootstrapParams::default()
        };
        let a = bootstrap_filter_analysis(&rows, &outcome.cards, &params).unwrap();
        let b = bootstrap_filter_analysis(&rows, &outcome.cards, &params).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 12);
    }

    #[test]
    fn bootstrap_full_sample_matches_direct_computation() {
        let rows = cohort_rows(15, 21);
        let outcome = score_subjects(&rows, 30).unwrap();
        let params = BootstrapParams {
            n_resamples: 1,
            sample_fraction: 1.0,
            perf_filters: vec![0.0],
            meta_filters: vec![0.0],
            seed: 4,
            ..BootstrapParams::default()
        };
        let report = bootstrap_filter_analysis(&rows, &outcome.cards, &params).unwrap();
        let cell = report.cell(0, 0);
        assert_eq!(cell.viable_resamples, 1);
        assert_eq!(cell.mean_survivors, 15.0);

        // Direct computation over all subjects and holdout questions.
        let holdout = build_holdout_matrix(&rows, &outcome.cards, 30).unwrap();
        let nq = holdout.answer_key.len();
        let responses: Vec<OptionLabel> = holdout.responses.concat();
        let confidences: Vec<u8> = holdout.confidences.concat();
        let matrix = ResponseMatrix::new(
            15,
            nq,
            responses,
            Some(confidences),
            holdout.answer_key.clone(),
            STUDY_C_MAX,
        )
        .unwrap();
        let mv = majority_vote(&matrix).unwrap();
        let wmv = weighted_majority_vote(&matrix).unwrap();
        assert_eq!(cell.rebacs_mean_pct, mv.error * 100.0);
        assert_eq!(cell.cobacs_mean_pct, wmv.error * 100.0);
    }

    #[test]
    fn bootstrap_all_medium_cohort_reports_no_effect() {
        let rows = synthetic_cohort(&CohortConfig {
            n_subjects: 15,
            informative_fraction: 0.0,
            medium_fraction: 1.0,
            seed: 8,
            ..CohortConfig::default()
        })
        .unwrap();
        let outcome = score_subjects(&rows, 30).unwrap();
        let params = BootstrapParams {
            n_resamples: 20,
            perf_filters: vec![0.0],
            meta_filters: vec![0.0],
            seed: 5,
            ..BootstrapParams::default()
        };
        let report = bootstrap_filter_analysis(&rows, &outcome.cards, &params).unwrap();
        let cell = report.cell(0, 0);
        assert_eq!(cell.rebacs_mean_pct, cell.cobacs_mean_pct);
        assert_eq!(cell.test, TestOutcome::NoEffect);
        assert_eq!(report.pooled, TestOutcome::NoEffect);
    }

    #[test]
    fn bootstrap_empty_everywhere_cell_is_unavailable() {
        let rows = cohort_rows(10, 2);
        let outcome = score_subjects(&rows, 30).unwrap();
        let params = BootstrapParams {
            n_resamples: 5,
            perf_filters: vec![0.0, 1.01],
            meta_filters: vec![0.0],
            seed: 1,
            ..BootstrapParams::default()
        };
        let report = bootstrap_filter_analysis(&rows, &outcome.cards, &params).unwrap();
        assert!(report.cell(0, 0).available());
        assert!(!report.cell(1, 0).available());
        assert_eq!(report.cell(1, 0).test, TestOutcome::Unavailable);
    }

    #[test]
    fn dk_calibrated_cohort_bands_match_centers() {
        let cards: Vec<ScoreCard> = (0..50)
            .map(|i| {
                let acc = 0.2 + 0.6 * (i as f64 / 49.0);
                ScoreCard {
                    subject_id: format!("S{i:03}"),
                    perf_score: acc,
                    holdout_accuracy: acc,
                    meta_score: Some(0.6),
                    self_estimate_pct: Some(acc * 100.0),
                }
            })
            .collect();
        let report = dk_effect_analysis(&cards);
        assert!(!report.bands.is_empty());
        for band in &report.bands {
            let center = (band.lo + band.hi) / 2.0 / 100.0;
            assert!(
                (band.mean_actual_accuracy - center).abs() <= 0.05 + 1e-12,
                "band [{}, {}): mean {} vs center {center}",
                band.lo,
                band.hi,
                band.mean_actual_accuracy
            );
        }
        assert!(report.correlation.unwrap() > 0.99);
    }

    #[test]
    fn dk_inverted_cohort_has_negative_correlation() {
        let cards: Vec<ScoreCard> = (0..30)
            .map(|i| {
                let acc = 0.3 + 0.4 * (i as f64 / 29.0);
                ScoreCard {
                    subject_id: format!("S{i:03}"),
                    perf_score: acc,
                    holdout_accuracy: acc,
                    meta_score: Some(0.6),
                    self_estimate_pct: Some(100.0 - acc * 100.0),
                }
            })
            .collect();
        let report = dk_effect_analysis(&cards);
        assert!(report.correlation.unwrap() < 0.0);
    }

    #[test]
    fn dk_single_subject_single_band() {
        let cards = vec![ScoreCard {
            subject_id: "S1".into(),
            perf_score: 0.6,
            holdout_accuracy: 0.55,
            meta_score: Some(0.7),
            self_estimate_pct: Some(62.0),
        }];
        let report = dk_effect_analysis(&cards);
        assert_eq!(report.bands.len(), 1);
        assert_eq!(report.bands[0].count, 1);
        assert_eq!(report.bands[0].lo, 60.0);
        assert!(report.correlation.is_none());
    }

    #[test]
    fn dk_no_estimates_is_empty() {
        let cards = vec![ScoreCard {
            subject_id: "S1".into(),
            perf_score: 0.6,
            holdout_accuracy: 0.55,
            meta_score: None,
            self_estimate_pct: None,
        }];
        let report = dk_effect_analysis(&cards);
        assert!(report.bands.is_empty());
        assert!(report.correlation.is_none());
    }

    #[test]
    fn rt_strictly_decreasing_confidence_is_perfectly_negative() {
        let rows: Vec<TrialRow> = (1..=5u32)
            .map(|q| TrialRow {
                subject_id: "S1".into(),
                task: Task::Tweet,
                trial_index: q,
                response: OptionLabel::One,
                true_answer: OptionLabel::One,
                confidence: q as u8,
                response_time_ms: Some(1000.0 - 100.0 * q as f64),
                self_estimate_pct: None,
            })
            .collect();
        let summaries = rt_confidence_analysis(&rows);
        assert_eq!(summaries.len(), 1);
        let s = &summaries[0].per_subject[0];
        assert!((s.correlation + 1.0).abs() < 1e-12);
        assert_eq!(s.p_value, 0.0);
        assert_eq!(summaries[0].n_significant_negative, 1);
    }

    #[test]
    fn rt_constant_confidence_is_excluded() {
        let rows: Vec<TrialRow> = (1..=5u32)
            .map(|q| TrialRow {
                subject_id: "S1".into(),
                task: Task::Memory,
                trial_index: q,
                response: OptionLabel::One,
                true_answer: OptionLabel::One,
                confidence: 3,
                response_time_ms: Some(500.0 + q as f64),
                self_estimate_pct: None,
            })
            .collect();
        let summaries = rt_confidence_analysis(&rows);
        assert_eq!(summaries[0].per_subject.len(), 0);
        assert_eq!(summaries[0].n_excluded, 1);
    }

    #[test]
    fn rt_planted_majority_negative_is_recovered() {
        let rows = cohort_rows(40, 17);
        let summaries = rt_confidence_analysis(&rows);
        for summary in &summaries {
            assert!(
                summary.n_negative * 2 > summary.per_subject.len(),
                "{:?}: {} negative of {}",
                summary.task,
                summary.n_negative,
                summary.per_subject.len()
            );
        }
    }

    #[test]
    fn cohort_generation_is_deterministic() {
        assert_eq!(cohort_rows(6, 42), cohort_rows(6, 42));
        assert_ne!(cohort_rows(6, 42), cohort_rows(6, 43));
    }
}
