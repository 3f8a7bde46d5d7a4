//! Synthetic worker populations, end-to-end system runs, and seeded
//! filter-sweep experiments comparing majority voting against
//! confidence-weighted voting across recruitment filters.
//!
//! Replicates are independent work units executed in parallel; each one
//! derives its own seed from the master seed and its replicate index, and
//! results are reduced in replicate order, so a sweep is bit-identical at
//! any thread count.

use rayon::prelude::*;

use crate::aggregate::{majority_vote, weighted_majority_vote, OptionLabel, ResponseMatrix};
use crate::decision::{performance_to_mu, Archetype, ConfidencePolicy, WorkerModel};
use crate::error::{Error, Result};
use crate::roc;
use crate::stats::{derive_seed, seeded_rng};
use rand::Rng;

/// Distribution that worker performances are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerformanceDistribution {
    /// Uniform on `(lo, hi)`, both strictly inside (0, 1).
    Uniform { lo: f64, hi: f64 },
    /// Every worker at the same performance.
    Fixed(f64),
}

impl PerformanceDistribution {
    fn validate(&self) -> Result<()> {
        match *self {
            PerformanceDistribution::Uniform { lo, hi } => {
                if !(0.0 < lo && lo < hi && hi < 1.0) {
                    return Err(Error::Config(format!(
                        "uniform performance bounds must satisfy 0 < lo < hi < 1, got ({lo}, {hi})"
                    )));
                }
            }
            PerformanceDistribution::Fixed(p) => {
                if !(0.0 < p && p < 1.0) {
                    return Err(Error::Config(format!(
                        "fixed performance must be in (0, 1), got {p}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PerformanceDistribution::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            PerformanceDistribution::Fixed(p) => p,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            PerformanceDistribution::Uniform { lo, hi } => format!("uniform({lo},{hi})"),
            PerformanceDistribution::Fixed(p) => format!("fixed({p})"),
        }
    }
}

/// How the metacognition score used by the filters is obtained for
/// simulated workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaScoreMode {
    /// The archetype's known score: 0, 0.5 or 1.
    ArchetypeTrue,
    /// Re-estimated as AUROC2 over a simulated pre-test of this many
    /// questions (degenerate estimates fall back to 0.5).
    Estimated { pretest_questions: usize },
}

/// Everything needed to draw a population and run both systems once.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSpec {
    pub n_users: usize,
    pub n_questions: usize,
    pub perf_dist: PerformanceDistribution,
    /// Mixture over archetypes `[low, medium, high]`, summing to 1.
    pub archetype_mix: [f64; 3],
    pub prior_a1: f64,
    pub c_max: u8,
    pub seed: u64,
    pub meta_score_mode: MetaScoreMode,
}

impl Default for PopulationSpec {
    fn default() -> Self {
        Self {
            n_users: 100,
            n_questions: 200,
            perf_dist: PerformanceDistribution::Uniform { lo: 0.01, hi: 0.99 },
            archetype_mix: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            prior_a1: 0.5,
            c_max: 5,
            seed: 0,
            meta_score_mode: MetaScoreMode::ArchetypeTrue,
        }
    }
}

impl PopulationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_users == 0 {
            return Err(Error::Config("n_users must be at least 1".into()));
        }
        if self.n_questions == 0 {
            return Err(Error::Config("n_questions must be at least 1".into()));
        }
        self.perf_dist.validate()?;
        let mix_sum: f64 = self.archetype_mix.iter().sum();
        if self.archetype_mix.iter().any(|&m| m < 0.0) || (mix_sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "archetype mixture must be nonnegative and sum to 1, got {:?}",
                self.archetype_mix
            )));
        }
        if !(0.0..=1.0).contains(&self.prior_a1) {
            return Err(Error::Config(format!(
                "prior_a1 must be a probability, got {}",
                self.prior_a1
            )));
        }
        if self.c_max < 1 {
            return Err(Error::Config("c_max must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn prior(&self) -> [f64; 2] {
        [self.prior_a1, 1.0 - self.prior_a1]
    }
}

/// Recruitment filter thresholds to sweep over.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterGrid {
    pub perf_thresholds: Vec<f64>,
    pub meta_thresholds: Vec<f64>,
}

impl FilterGrid {
    pub fn new(perf_thresholds: Vec<f64>, meta_thresholds: Vec<f64>) -> Result<Self> {
        for (name, t) in [("perf", &perf_thresholds), ("meta", &meta_thresholds)] {
            if t.is_empty() {
                return Err(Error::Config(format!("{name} thresholds must be nonempty")));
            }
            if t.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Config(format!(
                    "{name} thresholds must be sorted ascending"
                )));
            }
        }
        Ok(Self {
            perf_thresholds,
            meta_thresholds,
        })
    }

    /// The single no-filter cell.
    pub fn no_filter() -> Self {
        Self {
            perf_thresholds: vec![0.0],
            meta_thresholds: vec![0.0],
        }
    }
}

/// Summary of one filter cell over all replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub perf_min: f64,
    pub meta_min: f64,
    /// Replicates where at least one worker survived the filters.
    pub viable_replicates: usize,
    /// Error statistics over viable replicates.
    pub mean_rebacs_error: f64,
    pub sd_rebacs_error: f64,
    pub mean_cobacs_error: f64,
    pub sd_cobacs_error: f64,
    /// Mean survivor count over all replicates (zeros included).
    pub mean_survivors: f64,
    /// Viable replicates where the weighted system was strictly better.
    pub wins: usize,
    pub ties: usize,
    pub win_fraction: Option<f64>,
}

impl CellStats {
    /// A cell is unavailable when the filters emptied every replicate.
    pub fn available(&self) -> bool {
        self.viable_replicates > 0
    }
}

/// Outcome of a full filter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: PopulationSpec,
    pub n_replicates: usize,
    pub perf_thresholds: Vec<f64>,
    pub meta_thresholds: Vec<f64>,
    /// Cells in meta-major order: `cells[meta_idx * n_perf + perf_idx]`.
    pub cells: Vec<CellStats>,
}

impl SweepResult {
    pub fn cell(&self, perf_idx: usize, meta_idx: usize) -> &CellStats {
        &self.cells[meta_idx * self.perf_thresholds.len() + perf_idx]
    }
}

/// Draw a population of workers from the spec, deterministically in its
/// seed.
pub fn generate_population(spec: &PopulationSpec) -> Result<Vec<WorkerModel>> {
    spec.validate()?;
    let mut rng = seeded_rng(spec.seed);
    let mut workers = Vec::with_capacity(spec.n_users);
    for id in 0..spec.n_users {
        let perf = spec.perf_dist.sample(&mut rng);
        let u: f64 = rng.random();
        let kind = if u < spec.archetype_mix[0] {
            Archetype::Low
        } else if u < spec.archetype_mix[0] + spec.archetype_mix[1] {
            Archetype::Medium
        } else {
            Archetype::High
        };
        workers.push(WorkerModel::new(
            id,
            performance_to_mu(perf)?,
            ConfidencePolicy::archetype(kind, spec.c_max)?,
        ));
    }
    Ok(workers)
}

/// Indices of workers passing both filters (`>= threshold` survives).
pub fn apply_filters(
    perf_scores: &[f64],
    meta_scores: &[f64],
    perf_min: f64,
    meta_min: f64,
) -> Result<Vec<usize>> {
    if perf_scores.len() != meta_scores.len() {
        return Err(Error::Input(format!(
            "score vectors differ in length ({} vs {})",
            perf_scores.len(),
            meta_scores.len()
        )));
    }
    Ok(perf_scores
        .iter()
        .zip(meta_scores)
        .enumerate()
        .filter(|(_, (&p, &m))| p >= perf_min && m >= meta_min)
        .map(|(i, _)| i)
        .collect())
}

/// Simulate every worker answering every question once; the answer key is
/// drawn from the prior. Deterministic in the seed.
pub fn simulate_response_matrix(
    workers: &[WorkerModel],
    n_questions: usize,
    prior_a1: f64,
    seed: u64,
) -> Result<ResponseMatrix> {
    if workers.is_empty() {
        return Err(Error::EmptyCrowd);
    }
    if n_questions == 0 {
        return Err(Error::Config("n_questions must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&prior_a1) {
        return Err(Error::Domain(format!(
            "prior must be a probability, got {prior_a1}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let answer_key: Vec<OptionLabel> = (0..n_questions)
        .map(|_| {
            if rng.random::<f64>() < prior_a1 {
                OptionLabel::One
            } else {
                OptionLabel::Two
            }
        })
        .collect();

    let c_max = workers
        .iter()
        .map(|w| w.policy.c_max())
        .max()
        .expect("nonempty");
    let mut responses = Vec::with_capacity(workers.len() * n_questions);
    let mut confidences = Vec::with_capacity(workers.len() * n_questions);
    for worker in workers {
        for &truth in &answer_key {
            let d = worker.simulate_decision_with(truth, &mut rng);
            responses.push(d.response);
            confidences.push(d.confidence);
        }
    }
    ResponseMatrix::new(
        workers.len(),
        n_questions,
        responses,
        Some(confidences),
        answer_key,
        c_max,
    )
}

/// Run both systems once over the same realized task and return
/// `(rebacs_error, cobacs_error)`.
pub fn run_population(
    workers: &[WorkerModel],
    n_questions: usize,
    prior_a1: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    let matrix = simulate_response_matrix(workers, n_questions, prior_a1, seed)?;
    let mv = majority_vote(&matrix)?;
    let wmv = weighted_majority_vote(&matrix)?;
    Ok((mv.error, wmv.error))
}

/// Metacognition score of each worker under the spec's scoring mode.
fn meta_scores(workers: &[WorkerModel], spec: &PopulationSpec, rep_seed: u64) -> Vec<f64> {
    workers
        .iter()
        .enumerate()
        .map(|(idx, w)| match (&spec.meta_score_mode, &w.policy) {
            (MetaScoreMode::ArchetypeTrue, ConfidencePolicy::Archetype { kind, .. }) => {
                kind.meta_score()
            }
            (MetaScoreMode::ArchetypeTrue, ConfidencePolicy::Thresholds(_))
            | (MetaScoreMode::Estimated { .. }, _) => {
                let n = match spec.meta_score_mode {
                    MetaScoreMode::Estimated { pretest_questions } => pretest_questions,
                    // Threshold workers have no archetype score; estimate.
                    MetaScoreMode::ArchetypeTrue => 200,
                };
                estimate_auroc2(w, n, spec.prior_a1, derive_seed(rep_seed, &[2, idx as u64]))
            }
        })
        .collect()
}

/// AUROC2 of a simulated pre-test; degenerate pre-tests score 0.5.
fn estimate_auroc2(worker: &WorkerModel, n_questions: usize, prior_a1: f64, seed: u64) -> f64 {
    let mut rng = seeded_rng(seed);
    let trials: Vec<roc::TrialRecord> = (0..n_questions)
        .map(|_| {
            let truth = if rng.random::<f64>() < prior_a1 {
                OptionLabel::One
            } else {
                OptionLabel::Two
            };
            let d = worker.simulate_decision_with(truth, &mut rng);
            roc::TrialRecord::new(d.response, truth, d.confidence)
        })
        .collect();
    roc::auroc2_score(&trials, worker.policy.c_max()).unwrap_or(0.5)
}

struct ReplicateOutcome {
    /// Per cell: `(errors if viable, survivor count)`.
    cells: Vec<(Option<(f64, f64)>, usize)>,
}

fn run_replicate(
    spec: &PopulationSpec,
    grid: &FilterGrid,
    master_seed: u64,
    replicate: u64,
) -> Result<ReplicateOutcome> {
    let rep_seed = derive_seed(master_seed, &[replicate]);
    let pop_spec = spec.with_seed(derive_seed(rep_seed, &[0]));
    let workers = generate_population(&pop_spec)?;

    let perf: Vec<f64> = workers
        .iter()
        .map(|w| w.performance(spec.prior_a1))
        .collect::<Result<_>>()?;
    let meta = meta_scores(&workers, spec, rep_seed);

    let matrix =
        simulate_response_matrix(&workers, spec.n_questions, spec.prior_a1, derive_seed(rep_seed, &[1]))?;

    let mut cells = Vec::with_capacity(grid.meta_thresholds.len() * grid.perf_thresholds.len());
    for &meta_min in &grid.meta_thresholds {
        for &perf_min in &grid.perf_thresholds {
            let survivors = apply_filters(&perf, &meta, perf_min, meta_min)?;
            if survivors.is_empty() {
                cells.push((None, 0));
                continue;
            }
            let sub = matrix.select_users(&survivors)?;
            let mv = majority_vote(&sub)?;
            let wmv = weighted_majority_vote(&sub)?;
            cells.push((Some((mv.error, wmv.error)), survivors.len()));
        }
    }
    Ok(ReplicateOutcome { cells })
}

/// Sweep the filter grid over `n_replicates` freshly drawn populations.
///
/// Bit-identical for identical `(spec, grid, n_replicates, seed)` at any
/// thread count.
pub fn sweep(
    spec: &PopulationSpec,
    grid: &FilterGrid,
    n_replicates: usize,
    seed: u64,
) -> Result<SweepResult> {
    spec.validate()?;
    if n_replicates == 0 {
        return Err(Error::Config("n_replicates must be at least 1".into()));
    }

    let outcomes: Vec<Result<ReplicateOutcome>> = (0..n_replicates as u64)
        .into_par_iter()
        .map(|rep| run_replicate(spec, grid, seed, rep))
        .collect();

    let n_cells = grid.perf_thresholds.len() * grid.meta_thresholds.len();
    let mut acc: Vec<CellAccumulator> = (0..n_cells).map(|_| CellAccumulator::default()).collect();
    for outcome in outcomes {
        let outcome = outcome?;
        for (cell, &(errors, survivors)) in acc.iter_mut().zip(&outcome.cells) {
            cell.add(errors, survivors);
        }
    }

    let mut cells = Vec::with_capacity(n_cells);
    let mut idx = 0;
    for &meta_min in &grid.meta_thresholds {
        for &perf_min in &grid.perf_thresholds {
            cells.push(acc[idx].finish(perf_min, meta_min, n_replicates));
            idx += 1;
        }
    }
    Ok(SweepResult {
        spec: spec.clone(),
        n_replicates,
        perf_thresholds: grid.perf_thresholds.clone(),
        meta_thresholds: grid.meta_thresholds.clone(),
        cells,
    })
}

#[derive(Default)]
struct CellAccumulator {
    viable: usize,
    sum_re: f64,
    sum_re_sq: f64,
    sum_co: f64,
    sum_co_sq: f64,
    survivors: f64,
    wins: usize,
    ties: usize,
}

impl CellAccumulator {
    fn add(&mut self, errors: Option<(f64, f64)>, survivors: usize) {
        self.survivors += survivors as f64;
        if let Some((re, co)) = errors {
            self.viable += 1;
            self.sum_re += re;
            self.sum_re_sq += re * re;
            self.sum_co += co;
            self.sum_co_sq += co * co;
            if co < re {
                self.wins += 1;
            } else if co == re {
                self.ties += 1;
            }
        }
    }

    fn finish(&self, perf_min: f64, meta_min: f64, n_replicates: usize) -> CellStats {
        let v = self.viable as f64;
        let (mean_re, mean_co) = if self.viable > 0 {
            (self.sum_re / v, self.sum_co / v)
        } else {
            (f64::NAN, f64::NAN)
        };
        let sd = |sum: f64, sum_sq: f64, mean: f64| {
            if self.viable > 1 {
                ((sum_sq - sum * mean) / (v - 1.0)).max(0.0).sqrt()
            } else {
                0.0
            }
        };
        CellStats {
            perf_min,
            meta_min,
            viable_replicates: self.viable,
            mean_rebacs_error: mean_re,
            sd_rebacs_error: sd(self.sum_re, self.sum_re_sq, mean_re),
            mean_cobacs_error: mean_co,
            sd_cobacs_error: sd(self.sum_co, self.sum_co_sq, mean_co),
            mean_survivors: self.survivors / n_replicates as f64,
            wins: self.wins,
            ties: self.ties,
            win_fraction: (self.viable > 0).then(|| self.wins as f64 / v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> PopulationSpec {
        PopulationSpec {
            n_users: 15,
            n_questions: 21,
            seed: 5,
            ..PopulationSpec::default()
        }
    }

    #[test]
    fn degenerate_mixture_yields_all_medium() {
        let spec = PopulationSpec {
            archetype_mix: [0.0, 1.0, 0.0],
            n_users: 30,
            ..PopulationSpec::default()
        };
        let workers = generate_population(&spec).unwrap();
        assert!(workers.iter().all(|w| matches!(
            w.policy,
            ConfidencePolicy::Archetype {
                kind: Archetype::Medium,
                ..
            }
        )));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = small_spec();
        assert_eq!(
            generate_population(&spec).unwrap(),
            generate_population(&spec).unwrap()
        );
    }

    #[test]
    fn uniform_performance_centers_at_half() {
        let spec = PopulationSpec {
            n_users: 10_000,
            seed: 77,
            ..PopulationSpec::default()
        };
        let workers = generate_population(&spec).unwrap();
        let mean: f64 = workers
            .iter()
            .map(|w| w.performance(0.5).unwrap())
            .sum::<f64>()
            / workers.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean performance {mean}");
    }

    #[test]
    fn filters_trivial_and_impossible() {
        let perf = [0.4, 0.5, 0.6, 0.7, 0.3];
        let meta = [0.5, 0.6, 0.4, 0.7, 0.9];
        assert_eq!(
            apply_filters(&perf, &meta, 0.0, 0.0).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        assert!(apply_filters(&perf, &meta, 1.1, 0.0).unwrap().is_empty());
        // Mixed fixture: only workers 1 and 3 clear both thresholds.
        assert_eq!(apply_filters(&perf, &meta, 0.5, 0.5).unwrap(), vec![1, 3]);
        assert!(apply_filters(&perf, &meta[..3], 0.0, 0.0).is_err());
    }

    #[test]
    fn filters_tighten_monotonically() {
        let spec = small_spec();
        let workers = generate_population(&spec).unwrap();
        let perf: Vec<f64> = workers
            .iter()
            .map(|w| w.performance(0.5).unwrap())
            .collect();
        let meta = meta_scores(&workers, &spec, 3);
        let mut prev = usize::MAX;
        for t in [0.0, 0.3, 0.5, 0.7, 0.9] {
            let n = apply_filters(&perf, &meta, t, t).unwrap().len();
            assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn near_perfect_worker_drives_error_to_zero() {
        let worker = WorkerModel::new(
            0,
            performance_to_mu(0.999).unwrap(),
            ConfidencePolicy::archetype(Archetype::High, 5).unwrap(),
        );
        let (re, co) = run_population(&[worker], 200, 0.5, 11).unwrap();
        assert!(re <= 0.01, "rebacs error {re}");
        assert!(co <= 0.01, "cobacs error {co}");
    }

    #[test]
    fn all_medium_crowd_makes_both_systems_identical() {
        let spec = PopulationSpec {
            archetype_mix: [0.0, 1.0, 0.0],
            n_users: 21,
            n_questions: 50,
            seed: 9,
            ..PopulationSpec::default()
        };
        let workers = generate_population(&spec).unwrap();
        for run_seed in 0..5 {
            let (re, co) = run_population(&workers, 50, 0.5, run_seed).unwrap();
            assert_eq!(re, co, "constant weights must reduce WMV to MV");
        }
    }

    #[test]
    fn empty_crowd_is_an_error() {
        assert!(matches!(
            run_population(&[], 10, 0.5, 0),
            Err(Error::EmptyCrowd)
        ));
    }

    #[test]
    fn sweep_is_deterministic_across_thread_counts() {
        let spec = small_spec();
        let grid = FilterGrid::new(vec![0.0, 0.5], vec![0.0, 0.5]).unwrap();
        let base = sweep(&spec, &grid, 6, 123).unwrap();
        for threads in [1, 2, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let result = pool.install(|| sweep(&spec, &grid, 6, 123).unwrap());
            assert_eq!(result, base, "diverged at {threads} threads");
        }
    }

    #[test]
    fn sweep_rejects_zero_replicates() {
        let grid = FilterGrid::no_filter();
        assert!(matches!(
            sweep(&small_spec(), &grid, 0, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn impossible_cell_is_unavailable() {
        let spec = small_spec();
        let grid = FilterGrid::new(vec![0.0], vec![0.0, 1.5]).unwrap();
        let result = sweep(&spec, &grid, 4, 42).unwrap();
        let open = result.cell(0, 0);
        let closed = result.cell(0, 1);
        assert!(open.available());
        assert!(!closed.available());
        assert_eq!(closed.mean_survivors, 0.0);
        assert!(closed.win_fraction.is_none());
    }

    #[test]
    fn grid_validation() {
        assert!(FilterGrid::new(vec![], vec![0.0]).is_err());
        assert!(FilterGrid::new(vec![0.5, 0.4], vec![0.0]).is_err());
        assert!(FilterGrid::new(vec![0.4, 0.5], vec![0.0, 0.5, 0.7]).is_ok());
    }

    #[test]
    fn all_medium_sweep_ties_every_replicate() {
        // Constant weights make WMV equal MV, so with an odd crowd every
        // replicate of the no-filter cell is an exact tie.
        let spec = PopulationSpec {
            archetype_mix: [0.0, 1.0, 0.0],
            n_users: 13,
            n_questions: 40,
            ..PopulationSpec::default()
        };
        let result = sweep(&spec, &FilterGrid::no_filter(), 25, 61).unwrap();
        let cell = &result.cells[0];
        assert_eq!(cell.ties, cell.viable_replicates);
        assert_eq!(cell.wins, 0);
        assert_eq!(cell.mean_rebacs_error, cell.mean_cobacs_error);
    }

    #[test]
    fn estimated_meta_mode_separates_archetypes() {
        let spec = PopulationSpec {
            n_users: 30,
            meta_score_mode: MetaScoreMode::Estimated {
                pretest_questions: 300,
            },
            perf_dist: PerformanceDistribution::Fixed(0.7),
            seed: 31,
            ..PopulationSpec::default()
        };
        let workers = generate_population(&spec).unwrap();
        let meta = meta_scores(&workers, &spec, 8);
        for (w, m) in workers.iter().zip(&meta) {
            if let ConfidencePolicy::Archetype { kind, .. } = &w.policy {
                match kind {
                    Archetype::Low => assert!(*m < 0.2, "low scored {m}"),
                    Archetype::Medium => assert!((*m - 0.5).abs() < 0.15, "medium scored {m}"),
                    Archetype::High => assert!(*m > 0.8, "high scored {m}"),
                }
            }
        }
    }
}
