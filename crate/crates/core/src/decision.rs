//! Signal-detection worker model: a Gaussian decision variable drives the
//! Type I choice between two options, and a confidence policy turns the
//! same variable (or the outcome) into a Type II confidence rating.
//!
//! Two families of confidence policy exist:
//!
//! - **Thresholds** — the decision axis on each side of the Type I
//!   threshold is cut into `c_max` bands; confidence is the band index,
//!   growing away from the threshold.
//! - **Archetype** — behavioral rules conditioned on correctness, giving
//!   the three canonical metacognition levels: `Low` reports confidence 1
//!   when correct and `c_max` when wrong (AUROC2 near 0), `Medium` always
//!   reports the middle level (AUROC2 exactly 0.5), `High` reports `c_max`
//!   when correct and 1 when wrong (AUROC2 near 1).

use rand::Rng;
use rand_distr::StandardNormal;

use crate::aggregate::OptionLabel;
use crate::error::{Error, Result};
use crate::stats;

/// Parameters of the Type I decision: the decision variable is
/// `Normal(mu[i], sigma[i])` when the true answer is option `i + 1`, and
/// the worker answers option 1 iff the variable is at or below `c1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeOneParams {
    mu: [f64; 2],
    sigma: [f64; 2],
    c1: f64,
}

impl TypeOneParams {
    pub fn new(mu: [f64; 2], sigma: [f64; 2], c1: f64) -> Result<Self> {
        for v in mu.iter().chain(sigma.iter()).chain(std::iter::once(&c1)) {
            if !v.is_finite() {
                return Err(Error::Domain(
                    "Type I parameters must all be finite".into(),
                ));
            }
        }
        if sigma[0] <= 0.0 || sigma[1] <= 0.0 {
            return Err(Error::Domain(format!(
                "sigma must be positive, got {sigma:?}"
            )));
        }
        Ok(Self { mu, sigma, c1 })
    }

    pub fn mu(&self) -> [f64; 2] {
        self.mu
    }

    pub fn sigma(&self) -> [f64; 2] {
        self.sigma
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Probability that the worker picks option 2 given the true answer.
    pub(crate) fn prob_option_two(&self, true_answer: OptionLabel) -> f64 {
        let i = true_answer.index();
        stats::q((self.c1 - self.mu[i]) / self.sigma[i])
    }
}

/// Per-side Type II thresholds cutting the decision axis into `c_max`
/// confidence bands.
///
/// `side_two` holds thresholds above `c1` in increasing order (the bands
/// of responses for option 2); `side_one` holds thresholds below `c1` in
/// decreasing order. Each side has exactly `c_max - 1` thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeTwoThresholds {
    side_one: Vec<f64>,
    side_two: Vec<f64>,
}

impl TypeTwoThresholds {
    pub fn new(side_one: Vec<f64>, side_two: Vec<f64>, c1: f64) -> Result<Self> {
        if side_one.len() != side_two.len() {
            return Err(Error::Domain(format!(
                "both sides need the same number of thresholds ({} vs {})",
                side_one.len(),
                side_two.len()
            )));
        }
        if side_one.is_empty() {
            return Err(Error::Domain(
                "at least one threshold per side is required (c_max >= 2)".into(),
            ));
        }
        let ascending = side_two.windows(2).all(|w| w[0] < w[1]);
        let descending = side_one.windows(2).all(|w| w[0] > w[1]);
        if !ascending || !descending || side_two[0] < c1 || side_one[0] > c1 {
            return Err(Error::Domain(
                "thresholds must be strictly sorted moving away from c1".into(),
            ));
        }
        Ok(Self { side_one, side_two })
    }

    /// Mirror-symmetric thresholds at `c1 +- offsets` (offsets strictly
    /// increasing and positive).
    pub fn symmetric(c1: f64, offsets: &[f64]) -> Result<Self> {
        if offsets.is_empty() || offsets[0] <= 0.0 || offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "offsets must be strictly increasing and positive".into(),
            ));
        }
        let side_two: Vec<f64> = offsets.iter().map(|o| c1 + o).collect();
        let side_one: Vec<f64> = offsets.iter().map(|o| c1 - o).collect();
        Self::new(side_one, side_two, c1)
    }

    pub fn c_max(&self) -> u8 {
        (self.side_two.len() + 1) as u8
    }

    pub fn side_one(&self) -> &[f64] {
        &self.side_one
    }

    pub fn side_two(&self) -> &[f64] {
        &self.side_two
    }

    /// Confidence band of a decision variable `x` that answered `response`.
    ///
    /// Band index counts thresholds crossed moving away from `c1`; a value
    /// exactly on a threshold stays in the band nearer `c1`.
    pub fn confidence_for(&self, response: OptionLabel, x: f64) -> u8 {
        let crossed = match response {
            OptionLabel::Two => self.side_two.iter().filter(|&&t| x > t).count(),
            OptionLabel::One => self.side_one.iter().filter(|&&t| x < t).count(),
        };
        (crossed + 1) as u8
    }
}

/// The three canonical metacognition levels used for simulated workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Archetype {
    Low,
    Medium,
    High,
}

impl Archetype {
    /// Confidence reported under this archetype's behavioral rule.
    pub fn confidence(self, correct: bool, c_max: u8) -> u8 {
        match self {
            Archetype::Low => {
                if correct {
                    1
                } else {
                    c_max
                }
            }
            Archetype::Medium => c_max.div_ceil(2),
            Archetype::High => {
                if correct {
                    c_max
                } else {
                    1
                }
            }
        }
    }

    /// The archetype's metacognition score used when filtering simulated
    /// populations: 0, 0.5 and 1 for low, medium and high.
    pub fn meta_score(self) -> f64 {
        match self {
            Archetype::Low => 0.0,
            Archetype::Medium => 0.5,
            Archetype::High => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::Low => "low",
            Archetype::Medium => "medium",
            Archetype::High => "high",
        }
    }
}

/// How a worker turns a decision into a confidence rating.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfidencePolicy {
    Thresholds(TypeTwoThresholds),
    Archetype { kind: Archetype, c_max: u8 },
}

impl ConfidencePolicy {
    pub fn archetype(kind: Archetype, c_max: u8) -> Result<Self> {
        if c_max < 1 {
            return Err(Error::Domain("c_max must be at least 1".into()));
        }
        Ok(ConfidencePolicy::Archetype { kind, c_max })
    }

    pub fn c_max(&self) -> u8 {
        match self {
            ConfidencePolicy::Thresholds(t) => t.c_max(),
            ConfidencePolicy::Archetype { c_max, .. } => *c_max,
        }
    }
}

/// A simulated worker: Type I parameters plus a confidence policy.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkerModel {
    pub id: usize,
    pub type1: TypeOneParams,
    pub policy: ConfidencePolicy,
}

/// One simulated answer: the chosen option and the reported confidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisionRecord {
    pub response: OptionLabel,
    pub confidence: u8,
}

impl WorkerModel {
    pub fn new(id: usize, type1: TypeOneParams, policy: ConfidencePolicy) -> Self {
        Self { id, type1, policy }
    }

    /// Simulate one Type I + Type II decision from an explicit seed.
    pub fn simulate_decision(&self, true_answer: OptionLabel, seed: u64) -> DecisionRecord {
        let mut rng = stats::seeded_rng(seed);
        self.simulate_decision_with(true_answer, &mut rng)
    }

    /// Simulation core reused by batch drivers that manage their own
    /// generator stream.
    pub fn simulate_decision_with<R: Rng + ?Sized>(
        &self,
        true_answer: OptionLabel,
        rng: &mut R,
    ) -> DecisionRecord {
        let i = true_answer.index();
        let z: f64 = rng.sample(StandardNormal);
        let x = self.type1.mu[i] + self.type1.sigma[i] * z;
        // x equal to c1 answers option 1 (the "<=" branch).
        let response = if x <= self.type1.c1 {
            OptionLabel::One
        } else {
            OptionLabel::Two
        };
        let confidence = match &self.policy {
            ConfidencePolicy::Thresholds(t) => t.confidence_for(response, x),
            ConfidencePolicy::Archetype { kind, c_max } => {
                kind.confidence(response == true_answer, *c_max)
            }
        };
        DecisionRecord {
            response,
            confidence,
        }
    }

    /// Closed-form probability of a correct Type I answer.
    pub fn performance(&self, prior_a1: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&prior_a1) {
            return Err(Error::Domain(format!(
                "prior must be a probability, got {prior_a1}"
            )));
        }
        let p_correct_given_one = 1.0 - self.type1.prob_option_two(OptionLabel::One);
        let p_correct_given_two = self.type1.prob_option_two(OptionLabel::Two);
        Ok(prior_a1 * p_correct_given_one + (1.0 - prior_a1) * p_correct_given_two)
    }
}

/// Standalone form of [`WorkerModel::performance`] for callers that only
/// have the Type I parameters.
pub fn worker_performance(type1: &TypeOneParams, prior_a1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&prior_a1) {
        return Err(Error::Domain(format!(
            "prior must be a probability, got {prior_a1}"
        )));
    }
    let p1 = 1.0 - type1.prob_option_two(OptionLabel::One);
    let p2 = type1.prob_option_two(OptionLabel::Two);
    Ok(prior_a1 * p1 + (1.0 - prior_a1) * p2)
}

/// Symmetric Type I parameterization hitting a target performance under
/// equal priors: `c1 = 0`, unit sigmas, `mu = [-d, +d]`.
pub fn performance_to_mu(perf: f64) -> Result<TypeOneParams> {
    if !(perf > 0.0 && perf < 1.0) {
        return Err(Error::Domain(format!(
            "performance must be in (0, 1), got {perf}"
        )));
    }
    let d = stats::gauss_upper_tail_inv(1.0 - perf)?;
    TypeOneParams::new([-d, d], [1.0, 1.0], 0.0)
}
