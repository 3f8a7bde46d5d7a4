//! Closed-form expected-error predictors for both aggregation systems.
//!
//! Majority voting: conditional on the true answer, the number of option-2
//! votes in a homogeneous crowd is binomial, approximated by a normal with
//! the exact binomial mean and standard deviation; the crowd errs when the
//! count lands in the losing region.
//!
//! Weighted voting: each vote contributes `sign * confidence`; the first
//! two moments of that product are computed by exact enumeration over the
//! joint (response, confidence) distribution of a representative worker,
//! and the vote sum is again treated as normal.
//!
//! Both predictors assume a homogeneous crowd at the mean parameters;
//! heterogeneous populations are handled by Monte Carlo in the population
//! module. No continuity correction is applied, so deviations from the
//! exact binomial at small crowd sizes are expected and covered by wide
//! test tolerances.

use crate::aggregate::OptionLabel;
use crate::decision::{ConfidencePolicy, WorkerModel};
use crate::error::{Error, Result};
use crate::stats;

/// Mean and standard deviation of a (conditionally) normal aggregate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
}

/// Everything the closed-form error formulas need about a population.
///
/// Index 0 refers to "first option is correct", index 1 to "second option
/// is correct", matching the label conventions in [`crate::aggregate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationMoments {
    pub n_users: usize,
    /// Prior over the true answer, `[P(option 1), P(option 2)]`.
    pub prior: [f64; 2],
    /// Mean normalized decision-variable separation per true answer.
    pub mu_bar: [f64; 2],
    /// Moments of the option-2 vote count, per true answer.
    pub mv: Option<[Moments; 2]>,
    /// Moments of the weighted vote sum, per true answer.
    pub wmv: Option<[Moments; 2]>,
}

fn validate_prior(prior: [f64; 2]) -> Result<()> {
    if prior.iter().any(|p| !(0.0..=1.0).contains(p)) || (prior[0] + prior[1] - 1.0).abs() > 1e-12
    {
        return Err(Error::Domain(format!(
            "prior must be two probabilities summing to 1, got {prior:?}"
        )));
    }
    Ok(())
}

impl PopulationMoments {
    /// Moments for majority voting from the normalized mean separations.
    pub fn from_mu_bar(mu_bar: [f64; 2], n_users: usize, prior: [f64; 2]) -> Result<Self> {
        validate_prior(prior)?;
        if n_users == 0 {
            return Err(Error::Domain("n_users must be at least 1".into()));
        }
        Ok(Self {
            n_users,
            prior,
            mu_bar,
            mv: Some(mv_moments(mu_bar, n_users)),
            wmv: None,
        })
    }

    /// Full moments (both aggregators) from a representative worker.
    pub fn from_worker(worker: &WorkerModel, n_users: usize, prior: [f64; 2]) -> Result<Self> {
        validate_prior(prior)?;
        if n_users == 0 {
            return Err(Error::Domain("n_users must be at least 1".into()));
        }
        // Normalize to c1 = 0, sigma = 1: only (mu - c1) / sigma matters.
        let t = &worker.type1;
        let mu_bar = [
            (t.mu()[0] - t.c1()) / t.sigma()[0],
            (t.mu()[1] - t.c1()) / t.sigma()[1],
        ];
        Ok(Self {
            n_users,
            prior,
            mu_bar,
            mv: Some(mv_moments(mu_bar, n_users)),
            wmv: Some(wmv_moments(worker, n_users)?),
        })
    }
}

/// Normal moments of the option-2 vote count for a homogeneous crowd:
/// exact binomial mean `N q` and sd `sqrt(N q (1 - q))` with
/// `q = Q(-mu_bar[i])`, per true answer `i`.
pub fn mv_moments(mu_bar: [f64; 2], n_users: usize) -> [Moments; 2] {
    let n = n_users as f64;
    let moments = |mu: f64| {
        let p = stats::q(-mu);
        Moments {
            mean: n * p,
            sd: (n * p * (1.0 - p)).sqrt(),
        }
    };
    [moments(mu_bar[0]), moments(mu_bar[1])]
}

/// Exact joint distribution of (response, confidence) for one worker,
/// conditional on the true answer. Probabilities sum to 1 within 1e-10;
/// anything else is an internal consistency error.
pub fn response_confidence_cells(
    worker: &WorkerModel,
    true_answer: OptionLabel,
) -> Result<Vec<(OptionLabel, u8, f64)>> {
    let t = &worker.type1;
    let i = true_answer.index();
    let (mu, sigma, c1) = (t.mu()[i], t.sigma()[i], t.c1());
    let tail_above = |threshold: f64| stats::q((threshold - mu) / sigma);

    let mut cells = Vec::new();
    match &worker.policy {
        ConfidencePolicy::Thresholds(th) => {
            let c_max = th.c_max();
            // Option 2 side: bands between consecutive thresholds above c1.
            let mut lower = c1;
            for j in 1..=c_max {
                let upper = th.side_two().get(usize::from(j) - 1).copied();
                let p = match upper {
                    Some(u) => tail_above(lower) - tail_above(u),
                    None => tail_above(lower),
                };
                cells.push((OptionLabel::Two, j, p.max(0.0)));
                if let Some(u) = upper {
                    lower = u;
                }
            }
            // Option 1 side: mirrored bands below c1.
            let mut upper = c1;
            for j in 1..=c_max {
                let lower = th.side_one().get(usize::from(j) - 1).copied();
                let p = match lower {
                    Some(l) => tail_above(l) - tail_above(upper),
                    None => 1.0 - tail_above(upper),
                };
                cells.push((OptionLabel::One, j, p.max(0.0)));
                if let Some(l) = lower {
                    upper = l;
                }
            }
        }
        ConfidencePolicy::Archetype { kind, c_max } => {
            let p_two = t.prob_option_two(true_answer);
            for response in [OptionLabel::One, OptionLabel::Two] {
                let p = if response == OptionLabel::Two {
                    p_two
                } else {
                    1.0 - p_two
                };
                let confidence = kind.confidence(response == true_answer, *c_max);
                cells.push((response, confidence, p));
            }
        }
    }

    let total: f64 = cells.iter().map(|c| c.2).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "response/confidence cell probabilities sum to {total}, expected 1"
        )));
    }
    Ok(cells)
}

/// Normal moments of the weighted vote sum for a homogeneous crowd of
/// copies of `worker`: `N E[r c | A]` and `sqrt(N Var[r c | A])`, per true
/// answer, by exact enumeration of the per-worker cells.
pub fn wmv_moments(worker: &WorkerModel, n_users: usize) -> Result<[Moments; 2]> {
    let n = n_users as f64;
    let mut out = [Moments { mean: 0.0, sd: 0.0 }; 2];
    for answer in [OptionLabel::One, OptionLabel::Two] {
        let cells = response_confidence_cells(worker, answer)?;
        let mut e = 0.0;
        let mut e2 = 0.0;
        for (response, confidence, p) in cells {
            let v = response.sign() as f64 * f64::from(confidence);
            e += p * v;
            e2 += p * v * v;
        }
        let var = (e2 - e * e).max(0.0);
        out[answer.index()] = Moments {
            mean: n * e,
            sd: (n * var).sqrt(),
        };
    }
    Ok(out)
}

/// `P(lo <= X <= hi)` for `X ~ Normal(m, s)`, degenerating to a point mass
/// at `m` when `s = 0`. `hi_strict` makes the upper bound exclusive in the
/// degenerate case (the normal case has no atoms, so it only matters there).
fn normal_prob_between(lo: f64, hi: f64, m: Moments, hi_strict: bool) -> f64 {
    if m.sd > 0.0 {
        let upper = if hi.is_finite() {
            stats::q((hi - m.mean) / m.sd)
        } else {
            0.0
        };
        let lower = if lo.is_finite() {
            stats::q((lo - m.mean) / m.sd)
        } else {
            1.0
        };
        (lower - upper).max(0.0)
    } else {
        let above = m.mean >= lo;
        let below = if hi_strict { m.mean < hi } else { m.mean <= hi };
        if above && below {
            1.0
        } else {
            0.0
        }
    }
}

/// Expected majority-voting (ReBaCS) error from the vote-count moments.
///
/// Conditional on the first option being correct, the crowd errs when the
/// option-2 count reaches `N/2` (ties lose); conditional on the second,
/// when the count stays below `N/2`.
pub fn expected_error_rebacs(pm: &PopulationMoments) -> Result<f64> {
    let mv = pm
        .mv
        .ok_or_else(|| Error::Input("majority-vote moments are not populated".into()))?;
    validate_prior(pm.prior)?;
    let n = pm.n_users as f64;
    let half = n / 2.0;
    let err_given_one = normal_prob_between(half, n, mv[0], false);
    let err_given_two = normal_prob_between(0.0, half, mv[1], true);
    Ok((pm.prior[0] * err_given_one + pm.prior[1] * err_given_two).clamp(0.0, 1.0))
}

/// Expected weighted-voting (CoBaCS) error from the weighted-sum moments.
///
/// Conditional on the first option being correct the crowd errs when the
/// weighted sum is nonnegative (ties lose); conditional on the second,
/// when it is negative.
pub fn expected_error_cobacs(pm: &PopulationMoments) -> Result<f64> {
    let wmv = pm
        .wmv
        .ok_or_else(|| Error::Input("weighted-vote moments are not populated".into()))?;
    validate_prior(pm.prior)?;
    let err_given_one = if wmv[0].sd > 0.0 {
        stats::q(-wmv[0].mean / wmv[0].sd)
    } else if wmv[0].mean >= 0.0 {
        1.0
    } else {
        0.0
    };
    let err_given_two = if wmv[1].sd > 0.0 {
        1.0 - stats::q(-wmv[1].mean / wmv[1].sd)
    } else if wmv[1].mean < 0.0 {
        1.0
    } else {
        0.0
    };
    Ok((pm.prior[0] * err_given_one + pm.prior[1] * err_given_two).clamp(0.0, 1.0))
}
