//! Type I and Type II ROC curves from trial-level data.
//!
//! The Type II curve plots, for each confidence cutoff, the rate of
//! high-confidence ratings among correct answers (y) against the same rate
//! among incorrect answers (x). Its area, AUROC2, measures metacognitive
//! ability: 0.5 means confidence carries no information about correctness,
//! 1 means perfect insight.
//!
//! Cutoffs sweep `confidence >= k` for `k` from `c_max` down to 2, and the
//! curve is anchored at (0,0) and (1,1). Empty cells fall out of the
//! anchored construction naturally; no pseudo-counts are ever added.

use crate::aggregate::OptionLabel;
use crate::error::{Error, Result};
use crate::stats;

/// One answered trial with its confidence rating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub response: OptionLabel,
    pub true_answer: OptionLabel,
    pub confidence: u8,
}

impl TrialRecord {
    pub fn new(response: OptionLabel, true_answer: OptionLabel, confidence: u8) -> Self {
        Self {
            response,
            true_answer,
            confidence,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.response == self.true_answer
    }
}

/// An ROC curve: ordered (false-alarm rate, hit rate) points and the
/// trapezoid area under them.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

fn validate_confidences(trials: &[TrialRecord], c_max: u8) -> Result<()> {
    if c_max < 1 {
        return Err(Error::Domain("c_max must be at least 1".into()));
    }
    if let Some(t) = trials
        .iter()
        .find(|t| t.confidence < 1 || t.confidence > c_max)
    {
        return Err(Error::Domain(format!(
            "confidence {} outside [1, {c_max}]",
            t.confidence
        )));
    }
    Ok(())
}

/// Type II ROC: confidence discriminating the worker's own correct from
/// incorrect answers. Requires at least one of each.
pub fn type2_roc(trials: &[TrialRecord], c_max: u8) -> Result<RocCurve> {
    validate_confidences(trials, c_max)?;
    let n_correct = trials.iter().filter(|t| t.is_correct()).count();
    let n_incorrect = trials.len() - n_correct;
    if n_correct == 0 || n_incorrect == 0 {
        return Err(Error::UndefinedRoc(format!(
            "need both outcome classes, got {n_correct} correct / {n_incorrect} incorrect"
        )));
    }

    let mut points = Vec::with_capacity(c_max as usize + 1);
    points.push((0.0, 0.0));
    for k in (2..=c_max).rev() {
        let hits = trials
            .iter()
            .filter(|t| t.is_correct() && t.confidence >= k)
            .count();
        let false_alarms = trials
            .iter()
            .filter(|t| !t.is_correct() && t.confidence >= k)
            .count();
        points.push((
            false_alarms as f64 / n_incorrect as f64,
            hits as f64 / n_correct as f64,
        ));
    }
    points.push((1.0, 1.0));

    let auc = stats::trapezoid_auc(&points)?;
    Ok(RocCurve { points, auc })
}

/// Type I ROC over the two true-answer classes, sweeping cutoffs on the
/// signed rating `sign(response) * confidence`.
///
/// Option 2 is the positive class: a point's hit rate is the fraction of
/// option-2 questions rated at or above the cutoff, its false-alarm rate
/// the same fraction among option-1 questions.
pub fn type1_roc(trials: &[TrialRecord], c_max: u8) -> Result<RocCurve> {
    validate_confidences(trials, c_max)?;
    let n_pos = trials
        .iter()
        .filter(|t| t.true_answer == OptionLabel::Two)
        .count();
    let n_neg = trials.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedRoc(format!(
            "need both true-answer classes, got {n_neg} option-1 / {n_pos} option-2"
        )));
    }

    let rating = |t: &TrialRecord| t.response.sign() * i64::from(t.confidence);

    // Cutoffs descend over the signed-rating support; "rating >= cutoff".
    let mut cutoffs: Vec<i64> = (1..=i64::from(c_max))
        .flat_map(|c| [c, -c])
        .collect();
    cutoffs.sort_unstable_by(|a, b| b.cmp(a));

    let mut points = Vec::with_capacity(cutoffs.len() + 2);
    points.push((0.0, 0.0));
    for cut in cutoffs {
        let hr = trials
            .iter()
            .filter(|t| t.true_answer == OptionLabel::Two && rating(t) >= cut)
            .count() as f64
            / n_pos as f64;
        let far = trials
            .iter()
            .filter(|t| t.true_answer == OptionLabel::One && rating(t) >= cut)
            .count() as f64
            / n_neg as f64;
        points.push((far, hr));
    }
    points.push((1.0, 1.0));

    let auc = stats::trapezoid_auc(&points)?;
    Ok(RocCurve { points, auc })
}

/// Metacognition score: the area under the Type II ROC curve.
pub fn auroc2_score(trials: &[TrialRecord], c_max: u8) -> Result<f64> {
    Ok(type2_roc(trials, c_max)?.auc)
}
