//! Crowd answer extraction: majority voting (the ReBaCS aggregator) and
//! confidence-weighted majority voting (the CoBaCS aggregator).
//!
//! Tie-breaking is intentional and load-bearing: both vote rules select
//! option 2 on an exact tie, which introduces a measurable bias at small
//! even crowd sizes. Tests pin this behavior.

use crate::error::{Error, Result};

/// One of the two answer options.
///
/// This type is the single place where the two bookkeeping conventions
/// meet: majority voting counts option 2 votes as `1` (so option 1 is `0`),
/// while weighted voting maps option 1 to `-1` and option 2 to `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OptionLabel {
    One,
    Two,
}

impl OptionLabel {
    /// `0` for option 1, `1` for option 2 (the MV vote count convention).
    pub fn unit(self) -> u32 {
        match self {
            OptionLabel::One => 0,
            OptionLabel::Two => 1,
        }
    }

    /// `-1` for option 1, `+1` for option 2 (the WMV sign convention).
    pub fn sign(self) -> i64 {
        match self {
            OptionLabel::One => -1,
            OptionLabel::Two => 1,
        }
    }

    /// `0`-based index for table lookups keyed by the true answer.
    pub fn index(self) -> usize {
        match self {
            OptionLabel::One => 0,
            OptionLabel::Two => 1,
        }
    }

    pub fn other(self) -> OptionLabel {
        match self {
            OptionLabel::One => OptionLabel::Two,
            OptionLabel::Two => OptionLabel::One,
        }
    }

    /// Parse the external representation used in trial files ("1" or "2").
    pub fn parse(s: &str) -> Result<OptionLabel> {
        match s {
            "1" => Ok(OptionLabel::One),
            "2" => Ok(OptionLabel::Two),
            other => Err(Error::Domain(format!(
                "option label must be \"1\" or \"2\", got {other:?}"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OptionLabel::One => "1",
            OptionLabel::Two => "2",
        }
    }
}

impl std::fmt::Display for OptionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Responses (and optionally confidences) of `n_users` workers on
/// `n_questions` questions, together with the answer key.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    n_users: usize,
    n_questions: usize,
    /// Row-major: `responses[user * n_questions + question]`.
    responses: Vec<OptionLabel>,
    /// Same layout as `responses`; absent for pure-MV input.
    confidences: Option<Vec<u8>>,
    answer_key: Vec<OptionLabel>,
    c_max: u8,
}

impl ResponseMatrix {
    pub fn new(
        n_users: usize,
        n_questions: usize,
        responses: Vec<OptionLabel>,
        confidences: Option<Vec<u8>>,
        answer_key: Vec<OptionLabel>,
        c_max: u8,
    ) -> Result<Self> {
        if responses.len() != n_users * n_questions {
            return Err(Error::Input(format!(
                "expected {} responses for {n_users} users x {n_questions} questions, got {}",
                n_users * n_questions,
                responses.len()
            )));
        }
        if answer_key.len() != n_questions {
            return Err(Error::Input(format!(
                "answer key has {} entries, expected {n_questions}",
                answer_key.len()
            )));
        }
        if c_max < 1 {
            return Err(Error::Input("c_max must be at least 1".into()));
        }
        if let Some(c) = &confidences {
            if c.len() != responses.len() {
                return Err(Error::Input(format!(
                    "confidences ({}) and responses ({}) differ in length",
                    c.len(),
                    responses.len()
                )));
            }
            if let Some(&bad) = c.iter().find(|&&v| v < 1 || v > c_max) {
                return Err(Error::Input(format!(
                    "confidence {bad} outside [1, {c_max}]"
                )));
            }
        }
        Ok(Self {
            n_users,
            n_questions,
            responses,
            confidences,
            answer_key,
            c_max,
        })
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_questions(&self) -> usize {
        self.n_questions
    }

    pub fn c_max(&self) -> u8 {
        self.c_max
    }

    pub fn answer_key(&self) -> &[OptionLabel] {
        &self.answer_key
    }

    pub fn response(&self, user: usize, question: usize) -> OptionLabel {
        self.responses[user * self.n_questions + question]
    }

    pub fn confidence(&self, user: usize, question: usize) -> Option<u8> {
        self.confidences
            .as_ref()
            .map(|c| c[user * self.n_questions + question])
    }

    pub fn has_confidences(&self) -> bool {
        self.confidences.is_some()
    }

    /// Matrix restricted to a subset of users (same questions and key).
    pub fn select_users(&self, users: &[usize]) -> Result<ResponseMatrix> {
        if let Some(&bad) = users.iter().find(|&&u| u >= self.n_users) {
            return Err(Error::Input(format!(
                "user index {bad} out of range (n_users = {})",
                self.n_users
            )));
        }
        let mut responses = Vec::with_capacity(users.len() * self.n_questions);
        let mut confidences = self
            .confidences
            .as_ref()
            .map(|_| Vec::with_capacity(users.len() * self.n_questions));
        for &u in users {
            let row = u * self.n_questions..(u + 1) * self.n_questions;
            responses.extend_from_slice(&self.responses[row.clone()]);
            if let (Some(out), Some(all)) = (confidences.as_mut(), self.confidences.as_ref()) {
                out.extend_from_slice(&all[row]);
            }
        }
        ResponseMatrix::new(
            users.len(),
            self.n_questions,
            responses,
            confidences,
            self.answer_key.clone(),
            self.c_max,
        )
    }
}

/// Crowd answers plus the resulting accuracy and error.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub crowd_answers: Vec<OptionLabel>,
    pub accuracy: f64,
    pub error: f64,
    /// Signed vote sum per question: plain `sum of signs` for MV,
    /// `sum of sign * confidence` for WMV. Diagnostic only.
    pub per_question_margin: Vec<f64>,
}

/// Majority voting: option 1 wins a question only with a strict majority
/// of option 1 votes; ties and option 2 majorities select option 2.
pub fn majority_vote(m: &ResponseMatrix) -> Result<AggregateResult> {
    if m.n_users == 0 {
        return Err(Error::EmptyCrowd);
    }
    let mut crowd = Vec::with_capacity(m.n_questions);
    let mut margins = Vec::with_capacity(m.n_questions);
    for question in 0..m.n_questions {
        let mut count = 0_u64; // number of option 2 votes
        let mut margin = 0_i64;
        for user in 0..m.n_users {
            let r = m.response(user, question);
            count += u64::from(r.unit());
            margin += r.sign();
        }
        // count < N_u / 2 selects option 1; the tie falls to option 2.
        let answer = if 2 * count < m.n_users as u64 {
            OptionLabel::One
        } else {
            OptionLabel::Two
        };
        crowd.push(answer);
        margins.push(margin as f64);
    }
    let accuracy = accuracy_against_key(&crowd, &m.answer_key)?;
    Ok(AggregateResult {
        crowd_answers: crowd,
        accuracy,
        error: 1.0 - accuracy,
        per_question_margin: margins,
    })
}

/// Weighted majority voting: each vote contributes `sign * confidence`;
/// a strictly negative sum selects option 1, otherwise option 2.
pub fn weighted_majority_vote(m: &ResponseMatrix) -> Result<AggregateResult> {
    if m.n_users == 0 {
        return Err(Error::EmptyCrowd);
    }
    if !m.has_confidences() {
        return Err(Error::Input(
            "weighted majority voting requires confidences".into(),
        ));
    }
    let mut crowd = Vec::with_capacity(m.n_questions);
    let mut margins = Vec::with_capacity(m.n_questions);
    for question in 0..m.n_questions {
        let mut sum = 0_i64;
        for user in 0..m.n_users {
            let r = m.response(user, question);
            let c = i64::from(m.confidence(user, question).expect("checked above"));
            sum += r.sign() * c;
        }
        let answer = if sum < 0 {
            OptionLabel::One
        } else {
            OptionLabel::Two
        };
        crowd.push(answer);
        margins.push(sum as f64);
    }
    let accuracy = accuracy_against_key(&crowd, &m.answer_key)?;
    Ok(AggregateResult {
        crowd_answers: crowd,
        accuracy,
        error: 1.0 - accuracy,
        per_question_margin: margins,
    })
}

/// Fraction of positions where the crowd answer matches the key.
pub fn accuracy_against_key(crowd: &[OptionLabel], key: &[OptionLabel]) -> Result<f64> {
    if crowd.len() != key.len() {
        return Err(Error::Input(format!(
            "crowd answers ({}) and key ({}) differ in length",
            crowd.len(),
            key.len()
        )));
    }
    if crowd.is_empty() {
        return Err(Error::Input("cannot score an empty question set".into()));
    }
    let matches = crowd.iter().zip(key).filter(|(c, k)| c == k).count();
    Ok(matches as f64 / key.len() as f64)
}
