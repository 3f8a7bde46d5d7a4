//! Independent oracles shared by the integration and acceptance suites.
//!
//! Nothing here calls into the library's numerical paths: tail
//! probabilities come from Gauss-Legendre quadrature of the densities,
//! aggregation from from-scratch counting loops, ROC areas from pairwise
//! rank comparisons, and aggregate-vote distributions from exact discrete
//! convolution. These exist to catch the implementation lying, so they
//! must stay boring and literal.

#![allow(dead_code)]

use cobacs_core::OptionLabel;

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let pk = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrate `f` over `[a, b]` with `panels` composite 40-point rules,
/// Kahan-summed.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(40);
    let width = (b - a) / panels as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        for (x, w) in nodes.iter().zip(&weights) {
            let term = w * half * f(mid + half * x);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    sum
}

fn normal_density(t: f64) -> f64 {
    (2.0 * std::f64::consts::PI).sqrt().recip() * (-0.5 * t * t).exp()
}

/// Gaussian upper tail by quadrature of the density.
pub fn q_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - q_oracle(-x);
    }
    // Truncation at x + 45 leaves a relative remainder below e^-1000.
    integrate(normal_density, x, x + 45.0, 90)
}

/// Student-t upper tail by quadrature, via the substitution
/// `u = sqrt(df) tan(theta)` which maps the whole line to a finite
/// interval: P(T > t) is a ratio of cos^(df-1) integrals.
pub fn student_t_upper_oracle(t: f64, df: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let theta_t = (t / df.sqrt()).atan();
    let g = |theta: f64| theta.cos().powf(df - 1.0);
    let total = integrate(g, -half_pi, half_pi, 120);
    let tail = integrate(g, theta_t, half_pi, 120);
    tail / total
}

/// Pearson correlation by the direct textbook formula.
pub fn pearson_oracle(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va.sqrt() * vb.sqrt())
}

// ---------------------------------------------------------------------------
// Naive aggregation
// ---------------------------------------------------------------------------

/// Majority vote over one question's responses, counting each option
/// separately: option 1 needs strictly more votes than option 2.
pub fn naive_mv_column(responses: &[OptionLabel]) -> OptionLabel {
    let mut ones = 0u32;
    let mut twos = 0u32;
    for r in responses {
        match r {
            OptionLabel::One => ones += 1,
            OptionLabel::Two => twos += 1,
        }
    }
    if ones > twos {
        OptionLabel::One
    } else {
        OptionLabel::Two
    }
}

/// Weighted vote over one question: negative totals pick option 1.
pub fn naive_wmv_column(responses: &[OptionLabel], confidences: &[u8]) -> OptionLabel {
    let mut total: i64 = 0;
    for (r, &c) in responses.iter().zip(confidences) {
        match r {
            OptionLabel::One => total -= i64::from(c),
            OptionLabel::Two => total += i64::from(c),
        }
    }
    if total < 0 {
        OptionLabel::One
    } else {
        OptionLabel::Two
    }
}

// ---------------------------------------------------------------------------
// ROC oracles
// ---------------------------------------------------------------------------

/// AUROC2 by pairwise rank comparison: the probability a random correct
/// trial out-rates a random incorrect one, ties counting half.
pub fn auroc2_rank_oracle(correct_conf: &[u8], incorrect_conf: &[u8]) -> f64 {
    let mut score = 0.0;
    for &c in correct_conf {
        for &i in incorrect_conf {
            score += match c.cmp(&i) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    score / (correct_conf.len() * incorrect_conf.len()) as f64
}

/// AUROC1 by the same rank comparison on signed ratings, positive class
/// being "true answer is option 2".
pub fn auroc1_rank_oracle(pos_ratings: &[i64], neg_ratings: &[i64]) -> f64 {
    let mut score = 0.0;
    for &p in pos_ratings {
        for &n in neg_ratings {
            score += match p.cmp(&n) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    score / (pos_ratings.len() * neg_ratings.len()) as f64
}

// ---------------------------------------------------------------------------
// Exact distribution of iid discrete sums, with an inverse-CDF sampler
// ---------------------------------------------------------------------------

/// Probability mass function on integer support `offset..offset+pmf.len()`.
pub struct DiscretePmf {
    pub offset: i64,
    pub pmf: Vec<f64>,
}

impl DiscretePmf {
    /// Exact n-fold convolution of a single-draw distribution given as
    /// (value, probability) cells.
    pub fn iid_sum(cells: &[(i64, f64)], n: usize) -> DiscretePmf {
        assert!(!cells.is_empty());
        let min: i64 = cells.iter().map(|c| c.0).min().unwrap();
        let max: i64 = cells.iter().map(|c| c.0).max().unwrap();
        let mut current = DiscretePmf {
            offset: 0,
            pmf: vec![1.0],
        };
        for _ in 0..n {
            let new_offset = current.offset + min;
            let new_len = current.pmf.len() + (max - min) as usize;
            let mut next = vec![0.0; new_len];
            for (i, &p) in current.pmf.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for &(v, pv) in cells {
                    next[i + (v - min) as usize] += p * pv;
                }
            }
            current = DiscretePmf {
                offset: new_offset,
                pmf: next,
            };
        }
        current
    }

    /// Exact probability that the sum is at or above `threshold`.
    pub fn prob_at_least(&self, threshold: f64) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(i, _)| (self.offset + *i as i64) as f64 >= threshold)
            .map(|(_, p)| p)
            .sum()
    }

    /// Cumulative table for inverse-CDF sampling.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }

    /// Draw one value using a uniform in [0, 1).
    pub fn sample(&self, cdf: &[f64], u: f64) -> i64 {
        let idx = cdf.partition_point(|&c| c < u);
        self.offset + idx.min(self.pmf.len() - 1) as i64
    }
}

// ---------------------------------------------------------------------------
// Exact one-sided sign test
// ---------------------------------------------------------------------------

/// P(Bin(n, 1/2) >= wins), exact in log space.
pub fn sign_test_p(wins: usize, n: usize) -> f64 {
    assert!(wins <= n);
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    let ln_half_n = n as f64 * 0.5f64.ln();
    (wins..=n)
        .map(|k| (ln_fact[n] - ln_fact[k] - ln_fact[n - k] + ln_half_n).exp())
        .sum::<f64>()
        .min(1.0)
}

#[test]
fn oracle_self_checks() {
    // Quadrature of a plain polynomial is exact.
    let cube = integrate(|x| x * x * x + 1.0, 0.0, 2.0, 4);
    assert!((cube - 6.0).abs() < 1e-13);
    // Known Gaussian tail anchors.
    assert!((q_oracle(0.0) - 0.5).abs() < 1e-14);
    let total = q_oracle(-6.0) + q_oracle(6.0);
    assert!((total - 1.0).abs() < 1e-13);
    // Student-t with one degree of freedom is Cauchy: P(T > 1) = 1/4.
    assert!((student_t_upper_oracle(1.0, 1.0) - 0.25).abs() < 1e-12);
    // Sign test sanity: P(Bin(2, 1/2) >= 1) = 3/4.
    assert!((sign_test_p(1, 2) - 0.75).abs() < 1e-12);
    assert!((sign_test_p(0, 5) - 1.0).abs() < 1e-12);
    // Exact iid-sum distribution of two fair coins valued +-1.
    let d = DiscretePmf::iid_sum(&[(-1, 0.5), (1, 0.5)], 2);
    assert_eq!(d.offset, -2);
    assert!((d.pmf[0] - 0.25).abs() < 1e-15);
    assert!((d.pmf[1] - 0.0).abs() < 1e-15);
    assert!((d.pmf[2] - 0.5).abs() < 1e-15);
    assert!((d.prob_at_least(0.0) - 0.75).abs() < 1e-15);
}
