//! Goodness-of-fit tests and sweep smoothing.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

fn upper_tail(statistic: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof).map(|c| c.sf(statistic)).unwrap_or(f64::NAN)
}

/// Pearson test of `counts` against the uniform distribution on its cells.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquare {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    if k < 2 || total == 0 {
        return ChiSquare {
            statistic: 0.0,
            dof: 0.0,
            p_value: 1.0,
        };
    }
    let expected = total as f64 / k as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = (k - 1) as f64;
    ChiSquare {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// Homogeneity test of two count vectors over the same cells. Cells empty
/// in both samples are dropped.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len(), "samples must share their cells");
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        let (ea, eb) = (na * col / total, nb * col / total);
        statistic += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    let dof = cells.saturating_sub(1) as f64;
    ChiSquare {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// Standard error of a proportion estimated from `trials` Bernoulli draws.
pub fn binomial_stderr(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

/// Running median of width 3; the two end points are kept.
pub fn median3(xs: &[f64]) -> Vec<f64> {
    let mut out = xs.to_vec();
    for i in 1..xs.len().saturating_sub(1) {
        let mut w = [xs[i - 1], xs[i], xs[i + 1]];
        w.sort_by(f64::total_cmp);
        out[i] = w[1];
    }
    out
}

pub fn is_nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] <= w[1])
}
