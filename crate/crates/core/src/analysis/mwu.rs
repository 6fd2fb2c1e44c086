//! Mann–Whitney U with midranks for ties.
//!
//! When `|a|·|b| <= EXACT_LIMIT` the two-sided p-value comes from the exact
//! permutation distribution of the rank sum (given the observed ties);
//! otherwise from the normal approximation with tie-corrected variance and
//! continuity correction.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::AnalysisError;

pub const EXACT_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    /// Continuity-corrected normal deviate (0 when the variance vanishes).
    pub z: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// Twice the midrank of every value of `a` then `b` in the pooled sample,
/// plus the tie-group sizes.
fn doubled_midranks(a: &[f64], b: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut pooled: Vec<(f64, usize)> = a.iter().chain(b).copied().zip(0..).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = vec![0u64; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // Positions i+1 ..= j share the average rank (i + 1 + j) / 2.
        let doubled = (i + 1 + j) as u64;
        for &(_, orig) in &pooled[i..j] {
            ranks[orig] = doubled;
        }
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

fn check(a: &[f64], b: &[f64]) -> Result<(), AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::EmptySample);
    }
    Ok(())
}

struct Ranked {
    n1: f64,
    n2: f64,
    u: f64,
    sigma: f64,
}

fn rank(a: &[f64], b: &[f64]) -> (Ranked, Vec<u64>) {
    let (ranks, ties) = doubled_midranks(a, b);
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;
    let n = n1 + n2;
    let rank_sum_a = ranks[..a.len()].iter().sum::<u64>() as f64 / 2.0;
    let u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let sigma = if var > 0.0 { var.sqrt() } else { 0.0 };
    (Ranked { n1, n2, u, sigma }, ranks)
}

fn continuity_z(r: &Ranked) -> f64 {
    let diff = r.u - r.n1 * r.n2 / 2.0;
    if r.sigma == 0.0 || diff.abs() <= 0.5 {
        0.0
    } else {
        (diff.abs() - 0.5).copysign(diff) / r.sigma
    }
}

/// U, z and two-sided p, choosing the exact path for small samples.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney, AnalysisError> {
    check(a, b)?;
    let (r, ranks) = rank(a, b);
    let z = continuity_z(&r);
    if a.len() * b.len() <= EXACT_LIMIT {
        Ok(MannWhitney {
            u: r.u,
            z,
            p_value: exact_p_from_ranks(&ranks, a.len()),
            exact: true,
        })
    } else {
        Ok(MannWhitney {
            u: r.u,
            z,
            p_value: erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0),
            exact: false,
        })
    }
}

/// The normal-approximation result regardless of sample size.
pub fn mann_whitney_u_approx(a: &[f64], b: &[f64]) -> Result<MannWhitney, AnalysisError> {
    check(a, b)?;
    let (r, _) = rank(a, b);
    let z = continuity_z(&r);
    Ok(MannWhitney {
        u: r.u,
        z,
        p_value: erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0),
        exact: false,
    })
}

/// Exact two-sided p regardless of sample size: P(|S - E[S]| >= |s - E[S]|)
/// over all equally likely splits of the pooled midranks.
pub fn mann_whitney_exact_p(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    check(a, b)?;
    let (ranks, _) = doubled_midranks(a, b);
    Ok(exact_p_from_ranks(&ranks, a.len()))
}

fn exact_p_from_ranks(ranks: &[u64], n1: usize) -> f64 {
    let n = ranks.len();
    // Count subsets of the smaller group's size; the statistic is symmetric.
    let (m, observed): (usize, u64) = if n1 <= n - n1 {
        (n1, ranks[..n1].iter().sum())
    } else {
        (n - n1, ranks[n1..].iter().sum())
    };
    let max_sum: u64 = {
        let mut sorted = ranks.to_vec();
        sorted.sort_unstable();
        sorted[n - m..].iter().sum()
    };
    let width = max_sum as usize + 1;
    // ways[j * width + s]: subsets of size j with doubled rank sum s.
    let mut ways = vec![0u64; (m + 1) * width];
    ways[0] = 1;
    for &r in ranks {
        let r = r as usize;
        for j in (1..=m).rev() {
            let (lower, upper) = ways.split_at_mut(j * width);
            let prev = &lower[(j - 1) * width..];
            let cur = &mut upper[..width];
            for s in (r..width).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let dist = &ways[m * width..];
    let total: u64 = dist.iter().sum();
    // Doubled expected sum is m (n + 1); compare doubled deviations in integers.
    let center = (m * (n + 1)) as i64;
    let obs_dev = (observed as i64 - center).abs();
    let extreme: u64 = dist
        .iter()
        .enumerate()
        .filter(|&(s, _)| (s as i64 - center).abs() >= obs_dev)
        .map(|(_, &c)| c)
        .sum();
    extreme as f64 / total as f64
}
