// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest effective sample size tested with the exact null distribution.
pub const EXACT_LIMIT: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Number of nonzero differences.
    pub n_effective: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    pub p_two_sided: f64,
    pub method: WilcoxonMethod,
}

/// Nonzero differences ranked by absolute value, ties sharing the average
/// rank. Returns `(rank, is_positive)` pairs.
pub fn signed_ranks(diffs: &[f64]) -> Vec<(f64, bool)> {
    let mut nz: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    nz.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut out = Vec::with_capacity(nz.len());
    let mut i = 0;
    while i < nz.len() {
        let mut j = i;
        while j + 1 < nz.len() && nz[j + 1].abs() == nz[i].abs() {
            j += 1;
        }
        let rank = (i + j + 2) as f64 / 2.0;
        out.extend(nz[i..=j].iter().map(|d| (rank, *d > 0.0)));
        i = j + 1;
    }
    out
}

type Prepared = (Vec<(f64, bool)>, f64, f64);

fn prepare(diffs: &[f64]) -> Result<Prepared> {
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidInput("differences must be finite".into()));
    }
    let ranks = signed_ranks(diffs);
    if ranks.is_empty() {
        return Err(Error::AllZeroDifferences);
    }
    let w_plus: f64 = ranks.iter().filter(|r| r.1).map(|r| r.0).sum();
    let n = ranks.len() as f64;
    Ok((ranks, w_plus, n * (n + 1.0) / 2.0 - w_plus))
}

/// Two-sided test with the exact null distribution of `W+` under random
/// signs, tie-averaged ranks included.
pub fn wilcoxon_exact(diffs: &[f64]) -> Result<WilcoxonResult> {
    let (ranks, w_plus, w_minus) = prepare(diffs)?;
    // Doubled ranks are integers even with half-rank ties.
    let doubled: Vec<usize> = ranks.iter().map(|r| (r.0 * 2.0).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0f64; max + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let total = 2f64.powi(doubled.len() as i32);
    let observed = (w_plus * 2.0).round() as usize;
    let lower: f64 = counts[..=observed].iter().sum::<f64>() / total;
    let upper: f64 = counts[observed..].iter().sum::<f64>() / total;
    Ok(WilcoxonResult {
        n_effective: ranks.len(),
        w_plus,
        w_minus,
        p_two_sided: (2.0 * lower.min(upper)).min(1.0),
        method: WilcoxonMethod::Exact,
    })
}

/// Two-sided normal approximation with tie and continuity corrections.
pub fn wilcoxon_normal(diffs: &[f64]) -> Result<WilcoxonResult> {
    let (ranks, w_plus, w_minus) = prepare(diffs)?;
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < ranks.len() {
        let mut j = i;
        while j + 1 < ranks.len() && ranks[j + 1].0 == ranks[i].0 {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    Ok(WilcoxonResult {
        n_effective: ranks.len(),
        w_plus,
        w_minus,
        p_two_sided: libm::erfc(z / std::f64::consts::SQRT_2).min(1.0),
        method: WilcoxonMethod::NormalApprox,
    })
}

/// Wilcoxon signed-rank test on paired differences. Zeros are dropped; the
/// exact distribution is used up to [`EXACT_LIMIT`] nonzero differences.
pub fn wilcoxon_signed_rank(diffs: &[f64]) -> Result<WilcoxonResult> {
    let n = diffs.iter().filter(|d| **d != 0.0).count();
    if n <= EXACT_LIMIT {
        wilcoxon_exact(diffs)
    } else {
        wilcoxon_normal(diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive_five() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(r.w_plus, 15.0);
        assert_eq!(r.method, WilcoxonMethod::Exact);
        assert!((r.p_two_sided - 2.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_ties() {
        let r = wilcoxon_signed_rank(&[1.0, -1.0, 2.0, -2.0]).unwrap();
        assert_eq!(r.w_plus, 5.0);
        assert_eq!(r.w_minus, 5.0);
        assert_eq!(r.p_two_sided, 1.0);
    }

    #[test]
    fn zeros_dropped_and_all_zero_rejected() {
        let r = wilcoxon_signed_rank(&[0.0, 1.0, 0.0, 2.0]).unwrap();
        assert_eq!(r.n_effective, 2);
        assert!(matches!(
            wilcoxon_signed_rank(&[0.0, 0.0]),
            Err(Error::AllZeroDifferences)
        ));
        assert!(matches!(
            wilcoxon_signed_rank(&[]),
            Err(Error::AllZeroDifferences)
        ));
    }

    #[test]
    fn average_ranks() {
        let r = signed_ranks(&[3.0, -1.0, 1.0, 2.0]);
        let ranks: Vec<f64> = r.iter().map(|x| x.0).collect();
        assert_eq!(ranks, vec![1.5, 1.5, 3.0, 4.0]);
    }

    #[test]
    fn large_samples_use_normal_path() {
        let diffs: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let r = wilcoxon_signed_rank(&diffs).unwrap();
        assert_eq!(r.method, WilcoxonMethod::NormalApprox);
        assert!(r.p_two_sided < 1e-6);
    }
}
