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

//! Edge placement primitives shared by the block-model samplers.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::seed::SeededRng;

pub(crate) type Edge = (u32, u32);

pub(crate) fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Maps `k` in `0..C(n,2)` to the `k`-th pair `(i, j)`, `i < j`, in
/// row-major order.
fn pair_at(k: u64, n: u64) -> Edge {
    // Row i holds n − 1 − i pairs; find i by closed form then correct.
    let nf = n as f64;
    let kf = k as f64;
    let mut i = ((2.0 * nf - 1.0 - ((2.0 * nf - 1.0).powi(2) - 8.0 * kf).max(0.0).sqrt()) / 2.0)
        .floor() as u64;
    let row_start = |i: u64| i * (2 * n - i - 1) / 2;
    while i > 0 && row_start(i) > k {
        i -= 1;
    }
    while row_start(i + 1) <= k {
        i += 1;
    }
    let j = i + 1 + (k - row_start(i));
    (i as u32, j as u32)
}

/// Exactly `m` distinct edges among `n` nodes, uniformly at random.
pub(crate) fn uniform_edges(
    n: usize,
    m: u64,
    rng: &mut SeededRng,
    context: &str,
) -> Result<Vec<Edge>> {
    let total = pairs(n);
    if m > total {
        return Err(Error::InfeasibleBudget {
            context: context.to_owned(),
            requested: m,
            available: total,
        });
    }
    Ok(sample_indices(total, m, rng)
        .into_iter()
        .map(|k| pair_at(k, n as u64))
        .collect())
}

/// Exactly `count` distinct pairs from the product `0..a × 0..b`.
pub(crate) fn uniform_cross_edges(
    a: usize,
    b: usize,
    count: u64,
    rng: &mut SeededRng,
    context: &str,
) -> Result<Vec<Edge>> {
    let total = (a as u64) * (b as u64);
    if count > total {
        return Err(Error::InfeasibleBudget {
            context: context.to_owned(),
            requested: count,
            available: total,
        });
    }
    Ok(sample_indices(total, count, rng)
        .into_iter()
        .map(|k| ((k / b as u64) as u32, (k % b as u64) as u32))
        .collect())
}

/// `amount` distinct values from `0..length`, sorted.
fn sample_indices(length: u64, amount: u64, rng: &mut SeededRng) -> Vec<u64> {
    let mut out: Vec<u64> = index::sample(rng, length as usize, amount as usize)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    out.sort_unstable();
    out
}
