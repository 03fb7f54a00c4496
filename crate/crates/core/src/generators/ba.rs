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

//! Barabási–Albert preferential attachment.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seed::{self, SeededRng};

use super::wiring::{pairs, Edge};

/// Seeds an `(m+1)`-clique, then attaches each further node to `m` distinct
/// existing nodes chosen with probability proportional to degree.
pub(crate) fn ba_edges(n: usize, m: usize, rng: &mut SeededRng) -> Vec<Edge> {
    debug_assert!(m >= 1 && m < n);
    let mut edges = Vec::with_capacity(pairs(m + 1) as usize + m * (n - m - 1));
    // Every edge endpoint once: uniform draws are degree-proportional.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..=m as u32 {
        for j in (i + 1)..=m as u32 {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets: Vec<u32> = Vec::with_capacity(m);
    for v in (m + 1) as u32..n as u32 {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    edges
}

/// Unit-weight Barabási–Albert graph on nodes `"0"..n`. The edge count is
/// exactly `C(m+1, 2) + m·(n − m − 1)`.
pub fn sample_ba(n: usize, m: usize, seed: u64) -> Result<WeightedGraph> {
    if m == 0 || m >= n {
        return Err(Error::InvalidInput(format!(
            "attachment count m must satisfy 1 <= m < n (m = {m}, n = {n})"
        )));
    }
    let edges = ba_edges(n, m, &mut seed::rng(seed));
    Ok(WeightedGraph::from_unit_edges(n, edges))
}

/// Attachment count whose BA graph on `n` nodes has about `budget` edges:
/// half the mean degree `2·budget/n`, at least 1. Zero for blocks of one or
/// two nodes, whose edge set is forced.
pub fn attachment_for_budget(n: usize, budget: u64) -> usize {
    if n <= 2 {
        return 0;
    }
    let m = (budget as f64 / n as f64).round() as usize;
    m.clamp(1, n - 1)
}

/// BA graph on `n` nodes with exactly `budget` edges: the plain BA edge set
/// is topped up by degree-proportional pairs or pruned uniformly at random.
pub(crate) fn ba_with_budget(
    n: usize,
    budget: u64,
    rng: &mut SeededRng,
    context: &str,
) -> Result<Vec<Edge>> {
    let available = pairs(n);
    if budget > available {
        return Err(Error::InfeasibleBudget {
            context: context.to_owned(),
            requested: budget,
            available,
        });
    }
    if budget == 0 {
        return Ok(Vec::new());
    }
    if n <= 2 {
        return Ok(vec![(0, 1)]);
    }
    let mut edges = ba_edges(n, attachment_for_budget(n, budget), rng);
    let target = budget as usize;
    if edges.len() > target {
        edges.shuffle(rng);
        edges.truncate(target);
        edges.sort_unstable();
    } else if edges.len() < target {
        top_up(n, &mut edges, target, rng);
    }
    Ok(edges)
}

fn top_up(n: usize, edges: &mut Vec<Edge>, target: usize, rng: &mut SeededRng) {
    let mut present: HashSet<Edge> = edges.iter().copied().collect();
    let mut endpoints: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut attempts = 0usize;
    let limit = 50 * (target - edges.len()) + 1000;
    while edges.len() < target && attempts < limit {
        attempts += 1;
        let a = endpoints[rng.gen_range(0..endpoints.len())];
        let b = endpoints[rng.gen_range(0..endpoints.len())];
        let e = (a.min(b), a.max(b));
        if a != b && present.insert(e) {
            edges.push(e);
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    if edges.len() < target {
        // Near-complete blocks: draw the rest uniformly from missing pairs.
        let mut missing: Vec<Edge> = (0..n as u32)
            .flat_map(|i| ((i + 1)..n as u32).map(move |j| (i, j)))
            .filter(|e| !present.contains(e))
            .collect();
        missing.shuffle(rng);
        let need = target - edges.len();
        edges.extend(missing.into_iter().take(need));
    }
}
