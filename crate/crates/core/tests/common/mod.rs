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

#![allow(dead_code)]

use orgnet::community::Partition;
use orgnet::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i:04}")).collect()
}

/// G(n, p) with weights uniform in `1..=max_w`; isolated nodes kept.
pub fn random_graph(n: usize, p: f64, max_w: u64, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((u, v, rng.gen_range(1..=max_w)));
            }
        }
    }
    WeightedGraph::from_indexed_edges(ids(n), edges).unwrap()
}

/// Two disjoint `k`-cliques with every edge weighing `w`.
pub fn two_cliques(k: usize, w: u64) -> WeightedGraph {
    let mut edges = Vec::new();
    for block in 0..2u32 {
        let base = block * k as u32;
        for i in 0..k as u32 {
            for j in (i + 1)..k as u32 {
                edges.push((base + i, base + j, w));
            }
        }
    }
    WeightedGraph::from_indexed_edges(ids(2 * k), edges).unwrap()
}

/// Dense symmetric weight matrix.
pub fn adjacency(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        a[u as usize][v as usize] = w as f64;
        a[v as usize][u as usize] = w as f64;
    }
    a
}

/// Newman modularity by the double sum over ordered node pairs.
pub fn modularity_oracle(g: &WeightedGraph, labels: &[u32]) -> f64 {
    let a = adjacency(g);
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            extend(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    extend(&mut prefix, 0, n, &mut out);
    out
}

/// Highest modularity over all partitions, by exhaustion.
pub fn brute_force_max_modularity(g: &WeightedGraph) -> f64 {
    set_partitions(g.node_count())
        .iter()
        .map(|labels| modularity_oracle(g, labels))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn partition_of(labels: &[u32]) -> Partition {
    Partition::from_labels(labels.iter().copied())
}

/// Adjusted Rand index from pair counts over all `n(n-1)/2` node pairs.
pub fn ari_oracle(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in (i + 1)..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs = both + only_a + only_b + neither;
    let same_a = both + only_a;
    let same_b = both + only_b;
    let expected = same_a * same_b / pairs;
    let max = 0.5 * (same_a + same_b);
    (both - expected) / (max - expected)
}

/// Null distribution of `W+` by enumerating all `2^n` sign assignments of
/// `ranks`; returns the two-sided p-value of `observed`.
pub fn wilcoxon_enumerated_p(ranks: &[f64], observed: f64) -> f64 {
    let n = ranks.len();
    let total = 1u64 << n;
    let (mut lower, mut upper) = (0u64, 0u64);
    for mask in 0..total {
        let w: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if w <= observed + 1e-9 {
            lower += 1;
        }
        if w >= observed - 1e-9 {
            upper += 1;
        }
    }
    (2.0 * lower.min(upper) as f64 / total as f64).min(1.0)
}

/// Midranks of `|x|`, by direct counting.
pub fn midranks(abs: &[f64]) -> Vec<f64> {
    abs.iter()
        .map(|&x| {
            let below = abs.iter().filter(|&&y| y < x).count() as f64;
            let equal = abs.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Receipt CSV for `orgs` organizations over January to `months` of 2021.
/// Each month has `people` senders in two halves that mostly write within
/// their half.
pub fn receipts_csv(
    orgs: &[&str],
    months: u32,
    people: usize,
    per_month: usize,
    seed: u64,
) -> String {
    let mut rng = rng(seed);
    let mut out = String::from("org_id,timestamp,sender,recipients\n");
    let half = people / 2;
    for org in orgs {
        for month in 1..=months {
            for _ in 0..per_month {
                let a = rng.gen_range(0..people);
                let b = if rng.gen::<f64>() < 0.8 {
                    (a / half) * half + rng.gen_range(0..half)
                } else {
                    rng.gen_range(0..people)
                };
                let day = rng.gen_range(1..=28);
                out.push_str(&format!(
                    "{org},2021-{month:02}-{day:02}T12:00:00Z,p{a:02},p{b:02}\n"
                ));
            }
        }
    }
    out
}
