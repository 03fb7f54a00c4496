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

//! Side-by-side structural comparison of an observed and a generated graph.

use serde::{Deserialize, Serialize};

use crate::community::{leiden, modularity, LeidenConfig};
use crate::graph::{NodeIndex, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub seed: u64,
    /// BFS sources for the average path length estimate.
    pub path_samples: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            path_samples: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub node_count: usize,
    pub edge_count: usize,
    pub total_weight: u64,
    /// Estimated on the largest connected component; absent below two nodes.
    pub avg_path_length: Option<f64>,
    /// Modularity of the root Leiden partition.
    pub modularity: f64,
    pub communities: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub real: GraphSummary,
    pub generated: GraphSummary,
    /// Two-sample Kolmogorov–Smirnov distance between unweighted degree
    /// distributions.
    pub degree_ks: f64,
    /// Generated minus real.
    pub path_length_diff: Option<f64>,
    pub node_delta: i64,
    pub edge_delta: i64,
    pub weight_delta: i64,
    /// Generated minus real root-Leiden modularity.
    pub delta_q: f64,
}

fn unweighted_degrees(g: &WeightedGraph) -> Vec<u64> {
    let mut d: Vec<u64> = (0..g.node_count() as NodeIndex)
        .map(|v| g.neighbor_count(v) as u64)
        .collect();
    d.sort_unstable();
    d
}

/// `sup_x |F_a(x) − F_b(x)|` over the empirical CDFs of unweighted degree.
pub fn degree_ks_distance(a: &WeightedGraph, b: &WeightedGraph) -> f64 {
    let (x, y) = (unweighted_degrees(a), unweighted_degrees(b));
    if x.is_empty() || y.is_empty() {
        return if x.len() == y.len() { 0.0 } else { 1.0 };
    }
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        best = best.max((i as f64 / nx - j as f64 / ny).abs());
    }
    best
}

fn summarize(g: &WeightedGraph, config: &CompareConfig) -> GraphSummary {
    let partition = leiden(g, &LeidenConfig::with_seed(config.seed));
    let lcc = g.largest_connected_component();
    GraphSummary {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        total_weight: g.total_weight(),
        avg_path_length: lcc
            .approx_avg_path_length(config.path_samples, config.seed)
            .ok(),
        modularity: modularity(g, &partition).expect("partition sized to graph"),
        communities: partition.num_communities(),
    }
}

pub fn compare_graphs(
    real: &WeightedGraph,
    generated: &WeightedGraph,
    config: &CompareConfig,
) -> ComparisonReport {
    let r = summarize(real, config);
    let g = summarize(generated, config);
    ComparisonReport {
        degree_ks: degree_ks_distance(real, generated),
        path_length_diff: r.avg_path_length.zip(g.avg_path_length).map(|(a, b)| b - a),
        node_delta: g.node_count as i64 - r.node_count as i64,
        edge_delta: g.edge_count as i64 - r.edge_count as i64,
        weight_delta: g.total_weight as i64 - r.total_weight as i64,
        delta_q: g.modularity - r.modularity,
        real: r,
        generated: g,
    }
}
