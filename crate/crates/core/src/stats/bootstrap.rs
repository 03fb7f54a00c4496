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

//! Network bootstrap of modularity by multinomial resampling of messages.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{leiden, modularity_with_resolution, LeidenConfig};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub iterations: usize,
    pub seed: u64,
    pub resolution: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            iterations: 1000,
            seed: 0,
            resolution: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    /// Leiden modularity of the observed graph.
    pub observed_q: f64,
    pub iterations: usize,
    pub mean: f64,
    /// Sample standard deviation across replicates.
    pub sdev: f64,
    pub min: f64,
    pub max: f64,
    pub seed: u64,
}

impl BootstrapResult {
    /// `mean ± 2·sdev`, four decimals.
    pub fn label(&self) -> String {
        format!("{:.4} ± {:.4}", self.mean, 2.0 * self.sdev)
    }
}

/// Resamples the graph's `Σ w_e` messages with replacement over its edges
/// (probability proportional to observed weight), rebuilds the graph from
/// the resampled counts, re-runs seeded Leiden and records modularity.
///
/// Replicates of a connected graph are reduced to their largest connected
/// component, mirroring how the observed graph was built; replicates of a
/// disconnected graph keep every node that still has an edge. Iteration `i`
/// draws from seed `seed + i + 1`, so results do not depend on scheduling.
pub fn bootstrap_modularity(
    g: &WeightedGraph,
    config: &BootstrapConfig,
) -> Result<BootstrapResult> {
    if g.total_weight() == 0 {
        return Err(Error::InvalidInput(
            "bootstrap needs a graph with at least one edge".into(),
        ));
    }
    if config.iterations == 0 {
        return Err(Error::InvalidInput("iterations must be at least 1".into()));
    }
    let edges: Vec<_> = g.edges().collect();
    let connected = g.is_connected();
    let leiden_q = |graph: &WeightedGraph, s: u64| {
        let cfg = LeidenConfig {
            resolution: config.resolution,
            seed: s,
            ..LeidenConfig::default()
        };
        let p = leiden(graph, &cfg);
        modularity_with_resolution(graph, &p, config.resolution).expect("partition sized to graph")
    };
    let observed_q = leiden_q(g, config.seed);

    let qs: Vec<f64> = (0..config.iterations as u64)
        .into_par_iter()
        .map(|i| {
            let it_seed = config.seed.wrapping_add(i + 1);
            let mut rng = seed::rng(seed::derive(it_seed, 0));
            let mut remaining_messages = g.total_weight();
            let mut remaining_weight = g.total_weight();
            let mut resampled = Vec::with_capacity(edges.len());
            for &(u, v, w) in &edges {
                if remaining_messages == 0 {
                    break;
                }
                let p = (w as f64 / remaining_weight as f64).min(1.0);
                let k = if p >= 1.0 {
                    remaining_messages
                } else {
                    Binomial::new(remaining_messages, p)
                        .expect("valid binomial parameters")
                        .sample(&mut rng)
                };
                remaining_messages -= k;
                remaining_weight -= w;
                if k > 0 {
                    resampled.push((u, v, k));
                }
            }
            let full = WeightedGraph::assemble(g.ids().to_vec(), resampled);
            let replicate = if connected {
                full.largest_connected_component()
            } else {
                full.retain(|v| full.degree(v) > 0)
            };
            leiden_q(&replicate, seed::derive(it_seed, 1))
        })
        .collect();

    let n = qs.len() as f64;
    let mean = qs.iter().sum::<f64>() / n;
    let sdev = if qs.len() > 1 {
        (qs.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(BootstrapResult {
        observed_q,
        iterations: qs.len(),
        mean,
        sdev,
        min: qs.iter().copied().fold(f64::INFINITY, f64::min),
        max: qs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cliques(k: u32, w: u64) -> WeightedGraph {
        let mut edges = Vec::new();
        for b in 0..2 {
            for i in 0..k {
                for j in (i + 1)..k {
                    edges.push((b * k + i, b * k + j, w));
                }
            }
        }
        let ids = (0..2 * k).map(|i| format!("n{i:02}")).collect();
        WeightedGraph::from_indexed_edges(ids, edges).unwrap()
    }

    #[test]
    fn deterministic_and_ordered() {
        let g = cliques(6, 3);
        let cfg = BootstrapConfig {
            iterations: 30,
            seed: 9,
            ..Default::default()
        };
        let a = bootstrap_modularity(&g, &cfg).unwrap();
        let b = bootstrap_modularity(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.min <= a.mean && a.mean <= a.max);
        assert_eq!(a.iterations, 30);
    }

    #[test]
    fn label_is_two_sdev() {
        let r = BootstrapResult {
            observed_q: 0.807,
            iterations: 1000,
            mean: 0.804,
            sdev: 0.00185,
            min: 0.79,
            max: 0.81,
            seed: 0,
        };
        assert_eq!(r.label(), "0.8040 ± 0.0037");
    }

    #[test]
    fn rejects_edgeless_and_zero_iterations() {
        let g = WeightedGraph::from_unit_edges(3, []);
        assert!(bootstrap_modularity(&g, &BootstrapConfig::default()).is_err());
        let g = cliques(3, 1);
        let cfg = BootstrapConfig {
            iterations: 0,
            ..Default::default()
        };
        assert!(bootstrap_modularity(&g, &cfg).is_err());
    }
}
