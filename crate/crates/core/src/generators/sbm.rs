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

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seed;

/// Block sizes and a symmetric matrix of edge probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    sizes: Vec<usize>,
    probabilities: Vec<Vec<f64>>,
}

impl SbmSpec {
    pub fn new(sizes: Vec<usize>, probabilities: Vec<Vec<f64>>) -> Result<Self> {
        let k = sizes.len();
        if sizes.contains(&0) {
            return Err(Error::InvalidInput("block sizes must be at least 1".into()));
        }
        if probabilities.len() != k || probabilities.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput(format!(
                "connectivity matrix must be {k}x{k}"
            )));
        }
        for (i, row) in probabilities.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidInput(format!(
                        "probability {p} outside [0, 1]"
                    )));
                }
                if p != probabilities[j][i] {
                    return Err(Error::InvalidInput(
                        "connectivity matrix must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(Self {
            sizes,
            probabilities,
        })
    }

    /// `within` on the diagonal, `between` elsewhere.
    pub fn planted(sizes: Vec<usize>, within: f64, between: f64) -> Result<Self> {
        let k = sizes.len();
        let probabilities = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { within } else { between })
                    .collect()
            })
            .collect();
        Self::new(sizes, probabilities)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probability(&self, a: usize, b: usize) -> f64 {
        self.probabilities[a][b]
    }

    pub fn node_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Block of each node, nodes numbered block by block.
    pub fn block_labels(&self) -> Vec<u32> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b as u32, s))
            .collect()
    }

    pub fn planted_partition(&self) -> Partition {
        Partition::from_labels(self.block_labels())
    }
}

/// Samples every node pair independently with its block-pair probability.
/// Nodes are labelled `"0"..n` block by block; weights are 1.
pub fn sample_sbm(spec: &SbmSpec, seed: u64) -> WeightedGraph {
    let labels = spec.block_labels();
    let n = labels.len();
    let mut rng = seed::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = spec.probability(labels[u] as usize, labels[v] as usize);
            if p > 0.0 && rng.gen::<f64>() < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    WeightedGraph::from_unit_edges(n, edges)
}
