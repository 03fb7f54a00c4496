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

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

use super::Partition;

/// Newman modularity of `partition` on `g`, with weighted adjacency and
/// weighted degrees.
pub fn modularity(g: &WeightedGraph, partition: &Partition) -> Result<f64> {
    modularity_with_resolution(g, partition, 1.0)
}

/// `Q = (1/L) Σ_c [ 2·w_c − γ·K_c² / L ]`, where `w_c` is the weight inside
/// community `c` and `K_c` its total degree. This is the ordered-pair sum
/// `(1/L) Σ_{u,v} (A_uv − γ d_u d_v / L) [τ_u = τ_v]` grouped by community.
pub fn modularity_with_resolution(
    g: &WeightedGraph,
    partition: &Partition,
    resolution: f64,
) -> Result<f64> {
    if partition.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            partition: partition.len(),
            graph: g.node_count(),
        });
    }
    let total = g.total_degree() as f64;
    if total == 0.0 {
        return Ok(0.0);
    }
    let k = partition.num_communities();
    let mut inner = vec![0u64; k];
    let mut degree = vec![0u64; k];
    for (v, &d) in g.degrees().iter().enumerate() {
        degree[partition.labels()[v] as usize] += d;
    }
    for (u, v, w) in g.edges() {
        let c = partition.label(u);
        if c == partition.label(v) {
            inner[c as usize] += w;
        }
    }
    let sum: f64 = inner
        .iter()
        .zip(&degree)
        .map(|(&w, &d)| 2.0 * w as f64 - resolution * (d as f64) * (d as f64) / total)
        .sum();
    Ok(sum / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeIndex;

    pub(crate) fn two_cliques(k: usize, w: u64) -> WeightedGraph {
        let mut edges = Vec::new();
        for block in 0..2 {
            let base = (block * k) as NodeIndex;
            for i in 0..k as NodeIndex {
                for j in (i + 1)..k as NodeIndex {
                    edges.push((base + i, base + j, w));
                }
            }
        }
        let ids = (0..2 * k).map(|i| format!("n{i:03}")).collect();
        WeightedGraph::from_indexed_edges(ids, edges).unwrap()
    }

    /// Direct double loop over ordered pairs.
    fn oracle(g: &WeightedGraph, p: &Partition) -> f64 {
        let n = g.node_count() as NodeIndex;
        let l = g.total_degree() as f64;
        let mut s = 0.0;
        for u in 0..n {
            for v in 0..n {
                if p.label(u) == p.label(v) {
                    s += g.weight(u, v) as f64 - (g.degree(u) * g.degree(v)) as f64 / l;
                }
            }
        }
        s / l
    }

    #[test]
    fn single_community_is_zero() {
        let g = two_cliques(4, 3);
        assert_eq!(modularity(&g, &Partition::all_in_one(8)).unwrap(), 0.0);
    }

    #[test]
    fn two_cliques_is_half() {
        let g = two_cliques(4, 1);
        let p = Partition::from_labels([0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(modularity(&g, &p).unwrap(), 0.5);
    }

    #[test]
    fn matches_double_loop() {
        let g = WeightedGraph::from_weighted_pairs([
            ("a", "b", 3),
            ("a", "c", 1),
            ("b", "c", 2),
            ("c", "d", 5),
            ("d", "e", 1),
            ("e", "f", 4),
            ("d", "f", 2),
            ("a", "f", 1),
        ])
        .unwrap();
        for labels in [[0, 0, 0, 1, 1, 1], [0, 1, 0, 1, 0, 1], [0, 0, 1, 1, 2, 2]] {
            let p = Partition::from_labels(labels);
            let q = modularity(&g, &p).unwrap();
            assert!((q - oracle(&g, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_mismatched_partition() {
        let g = two_cliques(3, 1);
        assert!(matches!(
            modularity(&g, &Partition::all_in_one(5)),
            Err(Error::PartitionMismatch {
                partition: 5,
                graph: 6
            })
        ));
    }
}
