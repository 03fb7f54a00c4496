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

//! Block models fitted a posteriori to an observed graph and a partition of
//! it: block sizes, intra-block edge counts and inter-block edge counts are
//! measured exactly and reproduced exactly when sampling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{NodeIndex, WeightedGraph};
use crate::seed;

use super::ba::ba_with_budget;
use super::wiring::{pairs, uniform_cross_edges, uniform_edges};

/// How edges inside a block are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntraModel {
    /// Uniform random graph with the block's exact edge count.
    Er,
    /// Preferential attachment at half the block's mean degree, adjusted to
    /// the block's exact edge count.
    Ba,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPairCount {
    pub a: u32,
    pub b: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AposterioriSbmFit {
    /// Node ids of each block, in graph order.
    pub blocks: Vec<Vec<String>>,
    /// Edges with both endpoints in the block.
    pub intra_edges: Vec<u64>,
    /// Edges between distinct blocks `a < b`; only nonzero pairs are listed.
    pub inter_edges: Vec<BlockPairCount>,
}

impl AposterioriSbmFit {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn node_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn edge_count(&self) -> u64 {
        self.intra_edges.iter().sum::<u64>() + self.inter_edges.iter().map(|p| p.count).sum::<u64>()
    }

    pub fn inter(&self, a: u32, b: u32) -> u64 {
        let (a, b) = (a.min(b), a.max(b));
        self.inter_edges
            .iter()
            .find(|p| p.a == a && p.b == b)
            .map_or(0, |p| p.count)
    }

    /// Empirical edge density per block pair.
    pub fn rates(&self) -> Vec<Vec<f64>> {
        let sizes = self.block_sizes();
        let k = sizes.len();
        let mut out = vec![vec![0.0; k]; k];
        for a in 0..k {
            let p = pairs(sizes[a]);
            out[a][a] = if p == 0 {
                0.0
            } else {
                self.intra_edges[a] as f64 / p as f64
            };
        }
        for p in &self.inter_edges {
            let (a, b) = (p.a as usize, p.b as usize);
            let r = p.count as f64 / (sizes[a] * sizes[b]) as f64;
            out[a][b] = r;
            out[b][a] = r;
        }
        out
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let k = self.blocks.len();
        if self.intra_edges.len() != k {
            return Err(Error::InvalidInput(
                "one intra-block count per block required".into(),
            ));
        }
        for (b, block) in self.blocks.iter().enumerate() {
            let available = pairs(block.len());
            if self.intra_edges[b] > available {
                return Err(Error::InfeasibleBudget {
                    context: format!("block {b}"),
                    requested: self.intra_edges[b],
                    available,
                });
            }
        }
        for p in &self.inter_edges {
            if p.a >= p.b || p.b as usize >= k {
                return Err(Error::InvalidInput(format!(
                    "bad block pair ({}, {})",
                    p.a, p.b
                )));
            }
            let available =
                (self.blocks[p.a as usize].len() * self.blocks[p.b as usize].len()) as u64;
            if p.count > available {
                return Err(Error::InfeasibleBudget {
                    context: format!("blocks {} and {}", p.a, p.b),
                    requested: p.count,
                    available,
                });
            }
        }
        Ok(())
    }
}

/// Exact block statistics of `g` under `labels` (values `0..k`).
pub(crate) fn count_blocks(g: &WeightedGraph, labels: &[u32], k: usize) -> AposterioriSbmFit {
    let mut blocks = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate() {
        blocks[l as usize].push(g.id(v as NodeIndex).to_owned());
    }
    let mut intra_edges = vec![0u64; k];
    let mut inter: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (labels[u as usize], labels[v as usize]);
        if a == b {
            intra_edges[a as usize] += 1;
        } else {
            *inter.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    AposterioriSbmFit {
        blocks,
        intra_edges,
        inter_edges: inter
            .into_iter()
            .map(|((a, b), count)| BlockPairCount { a, b, count })
            .collect(),
    }
}

/// Measures block sizes and edge counts of `g` under `partition`.
pub fn fit_aposteriori_sbm(g: &WeightedGraph, partition: &Partition) -> Result<AposterioriSbmFit> {
    if partition.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            partition: partition.len(),
            graph: g.node_count(),
        });
    }
    Ok(count_blocks(
        g,
        partition.labels(),
        partition.num_communities(),
    ))
}

/// Samples a unit-weight graph on the fitted node ids: each block gets its
/// exact intra-block edge count from `intra`, and each block pair gets its
/// exact inter-block count placed uniformly over the pair's node product.
pub fn sample_root_sbm(
    fit: &AposterioriSbmFit,
    intra: IntraModel,
    seed: u64,
) -> Result<WeightedGraph> {
    fit.validate()?;
    let mut offsets = Vec::with_capacity(fit.blocks.len() + 1);
    offsets.push(0u32);
    for b in &fit.blocks {
        offsets.push(offsets.last().unwrap() + b.len() as u32);
    }

    let block_edges: Vec<Vec<(u32, u32)>> = fit
        .blocks
        .par_iter()
        .enumerate()
        .map(|(b, block)| {
            let mut rng = seed::rng(seed::derive(seed, b as u64));
            let context = format!("block {b}");
            let local = match intra {
                IntraModel::Er => {
                    uniform_edges(block.len(), fit.intra_edges[b], &mut rng, &context)?
                }
                IntraModel::Ba => {
                    ba_with_budget(block.len(), fit.intra_edges[b], &mut rng, &context)?
                }
            };
            let base = offsets[b];
            Ok(local
                .into_iter()
                .map(|(x, y)| (base + x, base + y))
                .collect())
        })
        .collect::<Result<_>>()?;

    let cross_base = fit.blocks.len() as u64;
    let cross_edges: Vec<Vec<(u32, u32)>> = fit
        .inter_edges
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = seed::rng(seed::derive(seed, cross_base + i as u64));
            let (a, b) = (p.a as usize, p.b as usize);
            let local = uniform_cross_edges(
                fit.blocks[a].len(),
                fit.blocks[b].len(),
                p.count,
                &mut rng,
                &format!("blocks {a} and {b}"),
            )?;
            Ok(local
                .into_iter()
                .map(|(x, y)| (offsets[a] + x, offsets[b] + y))
                .collect())
        })
        .collect::<Result<_>>()?;

    let ids: Vec<String> = fit.blocks.iter().flatten().cloned().collect();
    let edges = block_edges
        .into_iter()
        .chain(cross_edges)
        .flatten()
        .map(|(u, v)| (u, v, 1))
        .collect();
    Ok(WeightedGraph::assemble(ids, edges))
}
