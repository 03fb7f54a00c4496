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

//! Hierarchical block model with preferential attachment inside leaves:
//! leaves come from recursive Leiden capped at `n_max` nodes, each leaf is
//! filled by Barabási–Albert against its observed edge budget, and leaf pairs
//! are wired with their observed edge counts between uniformly chosen nodes.

use serde::{Deserialize, Serialize};

use crate::community::{hierarchical_leiden, IdTree, LeidenConfig};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

use super::aposteriori::{
    count_blocks, sample_root_sbm, AposterioriSbmFit, BlockPairCount, IntraModel,
};
use super::ba::attachment_for_budget;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafBudget {
    pub id: u32,
    pub vertices: usize,
    pub edge_budget: u64,
    /// Preferential-attachment count used inside the leaf.
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterLeafCount {
    pub leaf_a: u32,
    pub leaf_b: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BahsbmModel {
    pub n_max: usize,
    pub leaves: Vec<LeafBudget>,
    pub inter: Vec<InterLeafCount>,
    /// Node ids as nested arrays; leaves in depth-first order match `leaves`.
    pub hierarchy: Vec<IdTree>,
}

impl BahsbmModel {
    pub fn node_count(&self) -> usize {
        self.leaves.iter().map(|l| l.vertices).sum()
    }

    pub fn intra_edge_count(&self) -> u64 {
        self.leaves.iter().map(|l| l.edge_budget).sum()
    }

    pub fn inter_edge_count(&self) -> u64 {
        self.inter.iter().map(|p| p.count).sum()
    }

    /// Leaf blocks as an a-posteriori block model.
    pub fn block_fit(&self) -> Result<AposterioriSbmFit> {
        let leaf_ids: Vec<&[String]> = self.hierarchy.iter().flat_map(IdTree::leaves).collect();
        if leaf_ids.len() != self.leaves.len() {
            return Err(Error::InvalidInput(format!(
                "hierarchy has {} leaves but {} budgets",
                leaf_ids.len(),
                self.leaves.len()
            )));
        }
        for (ids, leaf) in leaf_ids.iter().zip(&self.leaves) {
            if ids.len() != leaf.vertices {
                return Err(Error::InvalidInput(format!(
                    "leaf {} lists {} ids but budgets {} vertices",
                    leaf.id,
                    ids.len(),
                    leaf.vertices
                )));
            }
            if leaf.vertices > self.n_max {
                return Err(Error::InvalidInput(format!(
                    "leaf {} exceeds n_max",
                    leaf.id
                )));
            }
        }
        let fit = AposterioriSbmFit {
            blocks: leaf_ids.iter().map(|ids| ids.to_vec()).collect(),
            intra_edges: self.leaves.iter().map(|l| l.edge_budget).collect(),
            inter_edges: self
                .inter
                .iter()
                .map(|p| BlockPairCount {
                    a: p.leaf_a,
                    b: p.leaf_b,
                    count: p.count,
                })
                .collect(),
        };
        fit.validate()?;
        Ok(fit)
    }
}

/// Fits the hierarchical model to `g`: recursive Leiden with leaf cap
/// `n_max`, then exact per-leaf vertex/edge budgets and per-leaf-pair
/// inter-edge counts.
pub fn fit_bahsbm(g: &WeightedGraph, n_max: usize, seed: u64) -> Result<BahsbmModel> {
    if g.is_empty() {
        return Err(Error::InvalidInput("cannot fit an empty graph".into()));
    }
    let hierarchy = hierarchical_leiden(g, n_max, &LeidenConfig::with_seed(seed))?;
    let leaves = hierarchy.leaves();
    let mut labels = vec![0u32; g.node_count()];
    for (i, leaf) in leaves.iter().enumerate() {
        for &v in &leaf.members {
            labels[v as usize] = i as u32;
        }
    }
    let counts = count_blocks(g, &labels, leaves.len());
    Ok(BahsbmModel {
        n_max,
        leaves: counts
            .blocks
            .iter()
            .zip(&counts.intra_edges)
            .enumerate()
            .map(|(i, (ids, &budget))| LeafBudget {
                id: i as u32,
                vertices: ids.len(),
                edge_budget: budget,
                m: attachment_for_budget(ids.len(), budget),
            })
            .collect(),
        inter: counts
            .inter_edges
            .iter()
            .map(|p| InterLeafCount {
                leaf_a: p.a,
                leaf_b: p.b,
                count: p.count,
            })
            .collect(),
        hierarchy: hierarchy.to_id_tree(g),
    })
}

/// Samples the model with a chosen intra-leaf generator.
pub fn sample_hsbm(model: &BahsbmModel, intra: IntraModel, seed: u64) -> Result<WeightedGraph> {
    sample_root_sbm(&model.block_fit()?, intra, seed)
}

/// Samples the model with preferential attachment inside every leaf.
pub fn sample_bahsbm(model: &BahsbmModel, seed: u64) -> Result<WeightedGraph> {
    sample_hsbm(model, IntraModel::Ba, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{sample_sbm, SbmSpec};

    #[test]
    fn two_cliques_give_two_leaves() {
        let mut edges = Vec::new();
        for b in 0..2u32 {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((b * 4 + i, b * 4 + j));
                }
            }
        }
        let g = WeightedGraph::from_unit_edges(8, edges);
        let model = fit_bahsbm(&g, 250, 1).unwrap();
        assert_eq!(model.leaves.len(), 2);
        assert!(model.inter.is_empty());
        assert_eq!(model.leaves[0].edge_budget, 6);
        let json = serde_json::to_string(&model).unwrap();
        let back: BahsbmModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn budgets_conserve_graph_totals() {
        let spec = SbmSpec::planted(vec![40, 40, 40], 0.25, 0.02).unwrap();
        let g = sample_sbm(&spec, 2);
        let model = fit_bahsbm(&g, 30, 5).unwrap();
        assert_eq!(model.node_count(), g.node_count());
        assert_eq!(
            model.intra_edge_count() + model.inter_edge_count(),
            g.edge_count() as u64
        );
        assert!(model.leaves.iter().all(|l| l.vertices <= 30));
        for s in 0..3 {
            let h = sample_bahsbm(&model, s).unwrap();
            assert_eq!(h.node_count(), g.node_count());
            assert_eq!(h.edge_count(), g.edge_count());
        }
    }

    #[test]
    fn inconsistent_model_is_rejected() {
        let mut model = BahsbmModel {
            n_max: 4,
            leaves: vec![LeafBudget {
                id: 0,
                vertices: 3,
                edge_budget: 2,
                m: 1,
            }],
            inter: Vec::new(),
            hierarchy: vec![IdTree::Leaf(vec!["a".into(), "b".into()])],
        };
        assert!(sample_bahsbm(&model, 0).is_err());
        model.hierarchy = vec![IdTree::Leaf(vec!["a".into(), "b".into(), "c".into()])];
        assert_eq!(sample_bahsbm(&model, 0).unwrap().edge_count(), 2);
        model.leaves[0].edge_budget = 4;
        assert!(matches!(
            sample_bahsbm(&model, 0),
            Err(Error::InfeasibleBudget { .. })
        ));
    }
}
