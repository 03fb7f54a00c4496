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

//! Recursive Leiden: communities larger than `n_max` are re-partitioned on
//! their induced subgraph until every leaf fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeIndex, WeightedGraph};
use crate::seed;

use super::{leiden, LeidenConfig, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitKind {
    Leiden,
    /// Leiden returned a single community; split by degree rank instead.
    DegreeBisection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyNode {
    /// Sorted node indices of the parent graph.
    pub members: Vec<NodeIndex>,
    pub children: Vec<HierarchyNode>,
    /// How `children` were produced; `None` for leaves.
    pub split: Option<SplitKind>,
}

impl HierarchyNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a HierarchyNode>) {
        if self.is_leaf() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(HierarchyNode::depth)
            .max()
            .unwrap_or(0)
    }

    fn to_ids(&self, g: &WeightedGraph) -> IdTree {
        if self.is_leaf() {
            IdTree::Leaf(self.members.iter().map(|&v| g.id(v).to_owned()).collect())
        } else {
            IdTree::Branch(self.children.iter().map(|c| c.to_ids(g)).collect())
        }
    }
}

/// Hierarchy in terms of node ids, serialized as nested arrays: a leaf is an
/// array of ids, an internal community an array of sub-communities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdTree {
    Leaf(Vec<String>),
    Branch(Vec<IdTree>),
}

impl IdTree {
    /// Leaf id lists in depth-first order.
    pub fn leaves(&self) -> Vec<&[String]> {
        match self {
            IdTree::Leaf(ids) => vec![ids.as_slice()],
            IdTree::Branch(children) => children.iter().flat_map(IdTree::leaves).collect(),
        }
    }
}

/// Tree of communities whose leaves partition the graph's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommunityHierarchy {
    pub n_max: usize,
    /// Root-level Leiden communities.
    pub roots: Vec<HierarchyNode>,
}

impl CommunityHierarchy {
    /// Number of levels; root communities are level 1.
    pub fn depth(&self) -> usize {
        self.roots
            .iter()
            .map(HierarchyNode::depth)
            .max()
            .unwrap_or(0)
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&HierarchyNode> {
        let mut out = Vec::new();
        for r in &self.roots {
            r.collect_leaves(&mut out);
        }
        out
    }

    /// Partition labelling each node with its depth-first leaf index.
    pub fn leaf_partition(&self, node_count: usize) -> Partition {
        let mut labels = vec![0u32; node_count];
        for (i, leaf) in self.leaves().iter().enumerate() {
            for &v in &leaf.members {
                labels[v as usize] = i as u32;
            }
        }
        Partition::from_labels(labels)
    }

    /// Partition by root-level community.
    pub fn root_partition(&self, node_count: usize) -> Partition {
        let mut labels = vec![0u32; node_count];
        for (i, r) in self.roots.iter().enumerate() {
            for &v in &r.members {
                labels[v as usize] = i as u32;
            }
        }
        Partition::from_labels(labels)
    }

    pub fn to_id_tree(&self, g: &WeightedGraph) -> Vec<IdTree> {
        self.roots.iter().map(|r| r.to_ids(g)).collect()
    }
}

/// Runs Leiden on `g`, then recursively on the induced subgraph of every
/// community with more than `n_max` nodes.
pub fn hierarchical_leiden(
    g: &WeightedGraph,
    n_max: usize,
    config: &LeidenConfig,
) -> Result<CommunityHierarchy> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let all: Vec<NodeIndex> = (0..g.node_count() as NodeIndex).collect();
    let roots = if all.is_empty() {
        Vec::new()
    } else {
        split(g, &all, n_max, config, 0).0
    };
    Ok(CommunityHierarchy { n_max, roots })
}

fn split(
    g: &WeightedGraph,
    members: &[NodeIndex],
    n_max: usize,
    config: &LeidenConfig,
    level: u64,
) -> (Vec<HierarchyNode>, SplitKind) {
    let sub = if members.len() == g.node_count() {
        g.clone()
    } else {
        let mut mask = vec![false; g.node_count()];
        for &v in members {
            mask[v as usize] = true;
        }
        g.retain(|v| mask[v as usize])
    };
    let sub_config = LeidenConfig {
        seed: seed::derive(seed::derive(config.seed, level), members[0] as u64),
        ..*config
    };
    let partition = leiden(&sub, &sub_config);
    let (groups, kind) = if partition.num_communities() > 1 || level == 0 {
        let groups = partition
            .members()
            .into_iter()
            .map(|local| local.into_iter().map(|v| members[v as usize]).collect())
            .collect();
        (groups, SplitKind::Leiden)
    } else {
        (bisect_by_degree(&sub, members), SplitKind::DegreeBisection)
    };

    let nodes = groups
        .into_iter()
        .map(|group: Vec<NodeIndex>| {
            if group.len() <= n_max {
                HierarchyNode {
                    members: group,
                    children: Vec::new(),
                    split: None,
                }
            } else {
                let (children, kind) = split(g, &group, n_max, config, level + 1);
                HierarchyNode {
                    members: group,
                    children,
                    split: Some(kind),
                }
            }
        })
        .collect();
    (nodes, kind)
}

/// Upper half by weighted degree (ties by index) versus the rest.
fn bisect_by_degree(sub: &WeightedGraph, members: &[NodeIndex]) -> Vec<Vec<NodeIndex>> {
    let mut ranked: Vec<usize> = (0..members.len()).collect();
    ranked.sort_by(|&a, &b| {
        sub.degree(b as NodeIndex)
            .cmp(&sub.degree(a as NodeIndex))
            .then(a.cmp(&b))
    });
    let half = members.len().div_ceil(2);
    let mut top: Vec<NodeIndex> = ranked[..half].iter().map(|&i| members[i]).collect();
    let mut rest: Vec<NodeIndex> = ranked[half..].iter().map(|&i| members[i]).collect();
    top.sort_unstable();
    rest.sort_unstable();
    vec![top, rest]
}
