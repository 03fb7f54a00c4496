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

//! Immutable weighted undirected graphs.
//!
//! Node identifiers are opaque strings mapped to dense `u32` indices; the
//! adjacency is stored in compressed sparse row form with sorted neighbor
//! lists. Weights are positive integer message counts.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub type NodeIndex = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    offsets: Vec<usize>,
    targets: Vec<NodeIndex>,
    weights: Vec<u64>,
    degrees: Vec<u64>,
    edge_count: usize,
    total_weight: u64,
}

/// Descriptive statistics of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub total_weight: u64,
    /// `L / node_count`, where `L` is the total weighted degree.
    pub mean_weighted_degree: f64,
}

/// What to do with a node that has no entry in an attribute table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingAttribute {
    Drop,
    #[default]
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binning {
    /// One bin per distinct degree value.
    Linear,
    /// Base-2 geometric bins `[2^k, 2^(k+1))`; degree 0 gets `[0, 1)`.
    Log2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBin {
    pub lower: u64,
    /// Exclusive.
    pub upper: u64,
    pub count: usize,
}

/// Occupied bins only, in increasing degree order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub bins: Vec<DegreeBin>,
}

impl DegreeHistogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// Least-squares slope of log density against log degree over bins whose
    /// lower edge is at least `min_degree` and that hold at least `min_count`
    /// nodes. Density is count divided by bin width, located at the geometric
    /// center of the bin.
    pub fn log_log_slope(&self, min_degree: u64, min_count: usize) -> Option<f64> {
        let points: Vec<(f64, f64)> = self
            .bins
            .iter()
            .filter(|b| b.lower >= min_degree.max(1) && b.count >= min_count)
            .map(|b| {
                let width = (b.upper - b.lower) as f64;
                let center = ((b.lower as f64) * ((b.upper - 1) as f64)).sqrt();
                (center.ln(), (b.count as f64 / width).ln())
            })
            .collect();
        if points.len() < 2 {
            return None;
        }
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

impl Default for WeightedGraph {
    fn default() -> Self {
        Self::assemble(Vec::new(), Vec::new())
    }
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, count)` message counts. Self-pairs are
    /// discarded, and `(u, v)` / `(v, u)` contributions are summed into one
    /// undirected edge. Node indices follow lexicographic id order, so the
    /// result does not depend on input order.
    pub fn from_weighted_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, i64)>,
        S: AsRef<str>,
    {
        let mut acc: HashMap<(String, String), u64> = HashMap::new();
        for (u, v, count) in pairs {
            let (u, v) = (u.as_ref(), v.as_ref());
            if count <= 0 {
                return Err(Error::NonPositiveCount {
                    u: u.to_owned(),
                    v: v.to_owned(),
                    count,
                });
            }
            if u == v {
                continue;
            }
            let key = if u < v {
                (u.to_owned(), v.to_owned())
            } else {
                (v.to_owned(), u.to_owned())
            };
            *acc.entry(key).or_default() += count as u64;
        }
        Ok(Self::from_canonical_pairs(acc))
    }

    /// Builds from already-aggregated pairs with `u < v`.
    pub(crate) fn from_canonical_pairs(acc: HashMap<(String, String), u64>) -> Self {
        let mut ids: Vec<&str> = acc
            .keys()
            .flat_map(|(u, v)| [u.as_str(), v.as_str()])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let index: HashMap<&str, NodeIndex> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i as NodeIndex))
            .collect();
        let edges = acc
            .iter()
            .map(|((u, v), w)| (index[u.as_str()], index[v.as_str()], *w))
            .collect();
        let ids = ids.into_iter().map(str::to_owned).collect();
        Self::assemble(ids, edges)
    }

    /// Builds from dense indices into `ids`. Duplicate pairs are summed and
    /// self-pairs dropped; every weight must be at least 1.
    pub fn from_indexed_edges(
        ids: Vec<String>,
        edges: impl IntoIterator<Item = (NodeIndex, NodeIndex, u64)>,
    ) -> Result<Self> {
        let n = ids.len();
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if w == 0 {
                return Err(Error::NonPositiveCount {
                    u: ids[u as usize].clone(),
                    v: ids[v as usize].clone(),
                    count: 0,
                });
            }
            list.push((u, v, w));
        }
        let mut seen = ids.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate node identifier".into()));
        }
        Ok(Self::assemble(ids, list))
    }

    /// Unit-weight graph on nodes labelled `"0"..n`.
    pub(crate) fn from_unit_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeIndex, NodeIndex)>,
    ) -> Self {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::assemble(ids, edges.into_iter().map(|(u, v)| (u, v, 1)).collect())
    }

    pub(crate) fn assemble(ids: Vec<String>, mut edges: Vec<(NodeIndex, NodeIndex, u64)>) -> Self {
        let n = ids.len();
        edges.retain(|e| e.0 != e.1);
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_unstable_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(NodeIndex, NodeIndex, u64)> = Vec::with_capacity(edges.len());
        for e in edges {
            match merged.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                _ => merged.push(e),
            }
        }

        let mut counts = vec![0usize; n];
        for &(u, v, _) in &merged {
            counts[u as usize] += 1;
            counts[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + counts[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        let mut weights = vec![0; offsets[n]];
        let mut degrees = vec![0u64; n];
        let mut total_weight = 0;
        // Sorted edge order yields sorted neighbor lists.
        for &(u, v, w) in &merged {
            let (u, v) = (u as usize, v as usize);
            targets[cursor[u]] = v as NodeIndex;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            targets[cursor[v]] = u as NodeIndex;
            weights[cursor[v]] = w;
            cursor[v] += 1;
            degrees[u] += w;
            degrees[v] += w;
            total_weight += w;
        }
        Self {
            ids,
            offsets,
            targets,
            weights,
            degrees,
            edge_count: merged.len(),
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Sum of edge weights.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// `L`, the sum of weighted degrees: twice the total weight.
    pub fn total_degree(&self) -> u64 {
        2 * self.total_weight
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: NodeIndex) -> &str {
        &self.ids[v as usize]
    }

    pub fn index_map(&self) -> HashMap<&str, NodeIndex> {
        self.ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i as NodeIndex))
            .collect()
    }

    /// Weighted degree `d_v`.
    pub fn degree(&self, v: NodeIndex) -> u64 {
        self.degrees[v as usize]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Number of distinct neighbors.
    pub fn neighbor_count(&self, v: NodeIndex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn neighbors(&self, v: NodeIndex) -> impl Iterator<Item = (NodeIndex, u64)> + '_ {
        let range = self.offsets[v as usize]..self.offsets[v as usize + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Weight of edge `{u, v}`, or 0 when absent.
    pub fn weight(&self, u: NodeIndex, v: NodeIndex) -> u64 {
        let range = self.offsets[u as usize]..self.offsets[u as usize + 1];
        match self.targets[range.clone()].binary_search(&v) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0,
        }
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex, u64)> + '_ {
        (0..self.node_count() as NodeIndex).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn stats(&self) -> GraphStats {
        let n = self.node_count();
        GraphStats {
            node_count: n,
            edge_count: self.edge_count,
            total_weight: self.total_weight,
            mean_weighted_degree: if n == 0 {
                0.0
            } else {
                self.total_degree() as f64 / n as f64
            },
        }
    }

    /// Component label per node, labels numbered in order of first node.
    pub fn component_labels(&self) -> (Vec<u32>, usize) {
        let n = self.node_count();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start as NodeIndex);
            while let Some(u) = queue.pop_front() {
                for (v, _) in self.neighbors(u) {
                    if label[v as usize] == u32::MAX {
                        label[v as usize] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        (label, next as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Induced subgraph on the largest connected component. Equal-size
    /// components are ranked by their lexicographically smallest node id.
    pub fn largest_connected_component(&self) -> WeightedGraph {
        let (label, k) = self.component_labels();
        if k <= 1 {
            return self.clone();
        }
        let mut size = vec![0usize; k];
        let mut min_id: Vec<Option<&str>> = vec![None; k];
        for (v, &c) in label.iter().enumerate() {
            let c = c as usize;
            size[c] += 1;
            let id = self.ids[v].as_str();
            if min_id[c].is_none_or(|m| id < m) {
                min_id[c] = Some(id);
            }
        }
        let best = (0..k)
            .min_by(|&a, &b| size[b].cmp(&size[a]).then(min_id[a].cmp(&min_id[b])))
            .expect("k > 1");
        self.retain(|v| label[v as usize] as usize == best)
    }

    /// Induced subgraph on the nodes for which `keep` holds. Node order is
    /// preserved.
    pub fn retain(&self, mut keep: impl FnMut(NodeIndex) -> bool) -> WeightedGraph {
        let n = self.node_count();
        let mut remap = vec![u32::MAX; n];
        let mut ids = Vec::new();
        for (v, slot) in remap.iter_mut().enumerate() {
            if keep(v as NodeIndex) {
                *slot = ids.len() as u32;
                ids.push(self.ids[v].clone());
            }
        }
        let edges = self
            .edges()
            .filter_map(|(u, v, w)| {
                let (a, b) = (remap[u as usize], remap[v as usize]);
                (a != u32::MAX && b != u32::MAX).then_some((a, b, w))
            })
            .collect();
        Self::assemble(ids, edges)
    }

    /// Induced subgraph on nodes whose label in `attributes` satisfies
    /// `keep(node_id, label)`.
    pub fn induced_subgraph<F>(
        &self,
        attributes: &HashMap<String, String>,
        keep: F,
        missing: MissingAttribute,
    ) -> Result<WeightedGraph>
    where
        F: Fn(&str, &str) -> bool,
    {
        let mut mask = Vec::with_capacity(self.node_count());
        for id in &self.ids {
            match attributes.get(id) {
                Some(label) => mask.push(keep(id, label)),
                None if missing == MissingAttribute::Drop => mask.push(false),
                None => return Err(Error::MissingAttribute(id.clone())),
            }
        }
        Ok(self.retain(|v| mask[v as usize]))
    }

    /// Histogram of weighted degrees.
    pub fn degree_histogram(&self, binning: Binning) -> DegreeHistogram {
        histogram_of(self.degrees.iter().copied(), binning)
    }

    /// Histogram of unweighted degrees (distinct neighbor counts).
    pub fn neighbor_count_histogram(&self, binning: Binning) -> DegreeHistogram {
        histogram_of(
            (0..self.node_count() as NodeIndex).map(|v| self.neighbor_count(v) as u64),
            binning,
        )
    }

    /// Unweighted hop distances from `source`; unreachable nodes are `u32::MAX`.
    pub fn bfs_distances(&self, source: NodeIndex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize] + 1;
            for (v, _) in self.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = d;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Mean unweighted shortest-path length from `sample_size` distinct
    /// sources (drawn with `seed`; all nodes when `sample_size >= n`) to every
    /// other node. The graph must be connected.
    pub fn approx_avg_path_length(&self, sample_size: usize, seed: u64) -> Result<f64> {
        let n = self.node_count();
        if sample_size == 0 {
            return Err(Error::InvalidInput("sample_size must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let (_, components) = self.component_labels();
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        let sources: Vec<usize> = if sample_size >= n {
            (0..n).collect()
        } else {
            let mut s = index::sample(&mut seed::rng(seed), n, sample_size).into_vec();
            s.sort_unstable();
            s
        };
        let mut total = 0u64;
        let mut pairs = 0u64;
        for s in sources {
            for d in self.bfs_distances(s as NodeIndex) {
                if d != 0 {
                    total += d as u64;
                    pairs += 1;
                }
            }
        }
        Ok(total as f64 / pairs as f64)
    }
}

fn histogram_of(values: impl Iterator<Item = u64>, binning: Binning) -> DegreeHistogram {
    let mut counts: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for d in values {
        let key = match binning {
            Binning::Linear => (d, d + 1),
            Binning::Log2 if d == 0 => (0, 1),
            Binning::Log2 => {
                let k = 63 - d.leading_zeros();
                (1u64 << k, 1u64.checked_shl(k + 1).unwrap_or(u64::MAX))
            }
        };
        *counts.entry(key).or_default() += 1;
    }
    DegreeHistogram {
        bins: counts
            .into_iter()
            .map(|((lower, upper), count)| DegreeBin {
                lower,
                upper,
                count,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(pairs: &[(&str, &str, i64)]) -> WeightedGraph {
        WeightedGraph::from_weighted_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn empty_graph() {
        let g = graph(&[]);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.total_degree(), 0);
        assert!(g.largest_connected_component().is_empty());
    }

    #[test]
    fn aggregates_directions_and_drops_self_loops() {
        let g = graph(&[("a", "b", 2), ("b", "a", 3), ("a", "a", 5)]);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 5);
        assert_eq!(g.total_degree(), 10);
    }

    #[test]
    fn rejects_non_positive_counts() {
        let err = WeightedGraph::from_weighted_pairs([("a", "b", 0)]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveCount { count: 0, .. }));
        assert!(WeightedGraph::from_weighted_pairs([("a", "b", -2)]).is_err());
    }

    #[test]
    fn stats_mean_degree() {
        let g = graph(&[("a", "b", 1), ("b", "c", 3)]);
        let s = g.stats();
        assert_eq!(s.node_count, 3);
        assert_eq!(s.edge_count, 2);
        assert_eq!(s.total_weight, 4);
        assert!((s.mean_weighted_degree - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lcc_of_connected_path_is_identity() {
        let g = graph(&[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "e", 1)]);
        assert_eq!(g.largest_connected_component(), g);
    }

    #[test]
    fn lcc_picks_triangle() {
        let g = graph(&[("a", "b", 1), ("b", "c", 1), ("a", "c", 1), ("d", "e", 4)]);
        let lcc = g.largest_connected_component();
        assert_eq!(lcc.ids(), &["a", "b", "c"]);
        assert_eq!(lcc.edge_count(), 3);
    }

    #[test]
    fn lcc_tie_breaks_on_smallest_id() {
        let g = graph(&[("x", "y", 1), ("b", "q", 1)]);
        assert_eq!(g.largest_connected_component().ids(), &["b", "q"]);
    }

    #[test]
    fn induced_subgraph_keep_all_and_pair() {
        let g = graph(&[("a", "b", 1), ("b", "c", 2), ("a", "c", 3)]);
        let attrs: HashMap<String, String> = [("a", "x"), ("b", "x"), ("c", "y")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let all = g
            .induced_subgraph(&attrs, |_, _| true, MissingAttribute::Fail)
            .unwrap();
        assert_eq!(all, g);
        let sub = g
            .induced_subgraph(&attrs, |_, l| l == "x", MissingAttribute::Fail)
            .unwrap();
        assert_eq!(sub.ids(), &["a", "b"]);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(sub.total_weight(), 1);
    }

    #[test]
    fn induced_subgraph_missing_attribute_policy() {
        let g = graph(&[("a", "b", 1), ("b", "c", 1)]);
        let attrs: HashMap<String, String> = [
            ("a".to_string(), "x".to_string()),
            ("b".to_string(), "x".to_string()),
        ]
        .into();
        let err = g.induced_subgraph(&attrs, |_, _| true, MissingAttribute::Fail);
        assert!(matches!(err, Err(Error::MissingAttribute(id)) if id == "c"));
        let dropped = g
            .induced_subgraph(&attrs, |_, _| true, MissingAttribute::Drop)
            .unwrap();
        assert_eq!(dropped.node_count(), 2);
    }

    #[test]
    fn two_group_fixture_counts() {
        // Group A: a1..a3 (triangle), group B: b1..b2, cross edges a1-b1, a3-b2.
        let g = graph(&[
            ("a1", "a2", 1),
            ("a2", "a3", 2),
            ("a1", "a3", 1),
            ("b1", "b2", 5),
            ("a1", "b1", 1),
            ("a3", "b2", 1),
        ]);
        let attrs: HashMap<String, String> = g
            .ids()
            .iter()
            .map(|id| (id.clone(), id[..1].to_string()))
            .collect();
        let a = g
            .induced_subgraph(&attrs, |_, l| l == "a", MissingAttribute::Fail)
            .unwrap();
        assert_eq!(
            (a.node_count(), a.edge_count(), a.total_weight()),
            (3, 3, 4)
        );
        let b = g
            .induced_subgraph(&attrs, |_, l| l == "b", MissingAttribute::Fail)
            .unwrap();
        assert_eq!(
            (b.node_count(), b.edge_count(), b.total_weight()),
            (2, 1, 5)
        );
    }

    #[test]
    fn histogram_star_and_regular() {
        let star = graph(&[("c", "1", 1), ("c", "2", 1), ("c", "3", 1), ("c", "4", 1)]);
        let h = star.degree_histogram(Binning::Linear);
        assert_eq!(
            h.bins,
            vec![
                DegreeBin {
                    lower: 1,
                    upper: 2,
                    count: 4
                },
                DegreeBin {
                    lower: 4,
                    upper: 5,
                    count: 1
                }
            ]
        );
        let cycle = graph(&[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)]);
        assert_eq!(cycle.degree_histogram(Binning::Linear).bins.len(), 1);
        assert_eq!(cycle.degree_histogram(Binning::Log2).bins.len(), 1);
        let lg = star.degree_histogram(Binning::Log2);
        assert_eq!(lg.total(), 5);
        assert_eq!(
            lg.bins[1],
            DegreeBin {
                lower: 4,
                upper: 8,
                count: 1
            }
        );
    }

    #[test]
    fn path_lengths() {
        let k5: Vec<(String, String, i64)> = (0..5)
            .flat_map(|i| ((i + 1)..5).map(move |j| (i.to_string(), j.to_string(), 1)))
            .collect();
        let k5 = WeightedGraph::from_weighted_pairs(k5).unwrap();
        assert_eq!(k5.approx_avg_path_length(5, 0).unwrap(), 1.0);
        let path = graph(&[("a", "b", 1), ("b", "c", 1)]);
        assert!((path.approx_avg_path_length(3, 0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let split = graph(&[("a", "b", 1), ("c", "d", 1)]);
        assert!(matches!(
            split.approx_avg_path_length(2, 0),
            Err(Error::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn sampled_path_length_is_deterministic() {
        let pairs: Vec<(String, String, i64)> = (0..50)
            .map(|i| (i.to_string(), ((i + 1) % 50).to_string(), 1))
            .collect();
        let g = WeightedGraph::from_weighted_pairs(pairs).unwrap();
        let a = g.approx_avg_path_length(7, 3).unwrap();
        assert_eq!(a, g.approx_avg_path_length(7, 3).unwrap());
        // Every source of a cycle sees the same distance profile.
        assert!((a - g.approx_avg_path_length(50, 0).unwrap()).abs() < 1e-12);
    }
}
