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

//! Leiden modularity optimization: fast local moving, refinement within
//! communities, aggregation on the refined partition, repeated until the
//! partition stops improving.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::WeightedGraph;
use crate::seed::{self, SeededRng};

use super::{modularity_with_resolution, Partition};

const UNSET: u32 = u32::MAX;
/// Consecutive passes without improvement before stopping.
const PATIENCE: usize = 2;
/// Share of nodes given a random label when perturbing.
const PERTURB_FRACTION: f64 = 0.7;
const MAX_ITERATIONS: usize = 64;
const CONVERGENCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeidenConfig {
    pub resolution: f64,
    pub seed: u64,
    /// Temperature of the randomized merge choice during refinement, in
    /// units of edge weight.
    pub randomness: f64,
    /// Restarts from randomly perturbed copies of the best partition found;
    /// a restart is kept only if it raises modularity.
    pub perturbations: usize,
}

impl Default for LeidenConfig {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            seed: 0,
            randomness: 0.01,
            perturbations: 16,
        }
    }
}

impl LeidenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Working graph with real-valued weights. Self-loops are not stored:
/// `strength` already accounts for internal weight of aggregated nodes.
#[derive(Clone)]
struct Net {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    strength: Vec<f64>,
}

impl Net {
    fn from_graph(g: &WeightedGraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for v in 0..n as u32 {
            for (u, w) in g.neighbors(v) {
                targets.push(u);
                weights.push(w as f64);
            }
            offsets.push(targets.len());
        }
        Self {
            offsets,
            targets,
            weights,
            strength: g.degrees().iter().map(|&d| d as f64).collect(),
        }
    }

    fn len(&self) -> usize {
        self.strength.len()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()]
            .iter()
            .map(|&t| t as usize)
            .zip(self.weights[r].iter().copied())
    }

    /// Collapses each group of `membership` (labels `0..k`) into one node.
    fn aggregate(&self, membership: &[u32], k: usize) -> Net {
        let mut members = vec![Vec::new(); k];
        for (v, &c) in membership.iter().enumerate() {
            members[c as usize].push(v);
        }
        let mut strength = vec![0.0; k];
        let mut offsets = Vec::with_capacity(k + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut acc = vec![0.0; k];
        let mut touched: Vec<usize> = Vec::new();
        offsets.push(0);
        for (c, group) in members.iter().enumerate() {
            for &v in group {
                strength[c] += self.strength[v];
                for (u, w) in self.neighbors(v) {
                    let d = membership[u] as usize;
                    if d == c {
                        continue;
                    }
                    if acc[d] == 0.0 {
                        touched.push(d);
                    }
                    acc[d] += w;
                }
            }
            touched.sort_unstable();
            for &d in &touched {
                targets.push(d as u32);
                weights.push(acc[d]);
                acc[d] = 0.0;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        Net {
            offsets,
            targets,
            weights,
            strength,
        }
    }
}

/// Scratch accumulator of edge weight from one node into each community.
struct Scratch {
    weight: Vec<f64>,
    seen: Vec<bool>,
    touched: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            weight: vec![0.0; n],
            seen: vec![false; n],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, c: usize, w: f64) {
        if !self.seen[c] {
            self.seen[c] = true;
            self.touched.push(c);
        }
        self.weight[c] += w;
    }

    fn clear(&mut self) {
        for &c in &self.touched {
            self.weight[c] = 0.0;
            self.seen[c] = false;
        }
        self.touched.clear();
    }
}

struct Optimizer<'a> {
    gamma: f64,
    /// Total degree `L`, invariant under aggregation.
    total: f64,
    theta: f64,
    rng: &'a mut SeededRng,
}

impl Optimizer<'_> {
    /// Queue-driven local moving. Returns true if any node changed community.
    fn move_nodes(&mut self, net: &Net, membership: &mut [u32]) -> bool {
        let n = net.len();
        let mut comm_strength = vec![0.0; n];
        let mut comm_size = vec![0usize; n];
        for v in 0..n {
            comm_strength[membership[v] as usize] += net.strength[v];
            comm_size[membership[v] as usize] += 1;
        }
        let mut empty: Vec<usize> = (0..n).filter(|&c| comm_size[c] == 0).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(self.rng);
        let mut queued = vec![true; n];
        let mut queue: VecDeque<usize> = order.into();
        let mut scratch = Scratch::new(n);
        let mut changed = false;
        let threshold = 1e-12 * self.total;

        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let current = membership[v] as usize;
            let k_v = net.strength[v];
            for (u, w) in net.neighbors(v) {
                scratch.add(membership[u] as usize, w);
            }
            comm_strength[current] -= k_v;
            comm_size[current] -= 1;

            let scale = self.gamma * k_v / self.total;
            let stay = scratch.weight[current] - scale * comm_strength[current];
            let mut best = current;
            let mut best_gain = stay;
            for &c in &scratch.touched {
                let gain = scratch.weight[c] - scale * comm_strength[c];
                if gain > best_gain {
                    best = c;
                    best_gain = gain;
                }
            }
            if comm_size[current] > 0 && 0.0 > best_gain {
                // An empty community is worth zero.
                best = *empty
                    .last()
                    .expect("an empty community exists while a node is detached");
                best_gain = 0.0;
            }
            if best != current && best_gain - stay <= threshold {
                best = current;
            }

            comm_strength[best] += k_v;
            comm_size[best] += 1;
            if best != current {
                changed = true;
                if empty.last() == Some(&best) {
                    empty.pop();
                }
                if comm_size[current] == 0 {
                    empty.push(current);
                }
                membership[v] = best as u32;
                for (u, _) in net.neighbors(v) {
                    if !queued[u] && membership[u] as usize != best {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            scratch.clear();
        }
        changed
    }

    /// Refines each community of `membership` by merging well-connected
    /// singletons into well-connected sub-communities of the same community.
    fn refine(&mut self, net: &Net, membership: &[u32]) -> Vec<u32> {
        let n = net.len();
        let mut refined: Vec<u32> = (0..n as u32).collect();
        let mut comm_strength = vec![0.0; n];
        for v in 0..n {
            comm_strength[membership[v] as usize] += net.strength[v];
        }
        // Weight from each node to the rest of its community.
        let mut external = vec![0.0; n];
        for v in 0..n {
            external[v] = net
                .neighbors(v)
                .filter(|&(u, _)| membership[u] == membership[v])
                .map(|(_, w)| w)
                .sum();
        }
        let mut sub_strength = net.strength.clone();
        let mut sub_external = external.clone();
        let mut sub_size = vec![1usize; n];

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(self.rng);
        let mut scratch = Scratch::new(n);
        let mut candidates: Vec<(usize, f64)> = Vec::new();

        for v in order {
            if sub_size[refined[v] as usize] != 1 {
                continue;
            }
            let k_v = net.strength[v];
            let big = comm_strength[membership[v] as usize];
            if external[v] < self.gamma * k_v * (big - k_v) / self.total {
                continue;
            }
            for (u, w) in net.neighbors(v) {
                if membership[u] == membership[v] {
                    scratch.add(refined[u] as usize, w);
                }
            }
            let own = refined[v] as usize;
            candidates.clear();
            candidates.push((own, 0.0));
            let scale = self.gamma * k_v / self.total;
            for &c in &scratch.touched {
                if c == own {
                    continue;
                }
                let well_connected = sub_external[c]
                    >= self.gamma * sub_strength[c] * (big - sub_strength[c]) / self.total;
                if !well_connected {
                    continue;
                }
                let gain = scratch.weight[c] - scale * sub_strength[c];
                if gain >= 0.0 {
                    candidates.push((c, gain));
                }
            }
            let chosen = self.pick(&candidates);
            if chosen != own {
                let w_vc = scratch.weight[chosen];
                sub_strength[chosen] += k_v;
                sub_external[chosen] += external[v] - 2.0 * w_vc;
                sub_size[chosen] += 1;
                sub_size[own] = 0;
                refined[v] = chosen as u32;
            }
            scratch.clear();
        }
        refined
    }

    /// Random choice with probability proportional to `exp(gain / theta)`.
    fn pick(&mut self, candidates: &[(usize, f64)]) -> usize {
        if candidates.len() == 1 {
            return candidates[0].0;
        }
        let max = candidates
            .iter()
            .map(|c| c.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = candidates
            .iter()
            .map(|c| ((c.1 - max) / self.theta).exp())
            .collect();
        let total: f64 = weights.iter().sum();
        let mut r = self.rng.gen::<f64>() * total;
        for (c, w) in candidates.iter().zip(&weights) {
            if r < *w {
                return c.0;
            }
            r -= w;
        }
        candidates
            .iter()
            .zip(&weights)
            .rev()
            .find(|(_, w)| **w > 0.0)
            .map(|(c, _)| c.0)
            .expect("at least one candidate has positive weight")
    }

    /// One full multi-level pass starting from `initial`.
    fn pass(&mut self, base: &Net, initial: Vec<u32>) -> Vec<u32> {
        let mut net = base.clone();
        let mut membership = initial;
        let mut node_map: Vec<u32> = (0..base.len() as u32).collect();
        loop {
            self.move_nodes(&net, &mut membership);
            let (k, _) = renumber(&mut membership);
            if k == net.len() {
                break;
            }
            let mut refined = self.refine(&net, &membership);
            let (mut r, _) = renumber(&mut refined);
            if r == net.len() {
                refined = membership.clone();
                r = k;
            }
            let mut next = vec![0u32; r];
            for (v, &c) in refined.iter().enumerate() {
                next[c as usize] = membership[v];
            }
            net = net.aggregate(&refined, r);
            for m in node_map.iter_mut() {
                *m = refined[*m as usize];
            }
            membership = next;
        }
        node_map.iter().map(|&m| membership[m as usize]).collect()
    }
}

/// Relabels to `0..k` in order of first appearance.
fn renumber(labels: &mut [u32]) -> (usize, Vec<u32>) {
    let mut map = vec![UNSET; labels.len().max(1)];
    let mut next = 0u32;
    for l in labels.iter_mut() {
        let slot = &mut map[*l as usize];
        if *slot == UNSET {
            *slot = next;
            next += 1;
        }
        *l = *slot;
    }
    (next as usize, map)
}

/// Splits every community into its connected components.
fn split_disconnected(g: &WeightedGraph, labels: &[u32]) -> Vec<u32> {
    let n = g.node_count();
    let mut out = vec![UNSET; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for s in 0..n {
        if out[s] != UNSET {
            continue;
        }
        out[s] = next;
        stack.push(s as u32);
        while let Some(u) = stack.pop() {
            for (v, _) in g.neighbors(u) {
                if out[v as usize] == UNSET && labels[v as usize] == labels[u as usize] {
                    out[v as usize] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    out
}

/// Seeded Leiden partition of `g` approximately maximizing modularity at the
/// configured resolution. Communities are always internally connected.
pub fn leiden(g: &WeightedGraph, config: &LeidenConfig) -> Partition {
    let n = g.node_count();
    if n == 0 {
        return Partition::singletons(0);
    }
    let total = g.total_degree() as f64;
    if total == 0.0 {
        return Partition::singletons(n);
    }
    let base = Net::from_graph(g);
    let mut rng = seed::rng(config.seed);
    let mut optimizer = Optimizer {
        gamma: config.resolution,
        total,
        theta: config.randomness,
        rng: &mut rng,
    };
    let quality = |labels: &[u32]| {
        modularity_with_resolution(
            g,
            &Partition::from_labels(labels.iter().copied()),
            config.resolution,
        )
        .expect("partition sized to graph")
    };

    let converge = |optimizer: &mut Optimizer<'_>, mut labels: Vec<u32>| {
        let mut q = f64::NEG_INFINITY;
        let mut stale = 0;
        for _ in 0..MAX_ITERATIONS {
            let candidate = split_disconnected(g, &optimizer.pass(&base, labels.clone()));
            let candidate_q = quality(&candidate);
            if candidate_q > q + CONVERGENCE {
                labels = candidate;
                q = candidate_q;
                stale = 0;
            } else {
                stale += 1;
                if stale >= PATIENCE {
                    break;
                }
            }
        }
        (labels, q)
    };

    let (mut labels, mut q) = converge(&mut optimizer, (0..n as u32).collect());
    for _ in 0..config.perturbations {
        let k = labels.iter().copied().max().unwrap_or(0) + 1;
        let mut start = labels.clone();
        for l in start.iter_mut() {
            if optimizer.rng.gen::<f64>() < PERTURB_FRACTION {
                *l = optimizer.rng.gen_range(0..=k);
            }
        }
        renumber(&mut start);
        let (candidate, candidate_q) = converge(&mut optimizer, start);
        if candidate_q > q + CONVERGENCE {
            labels = candidate;
            q = candidate_q;
        }
    }

    // Connected components are a partition every local optimum should beat;
    // fall back to them if it does not.
    let components = g.component_labels().0;
    if quality(&components) > q {
        labels = components;
    }
    Partition::from_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;
    use crate::graph::NodeIndex;

    fn cliques(sizes: &[usize]) -> WeightedGraph {
        let mut edges = Vec::new();
        let mut base = 0u32;
        for &k in sizes {
            for i in 0..k as NodeIndex {
                for j in (i + 1)..k as NodeIndex {
                    edges.push((base + i, base + j));
                }
            }
            base += k as u32;
        }
        WeightedGraph::from_unit_edges(base as usize, edges)
    }

    #[test]
    fn recovers_two_cliques() {
        let g = cliques(&[4, 4]);
        let p = leiden(&g, &LeidenConfig::with_seed(1));
        assert_eq!(p, Partition::from_labels([0, 0, 0, 0, 1, 1, 1, 1]));
        assert_eq!(modularity(&g, &p).unwrap(), 0.5);
    }

    #[test]
    fn ring_of_cliques() {
        // Eight 5-cliques joined in a ring by single edges.
        let mut edges = Vec::new();
        for c in 0..8u32 {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    edges.push((c * 5 + i, c * 5 + j));
                }
            }
            edges.push((c * 5, ((c + 1) % 8) * 5 + 1));
        }
        let g = WeightedGraph::from_unit_edges(40, edges);
        for s in 0..5 {
            let p = leiden(&g, &LeidenConfig::with_seed(s));
            assert_eq!(p.num_communities(), 8);
            let expected = Partition::from_labels((0..40).map(|v| v / 5));
            assert_eq!(p, expected);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = cliques(&[6, 5, 7]);
        let a = leiden(&g, &LeidenConfig::with_seed(42));
        let b = leiden(&g, &LeidenConfig::with_seed(42));
        assert_eq!(a, b);
    }

    #[test]
    fn edgeless_and_empty_graphs() {
        assert!(leiden(&WeightedGraph::default(), &LeidenConfig::default()).is_empty());
        let g = WeightedGraph::from_unit_edges(3, []);
        assert_eq!(leiden(&g, &LeidenConfig::default()).num_communities(), 3);
    }

    #[test]
    fn renumber_first_appearance() {
        let mut l = vec![4, 4, 1, 0, 1];
        assert_eq!(renumber(&mut l).0, 3);
        assert_eq!(l, vec![0, 0, 1, 2, 1]);
    }
}
