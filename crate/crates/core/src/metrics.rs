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

//! Partition agreement: contingency tables, Rand index and adjusted Rand
//! index. Pair counts are accumulated exactly in 128-bit integers.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};

/// How to reconcile partitions defined on different node sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodePolicy {
    /// Restrict both partitions to their common nodes.
    #[default]
    Intersect,
    /// Require identical node sets.
    Strict,
}

/// Sparse contingency table `n_ij = |P_i ∩ P'_j|` over the effective node set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    cells: BTreeMap<(u32, u32), u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    total: u64,
}

fn choose2(x: u64) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

impl ContingencyTable {
    /// Table of two label sequences over the same nodes.
    pub fn from_labels(left: &[u32], right: &[u32]) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::NodeSetMismatch(left.len().abs_diff(right.len())));
        }
        Ok(Self::from_pairs(
            left.iter().copied().zip(right.iter().copied()),
        ))
    }

    fn from_pairs(pairs: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut cells: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut total = 0;
        for (a, b) in pairs {
            *cells.entry((a, b)).or_default() += 1;
            total += 1;
        }
        // Compact labels so rows/cols only hold occupied communities.
        let mut row_ids: Vec<u32> = cells.keys().map(|k| k.0).collect();
        let mut col_ids: Vec<u32> = cells.keys().map(|k| k.1).collect();
        row_ids.sort_unstable();
        row_ids.dedup();
        col_ids.sort_unstable();
        col_ids.dedup();
        let cells: BTreeMap<(u32, u32), u64> = cells
            .into_iter()
            .map(|((a, b), c)| {
                let i = row_ids.binary_search(&a).unwrap() as u32;
                let j = col_ids.binary_search(&b).unwrap() as u32;
                ((i, j), c)
            })
            .collect();
        let mut rows = vec![0; row_ids.len()];
        let mut cols = vec![0; col_ids.len()];
        for (&(i, j), &c) in &cells {
            rows[i as usize] += c;
            cols[j as usize] += c;
        }
        Self {
            cells,
            rows,
            cols,
            total,
        }
    }

    /// Number of nodes `n` on the effective node set.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.cells.get(&(i as u32, j as u32)).copied().unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.cols.len()]; self.rows.len()];
        for (&(i, j), &c) in &self.cells {
            out[i as usize][j as usize] = c;
        }
        out
    }

    /// True when both partitions agree up to relabeling.
    pub fn is_identity(&self) -> bool {
        self.cells.len() == self.rows.len() && self.cells.len() == self.cols.len()
    }

    fn pair_sums(&self) -> PairSums {
        PairSums {
            both: self.cells.values().map(|&c| choose2(c)).sum(),
            rows: self.rows.iter().map(|&c| choose2(c)).sum(),
            cols: self.cols.iter().map(|&c| choose2(c)).sum(),
            all: choose2(self.total),
        }
    }
}

struct PairSums {
    both: u128,
    rows: u128,
    cols: u128,
    all: u128,
}

/// Contingency table of two partitions given their node ids.
///
/// `left_ids[v]` names node `v` of `left`, likewise for `right`.
pub fn contingency_table<A, B>(
    left_ids: &[A],
    left: &Partition,
    right_ids: &[B],
    right: &Partition,
    policy: NodePolicy,
) -> Result<ContingencyTable>
where
    A: AsRef<str>,
    B: AsRef<str>,
{
    if left_ids.len() != left.len() || right_ids.len() != right.len() {
        return Err(Error::InvalidInput(
            "id list and partition lengths differ".into(),
        ));
    }
    let right_index: HashMap<&str, usize> = right_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_ref(), i))
        .collect();
    let mut common = 0usize;
    let pairs: Vec<(u32, u32)> = left_ids
        .iter()
        .enumerate()
        .filter_map(|(i, id)| {
            right_index.get(id.as_ref()).map(|&j| {
                common += 1;
                (left.labels()[i], right.labels()[j])
            })
        })
        .collect();
    if policy == NodePolicy::Strict {
        let sym_diff = (left_ids.len() - common) + (right_ids.len() - common);
        if sym_diff > 0 {
            return Err(Error::NodeSetMismatch(sym_diff));
        }
    }
    Ok(ContingencyTable::from_pairs(pairs.into_iter()))
}

/// `(a + b) / C(n, 2)`: the fraction of node pairs on which both partitions
/// agree (together in both, or apart in both).
pub fn rand_index(table: &ContingencyTable) -> Result<f64> {
    if table.total < 2 {
        return Err(Error::TooFewNodes(table.total as usize));
    }
    let s = table.pair_sums();
    let together = s.both;
    let apart = s.all + s.both - s.rows - s.cols;
    Ok((together + apart) as f64 / s.all as f64)
}

/// Exact `(numerator, denominator)` of the Hubert–Arabie adjusted Rand index,
/// scaled by `2·C(n,2)` to stay integral.
pub fn adjusted_rand_fraction(table: &ContingencyTable) -> Result<(i128, i128)> {
    if table.total < 2 {
        return Err(Error::TooFewNodes(table.total as usize));
    }
    let s = table.pair_sums();
    let (both, rows, cols, all) = (
        s.both as i128,
        s.rows as i128,
        s.cols as i128,
        s.all as i128,
    );
    // (both − rows·cols/all) / ((rows + cols)/2 − rows·cols/all), times 2·all.
    let num = 2 * all * both - 2 * rows * cols;
    let den = all * (rows + cols) - 2 * rows * cols;
    Ok((num, den))
}

/// Adjusted Rand index. A zero denominator is defined as 1.0 for identical
/// partitions and an error otherwise.
pub fn adjusted_rand_index(table: &ContingencyTable) -> Result<f64> {
    let (num, den) = adjusted_rand_fraction(table)?;
    if den == 0 {
        return if table.is_identity() {
            Ok(1.0)
        } else {
            Err(Error::DegenerateAri)
        };
    }
    Ok(num as f64 / den as f64)
}

/// ARI of one month against the previous one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AriPoint {
    /// `None` when the months share fewer than two nodes.
    pub ari: Option<f64>,
    pub common_nodes: usize,
}

/// One month of a series: node ids with their partition.
pub struct LabeledPartition<'a, S> {
    pub ids: &'a [S],
    pub partition: &'a Partition,
}

/// `ARI(G_t, G_{t−1})` for each consecutive pair, on common nodes.
pub fn month_over_month_ari<S: AsRef<str>>(series: &[LabeledPartition<'_, S>]) -> Vec<AriPoint> {
    series
        .windows(2)
        .map(|w| {
            let table = contingency_table(
                w[0].ids,
                w[0].partition,
                w[1].ids,
                w[1].partition,
                NodePolicy::Intersect,
            )
            .expect("ids and partitions are aligned");
            AriPoint {
                ari: adjusted_rand_index(&table).ok(),
                common_nodes: table.total() as usize,
            }
        })
        .collect()
}
