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

use serde::{Deserialize, Serialize};

use crate::graph::NodeIndex;

/// Community assignment indexed by dense node index. Labels are always
/// normalized to `0..K` in order of first appearance, so two partitions that
/// differ only by relabeling compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<u32>,
    count: usize,
}

impl Partition {
    pub fn from_labels(labels: impl IntoIterator<Item = u32>) -> Self {
        let mut remap = std::collections::HashMap::new();
        let labels: Vec<u32> = labels
            .into_iter()
            .map(|l| {
                let next = remap.len() as u32;
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self {
            count: remap.len(),
            labels,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n as u32).collect(),
            count: n,
        }
    }

    pub fn all_in_one(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of non-empty communities, `K`.
    pub fn num_communities(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: NodeIndex) -> u32 {
        self.labels[v as usize]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Member lists per community, each sorted by node index.
    pub fn members(&self) -> Vec<Vec<NodeIndex>> {
        let mut members = vec![Vec::new(); self.count];
        for (v, &l) in self.labels.iter().enumerate() {
            members[l as usize].push(v as NodeIndex);
        }
        members
    }
}
