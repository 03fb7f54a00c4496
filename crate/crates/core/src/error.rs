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

use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-positive message count {count} for pair ({u}, {v})")]
    NonPositiveCount { u: String, v: String, count: i64 },

    #[error("graph has {components} connected components; extract the largest connected component first")]
    Disconnected { components: usize },

    #[error("node {0:?} is missing from the attribute table")]
    MissingAttribute(String),

    #[error("partition assigns {partition} nodes but the graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },

    #[error("node sets differ: symmetric difference has {0} nodes")]
    NodeSetMismatch(usize),

    #[error("at least two nodes are required, got {0}")]
    TooFewNodes(usize),

    #[error(
        "adjusted Rand index is undefined for these non-identical partitions (zero denominator)"
    )]
    DegenerateAri,

    #[error("all differences are zero; the signed-rank test is undefined")]
    AllZeroDifferences,

    #[error("infeasible budget for {context}: {requested} edges requested but only {available} pairs exist")]
    InfeasibleBudget {
        context: String,
        requested: u64,
        available: u64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
