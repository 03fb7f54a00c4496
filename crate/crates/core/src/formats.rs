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

//! On-disk formats: edge lists with metadata sidecars, and partitions.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::month::YearMonth;

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRow {
    u: String,
    v: String,
    weight: i64,
}

/// Writes `u,v,weight`, one row per undirected edge.
pub fn write_edge_list<W: Write>(g: &WeightedGraph, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["u", "v", "weight"])?;
    for (u, v, weight) in g.edges() {
        w.write_record([g.id(u), g.id(v), &weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_edge_list<R: Read>(reader: R) -> Result<WeightedGraph> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for row in rdr.deserialize::<EdgeRow>() {
        let row = row?;
        rows.push((row.u, row.v, row.weight));
    }
    WeightedGraph::from_weighted_pairs(rows)
}

/// JSON sidecar describing one organization-month edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListMeta {
    pub org_id: String,
    pub month: YearMonth,
    pub node_count: usize,
    pub edge_count: usize,
    pub total_weight: u64,
}

impl EdgeListMeta {
    pub fn of(org_id: &str, month: YearMonth, g: &WeightedGraph) -> Self {
        Self {
            org_id: org_id.to_owned(),
            month,
            node_count: g.node_count(),
            edge_count: g.edge_count(),
            total_weight: g.total_weight(),
        }
    }
}

/// Writes `node,community` in node-index order.
pub fn write_partition<W: Write>(g: &WeightedGraph, p: &Partition, writer: W) -> Result<()> {
    if p.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            partition: p.len(),
            graph: g.node_count(),
        });
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node", "community"])?;
    for (v, id) in g.ids().iter().enumerate() {
        w.write_record([id.as_str(), &p.labels()[v].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct PartitionRow {
    node: String,
    community: u32,
}

/// Reads `node,community` rows onto the nodes of `g`; every node must appear
/// exactly once.
pub fn read_partition<R: Read>(g: &WeightedGraph, reader: R) -> Result<Partition> {
    let index = g.index_map();
    let mut labels = vec![None; g.node_count()];
    let mut rdr = csv::Reader::from_reader(reader);
    for row in rdr.deserialize::<PartitionRow>() {
        let row = row?;
        let v = *index
            .get(row.node.as_str())
            .ok_or_else(|| Error::InvalidInput(format!("unknown node {:?}", row.node)))?;
        if labels[v as usize].replace(row.community).is_some() {
            return Err(Error::InvalidInput(format!(
                "node {:?} assigned twice",
                row.node
            )));
        }
    }
    let labels: Option<Vec<u32>> = labels.into_iter().collect();
    let labels =
        labels.ok_or_else(|| Error::InvalidInput("partition does not cover every node".into()))?;
    Ok(Partition::from_labels(labels))
}
