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

// Fit a BA-HSBM to an observed graph and compare samples against it.

use orgnet::generators::{
    compare_graphs, fit_bahsbm, sample_ba, sample_bahsbm, sample_hsbm, CompareConfig, IntraModel,
    SbmSpec,
};
use orgnet::WeightedGraph;

/// Six preferential-attachment teams, sparsely linked to each other.
fn observed() -> orgnet::Result<WeightedGraph> {
    let team = 120u32;
    let mut edges = Vec::new();
    for t in 0..6 {
        let g = sample_ba(team as usize, 3, 100 + t as u64)?;
        edges.extend(g.edges().map(|(u, v, w)| (u + t * team, v + t * team, w)));
    }
    let links = SbmSpec::planted(vec![team as usize; 6], 0.0, 0.002)?;
    edges.extend(orgnet::generators::sample_sbm(&links, 1).edges());
    let ids = (0..6 * team).map(|v| format!("e{v:04}")).collect();
    WeightedGraph::from_indexed_edges(ids, edges)
}

pub fn run_example() -> orgnet::Result<()> {
    let real = observed()?.largest_connected_component();
    let model = fit_bahsbm(&real, 150, 0)?;
    println!(
        "{} leaves, {} intra and {} inter edges",
        model.leaves.len(),
        model.intra_edge_count(),
        model.inter_edge_count()
    );

    let config = CompareConfig::default();
    for (name, sample) in [
        ("BA", sample_bahsbm(&model, 1)?),
        ("ER", sample_hsbm(&model, IntraModel::Er, 1)?),
    ] {
        let r = compare_graphs(&real, &sample, &config);
        println!(
            "{name}: edges {:+}, degree KS {:.3}, path {:.3} vs {:.3}, dQ {:+.4}",
            r.edge_delta,
            r.degree_ks,
            r.generated.avg_path_length.unwrap_or(f64::NAN),
            r.real.avg_path_length.unwrap_or(f64::NAN),
            r.delta_q
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
