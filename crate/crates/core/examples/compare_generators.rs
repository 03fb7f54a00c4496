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

// Plain generators at matched density: degree spread and path length of a
// preferential-attachment graph against a uniform random graph.

use orgnet::generators::{degree_ks_distance, sample_ba, sample_sbm, SbmSpec};
use orgnet::graph::Binning;

pub fn run_example() -> orgnet::Result<()> {
    let n = 1000;
    let ba = sample_ba(n, 2, 4)?;
    let p = ba.edge_count() as f64 / (n * (n - 1) / 2) as f64;
    let er = sample_sbm(&SbmSpec::planted(vec![n], p, 0.0)?, 4);

    for (name, g) in [("BA", &ba), ("ER", &er)] {
        let lcc = g.largest_connected_component();
        let hist = g.degree_histogram(Binning::Log2);
        println!(
            "{name}: {} edges, max degree {}, path {:.3}, log-log slope {:?}",
            g.edge_count(),
            g.degrees().iter().max().unwrap_or(&0),
            lcc.approx_avg_path_length(200, 0)?,
            hist.log_log_slope(2, 3)
                .map(|s| (s * 100.0).round() / 100.0)
        );
    }
    println!("degree KS distance {:.3}", degree_ks_distance(&ba, &er));
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
