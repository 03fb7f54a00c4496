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

// Leiden on a planted partition graph, scored against the planted blocks.

use orgnet::community::{leiden, modularity, LeidenConfig};
use orgnet::generators::{sample_sbm, SbmSpec};
use orgnet::metrics::{adjusted_rand_index, ContingencyTable};

pub fn run_example() -> orgnet::Result<()> {
    let spec = SbmSpec::planted(vec![40, 30, 30], 0.3, 0.02)?;
    let g = sample_sbm(&spec, 11);
    let planted = spec.planted_partition();

    for resolution in [0.5, 1.0, 2.0] {
        let config = LeidenConfig {
            resolution,
            ..LeidenConfig::with_seed(1)
        };
        let found = leiden(&g, &config);
        let table = ContingencyTable::from_labels(found.labels(), planted.labels())?;
        println!(
            "gamma {resolution}: {} communities, Q {:.4}, ARI vs planted {:.3}",
            found.num_communities(),
            modularity(&g, &found)?,
            adjusted_rand_index(&table)?
        );
    }
    println!("planted Q {:.4}", modularity(&g, &planted)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
