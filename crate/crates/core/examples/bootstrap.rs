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

// Edge-resampling bootstrap of Leiden modularity.

use orgnet::generators::{sample_sbm, SbmSpec};
use orgnet::stats::{bootstrap_modularity, BootstrapConfig};

pub fn run_example() -> orgnet::Result<()> {
    let spec = SbmSpec::planted(vec![30, 30, 30], 0.25, 0.03)?;
    let g = sample_sbm(&spec, 7).largest_connected_component();
    let config = BootstrapConfig {
        iterations: 200,
        seed: 7,
        ..BootstrapConfig::default()
    };
    let r = bootstrap_modularity(&g, &config)?;
    println!("observed Q {:.4}", r.observed_q);
    println!(
        "bootstrap {} ({} replicates, range {:.4}..{:.4})",
        r.label(),
        r.iterations,
        r.min,
        r.max
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
