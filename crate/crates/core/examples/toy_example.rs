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

// Two blocks of ten nodes: the ARI of a two-node swap, and Leiden modularity
// of sampled two-block graphs at two mixing levels.

use orgnet::pipeline::toy_report;

pub fn run_example() -> orgnet::Result<()> {
    let report = toy_report(50, 2024)?;
    println!("contingency {:?}", report.contingency);
    println!(
        "ARI = {}/{} = {:.4}",
        report.ari_numerator, report.ari_denominator, report.ari
    );
    for v in &report.variants {
        println!(
            "p_in {:.2} p_out {:.2}: mean Q {:.4} (sd {:.4}, {} seeds)",
            v.within, v.between, v.mean_q, v.sd_q, v.seeds
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
