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

// Recursive Leiden splits communities until every leaf fits a size cap.

use orgnet::community::{hierarchical_leiden, HierarchyNode, LeidenConfig};
use orgnet::generators::{sample_sbm, SbmSpec};

fn print_tree(node: &HierarchyNode, depth: usize) {
    let kind = node.split.map(|k| format!(" {k:?}")).unwrap_or_default();
    println!(
        "{:indent$}{} nodes{kind}",
        "",
        node.members.len(),
        indent = 2 * depth
    );
    for child in &node.children {
        print_tree(child, depth + 1);
    }
}

pub fn run_example() -> orgnet::Result<()> {
    // Four groups of 50, paired into two divisions.
    let probs = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| match (a == b, a / 2 == b / 2) {
                    (true, _) => 0.3,
                    (false, true) => 0.04,
                    _ => 0.004,
                })
                .collect()
        })
        .collect();
    let spec = SbmSpec::new(vec![50; 4], probs)?;
    let g = sample_sbm(&spec, 3);

    for n_max in [60, 30] {
        let h = hierarchical_leiden(&g, n_max, &LeidenConfig::with_seed(3))?;
        println!(
            "n_max {n_max}: depth {}, {} leaves",
            h.depth(),
            h.leaves().len()
        );
        for root in &h.roots {
            print_tree(root, 1);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
