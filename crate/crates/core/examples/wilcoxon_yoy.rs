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

// Year-over-year paired modularity differences and the Wilcoxon signed-rank
// test, with a histogram of the differences.

use orgnet::month::YearMonth;
use orgnet::stats::{diff_histogram, wilcoxon_signed_rank, yoy_paired_diffs, OrgMonthRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn record(org: usize, month: YearMonth, q: f64) -> OrgMonthRecord {
    OrgMonthRecord {
        org_id: format!("org{org:03}"),
        month,
        node_count: 2500,
        edge_count: 40_000,
        total_weight: 150_000,
        modularity: q,
        ari_prev: None,
        geography: None,
    }
}

pub fn run_example() -> orgnet::Result<()> {
    let months: Vec<YearMonth> = ["2019-01", "2020-01", "2019-04", "2020-04"]
        .iter()
        .map(|m| m.parse())
        .collect::<orgnet::Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut records = Vec::new();
    for org in 0..60 {
        let base = rng.gen_range(0.55..0.75);
        for (i, &m) in months.iter().enumerate() {
            // Only April 2020 carries a shift.
            let shift = if i == 3 { 0.012 } else { 0.0 };
            records.push(record(org, m, base + shift + rng.gen_range(-0.006..0.006)));
        }
    }

    for pair in [[0, 1], [2, 3]] {
        let diffs = yoy_paired_diffs(&records, months[pair[0]], months[pair[1]]);
        let values = diffs.values();
        let test = wilcoxon_signed_rank(&values)?;
        println!(
            "{} vs {}: {} orgs, W+ {}, W- {}, p {:.3e} ({:?})",
            months[pair[1]],
            months[pair[0]],
            test.n_effective,
            test.w_plus,
            test.w_minus,
            test.p_two_sided,
            test.method
        );
        for bin in diff_histogram(&values, 6, "yoy") {
            println!(
                "  [{:+.4}, {:+.4}) {}",
                bin.bin_left,
                bin.bin_right,
                "#".repeat(bin.count)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
