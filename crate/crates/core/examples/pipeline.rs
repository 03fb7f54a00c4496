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

// The file pipeline end to end: receipts on disk, `ingest` to per-month edge
// lists, then `analyze` to records, partitions and summaries.

use std::fs;

use orgnet::ingest::IngestConfig;
use orgnet::pipeline::{run_analyze, run_ingest, AnalyzeOptions, IngestOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two teams of twenty per organization; most mail stays within a team.
fn synthetic_receipts(orgs: &[&str], months: u32) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut out = String::from("org_id,timestamp,sender,recipients\n");
    for org in orgs {
        for month in 1..=months {
            for _ in 0..300 {
                let a = rng.gen_range(0..40);
                let b = if rng.gen_bool(0.85) {
                    (a / 20) * 20 + rng.gen_range(0..20)
                } else {
                    rng.gen_range(0..40)
                };
                let day = rng.gen_range(1..=28);
                out.push_str(&format!(
                    "{org},2021-{month:02}-{day:02}T09:00:00Z,u{a:02},u{b:02}\n"
                ));
            }
        }
    }
    out
}

pub fn run_example() -> orgnet::Result<()> {
    let work = tempfile::tempdir()?;
    let receipts = work.path().join("receipts.csv");
    fs::write(&receipts, synthetic_receipts(&["acme", "globex"], 3))?;

    let ingest = IngestConfig {
        min_nodes: 30,
        ..IngestConfig::default()
    };
    let edges = work.path().join("edges");
    let outcome = run_ingest(&IngestOptions {
        input: receipts,
        out: edges.clone(),
        ingest,
    })?;
    println!("ingest wrote {} files", outcome.manifest.outputs.len());

    let results = work.path().join("results");
    let outcome = run_analyze(&AnalyzeOptions::new(&edges, &results))?;
    println!("analyze: {} failures", outcome.failures.len());
    print!("{}", fs::read_to_string(results.join("records.csv"))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
