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

// Receipts to monthly networks: recipient cap, self-pair removal, largest
// component and the eligibility filter.

use orgnet::ingest::{
    filter_eligible_orgs, parse_receipts, receipts_to_monthly_networks, IngestConfig, ReceiptFormat,
};

const RECEIPTS: &str = "\
org_id,timestamp,sender,recipients
acme,2021-01-04T09:00:00Z,ana,bo;cy
acme,2021-01-05T10:00:00Z,bo,ana;ana
acme,2021-01-06T11:00:00Z,cy,ana;bo;di;ed;fy
acme,2021-01-07T12:00:00Z,di,ed
acme,2021-02-01T08:30:00Z,ana,bo;cy;di
acme,2021-02-02T08:30:00Z,di,ana
acme,2021-02-03T08:30:00Z,ed,fy
globex,2021-01-11T15:00:00Z,zed,yan;xu
globex,2021-01-12T15:00:00Z,zed,zed
acme,2021-02-30T00:00:00Z,ana,bo
";

pub fn run_example() -> orgnet::Result<()> {
    let parsed = parse_receipts(RECEIPTS.as_bytes(), ReceiptFormat::Csv, false)?;
    for e in &parsed.errors {
        println!("skipped line {}: {}", e.line, e.message);
    }

    let config = IngestConfig {
        min_nodes: 2,
        ..IngestConfig::default()
    };
    let networks = receipts_to_monthly_networks(&parsed.receipts, &config);
    for ((org, month), g) in &networks {
        let s = g.stats();
        println!(
            "{org} {month}: {} nodes, {} edges, weight {}",
            s.node_count, s.edge_count, s.total_weight
        );
    }

    let eligible = filter_eligible_orgs(networks, &config);
    for ex in &eligible.excluded {
        println!("excluded {}: {:?}", ex.org_id, ex.reason);
    }
    println!("{} networks retained", eligible.retained.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> orgnet::Result<()> {
    run_example()
}
