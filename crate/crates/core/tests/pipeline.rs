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

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use orgnet::ingest::IngestConfig;
use orgnet::month::YearMonth;
use orgnet::pipeline::{
    run_analyze, run_bootstrap, run_compare_years, run_generate, run_ingest, AnalyzeOptions,
    BootstrapOptions, CompareYearsOptions, GenerateMode, GenerateOptions, IngestOptions, InputKind,
    RunManifest, MANIFEST_FILE,
};
use orgnet::stats::{bootstrap_modularity, BootstrapConfig};
use tempfile::TempDir;

const GOLDEN_RECORDS: &str = include_str!("golden/records.csv");

fn small_ingest() -> IngestConfig {
    IngestConfig {
        min_nodes: 10,
        ..IngestConfig::default()
    }
}

/// Two organizations over three months, written as receipts.
fn fixture(dir: &Path) -> PathBuf {
    let path = dir.join("receipts.csv");
    fs::write(
        &path,
        common::receipts_csv(&["acme", "globex"], 3, 30, 400, 1),
    )
    .unwrap();
    path
}

fn ingest(input: &Path, out: &Path) {
    let outcome = run_ingest(&IngestOptions {
        input: input.to_owned(),
        out: out.to_owned(),
        ingest: small_ingest(),
    })
    .unwrap();
    assert!(outcome.succeeded(), "{:?}", outcome.failures);
}

fn analyze(input: &Path, out: &Path, threads: usize) -> orgnet::pipeline::RunOutcome {
    let mut options = AnalyzeOptions::new(input, out);
    options.ingest = small_ingest();
    options.seed = 7;
    options.threads = threads;
    run_analyze(&options).unwrap()
}

/// Every file under `dir` except the manifest, by relative path.
fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else if path.file_name().unwrap() != MANIFEST_FILE {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_slice(&fs::read(dir.join(MANIFEST_FILE)).unwrap()).unwrap()
}

#[test]
fn empty_input_gives_empty_outputs_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("in");
    fs::create_dir(&input).unwrap();
    let out = tmp.path().join("out");
    let outcome = analyze(&input, &out, 1);
    assert!(outcome.succeeded());
    let files = tree(&out);
    assert_eq!(
        files["records.csv"],
        b"org,month,n,edges,weight,Q,ari_prev\n"
    );
    assert_eq!(files["ari.csv"], b"org_id,month,ari_vs_prev,common_nodes\n");
    assert_eq!(files["failures.csv"], b"org_id,month,stage,message\n");
    let m = manifest(&out);
    assert_eq!(m.command, "analyze");
    assert!(m.inputs.is_empty());
    assert_eq!(m.outputs.len(), files.len());
}

#[test]
fn records_match_golden_run() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let edges = tmp.path().join("edges");
    ingest(&receipts, &edges);
    let out = tmp.path().join("analysis");
    assert!(analyze(&edges, &out, 2).succeeded());
    let records = fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(records, GOLDEN_RECORDS);

    // Straight from receipts the analysis is the same.
    let direct = tmp.path().join("direct");
    assert!(analyze(&receipts, &direct, 2).succeeded());
    assert_eq!(
        fs::read_to_string(direct.join("records.csv")).unwrap(),
        GOLDEN_RECORDS
    );
}

#[test]
fn golden_records_have_expected_shape() {
    let mut lines = GOLDEN_RECORDS.lines();
    assert_eq!(lines.next(), Some("org,month,n,edges,weight,Q,ari_prev"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], if i < 3 { "acme" } else { "globex" });
        assert_eq!(row[2], "30");
        let q: f64 = row[5].parse().unwrap();
        assert!(
            q > 0.2 && q < 0.5,
            "two planted halves give clear structure"
        );
        assert_eq!(row[6].is_empty(), i % 3 == 0);
    }
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    analyze(&receipts, &a, 1);
    analyze(&receipts, &b, 4);
    assert_eq!(tree(&a), tree(&b));
    let (ma, mb) = (manifest(&a), manifest(&b));
    assert_eq!(ma.inputs, mb.inputs);
    assert_eq!(ma.outputs, mb.outputs);
}

#[test]
fn corrupt_file_is_isolated_to_its_org_month() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let edges = tmp.path().join("edges");
    ingest(&receipts, &edges);
    let clean = tmp.path().join("clean");
    analyze(&edges, &clean, 2);

    fs::write(
        edges.join("acme/2021-02.csv"),
        "u,v,weight\np01,p02,not-a-number\n",
    )
    .unwrap();
    let broken = tmp.path().join("broken");
    let outcome = analyze(&edges, &broken, 2);
    assert_eq!(outcome.failures.len(), 1);
    assert_eq!(
        (
            outcome.failures[0].org_id.as_str(),
            outcome.failures[0].month.as_str()
        ),
        ("acme", "2021-02")
    );

    let (c, b) = (tree(&clean), tree(&broken));
    for (file, bytes) in &c {
        if file.starts_with("partitions/globex") {
            assert_eq!(b.get(file), Some(bytes), "{file}");
        }
    }
    assert!(!b.contains_key("partitions/acme/2021-02.csv"));
    assert_eq!(
        c["partitions/acme/2021-01.csv"],
        b["partitions/acme/2021-01.csv"]
    );
    let rows = |t: &BTreeMap<String, Vec<u8>>, org: &str| -> Vec<String> {
        String::from_utf8(t["records.csv"].clone())
            .unwrap()
            .lines()
            .filter(|l| l.starts_with(org))
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(rows(&c, "globex"), rows(&b, "globex"));
    assert_eq!(rows(&b, "acme").len(), 2);
}

#[test]
fn sidecar_mismatch_is_a_failure() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let edges = tmp.path().join("edges");
    ingest(&receipts, &edges);
    let sidecar = edges.join("globex/2021-03.json");
    let text = fs::read_to_string(&sidecar)
        .unwrap()
        .replace("\"node_count\": 30", "\"node_count\": 31");
    fs::write(&sidecar, text).unwrap();
    let outcome = analyze(&edges, &tmp.path().join("out"), 1);
    assert_eq!(outcome.failures.len(), 1);
    assert_eq!(outcome.failures[0].org_id, "globex");
}

#[test]
fn ingest_writes_edge_lists_sidecars_and_exclusions() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("r.csv");
    let mut csv = common::receipts_csv(&["acme", "globex"], 3, 30, 400, 1);
    // An org absent from March is excluded.
    csv.push_str(&common::receipts_csv(&["initech"], 2, 30, 400, 2).replacen(
        "org_id,timestamp,sender,recipients\n",
        "",
        1,
    ));
    csv.push_str("acme,not-a-time,p01,p02\n");
    fs::write(&path, csv).unwrap();
    let out = tmp.path().join("out");
    let outcome = run_ingest(&IngestOptions {
        input: path,
        out: out.clone(),
        ingest: small_ingest(),
    })
    .unwrap();
    assert_eq!(outcome.failures.len(), 1);
    assert_eq!(outcome.failures[0].stage, "parse");
    assert!(out.join("acme/2021-03.csv").is_file());
    assert!(out.join("globex/2021-01.json").is_file());
    assert!(!out.join("initech").exists());
    let exclusions: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("exclusions.json")).unwrap()).unwrap();
    assert_eq!(exclusions[0]["org_id"], "initech");
    assert_eq!(exclusions[0]["reason"], "missing_months");
}

#[test]
fn analyze_with_geography_groups_summaries() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let geo = tmp.path().join("geo.csv");
    fs::write(&geo, "org_id,geography\nacme,EU\n").unwrap();
    let mut options = AnalyzeOptions::new(&receipts, tmp.path().join("out"));
    options.ingest = small_ingest();
    options.input_kind = InputKind::Receipts;
    options.geography = Some(geo);
    run_analyze(&options).unwrap();
    let summary = fs::read_to_string(tmp.path().join("out/summary.csv")).unwrap();
    assert!(summary.contains("2021-01,EU,Q,"));
    assert!(summary.contains("2021-01,unknown,Q,"));
    assert!(summary.contains("2021-01,all,Q,"));
}

#[test]
fn bootstrap_command_matches_library() {
    let tmp = TempDir::new().unwrap();
    let g = common::two_cliques(6, 3);
    let input = tmp.path().join("g.csv");
    orgnet::formats::write_edge_list(&g, fs::File::create(&input).unwrap()).unwrap();
    let config = BootstrapConfig {
        iterations: 40,
        seed: 5,
        resolution: 1.0,
    };
    let (result, outcome) = run_bootstrap(&BootstrapOptions {
        input,
        out: tmp.path().join("out"),
        config,
        threads: 2,
    })
    .unwrap();
    assert!(outcome.succeeded());
    assert_eq!(result, bootstrap_modularity(&g, &config).unwrap());
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("out/bootstrap.json")).unwrap()).unwrap();
    assert_eq!(json["iterations"], 40);
    assert_eq!(json["label"], result.label());
}

#[test]
fn compare_years_pairs_orgs() {
    let tmp = TempDir::new().unwrap();
    let records = tmp.path().join("records.csv");
    let mut text = String::from("org,month,n,edges,weight,Q,ari_prev\n");
    for i in 0..12 {
        let q = 0.3 + 0.01 * i as f64;
        text.push_str(&format!("o{i:02},2020-04,100,300,500,{q},\n"));
        text.push_str(&format!(
            "o{i:02},2021-04,100,300,500,{},\n",
            q + 0.02 + 0.001 * i as f64
        ));
    }
    text.push_str("lonely,2021-04,100,300,500,0.5,\n");
    fs::write(&records, text).unwrap();
    let (test, outcome) = run_compare_years(&CompareYearsOptions {
        records,
        out: tmp.path().join("out"),
        earlier: YearMonth::new(2020, 4).unwrap(),
        later: YearMonth::new(2021, 4).unwrap(),
        bins: 5,
        geography: None,
    })
    .unwrap();
    assert!(outcome.succeeded());
    let test = test.unwrap();
    assert_eq!(test.n_effective, 12);
    assert_eq!(test.w_minus, 0.0);
    // All 12 signs positive: p = 2 / 2^12.
    assert!((test.p_two_sided - 2.0 / 4096.0).abs() < 1e-15);
    let histogram = fs::read_to_string(tmp.path().join("out/histogram.csv")).unwrap();
    assert_eq!(histogram.lines().count(), 6);
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("out/wilcoxon.json")).unwrap()).unwrap();
    assert_eq!(report["excluded"], 1);
}

#[test]
fn generate_bahsbm_on_two_cliques_has_two_leaves_and_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("g.csv");
    orgnet::formats::write_edge_list(
        &common::two_cliques(20, 2),
        fs::File::create(&input).unwrap(),
    )
    .unwrap();
    let run = |out: &str| {
        let mut options = GenerateOptions::new(&input, tmp.path().join(out), GenerateMode::Bahsbm);
        options.seeds = vec![3, 1, 2];
        run_generate(&options).unwrap()
    };
    let (reports, outcome) = run("a");
    assert!(outcome.succeeded());
    assert_eq!(reports.iter().map(|r| r.0).collect::<Vec<_>>(), [1, 2, 3]);
    let model: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("a/model.json")).unwrap()).unwrap();
    assert_eq!(model["leaves"].as_array().unwrap().len(), 2);
    run("b");
    assert_eq!(tree(&tmp.path().join("a")), tree(&tmp.path().join("b")));
}

#[test]
fn generate_surfaces_infeasible_budgets() {
    // A triangle plus a pendant path: Leiden blocks too small for BA budgets
    // still sample; ER mode always succeeds.
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("g.csv");
    fs::write(&input, "u,v,weight\na,b,1\nb,c,1\na,c,1\nc,d,1\n").unwrap();
    for mode in [
        GenerateMode::SbmEr,
        GenerateMode::SbmBa,
        GenerateMode::Bahsbm,
    ] {
        let options = GenerateOptions::new(&input, tmp.path().join(format!("{mode:?}")), mode);
        let (reports, outcome) = run_generate(&options).unwrap();
        assert_eq!(reports.len() + outcome.failures.len(), 1);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_orgnet");
    let tmp = TempDir::new().unwrap();
    let status = Command::new(bin)
        .args(["toy-example", "--seeds", "10"])
        .output()
        .unwrap();
    assert!(status.status.success());
    let toy: serde_json::Value = serde_json::from_slice(&status.stdout).unwrap();
    assert_eq!(toy["contingency"], serde_json::json!([[8, 2], [2, 8]]));

    let receipts = fixture(tmp.path());
    let edges = tmp.path().join("edges");
    let ok = Command::new(bin)
        .args(["ingest", "--min-nodes", "10", "--input"])
        .arg(&receipts)
        .arg("--out")
        .arg(&edges)
        .status()
        .unwrap();
    assert!(ok.success());
    fs::write(edges.join("acme/2021-01.csv"), "garbage").unwrap();
    let failed = Command::new(bin)
        .args(["analyze", "--input"])
        .arg(&edges)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(failed.code(), Some(1));
    let missing = Command::new(bin)
        .args(["bootstrap", "--input"])
        .arg(tmp.path().join("nope.csv"))
        .arg("--out")
        .arg(tmp.path().join("bs"))
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));
}

#[test]
fn recorded_modularity_matches_oracle_on_written_partitions() {
    let tmp = TempDir::new().unwrap();
    let receipts = fixture(tmp.path());
    let edges = tmp.path().join("edges");
    ingest(&receipts, &edges);
    let out = tmp.path().join("out");
    analyze(&edges, &out, 1);
    for line in GOLDEN_RECORDS.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let g = orgnet::formats::read_edge_list(
            fs::File::open(edges.join(f[0]).join(format!("{}.csv", f[1]))).unwrap(),
        )
        .unwrap();
        let p = orgnet::formats::read_partition(
            &g,
            fs::File::open(
                out.join("partitions")
                    .join(f[0])
                    .join(format!("{}.csv", f[1])),
            )
            .unwrap(),
        )
        .unwrap();
        let q: f64 = f[5].parse().unwrap();
        assert!((q - common::modularity_oracle(&g, p.labels())).abs() < 1e-12);
        assert_eq!(f[3].parse::<usize>().unwrap(), g.edge_count());
        assert_eq!(f[4].parse::<u64>().unwrap(), g.total_weight());
    }
}
