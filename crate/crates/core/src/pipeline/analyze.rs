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

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{leiden, modularity_with_resolution, LeidenConfig, Partition};
use crate::error::{Error, Result};
use crate::formats::{self, EdgeListMeta};
use crate::graph::WeightedGraph;
use crate::ingest::{
    filter_eligible_orgs, read_receipts, IngestConfig, MonthlyAccumulator, NetworkKey,
    ReceiptFormat,
};
use crate::metrics::{month_over_month_ari, LabeledPartition};
use crate::month::YearMonth;
use crate::stats::{
    timeseries_summary, write_records, GroupBy, Metric, OrgMonthRecord, SummaryRow,
};

use super::{read_geography, with_threads, Failure, RunContext, RunOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    /// Edge lists if the input holds `<org>/<YYYY-MM>.csv` files, else receipts.
    #[default]
    Auto,
    Receipts,
    EdgeLists,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    pub input: PathBuf,
    pub out: PathBuf,
    pub input_kind: InputKind,
    /// Applied only when building networks from receipts; edge lists are
    /// taken as already filtered.
    pub ingest: IngestConfig,
    pub resolution: f64,
    pub seed: u64,
    /// Worker count across organization-months; 0 means one per core.
    pub threads: usize,
    /// Optional `org_id,geography` CSV for grouped summaries.
    pub geography: Option<PathBuf>,
}

impl AnalyzeOptions {
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            out: out.into(),
            input_kind: InputKind::Auto,
            ingest: IngestConfig::default(),
            resolution: 1.0,
            seed: 0,
            threads: 0,
            geography: None,
        }
    }
}

pub(crate) fn is_month_file(path: &Path) -> Option<YearMonth> {
    if path.extension()? != "csv" {
        return None;
    }
    path.file_stem()?.to_str()?.parse().ok()
}

/// `<org>/<YYYY-MM>.csv` files under `dir`, sorted.
pub(crate) fn edge_list_files(dir: &Path) -> Result<Vec<(String, YearMonth, PathBuf)>> {
    let mut out = Vec::new();
    if !dir.is_dir() {
        return Ok(out);
    }
    for org in fs::read_dir(dir)? {
        let org = org?.path();
        if !org.is_dir() {
            continue;
        }
        let Some(org_id) = org.file_name().and_then(|n| n.to_str()).map(str::to_owned) else {
            continue;
        };
        for file in fs::read_dir(&org)? {
            let file = file?.path();
            if let Some(month) = is_month_file(&file) {
                out.push((org_id.clone(), month, file));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Receipt files: the path itself, or the `.csv`/`.jsonl` files in it.
pub(crate) fn receipt_files(input: &Path) -> Result<Vec<(PathBuf, ReceiptFormat)>> {
    let format_of = |p: &Path| match p.extension().and_then(|e| e.to_str()) {
        Some("csv") => Some(ReceiptFormat::Csv),
        Some("jsonl") | Some("json") => Some(ReceiptFormat::Jsonl),
        _ => None,
    };
    if input.is_file() {
        let format = format_of(input).ok_or_else(|| {
            Error::InvalidInput(format!("unknown receipt format: {}", input.display()))
        })?;
        return Ok(vec![(input.to_owned(), format)]);
    }
    let mut out = Vec::new();
    if input.is_dir() {
        for entry in fs::read_dir(input)? {
            let p = entry?.path();
            if p.is_file() {
                if let Some(f) = format_of(&p) {
                    out.push((p, f));
                }
            }
        }
    } else {
        return Err(Error::InvalidInput(format!(
            "input not found: {}",
            input.display()
        )));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Builds eligible networks from receipt files; parse errors become failures.
pub(crate) fn networks_from_receipts(
    ctx: &mut RunContext,
    input: &Path,
    config: &IngestConfig,
    failures: &mut Vec<Failure>,
) -> Result<(
    BTreeMap<NetworkKey, WeightedGraph>,
    Vec<crate::ingest::Exclusion>,
)> {
    config.validate()?;
    let mut acc = MonthlyAccumulator::new(*config);
    for (path, format) in receipt_files(input)? {
        ctx.record_input(&path)?;
        for item in read_receipts(BufReader::new(File::open(&path)?), format) {
            match item {
                Ok(r) => acc.add(&r),
                Err(e) => failures.push(Failure {
                    org_id: String::new(),
                    month: String::new(),
                    stage: "parse".into(),
                    message: format!("{}:{}: {}", path.display(), e.line, e.message),
                }),
            }
        }
    }
    let eligibility = filter_eligible_orgs(acc.into_networks(), config);
    Ok((eligibility.retained, eligibility.excluded))
}

fn load_edge_list(path: &Path) -> Result<WeightedGraph> {
    let g = formats::read_edge_list(BufReader::new(File::open(path)?))?;
    let sidecar = path.with_extension("json");
    if sidecar.is_file() {
        let meta: EdgeListMeta = serde_json::from_reader(BufReader::new(File::open(&sidecar)?))?;
        if (meta.node_count, meta.edge_count, meta.total_weight)
            != (g.node_count(), g.edge_count(), g.total_weight())
        {
            return Err(Error::InvalidInput(format!(
                "sidecar {} disagrees with edge list",
                sidecar.display()
            )));
        }
    }
    Ok(g)
}

struct Analyzed {
    graph: WeightedGraph,
    partition: Partition,
    q: f64,
}

#[derive(Serialize)]
struct ScatterRow<'a> {
    org_id: &'a str,
    month: YearMonth,
    n: usize,
    #[serde(rename = "Q")]
    q: f64,
}

#[derive(Serialize)]
struct AriRow<'a> {
    org_id: &'a str,
    month: YearMonth,
    ari_vs_prev: Option<f64>,
    common_nodes: usize,
}

/// For every organization-month: largest connected component, seeded Leiden,
/// modularity; then month-over-month ARI per organization and grouped monthly
/// summaries.
pub fn run_analyze(options: &AnalyzeOptions) -> Result<RunOutcome> {
    let mut ctx = RunContext::new("analyze", options, &options.out)?;
    let mut failures = Vec::new();

    let kind = match options.input_kind {
        InputKind::Auto if !edge_list_files(&options.input)?.is_empty() => InputKind::EdgeLists,
        InputKind::Auto => InputKind::Receipts,
        k => k,
    };
    let mut networks: BTreeMap<NetworkKey, WeightedGraph> = BTreeMap::new();
    match kind {
        InputKind::EdgeLists => {
            let files = edge_list_files(&options.input)?;
            for (_, _, path) in &files {
                ctx.record_input(path)?;
            }
            let loaded: Vec<_> = with_threads(options.threads, || {
                files
                    .par_iter()
                    .map(|(org, month, path)| ((org.clone(), *month), load_edge_list(path)))
                    .collect()
            })?;
            for (key, result) in loaded {
                match result {
                    Ok(g) => {
                        networks.insert(key, g.largest_connected_component());
                    }
                    Err(e) => failures.push(Failure {
                        org_id: key.0,
                        month: key.1.to_string(),
                        stage: "load".into(),
                        message: e.to_string(),
                    }),
                }
            }
        }
        _ => {
            if options.input.exists() {
                let (retained, excluded) = networks_from_receipts(
                    &mut ctx,
                    &options.input,
                    &options.ingest,
                    &mut failures,
                )?;
                networks = retained;
                ctx.write_json("exclusions.json", &excluded)?;
            } else {
                return Err(Error::InvalidInput(format!(
                    "input not found: {}",
                    options.input.display()
                )));
            }
        }
    }
    let geography = match &options.geography {
        Some(p) => {
            ctx.record_input(p)?;
            read_geography(p)?
        }
        None => HashMap::new(),
    };

    let leiden_config = LeidenConfig {
        resolution: options.resolution,
        seed: options.seed,
        ..LeidenConfig::default()
    };
    let units: Vec<(NetworkKey, WeightedGraph)> = networks.into_iter().collect();
    let analyzed: Vec<(NetworkKey, Result<Analyzed>)> = with_threads(options.threads, || {
        units
            .into_par_iter()
            .map(|(key, graph)| {
                let result = if graph.edge_count() == 0 {
                    Err(Error::InvalidInput("network has no edges".into()))
                } else {
                    let partition = leiden(&graph, &leiden_config);
                    modularity_with_resolution(&graph, &partition, options.resolution).map(|q| {
                        Analyzed {
                            graph,
                            partition,
                            q,
                        }
                    })
                };
                (key, result)
            })
            .collect()
    })?;

    let mut done: BTreeMap<NetworkKey, Analyzed> = BTreeMap::new();
    for (key, result) in analyzed {
        match result {
            Ok(a) => {
                done.insert(key, a);
            }
            Err(e) => failures.push(Failure {
                org_id: key.0,
                month: key.1.to_string(),
                stage: "analyze".into(),
                message: e.to_string(),
            }),
        }
    }

    let mut records = Vec::with_capacity(done.len());
    let mut ari_rows = Vec::new();
    for ((org, month), a) in &done {
        let prev = done.get(&(org.clone(), month.prev()));
        let point = prev.map(|p| {
            month_over_month_ari(&[
                LabeledPartition {
                    ids: p.graph.ids(),
                    partition: &p.partition,
                },
                LabeledPartition {
                    ids: a.graph.ids(),
                    partition: &a.partition,
                },
            ])[0]
        });
        if let Some(point) = point {
            ari_rows.push(AriRow {
                org_id: org,
                month: *month,
                ari_vs_prev: point.ari,
                common_nodes: point.common_nodes,
            });
        }
        records.push(OrgMonthRecord {
            org_id: org.clone(),
            month: *month,
            node_count: a.graph.node_count(),
            edge_count: a.graph.edge_count(),
            total_weight: a.graph.total_weight(),
            modularity: a.q,
            ari_prev: point.and_then(|p| p.ari),
            geography: geography.get(org).cloned(),
        });
    }

    write_records(&records, ctx.create("records.csv")?)?;
    let scatter: Vec<ScatterRow> = records
        .iter()
        .map(|r| ScatterRow {
            org_id: &r.org_id,
            month: r.month,
            n: r.node_count,
            q: r.modularity,
        })
        .collect();
    ctx.write_csv("scatter.csv", &["org_id", "month", "n", "Q"], &scatter)?;
    ctx.write_csv(
        "ari.csv",
        &["org_id", "month", "ari_vs_prev", "common_nodes"],
        &ari_rows,
    )?;
    let mut summary: Vec<SummaryRow> = Metric::ALL
        .iter()
        .flat_map(|&m| timeseries_summary(&records, GroupBy::None, m))
        .collect();
    if options.geography.is_some() {
        summary.extend(
            Metric::ALL
                .iter()
                .flat_map(|&m| timeseries_summary(&records, GroupBy::Geography, m)),
        );
    }
    ctx.write_csv(
        "summary.csv",
        &["month", "group", "metric", "mean", "stderr", "count"],
        &summary,
    )?;
    for ((org, month), a) in &done {
        let w = ctx.create(&format!("partitions/{org}/{month}.csv"))?;
        formats::write_partition(&a.graph, &a.partition, w)?;
    }
    ctx.finish(failures)
}
