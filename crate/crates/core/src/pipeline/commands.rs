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

use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{leiden, modularity, LeidenConfig, Partition};
use crate::error::{Error, Result};
use crate::formats::{self, EdgeListMeta};
use crate::generators::{sample_sbm, SbmSpec};
use crate::ingest::IngestConfig;
use crate::metrics::{adjusted_rand_fraction, ContingencyTable};
use crate::month::YearMonth;
use crate::seed;
use crate::stats::{
    bootstrap_modularity, diff_histogram, group_change, read_records, wilcoxon_signed_rank,
    BootstrapConfig, BootstrapResult, WilcoxonResult,
};

use super::analyze::networks_from_receipts;
use super::{read_geography, with_threads, Failure, RunContext, RunOutcome};

fn safe_component(s: &str) -> bool {
    !s.is_empty() && s != "." && s != ".." && !s.contains(['/', '\\', '\0'])
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IngestOptions {
    /// A receipt file or a directory of `.csv`/`.jsonl` receipt files.
    pub input: PathBuf,
    pub out: PathBuf,
    pub ingest: IngestConfig,
}

/// Writes one edge list (with a JSON sidecar) per eligible
/// organization-month as `<org>/<YYYY-MM>.csv`, plus `exclusions.json`.
pub fn run_ingest(options: &IngestOptions) -> Result<RunOutcome> {
    let mut ctx = RunContext::new("ingest", options, &options.out)?;
    let mut failures = Vec::new();
    let (networks, excluded) =
        networks_from_receipts(&mut ctx, &options.input, &options.ingest, &mut failures)?;
    for ((org, month), g) in &networks {
        if !safe_component(org) {
            failures.push(Failure {
                org_id: org.clone(),
                month: month.to_string(),
                stage: "write".into(),
                message: "organization id is not usable as a directory name".into(),
            });
            continue;
        }
        formats::write_edge_list(g, ctx.create(&format!("{org}/{month}.csv"))?)?;
        ctx.write_json(
            &format!("{org}/{month}.json"),
            &EdgeListMeta::of(org, *month, g),
        )?;
    }
    ctx.write_json("exclusions.json", &excluded)?;
    ctx.finish(failures)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BootstrapOptions {
    /// Edge list with header `u,v,weight`.
    pub input: PathBuf,
    pub out: PathBuf,
    pub config: BootstrapConfig,
    pub threads: usize,
}

#[derive(Serialize)]
struct BootstrapReport<'a> {
    #[serde(flatten)]
    result: &'a BootstrapResult,
    label: String,
}

/// Bootstrap distribution of Leiden modularity for one graph, written to
/// `bootstrap.json`.
pub fn run_bootstrap(options: &BootstrapOptions) -> Result<(BootstrapResult, RunOutcome)> {
    let mut ctx = RunContext::new("bootstrap", options, &options.out)?;
    ctx.record_input(&options.input)?;
    let g = formats::read_edge_list(BufReader::new(File::open(&options.input)?))?;
    let result = with_threads(options.threads, || {
        bootstrap_modularity(&g, &options.config)
    })??;
    ctx.write_json(
        "bootstrap.json",
        &BootstrapReport {
            result: &result,
            label: result.label(),
        },
    )?;
    Ok((result.clone(), ctx.finish(Vec::new())?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareYearsOptions {
    /// Records CSV as written by `analyze`.
    pub records: PathBuf,
    pub out: PathBuf,
    pub earlier: YearMonth,
    pub later: YearMonth,
    pub bins: usize,
    pub geography: Option<PathBuf>,
}

#[derive(Serialize)]
struct DiffRow<'a> {
    org_id: &'a str,
    diff: f64,
}

#[derive(Serialize)]
struct WilcoxonReport<'a> {
    pair_label: &'a str,
    pairs: usize,
    excluded: usize,
    mean_diff: Option<f64>,
    test: Option<WilcoxonResult>,
}

/// Paired year-over-year modularity differences between two months: the
/// differences, their histogram, a Wilcoxon signed-rank test and per-group
/// means.
pub fn run_compare_years(
    options: &CompareYearsOptions,
) -> Result<(Option<WilcoxonResult>, RunOutcome)> {
    let mut ctx = RunContext::new("compare-years", options, &options.out)?;
    ctx.record_input(&options.records)?;
    let geography = match &options.geography {
        Some(p) => {
            ctx.record_input(p)?;
            read_geography(p)?
        }
        None => HashMap::new(),
    };
    let records = read_records(BufReader::new(File::open(&options.records)?), &geography)?;
    let paired = crate::stats::yoy_paired_diffs(&records, options.earlier, options.later);
    let values = paired.values();

    let rows: Vec<DiffRow> = paired
        .diffs
        .iter()
        .map(|(org, d)| DiffRow {
            org_id: org,
            diff: *d,
        })
        .collect();
    ctx.write_csv("diffs.csv", &["org_id", "diff"], &rows)?;
    ctx.write_csv(
        "histogram.csv",
        &["bin_left", "bin_right", "count", "pair_label"],
        &diff_histogram(&values, options.bins, &paired.label),
    )?;

    let mut failures = Vec::new();
    let test = if values.is_empty() {
        None
    } else {
        match wilcoxon_signed_rank(&values) {
            Ok(t) => Some(t),
            Err(e) => {
                failures.push(Failure {
                    org_id: String::new(),
                    month: options.later.to_string(),
                    stage: "wilcoxon".into(),
                    message: e.to_string(),
                });
                None
            }
        }
    };
    ctx.write_json(
        "wilcoxon.json",
        &WilcoxonReport {
            pair_label: &paired.label,
            pairs: values.len(),
            excluded: paired.excluded,
            mean_diff: (!values.is_empty())
                .then(|| values.iter().sum::<f64>() / values.len() as f64),
            test: test.clone(),
        },
    )?;
    ctx.write_csv(
        "by_group.csv",
        &["group", "mean_earlier", "mean_later", "delta", "count"],
        &group_change(&records, options.earlier, options.later),
    )?;
    Ok((test, ctx.finish(failures)?))
}

/// Leiden modularity of one toy SBM variant across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyVariant {
    pub within: f64,
    pub between: f64,
    pub seeds: usize,
    pub mean_q: f64,
    pub sd_q: f64,
    pub min_q: f64,
    pub max_q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyReport {
    /// Contingency table of the two-node swap between two blocks of ten.
    pub contingency: Vec<Vec<u64>>,
    pub ari_numerator: i128,
    pub ari_denominator: i128,
    pub ari: f64,
    pub variants: Vec<ToyVariant>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToyOptions {
    pub out: Option<PathBuf>,
    pub seeds: usize,
    pub seed: u64,
    pub threads: usize,
}

impl Default for ToyOptions {
    fn default() -> Self {
        Self {
            out: None,
            seeds: 500,
            seed: 0,
            threads: 0,
        }
    }
}

/// Two blocks of ten; nodes 8 and 9 move to the second block and 10 and 11
/// to the first.
pub fn toy_swap_partitions() -> (Partition, Partition) {
    let before = Partition::from_labels((0..20u32).map(|v| (v >= 10) as u32));
    let after = Partition::from_labels((0..20u32).map(|v| match v {
        8 | 9 => 1,
        10 | 11 => 0,
        v => (v >= 10) as u32,
    }));
    (before, after)
}

/// Mean Leiden modularity of `SBM(10+10; within, between)` over `seeds`
/// samples; sample `i` uses seed `derive(seed, i)` for both graph and Leiden.
pub fn toy_variant(within: f64, between: f64, seeds: usize, seed: u64) -> Result<ToyVariant> {
    if seeds == 0 {
        return Err(Error::InvalidInput("seeds must be positive".into()));
    }
    let spec = SbmSpec::planted(vec![10, 10], within, between)?;
    let qs: Vec<f64> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(seed, i);
            let g = sample_sbm(&spec, s);
            if g.edge_count() == 0 {
                return Ok(0.0);
            }
            modularity(&g, &leiden(&g, &LeidenConfig::with_seed(s)))
        })
        .collect::<Result<_>>()?;
    let n = qs.len() as f64;
    let mean = qs.iter().sum::<f64>() / n;
    let sd = if qs.len() > 1 {
        (qs.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(ToyVariant {
        within,
        between,
        seeds,
        mean_q: mean,
        sd_q: sd,
        min_q: qs.iter().copied().fold(f64::INFINITY, f64::min),
        max_q: qs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// The two-block toy: exact ARI of the swap and Leiden modularity of the
/// 0.15- and 0.05-between variants.
pub fn toy_report(seeds: usize, seed: u64) -> Result<ToyReport> {
    let (before, after) = toy_swap_partitions();
    let table = ContingencyTable::from_labels(before.labels(), after.labels())?;
    let (num, den) = adjusted_rand_fraction(&table)?;
    Ok(ToyReport {
        contingency: table.to_dense(),
        ari_numerator: num,
        ari_denominator: den,
        ari: num as f64 / den as f64,
        variants: vec![
            toy_variant(0.5, 0.15, seeds, seed)?,
            toy_variant(0.5, 0.05, seeds, seed)?,
        ],
    })
}

/// Computes the toy report and, if an output directory is given, writes
/// `toy.json` there.
pub fn run_toy_example(options: &ToyOptions) -> Result<(ToyReport, Option<RunOutcome>)> {
    let report = with_threads(options.threads, || toy_report(options.seeds, options.seed))??;
    let outcome = match &options.out {
        Some(out) => {
            let mut ctx = RunContext::new("toy-example", options, out)?;
            ctx.write_json("toy.json", &report)?;
            Some(ctx.finish(Vec::new())?)
        }
        None => None,
    };
    Ok((report, outcome))
}
