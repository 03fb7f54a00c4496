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

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::{leiden, LeidenConfig};
use crate::error::{Error, Result};
use crate::formats;
use crate::generators::{
    compare_graphs, fit_aposteriori_sbm, fit_bahsbm, sample_bahsbm, sample_root_sbm, CompareConfig,
    ComparisonReport, IntraModel,
};
use crate::graph::WeightedGraph;

use super::{with_threads, Failure, RunContext, RunOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerateMode {
    /// Root Leiden blocks, Erdős–Rényi inside blocks.
    SbmEr,
    /// Root Leiden blocks, preferential attachment inside blocks.
    SbmBa,
    /// Hierarchical Leiden leaves with preferential attachment inside leaves.
    Bahsbm,
}

impl std::str::FromStr for GenerateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sbm-er" => Ok(Self::SbmEr),
            "sbm-ba" => Ok(Self::SbmBa),
            "bahsbm" => Ok(Self::Bahsbm),
            _ => Err(Error::InvalidInput(format!("unknown generator mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenerateOptions {
    /// Target edge list with header `u,v,weight`.
    pub input: PathBuf,
    pub out: PathBuf,
    pub mode: GenerateMode,
    /// One sample per seed.
    pub seeds: Vec<u64>,
    /// Seed for fitting the model (Leiden runs).
    pub fit_seed: u64,
    pub resolution: f64,
    pub n_max: usize,
    pub path_samples: usize,
    pub threads: usize,
}

impl GenerateOptions {
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>, mode: GenerateMode) -> Self {
        Self {
            input: input.into(),
            out: out.into(),
            mode,
            seeds: vec![0],
            fit_seed: 0,
            resolution: 1.0,
            n_max: 250,
            path_samples: CompareConfig::default().path_samples,
            threads: 0,
        }
    }
}

enum Fitted {
    Sbm(crate::generators::AposterioriSbmFit, IntraModel),
    Bahsbm(crate::generators::BahsbmModel),
}

impl Fitted {
    fn sample(&self, seed: u64) -> Result<WeightedGraph> {
        match self {
            Fitted::Sbm(fit, intra) => sample_root_sbm(fit, *intra, seed),
            Fitted::Bahsbm(model) => sample_bahsbm(model, seed),
        }
    }
}

/// Fits one model to the target graph, then writes `model.json`,
/// `samples/sample_<seed>.csv` and `reports/report_<seed>.json` per seed.
pub fn run_generate(
    options: &GenerateOptions,
) -> Result<(Vec<(u64, ComparisonReport)>, RunOutcome)> {
    let mut ctx = RunContext::new("generate", options, &options.out)?;
    ctx.record_input(&options.input)?;
    let g = formats::read_edge_list(BufReader::new(File::open(&options.input)?))?;

    let fitted = match options.mode {
        GenerateMode::Bahsbm => {
            let model = fit_bahsbm(&g, options.n_max, options.fit_seed)?;
            ctx.write_json("model.json", &model)?;
            Fitted::Bahsbm(model)
        }
        mode => {
            let config = LeidenConfig {
                resolution: options.resolution,
                seed: options.fit_seed,
                ..LeidenConfig::default()
            };
            let fit = fit_aposteriori_sbm(&g, &leiden(&g, &config))?;
            ctx.write_json("model.json", &fit)?;
            let intra = if mode == GenerateMode::SbmBa {
                IntraModel::Ba
            } else {
                IntraModel::Er
            };
            Fitted::Sbm(fit, intra)
        }
    };

    let mut seeds = options.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let samples: Vec<(u64, Result<(WeightedGraph, ComparisonReport)>)> =
        with_threads(options.threads, || {
            seeds
                .par_iter()
                .map(|&s| {
                    let result = fitted.sample(s).map(|sample| {
                        let config = CompareConfig {
                            seed: s,
                            path_samples: options.path_samples,
                        };
                        let report = compare_graphs(&g, &sample, &config);
                        (sample, report)
                    });
                    (s, result)
                })
                .collect()
        })?;

    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for (s, result) in samples {
        match result {
            Ok((sample, report)) => {
                formats::write_edge_list(&sample, ctx.create(&format!("samples/sample_{s}.csv"))?)?;
                ctx.write_json(&format!("reports/report_{s}.json"), &report)?;
                reports.push((s, report));
            }
            Err(e) => failures.push(Failure {
                org_id: String::new(),
                month: String::new(),
                stage: format!("sample {s}"),
                message: e.to_string(),
            }),
        }
    }
    Ok((reports, ctx.finish(failures)?))
}
