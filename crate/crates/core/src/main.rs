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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orgnet::ingest::IngestConfig;
use orgnet::month::YearMonth;
use orgnet::pipeline::{
    run_analyze, run_bootstrap, run_compare_years, run_generate, run_ingest, run_toy_example,
    AnalyzeOptions, BootstrapOptions, CompareYearsOptions, GenerateMode, GenerateOptions,
    IngestOptions, InputKind, RunOutcome, ToyOptions,
};
use orgnet::stats::BootstrapConfig;

#[derive(Parser)]
#[command(
    name = "orgnet",
    version,
    about = "Monthly organizational network analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IngestFlags {
    /// Messages with more recipients are dropped.
    #[arg(long, default_value_t = 4)]
    max_recipients: usize,
    /// Organizations need more nodes than this in every month.
    #[arg(long, default_value_t = 2000)]
    min_nodes: usize,
    /// Calendar offset from UTC for month boundaries, in seconds.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    utc_offset_seconds: i32,
}

impl IngestFlags {
    fn config(&self) -> IngestConfig {
        IngestConfig {
            max_recipients: self.max_recipients,
            min_nodes: self.min_nodes,
            utc_offset_seconds: self.utc_offset_seconds,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Auto,
    Receipts,
    Edgelists,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    SbmEr,
    SbmBa,
    Bahsbm,
}

#[derive(Subcommand)]
enum Command {
    /// Build per organization-month edge lists from receipt files.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ingest: IngestFlags,
    },
    /// Leiden modularity, partitions, ARI series and summaries.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        input_kind: KindArg,
        #[command(flatten)]
        ingest: IngestFlags,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Workers across organization-months; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// CSV with columns org_id,geography.
        #[arg(long)]
        geography: Option<PathBuf>,
    },
    /// Bootstrap distribution of Leiden modularity for one edge list.
    Bootstrap {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        bootstrap_iterations: usize,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Paired modularity differences and Wilcoxon test between two months.
    CompareYears {
        /// records.csv from analyze.
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// YYYY-MM
        #[arg(long)]
        earlier: YearMonth,
        /// YYYY-MM
        #[arg(long)]
        later: YearMonth,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long)]
        geography: Option<PathBuf>,
    },
    /// Fit a generative model to an edge list and sample from it.
    Generate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Sample seeds: `a..b` (half open) or a comma list.
        #[arg(long, default_value = "0..1", value_parser = parse_seeds)]
        seeds: SeedList,
        /// Seed for the Leiden runs of the fit.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 250)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long, default_value_t = 200)]
        path_samples: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// The two-block toy: swap ARI and SBM modularity.
    ToyExample {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Clone)]
struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
        if a >= b {
            return Err("empty seed range".into());
        }
        return Ok(SeedList((a..b).collect()));
    }
    s.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{e}")))
        .collect::<Result<_, _>>()
        .map(SeedList)
}

fn report(outcome: &RunOutcome) -> ExitCode {
    for f in &outcome.failures {
        eprintln!(
            "failure: {} {} [{}] {}",
            f.org_id, f.month, f.stage, f.message
        );
    }
    if outcome.succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> orgnet::Result<ExitCode> {
    Ok(match cli.command {
        Command::Ingest { input, out, ingest } => report(&run_ingest(&IngestOptions {
            input,
            out,
            ingest: ingest.config(),
        })?),
        Command::Analyze {
            input,
            out,
            input_kind,
            ingest,
            resolution,
            seed,
            threads,
            geography,
        } => report(&run_analyze(&AnalyzeOptions {
            input,
            out,
            input_kind: match input_kind {
                KindArg::Auto => InputKind::Auto,
                KindArg::Receipts => InputKind::Receipts,
                KindArg::Edgelists => InputKind::EdgeLists,
            },
            ingest: ingest.config(),
            resolution,
            seed,
            threads,
            geography,
        })?),
        Command::Bootstrap {
            input,
            out,
            bootstrap_iterations,
            resolution,
            seed,
            threads,
        } => {
            let (result, outcome) = run_bootstrap(&BootstrapOptions {
                input,
                out,
                config: BootstrapConfig {
                    iterations: bootstrap_iterations,
                    seed,
                    resolution,
                },
                threads,
            })?;
            println!("Q = {:.4}, bootstrap {}", result.observed_q, result.label());
            report(&outcome)
        }
        Command::CompareYears {
            records,
            out,
            earlier,
            later,
            bins,
            geography,
        } => {
            let (test, outcome) = run_compare_years(&CompareYearsOptions {
                records,
                out,
                earlier,
                later,
                bins,
                geography,
            })?;
            if let Some(t) = test {
                println!(
                    "n = {}, W+ = {}, p = {:.3e}",
                    t.n_effective, t.w_plus, t.p_two_sided
                );
            }
            report(&outcome)
        }
        Command::Generate {
            input,
            out,
            mode,
            seeds,
            seed,
            n_max,
            resolution,
            path_samples,
            threads,
        } => {
            let mode = match mode {
                ModeArg::SbmEr => GenerateMode::SbmEr,
                ModeArg::SbmBa => GenerateMode::SbmBa,
                ModeArg::Bahsbm => GenerateMode::Bahsbm,
            };
            let (reports, outcome) = run_generate(&GenerateOptions {
                input,
                out,
                mode,
                seeds: seeds.0,
                fit_seed: seed,
                resolution,
                n_max,
                path_samples,
                threads,
            })?;
            for (s, r) in &reports {
                println!(
                    "seed {s}: dQ = {:+.4}, degree KS = {:.4}",
                    r.delta_q, r.degree_ks
                );
            }
            report(&outcome)
        }
        Command::ToyExample {
            out,
            seeds,
            seed,
            threads,
        } => {
            let (toy, outcome) = run_toy_example(&ToyOptions {
                out,
                seeds,
                seed,
                threads,
            })?;
            println!("{}", serde_json::to_string_pretty(&toy)?);
            outcome.as_ref().map_or(ExitCode::SUCCESS, report)
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
