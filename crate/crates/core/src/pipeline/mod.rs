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

//! Batch commands: each reads its inputs, writes CSV/JSON outputs into one
//! directory together with a `manifest.json`, and reports failures.

mod analyze;
mod commands;
mod generate;

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub use analyze::{run_analyze, AnalyzeOptions, InputKind};
pub use commands::{
    run_bootstrap, run_compare_years, run_ingest, run_toy_example, toy_report, toy_swap_partitions,
    toy_variant, BootstrapOptions, CompareYearsOptions, IngestOptions, ToyOptions, ToyReport,
    ToyVariant,
};
pub use generate::{run_generate, GenerateMode, GenerateOptions};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance of one command run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    /// Output files relative to the output directory.
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
}

/// One unit of work that could not be completed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub org_id: String,
    pub month: String,
    pub stage: String,
    pub message: String,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub failures: Vec<Failure>,
}

impl RunOutcome {
    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tracks inputs and outputs of a run and writes the manifest at the end.
pub(crate) struct RunContext {
    command: String,
    config: serde_json::Value,
    out: PathBuf,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
    started: Instant,
}

impl RunContext {
    pub(crate) fn new(command: &str, config: &impl Serialize, out: &Path) -> Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Self {
            command: command.to_owned(),
            config: serde_json::to_value(config)?,
            out: out.to_owned(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub(crate) fn record_input(&mut self, path: &Path) -> Result<()> {
        let mut hasher = Sha256::new();
        let mut file = File::open(path)?;
        let mut buf = [0u8; 1 << 16];
        loop {
            let n = file.read(&mut buf)?;
            if n == 0 {
                break;
            }
            hasher.update(&buf[..n]);
        }
        let sha256 = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }

    /// Creates `relative` under the output directory, recording it.
    pub(crate) fn create(&mut self, relative: &str) -> Result<BufWriter<File>> {
        let path = self.out.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        self.outputs.push(relative.to_owned());
        Ok(BufWriter::new(File::create(path)?))
    }

    pub(crate) fn write_json(&mut self, relative: &str, value: &impl Serialize) -> Result<()> {
        let mut w = self.create(relative)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub(crate) fn write_csv<T: Serialize>(
        &mut self,
        relative: &str,
        header: &[&str],
        rows: &[T],
    ) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(self.create(relative)?);
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub(crate) fn finish(mut self, failures: Vec<Failure>) -> Result<RunOutcome> {
        self.write_csv(
            "failures.csv",
            &["org_id", "month", "stage", "message"],
            &failures,
        )?;
        self.outputs.sort();
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            inputs: self.inputs,
            outputs: self.outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut w = BufWriter::new(File::create(self.out.join(MANIFEST_FILE))?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(RunOutcome { manifest, failures })
    }
}

/// Runs `f` on a pool of `threads` workers (0 = one per core).
pub(crate) fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Reads a two-column `org_id,geography` CSV.
pub fn read_geography(path: &Path) -> Result<std::collections::HashMap<String, String>> {
    #[derive(Deserialize)]
    struct Row {
        org_id: String,
        geography: String,
    }
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = std::collections::HashMap::new();
    for row in rdr.deserialize::<Row>() {
        let row = row?;
        out.insert(row.org_id, row.geography);
    }
    Ok(out)
}
