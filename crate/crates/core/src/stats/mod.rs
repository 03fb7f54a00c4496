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

//! Network bootstrap, paired signed-rank tests and per-month aggregation of
//! organization-month metrics.

mod bootstrap;
mod timeseries;
mod wilcoxon;

pub use bootstrap::{bootstrap_modularity, BootstrapConfig, BootstrapResult};
pub use timeseries::{
    diff_histogram, group_change, read_records, timeseries_summary, write_records,
    yoy_paired_diffs, GroupBy, GroupChange, HistogramBin, Metric, OrgMonthRecord, PairedDiffs,
    SummaryRow,
};
pub use wilcoxon::{
    signed_ranks, wilcoxon_exact, wilcoxon_normal, wilcoxon_signed_rank, WilcoxonMethod,
    WilcoxonResult, EXACT_LIMIT,
};
