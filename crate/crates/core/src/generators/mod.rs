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

//! Random graph generators and fitted block models.

mod aposteriori;
mod ba;
mod bahsbm;
mod compare;
mod dynamic;
mod sbm;
mod wiring;

pub use aposteriori::{
    fit_aposteriori_sbm, sample_root_sbm, AposterioriSbmFit, BlockPairCount, IntraModel,
};
pub use ba::{attachment_for_budget, sample_ba};
pub use bahsbm::{fit_bahsbm, sample_bahsbm, sample_hsbm, BahsbmModel, InterLeafCount, LeafBudget};
pub use compare::{
    compare_graphs, degree_ks_distance, CompareConfig, ComparisonReport, GraphSummary,
};
pub use dynamic::{sample_planted_series, PlantedMonth, PlantedSeriesSpec};
pub use sbm::{sample_sbm, SbmSpec};
