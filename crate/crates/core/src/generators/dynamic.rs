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

//! Planted-partition time series: a fixed node set observed monthly, with a
//! one-time shock that weakens between-block connectivity and moves a
//! fraction of nodes to other blocks.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantedSeriesSpec {
    pub blocks: usize,
    pub block_size: usize,
    pub months: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// 1-based month from which the shock applies.
    pub shock_month: usize,
    /// Multiplier on `p_out` from the shock month on.
    pub shock_rate_factor: f64,
    /// Fraction of nodes moved to a different block at the shock.
    pub churn_fraction: f64,
}

impl PlantedSeriesSpec {
    fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.blocks < 2 || self.block_size == 0 || self.months == 0 {
            return Err(Error::InvalidInput(
                "need at least two non-empty blocks and one month".into(),
            ));
        }
        if !prob(self.p_in) || !prob(self.p_out) || !prob(self.p_out * self.shock_rate_factor) {
            return Err(Error::InvalidInput(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        if !prob(self.churn_fraction) {
            return Err(Error::InvalidInput(
                "churn fraction must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// One month of a planted series.
#[derive(Clone, Debug)]
pub struct PlantedMonth {
    /// Planted block of each node.
    pub blocks: Vec<u32>,
    pub graph: WeightedGraph,
}

/// Samples `spec.months` unit-weight graphs on nodes `u0000..`. Every month
/// is an independent SBM draw given that month's planted blocks and rates.
pub fn sample_planted_series(spec: &PlantedSeriesSpec, seed: u64) -> Result<Vec<PlantedMonth>> {
    spec.validate()?;
    let n = spec.blocks * spec.block_size;
    let base: Vec<u32> = (0..n).map(|v| (v / spec.block_size) as u32).collect();
    let mut shocked = base.clone();
    let mut rng = seed::rng(seed::derive(seed, u64::MAX));
    let movers = (spec.churn_fraction * n as f64).round() as usize;
    for v in index::sample(&mut rng, n, movers) {
        let shift = rng.gen_range(1..spec.blocks) as u32;
        shocked[v] = (base[v] + shift) % spec.blocks as u32;
    }
    let ids: Vec<String> = (0..n).map(|v| format!("u{v:04}")).collect();

    Ok((1..=spec.months)
        .map(|month| {
            let after = month >= spec.shock_month;
            let blocks = if after { shocked.clone() } else { base.clone() };
            let p_out = if after {
                spec.p_out * spec.shock_rate_factor
            } else {
                spec.p_out
            };
            let mut rng = seed::rng(seed::derive(seed, month as u64));
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    let p = if blocks[u] == blocks[v] {
                        spec.p_in
                    } else {
                        p_out
                    };
                    if rng.gen::<f64>() < p {
                        edges.push((u as u32, v as u32, 1));
                    }
                }
            }
            PlantedMonth {
                blocks,
                graph: WeightedGraph::assemble(ids.clone(), edges),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> PlantedSeriesSpec {
        PlantedSeriesSpec {
            blocks: 3,
            block_size: 20,
            months: 4,
            p_in: 0.4,
            p_out: 0.04,
            shock_month: 3,
            shock_rate_factor: 0.5,
            churn_fraction: 0.1,
        }
    }

    #[test]
    fn churn_applies_from_shock_month() {
        let series = sample_planted_series(&spec(), 1).unwrap();
        assert_eq!(series.len(), 4);
        assert_eq!(series[0].blocks, series[1].blocks);
        assert_eq!(series[2].blocks, series[3].blocks);
        let moved = series[1]
            .blocks
            .iter()
            .zip(&series[2].blocks)
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(moved, 6);
        assert!(series.iter().all(|m| m.graph.node_count() == 60));
    }

    #[test]
    fn rejects_bad_spec() {
        let mut s = spec();
        s.blocks = 1;
        assert!(sample_planted_series(&s, 0).is_err());
        let mut s = spec();
        s.p_out = 0.9;
        s.shock_rate_factor = 2.0;
        assert!(sample_planted_series(&s, 0).is_err());
    }
}
