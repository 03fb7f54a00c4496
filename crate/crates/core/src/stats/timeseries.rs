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

//! Organization-month records and their aggregation into monthly series,
//! year-over-year paired differences and per-group changes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::month::YearMonth;

/// Metrics of one organization's network in one month.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrgMonthRecord {
    pub org_id: String,
    pub month: YearMonth,
    pub node_count: usize,
    pub edge_count: usize,
    pub total_weight: u64,
    pub modularity: f64,
    /// ARI against the previous month's partition.
    pub ari_prev: Option<f64>,
    pub geography: Option<String>,
}

impl OrgMonthRecord {
    pub fn mean_weighted_degree(&self) -> f64 {
        if self.node_count == 0 {
            0.0
        } else {
            2.0 * self.total_weight as f64 / self.node_count as f64
        }
    }

    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Modularity => Some(self.modularity),
            Metric::AriPrev => self.ari_prev,
            Metric::TotalWeight => Some(self.total_weight as f64),
            Metric::MeanWeightedDegree => Some(self.mean_weighted_degree()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "Q")]
    Modularity,
    #[serde(rename = "ari_prev")]
    AriPrev,
    #[serde(rename = "total_weight")]
    TotalWeight,
    #[serde(rename = "mean_weighted_degree")]
    MeanWeightedDegree,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Modularity,
        Metric::AriPrev,
        Metric::TotalWeight,
        Metric::MeanWeightedDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Modularity => "Q",
            Metric::AriPrev => "ari_prev",
            Metric::TotalWeight => "total_weight",
            Metric::MeanWeightedDegree => "mean_weighted_degree",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown metric {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupBy {
    None,
    Geography,
}

/// Label used for ungrouped rows.
const ALL_GROUP: &str = "all";
const UNKNOWN_GROUP: &str = "unknown";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub month: YearMonth,
    pub group: String,
    pub metric: Metric,
    pub mean: f64,
    /// Sample standard deviation over `√count`; zero for a single value.
    pub stderr: f64,
    pub count: usize,
}

fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn group_of(r: &OrgMonthRecord, group_by: GroupBy) -> String {
    match group_by {
        GroupBy::None => ALL_GROUP.to_owned(),
        GroupBy::Geography => r
            .geography
            .clone()
            .unwrap_or_else(|| UNKNOWN_GROUP.to_owned()),
    }
}

/// Per-month (and per-group) mean ± standard error of `metric`. Months
/// without contributing records are omitted.
pub fn timeseries_summary(
    records: &[OrgMonthRecord],
    group_by: GroupBy,
    metric: Metric,
) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(YearMonth, String), Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(v) = r.metric(metric) {
            cells
                .entry((r.month, group_of(r, group_by)))
                .or_default()
                .push(v);
        }
    }
    cells
        .into_iter()
        .map(|((month, group), values)| {
            let (mean, stderr) = mean_stderr(&values);
            SummaryRow {
                month,
                group,
                metric,
                mean,
                stderr,
                count: values.len(),
            }
        })
        .collect()
}

/// Year-over-year paired modularity differences for one calendar month.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedDiffs {
    pub label: String,
    /// `(org_id, Q(later) − Q(earlier))`, sorted by org.
    pub diffs: Vec<(String, f64)>,
    /// Organizations with a record in only one of the two months.
    pub excluded: usize,
}

impl PairedDiffs {
    pub fn values(&self) -> Vec<f64> {
        self.diffs.iter().map(|d| d.1).collect()
    }
}

fn modularity_by_org(
    records: &[OrgMonthRecord],
    month: YearMonth,
) -> BTreeMap<&str, &OrgMonthRecord> {
    records
        .iter()
        .filter(|r| r.month == month)
        .map(|r| (r.org_id.as_str(), r))
        .collect()
}

/// `Q(month of later) − Q(month of earlier)` per organization present in both.
pub fn yoy_paired_diffs(
    records: &[OrgMonthRecord],
    earlier: YearMonth,
    later: YearMonth,
) -> PairedDiffs {
    let a = modularity_by_org(records, earlier);
    let b = modularity_by_org(records, later);
    let diffs: Vec<(String, f64)> = a
        .iter()
        .filter_map(|(org, ra)| {
            b.get(org)
                .map(|rb| (org.to_string(), rb.modularity - ra.modularity))
        })
        .collect();
    let excluded = a.len() + b.len() - 2 * diffs.len();
    PairedDiffs {
        label: format!("{later} vs {earlier}"),
        diffs,
        excluded,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    pub pair_label: String,
}

/// Equal-width histogram of `values` over their range; the last bin is
/// closed on the right.
pub fn diff_histogram(values: &[f64], bins: usize, pair_label: &str) -> Vec<HistogramBin> {
    if values.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return vec![HistogramBin {
            bin_left: lo,
            bin_right: hi,
            count: values.len(),
            pair_label: pair_label.to_owned(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            bin_left: lo + width * i as f64,
            bin_right: if i + 1 == bins {
                hi
            } else {
                lo + width * (i + 1) as f64
            },
            count,
            pair_label: pair_label.to_owned(),
        })
        .collect()
}

/// Mean modularity per group in two months over organizations present in
/// both.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupChange {
    pub group: String,
    pub mean_earlier: f64,
    pub mean_later: f64,
    pub delta: f64,
    pub count: usize,
}

pub fn group_change(
    records: &[OrgMonthRecord],
    earlier: YearMonth,
    later: YearMonth,
) -> Vec<GroupChange> {
    let a = modularity_by_org(records, earlier);
    let b = modularity_by_org(records, later);
    let mut groups: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (org, ra) in &a {
        if let Some(rb) = b.get(org) {
            let g = groups.entry(group_of(ra, GroupBy::Geography)).or_default();
            g.0.push(ra.modularity);
            g.1.push(rb.modularity);
        }
    }
    groups
        .into_iter()
        .map(|(group, (x, y))| {
            let mean_earlier = x.iter().sum::<f64>() / x.len() as f64;
            let mean_later = y.iter().sum::<f64>() / y.len() as f64;
            GroupChange {
                group,
                mean_earlier,
                mean_later,
                delta: mean_later - mean_earlier,
                count: x.len(),
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct RecordRow {
    org: String,
    month: YearMonth,
    n: usize,
    edges: usize,
    weight: u64,
    #[serde(rename = "Q")]
    q: f64,
    ari_prev: Option<f64>,
}

/// Writes `org,month,n,edges,weight,Q,ari_prev`.
pub fn write_records<W: Write>(records: &[OrgMonthRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(RecordRow {
            org: r.org_id.clone(),
            month: r.month,
            n: r.node_count,
            edges: r.edge_count,
            weight: r.total_weight,
            q: r.modularity,
            ari_prev: r.ari_prev,
        })?;
    }
    if records.is_empty() {
        w.write_record(["org", "month", "n", "edges", "weight", "Q", "ari_prev"])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a record CSV; `geography` maps org ids to a region label.
pub fn read_records<R: Read>(
    reader: R,
    geography: &HashMap<String, String>,
) -> Result<Vec<OrgMonthRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<RecordRow>() {
        let row = row?;
        out.push(OrgMonthRecord {
            geography: geography.get(&row.org).cloned(),
            org_id: row.org,
            month: row.month,
            node_count: row.n,
            edge_count: row.edges,
            total_weight: row.weight,
            modularity: row.q,
            ari_prev: row.ari_prev,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(org: &str, month: &str, q: f64, geo: Option<&str>) -> OrgMonthRecord {
        OrgMonthRecord {
            org_id: org.into(),
            month: month.parse().unwrap(),
            node_count: 100,
            edge_count: 300,
            total_weight: 1000,
            modularity: q,
            ari_prev: None,
            geography: geo.map(str::to_owned),
        }
    }

    #[test]
    fn single_record_month() {
        let rows = timeseries_summary(
            &[rec("a", "2020-01", 0.5, None)],
            GroupBy::None,
            Metric::Modularity,
        );
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].mean, rows[0].stderr, rows[0].count), (0.5, 0.0, 1));
        assert_eq!(rows[0].group, "all");
    }

    #[test]
    fn three_values_stderr() {
        let rs = [
            rec("a", "2020-01", 0.6, None),
            rec("b", "2020-01", 0.7, None),
            rec("c", "2020-01", 0.8, None),
        ];
        let rows = timeseries_summary(&rs, GroupBy::None, Metric::Modularity);
        assert!((rows[0].mean - 0.7).abs() < 1e-12);
        assert!((rows[0].stderr - 0.1 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn missing_metric_values_are_skipped() {
        let rows = timeseries_summary(
            &[rec("a", "2020-01", 0.5, None)],
            GroupBy::None,
            Metric::AriPrev,
        );
        assert!(rows.is_empty());
        let rows = timeseries_summary(
            &[rec("a", "2020-01", 0.5, None)],
            GroupBy::None,
            Metric::MeanWeightedDegree,
        );
        assert_eq!(rows[0].mean, 20.0);
    }

    #[test]
    fn yoy_diffs_by_hand() {
        let rs = [
            rec("a", "2019-04", 0.60, None),
            rec("a", "2020-04", 0.65, None),
            rec("b", "2019-04", 0.70, None),
            rec("b", "2020-04", 0.68, None),
            rec("c", "2019-04", 0.50, None),
            rec("c", "2020-04", 0.59, None),
            rec("d", "2020-04", 0.90, None),
        ];
        let d = yoy_paired_diffs(&rs, "2019-04".parse().unwrap(), "2020-04".parse().unwrap());
        assert_eq!(d.excluded, 1);
        let expected = [("a", 0.05), ("b", -0.02), ("c", 0.09)];
        for ((org, v), (eo, ev)) in d.diffs.iter().zip(expected) {
            assert_eq!(org, eo);
            assert!((v - ev).abs() < 1e-12);
        }
        let same = yoy_paired_diffs(&rs, "2019-04".parse().unwrap(), "2019-04".parse().unwrap());
        assert!(same.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn group_change_row() {
        let rs = [
            rec("ca1", "2019-04", 0.674, Some("Canada")),
            rec("ca1", "2020-04", 0.689, Some("Canada")),
            rec("x", "2019-04", 0.5, None),
            rec("x", "2020-04", 0.4, None),
        ];
        let rows = group_change(&rs, "2019-04".parse().unwrap(), "2020-04".parse().unwrap());
        assert_eq!(rows[0].group, "Canada");
        assert!((rows[0].delta - 0.015).abs() < 1e-12);
        assert_eq!(rows[1].group, "unknown");
    }

    #[test]
    fn histogram_mass() {
        let values = [-0.1, 0.0, 0.05, 0.1, 0.2];
        let h = diff_histogram(&values, 3, "Apr");
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 5);
        assert_eq!(h[2].bin_right, 0.2);
        assert_eq!(diff_histogram(&[0.0, 0.0], 4, "x").len(), 1);
    }

    #[test]
    fn record_csv_round_trip() {
        let mut r = rec("org1", "2019-02", 0.807, None);
        r.node_count = 73625;
        r.edge_count = 1688952;
        r.total_weight = 14520982;
        let mut next = rec("org1", "2019-03", 0.81, None);
        next.ari_prev = Some(0.7);
        let mut buf = Vec::new();
        write_records(&[r.clone(), next.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "org,month,n,edges,weight,Q,ari_prev\norg1,2019-02,73625,1688952,14520982,0.807,\n"
        ));
        let back = read_records(&buf[..], &HashMap::new()).unwrap();
        assert_eq!(back, vec![r, next]);
    }
}
