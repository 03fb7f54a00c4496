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

//! Communication receipts to per-(organization, month) networks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Read};

use chrono::{DateTime, Datelike, FixedOffset};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::month::YearMonth;

/// One message: a sender and the accounts that received it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Receipt {
    pub org_id: String,
    pub timestamp: DateTime<FixedOffset>,
    pub sender: String,
    pub recipients: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReceiptFormat {
    /// Columns `org_id,timestamp,sender,recipients`, recipients `;`-separated.
    Csv,
    /// One object per line with a `recipients` array.
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Messages with more recipients than this are ignored entirely.
    pub max_recipients: usize,
    /// An organization is eligible only if every monthly network has more
    /// nodes than this.
    pub min_nodes: usize,
    /// Offset from UTC, in seconds, of the calendar used for month boundaries.
    pub utc_offset_seconds: i32,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            max_recipients: 4,
            min_nodes: 2000,
            utc_offset_seconds: 0,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_recipients < 1 {
            return Err(Error::InvalidInput(
                "max_recipients must be at least 1".into(),
            ));
        }
        if self.min_nodes < 1 {
            return Err(Error::InvalidInput("min_nodes must be at least 1".into()));
        }
        FixedOffset::east_opt(self.utc_offset_seconds)
            .ok_or_else(|| Error::InvalidInput("UTC offset out of range".into()))?;
        Ok(())
    }

    /// Calendar month of `timestamp` in the configured offset.
    pub fn month_of(&self, timestamp: &DateTime<FixedOffset>) -> YearMonth {
        let offset = FixedOffset::east_opt(self.utc_offset_seconds)
            .unwrap_or(FixedOffset::east_opt(0).unwrap());
        let local = timestamp.with_timezone(&offset);
        YearMonth {
            year: local.year(),
            month: local.month(),
        }
    }
}

/// A row that failed to parse, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

impl From<RowError> for Error {
    fn from(e: RowError) -> Self {
        Error::Parse {
            line: e.line,
            message: e.message,
        }
    }
}

#[derive(Debug, Default)]
pub struct ParsedReceipts {
    pub receipts: Vec<Receipt>,
    pub errors: Vec<RowError>,
}

#[derive(Deserialize)]
struct JsonReceipt {
    org_id: String,
    timestamp: String,
    sender: String,
    recipients: Vec<String>,
}

fn make_receipt(
    line: usize,
    org_id: &str,
    timestamp: &str,
    sender: &str,
    recipients: Vec<String>,
) -> std::result::Result<Receipt, RowError> {
    let fail = |message: String| RowError { line, message };
    let timestamp = DateTime::parse_from_rfc3339(timestamp.trim())
        .map_err(|e| fail(format!("bad timestamp {timestamp:?}: {e}")))?;
    let recipients: Vec<String> = recipients
        .into_iter()
        .map(|r| r.trim().to_owned())
        .filter(|r| !r.is_empty())
        .collect();
    if recipients.is_empty() {
        return Err(fail("no recipients".into()));
    }
    if org_id.trim().is_empty() || sender.trim().is_empty() {
        return Err(fail("empty org_id or sender".into()));
    }
    Ok(Receipt {
        org_id: org_id.trim().to_owned(),
        timestamp,
        sender: sender.trim().to_owned(),
        recipients,
    })
}

/// Streams receipts from `reader`; each item is a receipt or a located row
/// error. Parsing continues past bad rows.
pub fn read_receipts<'r, R: Read + 'r>(
    reader: R,
    format: ReceiptFormat,
) -> Box<dyn Iterator<Item = std::result::Result<Receipt, RowError>> + 'r> {
    match format {
        ReceiptFormat::Jsonl => Box::new(BufReader::new(reader).lines().enumerate().filter_map(
            |(i, line)| {
                let line_no = i + 1;
                let line = match line {
                    Ok(l) => l,
                    Err(e) => {
                        return Some(Err(RowError {
                            line: line_no,
                            message: e.to_string(),
                        }))
                    }
                };
                if line.trim().is_empty() {
                    return None;
                }
                Some(
                    serde_json::from_str::<JsonReceipt>(&line)
                        .map_err(|e| RowError {
                            line: line_no,
                            message: e.to_string(),
                        })
                        .and_then(|j| {
                            make_receipt(line_no, &j.org_id, &j.timestamp, &j.sender, j.recipients)
                        }),
                )
            },
        )),
        ReceiptFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
            let header = rdr.headers().cloned();
            let columns = header.map_err(|e| e.to_string()).and_then(|h| {
                let find = |name: &str| {
                    h.iter()
                        .position(|c| c.trim() == name)
                        .ok_or_else(|| format!("missing column {name:?}"))
                };
                Ok([
                    find("org_id")?,
                    find("timestamp")?,
                    find("sender")?,
                    find("recipients")?,
                ])
            });
            match columns {
                Err(message) => Box::new(std::iter::once(Err(RowError { line: 1, message }))),
                Ok(cols) => Box::new(rdr.into_records().map(move |rec| {
                    let rec = rec.map_err(|e| RowError {
                        line: e.position().map_or(0, |p| p.line() as usize),
                        message: e.to_string(),
                    })?;
                    let line = rec.position().map_or(0, |p| p.line() as usize);
                    let field = |i: usize| {
                        rec.get(cols[i]).ok_or_else(|| RowError {
                            line,
                            message: format!(
                                "expected at least {} fields, found {}",
                                cols[i] + 1,
                                rec.len()
                            ),
                        })
                    };
                    let recipients = field(3)?.split(';').map(str::to_owned).collect();
                    make_receipt(line, field(0)?, field(1)?, field(2)?, recipients)
                })),
            }
        }
    }
}

/// Collects every receipt; with `fail_fast` the first bad row is an error,
/// otherwise bad rows are reported alongside the good ones.
pub fn parse_receipts<R: Read>(
    reader: R,
    format: ReceiptFormat,
    fail_fast: bool,
) -> Result<ParsedReceipts> {
    let mut out = ParsedReceipts::default();
    for item in read_receipts(reader, format) {
        match item {
            Ok(r) => out.receipts.push(r),
            Err(e) if fail_fast => return Err(e.into()),
            Err(e) => out.errors.push(e),
        }
    }
    Ok(out)
}

pub type NetworkKey = (String, YearMonth);

/// Counts of what happened to incoming receipts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestCounts {
    pub receipts: u64,
    pub over_recipient_cap: u64,
    /// `(sender, recipient)` pairs that became edge weight.
    pub retained_pairs: u64,
    pub self_pairs: u64,
}

/// Accumulates receipts into undirected pair counts per (org, month).
/// Accumulators over disjoint shards can be merged.
#[derive(Clone, Debug)]
pub struct MonthlyAccumulator {
    config: IngestConfig,
    pairs: HashMap<NetworkKey, HashMap<(String, String), u64>>,
    counts: IngestCounts,
}

impl MonthlyAccumulator {
    pub fn new(config: IngestConfig) -> Self {
        Self {
            config,
            pairs: HashMap::new(),
            counts: IngestCounts::default(),
        }
    }

    pub fn add(&mut self, receipt: &Receipt) {
        self.counts.receipts += 1;
        if receipt.recipients.len() > self.config.max_recipients {
            self.counts.over_recipient_cap += 1;
            return;
        }
        let key = (
            receipt.org_id.clone(),
            self.config.month_of(&receipt.timestamp),
        );
        let table = self.pairs.entry(key).or_default();
        for r in &receipt.recipients {
            if *r == receipt.sender {
                self.counts.self_pairs += 1;
                continue;
            }
            let pair = if receipt.sender < *r {
                (receipt.sender.clone(), r.clone())
            } else {
                (r.clone(), receipt.sender.clone())
            };
            *table.entry(pair).or_default() += 1;
            self.counts.retained_pairs += 1;
        }
    }

    pub fn merge(&mut self, other: MonthlyAccumulator) {
        for (key, table) in other.pairs {
            let mine = self.pairs.entry(key).or_default();
            for (pair, w) in table {
                *mine.entry(pair).or_default() += w;
            }
        }
        self.counts.receipts += other.counts.receipts;
        self.counts.over_recipient_cap += other.counts.over_recipient_cap;
        self.counts.retained_pairs += other.counts.retained_pairs;
        self.counts.self_pairs += other.counts.self_pairs;
    }

    pub fn counts(&self) -> IngestCounts {
        self.counts
    }

    /// Full aggregated graphs, before component extraction.
    pub fn raw_networks(self) -> BTreeMap<NetworkKey, WeightedGraph> {
        let mut entries: Vec<_> = self.pairs.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries
            .into_par_iter()
            .map(|(key, table)| (key, WeightedGraph::from_canonical_pairs(table)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }

    /// Largest connected component of every (org, month) graph.
    pub fn into_networks(self) -> BTreeMap<NetworkKey, WeightedGraph> {
        let raw: Vec<_> = self.raw_networks().into_iter().collect();
        raw.into_par_iter()
            .map(|(key, g)| (key, g.largest_connected_component()))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }
}

/// Applies the recipient cap and self-pair rule, aggregates per (org, month)
/// and reduces each graph to its largest connected component.
pub fn receipts_to_monthly_networks<'a>(
    receipts: impl IntoIterator<Item = &'a Receipt>,
    config: &IngestConfig,
) -> BTreeMap<NetworkKey, WeightedGraph> {
    let mut acc = MonthlyAccumulator::new(*config);
    for r in receipts {
        acc.add(r);
    }
    acc.into_networks()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ExclusionReason {
    MissingMonths { months: Vec<YearMonth> },
    TooSmall { month: YearMonth, node_count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub org_id: String,
    #[serde(flatten)]
    pub reason: ExclusionReason,
}

#[derive(Debug, Default)]
pub struct Eligibility {
    pub retained: BTreeMap<NetworkKey, WeightedGraph>,
    pub excluded: Vec<Exclusion>,
}

/// Keeps organizations whose network has strictly more than `min_nodes`
/// nodes in every month of the study range (the span of all months present).
/// Organizations missing any month of the range are excluded.
pub fn filter_eligible_orgs(
    networks: BTreeMap<NetworkKey, WeightedGraph>,
    config: &IngestConfig,
) -> Eligibility {
    let months: BTreeSet<YearMonth> = networks.keys().map(|k| k.1).collect();
    let (Some(&first), Some(&last)) = (months.first(), months.last()) else {
        return Eligibility::default();
    };
    let range: Vec<YearMonth> = first.through(last).collect();

    let mut by_org: BTreeMap<String, Vec<(YearMonth, WeightedGraph)>> = BTreeMap::new();
    for ((org, month), g) in networks {
        by_org.entry(org).or_default().push((month, g));
    }
    let mut out = Eligibility::default();
    for (org, graphs) in by_org {
        let present: BTreeSet<YearMonth> = graphs.iter().map(|(m, _)| *m).collect();
        let missing: Vec<YearMonth> = range
            .iter()
            .copied()
            .filter(|m| !present.contains(m))
            .collect();
        if !missing.is_empty() {
            out.excluded.push(Exclusion {
                org_id: org,
                reason: ExclusionReason::MissingMonths { months: missing },
            });
            continue;
        }
        if let Some((month, g)) = graphs
            .iter()
            .find(|(_, g)| g.node_count() <= config.min_nodes)
        {
            out.excluded.push(Exclusion {
                org_id: org,
                reason: ExclusionReason::TooSmall {
                    month: *month,
                    node_count: g.node_count(),
                },
            });
            continue;
        }
        for (month, g) in graphs {
            out.retained.insert((org.clone(), month), g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn receipt(org: &str, ts: &str, sender: &str, to: &[&str]) -> Receipt {
        Receipt {
            org_id: org.into(),
            timestamp: DateTime::parse_from_rfc3339(ts).unwrap(),
            sender: sender.into(),
            recipients: to.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn empty_stream() {
        let out = parse_receipts(&b""[..], ReceiptFormat::Jsonl, true).unwrap();
        assert!(out.receipts.is_empty() && out.errors.is_empty());
        let out = parse_receipts(
            &b"org_id,timestamp,sender,recipients\n"[..],
            ReceiptFormat::Csv,
            true,
        )
        .unwrap();
        assert!(out.receipts.is_empty());
    }

    #[test]
    fn one_jsonl_row() {
        let line = r#"{"org_id":"o1","timestamp":"2020-04-03T09:00:00Z","sender":"a","recipients":["b","c"]}"#;
        let out = parse_receipts(line.as_bytes(), ReceiptFormat::Jsonl, true).unwrap();
        assert_eq!(
            out.receipts,
            vec![receipt("o1", "2020-04-03T09:00:00Z", "a", &["b", "c"])]
        );
    }

    #[test]
    fn csv_with_one_malformed_row() {
        let mut text = String::from("org_id,timestamp,sender,recipients\n");
        for i in 0..10 {
            if i == 6 {
                text.push_str("o1,not-a-time,a,b\n");
            } else {
                text.push_str(&format!("o1,2020-01-0{}T00:00:00Z,a,b;c\n", i.max(1)));
            }
        }
        let out = parse_receipts(text.as_bytes(), ReceiptFormat::Csv, false).unwrap();
        assert_eq!(out.receipts.len(), 9);
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.errors[0].line, 8);
        let err = parse_receipts(text.as_bytes(), ReceiptFormat::Csv, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }));
    }

    #[test]
    fn recipient_cap_and_self_pairs() {
        let config = IngestConfig::default();
        let rs = [
            receipt("o", "2020-01-05T00:00:00Z", "a", &["b", "c", "d", "e", "f"]),
            receipt("o", "2020-01-05T00:00:00Z", "a", &["a"]),
        ];
        let nets = receipts_to_monthly_networks(&rs, &config);
        assert!(nets.values().all(|g| g.node_count() == 0));
    }

    #[test]
    fn hand_aggregated_fixture() {
        // Six receipts in one org-month: a small cluster {a,b,c} and a
        // separate pair {x,y}.
        let rs = [
            receipt("o", "2020-02-01T08:00:00Z", "a", &["b"]),
            receipt("o", "2020-02-02T08:00:00Z", "b", &["a", "c"]),
            receipt("o", "2020-02-03T08:00:00Z", "c", &["a", "c"]),
            receipt("o", "2020-02-04T08:00:00Z", "a", &["b", "c", "x", "y", "z"]),
            receipt("o", "2020-02-05T08:00:00Z", "x", &["y"]),
            receipt("o", "2020-02-28T23:00:00Z", "y", &["x"]),
        ];
        let mut acc = MonthlyAccumulator::new(IngestConfig::default());
        rs.iter().for_each(|r| acc.add(r));
        assert_eq!(acc.counts().retained_pairs, 6);
        assert_eq!(acc.counts().self_pairs, 1);
        assert_eq!(acc.counts().over_recipient_cap, 1);
        let raw = acc.clone().raw_networks();
        let g = &raw[&("o".to_string(), "2020-02".parse().unwrap())];
        assert_eq!(g.total_weight(), 6);
        let nets = acc.into_networks();
        let g = &nets[&("o".to_string(), "2020-02".parse().unwrap())];
        assert_eq!(g.ids(), &["a", "b", "c"]);
        assert_eq!(g.weight(0, 1), 2);
        assert_eq!(g.weight(0, 2), 1);
        assert_eq!(g.weight(1, 2), 1);
    }

    #[test]
    fn month_boundary_follows_offset() {
        let r = receipt("o", "2020-01-31T23:30:00Z", "a", &["b"]);
        assert_eq!(
            IngestConfig::default().month_of(&r.timestamp).to_string(),
            "2020-01"
        );
        let east = IngestConfig {
            utc_offset_seconds: 3600,
            ..IngestConfig::default()
        };
        assert_eq!(east.month_of(&r.timestamp).to_string(), "2020-02");
    }

    fn star(n: usize) -> WeightedGraph {
        WeightedGraph::from_unit_edges(n, (1..n as u32).map(|v| (0, v)))
    }

    #[test]
    fn eligibility_is_strict() {
        let config = IngestConfig::default();
        let m1: YearMonth = "2020-01".parse().unwrap();
        let m2 = m1.next();
        let mut nets = BTreeMap::new();
        nets.insert(("big".to_string(), m1), star(2001));
        nets.insert(("big".to_string(), m2), star(2001));
        nets.insert(("edge".to_string(), m1), star(2001));
        nets.insert(("edge".to_string(), m2), star(2000));
        nets.insert(("gap".to_string(), m2), star(3000));
        let out = filter_eligible_orgs(nets, &config);
        assert_eq!(out.retained.len(), 2);
        assert!(out.retained.keys().all(|k| k.0 == "big"));
        assert_eq!(out.excluded.len(), 2);
        assert_eq!(
            out.excluded[0].reason,
            ExclusionReason::TooSmall {
                month: m2,
                node_count: 2000
            }
        );
        assert_eq!(
            out.excluded[1].reason,
            ExclusionReason::MissingMonths { months: vec![m1] }
        );
    }
}
