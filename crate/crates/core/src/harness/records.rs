//! Aggregated sweep rows and their CSV form.

use std::cmp::Ordering;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::SubgraphDefinition;

pub const CSV_HEADER: [&str; 8] = [
    "network",
    "definition",
    "n_rewire",
    "statistic",
    "checkpoint",
    "value",
    "sample_count",
    "master_seed",
];

/// Placeholder for the `definition` and `checkpoint` columns when they do not apply.
pub const NOT_APPLICABLE: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statistic {
    MeanDGlobal,
    MeanDLocal,
    MeanEGlobal,
    MeanELocal,
    StdDGlobal,
    StdDLocal,
    StdEGlobal,
    StdELocal,
    MinMae,
    MeanMae,
    StdMae,
}

impl Statistic {
    pub const ALL: [Statistic; 11] = [
        Self::MeanDGlobal,
        Self::MeanDLocal,
        Self::MeanEGlobal,
        Self::MeanELocal,
        Self::StdDGlobal,
        Self::StdDLocal,
        Self::StdEGlobal,
        Self::StdELocal,
        Self::MinMae,
        Self::MeanMae,
        Self::StdMae,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::MeanDGlobal => "mean_d_global",
            Self::MeanDLocal => "mean_d_local",
            Self::MeanEGlobal => "mean_e_global",
            Self::MeanELocal => "mean_e_local",
            Self::StdDGlobal => "std_d_global",
            Self::StdDLocal => "std_d_local",
            Self::StdEGlobal => "std_e_global",
            Self::StdELocal => "std_e_local",
            Self::MinMae => "min_mae",
            Self::MeanMae => "mean_mae",
            Self::StdMae => "std_mae",
        }
    }

    /// Connectivity-length statistics are the only ones allowed to be infinite.
    pub fn may_be_infinite(&self) -> bool {
        matches!(
            self,
            Self::MeanDGlobal | Self::MeanDLocal | Self::StdDGlobal | Self::StdDLocal
        )
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|stat| stat.as_str() == s)
            .ok_or_else(|| Error::config("statistic", format!("unknown statistic `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub network: String,
    pub definition: Option<SubgraphDefinition>,
    pub n_rewire: usize,
    pub statistic: Statistic,
    pub checkpoint: Option<usize>,
    pub value: f64,
    pub sample_count: usize,
    pub master_seed: u64,
}

impl SweepRecord {
    fn definition_label(&self) -> &'static str {
        self.definition.map_or(NOT_APPLICABLE, |d| d.as_str())
    }

    /// Row order: network, definition, n_rewire, statistic, checkpoint.
    pub fn row_order(&self, other: &Self) -> Ordering {
        self.network
            .cmp(&other.network)
            .then_with(|| self.definition_label().cmp(other.definition_label()))
            .then_with(|| self.n_rewire.cmp(&other.n_rewire))
            .then_with(|| self.statistic.as_str().cmp(other.statistic.as_str()))
            .then_with(|| self.checkpoint.cmp(&other.checkpoint))
    }
}

/// `inf` for infinities, otherwise the shortest round-tripping decimal.
pub fn format_value(value: f64) -> String {
    if value == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{value}")
    }
}

pub fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(SweepRecord::row_order);
}

/// Writes records sorted into row order, with a header line.
pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in &sorted {
        writer.write_record([
            r.network.as_str(),
            r.definition_label(),
            &r.n_rewire.to_string(),
            r.statistic.as_str(),
            &r.checkpoint.map_or_else(|| NOT_APPLICABLE.to_string(), |c| c.to_string()),
            &format_value(r.value),
            &r.sample_count.to_string(),
            &r.master_seed.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Reads rows written by [`write_csv`]. Line numbers in errors are 1-based
/// and count the header.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::parse(1, format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row?;
        let field = |idx: usize| row.get(idx).unwrap_or_default();
        let bad = |name: &str| Error::parse(line, format!("bad `{name}` value `{}`", field(CSV_HEADER.iter().position(|h| *h == name).unwrap())));
        let definition = match field(1) {
            NOT_APPLICABLE => None,
            d => Some(d.parse().map_err(|_| bad("definition"))?),
        };
        let checkpoint = match field(4) {
            NOT_APPLICABLE => None,
            c => Some(c.parse().map_err(|_| bad("checkpoint"))?),
        };
        records.push(SweepRecord {
            network: field(0).to_string(),
            definition,
            n_rewire: field(2).parse().map_err(|_| bad("n_rewire"))?,
            statistic: field(3).parse().map_err(|_| bad("statistic"))?,
            checkpoint,
            value: field(5).parse().map_err(|_| bad("value"))?,
            sample_count: field(6).parse().map_err(|_| bad("sample_count"))?,
            master_seed: field(7).parse().map_err(|_| bad("master_seed"))?,
        });
    }
    Ok(records)
}

/// Mean and population standard deviation of finite samples.
pub(crate) fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Mean and standard deviation of samples that may contain `+inf`.
///
/// Any infinite sample makes the mean infinite. The deviation is zero when
/// every sample is identical (including all infinite) and infinite when the
/// samples mix finite and infinite values.
pub(crate) fn mean_std_extended(samples: &[f64]) -> (f64, f64) {
    if samples.iter().all(|x| x.is_finite()) {
        return mean_std(samples);
    }
    let identical = samples.windows(2).all(|w| w[0] == w[1]);
    (f64::INFINITY, if identical { 0.0 } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(network: &str, n_rewire: usize, statistic: Statistic, value: f64) -> SweepRecord {
        SweepRecord {
            network: network.into(),
            definition: Some(SubgraphDefinition::Corrected),
            n_rewire,
            statistic,
            checkpoint: None,
            value,
            sample_count: 100,
            master_seed: 7,
        }
    }

    #[test]
    fn csv_round_trip_and_order() {
        let mut train = record("B", 90, Statistic::MinMae, 0.125);
        train.definition = None;
        train.checkpoint = Some(150_000);
        let records = vec![
            record("A", 10, Statistic::MeanELocal, 0.1),
            record("A", 0, Statistic::MeanDLocal, f64::INFINITY),
            train,
        ];
        let text = to_csv_string(&records).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "network,definition,n_rewire,statistic,checkpoint,value,sample_count,master_seed");
        assert_eq!(lines[1], "A,corrected,0,mean_d_local,-,inf,100,7");
        assert_eq!(lines[2], "A,corrected,10,mean_e_local,-,0.1,100,7");
        assert_eq!(lines[3], "B,-,90,min_mae,150000,0.125,100,7");

        let mut expected = records.clone();
        sort_records(&mut expected);
        assert_eq!(read_csv(text.as_bytes()).unwrap(), expected);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let text = "network,definition,n_rewire,statistic,checkpoint,value,sample_count,master_seed\nA,corrected,x,mean_e_local,-,0.1,1,1\n";
        assert!(matches!(read_csv(text.as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_csv("a,b\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn extended_statistics() {
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 1.0));
        assert_eq!(mean_std_extended(&[f64::INFINITY; 3]), (f64::INFINITY, 0.0));
        assert_eq!(mean_std_extended(&[1.0, f64::INFINITY]), (f64::INFINITY, f64::INFINITY));
        assert_eq!(mean_std_extended(&[2.0, 2.0]), (2.0, 0.0));
    }
}
