//! Small-world classification of metric-sweep curves.
//!
//! A curve counts as small-world when the unrewired network is already
//! locally efficient (`E_local(0)` positive and within [`PREMISE_FRACTION`]
//! of the curve's maximum) and some rewired point reaches at least
//! [`THRESHOLD_FRACTION`] of the maximum in both `E_local` and `E_global`.

use std::collections::BTreeMap;
use std::fmt;

use super::records::{Statistic, SweepRecord};
use crate::error::{Error, Result};
use crate::metrics::SubgraphDefinition;

pub const THRESHOLD_FRACTION: f64 = 0.8;
pub const PREMISE_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Present,
    Absent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Present => "present",
            Verdict::Absent => "absent",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallWorldVerdict {
    pub network: String,
    pub definition: SubgraphDefinition,
    pub verdict: Verdict,
    pub e_local_unrewired: f64,
    pub max_e_local: f64,
    pub max_e_global: f64,
    /// Rewire counts that met both thresholds.
    pub qualifying: Vec<usize>,
}

/// One verdict per `(network, definition)` curve found in the records.
pub fn small_world_verdict(records: &[SweepRecord]) -> Result<Vec<SmallWorldVerdict>> {
    // (network, definition) -> k -> (mean_e_local, mean_e_global)
    let mut curves: BTreeMap<(String, SubgraphDefinition), BTreeMap<usize, (Option<f64>, Option<f64>)>> =
        BTreeMap::new();
    for r in records {
        let Some(def) = r.definition else { continue };
        let slot = curves
            .entry((r.network.clone(), def))
            .or_default()
            .entry(r.n_rewire)
            .or_default();
        match r.statistic {
            Statistic::MeanELocal => slot.0 = Some(r.value),
            Statistic::MeanEGlobal => slot.1 = Some(r.value),
            _ => {}
        }
    }
    if curves.is_empty() {
        return Err(Error::config("records", "no metric-sweep records to classify"));
    }

    let mut verdicts = Vec::new();
    for ((network, definition), points) in curves {
        let points: BTreeMap<usize, (f64, f64)> = points
            .into_iter()
            .filter_map(|(k, (l, g))| Some((k, (l?, g?))))
            .collect();
        let Some(&(e_local_unrewired, _)) = points.get(&0) else {
            return Err(Error::config(
                "rewire_counts",
                format!("{network}/{definition}: the grid must include 0"),
            ));
        };
        if points.len() < 4 {
            return Err(Error::config(
                "rewire_counts",
                format!("{network}/{definition}: need 0 and at least 3 larger rewire counts"),
            ));
        }
        let max_e_local = points.values().map(|p| p.0).fold(0.0, f64::max);
        let max_e_global = points.values().map(|p| p.1).fold(0.0, f64::max);
        let premise = e_local_unrewired > 0.0 && e_local_unrewired >= PREMISE_FRACTION * max_e_local;
        let qualifying: Vec<usize> = points
            .iter()
            .filter(|(&k, &(l, g))| {
                k > 0 && l >= THRESHOLD_FRACTION * max_e_local && g >= THRESHOLD_FRACTION * max_e_global
            })
            .map(|(&k, _)| k)
            .collect();
        let verdict = if premise && !qualifying.is_empty() {
            Verdict::Present
        } else {
            Verdict::Absent
        };
        verdicts.push(SmallWorldVerdict {
            network,
            definition,
            verdict,
            e_local_unrewired,
            max_e_local,
            max_e_global,
            qualifying,
        });
    }
    Ok(verdicts)
}
