//! Local bridge values: the length of the shortest detour between an edge's
//! endpoints once the edge itself is removed.

use serde::Serialize;

use crate::bfs::BfsScratch;
use crate::error::{Error, Result};
use crate::network::{NodeId, TransitNetwork};
use crate::par::ordered_map;
use crate::ttest::{welch_t_test, TTestResult};

/// Width of a distance bin, meters.
pub const BIN_WIDTH_M: f64 = 500.0;
/// Number of bins; the last covers [5000, 5500) m.
pub const BIN_COUNT: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BridgeValue {
    Finite(u32),
    /// No path remains once the edge is deleted.
    Disconnected,
}

impl BridgeValue {
    /// Value used when averaging: a disconnected edge counts as `n_nodes`.
    pub fn aggregate(self, n_nodes: usize) -> f64 {
        match self {
            BridgeValue::Finite(v) => v as f64,
            BridgeValue::Disconnected => n_nodes as f64,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, BridgeValue::Finite(_))
    }
}

impl std::fmt::Display for BridgeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BridgeValue::Finite(v) => write!(f, "{v}"),
            BridgeValue::Disconnected => f.write_str("DISCONNECTED"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BridgeRecord {
    pub source: NodeId,
    pub target: NodeId,
    pub value: BridgeValue,
    pub geo_length_m: f64,
    /// Both endpoints are rail stations.
    pub is_rrts_edge: bool,
}

pub fn local_bridge_value(g: &TransitNetwork, source: NodeId, target: NodeId) -> Result<BridgeValue> {
    if (source as usize) >= g.node_count() || (target as usize) >= g.node_count() || !g.has_edge(source, target) {
        return Err(Error::domain(format!("{source}->{target} is not an edge")));
    }
    let mut scratch = BfsScratch::new(g.node_count());
    Ok(detour(g, &mut scratch, source, target))
}

#[inline]
fn detour(g: &TransitNetwork, scratch: &mut BfsScratch, source: NodeId, target: NodeId) -> BridgeValue {
    match scratch.distance_without_edge(g, source, target) {
        Some(d) => BridgeValue::Finite(d),
        None => BridgeValue::Disconnected,
    }
}

/// One record per edge, in canonical edge order.
pub fn all_bridge_values(g: &TransitNetwork) -> Vec<BridgeRecord> {
    let n = g.node_count();
    ordered_map(g.edges(), || BfsScratch::new(n), |scratch, e| BridgeRecord {
        source: e.source,
        target: e.target,
        value: detour(g, scratch, e.source, e.target),
        geo_length_m: e.length_m,
        is_rrts_edge: g.is_rrts(e.source) && g.is_rrts(e.target),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinSummary {
    /// 1-based; bin k covers [(k−1)·500, k·500) meters.
    pub bin_index: usize,
    pub lower_m: f64,
    pub upper_m: f64,
    pub mean_rrts: Option<f64>,
    pub mean_rest: Option<f64>,
    pub n_rrts: usize,
    pub n_rest: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedComparison {
    pub bins: Vec<BinSummary>,
    /// Edges at or beyond the last bin's upper bound.
    pub n_beyond_range: usize,
}

/// 1-based bin index, or `None` at or beyond the last bin.
pub fn bin_of(length_m: f64) -> Option<usize> {
    let k = (length_m / BIN_WIDTH_M).floor();
    (k >= 0.0 && (k as usize) < BIN_COUNT).then(|| k as usize + 1)
}

/// Mean bridge value per 500 m length bin, split into rail and non-rail edges.
/// Disconnected edges enter the means as `n_nodes`.
pub fn binned_comparison(records: &[BridgeRecord], n_nodes: usize) -> BinnedComparison {
    let mut sums = [[0.0f64; 2]; BIN_COUNT];
    let mut counts = [[0usize; 2]; BIN_COUNT];
    let mut beyond = 0;
    for r in records {
        match bin_of(r.geo_length_m) {
            Some(k) => {
                let class = usize::from(!r.is_rrts_edge);
                sums[k - 1][class] += r.value.aggregate(n_nodes);
                counts[k - 1][class] += 1;
            }
            None => beyond += 1,
        }
    }
    let mean = |s: f64, c: usize| (c > 0).then(|| s / c as f64);
    let bins = (0..BIN_COUNT)
        .map(|k| BinSummary {
            bin_index: k + 1,
            lower_m: k as f64 * BIN_WIDTH_M,
            upper_m: (k + 1) as f64 * BIN_WIDTH_M,
            mean_rrts: mean(sums[k][0], counts[k][0]),
            mean_rest: mean(sums[k][1], counts[k][1]),
            n_rrts: counts[k][0],
            n_rest: counts[k][1],
        })
        .collect();
    BinnedComparison {
        bins,
        n_beyond_range: beyond,
    }
}

/// Rail edges against all other edges, over every record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassComparison {
    pub mean_rrts: Option<f64>,
    pub mean_rest: Option<f64>,
    pub n_rrts: usize,
    pub n_rest: usize,
    pub n_disconnected: usize,
    /// Absent when either class has fewer than two edges.
    pub ttest: Option<TTestResult>,
}

pub fn compare_classes(records: &[BridgeRecord], n_nodes: usize) -> ClassComparison {
    let (rail, rest): (Vec<&BridgeRecord>, Vec<&BridgeRecord>) = records.iter().partition(|r| r.is_rrts_edge);
    let values = |rs: &[&BridgeRecord]| rs.iter().map(|r| r.value.aggregate(n_nodes)).collect::<Vec<f64>>();
    let (a, b) = (values(&rail), values(&rest));
    let mean = |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    ClassComparison {
        mean_rrts: mean(&a),
        mean_rest: mean(&b),
        n_rrts: a.len(),
        n_rest: b.len(),
        n_disconnected: records.iter().filter(|r| !r.value.is_finite()).count(),
        ttest: welch_t_test(&a, &b).ok(),
    }
}
