//! Descriptive statistics of a transit network: node/edge counts, degree
//! medians, average shortest path, transitivity, degree assortativity, and the
//! distribution of shortest-path distances.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bfs::{BfsScratch, Orientation};
use crate::error::{Error, Result};
use crate::network::{NodeId, TransitNetwork};
use crate::par::ordered_reduce;
use crate::projection::UndirectedProjection;

/// Which BFS sources to sweep from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceSample {
    Exact,
    /// `count` sources drawn uniformly without replacement using `seed`.
    Sampled { count: usize, seed: u64 },
}

impl SourceSample {
    /// Source nodes in ascending order.
    pub fn sources(&self, n: usize) -> Vec<NodeId> {
        match *self {
            SourceSample::Sampled { count, seed } if count < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picked: Vec<NodeId> = rand::seq::index::sample(&mut rng, n, count)
                    .into_iter()
                    .map(|i| i as NodeId)
                    .collect();
                picked.sort_unstable();
                picked
            }
            _ => (0..n as NodeId).collect(),
        }
    }

    /// Number of sampled sources, or 0 for an exact sweep.
    pub fn recorded_count(&self, n: usize) -> usize {
        match *self {
            SourceSample::Sampled { count, .. } if count < n => count,
            _ => 0,
        }
    }
}

/// One row of network statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub in_deg_median: f64,
    pub out_deg_median: f64,
    /// Mean hop distance over ordered reachable pairs; unreachable pairs excluded.
    pub avg_shortest_path: f64,
    pub reachable_pair_fraction: f64,
    pub clustering: f64,
    /// `None` when either degree marginal has zero variance.
    pub assortativity: Option<f64>,
    /// 0 for an exact all-source computation.
    pub sampled_sources: usize,
}

/// Histogram of BFS hop distances over ordered pairs `(i, j)`, `i != j`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PathLengthHistogram {
    pub counts: BTreeMap<u32, u64>,
    pub unreachable_pairs: u64,
    /// 0 means every node was a source.
    pub sampled_sources: usize,
}

impl PathLengthHistogram {
    pub fn reachable_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn distance_sum(&self) -> u64 {
        self.counts.iter().map(|(&d, &c)| d as u64 * c).sum()
    }

    /// Frequency of each distance among reachable pairs.
    pub fn frequencies(&self) -> BTreeMap<u32, f64> {
        let total = self.reachable_pairs() as f64;
        self.counts.iter().map(|(&d, &c)| (d, c as f64 / total)).collect()
    }

    fn merge(&mut self, other: PathLengthHistogram) {
        for (d, c) in other.counts {
            *self.counts.entry(d).or_insert(0) += c;
        }
        self.unreachable_pairs += other.unreachable_pairs;
    }
}

fn require_nonempty(g: &TransitNetwork) -> Result<()> {
    if g.is_empty() {
        Err(Error::domain("network has no nodes"))
    } else {
        Ok(())
    }
}

/// Median of a sequence; the mean of the two central values for even lengths.
pub fn median(values: &mut [usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] as f64 + values[n / 2] as f64) / 2.0
    })
}

/// Medians of the in-degree and out-degree sequences.
pub fn degree_medians(g: &TransitNetwork) -> Result<(f64, f64)> {
    require_nonempty(g)?;
    let mut ins: Vec<usize> = g.nodes().map(|v| g.in_degree(v)).collect();
    let mut outs: Vec<usize> = g.nodes().map(|v| g.out_degree(v)).collect();
    Ok((median(&mut ins).unwrap(), median(&mut outs).unwrap()))
}

pub fn path_length_distribution(g: &TransitNetwork, sample: SourceSample) -> Result<PathLengthHistogram> {
    require_nonempty(g)?;
    let n = g.node_count();
    let sources = sample.sources(n);
    let mut hist = ordered_reduce(
        &sources,
        || BfsScratch::new(n),
        PathLengthHistogram::default,
        |scratch, acc, &s| {
            scratch.sweep(g, s, Orientation::Out);
            let order = scratch.order();
            let mut d = 0;
            let mut run = 0u64;
            // `order` is sorted by distance, so count runs of equal distance.
            for &v in &order[1..] {
                let dv = scratch.distance(v).unwrap();
                if dv != d {
                    if run > 0 {
                        *acc.counts.entry(d).or_insert(0) += run;
                    }
                    d = dv;
                    run = 0;
                }
                run += 1;
            }
            if run > 0 {
                *acc.counts.entry(d).or_insert(0) += run;
            }
            acc.unreachable_pairs += (n - order.len()) as u64;
        },
        PathLengthHistogram::merge,
    );
    hist.sampled_sources = sample.recorded_count(n);
    Ok(hist)
}

/// Mean hop distance over reachable ordered pairs and the fraction of ordered
/// pairs that are reachable.
pub fn average_shortest_path(g: &TransitNetwork, sample: SourceSample) -> Result<(f64, f64)> {
    let hist = path_length_distribution(g, sample)?;
    summarize_paths(&hist)
}

fn summarize_paths(hist: &PathLengthHistogram) -> Result<(f64, f64)> {
    let reachable = hist.reachable_pairs();
    if reachable == 0 {
        return Err(Error::domain("no reachable ordered pairs"));
    }
    let p = hist.distance_sum() as f64 / reachable as f64;
    let frac = reachable as f64 / (reachable + hist.unreachable_pairs) as f64;
    Ok((p, frac))
}

/// Triangle and connected-triple counts of the undirected projection.
pub fn triangles_and_triples(g: &TransitNetwork) -> (u64, u64) {
    let proj = UndirectedProjection::new(g);
    let n = proj.node_count() as NodeId;
    (0..n)
        .into_par_iter()
        .map(|u| {
            let nu = proj.neighbors(u);
            let d = nu.len() as u64;
            let triples = d * d.saturating_sub(1) / 2;
            let mut tri = 0u64;
            for &v in nu.iter().filter(|&&v| v > u) {
                let nv = proj.neighbors(v);
                // Count w > v in both sorted lists.
                let (mut i, mut j) = (nu.partition_point(|&w| w <= v), nv.partition_point(|&w| w <= v));
                while i < nu.len() && j < nv.len() {
                    match nu[i].cmp(&nv[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            tri += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
            (tri, triples)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Global transitivity of the undirected projection: three times the number of
/// triangles over the number of connected triples (0 when there are none).
pub fn clustering_coefficient(g: &TransitNetwork) -> f64 {
    let (tri, triples) = triangles_and_triples(g);
    if triples == 0 {
        0.0
    } else {
        (3 * tri) as f64 / triples as f64
    }
}

/// Joint distribution of (source out-degree, target in-degree) over edges.
#[derive(Debug, Clone, Default)]
pub struct AssortativityAccumulator {
    joint: BTreeMap<(u64, u64), u64>,
    q_out: BTreeMap<u64, u64>,
    q_in: BTreeMap<u64, u64>,
    edges: u64,
}

impl AssortativityAccumulator {
    pub fn from_network(g: &TransitNetwork) -> Self {
        let mut acc = Self::default();
        for e in g.edges() {
            acc.add(g.out_degree(e.source) as u64, g.in_degree(e.target) as u64);
        }
        acc
    }

    pub fn add(&mut self, j: u64, k: u64) {
        *self.joint.entry((j, k)).or_insert(0) += 1;
        *self.q_out.entry(j).or_insert(0) += 1;
        *self.q_in.entry(k).or_insert(0) += 1;
        self.edges += 1;
    }

    /// Joint frequency e_jk.
    pub fn e(&self, j: u64, k: u64) -> f64 {
        self.joint.get(&(j, k)).copied().unwrap_or(0) as f64 / self.edges as f64
    }

    fn mean_and_sigma(marginal: &BTreeMap<u64, u64>, total: u64) -> (f64, f64) {
        let t = total as f64;
        let mean: f64 = marginal.iter().map(|(&x, &c)| x as f64 * c as f64).sum::<f64>() / t;
        let var: f64 = marginal
            .iter()
            .map(|(&x, &c)| (x as f64 - mean).powi(2) * c as f64)
            .sum::<f64>()
            / t;
        (mean, var.sqrt())
    }

    /// r = Σ_jk jk (e_jk − q_out,j q_in,k) / (σ(q_in) σ(q_out)); `None` when a
    /// marginal has a single support point.
    pub fn coefficient(&self) -> Option<f64> {
        if self.q_out.len() < 2 || self.q_in.len() < 2 {
            return None;
        }
        let (mu_out, s_out) = Self::mean_and_sigma(&self.q_out, self.edges);
        let (mu_in, s_in) = Self::mean_and_sigma(&self.q_in, self.edges);
        // Σ_jk jk q_out,j q_in,k factorizes into μ_out μ_in; centering each
        // term keeps cancellation small.
        let t = self.edges as f64;
        let num: f64 = self
            .joint
            .iter()
            .map(|(&(j, k), &c)| (j as f64 - mu_out) * (k as f64 - mu_in) * c as f64)
            .sum::<f64>()
            / t;
        Some((num / (s_in * s_out)).clamp(-1.0, 1.0))
    }
}

/// Degree assortativity between source out-degree and target in-degree.
pub fn assortativity(g: &TransitNetwork) -> Option<f64> {
    AssortativityAccumulator::from_network(g).coefficient()
}

/// All statistics for one network.
pub fn summarize(g: &TransitNetwork, sample: SourceSample) -> Result<MetricsReport> {
    let (in_med, out_med) = degree_medians(g)?;
    let hist = path_length_distribution(g, sample)?;
    let (p, frac) = summarize_paths(&hist)?;
    Ok(MetricsReport {
        n_nodes: g.node_count(),
        n_edges: g.edge_count(),
        in_deg_median: in_med,
        out_deg_median: out_med,
        avg_shortest_path: p,
        reachable_pair_fraction: frac,
        clustering: clustering_coefficient(g),
        assortativity: assortativity(g),
        sampled_sources: hist.sampled_sources,
    })
}

/// Small-world indicators: p against ln N, c against a randomized counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallWorldComparison {
    pub avg_shortest_path: f64,
    pub ln_n: f64,
    pub clustering: f64,
    pub clustering_randomized: f64,
}

impl SmallWorldComparison {
    pub fn new(observed: &MetricsReport, randomized: &MetricsReport) -> Self {
        SmallWorldComparison {
            avg_shortest_path: observed.avg_shortest_path,
            ln_n: (observed.n_nodes as f64).ln(),
            clustering: observed.clustering,
            clustering_randomized: randomized.clustering,
        }
    }
}
