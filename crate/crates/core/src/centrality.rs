//! Betweenness and closeness centrality, rankings, and degree-matched
//! betweenness baselines.

use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use serde::Serialize;

use crate::bfs::{BfsScratch, Orientation};
use crate::error::{Error, Result};
use crate::network::{NodeId, TransitNetwork};
use crate::par::{ordered_map, ordered_reduce};

/// Default half-width of the "comparable degree" window, percent.
pub const DEFAULT_WINDOW_PCT: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityKind {
    Betweenness,
    ClosenessIn,
    ClosenessOut,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    /// Indexed by node.
    pub scores: Vec<f64>,
}

/// Arithmetic needed by dependency accumulation; lets the same sweep run on
/// floats for real networks and on exact rationals for verification.
pub trait PathWeight:
    Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
}

impl PathWeight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
}

impl PathWeight for Ratio<i128> {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
}

/// Per-source accumulators: shortest-path counts σ and dependencies δ.
pub struct BrandesState<T> {
    bfs: BfsScratch,
    sigma: Vec<T>,
    delta: Vec<T>,
}

impl<T: PathWeight> BrandesState<T> {
    pub fn new(n: usize) -> Self {
        BrandesState {
            bfs: BfsScratch::new(n),
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
        }
    }

    /// Adds the dependencies of `source` on every other node into `acc`.
    pub fn accumulate(&mut self, g: &TransitNetwork, source: NodeId, acc: &mut [T]) {
        self.bfs.sweep(g, source, Orientation::Out);
        let order = self.bfs.order();
        for &v in order {
            self.sigma[v as usize] = T::zero();
            self.delta[v as usize] = T::zero();
        }
        self.sigma[source as usize] = T::one();
        for &w in &order[1..] {
            let dw = self.bfs.distance(w).unwrap();
            let mut s = T::zero();
            for &v in g.in_neighbors(w) {
                if self.bfs.distance(v) == Some(dw - 1) {
                    s = s + self.sigma[v as usize].clone();
                }
            }
            self.sigma[w as usize] = s;
        }
        for &w in order[1..].iter().rev() {
            let dw = self.bfs.distance(w).unwrap();
            let coeff = (T::one() + self.delta[w as usize].clone()) / self.sigma[w as usize].clone();
            for &v in g.in_neighbors(w) {
                if self.bfs.distance(v) == Some(dw - 1) {
                    let inc = self.sigma[v as usize].clone() * coeff.clone();
                    self.delta[v as usize] = self.delta[v as usize].clone() + inc;
                }
            }
            acc[w as usize] = acc[w as usize].clone() + self.delta[w as usize].clone();
        }
    }
}

/// Unnormalized betweenness over ordered pairs of a directed graph.
pub fn betweenness_all(g: &TransitNetwork) -> CentralityScores {
    let n = g.node_count();
    let sources: Vec<NodeId> = g.nodes().collect();
    let scores = ordered_reduce(
        &sources,
        || BrandesState::<f64>::new(n),
        || vec![0.0; n],
        |state, acc, &s| state.accumulate(g, s, acc),
        |total, part| {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        },
    );
    CentralityScores {
        kind: CentralityKind::Betweenness,
        scores,
    }
}

/// Betweenness in exact rational arithmetic; sequential, meant for small graphs.
pub fn betweenness_exact(g: &TransitNetwork) -> Vec<Ratio<i128>> {
    let n = g.node_count();
    let mut state = BrandesState::<Ratio<i128>>::new(n);
    let mut acc = vec![Ratio::from_integer(0); n];
    for s in g.nodes() {
        state.accumulate(g, s, &mut acc);
    }
    acc
}

/// Sum of distances from (`Out`) or to (`In`) every node, with each unreachable
/// counterpart contributing `n`.
pub fn distance_sums(g: &TransitNetwork, orientation: Orientation) -> Vec<u64> {
    let n = g.node_count();
    let nodes: Vec<NodeId> = g.nodes().collect();
    ordered_map(&nodes, || BfsScratch::new(n), |scratch, &v| {
        scratch.sweep(g, v, orientation);
        let reached: u64 = scratch.order().iter().map(|&u| scratch.distance(u).unwrap() as u64).sum();
        let unreachable = (n - scratch.order().len()) as u64;
        reached + unreachable * n as u64
    })
}

fn closeness(g: &TransitNetwork, orientation: Orientation, kind: CentralityKind) -> Result<CentralityScores> {
    if g.node_count() < 2 {
        return Err(Error::domain("closeness needs at least two nodes"));
    }
    let scores = distance_sums(g, orientation).into_iter().map(|s| 1.0 / s as f64).collect();
    Ok(CentralityScores { kind, scores })
}

/// 1 / Σ_i d(i, v).
pub fn closeness_in(g: &TransitNetwork) -> Result<CentralityScores> {
    closeness(g, Orientation::In, CentralityKind::ClosenessIn)
}

/// 1 / Σ_i d(v, i).
pub fn closeness_out(g: &TransitNetwork) -> Result<CentralityScores> {
    closeness(g, Orientation::Out, CentralityKind::ClosenessOut)
}

/// The `k` highest scores, descending; ties go to the lower node index (that
/// is, the lexicographically smaller station id).
pub fn top_k(scores: &[f64], k: usize) -> Vec<(NodeId, f64)> {
    top_k_among(scores, 0..scores.len() as NodeId, k)
}

/// [`top_k`] restricted to `candidates`.
pub fn top_k_among(scores: &[f64], candidates: impl IntoIterator<Item = NodeId>, k: usize) -> Vec<(NodeId, f64)> {
    let mut ranked: Vec<(NodeId, f64)> = candidates.into_iter().map(|v| (v, scores[v as usize])).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

/// Window `[d·(1−w), d·(1+w)]` widened in 5-point steps from `base_pct` until
/// `accept` holds. Gives up (returns `None`) once the window spans every
/// candidate degree in `[min_deg, max_deg]` without acceptance; a zero degree
/// falls back to the full candidate range.
pub(crate) fn widening_window(
    degree: usize,
    base_pct: f64,
    min_deg: usize,
    max_deg: usize,
    mut accept: impl FnMut(f64, f64) -> bool,
) -> Option<(f64, f64, f64)> {
    let d = degree as f64;
    for step in 0.. {
        let pct = base_pct + 5.0 * step as f64;
        let w = pct / 100.0;
        let (lo, hi) = ((d * (1.0 - w)).max(0.0), d * (1.0 + w));
        if accept(lo, hi) {
            return Some((pct, lo, hi));
        }
        let covers = lo <= min_deg as f64 && hi >= max_deg as f64;
        if covers || (degree == 0 && w >= 1.0) {
            break;
        }
    }
    if degree == 0 {
        let (lo, hi) = (0.0, max_deg as f64);
        if accept(lo, hi) {
            return Some((f64::INFINITY, lo, hi));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineRow {
    pub node: NodeId,
    pub degree: usize,
    pub betweenness: f64,
    /// Mean betweenness of non-target nodes in the window; `None` when unmatched.
    pub baseline: Option<f64>,
    pub window_pct: Option<f64>,
    pub n_matched: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineComparison {
    pub rows: Vec<BaselineRow>,
}

/// For each target, the mean betweenness of non-target nodes whose total
/// degree is within `window_pct` percent of the target's (widened as needed).
pub fn degree_matched_baseline(
    g: &TransitNetwork,
    betweenness: &CentralityScores,
    targets: &[NodeId],
    window_pct: f64,
) -> Result<BaselineComparison> {
    let n = g.node_count();
    let mut is_target = vec![false; n];
    for &t in targets {
        if t as usize >= n {
            return Err(Error::domain(format!("target {t} is not a node")));
        }
        is_target[t as usize] = true;
    }
    // Non-targets sorted by degree for range queries.
    let mut pool: Vec<(usize, NodeId)> = g
        .nodes()
        .filter(|&v| !is_target[v as usize])
        .map(|v| (g.total_degree(v), v))
        .collect();
    pool.sort_unstable();
    let (min_deg, max_deg) = (pool.first().map_or(0, |p| p.0), pool.last().map_or(0, |p| p.0));
    let in_window = |lo: f64, hi: f64| {
        let a = pool.partition_point(|p| (p.0 as f64) < lo);
        let b = pool.partition_point(|p| (p.0 as f64) <= hi);
        &pool[a..b.max(a)]
    };
    let rows = targets
        .iter()
        .map(|&t| {
            let d = g.total_degree(t);
            let found = if pool.is_empty() {
                None
            } else {
                widening_window(d, window_pct, min_deg, max_deg, |lo, hi| !in_window(lo, hi).is_empty())
            };
            let (baseline, window_pct, n_matched) = match found {
                Some((pct, lo, hi)) => {
                    let matched = in_window(lo, hi);
                    let sum: f64 = matched.iter().map(|&(_, v)| betweenness.scores[v as usize]).sum();
                    (Some(sum / matched.len() as f64), Some(pct), matched.len())
                }
                None => (None, None, 0),
            };
            BaselineRow {
                node: t,
                degree: d,
                betweenness: betweenness.scores[t as usize],
                baseline,
                window_pct,
                n_matched,
            }
        })
        .collect();
    Ok(BaselineComparison { rows })
}
