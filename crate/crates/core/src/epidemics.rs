//! Susceptible–infected spreading: a susceptible node with `k` infected
//! neighbors becomes infected in the next step with probability
//! `1 − (1 − λ)^k`.
//!
//! Every exposed node consumes exactly one uniform draw per step, in ascending
//! node order, so a run is a pure function of its RNG stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::centrality::widening_window;
use crate::error::{Error, Result};
use crate::network::{NodeId, TransitNetwork};
use crate::par::ordered_map;
use crate::projection::UndirectedProjection;

pub const DEFAULT_LAMBDA: f64 = 0.4;
pub const DEFAULT_T_MAX: usize = 30;
pub const DEFAULT_TRIALS: usize = 5;
/// Step at which cohort members are ranked for the high/low curves.
pub const SELECTION_STEP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spread {
    /// Infection travels along edge direction.
    Directed,
    /// Infection travels along the undirected projection.
    Undirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiConfig {
    pub lambda: f64,
    pub t_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub spread: Spread,
}

impl Default for SiConfig {
    fn default() -> Self {
        SiConfig {
            lambda: DEFAULT_LAMBDA,
            t_max: DEFAULT_T_MAX,
            trials: DEFAULT_TRIALS,
            seed: 0,
            spread: Spread::Directed,
        }
    }
}

impl SiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Config(format!("lambda {} outside [0, 1]", self.lambda)));
        }
        if self.t_max < 1 || self.trials < 1 {
            return Err(Error::Config("t_max and trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiTrace {
    /// Infected count at t = 0..=t_max.
    pub infected_count: Vec<usize>,
    pub initial_seeds: Vec<NodeId>,
}

/// Neighbor lists used for spreading, either direction-aware or projected.
pub struct SpreadGraph<'a> {
    g: &'a TransitNetwork,
    projection: Option<UndirectedProjection>,
}

impl<'a> SpreadGraph<'a> {
    pub fn new(g: &'a TransitNetwork, spread: Spread) -> Self {
        let projection = (spread == Spread::Undirected).then(|| UndirectedProjection::new(g));
        SpreadGraph { g, projection }
    }

    pub fn node_count(&self) -> usize {
        self.g.node_count()
    }

    /// Nodes a newly infected `v` exposes.
    #[inline]
    fn downstream(&self, v: NodeId) -> &[NodeId] {
        match &self.projection {
            Some(p) => p.neighbors(v),
            None => self.g.out_neighbors(v),
        }
    }

    /// Nodes whose infection exposes `v`.
    #[inline]
    fn upstream(&self, v: NodeId) -> &[NodeId] {
        match &self.projection {
            Some(p) => p.neighbors(v),
            None => self.g.in_neighbors(v),
        }
    }
}

#[inline]
fn infection_probability(lambda: f64, k: u32) -> f64 {
    1.0 - (1.0 - lambda).powi(k as i32)
}

/// One synchronous step by direct scan of every node; the reference
/// implementation of the update rule.
pub fn si_step<R: Rng>(g: &SpreadGraph<'_>, infected: &[bool], lambda: f64, rng: &mut R) -> Vec<bool> {
    let mut next = infected.to_vec();
    for v in 0..g.node_count() as NodeId {
        if infected[v as usize] {
            continue;
        }
        let k = g.upstream(v).iter().filter(|&&u| infected[u as usize]).count() as u32;
        if k == 0 {
            continue;
        }
        let u: f64 = rng.gen();
        if u < infection_probability(lambda, k) {
            next[v as usize] = true;
        }
    }
    next
}

/// Incremental SI state: infected-neighbor counts and the sorted exposed set.
/// Draw order is identical to [`si_step`].
struct SiEngine<'g, 'a> {
    g: &'g SpreadGraph<'a>,
    infected: Vec<bool>,
    pressure: Vec<u32>,
    exposed: Vec<NodeId>,
    count: usize,
    newly: Vec<NodeId>,
}

impl<'g, 'a> SiEngine<'g, 'a> {
    fn new(g: &'g SpreadGraph<'a>, seeds: &[NodeId]) -> Self {
        let n = g.node_count();
        let mut e = SiEngine {
            g,
            infected: vec![false; n],
            pressure: vec![0; n],
            exposed: Vec::new(),
            count: 0,
            newly: Vec::new(),
        };
        let mut fresh: Vec<NodeId> = seeds.to_vec();
        fresh.sort_unstable();
        fresh.dedup();
        e.infect(&fresh);
        e
    }

    fn infect(&mut self, nodes: &[NodeId]) {
        for &v in nodes {
            self.infected[v as usize] = true;
        }
        self.count += nodes.len();
        self.exposed.retain(|&v| !self.infected[v as usize]);
        let before = self.exposed.len();
        for &v in nodes {
            for &w in self.g.downstream(v) {
                if self.infected[w as usize] {
                    continue;
                }
                if self.pressure[w as usize] == 0 {
                    self.exposed.push(w);
                }
                self.pressure[w as usize] += 1;
            }
        }
        if self.exposed.len() > before {
            self.exposed.sort_unstable();
        }
    }

    fn step<R: Rng>(&mut self, lambda: f64, rng: &mut R) {
        self.newly.clear();
        for &v in &self.exposed {
            let u: f64 = rng.gen();
            if u < infection_probability(lambda, self.pressure[v as usize]) {
                self.newly.push(v);
            }
        }
        let newly = std::mem::take(&mut self.newly);
        self.infect(&newly);
        self.newly = newly;
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_trial(g: &SpreadGraph<'_>, seeds: &[NodeId], cfg: &SiConfig, stream: u64) -> SiTrace {
    let mut rng = trial_rng(cfg.seed, stream);
    let mut engine = SiEngine::new(g, seeds);
    let mut counts = Vec::with_capacity(cfg.t_max + 1);
    counts.push(engine.count);
    for _ in 0..cfg.t_max {
        engine.step(cfg.lambda, &mut rng);
        counts.push(engine.count);
    }
    let mut initial: Vec<NodeId> = seeds.to_vec();
    initial.sort_unstable();
    initial.dedup();
    SiTrace {
        infected_count: counts,
        initial_seeds: initial,
    }
}

/// RNG stream for trial `trial` of the per-station run seeded at `station`.
/// Stream 0..trials is reserved for [`si_run`].
fn station_stream(station: NodeId, trial: usize) -> u64 {
    ((station as u64 + 1) << 32) | trial as u64
}

fn check_seeds(g: &TransitNetwork, seeds: &[NodeId]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::domain("SI run needs at least one seed"));
    }
    if let Some(&s) = seeds.iter().find(|&&s| s as usize >= g.node_count()) {
        return Err(Error::domain(format!("seed {s} is not a node")));
    }
    Ok(())
}

/// `cfg.trials` independent runs from `seeds`; trial `i` uses RNG stream `i` of `cfg.seed`.
pub fn si_run(g: &TransitNetwork, seeds: &[NodeId], cfg: &SiConfig) -> Result<Vec<SiTrace>> {
    cfg.validate()?;
    check_seeds(g, seeds)?;
    let sg = SpreadGraph::new(g, cfg.spread);
    let trials: Vec<usize> = (0..cfg.trials).collect();
    Ok(ordered_map(&trials, || (), |_, &i| run_trial(&sg, seeds, cfg, i as u64)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationCurve {
    pub station: NodeId,
    /// Mean infected fraction over trials, t = 0..=t_max.
    pub mean: Vec<f64>,
    /// Sample standard deviation over trials (0 for a single trial).
    pub trial_std: Vec<f64>,
    pub traces: Vec<SiTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortSummary {
    pub selection_step: usize,
    pub stations: Vec<StationCurve>,
    /// Station with the largest mean fraction at the selection step.
    pub high: NodeId,
    /// Station with the smallest mean fraction at the selection step.
    pub low: NodeId,
    /// Mean of the station curves.
    pub mean: Vec<f64>,
    /// Sample standard deviation of the station curves across the cohort.
    pub std: Vec<f64>,
}

impl CohortSummary {
    pub fn curve(&self, station: NodeId) -> Option<&StationCurve> {
        self.stations.iter().find(|c| c.station == station)
    }

    pub fn high_curve(&self) -> &[f64] {
        &self.curve(self.high).expect("high station in cohort").mean
    }

    pub fn low_curve(&self) -> &[f64] {
        &self.curve(self.low).expect("low station in cohort").mean
    }
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let first = values.clone().next().unwrap_or(f64::NAN);
    if values.clone().all(|x| x == first) {
        // Exact, without summation rounding.
        return (first, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n;
    let std = if n > 1.0 {
        (values.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Runs each cohort station as a single spreader and summarizes the curves.
pub fn cohort_experiment(g: &TransitNetwork, cohort: &[NodeId], cfg: &SiConfig) -> Result<CohortSummary> {
    cfg.validate()?;
    if cohort.is_empty() {
        return Err(Error::domain("cohort is empty"));
    }
    check_seeds(g, cohort)?;
    let sg = SpreadGraph::new(g, cfg.spread);
    let n = g.node_count() as f64;
    let steps = cfg.t_max + 1;
    let stations: Vec<StationCurve> = ordered_map(cohort, || (), |_, &s| {
        let traces: Vec<SiTrace> = (0..cfg.trials)
            .map(|i| run_trial(&sg, &[s], cfg, station_stream(s, i)))
            .collect();
        let (mean, trial_std) = (0..steps)
            .map(|t| mean_std(traces.iter().map(move |tr| tr.infected_count[t] as f64 / n)))
            .unzip();
        StationCurve {
            station: s,
            mean,
            trial_std,
            traces,
        }
    });
    let sel = SELECTION_STEP.min(cfg.t_max);
    let by_sel = |c: &&StationCurve| c.mean[sel];
    let high = stations
        .iter()
        .max_by(|a, b| by_sel(a).total_cmp(&by_sel(b)).then(b.station.cmp(&a.station)))
        .unwrap()
        .station;
    let low = stations
        .iter()
        .min_by(|a, b| by_sel(a).total_cmp(&by_sel(b)).then(a.station.cmp(&b.station)))
        .unwrap()
        .station;
    let (mean, std) = (0..steps)
        .map(|t| mean_std(stations.iter().map(move |c| c.mean[t])))
        .unzip();
    Ok(CohortSummary {
        selection_step: sel,
        stations,
        high,
        low,
        mean,
        std,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cohorts {
    /// Every rail station.
    pub rail: Vec<NodeId>,
    /// The `|rail|` stations with the highest total degree.
    pub top_degree: Vec<NodeId>,
    /// One distinct non-rail station of comparable degree per rail station.
    pub degree_matched: Vec<NodeId>,
}

/// Builds the three seed cohorts. Degree matching uses a ±`window_pct` window
/// on total degree, widened in 5-point steps, sampling without replacement.
pub fn select_cohorts(g: &TransitNetwork, window_pct: f64, seed: u64) -> Result<Cohorts> {
    let rail = g.rail_nodes();
    let r = rail.len();
    if r == 0 {
        return Err(Error::domain("network has no rail stations"));
    }
    let mut by_degree: Vec<NodeId> = g.nodes().collect();
    by_degree.sort_by(|&a, &b| g.total_degree(b).cmp(&g.total_degree(a)).then(a.cmp(&b)));
    let top_degree: Vec<NodeId> = {
        let mut t = by_degree[..r].to_vec();
        t.sort_unstable();
        t
    };

    let mut pool: Vec<(usize, NodeId)> = g
        .nodes()
        .filter(|&v| !g.is_rrts(v))
        .map(|v| (g.total_degree(v), v))
        .collect();
    if pool.len() < r {
        return Err(Error::domain(format!(
            "only {} non-rail stations available to match {r} rail stations",
            pool.len()
        )));
    }
    pool.sort_unstable();
    let (min_deg, max_deg) = (pool[0].0, pool[pool.len() - 1].0);
    let mut used = vec![false; g.node_count()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matched = Vec::with_capacity(r);
    for &s in &rail {
        let d = g.total_degree(s);
        let available = |lo: f64, hi: f64, used: &[bool]| -> Vec<NodeId> {
            let a = pool.partition_point(|p| (p.0 as f64) < lo);
            let b = pool.partition_point(|p| (p.0 as f64) <= hi);
            pool[a..b.max(a)].iter().map(|p| p.1).filter(|&v| !used[v as usize]).collect()
        };
        let window = widening_window(d, window_pct, min_deg, max_deg, |lo, hi| !available(lo, hi, &used).is_empty());
        let (_, lo, hi) = window.ok_or_else(|| {
            Error::domain(format!("no unused comparable-degree station left for rail station {}", g.station(s).id))
        })?;
        let mut cands = available(lo, hi, &used);
        cands.sort_unstable();
        let pick = cands[rng.gen_range(0..cands.len())];
        used[pick as usize] = true;
        matched.push(pick);
    }
    Ok(Cohorts {
        rail,
        top_degree,
        degree_matched: matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{directed_cycle, directed_path, random_digraph};

    fn cfg(lambda: f64, t_max: usize, trials: usize) -> SiConfig {
        SiConfig { lambda, t_max, trials, seed: 42, spread: Spread::Directed }
    }

    #[test]
    fn lambda_zero_is_constant() {
        let g = random_digraph(30, 0.2, 1);
        for tr in si_run(&g, &[0, 5], &cfg(0.0, 10, 3)).unwrap() {
            assert!(tr.infected_count.iter().all(|&c| c == 2));
            assert_eq!(tr.initial_seeds, vec![0, 5]);
        }
    }

    #[test]
    fn lambda_one_on_path_follows_layers() {
        let len = 6;
        let g = directed_path(len + 1);
        let tr = &si_run(&g, &[0], &cfg(1.0, 10, 1)).unwrap()[0];
        for (t, &c) in tr.infected_count.iter().enumerate() {
            assert_eq!(c, (t + 1).min(len + 1));
        }
    }

    #[test]
    fn engine_matches_reference_step() {
        let g = random_digraph(40, 0.08, 6);
        for spread in [Spread::Directed, Spread::Undirected] {
            let sg = SpreadGraph::new(&g, spread);
            let mut rng_a = trial_rng(3, 9);
            let mut rng_b = trial_rng(3, 9);
            let mut engine = SiEngine::new(&sg, &[2, 7]);
            let mut state = vec![false; 40];
            state[2] = true;
            state[7] = true;
            for _ in 0..12 {
                engine.step(0.3, &mut rng_a);
                state = si_step(&sg, &state, 0.3, &mut rng_b);
                assert_eq!(engine.infected, state);
                assert_eq!(engine.count, state.iter().filter(|&&b| b).count());
            }
        }
    }

    #[test]
    fn traces_are_monotone_and_seeded() {
        let g = random_digraph(50, 0.05, 2);
        let a = si_run(&g, &[3], &cfg(0.4, 30, 4)).unwrap();
        let b = si_run(&g, &[3], &cfg(0.4, 30, 4)).unwrap();
        assert_eq!(a, b);
        for tr in &a {
            assert_eq!(tr.infected_count[0], 1);
            assert!(tr.infected_count.windows(2).all(|w| w[0] <= w[1]));
            assert!(*tr.infected_count.last().unwrap() <= 50);
        }
    }

    #[test]
    fn empty_seeds_rejected() {
        let g = directed_cycle(3);
        assert!(matches!(si_run(&g, &[], &cfg(0.4, 5, 1)), Err(Error::Domain(_))));
        assert!(matches!(si_run(&g, &[0], &cfg(1.5, 5, 1)), Err(Error::Config(_))));
    }

    #[test]
    fn single_station_cohort() {
        let g = random_digraph(30, 0.1, 4);
        let s = cohort_experiment(&g, &[4], &cfg(0.4, 30, 5)).unwrap();
        assert_eq!(s.high, 4);
        assert_eq!(s.low, 4);
        assert_eq!(s.mean, s.high_curve());
        assert_eq!(s.mean, s.low_curve());
    }

    #[test]
    fn deterministic_lambda_has_no_spread() {
        let g = random_digraph(30, 0.1, 4);
        let s = cohort_experiment(&g, &[1, 2, 3], &cfg(1.0, 10, 4)).unwrap();
        for c in &s.stations {
            assert!(c.trial_std.iter().all(|&x| x == 0.0));
        }
        let sel = s.selection_step;
        assert!(s.low_curve()[sel] <= s.mean[sel] && s.mean[sel] <= s.high_curve()[sel]);
    }

    #[test]
    fn cohorts_on_small_network() {
        // Rail nodes 0,1,2 on a path; bus nodes 3..=9.
        let mut pairs = vec![(0, 1), (1, 0), (1, 2), (2, 1)];
        for v in 3..9u32 {
            pairs.push((v, v + 1));
            pairs.push((v + 1, v));
        }
        pairs.push((2, 3));
        let g = TransitNetwork::from_edge_list_with_rail(10, &pairs, &[0, 1, 2]).unwrap();
        let c = select_cohorts(&g, 5.0, 11).unwrap();
        assert_eq!(c.rail, vec![0, 1, 2]);
        assert_eq!(c.top_degree.len(), 3);
        assert_eq!(c.degree_matched.len(), 3);
        assert!(c.degree_matched.iter().all(|v| !c.rail.contains(v)));
        let mut uniq = c.degree_matched.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), 3);
        assert_eq!(c, select_cohorts(&g, 5.0, 11).unwrap());
    }

    #[test]
    fn too_few_candidates() {
        let g = TransitNetwork::from_edge_list_with_rail(3, &[(0, 1), (1, 2)], &[0, 1]).unwrap();
        assert!(matches!(select_cohorts(&g, 5.0, 1), Err(Error::Domain(_))));
    }
}
