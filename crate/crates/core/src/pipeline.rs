//! End-to-end orchestration: load inputs, build G1–G4, run the requested
//! analyses, and write reports plus a run manifest into an output directory.
//!
//! Every output is a pure function of the inputs and the configuration, so two
//! runs with the same config produce byte-identical directories regardless of
//! the worker count.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bridges::{all_bridge_values, binned_comparison, compare_classes, BridgeRecord};
use crate::centrality::{betweenness_all, closeness_in, closeness_out, degree_matched_baseline, top_k_among, DEFAULT_WINDOW_PCT};
use crate::community::{community_benefit, detect_communities_cnm, CommunityPartition};
use crate::epidemics::{cohort_experiment, select_cohorts, CohortSummary, SiConfig, Spread, DEFAULT_LAMBDA, DEFAULT_TRIALS, DEFAULT_T_MAX};
use crate::error::{Error, Result};
use crate::format::{json_opt_real, json_real, opt_real, real};
use crate::io::{load_routes, load_stations};
use crate::metrics::{path_length_distribution, summarize, MetricsReport, SmallWorldComparison, SourceSample};
use crate::network::{build_network, remove_rrts, rrts_subnetwork, TransitNetwork, DEFAULT_PROXIMITY_M};
use crate::null_model::{rewire_with_stats, RewireConfig, RewireStats, DEFAULT_MAX_ATTEMPTS_PER_SWAP, DEFAULT_SWAP_MULTIPLIER};
use crate::ttest::TTestResult;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const DEFAULT_TOP_K: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Build,
    Stats,
    Bridges,
    Centrality,
    Communities,
    Benefit,
    Si,
    All,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Stats => "stats",
            Command::Bridges => "bridges",
            Command::Centrality => "centrality",
            Command::Communities => "communities",
            Command::Benefit => "benefit",
            Command::Si => "si",
            Command::All => "all",
        }
    }

    fn stages(self) -> &'static [Command] {
        use Command::*;
        match self {
            All => &[Build, Stats, Bridges, Centrality, Communities, Benefit, Si],
            Build => &[Build],
            Stats => &[Stats],
            Bridges => &[Bridges],
            Centrality => &[Centrality],
            Communities => &[Communities],
            Benefit => &[Benefit],
            Si => &[Si],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub stations: PathBuf,
    pub routes: PathBuf,
    /// Not recorded in the manifest so that runs into different directories compare equal.
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub proximity_m: f64,
    pub seed: u64,
    pub workers: usize,
    /// BFS sources for path-length statistics; `None` sweeps every node.
    pub sample_sources: Option<usize>,
    pub swap_multiplier: f64,
    pub lambda: f64,
    pub t_max: usize,
    pub trials: usize,
    pub spread: Spread,
    pub top_k: usize,
    pub window_pct: f64,
}

impl PipelineConfig {
    pub fn new(stations: impl Into<PathBuf>, routes: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            stations: stations.into(),
            routes: routes.into(),
            out_dir: out_dir.into(),
            proximity_m: DEFAULT_PROXIMITY_M,
            seed: 0,
            workers: 1,
            sample_sources: None,
            swap_multiplier: DEFAULT_SWAP_MULTIPLIER,
            lambda: DEFAULT_LAMBDA,
            t_max: DEFAULT_T_MAX,
            trials: DEFAULT_TRIALS,
            spread: Spread::Directed,
            top_k: DEFAULT_TOP_K,
            window_pct: DEFAULT_WINDOW_PCT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {x}")))
            }
        };
        positive("proximity_m", self.proximity_m)?;
        positive("window_pct", self.window_pct)?;
        if !(self.swap_multiplier.is_finite() && self.swap_multiplier >= 0.0) {
            return Err(Error::Config(format!("swap multiplier must be nonnegative, got {}", self.swap_multiplier)));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.sample_sources == Some(0) {
            return Err(Error::Config("sample_sources must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        self.si_config().validate()
    }

    fn si_config(&self) -> SiConfig {
        SiConfig {
            lambda: self.lambda,
            t_max: self.t_max,
            trials: self.trials,
            seed: self.seeds().si,
            spread: self.spread,
        }
    }

    /// Independent sub-seeds derived from the master seed.
    pub fn seeds(&self) -> Seeds {
        Seeds {
            master: self.seed,
            source_sample: derive_seed(self.seed, 1),
            rewire: derive_seed(self.seed, 2),
            cohorts: derive_seed(self.seed, 3),
            si: derive_seed(self.seed, 4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Seeds {
    pub master: u64,
    pub source_sample: u64,
    pub rewire: u64,
    pub cohorts: u64,
    pub si: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub outputs: Vec<String>,
}

struct Networks {
    g1: TransitNetwork,
    g2: TransitNetwork,
    g3: TransitNetwork,
}

struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl Outputs<'_> {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let path = self.dir.join(name);
        let fail = |e: csv::Error| Error::Invariant(format!("{}: {e}", path.display()));
        w.write_record(header).map_err(fail)?;
        for row in rows {
            w.write_record(&row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
        self.write(name, &bytes)
    }
}

/// Runs `command` and writes its reports into `cfg.out_dir`.
pub fn run_pipeline(command: Command, cfg: &PipelineConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    pool.install(|| run_stages(command, cfg))
}

fn run_stages(command: Command, cfg: &PipelineConfig) -> Result<RunSummary> {
    let started = Instant::now();
    let stations = load_stations(&cfg.stations)?;
    let routes = load_routes(&cfg.routes, &stations)?;
    let g1 = build_network(&stations, &routes, cfg.proximity_m)?;
    let nets = Networks {
        g2: remove_rrts(&g1),
        g3: rrts_subnetwork(&g1),
        g1,
    };
    info!(
        "built network: {} stations, {} edges ({:.2?})",
        nets.g1.node_count(),
        nets.g1.edge_count(),
        started.elapsed()
    );

    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let mut out = Outputs {
        dir: &cfg.out_dir,
        written: Vec::new(),
    };
    let mut partition: Option<CommunityPartition> = None;
    let mut extra = BTreeMap::new();
    for &stage in command.stages() {
        let t = Instant::now();
        match stage {
            Command::Build => stage_build(&nets, &mut out)?,
            Command::Stats => {
                let stats = stage_stats(&nets, cfg, &mut out)?;
                extra.insert("rewire", serde_json::to_value(stats).expect("plain struct"));
            }
            Command::Bridges => stage_bridges(&nets, &mut out)?,
            Command::Centrality => stage_centrality(&nets, cfg, &mut out)?,
            Command::Communities => partition = Some(stage_communities(&nets, &mut out)?),
            Command::Benefit => {
                let p = match partition.take() {
                    Some(p) => p,
                    None => detect_communities_cnm(&nets.g2)?.partition,
                };
                stage_benefit(&nets, &p, &mut out)?;
            }
            Command::Si => stage_si(&nets, cfg, &mut out)?,
            Command::All => unreachable!("expanded into stages"),
        }
        info!("{} done ({:.2?})", stage.as_str(), t.elapsed());
    }

    let mut outputs = out.written.clone();
    outputs.sort();
    let manifest = json!({
        "command": command.as_str(),
        "config": config_json(cfg),
        "seeds": cfg.seeds(),
        "inputs": {
            "stations": stations.len(),
            "routes": routes.len(),
        },
        "networks": {
            "G1": [nets.g1.node_count(), nets.g1.edge_count()],
            "G2": [nets.g2.node_count(), nets.g2.edge_count()],
            "G3": [nets.g3.node_count(), nets.g3.edge_count()],
        },
        "stage_info": extra,
        "outputs": outputs,
    });
    out.json(MANIFEST_FILE, &manifest)?;
    let mut outputs = out.written;
    outputs.sort();
    Ok(RunSummary { outputs })
}

/// Input file names only, so the manifest does not depend on where the inputs live.
fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn config_json(cfg: &PipelineConfig) -> Value {
    json!({
        "stations": file_name(&cfg.stations),
        "routes": file_name(&cfg.routes),
        "proximity_m": json_real(cfg.proximity_m),
        "seed": cfg.seed,
        "workers": cfg.workers,
        "sample_sources": cfg.sample_sources,
        "swap_multiplier": json_real(cfg.swap_multiplier),
        "max_attempts_per_swap": DEFAULT_MAX_ATTEMPTS_PER_SWAP,
        "lambda": json_real(cfg.lambda),
        "t_max": cfg.t_max,
        "trials": cfg.trials,
        "spread": cfg.spread,
        "top_k": cfg.top_k,
        "window_pct": json_real(cfg.window_pct),
    })
}

fn stage_build(nets: &Networks, out: &mut Outputs) -> Result<()> {
    let rows = [("G1", &nets.g1), ("G2", &nets.g2), ("G3", &nets.g3)].map(|(name, g)| {
        vec![
            name.to_string(),
            g.node_count().to_string(),
            g.edge_count().to_string(),
            g.rail_nodes().len().to_string(),
        ]
    });
    out.csv("networks.csv", &["network", "nodes", "edges", "rail_nodes"], rows)?;
    let g = &nets.g1;
    let edges = g.edges().iter().map(|e| {
        vec![
            g.station(e.source).id.clone(),
            g.station(e.target).id.clone(),
            real(e.length_m),
            e.origin.bus_route.to_string(),
            e.origin.rail_route.to_string(),
            e.origin.proximity.to_string(),
        ]
    });
    out.csv(
        "edges_g1.csv",
        &["source", "target", "length_m", "bus_route", "rail_route", "proximity"],
        edges,
    )
}

fn report_json(r: &MetricsReport) -> Value {
    json!({
        "nodes": r.n_nodes,
        "edges": r.n_edges,
        "in_degree_median": json_real(r.in_deg_median),
        "out_degree_median": json_real(r.out_deg_median),
        "avg_shortest_path": json_real(r.avg_shortest_path),
        "reachable_pair_fraction": json_real(r.reachable_pair_fraction),
        "clustering": json_real(r.clustering),
        "assortativity": json_opt_real(r.assortativity),
        "sampled_sources": r.sampled_sources,
    })
}

fn stage_stats(nets: &Networks, cfg: &PipelineConfig, out: &mut Outputs) -> Result<RewireStats> {
    let seeds = cfg.seeds();
    let sample = match cfg.sample_sources {
        Some(count) => SourceSample::Sampled {
            count,
            seed: seeds.source_sample,
        },
        None => SourceSample::Exact,
    };
    let rewire_cfg = RewireConfig::for_network(&nets.g1, cfg.swap_multiplier, seeds.rewire);
    let (g4, stats) = rewire_with_stats(&nets.g1, &rewire_cfg)?;
    let named = [("G1", &nets.g1), ("G2", &nets.g2), ("G3", &nets.g3), ("G4", &g4)];
    let mut reports = Vec::with_capacity(4);
    for (name, g) in named {
        let r = summarize(g, sample).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("{name}: {msg}")),
            other => other,
        })?;
        reports.push((name, r));
    }
    let sw = SmallWorldComparison::new(&reports[0].1, &reports[3].1);

    let mut text = String::new();
    text.push_str(&format!("{:<24}", "metric"));
    for (name, _) in &reports {
        text.push_str(&format!("{name:>14}"));
    }
    text.push('\n');
    type Row = (&'static str, fn(&MetricsReport) -> String);
    let rows: [Row; 9] = [
        ("nodes", |r| r.n_nodes.to_string()),
        ("edges", |r| r.n_edges.to_string()),
        ("in_degree_median", |r| real(r.in_deg_median)),
        ("out_degree_median", |r| real(r.out_deg_median)),
        ("avg_shortest_path", |r| real(r.avg_shortest_path)),
        ("reachable_pair_fraction", |r| real(r.reachable_pair_fraction)),
        ("clustering", |r| real(r.clustering)),
        ("assortativity", |r| opt_real(r.assortativity)),
        ("sampled_sources", |r| r.sampled_sources.to_string()),
    ];
    for (label, f) in rows {
        text.push_str(&format!("{label:<24}"));
        for (_, r) in &reports {
            text.push_str(&format!("{:>14}", f(r)));
        }
        text.push('\n');
    }
    text.push_str(&format!(
        "\nsmall world: avg_shortest_path {} vs ln N {}; clustering {} vs randomized {}\n",
        real(sw.avg_shortest_path),
        real(sw.ln_n),
        real(sw.clustering),
        real(sw.clustering_randomized)
    ));
    text.push_str(&format!(
        "rewiring: {} swaps accepted in {} attempts (requested {}, seed {}){}\n",
        stats.accepted,
        stats.attempts,
        rewire_cfg.n_swaps,
        rewire_cfg.seed,
        if stats.exhausted { ", stopped early" } else { "" }
    ));
    out.write("metrics.txt", text.as_bytes())?;

    let networks: serde_json::Map<String, Value> = reports.iter().map(|(n, r)| (n.to_string(), report_json(r))).collect();
    out.json(
        "metrics.json",
        &json!({
            "networks": networks,
            "small_world": {
                "avg_shortest_path": json_real(sw.avg_shortest_path),
                "ln_n": json_real(sw.ln_n),
                "clustering": json_real(sw.clustering),
                "clustering_randomized": json_real(sw.clustering_randomized),
            },
            "rewire": {
                "requested_swaps": rewire_cfg.n_swaps,
                "accepted": stats.accepted,
                "attempts": stats.attempts,
                "exhausted": stats.exhausted,
                "seed": rewire_cfg.seed,
            },
        }),
    )?;
    Ok(stats)
}

fn ttest_json(t: &Option<TTestResult>) -> Value {
    match t {
        None => Value::Null,
        Some(t) => json!({
            "t_statistic": json_real(t.t_statistic),
            "degrees_freedom": json_real(t.degrees_freedom),
            "p_value": json_real(t.p_value),
            "p_value_display": t.p_value_display(),
            "mean_rrts": json_real(t.mean_a),
            "mean_rest": json_real(t.mean_b),
            "n_rrts": t.n_a,
            "n_rest": t.n_b,
        }),
    }
}

fn stage_bridges(nets: &Networks, out: &mut Outputs) -> Result<()> {
    let g = &nets.g1;
    let n = g.node_count();
    let records: Vec<BridgeRecord> = all_bridge_values(g);
    out.csv(
        "bridges.csv",
        &["source", "target", "length_m", "is_rrts_edge", "bridge_value"],
        records.iter().map(|r| {
            vec![
                g.station(r.source).id.clone(),
                g.station(r.target).id.clone(),
                real(r.geo_length_m),
                r.is_rrts_edge.to_string(),
                r.value.to_string(),
            ]
        }),
    )?;
    let binned = binned_comparison(&records, n);
    out.csv(
        "bridge_bins.csv",
        &["bin", "lower_m", "upper_m", "mean_rrts", "n_rrts", "mean_rest", "n_rest"],
        binned.bins.iter().map(|b| {
            vec![
                b.bin_index.to_string(),
                real(b.lower_m),
                real(b.upper_m),
                opt_real(b.mean_rrts),
                b.n_rrts.to_string(),
                opt_real(b.mean_rest),
                b.n_rest.to_string(),
            ]
        }),
    )?;
    let classes = compare_classes(&records, n);
    out.json(
        "bridge_ttest.json",
        &json!({
            "mean_rrts": json_opt_real(classes.mean_rrts),
            "mean_rest": json_opt_real(classes.mean_rest),
            "n_rrts": classes.n_rrts,
            "n_rest": classes.n_rest,
            "n_disconnected": classes.n_disconnected,
            "disconnected_value": n,
            "n_beyond_binned_range": binned.n_beyond_range,
            "welch": ttest_json(&classes.ttest),
        }),
    )
}

fn stage_centrality(nets: &Networks, cfg: &PipelineConfig, out: &mut Outputs) -> Result<()> {
    let g = &nets.g1;
    let btw = betweenness_all(g);
    let c_in = closeness_in(g)?;
    let c_out = closeness_out(g)?;
    out.csv(
        "centrality.csv",
        &["node", "degree", "betweenness", "closeness_in", "closeness_out", "is_rrts"],
        g.nodes().map(|v| {
            let i = v as usize;
            vec![
                g.station(v).id.clone(),
                g.total_degree(v).to_string(),
                real(btw.scores[i]),
                real(c_in.scores[i]),
                real(c_out.scores[i]),
                g.is_rrts(v).to_string(),
            ]
        }),
    )?;

    let rail = g.rail_nodes();
    let mut text = String::new();
    for (title, scores) in [
        ("betweenness", &btw.scores),
        ("closeness_in", &c_in.scores),
        ("closeness_out", &c_out.scores),
    ] {
        text.push_str(&format!("top {} rail stations by {title}\n", cfg.top_k));
        for (rank, (v, s)) in top_k_among(scores, rail.iter().copied(), cfg.top_k).into_iter().enumerate() {
            let st = g.station(v);
            text.push_str(&format!("{:>3}  {:<16} {:<28} {}\n", rank + 1, st.id, st.name, real(s)));
        }
        text.push('\n');
    }
    out.write("top_k.txt", text.as_bytes())?;

    let baseline = degree_matched_baseline(g, &btw, &rail, cfg.window_pct)?;
    out.csv(
        "betweenness_baseline.csv",
        &["node", "degree", "betweenness", "baseline", "window_pct", "n_matched"],
        baseline.rows.iter().map(|r| {
            vec![
                g.station(r.node).id.clone(),
                r.degree.to_string(),
                real(r.betweenness),
                opt_real(r.baseline),
                opt_real(r.window_pct),
                r.n_matched.to_string(),
            ]
        }),
    )
}

fn stage_communities(nets: &Networks, out: &mut Outputs) -> Result<CommunityPartition> {
    let g = &nets.g2;
    let outcome = detect_communities_cnm(g)?;
    let p = outcome.partition;
    out.csv(
        "partition.csv",
        &["node", "community"],
        g.nodes().map(|v| vec![g.station(v).id.clone(), p.assignment[v as usize].to_string()]),
    )?;
    out.json(
        "communities.json",
        &json!({
            "network": "G2",
            "n_communities": p.n_communities,
            "modularity": json_real(p.modularity),
            "sizes": p.sizes(),
            "merges": outcome.merges.len(),
        }),
    )?;
    Ok(p)
}

fn stage_benefit(nets: &Networks, partition: &CommunityPartition, out: &mut Outputs) -> Result<()> {
    let report = community_benefit(&nets.g1, &nets.g2, partition)?;
    out.csv(
        "benefit.csv",
        &["community", "size", "d_norail", "d_full", "benefit", "rank"],
        report.rows.iter().map(|r| {
            vec![
                r.community.to_string(),
                r.size.to_string(),
                real(r.d_norail),
                real(r.d_full),
                real(r.benefit),
                r.rank.to_string(),
            ]
        }),
    )?;
    // Exact path-length frequency distributions of the full and rail-free networks.
    let h1 = path_length_distribution(&nets.g1, SourceSample::Exact)?;
    let h2 = path_length_distribution(&nets.g2, SourceSample::Exact)?;
    let mut rows = Vec::new();
    for (name, h) in [("G1", &h1), ("G2", &h2)] {
        let freq = h.frequencies();
        for (d, count) in &h.counts {
            rows.push(vec![name.to_string(), d.to_string(), count.to_string(), real(freq[d])]);
        }
    }
    out.csv("path_lengths.csv", &["network", "distance", "pairs", "frequency"], rows)
}

fn stage_si(nets: &Networks, cfg: &PipelineConfig, out: &mut Outputs) -> Result<()> {
    let g = &nets.g1;
    let seeds = cfg.seeds();
    let cohorts = select_cohorts(g, cfg.window_pct, seeds.cohorts)?;
    let si = cfg.si_config();
    let named = [
        ("rail", &cohorts.rail),
        ("top_degree", &cohorts.top_degree),
        ("degree_matched", &cohorts.degree_matched),
    ];

    out.csv(
        "si_cohorts.csv",
        &["cohort", "node", "degree"],
        named.iter().flat_map(|(name, members)| {
            members
                .iter()
                .map(move |&v| vec![name.to_string(), g.station(v).id.clone(), g.total_degree(v).to_string()])
        }),
    )?;

    let mut summaries: Vec<(&str, CohortSummary)> = Vec::new();
    for (name, members) in named {
        let summary = cohort_experiment(g, members, &si)?;
        let mut rows = Vec::new();
        for curve in &summary.stations {
            for (trial, trace) in curve.traces.iter().enumerate() {
                for (t, count) in trace.infected_count.iter().enumerate() {
                    rows.push(vec![
                        g.station(curve.station).id.clone(),
                        trial.to_string(),
                        t.to_string(),
                        count.to_string(),
                    ]);
                }
            }
        }
        out.csv(
            &format!("si_traces_{name}.csv"),
            &["station", "trial", "t", "infected_count"],
            rows,
        )?;
        summaries.push((name, summary));
    }

    let mut rows = Vec::new();
    for (name, s) in &summaries {
        let (high, low) = (s.high_curve(), s.low_curve());
        for t in 0..s.mean.len() {
            rows.push(vec![
                name.to_string(),
                t.to_string(),
                real(s.mean[t]),
                real(s.std[t]),
                real(high[t]),
                real(low[t]),
            ]);
        }
    }
    out.csv(
        "si_summary.csv",
        &["cohort", "t", "mean_fraction", "std", "high", "low"],
        rows,
    )?;

    let extremes: serde_json::Map<String, Value> = summaries
        .iter()
        .map(|(name, s)| {
            (
                name.to_string(),
                json!({
                    "selection_step": s.selection_step,
                    "high": g.station(s.high).id,
                    "low": g.station(s.low).id,
                    "size": s.stations.len(),
                }),
            )
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Object(extremes)).expect("plain json");
    text.push('\n');
    out.write("si_extremes.json", text.as_bytes())?;
    Ok(())
}
