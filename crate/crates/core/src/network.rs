//! Stations, routes, and the directed transit graph built from them.
//!
//! Nodes are indexed `0..N` in ascending station-id order, so node index order
//! is the canonical order used by every analysis (tie-breaks, RNG draws, merges).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{haversine_unchecked, GeoCoord, ProximityGrid};

/// Default proximity threshold for walking transfers, meters.
pub const DEFAULT_PROXIMITY_M: f64 = 250.0;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub id: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub is_rrts: bool,
    pub lines: BTreeSet<String>,
}

impl Station {
    pub fn coord(&self) -> GeoCoord {
        GeoCoord {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            other => Err(format!("unknown direction {other:?} (expected forward|backward)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub route_id: String,
    pub direction: Direction,
    pub stops: Vec<String>,
}

impl Route {
    pub fn label(&self) -> String {
        format!("{}/{}", self.route_id, self.direction.as_str())
    }
}

/// Stations with unique ids and in-bounds coordinates, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct StationTable {
    stations: Vec<Station>,
    index: HashMap<String, usize>,
}

impl StationTable {
    pub fn new(stations: Vec<Station>) -> Result<Self> {
        let mut table = StationTable::default();
        for s in stations {
            table.push(s)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, station: Station) -> Result<()> {
        station
            .coord()
            .validate()
            .map_err(|e| Error::Ingestion(format!("station {}: {e}", station.id)))?;
        if station.lines.is_empty() {
            return Err(Error::Ingestion(format!("station {} has no lines", station.id)));
        }
        if self.index.contains_key(&station.id) {
            return Err(Error::Ingestion(format!("duplicate station id {}", station.id)));
        }
        self.index.insert(station.id.clone(), self.stations.len());
        self.stations.push(station);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Station> {
        self.index.get(id).map(|&i| &self.stations[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Station> {
        self.stations.iter()
    }

    pub fn as_slice(&self) -> &[Station] {
        &self.stations
    }
}

/// Routes validated against a station table.
#[derive(Debug, Clone, Default)]
pub struct RouteTable {
    routes: Vec<Route>,
}

impl RouteTable {
    pub fn new(routes: Vec<Route>, stations: &StationTable) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &routes {
            validate_route(r, stations)?;
            if !seen.insert((r.route_id.clone(), r.direction)) {
                return Err(Error::Ingestion(format!("route {} listed twice", r.label())));
            }
        }
        Ok(RouteTable { routes })
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Route> {
        self.routes.iter()
    }

    pub fn as_slice(&self) -> &[Route] {
        &self.routes
    }
}

fn validate_route(r: &Route, stations: &StationTable) -> Result<()> {
    if r.stops.len() < 2 {
        return Err(Error::Ingestion(format!(
            "route {} has {} stop(s); at least 2 required",
            r.label(),
            r.stops.len()
        )));
    }
    for s in &r.stops {
        if !stations.contains(s) {
            return Err(Error::Ingestion(format!(
                "route {} references unknown station {s}",
                r.label()
            )));
        }
    }
    if let Some(w) = r.stops.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Ingestion(format!(
            "route {} repeats station {} on consecutive stops",
            r.label(),
            w[0]
        )));
    }
    Ok(())
}

/// How an edge came to exist. An edge may have several origins.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrigin {
    /// Successor relation on a route with at least one non-rail stop.
    pub bus_route: bool,
    /// Successor relation on a route whose stops are all rail stations.
    pub rail_route: bool,
    /// Endpoints closer than the proximity threshold.
    pub proximity: bool,
}

impl EdgeOrigin {
    pub fn route(&self) -> bool {
        self.bus_route || self.rail_route
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub length_m: f64,
    pub origin: EdgeOrigin,
}

#[derive(Debug, Clone)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    fn build(n: usize, pairs: impl Iterator<Item = (NodeId, NodeId)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, _) in pairs.clone() {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for (u, v) in pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }
        // Rows are filled in input order; keep them sorted for binary search.
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }
}

/// Unweighted simple digraph over stations. Immutable once built.
#[derive(Debug, Clone)]
pub struct TransitNetwork {
    stations: Vec<Station>,
    on_bus_line: Vec<bool>,
    index: HashMap<String, NodeId>,
    /// Sorted by (source, target); edge `k` is the `k`-th entry of the out-CSR.
    edges: Vec<Edge>,
    out: Csr,
    inc: Csr,
}

impl TransitNetwork {
    /// Assembles a network from nodes and edges. Stations must already be
    /// sorted by id; edges are sorted here and must be simple.
    pub fn from_parts(stations: Vec<Station>, on_bus_line: Vec<bool>, mut edges: Vec<Edge>) -> Result<Self> {
        let n = stations.len();
        if on_bus_line.len() != n {
            return Err(Error::Invariant("bus-line flags do not match station count".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::Domain(format!("{n} nodes exceed the supported maximum")));
        }
        if stations.windows(2).any(|w| w[0].id >= w[1].id) {
            return Err(Error::Invariant("stations must be strictly sorted by id".into()));
        }
        edges.sort_by_key(|e| (e.source, e.target));
        for (k, e) in edges.iter().enumerate() {
            if e.source as usize >= n || e.target as usize >= n {
                return Err(Error::Invariant(format!("edge {}->{} has an endpoint outside the node set", e.source, e.target)));
            }
            if e.source == e.target {
                return Err(Error::Invariant(format!("self-loop at node {}", e.source)));
            }
            if k > 0 && (edges[k - 1].source, edges[k - 1].target) == (e.source, e.target) {
                return Err(Error::Invariant(format!("parallel edge {}->{}", e.source, e.target)));
            }
            if e.length_m.is_nan() || e.length_m < 0.0 {
                return Err(Error::Invariant(format!("edge {}->{} has invalid length", e.source, e.target)));
            }
        }
        let out = Csr::build(n, edges.iter().map(|e| (e.source, e.target)));
        let inc = Csr::build(n, edges.iter().map(|e| (e.target, e.source)));
        let index = stations
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i as NodeId))
            .collect();
        Ok(TransitNetwork {
            stations,
            on_bus_line,
            index,
            edges,
            out,
            inc,
        })
    }

    /// Plain digraph on `n` anonymous bus stations (ids `v0000000`, ...) at the
    /// origin. Duplicate pairs collapse; self-loops are rejected.
    pub fn from_edge_list(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        Self::from_edge_list_with_rail(n, pairs, &[])
    }

    /// Like [`from_edge_list`](Self::from_edge_list) with the given nodes marked
    /// as rail-only stations; edges between two rail nodes count as rail-route edges.
    pub fn from_edge_list_with_rail(n: usize, pairs: &[(NodeId, NodeId)], rail: &[NodeId]) -> Result<Self> {
        let rail_set: HashSet<NodeId> = rail.iter().copied().collect();
        let stations: Vec<Station> = (0..n)
            .map(|i| {
                let is_rrts = rail_set.contains(&(i as NodeId));
                Station {
                    id: format!("v{i:07}"),
                    name: format!("v{i}"),
                    lat: 0.0,
                    lon: 0.0,
                    is_rrts,
                    lines: BTreeSet::from([if is_rrts { "rail" } else { "bus" }.to_string()]),
                }
            })
            .collect();
        let on_bus_line = stations.iter().map(|s| !s.is_rrts).collect();
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::domain(format!("edge {u}->{v} out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at node {u}")));
            }
            if seen.insert((u, v)) {
                edges.push(Edge {
                    source: u,
                    target: v,
                    length_m: 0.0,
                    origin: {
                        let rail_route = rail_set.contains(&u) && rail_set.contains(&v);
                        EdgeOrigin {
                            bus_route: !rail_route,
                            rail_route,
                            proximity: false,
                        }
                    },
                });
            }
        }
        Self::from_parts(stations, on_bus_line, edges)
    }

    pub fn node_count(&self) -> usize {
        self.stations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    pub fn stations(&self) -> &[Station] {
        &self.stations
    }

    pub fn station(&self, v: NodeId) -> &Station {
        &self.stations[v as usize]
    }

    pub fn node_of(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn is_rrts(&self, v: NodeId) -> bool {
        self.stations[v as usize].is_rrts
    }

    /// Whether the station also lies on at least one bus line.
    pub fn on_bus_line(&self, v: NodeId) -> bool {
        self.on_bus_line[v as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        self.out.row(v)
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        self.inc.row(v)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out.row(v).len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inc.row(v).len()
    }

    pub fn total_degree(&self, v: NodeId) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out.row(u).binary_search(&v).is_ok()
    }

    /// Position of edge `(u, v)` in [`edges`](Self::edges).
    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let row = self.out.row(u);
        row.binary_search(&v).ok().map(|k| self.out.offsets[u as usize] + k)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        0..self.stations.len() as NodeId
    }

    pub fn rail_nodes(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.is_rrts(v)).collect()
    }

    /// Edge pairs in canonical order.
    pub fn edge_pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    /// Same stations, new edge set. Lengths are recomputed geodesically and
    /// origins cleared.
    pub fn with_edge_pairs(&self, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge {
                source: u,
                target: v,
                length_m: haversine_unchecked(self.station(u).coord(), self.station(v).coord()),
                origin: EdgeOrigin::default(),
            })
            .collect();
        Self::from_parts(self.stations.clone(), self.on_bus_line.clone(), edges)
    }

    /// Induced subnetwork on nodes with `keep[v]`, further restricted to edges
    /// passing `keep_edge`. Relative node order is preserved.
    pub fn induced(&self, keep: &[bool], keep_edge: impl Fn(&Edge) -> bool) -> Self {
        let mut remap = vec![NodeId::MAX; self.node_count()];
        let mut stations = Vec::new();
        let mut on_bus = Vec::new();
        for v in self.nodes() {
            if keep[v as usize] {
                remap[v as usize] = stations.len() as NodeId;
                stations.push(self.stations[v as usize].clone());
                on_bus.push(self.on_bus_line[v as usize]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.source as usize] && keep[e.target as usize] && keep_edge(e))
            .map(|e| Edge {
                source: remap[e.source as usize],
                target: remap[e.target as usize],
                ..*e
            })
            .collect();
        Self::from_parts(stations, on_bus, edges).expect("induced subgraph of a valid network is valid")
    }
}

/// Builds the full network: an edge `(i, j)` exists when `j` directly follows
/// `i` on some route, or when the two stations are closer than `proximity_m`
/// (which adds both directions).
pub fn build_network(stations: &StationTable, routes: &RouteTable, proximity_m: f64) -> Result<TransitNetwork> {
    if !proximity_m.is_finite() || proximity_m < 0.0 {
        return Err(Error::Config(format!("proximity threshold must be a finite nonnegative number, got {proximity_m}")));
    }
    let mut sorted: Vec<Station> = stations.iter().cloned().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let index: HashMap<&str, NodeId> = sorted
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.as_str(), i as NodeId))
        .collect();

    // A line counts as a bus line when at least one non-rail station serves it.
    let bus_lines: HashSet<&str> = sorted
        .iter()
        .filter(|s| !s.is_rrts)
        .flat_map(|s| s.lines.iter().map(String::as_str))
        .collect();
    let on_bus_line: Vec<bool> = sorted
        .iter()
        .map(|s| !s.is_rrts || s.lines.iter().any(|l| bus_lines.contains(l.as_str())))
        .collect();

    let mut origins: BTreeMap<(NodeId, NodeId), EdgeOrigin> = BTreeMap::new();
    for r in routes.iter() {
        let mut ids = Vec::with_capacity(r.stops.len());
        for s in &r.stops {
            match index.get(s.as_str()) {
                Some(&v) => ids.push(v),
                None => {
                    return Err(Error::Ingestion(format!(
                        "route {} references unknown station {s}",
                        r.label()
                    )))
                }
            }
        }
        let rail = ids.iter().all(|&v| sorted[v as usize].is_rrts);
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Ingestion(format!(
                    "route {} repeats station {} on consecutive stops",
                    r.label(),
                    sorted[w[0] as usize].id
                )));
            }
            let o = origins.entry((w[0], w[1])).or_default();
            if rail {
                o.rail_route = true;
            } else {
                o.bus_route = true;
            }
        }
    }

    let coords: Vec<GeoCoord> = sorted.iter().map(Station::coord).collect();
    if proximity_m > 0.0 {
        let grid = ProximityGrid::new(&coords, proximity_m);
        let mut cand = Vec::new();
        for (i, &p) in coords.iter().enumerate() {
            grid.candidates(p, &mut cand);
            for &j in &cand {
                if (j as usize) <= i {
                    continue;
                }
                if haversine_unchecked(p, coords[j as usize]) < proximity_m {
                    origins.entry((i as NodeId, j)).or_default().proximity = true;
                    origins.entry((j, i as NodeId)).or_default().proximity = true;
                }
            }
        }
    }

    let edges = origins
        .into_iter()
        .map(|((u, v), origin)| Edge {
            source: u,
            target: v,
            length_m: haversine_unchecked(coords[u as usize], coords[v as usize]),
            origin,
        })
        .collect();
    TransitNetwork::from_parts(sorted, on_bus_line, edges)
}

/// The network without rail-only stations. Stations shared by a bus line and a
/// rail line stay, but edges that exist only because of a rail route are dropped.
pub fn remove_rrts(g: &TransitNetwork) -> TransitNetwork {
    let keep: Vec<bool> = g.nodes().map(|v| !g.is_rrts(v) || g.on_bus_line(v)).collect();
    g.induced(&keep, |e| {
        let o = e.origin;
        // Rewired or hand-built edges carry no origin; keep them.
        o.bus_route || o.proximity || !o.rail_route
    })
}

/// The rail-only network: induced on rail stations, keeping edges that come
/// from rail routes or from proximity between two rail stations.
pub fn rrts_subnetwork(g: &TransitNetwork) -> TransitNetwork {
    let keep: Vec<bool> = g.nodes().map(|v| g.is_rrts(v)).collect();
    g.induced(&keep, |e| e.origin.rail_route || e.origin.proximity)
}
