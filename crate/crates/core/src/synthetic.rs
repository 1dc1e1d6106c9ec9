//! Seeded synthetic cities: bus stops scattered over a square, bus routes as
//! short random walks between nearby stops, and straight rail lines crossing
//! the city. Used for fixtures, benchmarks, and scale tests.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geo::{haversine_unchecked, GeoCoord};
use crate::network::{Direction, Route, RouteTable, Station, StationTable};

const CENTER: GeoCoord = GeoCoord { lat: 39.9042, lon: 116.4074 };
const KM_PER_DEG_LAT: f64 = 111.195;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CityConfig {
    pub bus_stations: usize,
    pub bus_routes: usize,
    pub stops_per_route: usize,
    /// Consecutive bus stops are this far apart, meters.
    pub min_hop_m: f64,
    pub max_hop_m: f64,
    pub rail_lines: usize,
    pub stations_per_rail_line: usize,
    /// Rail stations that are also served by a bus route.
    pub shared_stations: usize,
    /// Side of the square city, kilometers.
    pub extent_km: f64,
    pub seed: u64,
}

impl CityConfig {
    /// A few dozen stations; small enough for exhaustive oracles.
    pub fn toy() -> Self {
        CityConfig {
            bus_stations: 48,
            bus_routes: 8,
            stops_per_route: 7,
            min_hop_m: 250.0,
            max_hop_m: 700.0,
            rail_lines: 2,
            stations_per_rail_line: 5,
            shared_stations: 2,
            extent_km: 3.0,
            seed: 2016,
        }
    }

    /// Roughly 10 000 stations and 200 000 directed edges at the default
    /// 250 m proximity threshold.
    pub fn city_scale() -> Self {
        CityConfig {
            bus_stations: 9_800,
            bus_routes: 1_400,
            stops_per_route: 30,
            min_hop_m: 250.0,
            max_hop_m: 800.0,
            rail_lines: 16,
            stations_per_rail_line: 12,
            shared_stations: 2,
            extent_km: 12.6,
            seed: 2016,
        }
    }
}

fn offset(km_x: f64, km_y: f64) -> GeoCoord {
    let lat = CENTER.lat + km_y / KM_PER_DEG_LAT;
    let lon = CENTER.lon + km_x / (KM_PER_DEG_LAT * CENTER.lat.to_radians().cos());
    GeoCoord {
        lat: (lat * 1e6).round() / 1e6,
        lon: (lon * 1e6).round() / 1e6,
    }
}

/// Generates station and route tables for a synthetic city.
pub fn generate_city(cfg: &CityConfig) -> Result<(StationTable, RouteTable)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let half = cfg.extent_km / 2.0;

    let coords: Vec<GeoCoord> = (0..cfg.bus_stations)
        .map(|_| offset(rng.gen_range(-half..half), rng.gen_range(-half..half)))
        .collect();
    let bus_ids: Vec<String> = (0..cfg.bus_stations).map(|i| format!("B{i:05}")).collect();

    // 1 km buckets for hop candidates.
    let cell = |c: GeoCoord| {
        (
            ((c.lat - CENTER.lat) * KM_PER_DEG_LAT).floor() as i64,
            ((c.lon - CENTER.lon) * KM_PER_DEG_LAT * CENTER.lat.to_radians().cos()).floor() as i64,
        )
    };
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &c) in coords.iter().enumerate() {
        buckets.entry(cell(c)).or_default().push(i);
    }

    let mut lines: Vec<BTreeSet<String>> = vec![BTreeSet::new(); cfg.bus_stations];
    let mut routes: Vec<Route> = Vec::new();
    let mut unserved: Vec<usize> = (0..cfg.bus_stations).collect();
    unserved.shuffle(&mut rng);
    let mut bus_route_ids = Vec::new();
    for r in 0..cfg.bus_routes {
        if cfg.bus_stations < 2 {
            break;
        }
        let start = loop {
            match unserved.pop() {
                Some(s) if lines[s].is_empty() => break s,
                Some(_) => continue,
                None => break rng.gen_range(0..cfg.bus_stations),
            }
        };
        let mut stops = vec![start];
        while stops.len() < cfg.stops_per_route {
            let here = coords[*stops.last().unwrap()];
            let (cy, cx) = cell(here);
            let mut cands = Vec::new();
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if let Some(b) = buckets.get(&(cy + dy, cx + dx)) {
                        for &j in b {
                            let d = haversine_unchecked(here, coords[j]);
                            if d >= cfg.min_hop_m && d <= cfg.max_hop_m && !stops.contains(&j) {
                                cands.push(j);
                            }
                        }
                    }
                }
            }
            if cands.is_empty() {
                break;
            }
            cands.sort_unstable();
            stops.push(cands[rng.gen_range(0..cands.len())]);
        }
        if stops.len() < 2 {
            continue;
        }
        let route_id = format!("bus{r:04}");
        for &s in &stops {
            lines[s].insert(route_id.clone());
        }
        bus_route_ids.push(routes.len());
        let ids: Vec<String> = stops.iter().map(|&s| bus_ids[s].clone()).collect();
        routes.push(Route {
            route_id: route_id.clone(),
            direction: Direction::Forward,
            stops: ids.clone(),
        });
        routes.push(Route {
            route_id,
            direction: Direction::Backward,
            stops: ids.into_iter().rev().collect(),
        });
    }

    let mut stations: Vec<Station> = (0..cfg.bus_stations)
        .map(|i| Station {
            id: bus_ids[i].clone(),
            name: format!("Stop {i}"),
            lat: coords[i].lat,
            lon: coords[i].lon,
            is_rrts: false,
            lines: if lines[i].is_empty() {
                BTreeSet::from(["walk".to_string()])
            } else {
                std::mem::take(&mut lines[i])
            },
        })
        .collect();

    let mut shared_left = cfg.shared_stations;
    for l in 0..cfg.rail_lines {
        let angle = std::f64::consts::PI * (l as f64 / cfg.rail_lines.max(1) as f64) + rng.gen_range(-0.2..0.2);
        let shift = rng.gen_range(-half * 0.4..half * 0.4);
        let (dx, dy) = (angle.cos(), angle.sin());
        let (nx, ny) = (-dy * shift, dx * shift);
        let k = cfg.stations_per_rail_line.max(2);
        let line_id = format!("L{}", l + 1);
        let mut ids = Vec::with_capacity(k);
        for i in 0..k {
            let t = -half * 0.9 + 1.8 * half * i as f64 / (k - 1) as f64;
            let c = offset(nx + dx * t, ny + dy * t);
            let id = format!("R{:02}-{:03}", l + 1, i);
            let mut st_lines = BTreeSet::from([line_id.clone()]);
            // Share a terminal station with the bus network.
            if shared_left > 0 && i == 0 && !bus_route_ids.is_empty() {
                let r = bus_route_ids[(l * 7919) % bus_route_ids.len()];
                st_lines.insert(routes[r].route_id.clone());
                routes[r].stops.push(id.clone());
                routes[r + 1].stops.insert(0, id.clone());
                shared_left -= 1;
            }
            stations.push(Station {
                id: id.clone(),
                name: format!("Line {} Station {}", l + 1, i),
                lat: c.lat,
                lon: c.lon,
                is_rrts: true,
                lines: st_lines,
            });
            ids.push(id);
        }
        routes.push(Route {
            route_id: line_id.clone(),
            direction: Direction::Forward,
            stops: ids.clone(),
        });
        routes.push(Route {
            route_id: line_id,
            direction: Direction::Backward,
            stops: ids.into_iter().rev().collect(),
        });
    }

    let table = StationTable::new(stations)?;
    let routes = RouteTable::new(routes, &table)?;
    Ok((table, routes))
}
