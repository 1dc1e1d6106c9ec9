use std::collections::BTreeSet;

use proptest::prelude::*;
use railnet::geo::{haversine_distance, GeoCoord};
use railnet::network::Direction;
use railnet::{build_network, remove_rrts, rrts_subnetwork, Route, RouteTable, Station, StationTable, TransitNetwork};

const M_PER_DEG: f64 = 111_195.08;

/// Station `id` placed `north_m` meters north of (39.9, 116.4).
fn station(id: &str, north_m: f64, rail: bool, lines: &[&str]) -> Station {
    Station {
        id: id.to_string(),
        name: id.to_string(),
        lat: 39.9 + north_m / M_PER_DEG,
        lon: 116.4,
        is_rrts: rail,
        lines: lines.iter().map(|s| s.to_string()).collect(),
    }
}

fn route(id: &str, stops: &[&str]) -> Route {
    Route {
        route_id: id.to_string(),
        direction: Direction::Forward,
        stops: stops.iter().map(|s| s.to_string()).collect(),
    }
}

fn network(stations: Vec<Station>, routes: Vec<Route>, proximity: f64) -> TransitNetwork {
    let st = StationTable::new(stations).unwrap();
    let rt = RouteTable::new(routes, &st).unwrap();
    build_network(&st, &rt, proximity).unwrap()
}

fn id_pairs(g: &TransitNetwork) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|e| (g.station(e.source).id.clone(), g.station(e.target).id.clone()))
        .collect()
}

fn pairs(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn successor_rule_only() {
    let g = network(
        vec![
            station("A", 0.0, false, &["1"]),
            station("B", 1000.0, false, &["1"]),
            station("C", 2000.0, false, &["1"]),
        ],
        vec![route("1", &["A", "B", "C"])],
        250.0,
    );
    assert_eq!(id_pairs(&g), pairs(&[("A", "B"), ("B", "C")]));
}

#[test]
fn proximity_threshold_is_strict_and_bidirectional() {
    let near = network(
        vec![station("X", 0.0, false, &["1"]), station("Y", 200.0, false, &["2"])],
        vec![],
        250.0,
    );
    assert_eq!(id_pairs(&near), pairs(&[("X", "Y"), ("Y", "X")]));
    let far = network(
        vec![station("X", 0.0, false, &["1"]), station("Y", 300.0, false, &["2"])],
        vec![],
        250.0,
    );
    assert_eq!(far.edge_count(), 0);
}

#[test]
fn route_and_proximity_collapse_to_one_edge() {
    let g = network(
        vec![station("A", 0.0, false, &["1"]), station("B", 100.0, false, &["1"])],
        vec![route("1", &["A", "B"])],
        250.0,
    );
    assert_eq!(id_pairs(&g), pairs(&[("A", "B"), ("B", "A")]));
    let ab = g.edge_index(0, 1).unwrap();
    let len = g.edges()[ab].length_m;
    assert!((len - 100.0).abs() < 0.01, "{len}");
}

#[test]
fn unknown_stop_names_the_route() {
    let st = StationTable::new(vec![station("A", 0.0, false, &["1"])]).unwrap();
    let err = RouteTable::new(vec![route("r9", &["A", "Z"])], &st).unwrap_err();
    assert!(err.to_string().contains("r9"), "{err}");
}

fn mixed_city() -> TransitNetwork {
    // Rail-only R1..R3, buses B1..B5, kilometers apart so proximity is silent.
    network(
        vec![
            station("B1", 0.0, false, &["10"]),
            station("B2", 1000.0, false, &["10"]),
            station("B3", 2000.0, false, &["10"]),
            station("B4", 3000.0, false, &["11"]),
            station("B5", 4000.0, false, &["11"]),
            station("R1", 10_000.0, true, &["L1"]),
            station("R2", 11_000.0, true, &["L1"]),
            station("R3", 12_000.0, true, &["L1"]),
        ],
        vec![
            route("10", &["B1", "B2", "B3"]),
            route("11", &["B3", "B4", "B5"]),
            route("L1", &["R1", "R2", "R3"]),
            route("L1x", &["R3", "R2", "R1"]),
        ],
        250.0,
    )
}

#[test]
fn remove_rrts_drops_rail_only_stations() {
    let g = mixed_city();
    assert_eq!(g.node_count(), 8);
    let g2 = remove_rrts(&g);
    assert_eq!(g2.node_count(), 5);
    assert!(g2.stations().iter().all(|s| !s.is_rrts));
    assert_eq!(g2.edge_count(), 4);
    let g3 = rrts_subnetwork(&g);
    assert_eq!(g3.node_count(), 3);
    assert_eq!(
        id_pairs(&g3),
        pairs(&[("R1", "R2"), ("R2", "R3"), ("R3", "R2"), ("R2", "R1")])
    );
}

#[test]
fn shared_station_stays_in_both() {
    // R1 is on rail line L1 and bus line 10.
    let g = network(
        vec![
            station("B1", 0.0, false, &["10"]),
            station("B2", 1000.0, false, &["10"]),
            station("R1", 2000.0, true, &["L1", "10"]),
            station("R2", 3000.0, true, &["L1"]),
        ],
        vec![route("10", &["B1", "B2", "R1"]), route("L1", &["R1", "R2"])],
        250.0,
    );
    let g2 = remove_rrts(&g);
    let g3 = rrts_subnetwork(&g);
    assert_eq!(g2.node_count(), 3);
    assert!(g2.node_of("R1").is_some());
    assert_eq!(id_pairs(&g2), pairs(&[("B1", "B2"), ("B2", "R1")]));
    assert_eq!(id_pairs(&g3), pairs(&[("R1", "R2")]));
    assert_eq!(g2.node_count() + g3.node_count(), g.node_count() + 1);
}

#[test]
fn no_rail_is_identity_and_empty_rail_network() {
    let g = network(
        vec![station("A", 0.0, false, &["1"]), station("B", 100.0, false, &["1"])],
        vec![route("1", &["A", "B"])],
        250.0,
    );
    assert_eq!(id_pairs(&remove_rrts(&g)), id_pairs(&g));
    assert_eq!(rrts_subnetwork(&g).node_count(), 0);
}

#[test]
fn haversine_reference_points() {
    let c = |lat, lon| GeoCoord { lat, lon };
    let a = c(0.0, 0.0);
    assert!((haversine_distance(a, c(0.001, 0.0)).unwrap() - 111.19).abs() < 0.1);
    assert_eq!(haversine_distance(c(39.9, 116.4), c(39.9, 116.4)).unwrap(), 0.0);
    assert!(haversine_distance(c(91.0, 0.0), a).is_err());
    assert!(GeoCoord::new(0.0, 181.0).is_err());
}

fn scattered(coords: &[(f64, f64, bool)]) -> Vec<Station> {
    coords
        .iter()
        .enumerate()
        .map(|(i, &(dn, de, rail))| Station {
            id: format!("S{i:03}"),
            name: format!("S{i}"),
            lat: 39.9 + dn / M_PER_DEG,
            lon: 116.4 + de / (M_PER_DEG * 39.9f64.to_radians().cos()),
            is_rrts: rail,
            lines: BTreeSet::from([if rail { "L".to_string() } else { format!("b{}", i % 3) }]),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn proximity_monotone_and_symmetric(
        coords in prop::collection::vec((0.0..1500.0f64, 0.0..1500.0f64, any::<bool>()), 2..40),
        r1 in 50.0..400.0f64,
        extra in 0.0..300.0f64,
    ) {
        let st = StationTable::new(scattered(&coords)).unwrap();
        let rt = RouteTable::new(vec![], &st).unwrap();
        let small = build_network(&st, &rt, r1).unwrap();
        let large = build_network(&st, &rt, r1 + extra).unwrap();
        for e in small.edges() {
            prop_assert!(large.has_edge(e.source, e.target));
            prop_assert!(small.has_edge(e.target, e.source));
            prop_assert!(e.length_m < r1);
        }
        // Determinism.
        let again = build_network(&st, &rt, r1).unwrap();
        prop_assert_eq!(small.edge_pairs(), again.edge_pairs());
    }

    #[test]
    fn subnetwork_node_counts(
        coords in prop::collection::vec((0.0..3000.0f64, 0.0..3000.0f64, any::<bool>()), 2..40),
        shared in prop::collection::vec(any::<prop::sample::Index>(), 0..4),
    ) {
        let mut stations = scattered(&coords);
        let mut n_shared = BTreeSet::new();
        for ix in shared {
            let i = ix.index(stations.len());
            if stations[i].is_rrts {
                stations[i].lines.insert("b0".into());
                n_shared.insert(i);
            }
        }
        // A bus line needs a non-rail member to count as one.
        let has_bus = stations.iter().any(|s| !s.is_rrts && s.lines.contains("b0"));
        let st = StationTable::new(stations).unwrap();
        let rt = RouteTable::new(vec![], &st).unwrap();
        let g = build_network(&st, &rt, 250.0).unwrap();
        let total = remove_rrts(&g).node_count() + rrts_subnetwork(&g).node_count();
        prop_assert!(total >= g.node_count());
        let expected_overlap = if has_bus { n_shared.len() } else { 0 };
        prop_assert_eq!(total, g.node_count() + expected_overlap);
    }
}
