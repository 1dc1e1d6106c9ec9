mod common;

use proptest::prelude::*;
use railnet::bridges::{
    all_bridge_values, bin_of, binned_comparison, compare_classes, local_bridge_value, BridgeRecord, BridgeValue,
};
use railnet::testing::random_digraph;
use railnet::ttest::welch_t_test;
use railnet::TransitNetwork;

fn check_against_deletion(g: &TransitNetwork) {
    let n = g.node_count();
    let edges = common::edges_of(g);
    let records = all_bridge_values(g);
    assert_eq!(records.len(), edges.len());
    for (r, &(u, v)) in records.iter().zip(&edges) {
        assert_eq!((r.source as usize, r.target as usize), (u, v));
        let expected = match common::bridge_by_deletion(n, &edges, (u, v)) {
            Some(d) => BridgeValue::Finite(d as u32),
            None => BridgeValue::Disconnected,
        };
        assert_eq!(r.value, expected, "edge {u}->{v}");
        if let BridgeValue::Finite(d) = r.value {
            assert!(d >= 2);
        }
    }
}

#[test]
fn values_match_delete_and_bfs() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize * 7) % 99;
        let p = (2.0 + (seed % 4) as f64) / n as f64;
        check_against_deletion(&random_digraph(n, p.min(0.9), seed));
    }
    check_against_deletion(&random_digraph(50, 0.08, 4242));
    check_against_deletion(&random_digraph(100, 0.03, 4343));
}

#[test]
fn triangle_and_cut_edge() {
    // i=0, j=1, k=2: i->j, j->i, i->k->j.
    let g = TransitNetwork::from_edge_list(3, &[(0, 1), (1, 0), (0, 2), (2, 1)]).unwrap();
    assert_eq!(local_bridge_value(&g, 0, 1).unwrap(), BridgeValue::Finite(2));
    // Two reciprocal pairs joined by one directed edge.
    let g = TransitNetwork::from_edge_list(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
    assert_eq!(local_bridge_value(&g, 1, 2).unwrap(), BridgeValue::Disconnected);
    assert!(local_bridge_value(&g, 2, 1).is_err());
}

#[test]
fn four_cycles() {
    let reciprocal = TransitNetwork::from_edge_list(
        4,
        &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 0), (2, 1), (3, 2), (0, 3)],
    )
    .unwrap();
    assert!(all_bridge_values(&reciprocal).iter().all(|r| r.value == BridgeValue::Finite(3)));
    let one_way = railnet::testing::directed_cycle(4);
    assert!(all_bridge_values(&one_way).iter().all(|r| r.value == BridgeValue::Disconnected));
    assert!(all_bridge_values(&TransitNetwork::from_edge_list(3, &[]).unwrap()).is_empty());
}

fn record(value: BridgeValue, len: f64, rail: bool) -> BridgeRecord {
    BridgeRecord {
        source: 0,
        target: 1,
        value,
        geo_length_m: len,
        is_rrts_edge: rail,
    }
}

#[test]
fn bins_are_half_open() {
    assert_eq!(bin_of(100.0), Some(1));
    assert_eq!(bin_of(500.0), Some(2));
    assert_eq!(bin_of(5499.9), Some(11));
    assert_eq!(bin_of(5500.0), None);
    let b = binned_comparison(&[record(BridgeValue::Finite(3), 100.0, false)], 10);
    assert_eq!(b.bins.len(), 11);
    assert_eq!(b.bins[0].n_rest, 1);
    assert_eq!(b.bins[0].mean_rest, Some(3.0));
    assert!(b.bins[1..].iter().all(|x| x.n_rest + x.n_rrts == 0));
}

#[test]
fn mixed_fixture_means() {
    let recs = vec![
        record(BridgeValue::Finite(2), 120.0, true),
        record(BridgeValue::Finite(4), 480.0, true),
        record(BridgeValue::Finite(3), 499.0, false),
        record(BridgeValue::Disconnected, 510.0, false),
        record(BridgeValue::Finite(6), 1200.0, true),
        record(BridgeValue::Finite(5), 9000.0, false),
    ];
    let b = binned_comparison(&recs, 20);
    assert_eq!(b.bins[0].mean_rrts, Some(3.0));
    assert_eq!(b.bins[0].mean_rest, Some(3.0));
    assert_eq!(b.bins[1].mean_rest, Some(20.0));
    assert_eq!(b.bins[1].mean_rrts, None);
    assert_eq!(b.bins[2].mean_rrts, Some(6.0));
    assert_eq!(b.n_beyond_range, 1);
    let c = compare_classes(&recs, 20);
    assert_eq!(c.mean_rrts, Some(4.0));
    assert_eq!(c.mean_rest, Some(28.0 / 3.0));
    assert_eq!(c.n_disconnected, 1);
}

#[test]
fn welch_examples() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let b = [2.0, 3.0, 4.0, 5.0, 6.0];
    let r = welch_t_test(&a, &b).unwrap();
    assert!((r.t_statistic + 1.0).abs() < 1e-12);
    assert!((r.degrees_freedom - 8.0).abs() < 1e-12);
    let oracle = common::two_sided_p(-1.0, 8.0);
    assert!((oracle - 0.3466).abs() < 1e-3);
    assert!((r.p_value - oracle).abs() < 1e-6, "{} vs {oracle}", r.p_value);

    let same = welch_t_test(&a, &a).unwrap();
    assert_eq!((same.t_statistic, same.p_value), (0.0, 1.0));

    let lo: Vec<f64> = (0..30).map(|i| 1.0 + 0.001 * i as f64).collect();
    let hi: Vec<f64> = (0..30).map(|i| 9.0 + 0.001 * i as f64).collect();
    assert!(welch_t_test(&lo, &hi).unwrap().p_value < 1e-10);
    assert!(welch_t_test(&[1.0], &b).is_err());
}

proptest! {
    #[test]
    fn welch_matches_definitions_and_is_antisymmetric(
        a in prop::collection::vec(-50.0..50.0f64, 2..20),
        b in prop::collection::vec(-50.0..50.0f64, 2..20),
    ) {
        let ab = welch_t_test(&a, &b).unwrap();
        let ba = welch_t_test(&b, &a).unwrap();
        prop_assert!((ab.t_statistic + ba.t_statistic).abs() <= 1e-12 * ab.t_statistic.abs().max(1.0));
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        let (t, df) = common::welch(&a, &b);
        prop_assert!((ab.t_statistic - t).abs() < 1e-9 * t.abs().max(1.0));
        prop_assert!((ab.degrees_freedom - df).abs() < 1e-9 * df);
        if t.abs() < 8.0 {
            prop_assert!((ab.p_value - common::two_sided_p(t, df)).abs() < 1e-6);
        }
    }

    #[test]
    fn bin_means_are_weight_consistent(
        recs in prop::collection::vec((0u32..40, 0.0..6000.0f64, any::<bool>(), any::<bool>()), 1..80),
    ) {
        let n = 50;
        let recs: Vec<BridgeRecord> = recs
            .into_iter()
            .map(|(v, len, rail, disc)| {
                let value = if disc { BridgeValue::Disconnected } else { BridgeValue::Finite(v + 2) };
                record(value, len, rail)
            })
            .collect();
        let b = binned_comparison(&recs, n);
        for rail in [true, false] {
            let direct: f64 = recs
                .iter()
                .filter(|r| r.is_rrts_edge == rail && bin_of(r.geo_length_m).is_some())
                .map(|r| r.value.aggregate(n))
                .sum();
            let via_bins: f64 = b
                .bins
                .iter()
                .map(|x| if rail { x.mean_rrts.unwrap_or(0.0) * x.n_rrts as f64 } else { x.mean_rest.unwrap_or(0.0) * x.n_rest as f64 })
                .sum();
            prop_assert!((direct - via_bins).abs() < 1e-9 * direct.max(1.0));
        }
        let counted: usize = b.bins.iter().map(|x| x.n_rrts + x.n_rest).sum();
        prop_assert_eq!(counted + b.n_beyond_range, recs.len());
    }
}
