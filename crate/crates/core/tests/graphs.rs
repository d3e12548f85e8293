use mdst_core::geometry::sample_binomial_cloud;
use mdst_core::graphs::{
    build_ong_with, degree_domination_violations, max_edge_length, ong_max_1d_via_records, total_weight,
};
use mdst_core::{build_mdst, build_ong, DirectedGraph, GraphKind, PointSet, RngSeed, Strategy as Search};
use proptest::prelude::*;

fn cloud(seed: u64, n: usize, dim: usize) -> PointSet {
    sample_binomial_cloud(n, dim, RngSeed::new(seed, 0)).unwrap().points
}

#[test]
fn indexed_matches_brute_force() {
    for i in 0..40 {
        let dim = 1 + (i % 4) as usize;
        let p = cloud(100 + i, 20 + 12 * i as usize, dim);
        assert_eq!(
            build_mdst(&p, Search::Indexed).unwrap(),
            build_mdst(&p, Search::Brute).unwrap()
        );
        assert_eq!(build_ong_with(&p, Search::Indexed), build_ong_with(&p, Search::Brute));
    }
}

#[test]
fn trees_span_and_only_the_sink_is_a_root() {
    let p = cloud(7, 3_000, 2);
    let g = build_mdst(&p, Search::Indexed).unwrap();
    assert!(g.is_spanning_tree());
    assert_eq!(g.edges.len(), p.len() - 1);
    let sink = p.ascending_last_order()[0];
    assert!(g.edge_from(sink).is_none());
    for e in &g.edges {
        assert!(p.last_coord(e.target) < p.last_coord(e.source));
    }
}

#[test]
fn graph_csv_round_trip() {
    let p = cloud(8, 200, 3);
    let g = build_mdst(&p, Search::Indexed).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let back = DirectedGraph::read_csv(&buf[..], GraphKind::Mdst, p.len()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn degree_domination_on_random_clouds() {
    for i in 0..5 {
        assert_eq!(
            degree_domination_violations(&cloud(200 + i, 400, 2 + (i % 2) as usize)).unwrap(),
            0
        );
    }
}

fn rows_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=3, 2usize..60).prop_flat_map(|(dim, n)| (Just(dim), prop::collection::vec(0.0f64..1.0, dim * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_scales_homogeneously((dim, flat) in rows_strategy(), alpha in 0.25f64..3.0) {
        let p = PointSet::from_flat(dim, flat).unwrap();
        prop_assume!(p.find_duplicate_last().is_none());
        let g = build_mdst(&p, Search::Indexed).unwrap();
        let q = p.scaled(4.0);
        let h = build_mdst(&q, Search::Indexed).unwrap();
        let (w, v) = (total_weight(&g, alpha, &p, None).unwrap(), total_weight(&h, alpha, &q, None).unwrap());
        prop_assert!((v - 4f64.powf(alpha) * w).abs() <= 1e-9 * v.max(1e-300));
    }

    #[test]
    fn translation_keeps_the_tree((dim, flat) in rows_strategy(), shift in -5.0f64..5.0) {
        let p = PointSet::from_flat(dim, flat).unwrap();
        prop_assume!(p.find_duplicate_last().is_none());
        let g = build_mdst(&p, Search::Indexed).unwrap();
        let moved = p.translated(&vec![shift; dim]).unwrap();
        let h = build_mdst(&moved, Search::Brute).unwrap();
        let targets = |g: &DirectedGraph| g.edges.iter().map(|e| (e.source, e.target)).collect::<Vec<_>>();
        // near-ties can flip after rounding; compare weights when they do
        if targets(&g) != targets(&h) {
            let (a, b) = (total_weight(&g, 1.0, &p, None).unwrap(), total_weight(&h, 1.0, &moved, None).unwrap());
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn record_identity(values in prop::collection::vec(0.0f64..1.0, 1..120)) {
        let mut flat = vec![0.0];
        flat.extend_from_slice(&values);
        let direct = max_edge_length(&build_ong(&PointSet::from_flat(1, flat).unwrap()));
        prop_assert_eq!(direct, ong_max_1d_via_records(&values).unwrap());
    }
}
