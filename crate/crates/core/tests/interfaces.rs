use proptest::prelude::*;
use qgt_core::codec::{self, DesignParams, EllChoice, TestVector};
use qgt_core::graph::BiRegularGraph;
use qgt_core::{decode, encode};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn text_round_trip_through_all_artifacts() {
    let params = DesignParams::derive(5000, 40, 2, EllChoice::Auto, 1.8).unwrap();
    let graph = BiRegularGraph::sample(params.n, params.right_nodes, params.ell, 11).unwrap();
    let sig = params.signature().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut support = sample(&mut rng, params.n, params.k).into_vec();
    support.sort_unstable();

    let graph_back = BiRegularGraph::from_text(&graph.to_text()).unwrap();
    let support_back = codec::support_from_text(&codec::support_to_text(&support)).unwrap();
    assert_eq!(graph_back, graph);
    assert_eq!(support_back, support);

    let y = encode(&graph_back, &sig, &support_back).unwrap();
    assert_eq!(y.len(), params.total_tests);
    let y_back = TestVector::from_text(&y.to_text()).unwrap();
    let out = decode(&graph_back, &sig, &y_back).unwrap();
    assert!(out.success);
    assert_eq!(out.recovered, support);
}

#[test]
fn dense_matrix_agrees_with_sparse_encoder() {
    let params = DesignParams::with_right_nodes(300, 10, 3, 3, 12).unwrap();
    let graph = BiRegularGraph::sample(300, 12, 3, 5).unwrap();
    let sig = params.signature().unwrap();
    let a = codec::measurement_matrix(&graph, &sig).unwrap();
    assert_eq!(a.len(), 12 * params.tests_per_node);
    let support = [3, 17, 150, 299];
    let y = encode(&graph, &sig, &support).unwrap();
    let dense: Vec<u32> = a
        .iter()
        .map(|row| support.iter().map(|&v| row[v] as u32).sum())
        .collect();
    assert_eq!(&y.0[1..], &dense[..]);
    let text = codec::matrix_to_text(&a);
    assert_eq!(text.lines().count(), a.len());
    assert!(text.lines().all(|l| l.split(' ').count() == 300));
}

#[test]
fn decoder_rejects_mismatched_inputs() {
    let graph = BiRegularGraph::sample(100, 10, 2, 0).unwrap();
    let sig = codec::SignatureMatrix::build(2, graph.max_right_degree()).unwrap();
    let y = encode(&graph, &sig, &[1, 2]).unwrap();
    let mut short = y.clone();
    short.0.pop();
    assert!(decode(&graph, &sig, &short).is_err());
    let narrow = codec::SignatureMatrix::build(2, 3).unwrap();
    assert!(decode(&graph, &narrow, &y).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recovered_set_is_always_sound(
        seed in any::<u64>(),
        n in 50usize..600,
        k in 1usize..40,
        t in 1usize..=4,
        ell in 2usize..=4,
        m in 4usize..60,
    ) {
        let k = k.min(n - 1);
        let m = m.max(ell);
        let graph = BiRegularGraph::sample(n, m, ell, seed).unwrap();
        let sig = codec::SignatureMatrix::build(t, graph.max_right_degree()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let support = sample(&mut rng, n, k).into_vec();
        let y = encode(&graph, &sig, &support).unwrap();
        let out = decode(&graph, &sig, &y).unwrap();
        prop_assert!(out.recovered.iter().all(|v| support.contains(v)));
        prop_assert_eq!(out.success, out.recovered.len() == k);
    }
}
