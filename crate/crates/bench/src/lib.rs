//! Shared fixtures for the criterion benches.

use qgt_core::codec::{self, DesignParams, SignatureMatrix, TestVector};
use qgt_core::graph::BiRegularGraph;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A sampled graph with one encoded defective set.
pub struct Instance {
    pub params: DesignParams,
    pub graph: BiRegularGraph,
    pub sig: SignatureMatrix,
    pub support: Vec<usize>,
    pub y: TestVector,
}

impl Instance {
    /// N items, K defectives, M = 2 c(t) K right nodes so decoding succeeds.
    pub fn new(n: usize, k: usize, t: usize, seed: u64) -> Self {
        let c = qgt_core::c_of_t(t);
        let m = (2.0 * c.c * k as f64).ceil() as usize;
        let params = DesignParams::with_right_nodes(n, k, t, c.ell_star, m).expect("valid design");
        let graph = BiRegularGraph::sample(n, m, params.ell, seed).expect("graph");
        let sig = params.signature().expect("signature");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let support = sample(&mut rng, n, k).into_vec();
        let y = codec::encode(&graph, &sig, &support).expect("encode");
        Instance {
            params,
            graph,
            sig,
            support,
            y,
        }
    }
}
