//! Seeded random instance generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::AwecpInstance;

#[derive(Debug, Clone)]
pub struct RandomInstanceSpec {
    pub vertices: usize,
    /// Independent probability for each vertex pair.
    pub edge_probability: f64,
    /// Edge weights are uniform in `1..=max_weight`.
    pub max_weight: u32,
    pub budget: usize,
    pub seed: u64,
}

/// Random unannotated instance; identical bytes for identical specs.
pub fn random_instance(spec: &RandomInstanceSpec) -> AwecpInstance {
    assert!(
        (0.0..=1.0).contains(&spec.edge_probability),
        "edge probability must be within [0, 1]"
    );
    assert!(spec.max_weight >= 1, "max weight must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for u in 0..spec.vertices {
        for v in (u + 1)..spec.vertices {
            if rng.random_bool(spec.edge_probability) {
                edges.push((u, v, rng.random_range(1..=spec.max_weight)));
            }
        }
    }
    AwecpInstance::new(spec.vertices, edges, [], spec.budget)
        .expect("generated edges are valid by construction")
}
