//! Kernelization safety against the exhaustive oracle on small seeded
//! instances: verdicts survive the reduction in both directions, kernel
//! solutions lift to solutions of the original, and the reduction is
//! idempotent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wecp::kernel::{kernelize, lift_solution, KernelResult};
use wecp::model::{awecp_to_bsddw, verify_bsd, AwecpInstance};
use wecp::oracle::{oracle_solve, OracleOptions, OracleOutcome};

fn random_small_instance(rng: &mut ChaCha8Rng) -> AwecpInstance {
    let n = rng.random_range(1..=8);
    let k = rng.random_range(0..=3usize);
    let p = rng.random_range(0.2..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random_range(1..=3)));
            }
        }
    }
    let mut annotations = Vec::new();
    for v in 0..n {
        if rng.random_bool(0.25) {
            annotations.push((v, rng.random_range(0..=3)));
        }
    }
    AwecpInstance::new(n, edges, annotations, k).unwrap()
}

#[test]
fn kernel_preserves_oracle_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65726e);
    let opts = OracleOptions::with_max_cells(64);
    for round in 0..200 {
        let inst = random_small_instance(&mut rng);
        let (a, k) = awecp_to_bsddw(&inst);
        let original = oracle_solve(&a, k, &opts).unwrap();
        let original_yes = matches!(original, OracleOutcome::Solution(_));
        match kernelize(&a, k) {
            KernelResult::No => {
                assert!(!original_yes, "round {round}: rule 1 rejected a solvable instance {inst:?}");
            }
            KernelResult::Reduced(kernel) => {
                assert!(kernel.matrix.dim() <= a.dim());
                if k < 8 {
                    assert!(kernel.matrix.dim() <= 1usize << (2 * k));
                }
                let reduced = oracle_solve(&kernel.matrix, kernel.budget, &opts).unwrap();
                let reduced_yes = matches!(reduced, OracleOutcome::Solution(_));
                assert_eq!(
                    original_yes, reduced_yes,
                    "round {round}: kernel changed the verdict of {inst:?}"
                );
                if let OracleOutcome::Solution(b) = reduced {
                    let lifted = lift_solution(&b, &kernel.lift).unwrap();
                    assert_eq!(
                        verify_bsd(&a, &lifted, k),
                        Ok(true),
                        "round {round}: lifted solution fails on {inst:?}"
                    );
                }
                // One pass is exhaustive: re-kernelizing changes nothing.
                match kernelize(&kernel.matrix, kernel.budget) {
                    KernelResult::Reduced(again) => assert_eq!(again.matrix, kernel.matrix),
                    KernelResult::No => panic!("round {round}: kernel of a kernel answered NO"),
                }
            }
        }
    }
}
