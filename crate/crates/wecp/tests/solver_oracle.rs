//! The production pipeline against the exhaustive oracle on seeded
//! random instances, plus a budget-monotonicity spot check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wecp::model::{awecp_to_bsddw, verify_awecp, AwecpInstance};
use wecp::oracle::{oracle_solve, OracleOptions, OracleOutcome};
use wecp::solver::{solve_wecp, SolveOptions, WecpOutcome};

fn random_instance(rng: &mut ChaCha8Rng) -> AwecpInstance {
    let n = rng.random_range(1..=7);
    let k = rng.random_range(0..=4usize);
    let p = rng.random_range(0.2..0.95);
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
        if rng.random_bool(0.2) {
            annotations.push((v, rng.random_range(0..=4)));
        }
    }
    AwecpInstance::new(n, edges, annotations, k).unwrap()
}

#[test]
fn pipeline_matches_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x736f6c76);
    let opts = SolveOptions::default();
    let oracle_opts = OracleOptions::default();
    let mut yes = 0u32;
    for round in 0..120 {
        let inst = random_instance(&mut rng);
        let (a, k) = awecp_to_bsddw(&inst);
        let expected = matches!(
            oracle_solve(&a, k, &oracle_opts).unwrap(),
            OracleOutcome::Solution(_)
        );
        let (outcome, _) = solve_wecp(&inst, &opts).unwrap();
        match outcome {
            WecpOutcome::Partition(p) => {
                assert!(expected, "round {round}: solver YES, oracle NO on {inst:?}");
                assert_eq!(verify_awecp(&inst, &p), Ok(true), "round {round}");
                yes += 1;
            }
            WecpOutcome::No => {
                assert!(!expected, "round {round}: solver NO, oracle YES on {inst:?}");
            }
            WecpOutcome::Timeout => unreachable!("no deadline configured"),
        }
    }
    // The sample must exercise both verdicts to mean anything.
    assert!((20..=100).contains(&yes), "unbalanced sample: {yes} YES");
}

#[test]
fn huge_budget_matches_oracle_at_total_weight() {
    // The search caps an oversized budget at the instance's total
    // integer weight; the verdict must match the oracle run at exactly
    // that many cliques.
    let mut rng = ChaCha8Rng::seed_from_u64(0x636170);
    let opts = SolveOptions::default();
    for round in 0..60 {
        let n = rng.random_range(1..=4);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(0.5) {
                    edges.push((u, v, rng.random_range(1..=2)));
                }
            }
        }
        let mut annotations = Vec::new();
        for v in 0..n {
            if rng.random_bool(0.4) {
                annotations.push((v, rng.random_range(0..=2)));
            }
        }
        let total: u32 = edges.iter().map(|&(_, _, w)| w).sum::<u32>()
            + annotations.iter().map(|&(_, c)| c).sum::<u32>();
        // The capped budget drives an exhaustive search on NO instances,
        // so keep the total weight small.
        if total > 4 {
            continue;
        }
        let huge = AwecpInstance::new(n, edges.clone(), annotations.clone(), 1000).unwrap();
        let capped = AwecpInstance::new(n, edges, annotations, total as usize).unwrap();
        let (a, _) = awecp_to_bsddw(&capped);
        let expected = matches!(
            oracle_solve(&a, total as usize, &OracleOptions::with_max_cells(64)).unwrap(),
            OracleOutcome::Solution(_)
        );
        let (outcome, stats) = solve_wecp(&huge, &opts).unwrap();
        assert!(stats.effective_budget <= total as usize, "round {round}");
        match outcome {
            WecpOutcome::Partition(p) => {
                assert!(expected, "round {round}");
                assert_eq!(verify_awecp(&huge, &p), Ok(true), "round {round}");
            }
            WecpOutcome::No => assert!(!expected, "round {round}"),
            WecpOutcome::Timeout => unreachable!(),
        }
    }
}

#[test]
fn more_workers_than_candidates_still_complete() {
    let triangle =
        AwecpInstance::new(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)], [], 1).unwrap();
    let opts = SolveOptions {
        deterministic: false,
        threads: 8,
        use_kernel: false,
        ..SolveOptions::default()
    };
    let (out, _) = solve_wecp(&triangle, &opts).unwrap();
    assert!(matches!(out, WecpOutcome::Partition(_)));
    let path = AwecpInstance::new(3, [(0, 1, 1), (1, 2, 1)], [], 1).unwrap();
    let (out, _) = solve_wecp(&path, &opts).unwrap();
    assert_eq!(out, WecpOutcome::No);
}

#[test]
fn larger_budget_preserves_yes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6f);
    let opts = SolveOptions::default();
    let mut checked = 0;
    for _ in 0..60 {
        let inst = random_instance(&mut rng);
        let (out, _) = solve_wecp(&inst, &opts).unwrap();
        if matches!(out, WecpOutcome::Partition(_)) && inst.budget() < 5 {
            let bigger = AwecpInstance::new(
                inst.vertex_count(),
                inst.edges().to_vec(),
                inst.annotations().iter().map(|(&v, &c)| (v, c)),
                inst.budget() + 1,
            )
            .unwrap();
            let (out, _) = solve_wecp(&bigger, &opts).unwrap();
            assert!(
                matches!(out, WecpOutcome::Partition(_)),
                "budget bump flipped verdict on {inst:?}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 10, "too few YES instances sampled: {checked}");
}
