//! Property tests: metric axioms, oracle cross-checks, and the invariances
//! the aggregation procedures promise.

use benchrank_core::{
    borda, kendall_distance, kendall_tau, mean_task_aggregate, pairwise_compare,
    rank_from_scores, sigma_one_level, sigma_star, sigma_two_level, AggregationResult, Direction,
    InstanceScoreSet, PairwiseTieMode, Ranking, TaskInstances, TaskScoreMatrix, TiePolicy,
    Verdict,
};
use proptest::prelude::*;

/// O(N^2) pair-enumeration oracle for the Kendall distance.
fn kendall_oracle(a: &Ranking, b: &Ranking) -> u64 {
    let (ra, rb) = (a.ranks(), b.ranks());
    let mut count = 0;
    for i in 0..ra.len() {
        for j in i + 1..ra.len() {
            if (ra[i] - ra[j]) * (rb[i] - rb[j]) < 0.0 {
                count += 1;
            }
        }
    }
    count
}

fn permutation(n: usize) -> impl Strategy<Value = Ranking> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut perm: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.next_u64() as usize % (i + 1);
            perm.swap(i, j);
        }
        Ranking::from_permutation(&perm).unwrap()
    })
}

fn sized_permutation_pair() -> impl Strategy<Value = (Ranking, Ranking)> {
    (2usize..=64).prop_flat_map(|n| (permutation(n), permutation(n)))
}

proptest! {
    #[test]
    fn fast_kendall_matches_pair_enumeration((a, b) in sized_permutation_pair()) {
        prop_assert_eq!(kendall_distance(&a, &b).unwrap(), kendall_oracle(&a, &b));
    }

    #[test]
    fn kendall_is_a_metric(
        (a, b, c) in (2usize..=8).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))
    ) {
        let dab = kendall_distance(&a, &b).unwrap();
        let dba = kendall_distance(&b, &a).unwrap();
        let dac = kendall_distance(&a, &c).unwrap();
        let dcb = kendall_distance(&c, &b).unwrap();
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(kendall_distance(&a, &a).unwrap(), 0);
        prop_assert_eq!(dab == 0, a.ranks() == b.ranks());
        prop_assert!(dab <= dac + dcb);
    }

    #[test]
    fn tau_b_closed_form_on_strict_inputs((a, b) in sized_permutation_pair()) {
        let n = a.n_systems() as f64;
        let d = kendall_distance(&a, &b).unwrap() as f64;
        let tau = kendall_tau(&a, &b).unwrap();
        prop_assert!((tau - (1.0 - 4.0 * d / (n * (n - 1.0)))).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&tau));
    }

    #[test]
    fn ranking_invariant_under_increasing_transforms(
        scores in proptest::collection::vec(-50.0f64..50.0, 1..40)
    ) {
        // x -> 2x + 1 and x -> x^3 are strictly increasing; x -> -x flips
        // to the LowerBetter result.
        let base = rank_from_scores(&scores, Direction::HigherBetter, TiePolicy::Fractional).unwrap();
        for transformed in [
            scores.iter().map(|x| 2.0 * x + 1.0).collect::<Vec<_>>(),
            scores.iter().map(|x| x * x * x).collect::<Vec<_>>(),
        ] {
            let r = rank_from_scores(&transformed, Direction::HigherBetter, TiePolicy::Fractional).unwrap();
            prop_assert_eq!(r.ranks(), base.ranks());
        }
        let negated: Vec<f64> = scores.iter().map(|x| -x).collect();
        let flipped = rank_from_scores(&negated, Direction::LowerBetter, TiePolicy::Fractional).unwrap();
        prop_assert_eq!(flipped.ranks(), base.ranks());
    }

    #[test]
    fn fractional_ranks_sum_to_triangular_number(
        scores in proptest::collection::vec(prop_oneof![Just(0.0f64), Just(1.0), Just(2.5), -1.0f64..1.0], 1..30)
    ) {
        let n = scores.len() as f64;
        let r = rank_from_scores(&scores, Direction::HigherBetter, TiePolicy::Fractional).unwrap();
        let sum: f64 = r.ranks().iter().sum();
        prop_assert!((sum - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn borda_unanimity(r in (1usize..=12).prop_flat_map(permutation), copies in 1usize..6) {
        let inputs = vec![r.clone(); copies];
        let out = borda(&inputs).unwrap();
        prop_assert_eq!(out.ranking.ranks(), r.ranks());
    }

    #[test]
    fn borda_neutrality_under_task_reordering(
        rankings in (2usize..=8).prop_flat_map(|n| proptest::collection::vec(permutation(n), 1..8)),
        seed in any::<u64>()
    ) {
        let mut shuffled = rankings.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let a = borda(&rankings).unwrap();
        let b = borda(&shuffled).unwrap();
        prop_assert_eq!(a.ranking.ranks(), b.ranking.ranks());
        prop_assert_eq!(a.per_system_value, b.per_system_value);
    }

    #[test]
    fn borda_rank_sums_are_additive_over_disjoint_subsets(
        rankings in (2usize..=6).prop_flat_map(|n| proptest::collection::vec(permutation(n), 2..8)),
        split in 1usize..7
    ) {
        let split = split.min(rankings.len() - 1);
        let (s1, s2) = rankings.split_at(split);
        let b1 = borda(s1).unwrap();
        let b2 = borda(s2).unwrap();
        let all = borda(&rankings).unwrap();
        let n = all.per_system_value.len();
        for i in 0..n {
            prop_assert_eq!(all.per_system_value[i], b1.per_system_value[i] + b2.per_system_value[i]);
            // Strictly smaller on both parts implies strictly smaller overall.
            for j in 0..n {
                if b1.per_system_value[i] < b1.per_system_value[j]
                    && b2.per_system_value[i] < b2.per_system_value[j]
                {
                    prop_assert!(all.per_system_value[i] < all.per_system_value[j]);
                }
            }
        }
    }
}

fn instance_set(n: usize, instance_counts: &[usize], cells: &mut impl FnMut() -> f64) -> InstanceScoreSet {
    let tasks = instance_counts
        .iter()
        .enumerate()
        .map(|(t, &k)| {
            let scores: Vec<f64> = (0..n * k).map(|_| cells()).collect();
            TaskInstances::new(
                format!("task{t}"),
                Direction::HigherBetter,
                (0..k).map(|i| format!("inst{i}")).collect(),
                n,
                scores,
            )
            .unwrap()
        })
        .collect();
    InstanceScoreSet::new((0..n).map(|i| format!("sys{i}")).collect(), tasks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_based_aggregators_are_scale_invariant(
        seed in any::<u64>(),
        n in 2usize..6,
        counts in proptest::collection::vec(1usize..5, 1..5),
        factors in proptest::collection::vec(0.01f64..100.0, 1..5),
    ) {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / (1u64 << 53) as f64
        };
        let data = instance_set(n, &counts, &mut next);

        // Per-task strictly increasing transforms: scale by a positive
        // factor (cycled over tasks) plus a shift.
        let mut scaled = data.clone();
        for t in 0..scaled.n_tasks() {
            let factor = factors[t % factors.len()];
            let spec = benchrank_core::CorruptionSpec::scale(vec![t], factor);
            scaled = benchrank_core::corrupt_scale(&scaled, &spec).unwrap();
        }

        for eval in [sigma_one_level, sigma_two_level] {
            let a = eval(&data, TiePolicy::Fractional).unwrap();
            let b = eval(&scaled, TiePolicy::Fractional).unwrap();
            prop_assert_eq!(a.ranking.ranks(), b.ranking.ranks());
            prop_assert_eq!(a.per_system_value, b.per_system_value);
        }
        let star_a = sigma_star(&benchrank_core::mean_instance_aggregate(&data), TiePolicy::Fractional).unwrap();
        let star_b = sigma_star(&benchrank_core::mean_instance_aggregate(&scaled), TiePolicy::Fractional).unwrap();
        prop_assert_eq!(star_a.ranking.ranks(), star_b.ranking.ranks());
    }

    #[test]
    fn two_system_borda_coincides_with_pairwise_verdict(
        scores_a in proptest::collection::vec(0.0f64..4.0, 1..30),
        discrete in proptest::bool::ANY,
    ) {
        // Discrete scores make exact ties likely, exercising both tie modes.
        let quantize = |x: f64| if discrete { x.round() } else { x };
        let a: Vec<f64> = scores_a.iter().map(|&x| quantize(x)).collect();
        let b: Vec<f64> = scores_a.iter().rev().map(|&x| quantize(4.0 - x)).collect();

        let k = a.len();
        let tasks = vec![TaskInstances::new(
            "t".into(),
            Direction::HigherBetter,
            (0..k).map(|i| format!("i{i}")).collect(),
            2,
            a.iter().chain(b.iter()).copied().collect(),
        ).unwrap()];
        let data = InstanceScoreSet::new(vec!["A".into(), "B".into()], tasks).unwrap();

        // StableIndex instance ranking credits exact ties to the first
        // system, matching the CreditFirst convention.
        let result = sigma_one_level(&data, TiePolicy::StableIndex).unwrap();
        let outcome = pairwise_compare(&a, &b, Direction::HigherBetter, PairwiseTieMode::CreditFirst).unwrap();
        check_coincidence(&result, outcome.verdict)?;

        // Fractional ties split 0.5/0.5, matching SplitHalf.
        let result = sigma_one_level(&data, TiePolicy::Fractional).unwrap();
        let outcome = pairwise_compare(&a, &b, Direction::HigherBetter, PairwiseTieMode::SplitHalf).unwrap();
        check_coincidence(&result, outcome.verdict)?;
    }
}

fn check_coincidence(
    result: &AggregationResult,
    verdict: Verdict,
) -> Result<(), TestCaseError> {
    let winner = match verdict {
        Verdict::ABetter => Some(0),
        Verdict::BBetter => Some(1),
        Verdict::Tie => None,
    };
    match winner {
        Some(w) => {
            prop_assert!(result.tie_groups.is_empty());
            prop_assert_eq!(result.ranking.rank_of(w), 1.0);
        }
        None => prop_assert_eq!(result.tie_groups.len(), 1),
    }
    Ok(())
}

/// The mean procedure is not scale invariant: rescaling one column by 2
/// flips its output on this fixture while the rank-based output is unchanged.
#[test]
fn mean_aggregation_is_not_scale_invariant() {
    let base = TaskScoreMatrix::new(
        vec!["s1".into(), "s2".into()],
        vec!["t1".into(), "t2".into()],
        vec![Direction::HigherBetter; 2],
        vec![vec![1.0, 0.4], vec![0.0, 1.0]],
    )
    .unwrap();
    let rescaled = TaskScoreMatrix::new(
        vec!["s1".into(), "s2".into()],
        vec!["t1".into(), "t2".into()],
        vec![Direction::HigherBetter; 2],
        vec![vec![1.0, 0.8], vec![0.0, 2.0]],
    )
    .unwrap();

    let mean_before = mean_task_aggregate(&base).unwrap();
    let mean_after = mean_task_aggregate(&rescaled).unwrap();
    assert_eq!(mean_before.ranking.ranks(), &[1.0, 2.0]);
    assert_eq!(mean_after.ranking.ranks(), &[2.0, 1.0]);

    let star_before = sigma_star(&base, TiePolicy::Fractional).unwrap();
    let star_after = sigma_star(&rescaled, TiePolicy::Fractional).unwrap();
    assert_eq!(star_before.ranking.ranks(), star_after.ranking.ranks());
    assert_eq!(star_before.per_system_value, star_after.per_system_value);
}

/// For two systems on one task-level matrix, the Borda winner is the system
/// winning more tasks, i.e. the pairwise verdict on the task scores.
#[test]
fn two_system_sigma_star_matches_task_majority() {
    use rand::prelude::*;
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..200 {
        let t = rng.random_range(1..=9);
        let a: Vec<f64> = (0..t).map(|_| rng.random_range(0..4) as f64).collect();
        let b: Vec<f64> = (0..t).map(|_| rng.random_range(0..4) as f64).collect();
        let m = TaskScoreMatrix::new(
            vec!["A".into(), "B".into()],
            (0..t).map(|i| format!("t{i}")).collect(),
            vec![Direction::HigherBetter; t],
            vec![a.clone(), b.clone()],
        )
        .unwrap();
        let star = sigma_star(&m, TiePolicy::StableIndex).unwrap();
        let outcome =
            pairwise_compare(&a, &b, Direction::HigherBetter, PairwiseTieMode::CreditFirst)
                .unwrap();
        match outcome.verdict {
            Verdict::ABetter => {
                assert!(star.tie_groups.is_empty());
                assert_eq!(star.ranking.rank_of(0), 1.0);
            }
            Verdict::BBetter => {
                assert!(star.tie_groups.is_empty());
                assert_eq!(star.ranking.rank_of(1), 1.0);
            }
            Verdict::Tie => assert_eq!(star.tie_groups.len(), 1),
        }
    }
}
