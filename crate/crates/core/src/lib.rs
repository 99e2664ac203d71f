//! Rank aggregation for multi-task benchmarks.
//!
//! When `N` systems are evaluated on `T` tasks (and optionally on `K`
//! instances per task), averaging raw scores across tasks is fragile: metrics
//! live on different scales, some are unbounded, and a single rescaled column
//! can flip the final ordering. This crate ranks systems by aggregating the
//! *rankings* induced by each task instead of the scores themselves, which
//! makes the result invariant under any monotone per-task rescaling.
//!
//! The aggregation is Borda's count — sum each system's ranks across tasks
//! and rank the sums — a fast approximation of the Kemeny consensus (the
//! permutation minimizing total Kendall distance to the inputs). An exact
//! Kemeny solver for small `N` is included as a verification oracle.
//!
//! # Layout
//!
//! - [`ranking`] — rank vectors, tie policies, Kendall distance and tau-b.
//! - [`aggregate`] — score tables and the aggregation procedures
//!   (`mean`, `sigma_star`, `sigma_one_level`, `sigma_two_level`,
//!   pairwise score comparison).
//! - [`kemeny`] — exact consensus by exhaustive search and branch-and-bound,
//!   plus the Borda approximation ratio.
//! - [`synth`] — Gumbel score generator (Plackett–Luce rankings) and the
//!   reversal/rescaling corruption operators.
//! - [`dispersion`] — consensus quality and spread measures over ranking
//!   sets, with a Monte-Carlo random baseline.
//! - [`experiment`] — seeded, replicated robustness experiments producing
//!   tabular reports.
//!
//! All computations are pure functions of their inputs; randomized routines
//! take an explicit seed and derive independent substreams per draw, so
//! results are reproducible regardless of thread count.
//!
//! # Example
//!
//! ```
//! use benchrank_core::{sigma_star, Direction, TaskScoreMatrix, TiePolicy};
//!
//! let m = TaskScoreMatrix::new(
//!     vec!["A".into(), "B".into(), "C".into()],
//!     vec!["t1".into(), "t2".into()],
//!     vec![Direction::HigherBetter; 2],
//!     vec![vec![0.9, 0.8], vec![0.5, 0.7], vec![0.2, 0.5]],
//! )
//! .unwrap();
//! let result = sigma_star(&m, TiePolicy::Fractional).unwrap();
//! assert_eq!(result.ranking.ranks(), &[1.0, 2.0, 3.0]);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod aggregate;
pub mod dispersion;
mod error;
pub mod experiment;
pub mod kemeny;
mod math;
pub mod ranking;
pub mod rng;
pub mod synth;

pub use aggregate::{
    borda, mean_instance_aggregate, mean_task_aggregate, pairwise_compare, sigma_one_level,
    sigma_star, sigma_two_level, AggregationResult, InstanceScoreSet, Method, PairwiseOutcome,
    PairwiseTieMode, TaskInstances, TaskScoreMatrix, Verdict,
};
pub use dispersion::{
    pairwise_dispersion, pairwise_dispersion_subsampled, performance_dispersion, random_baseline,
    sandwich_check, DispersionReport, PairBudget, SandwichCheck,
};
pub use error::{Error, Result};
pub use experiment::{
    evaluate_method, run_agreement_analysis, run_dispersion_analysis,
    run_manipulation_robustness, run_scaling_robustness, run_subset_robustness, AgreementSummary,
    ExperimentCell, ExperimentReport, SubsetData,
};
pub use kemeny::{
    borda_approx_ratio, kemeny_branch_bound, kemeny_brute_force, kemeny_objective, KemenySolution,
};
pub use ranking::{
    ascending_ranks, kendall_distance, kendall_tau, normalized_kendall_distance, rank_from_scores,
    Direction, Ranking, TiePolicy,
};
pub use synth::{
    corrupt_reverse, corrupt_scale, generate_scores, ground_truth_ranking, sample_gumbel,
    CorruptionKind, CorruptionSpec, SyntheticConfig,
};
