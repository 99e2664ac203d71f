//! Dispersion measures over sets of rankings.
//!
//! Given per-task rankings `r_1..r_T`, two quantities describe the set: the
//! performance of a candidate consensus, `sum_t d(c, r_t)`, and the
//! intrinsic spread of the set, the mean pairwise distance
//! `E[d(r, r')]` over distinct pairs. The triangle inequality ties them
//! together: the per-task optimum `min_c (1/T) sum_t d(c, r_t)` is always
//! between half the mean pairwise distance and the mean pairwise distance
//! itself, which [`sandwich_check`] verifies on concrete instances.
//!
//! A random-permutation baseline calibrates the performance numbers: a
//! candidate is only informative if it beats rankings drawn uniformly at
//! random.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kemeny::{kemeny_branch_bound, kemeny_objective, BRANCH_BOUND_DEFAULT_LIMIT};
use crate::math;
use crate::ranking::{kendall_distance, Ranking};
use crate::rng::{
    gen_index, keyed_rng, shuffle, DOMAIN_PAIR_SAMPLE, DOMAIN_RANDOM_BASELINE,
};

/// Default number of permutations for [`random_baseline`].
pub const RANDOM_BASELINE_DEFAULT: u32 = 100;

/// Dispersion summary of one ranking set; see [`crate::run_dispersion_analysis`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DispersionReport {
    /// Candidate label -> `sum_t d(candidate, r_t)`.
    pub performance: BTreeMap<String, f64>,
    /// Mean Kendall distance over distinct ordered pairs of inputs.
    pub pairwise_mean: f64,
    pub random_baseline_mean: f64,
    pub random_baseline_std: f64,
    pub n_random: u32,
    /// Set only when an exact consensus is computable (small N).
    pub sandwich_ok: Option<bool>,
}

/// Total Kendall distance from `candidate` to the ranking set; the quantity
/// the Kemeny consensus minimizes. Shares its implementation with
/// [`kemeny_objective`].
pub fn performance_dispersion(candidate: &Ranking, rankings: &[Ranking]) -> Result<u64> {
    kemeny_objective(candidate, rankings)
}

fn check_pairs(rankings: &[Ranking]) -> Result<usize> {
    let t = rankings.len();
    if t < 2 {
        return Err(Error::invalid(alloc::format!(
            "pairwise dispersion needs at least 2 rankings, got {t}"
        )));
    }
    Ok(t)
}

/// Mean Kendall distance over the `T(T-1)` distinct ordered pairs, computed
/// exactly in `O(T^2 N log N)`. Symmetry of the distance makes this equal to
/// the mean over unordered pairs.
pub fn pairwise_dispersion(rankings: &[Ranking]) -> Result<f64> {
    let t = check_pairs(rankings)?;
    let mut total = 0u64;
    for i in 0..t {
        for j in i + 1..t {
            total += kendall_distance(&rankings[i], &rankings[j])?;
        }
    }
    // Each unordered pair appears twice among ordered pairs.
    Ok(2.0 * total as f64 / (t as f64 * (t as f64 - 1.0)))
}

/// Sampling budget for [`pairwise_dispersion_subsampled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBudget {
    /// Draw this many distinct ordered pairs uniformly, with replacement.
    Sampled(usize),
    /// Evaluate every distinct pair; equals [`pairwise_dispersion`] exactly.
    Exhaustive,
}

/// Monte-Carlo estimate of the mean pairwise distance.
///
/// Returns `(estimate, standard error of the mean)`; the estimator is
/// unbiased under uniform pair sampling. With [`PairBudget::Exhaustive`] the
/// estimate is the exact mean and the reported error is 0.
pub fn pairwise_dispersion_subsampled(
    rankings: &[Ranking],
    budget: PairBudget,
    seed: u64,
) -> Result<(f64, f64)> {
    let t = check_pairs(rankings)?;
    match budget {
        PairBudget::Exhaustive => Ok((pairwise_dispersion(rankings)?, 0.0)),
        PairBudget::Sampled(n_pairs) => {
            if n_pairs == 0 {
                return Err(Error::invalid("n_pairs must be >= 1"));
            }
            let mut rng = keyed_rng(seed, &[DOMAIN_PAIR_SAMPLE]);
            let mut draws = Vec::with_capacity(n_pairs);
            for _ in 0..n_pairs {
                let i = gen_index(&mut rng, t);
                let mut j = gen_index(&mut rng, t - 1);
                if j >= i {
                    j += 1;
                }
                draws.push(kendall_distance(&rankings[i], &rankings[j])? as f64);
            }
            let (mean, std) = math::mean_std(&draws);
            Ok((mean, std / math::sqrt(n_pairs as f64)))
        }
    }
}

/// Mean and standard deviation of the dispersion of `n_random` uniformly
/// drawn permutations against the ranking set.
pub fn random_baseline(rankings: &[Ranking], n_random: u32, seed: u64) -> Result<(f64, f64)> {
    if rankings.is_empty() {
        return Err(Error::EmptyInput("rankings"));
    }
    if n_random < 1 {
        return Err(Error::invalid("n_random must be >= 1"));
    }
    let n = rankings[0].n_systems();
    let mut values = Vec::with_capacity(n_random as usize);
    for draw in 0..n_random {
        let mut rng = keyed_rng(seed, &[DOMAIN_RANDOM_BASELINE, draw as u64]);
        let mut perm: Vec<usize> = (1..=n).collect();
        shuffle(&mut rng, &mut perm);
        let candidate = Ranking::from_permutation(&perm)?;
        values.push(performance_dispersion(&candidate, rankings)? as f64);
    }
    Ok(math::mean_std(&values))
}

/// Two-sided bound on the per-task optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SandwichCheck {
    /// Half the mean pairwise distance.
    pub lower: f64,
    /// Exact Kemeny objective divided by `T`.
    pub value: f64,
    /// The mean pairwise distance.
    pub upper: f64,
    pub ok: bool,
}

/// Checks `0.5 * pairwise_mean <= (exact objective)/T <= pairwise_mean`.
///
/// Both inequalities follow from the triangle inequality, so `ok` holding on
/// every instance is expected; a violation would indicate a defect in the
/// distance or the solver. Requires `N` small enough for the exact solver.
pub fn sandwich_check(rankings: &[Ranking]) -> Result<SandwichCheck> {
    let t = check_pairs(rankings)?;
    let pairwise = pairwise_dispersion(rankings)?;
    let exact = kemeny_branch_bound(rankings, BRANCH_BOUND_DEFAULT_LIMIT)?;
    let value = exact.objective / t as f64;
    let lower = 0.5 * pairwise;
    let upper = pairwise;
    let eps = 1e-9;
    Ok(SandwichCheck {
        lower,
        value,
        upper,
        ok: lower - eps <= value && value <= upper + eps,
    })
}
