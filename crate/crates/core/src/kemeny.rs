//! Exact Kemeny consensus for small instances.
//!
//! The Kemeny consensus of rankings `r_1..r_T` is a permutation minimizing
//! `sum_t d(r_t, c)` with `d` the Kendall distance. Computing it is NP-hard
//! in general; these solvers are exact for small `N` and serve as the oracle
//! against which the Borda approximation is validated.
//!
//! Both solvers work on the pairwise-preference matrix `pref[i][j]` = number
//! of input rankings placing `i` strictly before `j` (rankings that tie the
//! pair contribute 0.5 to each direction). Placing `i` before `j` in the
//! consensus then costs `pref[j][i]` disagreements.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ranking::{kendall_distance, Ranking};

/// Default instance-size cap for [`kemeny_brute_force`].
pub const BRUTE_FORCE_DEFAULT_LIMIT: usize = 10;
/// Default instance-size cap for [`kemeny_branch_bound`].
pub const BRANCH_BOUND_DEFAULT_LIMIT: usize = 15;

/// An exact consensus together with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct KemenySolution {
    /// The minimizer; among co-optima, the lexicographically smallest rank
    /// vector, so results are reproducible across platforms.
    pub consensus: Ranking,
    /// Total Kendall distance to the inputs. Integral for strict inputs;
    /// half-integral when tied inputs contribute 0.5 preferences.
    pub objective: f64,
    /// True for results of the exact solvers in this module.
    pub optimal: bool,
    /// Number of permutations attaining the optimum.
    pub co_optima_count: u64,
}

/// Total Kendall distance from a strict `candidate` to every input ranking.
pub fn kemeny_objective(candidate: &Ranking, rankings: &[Ranking]) -> Result<u64> {
    if rankings.is_empty() {
        return Err(Error::EmptyInput("rankings"));
    }
    let mut total = 0u64;
    for r in rankings {
        total += kendall_distance(candidate, r)?;
    }
    Ok(total)
}

fn check_instance(rankings: &[Ranking], limit: usize) -> Result<usize> {
    let first = rankings.first().ok_or(Error::EmptyInput("rankings"))?;
    let n = first.n_systems();
    for r in rankings {
        if r.n_systems() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: r.n_systems(),
            });
        }
    }
    if n > limit {
        return Err(Error::TooManySystems { got: n, limit });
    }
    Ok(n)
}

/// `pref[i][j]`: input rankings preferring `i` over `j` (ties split 0.5/0.5).
fn preference_matrix(rankings: &[Ranking], n: usize) -> Vec<f64> {
    let mut pref = alloc::vec![0.0f64; n * n];
    for r in rankings {
        let ranks = r.ranks();
        for i in 0..n {
            for j in i + 1..n {
                if ranks[i] < ranks[j] {
                    pref[i * n + j] += 1.0;
                } else if ranks[j] < ranks[i] {
                    pref[j * n + i] += 1.0;
                } else {
                    pref[i * n + j] += 0.5;
                    pref[j * n + i] += 0.5;
                }
            }
        }
    }
    pref
}

/// Objective of the rank vector `perm` (perm[system] = rank) under `pref`.
fn objective_of(perm: &[usize], pref: &[f64], n: usize) -> f64 {
    let mut cost = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            // Whichever of i, j is ranked worse pays the voters preferring it.
            if perm[i] < perm[j] {
                cost += pref[j * n + i];
            } else {
                cost += pref[i * n + j];
            }
        }
    }
    cost
}

/// Advances `perm` to its lexicographic successor; false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Exact consensus by enumerating all `N!` rank vectors in lexicographic
/// order; the first minimizer found is returned, so the tie-break is the
/// lexicographically smallest rank vector. Inputs must be strict.
pub fn kemeny_brute_force(rankings: &[Ranking], n_max: usize) -> Result<KemenySolution> {
    let n = check_instance(rankings, n_max)?;
    for r in rankings {
        if !r.is_strict() {
            return Err(Error::TiedRanks);
        }
    }
    let pref = preference_matrix(rankings, n);
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut best_perm = perm.clone();
    let mut best = objective_of(&perm, &pref, n);
    let mut co_optima = 1u64;
    while next_permutation(&mut perm) {
        let cost = objective_of(&perm, &pref, n);
        if cost < best {
            best = cost;
            best_perm.copy_from_slice(&perm);
            co_optima = 1;
        } else if cost == best {
            co_optima += 1;
        }
    }
    Ok(KemenySolution {
        consensus: Ranking::from_permutation(&best_perm)?,
        objective: best,
        optimal: true,
        co_optima_count: co_optima,
    })
}

struct BranchBound<'a> {
    pref: &'a [f64],
    n: usize,
    /// Position -> system, filled best-first.
    ordering: Vec<usize>,
    remaining: Vec<bool>,
    best: f64,
    best_rank_vector: Vec<usize>,
    co_optima: u64,
    found: bool,
}

impl BranchBound<'_> {
    fn pair_bound(&self, s: usize) -> f64 {
        let mut sum = 0.0;
        for u in 0..self.n {
            if u != s && self.remaining[u] {
                let a = self.pref[s * self.n + u];
                let b = self.pref[u * self.n + s];
                sum += if a < b { a } else { b };
            }
        }
        sum
    }

    fn descend(&mut self, depth: usize, cost: f64, lower_bound: f64) {
        if depth == self.n {
            let mut rank_vector = alloc::vec![0usize; self.n];
            for (pos, &system) in self.ordering.iter().enumerate() {
                rank_vector[system] = pos + 1;
            }
            if !self.found || cost < self.best {
                self.best = cost;
                self.best_rank_vector = rank_vector;
                self.co_optima = 1;
                self.found = true;
            } else if cost == self.best {
                self.co_optima += 1;
                if rank_vector < self.best_rank_vector {
                    self.best_rank_vector = rank_vector;
                }
            }
            return;
        }
        for s in 0..self.n {
            if !self.remaining[s] {
                continue;
            }
            // Placing s next: every remaining u ends up after s, costing the
            // voters who prefer u. The bound over pairs inside the remaining
            // set shrinks by s's contribution.
            let mut placement = 0.0;
            for u in 0..self.n {
                if u != s && self.remaining[u] {
                    placement += self.pref[u * self.n + s];
                }
            }
            let bound_delta = self.pair_bound(s);
            let child_cost = cost + placement;
            let child_bound = lower_bound - bound_delta;
            // Explore ties so co-optima are counted and the lexicographic
            // tie-break sees every optimal leaf.
            if child_cost + child_bound > self.best {
                continue;
            }
            self.remaining[s] = false;
            self.ordering[depth] = s;
            self.descend(depth + 1, child_cost, child_bound);
            self.remaining[s] = true;
        }
    }
}

/// Exact consensus by branch-and-bound over best-first prefix orderings.
///
/// The lower bound for the undecided suffix is the sum over its pairs of the
/// cheaper orientation, seeded with the Borda solution as incumbent. Accepts
/// tied inputs (0.5 preferences), in which case the objective may be
/// half-integral. Matches [`kemeny_brute_force`] exactly on strict inputs,
/// including the tie-break and the co-optima count. Equal-cost branches are
/// explored rather than pruned, so instances whose optimum is attained by
/// very many permutations degenerate toward full enumeration.
pub fn kemeny_branch_bound(rankings: &[Ranking], n_max: usize) -> Result<KemenySolution> {
    let n = check_instance(rankings, n_max)?;
    let pref = preference_matrix(rankings, n);

    let borda_incumbent = crate::aggregate::borda(rankings)?;
    let incumbent_perm = borda_incumbent
        .ranking
        .as_permutation()
        .expect("Borda output is strict");
    let incumbent_cost = objective_of(&incumbent_perm, &pref, n);

    let mut root_bound = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let a = pref[i * n + j];
            let b = pref[j * n + i];
            root_bound += if a < b { a } else { b };
        }
    }

    let mut solver = BranchBound {
        pref: &pref,
        n,
        ordering: alloc::vec![0usize; n],
        remaining: alloc::vec![true; n],
        best: incumbent_cost,
        best_rank_vector: Vec::new(),
        co_optima: 0,
        found: false,
    };
    solver.descend(0, 0.0, root_bound);
    debug_assert!(solver.found, "incumbent cost is attainable");

    Ok(KemenySolution {
        consensus: Ranking::from_permutation(&solver.best_rank_vector)?,
        objective: solver.best,
        optimal: true,
        co_optima_count: solver.co_optima,
    })
}

/// Ratio between the Borda solution's objective and the exact optimum
/// (>= 1). Defined as 1 when both are zero.
pub fn borda_approx_ratio(rankings: &[Ranking]) -> Result<f64> {
    let exact = kemeny_branch_bound(rankings, BRANCH_BOUND_DEFAULT_LIMIT)?;
    let approx = crate::aggregate::borda(rankings)?;
    let approx_objective = kemeny_objective(&approx.ranking, rankings)? as f64;
    if exact.objective == 0.0 {
        return if approx_objective == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::UnanimityViolated)
        };
    }
    Ok(approx_objective / exact.objective)
}
