//! Rank vectors and the distances/correlations used to compare them.
//!
//! A [`Ranking`] assigns every system a rank value, with **rank 1 = best**.
//! Tie-free rankings are permutations of `1..=N`; tied rankings may carry
//! fractional average ranks (e.g. two systems sharing ranks 1 and 2 both get
//! 1.5) or competition-style minimum ranks, depending on the [`TiePolicy`]
//! used to build them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Whether larger or smaller scores indicate better systems for a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    #[default]
    #[cfg_attr(feature = "serde", serde(rename = "higher"))]
    HigherBetter,
    #[cfg_attr(feature = "serde", serde(rename = "lower"))]
    LowerBetter,
}

/// How equal scores are turned into ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TiePolicy {
    /// Tied systems share the average of the ranks they span. Keeps the rank
    /// sum at `N(N+1)/2`, so tied inputs stay neutral inside Borda sums.
    #[default]
    Fractional,
    /// Tied systems all take the smallest rank of their group (1, 1, 3, ...).
    Competition,
    /// Ties are broken by the lower system index; always produces a strict
    /// permutation.
    StableIndex,
}

/// Rank values over `N` systems, indexed by system; rank 1 is best.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ranking {
    ranks: Vec<f64>,
}

impl Ranking {
    /// Builds a ranking from raw rank values, validating that every value is
    /// finite and within `[1, N]`, and that tie-free inputs form a
    /// permutation of `1..=N`.
    pub fn from_ranks(ranks: Vec<f64>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::EmptyInput("ranks"));
        }
        let n = ranks.len();
        for (i, &r) in ranks.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFinite {
                    what: "rank",
                    index: i,
                });
            }
            if r < 1.0 || r > n as f64 {
                return Err(Error::invalid(alloc::format!(
                    "rank {r} at index {i} outside [1, {n}]"
                )));
            }
        }
        let candidate = Ranking { ranks };
        if candidate.all_distinct() && candidate.as_permutation().is_none() {
            return Err(Error::invalid(String::from(
                "tie-free ranks must form a permutation of 1..=N",
            )));
        }
        Ok(candidate)
    }

    /// Builds a strict ranking from integer ranks (a permutation of `1..=N`).
    pub fn from_permutation(ranks: &[usize]) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::EmptyInput("ranks"));
        }
        let n = ranks.len();
        let mut seen = alloc::vec![false; n];
        for &r in ranks {
            if r < 1 || r > n || seen[r - 1] {
                return Err(Error::invalid(alloc::format!(
                    "ranks must be a permutation of 1..={n}"
                )));
            }
            seen[r - 1] = true;
        }
        Ok(Ranking {
            ranks: ranks.iter().map(|&r| r as f64).collect(),
        })
    }

    pub(crate) fn from_ranks_unchecked(ranks: Vec<f64>) -> Self {
        debug_assert!(!ranks.is_empty());
        Ranking { ranks }
    }

    pub fn n_systems(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    /// Rank of one system (1 = best).
    pub fn rank_of(&self, system: usize) -> f64 {
        self.ranks[system]
    }

    fn all_distinct(&self) -> bool {
        let mut sorted = self.ranks.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// True when the ranking is a strict permutation of `1..=N`.
    pub fn is_strict(&self) -> bool {
        self.as_permutation().is_some()
    }

    /// Integer ranks per system for strict rankings, `None` if any tie or
    /// fractional rank is present.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let n = self.ranks.len();
        let mut out = Vec::with_capacity(n);
        let mut seen = alloc::vec![false; n];
        for &r in &self.ranks {
            if !math::is_integral(r) {
                return None;
            }
            let ri = r as usize;
            if ri < 1 || ri > n || seen[ri - 1] {
                return None;
            }
            seen[ri - 1] = true;
            out.push(ri);
        }
        Some(out)
    }

    /// Systems ordered best to worst. Requires a strict ranking.
    pub fn order(&self) -> Result<Vec<usize>> {
        let perm = self.as_permutation().ok_or(Error::TiedRanks)?;
        let mut order = alloc::vec![0usize; perm.len()];
        for (system, rank) in perm.iter().enumerate() {
            order[rank - 1] = system;
        }
        Ok(order)
    }

    /// The reversed ranking (best becomes worst).
    pub fn reversed(&self) -> Ranking {
        let n = self.ranks.len() as f64;
        Ranking {
            ranks: self.ranks.iter().map(|r| n + 1.0 - r).collect(),
        }
    }
}

fn check_scores(scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    for (i, &s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                what: "score",
                index: i,
            });
        }
    }
    Ok(())
}

/// Ranks `scores` so the best score (per `direction`) receives rank 1.
///
/// Equal scores are resolved by `tie_policy`. The result is a permutation of
/// `1..=N` unless `Fractional` or `Competition` ties occur.
pub fn rank_from_scores(
    scores: &[f64],
    direction: Direction,
    tie_policy: TiePolicy,
) -> Result<Ranking> {
    check_scores(scores)?;
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal scores keep index order, which is exactly the
    // StableIndex resolution.
    match direction {
        Direction::HigherBetter => order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a])),
        Direction::LowerBetter => order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b])),
    }

    let mut ranks = alloc::vec![0.0f64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let group_rank = match tie_policy {
            TiePolicy::Fractional => (start + end + 1) as f64 / 2.0,
            TiePolicy::Competition => (start + 1) as f64,
            TiePolicy::StableIndex => 0.0, // per-position below
        };
        for (pos, &system) in order[start..end].iter().enumerate() {
            ranks[system] = match tie_policy {
                TiePolicy::StableIndex => (start + pos + 1) as f64,
                _ => group_rank,
            };
        }
        start = end;
    }
    Ok(Ranking::from_ranks_unchecked(ranks))
}

/// Rank vector of `values` in ascending order: the smallest value gets
/// rank 1, ties broken by the lower index. Equivalent to a double argsort
/// with stable ties.
pub fn ascending_ranks(values: &[f64]) -> Result<Ranking> {
    rank_from_scores(values, Direction::LowerBetter, TiePolicy::StableIndex)
}

fn strict_pair(a: &Ranking, b: &Ranking) -> Result<(Vec<usize>, Vec<usize>)> {
    if a.n_systems() != b.n_systems() {
        return Err(Error::LengthMismatch {
            expected: a.n_systems(),
            got: b.n_systems(),
        });
    }
    let pa = a.as_permutation().ok_or(Error::TiedRanks)?;
    let pb = b.as_permutation().ok_or(Error::TiedRanks)?;
    Ok((pa, pb))
}

/// Number of unordered system pairs ordered oppositely by `a` and `b`.
///
/// Both inputs must be tie-free and over the same `N`. Runs in `O(N log N)`
/// by counting inversions of `b`'s ranks taken in `a`'s order; the value lies
/// in `[0, N(N-1)/2]` and the function is symmetric in its arguments.
pub fn kendall_distance(a: &Ranking, b: &Ranking) -> Result<u64> {
    let (pa, pb) = strict_pair(a, b)?;
    let n = pa.len();
    // inv[p] = system holding rank p+1 in a.
    let mut inv = alloc::vec![0usize; n];
    for (system, &rank) in pa.iter().enumerate() {
        inv[rank - 1] = system;
    }
    let mut seq: Vec<usize> = inv.into_iter().map(|system| pb[system]).collect();
    let mut buf = alloc::vec![0usize; n];
    Ok(count_inversions(&mut seq, &mut buf))
}

/// Merge-sort inversion count on distinct values.
fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = seq.split_at_mut(mid);
    let mut count = count_inversions(left, buf) + count_inversions(right, buf);

    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            // left[i..] are all inversions with right[j].
            count += (left.len() - i) as u64;
            buf[k] = right[j];
            j += 1;
        }
        k += 1;
    }
    buf[k..k + left.len() - i].copy_from_slice(&left[i..]);
    buf[k + left.len() - i..n].copy_from_slice(&right[j..]);
    seq[..k].copy_from_slice(&buf[..k]);
    seq[k..].copy_from_slice(&buf[k..n]);
    count
}

/// [`kendall_distance`] divided by the pair count `N(N-1)/2`; requires N >= 2.
pub fn normalized_kendall_distance(a: &Ranking, b: &Ranking) -> Result<f64> {
    let n = a.n_systems();
    if n < 2 {
        return Err(Error::TooFewSystems { got: n, min: 2 });
    }
    let d = kendall_distance(a, b)?;
    Ok(d as f64 / (n as f64 * (n as f64 - 1.0) / 2.0))
}

/// Kendall rank correlation with tie correction (tau-b), in `[-1, 1]`.
///
/// `(C - D) / sqrt((C + D + T_a)(C + D + T_b))` where `C`/`D` count
/// concordant/discordant pairs and `T_a`/`T_b` count pairs tied in exactly
/// one input. On tie-free inputs this equals `1 - 4 d / (N(N-1))` with `d`
/// the Kendall distance.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<f64> {
    if a.n_systems() != b.n_systems() {
        return Err(Error::LengthMismatch {
            expected: a.n_systems(),
            got: b.n_systems(),
        });
    }
    let ra = a.ranks();
    let rb = b.ranks();
    let n = ra.len();
    let (mut concordant, mut discordant) = (0u64, 0u64);
    let (mut tied_a_only, mut tied_b_only) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let da = ra[i] - ra[j];
            let db = rb[i] - rb[j];
            match (da == 0.0, db == 0.0) {
                (true, true) => {}
                (true, false) => tied_a_only += 1,
                (false, true) => tied_b_only += 1,
                (false, false) => {
                    if (da > 0.0) == (db > 0.0) {
                        concordant += 1;
                    } else {
                        discordant += 1;
                    }
                }
            }
        }
    }
    let no_tie_in_b = (concordant + discordant + tied_a_only) as f64;
    let no_tie_in_a = (concordant + discordant + tied_b_only) as f64;
    if no_tie_in_a == 0.0 || no_tie_in_b == 0.0 {
        return Err(Error::DegenerateRanking);
    }
    Ok((concordant as f64 - discordant as f64) / math::sqrt(no_tie_in_a * no_tie_in_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(ranks: &[usize]) -> Ranking {
        Ranking::from_permutation(ranks).unwrap()
    }

    #[test]
    fn ranks_lower_better_stable() {
        let ranking =
            rank_from_scores(&[0.3, 0.1, 0.0], Direction::LowerBetter, TiePolicy::StableIndex)
                .unwrap();
        assert_eq!(ranking.ranks(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn ranks_single_system() {
        let ranking =
            rank_from_scores(&[5.0], Direction::HigherBetter, TiePolicy::Fractional).unwrap();
        assert_eq!(ranking.ranks(), &[1.0]);
    }

    #[test]
    fn ranks_fractional_ties_average() {
        let ranking =
            rank_from_scores(&[2.0, 2.0, 1.0], Direction::HigherBetter, TiePolicy::Fractional)
                .unwrap();
        assert_eq!(ranking.ranks(), &[1.5, 1.5, 3.0]);
    }

    #[test]
    fn ranks_competition_ties_min() {
        let ranking =
            rank_from_scores(&[2.0, 2.0, 1.0], Direction::HigherBetter, TiePolicy::Competition)
                .unwrap();
        assert_eq!(ranking.ranks(), &[1.0, 1.0, 3.0]);
    }

    #[test]
    fn ranks_reject_empty_and_nan() {
        assert_eq!(
            rank_from_scores(&[], Direction::HigherBetter, TiePolicy::Fractional),
            Err(Error::EmptyInput("scores"))
        );
        assert_eq!(
            rank_from_scores(
                &[1.0, f64::NAN, 2.0],
                Direction::HigherBetter,
                TiePolicy::Fractional
            ),
            Err(Error::NonFinite {
                what: "score",
                index: 1
            })
        );
    }

    #[test]
    fn ascending_ranks_examples() {
        assert_eq!(ascending_ranks(&[13.0, 12.0, 11.0]).unwrap().ranks(), &[3.0, 2.0, 1.0]);
        assert_eq!(ascending_ranks(&[5.0]).unwrap().ranks(), &[1.0]);
        // Stable index tie-break: the earlier of the two equal values wins.
        assert_eq!(ascending_ranks(&[2.0, 2.0, 1.0]).unwrap().ranks(), &[2.0, 3.0, 1.0]);
    }

    #[test]
    fn kendall_distance_examples() {
        assert_eq!(kendall_distance(&r(&[1, 2, 3]), &r(&[1, 2, 3])).unwrap(), 0);
        assert_eq!(kendall_distance(&r(&[1, 2, 3, 4]), &r(&[4, 3, 2, 1])).unwrap(), 6);
        assert_eq!(kendall_distance(&r(&[1, 2, 3]), &r(&[2, 1, 3])).unwrap(), 1);
    }

    #[test]
    fn kendall_distance_rejects_bad_inputs() {
        assert_eq!(
            kendall_distance(&r(&[1, 2]), &r(&[1, 2, 3])),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 3
            })
        );
        let tied = Ranking::from_ranks(alloc::vec![1.5, 1.5, 3.0]).unwrap();
        assert_eq!(kendall_distance(&tied, &r(&[1, 2, 3])), Err(Error::TiedRanks));
    }

    #[test]
    fn normalized_distance_examples() {
        assert_eq!(
            normalized_kendall_distance(&r(&[1, 2, 3, 4]), &r(&[4, 3, 2, 1])).unwrap(),
            1.0
        );
        assert_eq!(normalized_kendall_distance(&r(&[1, 2, 3]), &r(&[1, 2, 3])).unwrap(), 0.0);
        let d = normalized_kendall_distance(&r(&[1, 2, 3]), &r(&[1, 3, 2])).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            normalized_kendall_distance(&r(&[1]), &r(&[1])),
            Err(Error::TooFewSystems { got: 1, min: 2 })
        );
    }

    #[test]
    fn tau_examples() {
        assert_eq!(kendall_tau(&r(&[1, 2, 3]), &r(&[1, 2, 3])).unwrap(), 1.0);
        assert_eq!(kendall_tau(&r(&[1, 2, 3]), &r(&[3, 2, 1])).unwrap(), -1.0);
        // C = 5, D = 1 by direct pair enumeration.
        let tau = kendall_tau(&r(&[1, 2, 3, 4]), &r(&[1, 2, 4, 3])).unwrap();
        assert!((tau - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tau_degenerate_all_tied() {
        let flat = Ranking::from_ranks(alloc::vec![2.0, 2.0, 2.0]).unwrap();
        assert_eq!(kendall_tau(&flat, &r(&[1, 2, 3])), Err(Error::DegenerateRanking));
    }

    #[test]
    fn tau_with_partial_ties() {
        // a = [1.5, 1.5, 3], b = [1, 2, 3]: C = 2, D = 0, Ta = 1, Tb = 0.
        let a = Ranking::from_ranks(alloc::vec![1.5, 1.5, 3.0]).unwrap();
        let b = r(&[1, 2, 3]);
        let tau = kendall_tau(&a, &b).unwrap();
        assert!((tau - 2.0 / (3.0f64 * 2.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn order_and_reversed() {
        let ranking = r(&[2, 3, 1]);
        assert_eq!(ranking.order().unwrap(), vec![2, 0, 1]);
        assert_eq!(ranking.reversed().ranks(), &[2.0, 1.0, 3.0]);
    }

    #[test]
    fn from_ranks_validation() {
        assert!(Ranking::from_ranks(alloc::vec![1.0, 2.0, 3.0]).is_ok());
        assert!(Ranking::from_ranks(alloc::vec![1.5, 1.5, 3.0]).is_ok());
        // Distinct but not a permutation.
        assert!(Ranking::from_ranks(alloc::vec![1.0, 2.5, 3.0]).is_err());
        assert!(Ranking::from_ranks(alloc::vec![0.5, 1.0]).is_err());
        assert!(Ranking::from_ranks(alloc::vec![]).is_err());
    }
}
