//! Score tables and the aggregation procedures that rank them.
//!
//! Two input granularities are supported: a [`TaskScoreMatrix`] of one score
//! per system and task, and an [`InstanceScoreSet`] with per-instance scores
//! `s[n][t][k]`. Four ranking procedures operate on them:
//!
//! - [`mean_task_aggregate`] — rank systems by their mean score (the common
//!   leaderboard baseline; scale-sensitive).
//! - [`sigma_star`] — Borda over the per-task rankings (task-level input).
//! - [`sigma_one_level`] — one Borda over all per-instance rankings pooled
//!   across tasks.
//! - [`sigma_two_level`] — Borda per task over its instances, then Borda over
//!   the per-task results.
//!
//! The Borda-based procedures depend only on the rankings induced by each
//! task (or instance), so any strictly monotone per-task transform of the
//! scores leaves their output unchanged.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ranking::{ascending_ranks, rank_from_scores, Direction, Ranking, TiePolicy};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `N x T` scores with one value per system and task.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskScoreMatrix {
    system_names: Vec<String>,
    task_names: Vec<String>,
    directions: Vec<Direction>,
    /// Row-major, `scores[n * T + t]`.
    scores: Vec<f64>,
}

fn check_unique(names: &[String], what: &'static str) -> Result<()> {
    for (i, a) in names.iter().enumerate() {
        for b in names.iter().skip(i + 1) {
            if a == b {
                return Err(Error::invalid(alloc::format!("duplicate {what} name: {a}")));
            }
        }
    }
    Ok(())
}

impl TaskScoreMatrix {
    /// Builds a matrix from per-system rows; all entries must be finite and
    /// the dimensions consistent with the label lists.
    pub fn new(
        system_names: Vec<String>,
        task_names: Vec<String>,
        directions: Vec<Direction>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = system_names.len();
        let t = task_names.len();
        if n == 0 {
            return Err(Error::EmptyInput("systems"));
        }
        if t == 0 {
            return Err(Error::EmptyInput("tasks"));
        }
        if directions.len() != t {
            return Err(Error::LengthMismatch {
                expected: t,
                got: directions.len(),
            });
        }
        if rows.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        check_unique(&system_names, "system")?;
        check_unique(&task_names, "task")?;
        let mut scores = Vec::with_capacity(n * t);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != t {
                return Err(Error::invalid(alloc::format!(
                    "system {} has {} scores, expected {t}",
                    system_names[i],
                    row.len()
                )));
            }
            for (j, &s) in row.iter().enumerate() {
                if !s.is_finite() {
                    return Err(Error::invalid(alloc::format!(
                        "non-finite score for system {} on task {}",
                        system_names[i],
                        task_names[j]
                    )));
                }
                scores.push(s);
            }
        }
        Ok(TaskScoreMatrix {
            system_names,
            task_names,
            directions,
            scores,
        })
    }

    pub fn n_systems(&self) -> usize {
        self.system_names.len()
    }

    pub fn n_tasks(&self) -> usize {
        self.task_names.len()
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn task_names(&self) -> &[String] {
        &self.task_names
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn score(&self, system: usize, task: usize) -> f64 {
        self.scores[system * self.n_tasks() + task]
    }

    /// Scores of every system on one task.
    pub fn task_column(&self, task: usize) -> Vec<f64> {
        (0..self.n_systems()).map(|n| self.score(n, task)).collect()
    }

    /// Replaces the per-task directions (e.g. after loading a file whose
    /// metrics are lower-better).
    pub fn with_directions(mut self, directions: Vec<Direction>) -> Result<Self> {
        if directions.len() != self.n_tasks() {
            return Err(Error::LengthMismatch {
                expected: self.n_tasks(),
                got: directions.len(),
            });
        }
        self.directions = directions;
        Ok(self)
    }

    /// Sub-matrix restricted to `tasks` (indices into the task list).
    pub fn select_tasks(&self, tasks: &[usize]) -> Result<TaskScoreMatrix> {
        if tasks.is_empty() {
            return Err(Error::EmptyInput("tasks"));
        }
        for &t in tasks {
            if t >= self.n_tasks() {
                return Err(Error::invalid(alloc::format!(
                    "task index {t} out of range for {} tasks",
                    self.n_tasks()
                )));
            }
        }
        let rows = (0..self.n_systems())
            .map(|n| tasks.iter().map(|&t| self.score(n, t)).collect())
            .collect();
        TaskScoreMatrix::new(
            self.system_names.clone(),
            tasks.iter().map(|&t| self.task_names[t].clone()).collect(),
            tasks.iter().map(|&t| self.directions[t]).collect(),
            rows,
        )
    }
}

/// Scores of every system on the instances of one task (`N x K` row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstances {
    name: String,
    direction: Direction,
    instance_names: Vec<String>,
    scores: Vec<f64>,
}

impl TaskInstances {
    pub fn new(
        name: String,
        direction: Direction,
        instance_names: Vec<String>,
        n_systems: usize,
        scores: Vec<f64>,
    ) -> Result<Self> {
        let k = instance_names.len();
        if k == 0 {
            return Err(Error::EmptyInput("instances"));
        }
        if scores.len() != n_systems * k {
            return Err(Error::LengthMismatch {
                expected: n_systems * k,
                got: scores.len(),
            });
        }
        check_unique(&instance_names, "instance")?;
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite {
                what: "score",
                index: i,
            });
        }
        Ok(TaskInstances {
            name,
            direction,
            instance_names,
            scores,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn n_instances(&self) -> usize {
        self.instance_names.len()
    }

    pub fn instance_names(&self) -> &[String] {
        &self.instance_names
    }

    pub fn score(&self, system: usize, instance: usize) -> f64 {
        self.scores[system * self.n_instances() + instance]
    }

    /// Scores of every system on one instance.
    pub fn instance_column(&self, instance: usize, n_systems: usize) -> Vec<f64> {
        (0..n_systems).map(|n| self.score(n, instance)).collect()
    }

    /// All scores of one system across instances.
    pub fn system_row(&self, system: usize) -> &[f64] {
        let k = self.n_instances();
        &self.scores[system * k..(system + 1) * k]
    }

    pub(crate) fn map_scores(&mut self, mut f: impl FnMut(usize, usize, f64) -> f64) {
        let k = self.n_instances();
        for idx in 0..self.scores.len() {
            self.scores[idx] = f(idx / k, idx % k, self.scores[idx]);
        }
    }
}

/// Per-instance scores `s[n][t][k]`; every system is scored on every
/// instance of every task (no missing cells), with `K_t >= 1` per task.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceScoreSet {
    system_names: Vec<String>,
    tasks: Vec<TaskInstances>,
}

impl InstanceScoreSet {
    pub fn new(system_names: Vec<String>, tasks: Vec<TaskInstances>) -> Result<Self> {
        if system_names.is_empty() {
            return Err(Error::EmptyInput("systems"));
        }
        if tasks.is_empty() {
            return Err(Error::EmptyInput("tasks"));
        }
        check_unique(&system_names, "system")?;
        let n = system_names.len();
        for task in &tasks {
            if task.scores.len() != n * task.n_instances() {
                return Err(Error::LengthMismatch {
                    expected: n * task.n_instances(),
                    got: task.scores.len(),
                });
            }
        }
        let names: Vec<String> = tasks.iter().map(|t| t.name.clone()).collect();
        check_unique(&names, "task")?;
        Ok(InstanceScoreSet {
            system_names,
            tasks,
        })
    }

    pub fn n_systems(&self) -> usize {
        self.system_names.len()
    }

    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn tasks(&self) -> &[TaskInstances] {
        &self.tasks
    }

    pub fn task(&self, t: usize) -> &TaskInstances {
        &self.tasks[t]
    }

    pub(crate) fn task_mut(&mut self, t: usize) -> &mut TaskInstances {
        &mut self.tasks[t]
    }

    /// Subset restricted to `tasks` (indices into the task list).
    pub fn select_tasks(&self, tasks: &[usize]) -> Result<InstanceScoreSet> {
        if tasks.is_empty() {
            return Err(Error::EmptyInput("tasks"));
        }
        for &t in tasks {
            if t >= self.n_tasks() {
                return Err(Error::invalid(alloc::format!(
                    "task index {t} out of range for {} tasks",
                    self.n_tasks()
                )));
            }
        }
        InstanceScoreSet::new(
            self.system_names.clone(),
            tasks.iter().map(|&t| self.tasks[t].clone()).collect(),
        )
    }
}

/// Aggregation procedure label, carried on results and used as the CLI
/// method name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Mean,
    SigmaStar,
    OneLevel,
    TwoLevel,
    Borda,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Mean => "mean",
            Method::SigmaStar => "sigma_star",
            Method::OneLevel => "one_level",
            Method::TwoLevel => "two_level",
            Method::Borda => "borda",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "mean" => Some(Method::Mean),
            "sigma_star" => Some(Method::SigmaStar),
            "one_level" => Some(Method::OneLevel),
            "two_level" => Some(Method::TwoLevel),
            "borda" => Some(Method::Borda),
            _ => None,
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// Output of an aggregation procedure.
///
/// `ranking` is always strict (ties in `per_system_value` resolved by lower
/// system index); tied value groups are surfaced in `tie_groups` rather than
/// silently broken.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AggregationResult {
    pub method: Method,
    pub ranking: Ranking,
    /// Rank sums for Borda-based methods (lower = better), means for the
    /// mean method (better per the shared direction).
    pub per_system_value: Vec<f64>,
    /// Groups of system indices whose `per_system_value` tied (size >= 2),
    /// ordered by their best member.
    pub tie_groups: Vec<Vec<usize>>,
}

fn tie_groups_of(values: &[f64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        if end - start >= 2 {
            let mut group: Vec<usize> = order[start..end].to_vec();
            group.sort_unstable();
            groups.push(group);
        }
        start = end;
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Collapses instance-level scores to a task-level matrix by the arithmetic
/// mean over each task's instances; directions carry over.
pub fn mean_instance_aggregate(data: &InstanceScoreSet) -> TaskScoreMatrix {
    let n = data.n_systems();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|sys| {
            data.tasks()
                .iter()
                .map(|task| {
                    let row = task.system_row(sys);
                    row.iter().sum::<f64>() / row.len() as f64
                })
                .collect()
        })
        .collect();
    TaskScoreMatrix::new(
        data.system_names().to_vec(),
        data.tasks().iter().map(|t| t.name().into()).collect(),
        data.tasks().iter().map(|t| t.direction()).collect(),
        rows,
    )
    .expect("means of a valid InstanceScoreSet form a valid matrix")
}

/// Ranks systems by their mean score across tasks.
///
/// All tasks must share one direction; mixing higher-better and lower-better
/// columns in a raw-score average is meaningless and rejected.
pub fn mean_task_aggregate(m: &TaskScoreMatrix) -> Result<AggregationResult> {
    let direction = m.directions()[0];
    if m.directions().iter().any(|&d| d != direction) {
        return Err(Error::MixedDirections);
    }
    let t = m.n_tasks() as f64;
    let means: Vec<f64> = (0..m.n_systems())
        .map(|n| (0..m.n_tasks()).map(|j| m.score(n, j)).sum::<f64>() / t)
        .collect();
    let ranking = rank_from_scores(&means, direction, TiePolicy::StableIndex)?;
    Ok(AggregationResult {
        method: Method::Mean,
        ranking,
        tie_groups: tie_groups_of(&means),
        per_system_value: means,
    })
}

/// Borda's count: sums each system's ranks across the input rankings and
/// ranks the sums ascending (smaller rank sum = better).
///
/// Inputs may carry fractional ties; equal rank sums are flagged in
/// `tie_groups` and resolved by lower system index in the output ranking.
pub fn borda(rankings: &[Ranking]) -> Result<AggregationResult> {
    let first = rankings.first().ok_or(Error::EmptyInput("rankings"))?;
    let n = first.n_systems();
    let mut sums = alloc::vec![0.0f64; n];
    for ranking in rankings {
        if ranking.n_systems() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: ranking.n_systems(),
            });
        }
        for (sum, &rank) in sums.iter_mut().zip(ranking.ranks()) {
            *sum += rank;
        }
    }
    let ranking = ascending_ranks(&sums)?;
    Ok(AggregationResult {
        method: Method::Borda,
        ranking,
        tie_groups: tie_groups_of(&sums),
        per_system_value: sums,
    })
}

/// Borda over the per-task rankings of a score matrix.
///
/// Each task is ranked with its own direction, so metrics of different
/// orientations and scales mix freely.
pub fn sigma_star(m: &TaskScoreMatrix, tie_policy: TiePolicy) -> Result<AggregationResult> {
    let per_task: Result<Vec<Ranking>> = (0..m.n_tasks())
        .map(|t| rank_from_scores(&m.task_column(t), m.directions()[t], tie_policy))
        .collect();
    let mut result = borda(&per_task?)?;
    result.method = Method::SigmaStar;
    Ok(result)
}

fn instance_rankings(data: &InstanceScoreSet, tie_policy: TiePolicy) -> Result<Vec<Vec<Ranking>>> {
    let n = data.n_systems();
    let per_task = |task: &TaskInstances| -> Result<Vec<Ranking>> {
        (0..task.n_instances())
            .map(|k| rank_from_scores(&task.instance_column(k, n), task.direction(), tie_policy))
            .collect()
    };
    #[cfg(feature = "parallel")]
    {
        data.tasks().par_iter().map(per_task).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.tasks().iter().map(per_task).collect()
    }
}

/// One Borda over all per-instance rankings pooled across tasks.
///
/// Tasks with more instances contribute proportionally more rankings.
pub fn sigma_one_level(
    data: &InstanceScoreSet,
    tie_policy: TiePolicy,
) -> Result<AggregationResult> {
    let pooled: Vec<Ranking> = instance_rankings(data, tie_policy)?
        .into_iter()
        .flatten()
        .collect();
    let mut result = borda(&pooled)?;
    result.method = Method::OneLevel;
    Ok(result)
}

/// Two-stage Borda: per task over its instances, then over the per-task
/// results. Every task carries equal weight regardless of its instance
/// count.
pub fn sigma_two_level(
    data: &InstanceScoreSet,
    tie_policy: TiePolicy,
) -> Result<AggregationResult> {
    let per_task: Result<Vec<Ranking>> = instance_rankings(data, tie_policy)?
        .into_iter()
        .map(|rankings| borda(&rankings).map(|r| r.ranking))
        .collect();
    let mut result = borda(&per_task?)?;
    result.method = Method::TwoLevel;
    Ok(result)
}

/// How exactly-equal scores are credited in [`pairwise_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairwiseTieMode {
    /// Ties count for the first system (the `>=` convention). Order-dependent:
    /// comparing identical sequences yields a win for the first argument.
    #[default]
    CreditFirst,
    /// Ties contribute 0.5 to each side; symmetric in the arguments.
    SplitHalf,
}

/// Head-to-head verdict of [`pairwise_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ABetter,
    BBetter,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseOutcome {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub verdict: Verdict,
}

/// Compares two systems by counting on how many of the `K` paired scores
/// each one does better; the verdict goes to the larger count.
///
/// Under [`PairwiseTieMode::CreditFirst`] the counts are integers with exact
/// ties credited to `a` (`lambda_a` counts `a_k >= b_k` for higher-better
/// metrics, `a_k <= b_k` for lower-better, and `lambda_b = K - lambda_a`).
pub fn pairwise_compare(
    a: &[f64],
    b: &[f64],
    direction: Direction,
    tie_mode: PairwiseTieMode,
) -> Result<PairwiseOutcome> {
    if a.is_empty() {
        return Err(Error::EmptyInput("scores"));
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    for (i, &s) in a.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                what: "score",
                index: i,
            });
        }
    }
    for (i, &s) in b.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                what: "score",
                index: i,
            });
        }
    }
    let mut lambda_a = 0.0;
    for (&sa, &sb) in a.iter().zip(b) {
        let a_wins = match direction {
            Direction::HigherBetter => sa > sb,
            Direction::LowerBetter => sa < sb,
        };
        if a_wins {
            lambda_a += 1.0;
        } else if sa == sb {
            lambda_a += match tie_mode {
                PairwiseTieMode::CreditFirst => 1.0,
                PairwiseTieMode::SplitHalf => 0.5,
            };
        }
    }
    let lambda_b = a.len() as f64 - lambda_a;
    let verdict = if lambda_a > lambda_b {
        Verdict::ABetter
    } else if lambda_b > lambda_a {
        Verdict::BBetter
    } else {
        Verdict::Tie
    };
    Ok(PairwiseOutcome {
        lambda_a,
        lambda_b,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three systems on six lower-better tasks; the standard worked example
    /// where the mean and the rank-based procedures disagree.
    pub(crate) fn paradox_matrix() -> TaskScoreMatrix {
        TaskScoreMatrix::new(
            alloc::vec!["A".into(), "B".into(), "C".into()],
            (1..=6).map(|t| alloc::format!("task{t}")).collect(),
            alloc::vec![Direction::LowerBetter; 6],
            alloc::vec![
                alloc::vec![0.3, 5.0, 10.0, 0.02, 1.0, 0.4],
                alloc::vec![0.1, 4.0, 13.0, 0.01, 2.2, 0.3],
                alloc::vec![0.0, 3.0, 15.0, 0.03, 2.0, 0.2],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mean_on_paradox_matrix_prefers_a() {
        let result = mean_task_aggregate(&paradox_matrix()).unwrap();
        assert_eq!(result.ranking.ranks(), &[1.0, 2.0, 3.0]);
        let sums: Vec<f64> = result.per_system_value.iter().map(|m| m * 6.0).collect();
        assert!((sums[0] - 16.72).abs() < 1e-12);
        assert!((sums[1] - 19.61).abs() < 1e-12);
        assert!((sums[2] - 20.23).abs() < 1e-12);
    }

    #[test]
    fn sigma_star_on_paradox_matrix_prefers_c() {
        let result = sigma_star(&paradox_matrix(), TiePolicy::Fractional).unwrap();
        assert_eq!(result.per_system_value, alloc::vec![13.0, 12.0, 11.0]);
        assert_eq!(result.ranking.ranks(), &[3.0, 2.0, 1.0]);
        assert!(result.tie_groups.is_empty());
    }

    #[test]
    fn pairwise_on_paradox_matrix_is_cyclic() {
        let m = paradox_matrix();
        let row = |n: usize| -> Vec<f64> { (0..6).map(|t| m.score(n, t)).collect() };
        let ab = pairwise_compare(
            &row(0),
            &row(1),
            Direction::LowerBetter,
            PairwiseTieMode::CreditFirst,
        )
        .unwrap();
        assert_eq!((ab.lambda_a, ab.lambda_b), (2.0, 4.0));
        assert_eq!(ab.verdict, Verdict::BBetter);

        let bc = pairwise_compare(
            &row(1),
            &row(2),
            Direction::LowerBetter,
            PairwiseTieMode::CreditFirst,
        )
        .unwrap();
        assert_eq!(bc.verdict, Verdict::BBetter); // C beats B

        let ac = pairwise_compare(
            &row(0),
            &row(2),
            Direction::LowerBetter,
            PairwiseTieMode::CreditFirst,
        )
        .unwrap();
        assert_eq!((ac.lambda_a, ac.lambda_b), (3.0, 3.0));
        assert_eq!(ac.verdict, Verdict::Tie);
    }

    #[test]
    fn pairwise_identical_sequences() {
        let s = [1.0, 2.0, 3.0];
        let out = pairwise_compare(
            &s,
            &s,
            Direction::HigherBetter,
            PairwiseTieMode::CreditFirst,
        )
        .unwrap();
        assert_eq!((out.lambda_a, out.lambda_b), (3.0, 0.0));
        assert_eq!(out.verdict, Verdict::ABetter);

        let split =
            pairwise_compare(&s, &s, Direction::HigherBetter, PairwiseTieMode::SplitHalf).unwrap();
        assert_eq!((split.lambda_a, split.lambda_b), (1.5, 1.5));
        assert_eq!(split.verdict, Verdict::Tie);
    }

    #[test]
    fn pairwise_rejects_bad_shapes() {
        assert!(pairwise_compare(
            &[],
            &[],
            Direction::HigherBetter,
            PairwiseTieMode::CreditFirst
        )
        .is_err());
        assert!(pairwise_compare(
            &[1.0],
            &[1.0, 2.0],
            Direction::HigherBetter,
            PairwiseTieMode::CreditFirst
        )
        .is_err());
    }

    #[test]
    fn borda_identity_and_ties() {
        let r = Ranking::from_permutation(&[2, 1, 3]).unwrap();
        let out = borda(core::slice::from_ref(&r)).unwrap();
        assert_eq!(out.ranking.ranks(), r.ranks());

        let a = Ranking::from_permutation(&[1, 2]).unwrap();
        let b = Ranking::from_permutation(&[2, 1]).unwrap();
        let tied = borda(&[a, b]).unwrap();
        assert_eq!(tied.per_system_value, alloc::vec![3.0, 3.0]);
        assert_eq!(tied.tie_groups, alloc::vec![alloc::vec![0, 1]]);
        assert_eq!(tied.ranking.ranks(), &[1.0, 2.0]);
    }

    #[test]
    fn mean_rejects_mixed_directions() {
        let m = TaskScoreMatrix::new(
            alloc::vec!["A".into(), "B".into()],
            alloc::vec!["t1".into(), "t2".into()],
            alloc::vec![Direction::HigherBetter, Direction::LowerBetter],
            alloc::vec![alloc::vec![1.0, 2.0], alloc::vec![2.0, 1.0]],
        )
        .unwrap();
        assert_eq!(mean_task_aggregate(&m), Err(Error::MixedDirections));
    }

    #[test]
    fn mean_single_task_matches_rank_from_scores() {
        let m = TaskScoreMatrix::new(
            alloc::vec!["A".into(), "B".into(), "C".into()],
            alloc::vec!["t".into()],
            alloc::vec![Direction::HigherBetter],
            alloc::vec![alloc::vec![0.1], alloc::vec![0.9], alloc::vec![0.5]],
        )
        .unwrap();
        let result = mean_task_aggregate(&m).unwrap();
        let direct = rank_from_scores(
            &[0.1, 0.9, 0.5],
            Direction::HigherBetter,
            TiePolicy::StableIndex,
        )
        .unwrap();
        assert_eq!(result.ranking.ranks(), direct.ranks());
    }

    #[test]
    fn mean_two_by_two() {
        let m = TaskScoreMatrix::new(
            alloc::vec!["A".into(), "B".into()],
            alloc::vec!["t1".into(), "t2".into()],
            alloc::vec![Direction::HigherBetter; 2],
            alloc::vec![alloc::vec![1.0, 1.0], alloc::vec![0.0, 0.0]],
        )
        .unwrap();
        let result = mean_task_aggregate(&m).unwrap();
        assert_eq!(result.ranking.ranks(), &[1.0, 2.0]);
    }

    fn uniform_instances(per_task: &[(&str, Vec<Vec<f64>>)]) -> InstanceScoreSet {
        let n = per_task[0].1.len();
        let tasks = per_task
            .iter()
            .map(|(name, rows)| {
                let k = rows[0].len();
                let mut scores = Vec::new();
                for row in rows {
                    scores.extend_from_slice(row);
                }
                TaskInstances::new(
                    String::from(*name),
                    Direction::HigherBetter,
                    (0..k).map(|i| alloc::format!("i{i}")).collect(),
                    n,
                    scores,
                )
                .unwrap()
            })
            .collect();
        InstanceScoreSet::new((0..n).map(|i| alloc::format!("s{i}")).collect(), tasks).unwrap()
    }

    #[test]
    fn mean_instance_aggregate_averages() {
        let data = uniform_instances(&[
            ("t1", alloc::vec![alloc::vec![1.0, 3.0], alloc::vec![0.1, 0.3]]),
            ("t2", alloc::vec![alloc::vec![0.2], alloc::vec![0.4]]),
        ]);
        let m = mean_instance_aggregate(&data);
        assert_eq!(m.score(0, 0), 2.0);
        assert!((m.score(1, 0) - 0.2).abs() < 1e-15);
        // K = 1 is the identity on that column.
        assert_eq!(m.score(0, 1), 0.2);
        assert_eq!(m.score(1, 1), 0.4);
    }

    #[test]
    fn one_and_two_level_collapse_for_single_task() {
        let data = uniform_instances(&[(
            "t1",
            alloc::vec![
                alloc::vec![0.9, 0.8, 0.7],
                alloc::vec![0.5, 0.6, 0.95],
                alloc::vec![0.1, 0.2, 0.3],
            ],
        )]);
        let one = sigma_one_level(&data, TiePolicy::Fractional).unwrap();
        let two = sigma_two_level(&data, TiePolicy::Fractional).unwrap();
        assert_eq!(one.ranking.ranks(), two.ranking.ranks());
    }

    #[test]
    fn unbalanced_instance_counts_weight_differently() {
        // Task 1: ten instances all preferring system 0; task 2: one
        // instance preferring system 1.
        let t1_rows = alloc::vec![alloc::vec![1.0; 10], alloc::vec![0.0; 10]];
        let t2_rows = alloc::vec![alloc::vec![0.0], alloc::vec![1.0]];
        let data = uniform_instances(&[("t1", t1_rows), ("t2", t2_rows)]);

        let one = sigma_one_level(&data, TiePolicy::Fractional).unwrap();
        assert_eq!(one.ranking.ranks(), &[1.0, 2.0]);
        assert_eq!(one.per_system_value, alloc::vec![12.0, 21.0]);

        let two = sigma_two_level(&data, TiePolicy::Fractional).unwrap();
        assert_eq!(two.per_system_value, alloc::vec![3.0, 3.0]);
        assert_eq!(two.tie_groups, alloc::vec![alloc::vec![0, 1]]);
        assert_eq!(two.ranking.ranks(), &[1.0, 2.0]);
    }

    #[test]
    fn unanimous_instances_reproduce_the_shared_ranking() {
        let rows = alloc::vec![
            alloc::vec![0.2, 0.3],
            alloc::vec![0.9, 0.8],
            alloc::vec![0.5, 0.6],
        ];
        let data = uniform_instances(&[("t1", rows.clone()), ("t2", rows)]);
        for result in [
            sigma_one_level(&data, TiePolicy::Fractional).unwrap(),
            sigma_two_level(&data, TiePolicy::Fractional).unwrap(),
        ] {
            assert_eq!(result.ranking.ranks(), &[3.0, 1.0, 2.0]);
        }
    }
}
