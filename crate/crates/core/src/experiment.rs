//! Seeded, replicated robustness experiments.
//!
//! Each runner sweeps a parameter grid, evaluates a set of aggregation
//! methods on freshly generated (and possibly corrupted) synthetic data, and
//! reports the mean and standard deviation of the measured quantity per grid
//! cell. Reports are fully determined by `(config, seed)`: every replication
//! draws from its own keyed RNG substream, so results are identical whether
//! replications run on one thread or many (enable the `parallel` feature to
//! use a thread pool).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::aggregate::{
    mean_instance_aggregate, mean_task_aggregate, sigma_one_level, sigma_star, sigma_two_level,
    AggregationResult, InstanceScoreSet, Method, TaskScoreMatrix,
};
use crate::dispersion::{
    pairwise_dispersion, performance_dispersion, random_baseline, sandwich_check, DispersionReport,
};
use crate::error::{Error, Result};
use crate::kemeny::{kemeny_branch_bound, BRANCH_BOUND_DEFAULT_LIMIT};
use crate::math;
use crate::ranking::{
    kendall_tau, normalized_kendall_distance, rank_from_scores, Ranking, TiePolicy,
};
use crate::rng::{
    derive_seed, gen_index, keyed_rng, sample_distinct, DOMAIN_REPLICATION, DOMAIN_SUBSET,
    DOMAIN_TASK_SELECT,
};
use crate::synth::{
    corrupt_reverse, corrupt_scale, generate_scores, ground_truth_ranking, CorruptionSpec,
    SyntheticConfig,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default replication count for the synthetic experiments.
pub const DEFAULT_REPLICATIONS: u32 = 50;
/// Default sample count for the task-subset experiment.
pub const DEFAULT_SUBSET_SAMPLES: u32 = 100;

/// One measured grid cell: parameter values, method, and the replication
/// statistics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentCell {
    pub params: Vec<(String, f64)>,
    pub method: String,
    pub mean: f64,
    pub std: f64,
    pub n: u32,
}

/// Tabular output of one experiment run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentReport {
    /// One of `manipulation`, `scaling`, `subset`.
    pub experiment: String,
    /// Named parameter grids, outermost first.
    pub axes: Vec<(String, Vec<f64>)>,
    /// One cell per grid point and method, in grid order.
    pub cells: Vec<ExperimentCell>,
    pub n_replications: u32,
    pub seed: u64,
    pub method_labels: Vec<String>,
}

impl ExperimentReport {
    /// The cell for exact parameter values and method, if present.
    pub fn cell(&self, params: &[(&str, f64)], method: Method) -> Option<&ExperimentCell> {
        self.cells.iter().find(|c| {
            c.method == method.label()
                && c.params.len() == params.len()
                && c.params
                    .iter()
                    .zip(params)
                    .all(|((name, value), (want_name, want_value))| {
                        name == want_name && value == want_value
                    })
        })
    }
}

fn check_methods(methods: &[Method]) -> Result<()> {
    if methods.is_empty() {
        return Err(Error::EmptyInput("methods"));
    }
    if methods.contains(&Method::Borda) {
        return Err(Error::invalid(
            "experiments take the named procedures (mean, sigma_star, one_level, two_level)",
        ));
    }
    Ok(())
}

fn is_rank_based(method: Method) -> bool {
    matches!(
        method,
        Method::SigmaStar | Method::OneLevel | Method::TwoLevel
    )
}

/// Runs one aggregation method on instance-level data.
fn eval_instance_method(
    method: Method,
    data: &InstanceScoreSet,
    tie_policy: TiePolicy,
) -> Result<AggregationResult> {
    match method {
        Method::Mean => mean_task_aggregate(&mean_instance_aggregate(data)),
        Method::SigmaStar => sigma_star(&mean_instance_aggregate(data), tie_policy),
        Method::OneLevel => sigma_one_level(data, tie_policy),
        Method::TwoLevel => sigma_two_level(data, tie_policy),
        Method::Borda => Err(Error::invalid("borda is not a standalone experiment method")),
    }
}

fn map_jobs<J, R, F>(jobs: &[J], f: F) -> Vec<R>
where
    J: Sync,
    R: Send,
    F: Fn(&J) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        jobs.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(f).collect()
    }
}

/// Robustness to adversarial task reversal.
///
/// For every `(phi, c)` grid point and replication: generate fresh scores
/// with dimensions from `base`, reverse-corrupt `c` randomly selected tasks,
/// aggregate with each method, and measure the normalized Kendall distance
/// to the ground-truth ranking. `base.phi` and `base.seed` are overridden by
/// the grid and the per-replication seeds derived from `seed`.
pub fn run_manipulation_robustness(
    base: &SyntheticConfig,
    phis: &[f64],
    corrupted_counts: &[usize],
    methods: &[Method],
    n_reps: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    check_methods(methods)?;
    if phis.is_empty() {
        return Err(Error::EmptyInput("phis"));
    }
    if corrupted_counts.is_empty() {
        return Err(Error::EmptyInput("corrupted_counts"));
    }
    if n_reps < 1 {
        return Err(Error::invalid("n_reps must be >= 1"));
    }
    for &c in corrupted_counts {
        if c > base.n_tasks {
            return Err(Error::invalid(alloc::format!(
                "corrupted count {c} exceeds {} tasks",
                base.n_tasks
            )));
        }
    }
    for &phi in phis {
        SyntheticConfig { phi, ..base.clone() }.validate()?;
    }

    let truth = ground_truth_ranking(base.n_systems);
    let mut jobs = Vec::new();
    for (pi, &phi) in phis.iter().enumerate() {
        for (ci, &c) in corrupted_counts.iter().enumerate() {
            for rep in 0..n_reps {
                jobs.push((pi, phi, ci, c, rep));
            }
        }
    }

    let errors: Vec<Result<Vec<f64>>> = map_jobs(&jobs, |&(pi, phi, ci, c, rep)| {
        let rep_seed = derive_seed(
            seed,
            &[DOMAIN_REPLICATION, pi as u64, ci as u64, rep as u64],
        );
        let cfg = SyntheticConfig {
            phi,
            seed: rep_seed,
            ..base.clone()
        };
        let data = generate_scores(&cfg)?;
        let mut select_rng = keyed_rng(rep_seed, &[DOMAIN_TASK_SELECT]);
        let tasks = sample_distinct(&mut select_rng, base.n_tasks, c);
        let corrupted =
            corrupt_reverse(&data, &CorruptionSpec::reverse(tasks), rep_seed, base.beta)?;
        methods
            .iter()
            .map(|&m| {
                let result = eval_instance_method(m, &corrupted, TiePolicy::Fractional)?;
                normalized_kendall_distance(&result.ranking, &truth)
            })
            .collect()
    });

    let mut cells = Vec::new();
    let mut job_index = 0;
    let mut per_rep = alloc::vec![Vec::with_capacity(n_reps as usize); methods.len()];
    for &phi in phis {
        for &c in corrupted_counts {
            for row in &mut per_rep {
                row.clear();
            }
            for _ in 0..n_reps {
                let job_errors = errors[job_index].as_ref().map_err(Error::clone)?;
                for (mi, &e) in job_errors.iter().enumerate() {
                    per_rep[mi].push(e);
                }
                job_index += 1;
            }
            for (mi, &method) in methods.iter().enumerate() {
                let (mean, std) = math::mean_std(&per_rep[mi]);
                cells.push(ExperimentCell {
                    params: alloc::vec![
                        (String::from("phi"), phi),
                        (String::from("corrupted"), c as f64),
                    ],
                    method: method.label().to_string(),
                    mean,
                    std,
                    n: n_reps,
                });
            }
        }
    }

    Ok(ExperimentReport {
        experiment: String::from("manipulation"),
        axes: alloc::vec![
            (String::from("phi"), phis.to_vec()),
            (
                String::from("corrupted"),
                corrupted_counts.iter().map(|&c| c as f64).collect(),
            ),
        ],
        cells,
        n_replications: n_reps,
        seed,
        method_labels: methods.iter().map(|m| m.label().to_string()).collect(),
    })
}

/// Robustness to rescaling one misleading task.
///
/// Per replication, one randomly selected task is reverse-corrupted and then
/// multiplied by each factor `x`, so the misleading task's weight in raw
/// score space grows with `x` while every induced ranking stays the same
/// (`x = 1` is plain single-task reversal). Rank-based methods are asserted
/// bit-identical across all factors within each replication, not just
/// measured; the error of the mean procedure traces how score rescaling
/// alone redirects its output.
pub fn run_scaling_robustness(
    base: &SyntheticConfig,
    scale_factors: &[f64],
    methods: &[Method],
    n_reps: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    check_methods(methods)?;
    if scale_factors.is_empty() {
        return Err(Error::EmptyInput("scale_factors"));
    }
    if n_reps < 1 {
        return Err(Error::invalid("n_reps must be >= 1"));
    }
    for &x in scale_factors {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::invalid(alloc::format!(
                "scale factor must be positive and finite, got {x}"
            )));
        }
    }
    base.validate()?;

    let truth = ground_truth_ranking(base.n_systems);
    let jobs: Vec<u32> = (0..n_reps).collect();
    let errors: Vec<Result<Vec<f64>>> = map_jobs(&jobs, |&rep| {
        let rep_seed = derive_seed(seed, &[DOMAIN_REPLICATION, rep as u64]);
        let cfg = SyntheticConfig {
            seed: rep_seed,
            ..base.clone()
        };
        let data = generate_scores(&cfg)?;
        let mut select_rng = keyed_rng(rep_seed, &[DOMAIN_TASK_SELECT]);
        let task = gen_index(&mut select_rng, base.n_tasks);
        let reversed = corrupt_reverse(
            &data,
            &CorruptionSpec::reverse(alloc::vec![task]),
            rep_seed,
            base.beta,
        )?;

        let mut out = Vec::with_capacity(scale_factors.len() * methods.len());
        let mut reference: Vec<Option<Ranking>> = alloc::vec![None; methods.len()];
        for &x in scale_factors {
            let scaled = corrupt_scale(&reversed, &CorruptionSpec::scale(alloc::vec![task], x))?;
            for (mi, &m) in methods.iter().enumerate() {
                let result = eval_instance_method(m, &scaled, TiePolicy::Fractional)?;
                if is_rank_based(m) {
                    match &reference[mi] {
                        None => reference[mi] = Some(result.ranking.clone()),
                        Some(r) => assert_eq!(
                            r.ranks(),
                            result.ranking.ranks(),
                            "rank-based output changed under rescaling"
                        ),
                    }
                }
                out.push(normalized_kendall_distance(&result.ranking, &truth)?);
            }
        }
        Ok(out)
    });

    let mut samples =
        alloc::vec![alloc::vec![Vec::with_capacity(n_reps as usize); methods.len()]; scale_factors.len()];
    for job in &errors {
        let row = job.as_ref().map_err(Error::clone)?;
        let mut idx = 0;
        for per_factor in samples.iter_mut() {
            for per_method in per_factor.iter_mut() {
                per_method.push(row[idx]);
                idx += 1;
            }
        }
    }

    let mut cells = Vec::new();
    for (xi, &x) in scale_factors.iter().enumerate() {
        for (mi, &method) in methods.iter().enumerate() {
            let (mean, std) = math::mean_std(&samples[xi][mi]);
            cells.push(ExperimentCell {
                params: alloc::vec![(String::from("scale"), x)],
                method: method.label().to_string(),
                mean,
                std,
                n: n_reps,
            });
        }
    }

    Ok(ExperimentReport {
        experiment: String::from("scaling"),
        axes: alloc::vec![(String::from("scale"), scale_factors.to_vec())],
        cells,
        n_replications: n_reps,
        seed,
        method_labels: methods.iter().map(|m| m.label().to_string()).collect(),
    })
}

/// Input granularity for [`run_subset_robustness`].
#[derive(Debug, Clone, Copy)]
pub enum SubsetData<'a> {
    Task(&'a TaskScoreMatrix),
    Instance(&'a InstanceScoreSet),
}

impl SubsetData<'_> {
    fn n_tasks(&self) -> usize {
        match self {
            SubsetData::Task(m) => m.n_tasks(),
            SubsetData::Instance(d) => d.n_tasks(),
        }
    }

    fn eval(&self, method: Method, tasks: Option<&[usize]>) -> Result<Ranking> {
        let result = match (self, tasks) {
            (SubsetData::Task(m), Some(idx)) => {
                evaluate_method(&SubsetData::Task(&m.select_tasks(idx)?), method, TiePolicy::Fractional)?
            }
            (SubsetData::Instance(d), Some(idx)) => evaluate_method(
                &SubsetData::Instance(&d.select_tasks(idx)?),
                method,
                TiePolicy::Fractional,
            )?,
            (data, None) => evaluate_method(data, method, TiePolicy::Fractional)?,
        };
        Ok(result.ranking)
    }
}

/// Runs one aggregation method on either input granularity.
///
/// On task-level data only `mean` and `sigma_star` apply; on instance-level
/// data `mean` and `sigma_star` operate on the per-task instance means while
/// `one_level` and `two_level` use the instance rankings directly.
pub fn evaluate_method(
    data: &SubsetData<'_>,
    method: Method,
    tie_policy: TiePolicy,
) -> Result<AggregationResult> {
    match data {
        SubsetData::Task(m) => match method {
            Method::Mean => mean_task_aggregate(m),
            Method::SigmaStar => sigma_star(m, tie_policy),
            _ => Err(Error::invalid(alloc::format!(
                "method {method} needs instance-level data"
            ))),
        },
        SubsetData::Instance(d) => eval_instance_method(method, d, tie_policy),
    }
}

/// Stability under task subsampling.
///
/// For each subset size `t`, draws `n_samples` uniform task subsets without
/// replacement, recomputes each method's ranking on the subset, and records
/// the Kendall tau correlation against the same method's full-task ranking.
pub fn run_subset_robustness(
    data: SubsetData<'_>,
    methods: &[Method],
    subset_sizes: &[usize],
    n_samples: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    check_methods(methods)?;
    if subset_sizes.is_empty() {
        return Err(Error::EmptyInput("subset_sizes"));
    }
    if n_samples < 1 {
        return Err(Error::invalid("n_samples must be >= 1"));
    }
    let t_total = data.n_tasks();
    for &t in subset_sizes {
        if t < 1 || t > t_total {
            return Err(Error::invalid(alloc::format!(
                "subset size {t} outside [1, {t_total}]"
            )));
        }
    }

    let full: Vec<Ranking> = methods
        .iter()
        .map(|&m| data.eval(m, None))
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (si, &size) in subset_sizes.iter().enumerate() {
        let mut taus = alloc::vec![Vec::with_capacity(n_samples as usize); methods.len()];
        for sample in 0..n_samples {
            let mut rng = keyed_rng(seed, &[DOMAIN_SUBSET, si as u64, sample as u64]);
            let tasks = sample_distinct(&mut rng, t_total, size);
            for (mi, &m) in methods.iter().enumerate() {
                let subset_ranking = data.eval(m, Some(&tasks))?;
                taus[mi].push(kendall_tau(&subset_ranking, &full[mi])?);
            }
        }
        for (mi, &method) in methods.iter().enumerate() {
            let (mean, std) = math::mean_std(&taus[mi]);
            cells.push(ExperimentCell {
                params: alloc::vec![(String::from("subset_size"), size as f64)],
                method: method.label().to_string(),
                mean,
                std,
                n: n_samples,
            });
        }
    }

    Ok(ExperimentReport {
        experiment: String::from("subset"),
        axes: alloc::vec![(
            String::from("subset_size"),
            subset_sizes.iter().map(|&s| s as f64).collect(),
        )],
        cells,
        n_replications: n_samples,
        seed,
        method_labels: methods.iter().map(|m| m.label().to_string()).collect(),
    })
}

/// Overlap of two results' top and bottom ranks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgreementSummary {
    /// K -> |top-K(a) intersect top-K(b)| / K.
    pub top_k_agreement: BTreeMap<usize, f64>,
    /// K -> overlap of the K worst-ranked systems.
    pub last_k_agreement: BTreeMap<usize, f64>,
    /// Kendall tau between the two full rankings.
    pub full_tau: f64,
    /// K values where a tied value group straddles the top-K boundary in
    /// either input, so the set membership depended on the index tie-break.
    pub tie_straddled_ks: Vec<usize>,
}

fn straddles(result: &AggregationResult, k: usize) -> bool {
    result.tie_groups.iter().any(|group| {
        let inside = group
            .iter()
            .filter(|&&sys| result.ranking.rank_of(sys) <= k as f64)
            .count();
        inside > 0 && inside < group.len()
    })
}

/// Compares which systems two aggregation results rank at the top and at the
/// bottom, per cutoff `K`, plus the overall rank correlation.
pub fn run_agreement_analysis(
    a: &AggregationResult,
    b: &AggregationResult,
    ks: &[usize],
) -> Result<AgreementSummary> {
    let n = a.ranking.n_systems();
    if b.ranking.n_systems() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.ranking.n_systems(),
        });
    }
    for &k in ks {
        if k < 1 || k > n {
            return Err(Error::invalid(alloc::format!("K = {k} outside [1, {n}]")));
        }
    }

    let overlap = |k: usize, from_top: bool| -> f64 {
        let within = |r: &Ranking, sys: usize| {
            if from_top {
                r.rank_of(sys) <= k as f64
            } else {
                r.rank_of(sys) > (n - k) as f64
            }
        };
        let count = (0..n)
            .filter(|&sys| within(&a.ranking, sys) && within(&b.ranking, sys))
            .count();
        count as f64 / k as f64
    };

    let mut top_k_agreement = BTreeMap::new();
    let mut last_k_agreement = BTreeMap::new();
    let mut tie_straddled_ks = Vec::new();
    for &k in ks {
        top_k_agreement.insert(k, overlap(k, true));
        last_k_agreement.insert(k, overlap(k, false));
        if straddles(a, k) || straddles(b, k) {
            tie_straddled_ks.push(k);
        }
    }
    tie_straddled_ks.sort_unstable();
    tie_straddled_ks.dedup();

    Ok(AgreementSummary {
        top_k_agreement,
        last_k_agreement,
        full_tau: kendall_tau(&a.ranking, &b.ranking)?,
        tie_straddled_ks,
    })
}

/// Dispersion analysis of a task-level matrix.
///
/// Builds the per-task rankings, evaluates the dispersion of the rank-based
/// and mean candidates against them, adds a random-permutation baseline, and
/// (for `N` small enough for the exact solver) the exact consensus and the
/// sandwich bound.
pub fn run_dispersion_analysis(
    m: &TaskScoreMatrix,
    tie_policy: TiePolicy,
    n_random: u32,
    seed: u64,
) -> Result<DispersionReport> {
    let per_task: Vec<Ranking> = (0..m.n_tasks())
        .map(|t| rank_from_scores(&m.task_column(t), m.directions()[t], tie_policy))
        .collect::<Result<_>>()?;

    let mut performance = BTreeMap::new();
    let star = sigma_star(m, tie_policy)?;
    performance.insert(
        Method::SigmaStar.label().to_string(),
        performance_dispersion(&star.ranking, &per_task)? as f64,
    );
    let mean = mean_task_aggregate(m)?;
    performance.insert(
        Method::Mean.label().to_string(),
        performance_dispersion(&mean.ranking, &per_task)? as f64,
    );

    let mut sandwich_ok = None;
    if m.n_systems() <= BRANCH_BOUND_DEFAULT_LIMIT {
        let exact = kemeny_branch_bound(&per_task, BRANCH_BOUND_DEFAULT_LIMIT)?;
        performance.insert(String::from("kemeny"), exact.objective);
        if per_task.len() >= 2 {
            sandwich_ok = Some(sandwich_check(&per_task)?.ok);
        }
    }

    let (baseline_mean, baseline_std) = random_baseline(&per_task, n_random, seed)?;
    Ok(DispersionReport {
        performance,
        pairwise_mean: if per_task.len() >= 2 {
            pairwise_dispersion(&per_task)?
        } else {
            0.0
        },
        random_baseline_mean: baseline_mean,
        random_baseline_std: baseline_std,
        n_random,
        sandwich_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::borda;
    use crate::ranking::Direction;

    fn quick_base(n: usize, t: usize, k: usize) -> SyntheticConfig {
        SyntheticConfig::new(n, t, k, 1.0, 0)
    }

    const ALL_METHODS: [Method; 4] = [
        Method::Mean,
        Method::SigmaStar,
        Method::OneLevel,
        Method::TwoLevel,
    ];

    #[test]
    fn manipulation_clean_regime_has_tiny_error() {
        let report = run_manipulation_robustness(
            &quick_base(20, 20, 20),
            &[1.0],
            &[0],
            &ALL_METHODS,
            5,
            42,
        )
        .unwrap();
        for cell in &report.cells {
            assert!(cell.mean < 0.05, "{} error {}", cell.method, cell.mean);
        }
    }

    #[test]
    fn manipulation_fully_corrupted_regime_reverses() {
        let report = run_manipulation_robustness(
            &quick_base(20, 20, 20),
            &[1.0],
            &[20],
            &ALL_METHODS,
            5,
            42,
        )
        .unwrap();
        for cell in &report.cells {
            assert!(cell.mean > 0.9, "{} error {}", cell.method, cell.mean);
        }
    }

    #[test]
    fn manipulation_error_is_monotone_in_corruption() {
        let counts: Vec<usize> = (0..=10).map(|c| 2 * c).collect();
        let report = run_manipulation_robustness(
            &quick_base(10, 20, 5),
            &[0.5],
            &counts,
            &[Method::Mean, Method::OneLevel, Method::TwoLevel],
            30,
            7,
        )
        .unwrap();
        for method in [Method::Mean, Method::OneLevel, Method::TwoLevel] {
            let mut previous: Option<(f64, f64)> = None;
            for &c in &counts {
                let cell = report
                    .cell(&[("phi", 0.5), ("corrupted", c as f64)], method)
                    .unwrap();
                if let Some((prev_mean, prev_se)) = previous {
                    let se = cell.std / (cell.n as f64).sqrt();
                    let slack = 2.0 * (se + prev_se);
                    assert!(
                        cell.mean >= prev_mean - slack,
                        "{method} error decreased: {prev_mean} -> {} at c={c}",
                        cell.mean
                    );
                }
                previous = Some((cell.mean, cell.std / (cell.n as f64).sqrt()));
            }
        }
    }

    #[test]
    fn manipulation_is_reproducible() {
        let base = quick_base(6, 8, 4);
        let a = run_manipulation_robustness(&base, &[0.3, 0.9], &[0, 2], &ALL_METHODS, 4, 11)
            .unwrap();
        let b = run_manipulation_robustness(&base, &[0.3, 0.9], &[0, 2], &ALL_METHODS, 4, 11)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn manipulation_validates_inputs() {
        let base = quick_base(4, 4, 2);
        assert!(
            run_manipulation_robustness(&base, &[0.5], &[5], &ALL_METHODS, 2, 0).is_err()
        );
        assert!(run_manipulation_robustness(&base, &[], &[0], &ALL_METHODS, 2, 0).is_err());
        assert!(
            run_manipulation_robustness(&base, &[0.5], &[0], &[Method::Borda], 2, 0).is_err()
        );
    }

    #[test]
    fn scaling_unit_factor_matches_reversal_baseline() {
        let base = quick_base(10, 10, 5);
        let report =
            run_scaling_robustness(&base, &[1.0, 2.0, 50.0], &ALL_METHODS, 10, 3).unwrap();
        // Rank-based methods: identical error at every factor.
        for method in [Method::SigmaStar, Method::OneLevel, Method::TwoLevel] {
            let at_1 = report.cell(&[("scale", 1.0)], method).unwrap();
            for &x in &[2.0, 50.0] {
                let at_x = report.cell(&[("scale", x)], method).unwrap();
                assert_eq!(at_1.mean, at_x.mean);
                assert_eq!(at_1.std, at_x.std);
            }
        }
    }

    #[test]
    fn scaling_rejects_nonpositive_factors() {
        let base = quick_base(4, 4, 2);
        assert!(run_scaling_robustness(&base, &[0.0], &ALL_METHODS, 2, 0).is_err());
        assert!(run_scaling_robustness(&base, &[-1.0], &ALL_METHODS, 2, 0).is_err());
    }

    #[test]
    fn subset_full_size_has_perfect_tau() {
        let data = generate_scores(&SyntheticConfig::new(8, 6, 4, 0.8, 5)).unwrap();
        let report = run_subset_robustness(
            SubsetData::Instance(&data),
            &ALL_METHODS,
            &[3, 6],
            10,
            9,
        )
        .unwrap();
        for &method in &ALL_METHODS {
            let cell = report.cell(&[("subset_size", 6.0)], method).unwrap();
            assert_eq!((cell.mean, cell.std), (1.0, 0.0), "{method}");
        }
    }

    #[test]
    fn subset_single_task_matches_definition() {
        let data = generate_scores(&SyntheticConfig::new(5, 4, 3, 0.7, 2)).unwrap();
        let report = run_subset_robustness(
            SubsetData::Instance(&data),
            &[Method::TwoLevel],
            &[1],
            6,
            13,
        )
        .unwrap();
        let full = eval_instance_method(Method::TwoLevel, &data, TiePolicy::Fractional)
            .unwrap()
            .ranking;
        // Recompute each sample by hand with the same keyed streams.
        let mut taus = Vec::new();
        for sample in 0..6u32 {
            let mut rng = keyed_rng(13, &[DOMAIN_SUBSET, 0, sample as u64]);
            let tasks = sample_distinct(&mut rng, 4, 1);
            let sub = data.select_tasks(&tasks).unwrap();
            let ranking = eval_instance_method(Method::TwoLevel, &sub, TiePolicy::Fractional)
                .unwrap()
                .ranking;
            taus.push(kendall_tau(&ranking, &full).unwrap());
        }
        let (mean, _) = math::mean_std(&taus);
        let cell = report.cell(&[("subset_size", 1.0)], Method::TwoLevel).unwrap();
        assert!((cell.mean - mean).abs() < 1e-15);
    }

    #[test]
    fn subset_task_level_rejects_instance_methods() {
        let data = generate_scores(&SyntheticConfig::new(4, 4, 2, 0.5, 1)).unwrap();
        let m = mean_instance_aggregate(&data);
        assert!(run_subset_robustness(
            SubsetData::Task(&m),
            &[Method::TwoLevel],
            &[2],
            3,
            0
        )
        .is_err());
        assert!(run_subset_robustness(
            SubsetData::Task(&m),
            &[Method::SigmaStar, Method::Mean],
            &[2],
            3,
            0
        )
        .is_ok());
    }

    fn result_of(ranks: &[usize]) -> AggregationResult {
        borda(core::slice::from_ref(
            &Ranking::from_permutation(ranks).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn agreement_identical_rankings() {
        let a = result_of(&[1, 2, 3, 4]);
        let summary = run_agreement_analysis(&a, &a.clone(), &[1, 2, 4]).unwrap();
        assert!(summary.top_k_agreement.values().all(|&v| v == 1.0));
        assert!(summary.last_k_agreement.values().all(|&v| v == 1.0));
        assert_eq!(summary.full_tau, 1.0);
        assert!(summary.tie_straddled_ks.is_empty());
    }

    #[test]
    fn agreement_swapped_pairs() {
        let a = result_of(&[1, 2, 3, 4]);
        let b = result_of(&[2, 1, 4, 3]);
        let summary = run_agreement_analysis(&a, &b, &[2]).unwrap();
        assert_eq!(summary.top_k_agreement[&2], 1.0);
        assert!((summary.full_tau - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn agreement_reversed_rankings() {
        let a = result_of(&[1, 2, 3, 4, 5]);
        let b = result_of(&[5, 4, 3, 2, 1]);
        let summary = run_agreement_analysis(&a, &b, &[1, 2, 5]).unwrap();
        assert_eq!(summary.top_k_agreement[&1], 0.0);
        assert_eq!(summary.top_k_agreement[&2], 0.0);
        assert_eq!(summary.top_k_agreement[&5], 1.0);
        assert_eq!(summary.full_tau, -1.0);
    }

    #[test]
    fn agreement_pigeonhole_lower_bound() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..50 {
            let n = rng.random_range(2..=10);
            let mut pa: Vec<usize> = (1..=n).collect();
            let mut pb: Vec<usize> = (1..=n).collect();
            pa.shuffle(&mut rng);
            pb.shuffle(&mut rng);
            let a = result_of(&pa);
            let b = result_of(&pb);
            let ks: Vec<usize> = (1..=n).collect();
            let summary = run_agreement_analysis(&a, &b, &ks).unwrap();
            for k in 1..=n {
                let bound = (2 * k).saturating_sub(n) as f64 / k as f64;
                assert!(summary.top_k_agreement[&k] >= bound - 1e-12);
            }
            assert_eq!(summary.top_k_agreement[&n], 1.0);
        }
    }

    #[test]
    fn agreement_flags_boundary_ties() {
        let r1 = Ranking::from_permutation(&[1, 2, 3]).unwrap();
        let r2 = Ranking::from_permutation(&[2, 1, 3]).unwrap();
        // Rank sums tie systems 0 and 1 across the K = 1 boundary.
        let tied = borda(&[r1, r2]).unwrap();
        let strict = result_of(&[1, 2, 3]);
        let summary = run_agreement_analysis(&tied, &strict, &[1, 2]).unwrap();
        assert_eq!(summary.tie_straddled_ks, alloc::vec![1]);
    }

    #[test]
    fn agreement_rejects_out_of_range_k() {
        let a = result_of(&[1, 2]);
        assert!(run_agreement_analysis(&a, &a.clone(), &[3]).is_err());
        assert!(run_agreement_analysis(&a, &a.clone(), &[0]).is_err());
    }

    #[test]
    fn dispersion_analysis_unanimous_tasks() {
        let m = TaskScoreMatrix::new(
            alloc::vec!["a".into(), "b".into(), "c".into()],
            alloc::vec!["t1".into(), "t2".into()],
            alloc::vec![Direction::HigherBetter; 2],
            alloc::vec![
                alloc::vec![0.9, 0.8],
                alloc::vec![0.5, 0.4],
                alloc::vec![0.1, 0.2],
            ],
        )
        .unwrap();
        let report = run_dispersion_analysis(&m, TiePolicy::StableIndex, 50, 4).unwrap();
        assert_eq!(report.performance["sigma_star"], 0.0);
        assert_eq!(report.performance["kemeny"], 0.0);
        assert_eq!(report.pairwise_mean, 0.0);
        assert_eq!(report.sandwich_ok, Some(true));
    }

    #[test]
    fn dispersion_analysis_ordering_on_random_fixture() {
        let data = generate_scores(&SyntheticConfig::new(8, 7, 1, 0.4, 99)).unwrap();
        let m = mean_instance_aggregate(&data);
        let report = run_dispersion_analysis(&m, TiePolicy::StableIndex, 100, 6).unwrap();
        assert!(report.performance["kemeny"] <= report.performance["sigma_star"]);
        assert!(report.performance["kemeny"] <= report.performance["mean"]);
        assert!(report.performance["sigma_star"] < report.random_baseline_mean);
        assert_eq!(report.sandwich_ok, Some(true));
    }
}
