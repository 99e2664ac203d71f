//! Synthetic benchmark scores with a known ground-truth ranking.
//!
//! Scores are Gumbel draws: system `n` (1-based) gets i.i.d. samples
//! centered at `phi * n` with scale `beta`. Sorting one instance's scores
//! then follows a Plackett–Luce distribution, so higher-numbered systems are
//! stochastically better and the ground truth ranks system `N` first.
//! `phi = 0` is pure noise (every system identically distributed); `phi = 1`
//! gives a strong consensus.
//!
//! Two corruption operators perturb a chosen subset of tasks: resampling at
//! locations `-n` (the induced ranking becomes the exact reverse of the
//! ground truth) and multiplying scores by a positive factor (which changes
//! no induced ranking at all).
//!
//! Each score cell draws from its own RNG substream keyed by
//! `(seed, n, t, k)`, so outputs are identical regardless of evaluation
//! order or thread count, and adding a system or task never perturbs the
//! other draws.

use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::aggregate::{InstanceScoreSet, TaskInstances};
use crate::error::{Error, Result};
use crate::math;
use crate::ranking::{Direction, Ranking};
use crate::rng::{keyed_rng, uniform_unit, DOMAIN_CORRUPT, DOMAIN_GENERATE};

/// Parameters of the synthetic score generator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticConfig {
    pub n_systems: usize,
    pub n_tasks: usize,
    /// Instances per task (uniform across tasks).
    pub n_instances: usize,
    /// Dispersion in `[0, 1]`: spacing between consecutive systems' Gumbel
    /// locations.
    pub phi: f64,
    /// Gumbel scale, default 1.
    #[cfg_attr(feature = "serde", serde(default = "default_beta"))]
    pub beta: f64,
    pub seed: u64,
}

#[cfg(feature = "serde")]
fn default_beta() -> f64 {
    1.0
}

impl SyntheticConfig {
    pub fn new(n_systems: usize, n_tasks: usize, n_instances: usize, phi: f64, seed: u64) -> Self {
        SyntheticConfig {
            n_systems,
            n_tasks,
            n_instances,
            phi,
            beta: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_systems == 0 || self.n_tasks == 0 || self.n_instances == 0 {
            return Err(Error::invalid("n_systems, n_tasks, n_instances must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(Error::invalid(alloc::format!(
                "phi must lie in [0, 1], got {}",
                self.phi
            )));
        }
        if !self.beta.is_finite() || self.beta <= 0.0 {
            return Err(Error::invalid(alloc::format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// One Gumbel(location, scale) draw: `location - scale * ln(-ln U)` with `U`
/// uniform on (0, 1). Deterministic given the RNG state.
pub fn sample_gumbel(location: f64, scale: f64, rng: &mut impl RngCore) -> Result<f64> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::invalid(alloc::format!(
            "gumbel scale must be positive and finite, got {scale}"
        )));
    }
    let u = uniform_unit(rng);
    Ok(location - scale * math::ln(-math::ln(u)))
}

fn padded(prefix: &str, index: usize, total: usize) -> String {
    let width = {
        let mut w = 1;
        let mut m = total;
        while m >= 10 {
            w += 1;
            m /= 10;
        }
        w
    };
    alloc::format!("{prefix}{index:0width$}")
}

/// The ranking that places the stochastically best system (the highest
/// index) first: rank of system `i` is `N - i`.
pub fn ground_truth_ranking(n_systems: usize) -> Ranking {
    Ranking::from_ranks_unchecked((0..n_systems).map(|i| (n_systems - i) as f64).collect())
}

fn gumbel_cell(seed: u64, domain: u64, n: usize, t: usize, k: usize, location: f64, beta: f64) -> f64 {
    let mut rng = keyed_rng(seed, &[domain, n as u64, t as u64, k as u64]);
    sample_gumbel(location, beta, &mut rng).expect("validated scale")
}

/// Generates the full instance-level score set for `cfg`.
///
/// Cell `(n, t, k)` is an independent Gumbel draw at location
/// `phi * (n + 1)` (systems numbered from 1), scale `beta`. All tasks are
/// higher-better. Identical configs produce bit-identical outputs.
pub fn generate_scores(cfg: &SyntheticConfig) -> Result<InstanceScoreSet> {
    cfg.validate()?;
    let (n, t_count, k_count) = (cfg.n_systems, cfg.n_tasks, cfg.n_instances);
    let tasks: Result<Vec<TaskInstances>> = (0..t_count)
        .map(|t| {
            let mut scores = Vec::with_capacity(n * k_count);
            for sys in 0..n {
                let location = cfg.phi * (sys + 1) as f64;
                for k in 0..k_count {
                    scores.push(gumbel_cell(
                        cfg.seed,
                        DOMAIN_GENERATE,
                        sys,
                        t,
                        k,
                        location,
                        cfg.beta,
                    ));
                }
            }
            TaskInstances::new(
                padded("task", t + 1, t_count),
                Direction::HigherBetter,
                (0..k_count).map(|k| padded("inst", k + 1, k_count)).collect(),
                n,
                scores,
            )
        })
        .collect();
    InstanceScoreSet::new(
        (0..n).map(|sys| padded("sys", sys + 1, n)).collect(),
        tasks?,
    )
}

/// Which corruption to apply to the selected tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorruptionKind {
    /// Resample the task at Gumbel locations `-n` (or `-phi * n` when a
    /// dispersion factor is given), reversing its induced ranking.
    Reverse { phi: Option<f64> },
    /// Multiply the task's scores by a positive factor; rank-preserving.
    Scale { factor: f64 },
}

/// A corruption and the task indices it applies to.
#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    pub task_indices: Vec<usize>,
}

impl CorruptionSpec {
    pub fn reverse(task_indices: Vec<usize>) -> Self {
        CorruptionSpec {
            kind: CorruptionKind::Reverse { phi: None },
            task_indices,
        }
    }

    pub fn scale(task_indices: Vec<usize>, factor: f64) -> Self {
        CorruptionSpec {
            kind: CorruptionKind::Scale { factor },
            task_indices,
        }
    }

    fn validate(&self, n_tasks: usize) -> Result<()> {
        for (i, &t) in self.task_indices.iter().enumerate() {
            if t >= n_tasks {
                return Err(Error::invalid(alloc::format!(
                    "task index {t} out of range for {n_tasks} tasks"
                )));
            }
            if self.task_indices[..i].contains(&t) {
                return Err(Error::invalid(alloc::format!("duplicate task index {t}")));
            }
        }
        Ok(())
    }
}

/// Resamples every score of the selected tasks at Gumbel locations `-n`
/// (scale `beta`), so those tasks' underlying ranking is the exact reverse
/// of the ground truth. Other tasks are untouched. Draws are keyed by
/// `(seed, n, t, k)` in a domain separate from generation.
pub fn corrupt_reverse(
    data: &InstanceScoreSet,
    spec: &CorruptionSpec,
    seed: u64,
    beta: f64,
) -> Result<InstanceScoreSet> {
    let CorruptionKind::Reverse { phi } = spec.kind else {
        return Err(Error::invalid("corrupt_reverse requires a Reverse spec"));
    };
    if let Some(p) = phi {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(alloc::format!("phi must lie in [0, 1], got {p}")));
        }
    }
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::invalid(alloc::format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    spec.validate(data.n_tasks())?;
    let mut out = data.clone();
    for &t in &spec.task_indices {
        out.task_mut(t).map_scores(|sys, k, _| {
            let location = match phi {
                Some(p) => -p * (sys + 1) as f64,
                None => -((sys + 1) as f64),
            };
            gumbel_cell(seed, DOMAIN_CORRUPT, sys, t, k, location, beta)
        });
    }
    Ok(out)
}

/// Multiplies the selected tasks' scores by `factor` (> 0). Deterministic;
/// strictly monotone, so every induced ranking is unchanged.
pub fn corrupt_scale(data: &InstanceScoreSet, spec: &CorruptionSpec) -> Result<InstanceScoreSet> {
    let CorruptionKind::Scale { factor } = spec.kind else {
        return Err(Error::invalid("corrupt_scale requires a Scale spec"));
    };
    if !factor.is_finite() || factor <= 0.0 {
        return Err(Error::invalid(alloc::format!(
            "scale factor must be positive and finite, got {factor}"
        )));
    }
    spec.validate(data.n_tasks())?;
    let mut out = data.clone();
    for &t in &spec.task_indices {
        out.task_mut(t).map_scores(|_, _, s| s * factor);
    }
    Ok(out)
}
