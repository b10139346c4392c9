//! Repeated independent trials with seeds `base_seed + t`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{lookup, Benchmark};
use crate::discrete::{solve_discrete, TspInstance};
use crate::error::{Result, StaError};
use crate::harness::stats::{compute_stats, TrialStats};
use crate::solver::solve;
use crate::state::{Bounds, Objective, SearchParams};

/// Dimension / iteration budget pairs of the standard benchmark protocol.
pub const STANDARD_PROTOCOL: [(usize, usize); 3] = [(10, 1000), (20, 1500), (30, 2000)];
pub const STANDARD_TRIALS: usize = 50;

/// Iteration budget the standard protocol assigns to `dim`, if any.
pub fn standard_iterations(dim: usize) -> Option<usize> {
    STANDARD_PROTOCOL
        .iter()
        .find(|&&(d, _)| d == dim)
        .map(|&(_, iters)| iters)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub function: Benchmark,
    pub dimension: usize,
    pub max_iterations: usize,
    pub trials: usize,
    pub base_seed: u64,
    /// Factors and search enforcement; `seed` and `max_iterations` are set per trial.
    pub params: SearchParams,
}

impl ExperimentSpec {
    /// The standard protocol for `function` at `dimension`: se = 32, 50 trials
    /// and the matching iteration budget (1000 when `dimension` is not in the table).
    pub fn standard(function: Benchmark, dimension: usize) -> Self {
        Self {
            function,
            dimension,
            max_iterations: standard_iterations(dimension).unwrap_or(1000),
            trials: STANDARD_TRIALS,
            base_seed: 0,
            params: SearchParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(StaError::InvalidParameter(
                "trials must be at least 1".into(),
            ));
        }
        self.params.validate()
    }

    fn trial_params(&self, trial: usize) -> SearchParams {
        SearchParams {
            seed: trial_seed(self.base_seed, trial),
            max_iterations: self.max_iterations,
            ..self.params.clone()
        }
    }
}

pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    base_seed.wrapping_add(trial as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub best_value: f64,
    pub evaluations: usize,
    /// Wall time in milliseconds; informational only.
    pub ms: u64,
    #[serde(skip)]
    pub history: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub trials: Vec<TrialRecord>,
    pub stats: TrialStats,
}

/// Runs `trials` solves of `objective` over `bounds` on up to `jobs` threads.
/// Records come back in trial order whatever the scheduling.
pub fn run_trials<O: Objective + Sync + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    params: &SearchParams,
    trials: usize,
    base_seed: u64,
    jobs: usize,
) -> Result<Vec<TrialRecord>> {
    let one = |trial: usize| -> Result<TrialRecord> {
        let params = SearchParams {
            seed: trial_seed(base_seed, trial),
            ..params.clone()
        };
        let start = Instant::now();
        let r = solve(objective, bounds, &params)?;
        Ok(TrialRecord {
            trial,
            seed: params.seed,
            best_value: r.best_value,
            evaluations: r.evaluations,
            ms: start.elapsed().as_millis() as u64,
            history: r.history,
        })
    };
    in_pool(jobs, || {
        (0..trials)
            .into_par_iter()
            .map(one)
            .collect::<Result<Vec<_>>>()
    })?
}

fn in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| StaError::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<ExperimentReport> {
    spec.validate()?;
    let bench = lookup(spec.function.name(), spec.dimension)?;
    let params = spec.trial_params(0);
    let trials = run_trials(
        &bench,
        &bench.bounds,
        &params,
        spec.trials,
        spec.base_seed,
        jobs,
    )?;
    let finals: Vec<f64> = trials.iter().map(|t| t.best_value).collect();
    Ok(ExperimentReport {
        spec: spec.clone(),
        stats: compute_stats(&finals)?,
        trials,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspExperimentSpec {
    /// Label echoed in outputs, usually the instance path.
    pub instance: String,
    pub cities: usize,
    pub max_iterations: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub se: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspTrialRecord {
    #[serde(flatten)]
    pub record: TrialRecord,
    /// 1-based closed tour, start city repeated at the end.
    pub tour: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspReport {
    pub spec: TspExperimentSpec,
    pub trials: Vec<TspTrialRecord>,
    pub stats: TrialStats,
}

pub fn run_tsp_experiment(
    inst: &TspInstance,
    spec: &TspExperimentSpec,
    jobs: usize,
) -> Result<TspReport> {
    if spec.trials == 0 {
        return Err(StaError::InvalidParameter(
            "trials must be at least 1".into(),
        ));
    }
    let one = |trial: usize| -> Result<TspTrialRecord> {
        let params = SearchParams {
            se: spec.se,
            max_iterations: spec.max_iterations,
            seed: trial_seed(spec.base_seed, trial),
            ..SearchParams::default()
        };
        let start = Instant::now();
        let r = solve_discrete(inst, &params)?;
        Ok(TspTrialRecord {
            tour: r.best_point.closed_tour(),
            record: TrialRecord {
                trial,
                seed: params.seed,
                best_value: r.best_value,
                evaluations: r.evaluations,
                ms: start.elapsed().as_millis() as u64,
                history: r.history,
            },
        })
    };
    let trials: Vec<TspTrialRecord> = in_pool(jobs, || {
        (0..spec.trials)
            .into_par_iter()
            .map(one)
            .collect::<Result<_>>()
    })??;
    let finals: Vec<f64> = trials.iter().map(|t| t.record.best_value).collect();
    Ok(TspReport {
        spec: spec.clone(),
        stats: compute_stats(&finals)?,
        trials,
    })
}
