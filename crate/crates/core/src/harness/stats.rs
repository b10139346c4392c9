use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};

/// Summary of final objective values over independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub best: f64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator), 0 for a single trial.
    pub std: f64,
}

/// Minimum, mean and sample standard deviation, accumulated in one pass
/// (Welford's update).
pub fn compute_stats(values: &[f64]) -> Result<TrialStats> {
    if values.is_empty() {
        return Err(StaError::InvalidParameter("no values to summarize".into()));
    }
    let mut best = f64::INFINITY;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &v) in values.iter().enumerate() {
        best = best.min(v);
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = values.len();
    let std = if n > 1 {
        (m2 / (n - 1) as f64).max(0.0).sqrt()
    } else {
        0.0
    };
    Ok(TrialStats { best, mean, std })
}
