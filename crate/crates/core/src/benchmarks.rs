//! Test functions with their conventional search boxes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};
use crate::state::{Bounds, Objective};

/// `Σ x_i²` on `[-100, 100]^n`.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `Σ_{i<n} 100 (x_{i+1} − x_i²)² + (x_i − 1)²` on `[-30, 30]^n`. Needs `n ≥ 2`.
pub fn rosenbrock(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(StaError::InvalidParameter(format!(
            "rosenbrock needs dimension >= 2 (got {})",
            x.len()
        )));
    }
    Ok(rosenbrock_sum(x))
}

fn rosenbrock_sum(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

/// `Σ x_i² − 10 cos(2π x_i) + 10` on `[-5.12, 5.12]^n`.
pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

/// `Σ x_i²/4000 − Π cos(x_i/√i) + 1` (1-based `i`) on `[-600, 600]^n`.
pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Griewank,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [
        Benchmark::Sphere,
        Benchmark::Rosenbrock,
        Benchmark::Rastrigin,
        Benchmark::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Sphere => "sphere",
            Benchmark::Rosenbrock => "rosenbrock",
            Benchmark::Rastrigin => "rastrigin",
            Benchmark::Griewank => "griewank",
        }
    }

    /// Scalar range applied to every coordinate.
    pub fn range(self) -> (f64, f64) {
        match self {
            Benchmark::Sphere => (-100.0, 100.0),
            Benchmark::Rosenbrock => (-30.0, 30.0),
            Benchmark::Rastrigin => (-5.12, 5.12),
            Benchmark::Griewank => (-600.0, 600.0),
        }
    }

    pub fn min_dimension(self) -> usize {
        match self {
            Benchmark::Rosenbrock => 2,
            _ => 1,
        }
    }

    /// Point where the function is zero.
    pub fn optimum(self, dim: usize) -> Vec<f64> {
        match self {
            Benchmark::Rosenbrock => vec![1.0; dim],
            _ => vec![0.0; dim],
        }
    }

    pub fn evaluate(self, x: &[f64]) -> f64 {
        match self {
            Benchmark::Sphere => sphere(x),
            Benchmark::Rosenbrock => rosenbrock_sum(x),
            Benchmark::Rastrigin => rastrigin(x),
            Benchmark::Griewank => griewank(x),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = StaError;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| StaError::UnknownBenchmark {
                name: s.to_string(),
                valid: Benchmark::ALL.map(Benchmark::name).join(", "),
            })
    }
}

/// A benchmark fixed to one dimension, with its box.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub function: Benchmark,
    pub dimension: usize,
    pub bounds: Bounds,
}

impl Objective for BenchmarkSpec {
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.function.evaluate(x)
    }
}

pub fn lookup(name: &str, dimension: usize) -> Result<BenchmarkSpec> {
    let function: Benchmark = name.parse()?;
    if dimension < function.min_dimension() {
        return Err(StaError::InvalidParameter(format!(
            "{function} needs dimension >= {} (got {dimension})",
            function.min_dimension()
        )));
    }
    let (lo, hi) = function.range();
    Ok(BenchmarkSpec {
        function,
        dimension,
        bounds: Bounds::uniform(lo, hi, dimension)?,
    })
}
