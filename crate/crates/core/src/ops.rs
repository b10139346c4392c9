//! Continuous state transition operators.
//!
//! Each operator maps the incumbent to one new candidate:
//!
//! * rotation `x + α/(n‖x‖) · R x`, `R` uniform on `[-1, 1]^{n×n}`: a step of
//!   length at most `α` (local search);
//! * translation `x + β r (x − x_prev)/‖x − x_prev‖`, `r` uniform on `[0, 1]`:
//!   a line search along the last improving direction;
//! * expansion `x + γ D x`, `D` diagonal standard Gaussian: an unbounded
//!   multiplicative perturbation (global search).

use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};
use crate::state::{clamp, select_best, Bounds, EvaluatedState, Objective, Point, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    Rotation,
    Translation,
    Expansion,
}

fn check_factor(name: &str, factor: f64) -> Result<()> {
    if factor >= 0.0 && factor.is_finite() {
        Ok(())
    } else {
        Err(StaError::InvalidParameter(format!(
            "{name} must be finite and >= 0 (got {factor})"
        )))
    }
}

/// Rotation around the incumbent; `‖rotate(x, α) − x‖₂ ≤ α` for every draw.
/// `R` is redrawn on every call.
pub fn rotate(x: &Point, alpha: f64, rng: &mut RngStream) -> Result<Point> {
    check_factor("alpha", alpha)?;
    let norm = x.norm();
    if norm == 0.0 {
        return Err(StaError::DegenerateState);
    }
    let n = x.dim();
    let scale = alpha / (n as f64 * norm);
    let coords = x
        .iter()
        .map(|&xi| {
            let row: f64 = x.iter().map(|&xj| rng.uniform(-1.0, 1.0) * xj).sum();
            xi + scale * row
        })
        .collect();
    Ok(Point::from_raw(coords))
}

/// Step of random length in `[0, β]` along the unit direction from `x_prev` to `x`.
pub fn translate(x: &Point, x_prev: &Point, beta: f64, rng: &mut RngStream) -> Result<Point> {
    check_factor("beta", beta)?;
    if x.dim() != x_prev.dim() {
        return Err(StaError::DimensionMismatch {
            expected: x.dim(),
            actual: x_prev.dim(),
        });
    }
    let diff: Vec<f64> = x.iter().zip(x_prev.iter()).map(|(a, b)| a - b).collect();
    let dist = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
    if dist == 0.0 {
        return Err(StaError::DegenerateDirection);
    }
    let step = beta * rng.unit() / dist;
    let coords = x.iter().zip(&diff).map(|(xi, di)| xi + step * di).collect();
    Ok(Point::from_raw(coords))
}

/// Coordinate-wise `x[i] · (1 + γ g_i)` with `g_i ~ N(0, 1)`. Zero coordinates stay zero.
pub fn expand(x: &Point, gamma: f64, rng: &mut RngStream) -> Result<Point> {
    check_factor("gamma", gamma)?;
    let coords = x
        .iter()
        .map(|&xi| xi + gamma * rng.gaussian() * xi)
        .collect();
    Ok(Point::from_raw(coords))
}

/// Applies one operator `se` times to the incumbent, clamps and evaluates every
/// candidate, and returns the best of them. The incumbent is not part of the
/// candidate set.
///
/// Returns `Ok(None)` when the operator is degenerate at this state (rotation
/// at the origin, translation without a distinct previous point); no
/// evaluations happen in that case. Otherwise exactly `se` evaluations happen.
#[allow(clippy::too_many_arguments)]
pub fn sample_candidates<O: Objective + ?Sized>(
    kind: TransformKind,
    incumbent: &EvaluatedState,
    prev: Option<&Point>,
    factor: f64,
    se: usize,
    objective: &O,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<Option<EvaluatedState>> {
    if se == 0 {
        return Err(StaError::InvalidParameter(
            "search enforcement must be at least 1".into(),
        ));
    }
    let x = &incumbent.point;
    let mut candidates = Vec::with_capacity(se);
    for _ in 0..se {
        let raw = match kind {
            TransformKind::Rotation => rotate(x, factor, rng),
            TransformKind::Translation => match prev {
                Some(p) => translate(x, p, factor, rng),
                None => Err(StaError::DegenerateDirection),
            },
            TransformKind::Expansion => expand(x, factor, rng),
        };
        let raw = match raw {
            Ok(p) => p,
            // Degeneracy depends only on the inputs, so the first draw decides.
            Err(StaError::DegenerateState | StaError::DegenerateDirection) => return Ok(None),
            Err(e) => return Err(e),
        };
        let repaired = clamp(&raw, bounds)?;
        candidates.push(EvaluatedState::evaluate(repaired, objective));
    }
    select_best(candidates).map(Some)
}
