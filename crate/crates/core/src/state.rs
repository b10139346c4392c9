//! States, box bounds, search parameters and the seeded random stream shared by
//! the continuous and discrete solvers.

use std::ops::{Deref, Range};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};

/// A continuous state: a candidate solution in R^n with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(StaError::InvalidParameter(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(StaError::NonFinite { index, value });
        }
        Ok(Self(coords))
    }

    /// Wraps operator output. Callers repair the result with [`clamp`] before use.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Per-dimension box `lower[i] < upper[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(StaError::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(StaError::InvalidParameter(
                "bounds need at least one dimension".into(),
            ));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(StaError::InvalidParameter(format!(
                    "bounds[{i}]: lower {lo} must be finite and strictly below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same scalar range replicated over `dim` coordinates.
    pub fn uniform(lower: f64, upper: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Factors and budgets of a state transition search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// First rotation factor of every outer iteration.
    pub alpha_max: f64,
    /// Rotation stops once the factor would drop below this.
    pub alpha_min: f64,
    /// Divisor applied to the rotation factor after each inner step.
    pub alpha_base: f64,
    /// Translation factor.
    pub beta: f64,
    /// Expansion factor.
    pub gamma: f64,
    /// Search enforcement: candidates generated per transformation.
    pub se: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            alpha_max: 1.0,
            alpha_min: 1e-4,
            alpha_base: 4.0,
            beta: 1.0,
            gamma: 1.0,
            se: 32,
            max_iterations: 1000,
            seed: 0,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(StaError::InvalidParameter(msg));
        if !(self.alpha_min > 0.0 && self.alpha_min <= self.alpha_max && self.alpha_max.is_finite())
        {
            return bad(format!(
                "need 0 < alpha_min <= alpha_max (got {} and {})",
                self.alpha_min, self.alpha_max
            ));
        }
        if !(self.alpha_base > 1.0 && self.alpha_base.is_finite()) {
            return bad(format!(
                "alpha_base must exceed 1 (got {})",
                self.alpha_base
            ));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be finite and >= 0 (got {})", self.beta));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!(
                "gamma must be finite and >= 0 (got {})",
                self.gamma
            ));
        }
        if self.se == 0 {
            return bad("search enforcement must be at least 1".into());
        }
        Ok(())
    }
}

/// Deterministic pseudo-random stream. ChaCha8 gives the same draws on every
/// platform for a given seed.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform real on `[a, b)`.
    pub fn uniform(&mut self, a: f64, b: f64) -> f64 {
        a + (b - a) * self.0.random::<f64>()
    }

    pub fn unit(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Uniform integer in `range`. Panics on an empty range.
    pub fn index(&mut self, range: Range<usize>) -> usize {
        self.0.random_range(range)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.0);
    }
}

/// Anything that maps a point to a value to be minimized.
pub trait Objective {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// A point together with its cached objective value. NaN values are stored
/// as `+inf` so they never win a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedState {
    pub point: Point,
    pub value: f64,
}

impl EvaluatedState {
    pub fn evaluate<O: Objective + ?Sized>(point: Point, objective: &O) -> Self {
        let value = sanitize(objective.evaluate(&point));
        Self { point, value }
    }
}

pub(crate) fn sanitize(value: f64) -> f64 {
    if value.is_nan() {
        f64::INFINITY
    } else {
        value
    }
}

/// Projects `p` onto the box.
pub fn clamp(p: &Point, b: &Bounds) -> Result<Point> {
    if p.dim() != b.dim() {
        return Err(StaError::DimensionMismatch {
            expected: b.dim(),
            actual: p.dim(),
        });
    }
    let coords = p
        .iter()
        .zip(b.lower.iter().zip(&b.upper))
        .map(|(&v, (&lo, &hi))| v.max(lo).min(hi))
        .collect();
    Ok(Point(coords))
}

/// Index of the smallest value, earliest index on ties. NaN ranks last.
pub fn best_index<I>(values: I) -> Option<usize>
where
    I: IntoIterator<Item = f64>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = sanitize(v);
        match best {
            Some((_, b)) if v >= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Minimum-value candidate; the first one wins ties.
pub fn select_best<I>(candidates: I) -> Result<EvaluatedState>
where
    I: IntoIterator<Item = EvaluatedState>,
{
    let mut best: Option<EvaluatedState> = None;
    for c in candidates {
        match &best {
            Some(b) if sanitize(c.value) >= sanitize(b.value) => {}
            _ => best = Some(c),
        }
    }
    best.ok_or(StaError::EmptyCandidates)
}

/// Draws `se` uniform points inside `b` and keeps the best.
pub fn init_continuous<O: Objective + ?Sized>(
    objective: &O,
    b: &Bounds,
    se: usize,
    rng: &mut RngStream,
) -> Result<EvaluatedState> {
    if se == 0 {
        return Err(StaError::InvalidParameter(
            "search enforcement must be at least 1".into(),
        ));
    }
    let samples = (0..se).map(|_| {
        let coords = b
            .lower
            .iter()
            .zip(&b.upper)
            .map(|(&lo, &hi)| rng.uniform(lo, hi))
            .collect();
        EvaluatedState::evaluate(Point(coords), objective)
    });
    // Collect first so every draw happens regardless of selection short-cuts.
    let samples: Vec<_> = samples.collect();
    select_best(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn state(value: f64) -> EvaluatedState {
        EvaluatedState {
            point: Point::new(vec![value]).unwrap(),
            value,
        }
    }

    #[test]
    fn clamp_examples() {
        let b2 = Bounds::uniform(-1.0, 1.0, 2).unwrap();
        let b3 = Bounds::uniform(-1.0, 1.0, 3).unwrap();
        let p = |v: Vec<f64>| Point::new(v).unwrap();
        assert_eq!(
            clamp(&p(vec![0.0, 0.0]), &b2).unwrap().coords(),
            &[0.0, 0.0]
        );
        assert_eq!(
            clamp(&p(vec![5.0, -5.0]), &b2).unwrap().coords(),
            &[1.0, -1.0]
        );
        assert_eq!(
            clamp(&p(vec![0.5, 2.0, -3.0]), &b3).unwrap().coords(),
            &[0.5, 1.0, -1.0]
        );
        assert!(matches!(
            clamp(&p(vec![0.0]), &b2),
            Err(StaError::DimensionMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }

    #[test]
    fn bounds_reject_degenerate_range() {
        assert!(Bounds::uniform(0.0, 0.0, 1).is_err());
        assert!(Bounds::new(vec![1.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(matches!(
            Point::new(vec![0.0, f64::NAN]),
            Err(StaError::NonFinite { index: 1, .. })
        ));
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn select_best_examples() {
        assert_eq!(select_best(vec![state(3.0)]).unwrap().value, 3.0);
        assert_eq!(
            select_best(vec![state(2.0), state(1.0), state(5.0)])
                .unwrap()
                .value,
            1.0
        );
        assert!(matches!(
            select_best(Vec::new()),
            Err(StaError::EmptyCandidates)
        ));
    }

    #[test]
    fn select_best_prefers_earliest_on_ties() {
        let mut a = state(1.0);
        a.point = Point::new(vec![10.0]).unwrap();
        let mut b = state(1.0);
        b.point = Point::new(vec![20.0]).unwrap();
        let best = select_best(vec![a, b, state(2.0)]).unwrap();
        assert_eq!(best.point.coords(), &[10.0]);
    }

    #[test]
    fn nan_never_wins() {
        let values = [f64::NAN, 4.0, f64::NAN];
        assert_eq!(best_index(values), Some(1));
        let s = EvaluatedState::evaluate(Point::new(vec![1.0]).unwrap(), &|_: &[f64]| f64::NAN);
        assert_eq!(s.value, f64::INFINITY);
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::default().validate().is_ok());
        let bad = [
            SearchParams {
                se: 0,
                ..SearchParams::default()
            },
            SearchParams {
                alpha_base: 1.0,
                ..SearchParams::default()
            },
            SearchParams {
                alpha_min: 2.0,
                ..SearchParams::default()
            },
            SearchParams {
                gamma: -1.0,
                ..SearchParams::default()
            },
        ];
        assert!(bad.iter().all(|p| p.validate().is_err()));
    }

    #[test]
    fn init_single_sample_is_unselected_draw() {
        let b = Bounds::uniform(-100.0, 100.0, 2).unwrap();
        let got = init_continuous(&sphere, &b, 1, &mut RngStream::from_seed(3)).unwrap();
        let mut rng = RngStream::from_seed(3);
        let x = [rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)];
        assert_eq!(got.point.coords(), &x);
        assert_eq!(got.value, x[0] * x[0] + x[1] * x[1]);
    }

    #[test]
    fn init_returns_minimum_of_replayed_draws() {
        let b = Bounds::uniform(-100.0, 100.0, 10).unwrap();
        let got = init_continuous(&sphere, &b, 32, &mut RngStream::from_seed(11)).unwrap();
        let mut rng = RngStream::from_seed(11);
        let replay: Vec<f64> = (0..32)
            .map(|_| {
                sphere(
                    &(0..10)
                        .map(|_| rng.uniform(-100.0, 100.0))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        assert!(replay.iter().all(|&v| got.value <= v));
        assert!(replay.contains(&got.value));
    }

    #[test]
    fn init_is_deterministic() {
        let b = Bounds::uniform(-5.0, 5.0, 4).unwrap();
        let a = init_continuous(&sphere, &b, 8, &mut RngStream::from_seed(9)).unwrap();
        let c = init_continuous(&sphere, &b, 8, &mut RngStream::from_seed(9)).unwrap();
        assert_eq!(a, c);
        assert!(init_continuous(&sphere, &b, 0, &mut RngStream::from_seed(9)).is_err());
    }

    proptest! {
        #[test]
        fn clamp_is_idempotent(p in prop::collection::vec(-1e3f64..1e3, 1..8)) {
            let b = Bounds::uniform(-10.0, 10.0, p.len()).unwrap();
            let once = clamp(&Point::new(p).unwrap(), &b).unwrap();
            prop_assert!(b.contains(&once));
            prop_assert_eq!(clamp(&once, &b).unwrap(), once);
        }

        #[test]
        fn select_best_is_minimal(values in prop::collection::vec(-1e6f64..1e6, 1..40)) {
            let best = select_best(values.iter().map(|&v| state(v))).unwrap();
            prop_assert!(values.iter().all(|&v| best.value <= v));
            // Brute-force scan for the earliest minimum.
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let first = values.iter().position(|&v| v == min).unwrap();
            prop_assert_eq!(best_index(values.iter().copied()), Some(first));
        }

        #[test]
        fn init_stays_inside_bounds(seed in any::<u64>(), dim in 1usize..12) {
            let b = Bounds::uniform(-3.0, 7.0, dim).unwrap();
            let s = init_continuous(&sphere, &b, 4, &mut RngStream::from_seed(seed)).unwrap();
            prop_assert!(b.contains(&s.point));
        }
    }
}
