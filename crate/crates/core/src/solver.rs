//! The continuous state transition loop: expansion, then rotation with a
//! geometrically decaying factor, with a translation after every improvement.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};
use crate::ops::{sample_candidates, TransformKind};
use crate::state::{
    init_continuous, Bounds, EvaluatedState, Objective, Point, RngStream, SearchParams,
};

/// Rotation factors tried, in order, within one outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSchedule(Vec<f64>);

impl AlphaSchedule {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `alpha_max, alpha_max/base, alpha_max/base², …` down to the last value
/// not below `alpha_min`.
pub fn alpha_schedule(params: &SearchParams) -> Result<AlphaSchedule> {
    params.validate()?;
    let mut values = Vec::new();
    let mut alpha = params.alpha_max;
    while alpha >= params.alpha_min {
        values.push(alpha);
        alpha /= params.alpha_base;
    }
    Ok(AlphaSchedule(values))
}

/// Outcome of a solver run. `history[k]` is the best value after iteration `k`
/// (entry 0 is the initialization).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult<S> {
    pub best_point: S,
    pub best_value: f64,
    pub history: Vec<(usize, f64)>,
    /// Objective calls, initialization included.
    pub evaluations: usize,
    /// Translation phases that generated candidates (one per improvement).
    pub translation_events: usize,
    /// Rotation steps skipped because the incumbent sat at the origin.
    pub degenerate_rotations: usize,
}

/// Mutable context of one continuous run: objective, box, parameters, the
/// run's random stream and its evaluation counters.
pub struct ContinuousSearch<'a, O: ?Sized> {
    objective: &'a O,
    bounds: &'a Bounds,
    params: &'a SearchParams,
    schedule: AlphaSchedule,
    rng: RngStream,
    evaluations: usize,
    translation_events: usize,
    degenerate_rotations: usize,
}

impl<'a, O: Objective + ?Sized> ContinuousSearch<'a, O> {
    pub fn new(objective: &'a O, bounds: &'a Bounds, params: &'a SearchParams) -> Result<Self> {
        let schedule = alpha_schedule(params)?;
        Ok(Self {
            objective,
            bounds,
            params,
            schedule,
            rng: RngStream::from_seed(params.seed),
            evaluations: 0,
            translation_events: 0,
            degenerate_rotations: 0,
        })
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn translation_events(&self) -> usize {
        self.translation_events
    }

    pub fn initialize(&mut self) -> Result<EvaluatedState> {
        let best = init_continuous(self.objective, self.bounds, self.params.se, &mut self.rng)?;
        self.evaluations += self.params.se;
        Ok(best)
    }

    fn sample(
        &mut self,
        kind: TransformKind,
        incumbent: &EvaluatedState,
        prev: Option<&Point>,
        factor: f64,
    ) -> Result<Option<EvaluatedState>> {
        let best = sample_candidates(
            kind,
            incumbent,
            prev,
            factor,
            self.params.se,
            self.objective,
            self.bounds,
            &mut self.rng,
        )?;
        if best.is_some() {
            self.evaluations += self.params.se;
        }
        Ok(best)
    }

    /// Line search along `incumbent − previous`. Returns the best translated
    /// candidate if strictly better, otherwise `None`.
    pub fn translation_phase(
        &mut self,
        incumbent: &EvaluatedState,
        previous: &Point,
    ) -> Result<Option<EvaluatedState>> {
        let best = self.sample(
            TransformKind::Translation,
            incumbent,
            Some(previous),
            self.params.beta,
        )?;
        if best.is_some() {
            self.translation_events += 1;
        }
        Ok(best.filter(|c| c.value < incumbent.value))
    }

    /// Greedy acceptance of `candidate` followed by one translation phase.
    fn accept(
        &mut self,
        incumbent: &mut EvaluatedState,
        previous: &mut Option<Point>,
        candidate: EvaluatedState,
    ) -> Result<()> {
        let from = std::mem::replace(incumbent, candidate);
        let from = from.point;
        match self.translation_phase(incumbent, &from)? {
            Some(better) => {
                *previous = Some(std::mem::replace(incumbent, better).point);
            }
            None => *previous = Some(from),
        }
        Ok(())
    }

    /// One outer iteration: an expansion phase, then one rotation phase per
    /// scheduled factor. The incumbent value never increases.
    pub fn iterate(
        &mut self,
        mut incumbent: EvaluatedState,
        mut previous: Option<Point>,
    ) -> Result<(EvaluatedState, Option<Point>)> {
        if let Some(c) = self.sample(
            TransformKind::Expansion,
            &incumbent,
            None,
            self.params.gamma,
        )? {
            if c.value < incumbent.value {
                self.accept(&mut incumbent, &mut previous, c)?;
            }
        }
        for i in 0..self.schedule.len() {
            let alpha = self.schedule.values()[i];
            match self.sample(TransformKind::Rotation, &incumbent, None, alpha)? {
                Some(c) if c.value < incumbent.value => {
                    self.accept(&mut incumbent, &mut previous, c)?;
                }
                Some(_) => {}
                None => self.degenerate_rotations += 1,
            }
        }
        Ok((incumbent, previous))
    }

    /// Runs `max_iterations` iterations from `start`, recording the history.
    pub fn run_from(mut self, start: EvaluatedState) -> Result<SolveResult<Point>> {
        let mut history = Vec::with_capacity(self.params.max_iterations + 1);
        history.push((0, start.value));
        let mut incumbent = start;
        let mut previous = None;
        for k in 1..=self.params.max_iterations {
            (incumbent, previous) = self.iterate(incumbent, previous)?;
            history.push((k, incumbent.value));
        }
        Ok(SolveResult {
            best_value: incumbent.value,
            best_point: incumbent.point,
            history,
            evaluations: self.evaluations,
            translation_events: self.translation_events,
            degenerate_rotations: self.degenerate_rotations,
        })
    }
}

/// Minimizes `objective` over `bounds`: random initialization followed by
/// `params.max_iterations` outer iterations. Deterministic in `params.seed`.
pub fn solve<O: Objective + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    params: &SearchParams,
) -> Result<SolveResult<Point>> {
    let mut search = ContinuousSearch::new(objective, bounds, params)?;
    let start = search.initialize()?;
    search.run_from(start)
}

/// Same as [`solve`] but starting from a given point instead of a random draw.
pub fn solve_from<O: Objective + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    params: &SearchParams,
    start: Point,
) -> Result<SolveResult<Point>> {
    if start.dim() != bounds.dim() {
        return Err(StaError::DimensionMismatch {
            expected: bounds.dim(),
            actual: start.dim(),
        });
    }
    let search = ContinuousSearch::new(objective, bounds, params)?;
    let mut result = search.run_from(EvaluatedState::evaluate(start, objective))?;
    result.evaluations += 1;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn params(iters: usize, seed: u64) -> SearchParams {
        SearchParams {
            max_iterations: iters,
            seed,
            ..SearchParams::default()
        }
    }

    #[test]
    fn default_schedule() {
        let s = alpha_schedule(&SearchParams::default()).unwrap();
        assert_eq!(
            s.values(),
            &[
                1.0,
                0.25,
                0.0625,
                0.015625,
                3.90625e-3,
                9.765625e-4,
                2.44140625e-4
            ]
        );
    }

    #[test]
    fn schedule_edge_cases() {
        let single = SearchParams {
            alpha_max: 1.0,
            alpha_min: 1.0,
            ..SearchParams::default()
        };
        assert_eq!(alpha_schedule(&single).unwrap().values(), &[1.0]);
        let halving = SearchParams {
            alpha_max: 1.0,
            alpha_min: 0.3,
            alpha_base: 2.0,
            ..SearchParams::default()
        };
        assert_eq!(alpha_schedule(&halving).unwrap().values(), &[1.0, 0.5]);
    }

    #[test]
    fn zero_iterations_returns_initialization() {
        let b = Bounds::uniform(-100.0, 100.0, 5).unwrap();
        let p = params(0, 4);
        let r = solve(&sphere, &b, &p).unwrap();
        let init = init_continuous(&sphere, &b, p.se, &mut RngStream::from_seed(4)).unwrap();
        assert_eq!(r.best_point, init.point);
        assert_eq!(r.best_value, init.value);
        assert_eq!(r.history, vec![(0, init.value)]);
        assert_eq!(r.evaluations, p.se);
    }

    #[test]
    fn constant_objective_never_moves() {
        let b = Bounds::uniform(-1.0, 1.0, 3).unwrap();
        let flat = |_: &[f64]| 7.0;
        let p = params(5, 1);
        let mut search = ContinuousSearch::new(&flat, &b, &p).unwrap();
        let start = search.initialize().unwrap();
        let (end, prev) = search.iterate(start.clone(), None).unwrap();
        assert_eq!(end, start);
        assert!(prev.is_none());
        assert_eq!(search.translation_events(), 0);
    }

    #[test]
    fn translation_from_identical_point_is_rejected() {
        let b = Bounds::uniform(-10.0, 10.0, 2).unwrap();
        let p = params(1, 1);
        let mut search = ContinuousSearch::new(&sphere, &b, &p).unwrap();
        let inc = EvaluatedState::evaluate(Point::new(vec![1.0, 1.0]).unwrap(), &sphere);
        assert!(search
            .translation_phase(&inc, &inc.point)
            .unwrap()
            .is_none());
        assert_eq!(search.evaluations(), 0);
    }

    #[test]
    fn translation_moves_toward_origin_on_sphere() {
        let b = Bounds::uniform(-100.0, 100.0, 2).unwrap();
        let inc = EvaluatedState::evaluate(Point::new(vec![1.0, 1.0]).unwrap(), &sphere);
        let prev = Point::new(vec![2.0, 2.0]).unwrap();
        let mut accepted = 0;
        for seed in 0..50 {
            let p = params(1, seed);
            let mut search = ContinuousSearch::new(&sphere, &b, &p).unwrap();
            if let Some(c) = search.translation_phase(&inc, &prev).unwrap() {
                accepted += 1;
                let t = (1.0 - c.point[0]) * std::f64::consts::SQRT_2;
                assert!((c.point[0] - c.point[1]).abs() < 1e-15);
                assert!(t > 0.0 && t <= p.beta + 1e-12, "t = {t}");
                assert!(c.value < inc.value);
            }
        }
        // Every step in (0, 1] toward the origin improves, so nearly all seeds accept.
        assert!(accepted >= 45);
    }

    #[test]
    fn iterate_is_monotone() {
        let b = Bounds::uniform(-100.0, 100.0, 4).unwrap();
        let p = params(1, 12);
        let mut search = ContinuousSearch::new(&sphere, &b, &p).unwrap();
        let mut inc =
            EvaluatedState::evaluate(Point::new(vec![80.0, -90.0, 70.0, 60.0]).unwrap(), &sphere);
        let mut prev = None;
        for _ in 0..20 {
            let before = inc.value;
            (inc, prev) = search.iterate(inc, prev).unwrap();
            assert!(inc.value <= before);
        }
        assert!(inc.value < 80.0 * 80.0);
    }

    #[test]
    fn sphere_from_fifty_converges() {
        let b = Bounds::uniform(-100.0, 100.0, 2).unwrap();
        for seed in 0..20 {
            let r = solve_from(
                &sphere,
                &b,
                &params(50, seed),
                Point::new(vec![50.0, 50.0]).unwrap(),
            )
            .unwrap();
            assert!(r.best_value < 1e-6, "seed {seed}: {}", r.best_value);
        }
    }

    #[test]
    fn nan_objective_is_never_selected() {
        let b = Bounds::uniform(-10.0, 10.0, 2).unwrap();
        let holey = |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { sphere(x) };
        let r = solve(&holey, &b, &params(30, 3)).unwrap();
        assert!(r.best_value.is_finite());
        assert!(r.best_point[0] <= 0.0);
    }

    #[test]
    fn evaluation_accounting() {
        let b = Bounds::uniform(-100.0, 100.0, 6).unwrap();
        let p = params(40, 77);
        let r = solve(&sphere, &b, &p).unwrap();
        let steps = 1 + alpha_schedule(&p).unwrap().len();
        let expected =
            p.se * (1 + p.max_iterations * steps - r.degenerate_rotations + r.translation_events);
        assert_eq!(r.evaluations, expected);
        assert_eq!(r.history.len(), p.max_iterations + 1);
        assert_eq!(r.history.last().unwrap().1, r.best_value);
        assert!(r.history.windows(2).all(|w| w[1].1 <= w[0].1));
    }
}
