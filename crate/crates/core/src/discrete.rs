//! Permutation states, general elementary transformations (permutation
//! matrices acting on positions) and the incumbent search for closed TSP tours.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StaError};
use crate::solver::SolveResult;
use crate::state::{best_index, RngStream, SearchParams};

fn check_permutation(order: &[usize]) -> Result<()> {
    let mut seen = vec![false; order.len()];
    for &i in order {
        match seen.get_mut(i) {
            Some(s) if !*s => *s = true,
            Some(_) => return Err(StaError::InvalidPermutation(format!("index {i} repeated"))),
            None => {
                return Err(StaError::InvalidPermutation(format!(
                    "index {i} out of range for length {}",
                    order.len()
                )))
            }
        }
    }
    Ok(())
}

/// A discrete state: an ordering of the items `0..n`.
///
/// Displayed 1-based as a closed tour, e.g. `[1 3 2 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence(Vec<usize>);

impl Sequence {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order)?;
        Ok(Self(order))
    }

    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        let zero = order
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| StaError::InvalidPermutation("1-based index 0".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn random(n: usize, rng: &mut RngStream) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        Self(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// 1-based order with the start repeated at the end.
    pub fn closed_tour(&self) -> Vec<usize> {
        let mut tour = self.to_one_based();
        if let Some(&first) = tour.first() {
            tour.push(first);
        }
        tour
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.closed_tour().iter().map(ToString::to_string).collect();
        write!(f, "[{}]", items.join(" "))
    }
}

/// A permutation of positions: row `i` of the matrix form has its single 1 in
/// column `mapping[i]`, so applying it gives `result[i] = s[mapping[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementaryTransform {
    mapping: Vec<usize>,
}

impl ElementaryTransform {
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        check_permutation(&mapping)?;
        Ok(Self { mapping })
    }

    /// Builds the transform from a square 0/1 matrix with one 1 per row and column.
    pub fn from_matrix<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut mapping = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(StaError::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            if row.iter().any(|&v| v > 1) {
                return Err(StaError::InvalidPermutation(format!(
                    "row {i} is not binary"
                )));
            }
            let ones: Vec<usize> = (0..n).filter(|&j| row[j] == 1).collect();
            match ones.as_slice() {
                [j] => mapping.push(*j),
                _ => {
                    return Err(StaError::InvalidPermutation(format!(
                        "row {i} has {} ones",
                        ones.len()
                    )))
                }
            }
        }
        Self::from_mapping(mapping)
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.len();
        self.mapping
            .iter()
            .map(|&j| (0..n).map(|c| u8::from(c == j)).collect())
            .collect()
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Exchanges positions `i` and `j`.
    pub fn swap(n: usize, i: usize, j: usize) -> Result<Self> {
        check_positions(n, &[i, j])?;
        let mut t = Self::identity(n);
        t.mapping.swap(i, j);
        Ok(t)
    }

    /// Moves the item at position `from` so that it ends up at position `to`.
    pub fn insert(n: usize, from: usize, to: usize) -> Result<Self> {
        check_positions(n, &[from, to])?;
        let mut mapping: Vec<usize> = (0..n).collect();
        let moved = mapping.remove(from);
        mapping.insert(to, moved);
        Ok(Self { mapping })
    }

    /// Reverses the positions `i..=j`.
    pub fn reverse(n: usize, i: usize, j: usize) -> Result<Self> {
        check_positions(n, &[i, j])?;
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let mut t = Self::identity(n);
        t.mapping[lo..=hi].reverse();
        Ok(t)
    }

    pub fn random_swap(n: usize, rng: &mut RngStream) -> Self {
        let (i, j) = distinct_pair(n, rng);
        Self::swap(n, i, j).expect("positions drawn in range")
    }

    pub fn random_insert(n: usize, rng: &mut RngStream) -> Self {
        let (from, to) = distinct_pair(n, rng);
        Self::insert(n, from, to).expect("positions drawn in range")
    }

    pub fn random_reverse(n: usize, rng: &mut RngStream) -> Self {
        let (i, j) = distinct_pair(n, rng);
        Self::reverse(n, i, j).expect("positions drawn in range")
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The single transform equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &ElementaryTransform) -> Result<Self> {
        if self.len() != next.len() {
            return Err(StaError::DimensionMismatch {
                expected: self.len(),
                actual: next.len(),
            });
        }
        Ok(Self {
            mapping: next.mapping.iter().map(|&k| self.mapping[k]).collect(),
        })
    }
}

fn check_positions(n: usize, positions: &[usize]) -> Result<()> {
    match positions.iter().find(|&&p| p >= n) {
        Some(p) => Err(StaError::InvalidParameter(format!(
            "position {p} out of range for length {n}"
        ))),
        None => Ok(()),
    }
}

/// Two distinct positions in `0..n`. Panics if `n < 2`.
fn distinct_pair(n: usize, rng: &mut RngStream) -> (usize, usize) {
    assert!(n >= 2, "a move needs at least two positions");
    let i = rng.index(0..n);
    let mut j = rng.index(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

pub fn apply_transformation(t: &ElementaryTransform, s: &Sequence) -> Result<Sequence> {
    if t.len() != s.len() {
        return Err(StaError::DimensionMismatch {
            expected: s.len(),
            actual: t.len(),
        });
    }
    Ok(Sequence(t.mapping.iter().map(|&j| s.0[j]).collect()))
}

/// Neighborhood families used by the discrete search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveFamily {
    Swap,
    Insert,
    Reverse,
}

impl MoveFamily {
    pub const ALL: [MoveFamily; 3] = [MoveFamily::Swap, MoveFamily::Insert, MoveFamily::Reverse];

    pub fn draw(self, n: usize, rng: &mut RngStream) -> ElementaryTransform {
        match self {
            MoveFamily::Swap => ElementaryTransform::random_swap(n, rng),
            MoveFamily::Insert => ElementaryTransform::random_insert(n, rng),
            MoveFamily::Reverse => ElementaryTransform::random_reverse(n, rng),
        }
    }
}

/// Cities in the plane with Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    cities: Vec<(f64, f64)>,
    dist: Vec<f64>,
}

impl TspInstance {
    pub fn new(cities: Vec<(f64, f64)>) -> Result<Self> {
        if cities.len() < 2 {
            return Err(StaError::InvalidParameter(format!(
                "an instance needs at least 2 cities (got {})",
                cities.len()
            )));
        }
        if let Some(i) = cities
            .iter()
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(StaError::InvalidParameter(format!(
                "city {} has non-finite coordinates",
                i + 1
            )));
        }
        let n = cities.len();
        let mut dist = vec![0.0; n * n];
        for (i, a) in cities.iter().enumerate() {
            for (j, b) in cities.iter().enumerate() {
                dist[i * n + j] = (a.0 - b.0).hypot(a.1 - b.1);
            }
        }
        Ok(Self { cities, dist })
    }

    /// `n` cities uniform in `[0, side]²`.
    pub fn random_uniform(n: usize, side: f64, rng: &mut RngStream) -> Result<Self> {
        let cities = (0..n)
            .map(|_| (rng.uniform(0.0, side), rng.uniform(0.0, side)))
            .collect();
        Self::new(cities)
    }

    pub fn len(&self) -> usize {
        self.cities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }

    pub fn cities(&self) -> &[(f64, f64)] {
        &self.cities
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.len() + b]
    }

    fn closed_length(&self, order: &[usize]) -> f64 {
        let n = order.len();
        (0..n)
            .map(|k| self.distance(order[k], order[(k + 1) % n]))
            .sum()
    }
}

/// Length of the closed tour visiting the cities in order `s`.
pub fn tour_length(inst: &TspInstance, s: &Sequence) -> Result<f64> {
    if s.len() != inst.len() {
        return Err(StaError::InvalidPermutation(format!(
            "tour visits {} cities, instance has {}",
            s.len(),
            inst.len()
        )));
    }
    Ok(inst.closed_length(s.order()))
}

/// Incumbent search over closed tours.
///
/// Starts from the best of `se` random tours. Each iteration draws `se`
/// candidates from every move family, keeps the overall best and replaces the
/// incumbent only on strict improvement.
pub fn solve_discrete(inst: &TspInstance, params: &SearchParams) -> Result<SolveResult<Sequence>> {
    params.validate()?;
    let n = inst.len();
    let se = params.se;
    let mut rng = RngStream::from_seed(params.seed);

    let initial: Vec<Sequence> = (0..se).map(|_| Sequence::random(n, &mut rng)).collect();
    let lengths: Vec<f64> = initial
        .iter()
        .map(|s| inst.closed_length(s.order()))
        .collect();
    let first = best_index(lengths.iter().copied()).ok_or(StaError::EmptyCandidates)?;
    let mut best_len = lengths[first];
    let mut best = initial
        .into_iter()
        .nth(first)
        .ok_or(StaError::EmptyCandidates)?;
    let mut evaluations = se;

    let mut history = Vec::with_capacity(params.max_iterations + 1);
    history.push((0, best_len));
    let mut candidates = Vec::with_capacity(se * MoveFamily::ALL.len());
    for k in 1..=params.max_iterations {
        candidates.clear();
        for family in MoveFamily::ALL {
            for _ in 0..se {
                let t = family.draw(n, &mut rng);
                candidates.push(apply_transformation(&t, &best)?);
            }
        }
        evaluations += candidates.len();
        let lengths = candidates.iter().map(|c| inst.closed_length(c.order()));
        if let Some(i) = best_index(lengths) {
            let len = inst.closed_length(candidates[i].order());
            if len < best_len {
                best_len = len;
                best = candidates.swap_remove(i);
            }
        }
        history.push((k, best_len));
    }

    Ok(SolveResult {
        best_point: best,
        best_value: best_len,
        history,
        evaluations,
        translation_events: 0,
        degenerate_rotations: 0,
    })
}
