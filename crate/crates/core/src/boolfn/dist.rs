use rand::{Rng, RngCore};

use super::point::{full_mask, Mask, Point};
use super::BoolFnError;

/// Exhaustive weight tables for product distributions stop here.
pub const MAX_PRODUCT_N: usize = 20;

/// A distribution over `{0,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Distribution {
    Uniform,
    /// Finite support with a cumulative table for binary-search sampling.
    Explicit(Explicit),
    /// Coordinate `i` is 1 with probability `p[i]`.
    ProductBias(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Explicit {
    points: Vec<Point>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Explicit {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Distribution {
    pub fn explicit(support: Vec<(Point, f64)>) -> Result<Self, BoolFnError> {
        if support.is_empty() {
            return Err(BoolFnError::BadDistribution("empty support".into()));
        }
        let n = support[0].0.n();
        let mut total = 0.0;
        let mut cumulative = Vec::with_capacity(support.len());
        for (p, w) in &support {
            if p.n() != n {
                return Err(BoolFnError::DimensionMismatch { expected: n, got: p.n() });
            }
            if !(*w >= 0.0) || !w.is_finite() {
                return Err(BoolFnError::BadDistribution(format!("weight {w} is negative")));
            }
            total += w;
            cumulative.push(total);
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(BoolFnError::BadDistribution(format!("weights sum to {total}, not 1")));
        }
        let (points, weights) = support.into_iter().unzip();
        Ok(Distribution::Explicit(Explicit { points, weights, cumulative }))
    }

    pub fn product(p: Vec<f64>) -> Result<Self, BoolFnError> {
        if p.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(BoolFnError::BadDistribution("bias outside [0,1]".into()));
        }
        Ok(Distribution::ProductBias(p))
    }

    /// `P_{1/r}`: each coordinate is 1 with probability `1 - 1/r`.
    pub fn biased_toward_one(n: usize, r: f64) -> Self {
        Distribution::ProductBias(vec![1.0 - 1.0 / r; n])
    }

    /// Dimension, when the distribution pins one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Distribution::Uniform => None,
            Distribution::Explicit(e) => Some(e.points[0].n()),
            Distribution::ProductBias(p) => Some(p.len()),
        }
    }

    pub fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Point {
        match self {
            Distribution::Uniform => Point::new(n, rng.next_u64() & full_mask(n)),
            Distribution::Explicit(e) => {
                let u: f64 = rng.gen::<f64>() * e.cumulative[e.cumulative.len() - 1];
                let i = e.cumulative.partition_point(|&c| c <= u).min(e.points.len() - 1);
                e.points[i]
            }
            Distribution::ProductBias(p) => {
                let mut bits = 0u64;
                for (i, &q) in p.iter().enumerate().take(n) {
                    if rng.gen::<f64>() < q {
                        bits |= 1 << i;
                    }
                }
                Point::new(n, bits)
            }
        }
    }

    /// Probability of each point, for exhaustive weighted sums.
    pub fn weights(&self, n: usize) -> Result<Weights, BoolFnError> {
        match self {
            Distribution::Uniform => Ok(Weights::Uniform),
            Distribution::Explicit(e) => {
                if e.points[0].n() != n {
                    return Err(BoolFnError::DimensionMismatch { expected: n, got: e.points[0].n() });
                }
                Ok(Weights::Sparse(
                    e.points.iter().map(|p| p.bits()).zip(e.weights.iter().copied()).collect(),
                ))
            }
            Distribution::ProductBias(p) => {
                if p.len() != n {
                    return Err(BoolFnError::DimensionMismatch { expected: n, got: p.len() });
                }
                if n > MAX_PRODUCT_N {
                    return Err(BoolFnError::TooLarge { n, max: MAX_PRODUCT_N });
                }
                let mut w = vec![1.0f64; 1 << n];
                for (i, &q) in p.iter().enumerate() {
                    for (j, v) in w.iter_mut().enumerate() {
                        *v *= if j >> i & 1 == 1 { q } else { 1.0 - q };
                    }
                }
                Ok(Weights::Dense(w))
            }
        }
    }
}

/// Point probabilities in a form suited to summing over bitsets.
#[derive(Clone, Debug)]
pub enum Weights {
    Uniform,
    Dense(Vec<f64>),
    Sparse(Vec<(u64, f64)>),
}

impl Weights {
    /// Mass of the set of points `j` with bit `j` set in `words`, over a cube of `n` variables.
    pub fn mass(&self, n: usize, words: &[u64]) -> f64 {
        match self {
            Weights::Uniform => {
                let c: u64 = words.iter().map(|w| w.count_ones() as u64).sum();
                c as f64 / (1u64 << n) as f64
            }
            Weights::Dense(w) => {
                let mut s = 0.0;
                for (wi, &word) in words.iter().enumerate() {
                    let mut rest = word;
                    while rest != 0 {
                        let b = rest.trailing_zeros() as usize;
                        s += w[wi * 64 + b];
                        rest &= rest - 1;
                    }
                }
                s
            }
            Weights::Sparse(pts) => pts
                .iter()
                .filter(|(j, _)| words[(*j >> 6) as usize] >> (j & 63) & 1 == 1)
                .map(|(_, w)| w)
                .sum(),
        }
    }
}

/// A point of `{0,1,*}^n`: coordinates in `free` stay variables, the rest are fixed to `ones`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RestrictionSample {
    pub n: usize,
    pub free: Mask,
    pub ones: Mask,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Zero,
    One,
    Free,
}

impl RestrictionSample {
    pub fn cell(&self, i: usize) -> Cell {
        if self.free >> i & 1 == 1 {
            Cell::Free
        } else if self.ones >> i & 1 == 1 {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    /// Fill the free cells from `x`.
    pub fn apply(&self, x: Point) -> Point {
        Point::new(self.n, (x.bits() & self.free) | self.ones)
    }
}

/// Each coordinate is free with probability `p`, otherwise 0 or 1 with equal odds.
pub fn sample_restriction(p: f64, n: usize, rng: &mut dyn RngCore) -> RestrictionSample {
    let mut free = 0u64;
    let mut ones = 0u64;
    for i in 0..n {
        if rng.gen::<f64>() < p {
            free |= 1 << i;
        } else if rng.gen::<bool>() {
            ones |= 1 << i;
        }
    }
    RestrictionSample { n, free, ones }
}
