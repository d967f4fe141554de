//! Measurement models and their reconstruction spaces.
//!
//! Three built-in probability-operator measurements are supported:
//!
//! * `Coin` — two outcomes, one coordinate `u` on the segment [-1, 1] with
//!   `p1 = (1+u)/2`, `p2 = (1-u)/2`;
//! * `CrossHair4` — four outcomes combining two projective qubit
//!   measurements, coordinates `(x, y)` on the closed unit disk with
//!   `p1,p2 = (1 +- x)/4` and `p3,p4 = (1 +- y)/4`;
//! * `Trine3` — the three-outcome trine, `p1 = (1+x)/3`,
//!   `p2,p3 = (2 - x +- sqrt(3) y)/6`, also on the unit disk.
//!
//! Each model knows which probability vectors are permissible, i.e. which
//! vectors arise from a point of the reconstruction space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for the equality constraints of `is_permissible`.
/// Probabilities are O(1) and the coordinate maps are affine, so a fixed
/// absolute tolerance is adequate.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Tolerance used when validating that a probability vector sums to one.
pub const SUM_TOL: f64 = 1e-12;

/// A point of the reconstruction space: `(u)` for the coin, `(x, y)` for
/// the disk models. Stored inline so points are `Copy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: [f64; 2],
    dim: u8,
}

impl Point {
    pub fn one(u: f64) -> Self {
        Point { coords: [u, 0.0], dim: 1 }
    }

    pub fn two(x: f64, y: f64) -> Self {
        Point { coords: [x, y], dim: 2 }
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        match coords {
            [u] => Ok(Point::one(*u)),
            [x, y] => Ok(Point::two(*x, *y)),
            _ => Err(Error::InvalidArgument(format!(
                "a point needs 1 or 2 coordinates, got {}",
                coords.len()
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    /// Squared Euclidean norm of the coordinates.
    pub fn norm_sq(&self) -> f64 {
        self.coords().iter().map(|c| c * c).sum()
    }
}

/// A probability vector over the POM outcomes (K <= 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probabilities {
    p: [f64; 4],
    len: u8,
}

impl Probabilities {
    /// Validates non-negativity (up to a tiny tolerance, clamped to zero)
    /// and unit sum.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() > 4 {
            return Err(Error::InvalidProbabilities(format!(
                "need 1..=4 outcome probabilities, got {}",
                values.len()
            )));
        }
        let mut p = [0.0f64; 4];
        let mut sum = 0.0;
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < -CONSTRAINT_TOL {
                return Err(Error::InvalidProbabilities(format!(
                    "p[{k}] = {v} is negative"
                )));
            }
            p[k] = v.max(0.0);
            sum += p[k];
        }
        if (sum - 1.0).abs() > SUM_TOL.max(CONSTRAINT_TOL) {
            return Err(Error::InvalidProbabilities(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Probabilities { p, len: values.len() as u8 })
    }

    /// Builds from an affine coordinate map without the positivity check;
    /// used internally for points already known to lie in the closed space.
    fn from_map(values: &[f64]) -> Self {
        let mut p = [0.0f64; 4];
        p[..values.len()].copy_from_slice(values);
        for v in p.iter_mut() {
            if *v < 0.0 && *v > -SUM_TOL {
                *v = 0.0;
            }
        }
        Probabilities { p, len: values.len() as u8 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p[..self.len as usize]
    }

    /// Sum of squared components.
    pub fn norm_sq(&self) -> f64 {
        self.as_slice().iter().map(|v| v * v).sum()
    }
}

/// Click counts for the K outcomes of a POM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    n: [u64; 4],
    len: u8,
}

impl Counts {
    pub fn new(pom: &Pom, n: &[u64]) -> Result<Self> {
        if n.len() != pom.num_outcomes() {
            return Err(Error::DimensionMismatch {
                expected: pom.num_outcomes(),
                got: n.len(),
            });
        }
        let mut arr = [0u64; 4];
        arr[..n.len()].copy_from_slice(n);
        Ok(Counts { n: arr, len: n.len() as u8 })
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.n[..self.len as usize]
    }

    /// Total number of clicks N.
    pub fn total(&self) -> u64 {
        self.as_slice().iter().sum()
    }

    /// Observed frequencies n_k / N. Errors when N = 0.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyCounts);
        }
        Ok(self
            .as_slice()
            .iter()
            .map(|&nk| nk as f64 / total as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PomKind {
    Coin,
    #[serde(rename = "crosshair4")]
    CrossHair4,
    #[serde(rename = "trine3")]
    Trine3,
}

/// A measurement model: outcome count, reconstruction-space dimension,
/// probability map and permissibility constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pom {
    pub kind: PomKind,
}

impl Pom {
    pub fn new(kind: PomKind) -> Self {
        Pom { kind }
    }

    pub fn coin() -> Self {
        Pom::new(PomKind::Coin)
    }

    pub fn crosshair4() -> Self {
        Pom::new(PomKind::CrossHair4)
    }

    pub fn trine3() -> Self {
        Pom::new(PomKind::Trine3)
    }

    /// Parses the configuration key: "coin" | "crosshair4" | "trine3".
    pub fn from_key(key: &str) -> Result<Self> {
        match key {
            "coin" => Ok(Pom::coin()),
            "crosshair4" => Ok(Pom::crosshair4()),
            "trine3" => Ok(Pom::trine3()),
            other => Err(Error::InvalidArgument(format!(
                "unknown POM '{other}' (expected coin | crosshair4 | trine3)"
            ))),
        }
    }

    pub fn key(&self) -> &'static str {
        match self.kind {
            PomKind::Coin => "coin",
            PomKind::CrossHair4 => "crosshair4",
            PomKind::Trine3 => "trine3",
        }
    }

    /// Number of outcomes K.
    pub fn num_outcomes(&self) -> usize {
        match self.kind {
            PomKind::Coin => 2,
            PomKind::CrossHair4 => 4,
            PomKind::Trine3 => 3,
        }
    }

    /// Number of independent coordinates d.
    pub fn dimension(&self) -> usize {
        match self.kind {
            PomKind::Coin => 1,
            PomKind::CrossHair4 | PomKind::Trine3 => 2,
        }
    }

    fn check_dim(&self, pt: &Point) -> Result<()> {
        if pt.dim() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: pt.dim(),
            });
        }
        Ok(())
    }

    /// True iff the point lies in the closed reconstruction space
    /// (segment for the coin, unit disk for the disk models).
    pub fn contains(&self, pt: &Point) -> bool {
        if pt.dim() != self.dimension() {
            return false;
        }
        match self.kind {
            PomKind::Coin => pt.coords()[0].abs() <= 1.0 + SUM_TOL,
            PomKind::CrossHair4 | PomKind::Trine3 => pt.norm_sq() <= 1.0 + SUM_TOL,
        }
    }

    /// The affine probability map of the model.
    pub fn probabilities(&self, pt: &Point) -> Result<Probabilities> {
        self.check_dim(pt)?;
        let c = pt.coords();
        let p = match self.kind {
            PomKind::Coin => {
                let u = c[0];
                Probabilities::from_map(&[0.5 * (1.0 + u), 0.5 * (1.0 - u)])
            }
            PomKind::CrossHair4 => {
                let (x, y) = (c[0], c[1]);
                Probabilities::from_map(&[
                    0.25 * (1.0 + x),
                    0.25 * (1.0 - x),
                    0.25 * (1.0 + y),
                    0.25 * (1.0 - y),
                ])
            }
            PomKind::Trine3 => {
                let (x, y) = (c[0], c[1]);
                let s3 = 3.0f64.sqrt();
                Probabilities::from_map(&[
                    (1.0 + x) / 3.0,
                    (2.0 - x + s3 * y) / 6.0,
                    (2.0 - x - s3 * y) / 6.0,
                ])
            }
        };
        Ok(p)
    }

    /// Checks the constraint factors that identify permissible probability
    /// vectors: positivity, unit sum, the per-model linear constraints, and
    /// the quadratic purity bound. Equalities hold within `CONSTRAINT_TOL`.
    pub fn is_permissible(&self, p: &Probabilities) -> Result<bool> {
        if p.len() != self.num_outcomes() {
            return Err(Error::DimensionMismatch {
                expected: self.num_outcomes(),
                got: p.len(),
            });
        }
        let v = p.as_slice();
        if v.iter().any(|&pk| pk < -CONSTRAINT_TOL) {
            return Ok(false);
        }
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > CONSTRAINT_TOL {
            return Ok(false);
        }
        let psq = p.norm_sq();
        let ok = match self.kind {
            PomKind::Coin => true,
            PomKind::CrossHair4 => {
                (v[0] + v[1] - 0.5).abs() <= CONSTRAINT_TOL
                    && (v[2] + v[3] - 0.5).abs() <= CONSTRAINT_TOL
                    && 3.0 - 8.0 * psq >= -CONSTRAINT_TOL
            }
            PomKind::Trine3 => 1.0 - 2.0 * psq >= -CONSTRAINT_TOL,
        };
        Ok(ok)
    }

    /// The coordinate point whose probabilities equal the observed
    /// frequencies, when such a point exists in the closed reconstruction
    /// space. `None` when the candidate falls outside the space or a
    /// frequency denominator vanishes.
    ///
    /// This is the stationary point of the unconstrained log-likelihood and
    /// the natural MLE seed.
    pub fn point_from_frequencies(&self, counts: &Counts) -> Result<Option<Point>> {
        if counts.len as usize != self.num_outcomes() {
            return Err(Error::DimensionMismatch {
                expected: self.num_outcomes(),
                got: counts.len as usize,
            });
        }
        if counts.total() == 0 {
            return Err(Error::EmptyCounts);
        }
        let n = counts.as_slice();
        let candidate = match self.kind {
            PomKind::Coin => {
                let total = (n[0] + n[1]) as f64;
                Some(Point::one((n[0] as f64 - n[1] as f64) / total))
            }
            PomKind::CrossHair4 => {
                let nx = n[0] + n[1];
                let ny = n[2] + n[3];
                if nx == 0 || ny == 0 {
                    None
                } else {
                    Some(Point::two(
                        (n[0] as f64 - n[1] as f64) / nx as f64,
                        (n[2] as f64 - n[3] as f64) / ny as f64,
                    ))
                }
            }
            PomKind::Trine3 => {
                let total = counts.total() as f64;
                let nu: Vec<f64> = n.iter().map(|&k| k as f64 / total).collect();
                Some(Point::two(
                    3.0 * nu[0] - 1.0,
                    3.0f64.sqrt() * (nu[1] - nu[2]),
                ))
            }
        };
        Ok(candidate.filter(|pt| self.contains(pt)))
    }

    /// Affine representation of the probability map:
    /// `p_k = c0 + cx * x + cy * y` (cy = 0 for the coin).
    pub(crate) fn affine_map(&self) -> Vec<(f64, f64, f64)> {
        let s3 = 3.0f64.sqrt();
        match self.kind {
            PomKind::Coin => vec![(0.5, 0.5, 0.0), (0.5, -0.5, 0.0)],
            PomKind::CrossHair4 => vec![
                (0.25, 0.25, 0.0),
                (0.25, -0.25, 0.0),
                (0.25, 0.0, 0.25),
                (0.25, 0.0, -0.25),
            ],
            PomKind::Trine3 => vec![
                (1.0 / 3.0, 1.0 / 3.0, 0.0),
                (1.0 / 3.0, -1.0 / 6.0, s3 / 6.0),
                (1.0 / 3.0, -1.0 / 6.0, -s3 / 6.0),
            ],
        }
    }

    /// Inverse of the probability map: the point mapping to `p`, if `p` is
    /// permissible. Used to place conjugate-prior targets.
    pub fn point_from_probabilities(&self, p: &Probabilities) -> Result<Point> {
        if !self.is_permissible(p)? {
            return Err(Error::OutsideDomain);
        }
        let v = p.as_slice();
        let pt = match self.kind {
            PomKind::Coin => Point::one(v[0] - v[1]),
            PomKind::CrossHair4 => Point::two(2.0 * (v[0] - v[1]), 2.0 * (v[2] - v[3])),
            PomKind::Trine3 => {
                Point::two(3.0 * v[0] - 1.0, 3.0f64.sqrt() * (v[1] - v[2]))
            }
        };
        Ok(pt)
    }
}
