//! Prior densities on the reconstruction space.
//!
//! Densities are stored unnormalized, relative to the flat coordinate
//! measure (`du` on the segment, `dx dy` on the disk). `normalize` computes
//! the constant that scales the total mass to one; all self-normalizing
//! consumers (importance sampling) work directly with the unnormalized
//! values.
//!
//! The disk Jeffreys densities diverge (integrably) at isolated boundary
//! points, so sampling uses importance weights against the flat proposal
//! rather than rejection — no finite envelope exists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pom::{Point, Pom, PomKind, Probabilities};
use crate::quad;
use crate::sampling::{self, SampleSet};
use crate::Budget;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// A named prior density. The Jeffreys and hedged variants are specific to
/// their measurement model; `compatible_with` enforces the pairing.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// Flat in the reconstruction coordinates: 1/2 on the segment,
    /// 1/pi on the disk.
    Primitive,
    /// 1 / (pi sqrt(1 - u^2)) in the coin coordinate u = p1 - p2.
    JeffreysCoin,
    /// [(1 - x^2)(1 - y^2)]^(-1/2); equivalently
    /// [1 - s^2 + s^4 sin^2(2 phi)/4]^(-1/2) in polar coordinates.
    JeffreysCrossHair4,
    /// [1 - (3/4) s^2 + (1/4) s^3 cos(3 phi)]^(-1/2).
    JeffreysTrine3,
    /// sqrt(p1 p2) on the coin segment.
    HedgedCoin,
    /// (prod_k p_k^{t_k})^alpha, peaked at the target probabilities t.
    Conjugate { target: Probabilities, alpha: f64 },
    /// Marginal of the uniform-in-purity Bloch-ball prior on the disk:
    /// (1/pi) arccosh(1/s).
    MarginalPurityDisk,
}

impl Prior {
    /// Resolves the configuration key for a given POM.
    /// Keys: "primitive" | "jeffreys" | "hedged" | "conjugate" | "marginal-purity".
    pub fn from_key(
        key: &str,
        pom: &Pom,
        target: Option<&[f64]>,
        alpha: Option<f64>,
    ) -> Result<Self> {
        let prior = match key {
            "primitive" => Prior::Primitive,
            "jeffreys" => match pom.kind {
                PomKind::Coin => Prior::JeffreysCoin,
                PomKind::CrossHair4 => Prior::JeffreysCrossHair4,
                PomKind::Trine3 => Prior::JeffreysTrine3,
            },
            "hedged" => Prior::HedgedCoin,
            "marginal-purity" => Prior::MarginalPurityDisk,
            "conjugate" => {
                let t = target.ok_or_else(|| {
                    Error::InvalidArgument("conjugate prior requires 'target'".into())
                })?;
                let alpha = alpha.ok_or_else(|| {
                    Error::InvalidArgument("conjugate prior requires 'alpha'".into())
                })?;
                if !(alpha > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "conjugate strength alpha must be positive, got {alpha}"
                    )));
                }
                let target = Probabilities::new(t)?;
                if !pom.is_permissible(&target)? {
                    return Err(Error::InvalidArgument(
                        "conjugate target is not permissible for this POM".into(),
                    ));
                }
                Prior::Conjugate { target, alpha }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown prior '{other}' (expected primitive | jeffreys | hedged | \
                     conjugate | marginal-purity)"
                )))
            }
        };
        if !prior.compatible_with(pom) {
            return Err(Error::IncompatiblePrior {
                prior: prior.key().into(),
                pom: pom.key().into(),
            });
        }
        Ok(prior)
    }

    pub fn key(&self) -> &'static str {
        match self {
            Prior::Primitive => "primitive",
            Prior::JeffreysCoin | Prior::JeffreysCrossHair4 | Prior::JeffreysTrine3 => "jeffreys",
            Prior::HedgedCoin => "hedged",
            Prior::Conjugate { .. } => "conjugate",
            Prior::MarginalPurityDisk => "marginal-purity",
        }
    }

    pub fn compatible_with(&self, pom: &Pom) -> bool {
        match self {
            Prior::Primitive => true,
            Prior::JeffreysCoin | Prior::HedgedCoin => pom.kind == PomKind::Coin,
            Prior::JeffreysCrossHair4 => pom.kind == PomKind::CrossHair4,
            Prior::JeffreysTrine3 => pom.kind == PomKind::Trine3,
            Prior::Conjugate { target, .. } => target.len() == pom.num_outcomes(),
            Prior::MarginalPurityDisk => pom.dimension() == 2,
        }
    }

    fn check(&self, pom: &Pom) -> Result<()> {
        if self.compatible_with(pom) {
            Ok(())
        } else {
            Err(Error::IncompatiblePrior {
                prior: self.key().into(),
                pom: pom.key().into(),
            })
        }
    }

    /// Unnormalized density at a point of the closed reconstruction space,
    /// relative to the flat coordinate measure. May return `+inf` on the
    /// measure-zero singular set of the disk Jeffreys and marginal-purity
    /// densities.
    pub fn density(&self, pom: &Pom, pt: &Point) -> Result<f64> {
        self.check(pom)?;
        if !pom.contains(pt) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.density_unchecked(pom, pt))
    }

    /// Density without the domain check; callers guarantee `pt` lies in the
    /// closed space.
    pub(crate) fn density_unchecked(&self, pom: &Pom, pt: &Point) -> f64 {
        let c = pt.coords();
        match self {
            Prior::Primitive => match pom.dimension() {
                1 => 0.5,
                _ => 1.0 / PI,
            },
            Prior::JeffreysCoin => {
                let u = c[0];
                1.0 / (PI * (1.0 - u * u).max(0.0).sqrt())
            }
            Prior::HedgedCoin => {
                let u = c[0];
                0.5 * (1.0 - u * u).max(0.0).sqrt()
            }
            Prior::JeffreysCrossHair4 => {
                let (x, y) = (c[0], c[1]);
                let bracket = ((1.0 - x * x) * (1.0 - y * y)).max(0.0);
                1.0 / bracket.sqrt()
            }
            Prior::JeffreysTrine3 => {
                let (x, y) = (c[0], c[1]);
                let s2 = x * x + y * y;
                // s^3 cos(3 phi) = x^3 - 3 x y^2
                let bracket = (1.0 - 0.75 * s2 + 0.25 * (x * x * x - 3.0 * x * y * y)).max(0.0);
                1.0 / bracket.sqrt()
            }
            Prior::Conjugate { target, alpha } => {
                let p = pom
                    .probabilities(pt)
                    .expect("dimension checked by compatible_with");
                let mut log_dens = 0.0;
                for (&tk, &pk) in target.as_slice().iter().zip(p.as_slice()) {
                    if tk > 0.0 {
                        log_dens += tk * pk.ln();
                    }
                }
                (alpha * log_dens).exp()
            }
            Prior::MarginalPurityDisk => {
                let s = pt.norm_sq().sqrt();
                if s >= 1.0 {
                    0.0
                } else if s == 0.0 {
                    f64::INFINITY
                } else {
                    (1.0 / s).acosh() / PI
                }
            }
        }
    }

    /// Importance weight against the flat proposal used by `sample`.
    pub(crate) fn proposal_weight(&self, pom: &Pom, pt: &Point) -> f64 {
        let proposal = match pom.dimension() {
            1 => 0.5,
            _ => 1.0 / PI,
        };
        self.density_unchecked(pom, pt) / proposal
    }

    /// Normalization constant Z with `int density / Z = 1`.
    ///
    /// Uses closed forms where available (primitive, marginal-purity) and
    /// deterministic adaptive quadrature otherwise; `stderr` is zero on
    /// those paths. See `normalize_mc` for the Monte Carlo estimate.
    pub fn normalize(&self, pom: &Pom, budget: &Budget) -> Result<Normalization> {
        self.check(pom)?;
        let z = match self {
            Prior::Primitive => 1.0,
            Prior::MarginalPurityDisk => 1.0, // radial content is exactly 1 at s = 1
            _ => match pom.dimension() {
                1 => segment_mass(self, pom, -1.0, 1.0, budget.quad_tol)?,
                _ => disk_mass(self, pom, 0.0, 1.0, 0.0, TAU, budget.quad_tol)?,
            },
        };
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::IntegrationFailure(format!(
                "normalization of '{}' returned {z}",
                self.key()
            )));
        }
        Ok(Normalization { z, stderr: 0.0 })
    }

    /// Monte Carlo estimate of the normalization constant (mean importance
    /// weight), with its standard error.
    pub fn normalize_mc(&self, pom: &Pom, budget: &Budget) -> Result<Normalization> {
        self.check(pom)?;
        let sample = self.sample(pom, budget.samples, budget.seed)?;
        let n = sample.len() as f64;
        let mean: f64 = sample.weights.iter().sum::<f64>() / n;
        let var: f64 = sample
            .weights
            .iter()
            .map(|w| (w - mean) * (w - mean))
            .sum::<f64>()
            / (n * (n - 1.0));
        Ok(Normalization { z: mean, stderr: var.sqrt() })
    }

    /// Weighted sample of `count` points: flat-proposal draws with
    /// self-normalizing importance weights. Deterministic for a fixed seed.
    pub fn sample(&self, pom: &Pom, count: usize, seed: u64) -> Result<SampleSet> {
        self.check(pom)?;
        sampling::sample_weighted(pom, count, seed, |pt| self.proposal_weight(pom, pt))
    }

    /// Equal-size tiling of the disk into `rings x slices` cells.
    pub fn tiling(
        &self,
        pom: &Pom,
        rings: usize,
        slices: usize,
        variant: TilingVariant,
        budget: &Budget,
    ) -> Result<Tiling> {
        build_tiling(self, pom, rings, slices, variant, budget)
    }
}

/// Result of a normalization computation.
#[derive(Debug, Clone, Copy)]
pub struct Normalization {
    pub z: f64,
    pub stderr: f64,
}

/// Purity of a qubit state with in-plane coordinates `pt` and out-of-plane
/// component `z`: (1 + r^2)/2 with r the Bloch radius.
pub fn purity(pt: &Point, z: f64) -> Result<f64> {
    let r2 = pt.norm_sq() + z * z;
    if r2 > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain);
    }
    Ok(0.5 * (1.0 + r2))
}

/// Radial content of the marginal-purity prior: the prior mass of
/// `{ s <= r }`, increasing from 0 to 1 on the closed disk.
pub fn marginal_purity_radial_cdf(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r >= 1.0 {
        1.0
    } else {
        1.0 + r * r * (1.0 / r).acosh() - (1.0 - r * r).sqrt()
    }
}

// ---------------------------------------------------------------------------
// Quadrature over the reconstruction space.
//
// Radial integrals substitute s = sin(psi); this bounds the integrands of
// every built-in density (the sqrt(1 - s^2)-type boundary divergences cancel
// against d s = cos(psi) d psi), so the adaptive rule sees no singularity.

fn segment_mass(prior: &Prior, pom: &Pom, a: f64, b: f64, tol: f64) -> Result<f64> {
    quad::integrate(
        &|t: f64| {
            let u = t.sin();
            prior.density_unchecked(pom, &Point::one(u)) * t.cos()
        },
        a.clamp(-1.0, 1.0).asin(),
        b.clamp(-1.0, 1.0).asin(),
        tol,
    )
}

fn disk_mass(
    prior: &Prior,
    pom: &Pom,
    r_lo: f64,
    r_hi: f64,
    phi_lo: f64,
    phi_hi: f64,
    tol: f64,
) -> Result<f64> {
    if r_hi <= r_lo || phi_hi <= phi_lo {
        return Ok(0.0);
    }
    let psi_lo = r_lo.clamp(0.0, 1.0).asin();
    let psi_hi = r_hi.clamp(0.0, 1.0).asin();
    let inner_tol = (tol / (phi_hi - phi_lo)).max(1e-14);
    quad::integrate(
        &|phi: f64| {
            let (cp, sp) = (phi.cos(), phi.sin());
            quad::integrate(
                &|psi: f64| {
                    let s = psi.sin();
                    let pt = Point::two(s * cp, s * sp);
                    prior.density_unchecked(pom, &pt) * s * psi.cos()
                },
                psi_lo,
                psi_hi,
                inner_tol,
            )
            .unwrap_or(f64::NAN)
        },
        phi_lo,
        phi_hi,
        tol,
    )
}

// ---------------------------------------------------------------------------
// Tilings

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TilingVariant {
    /// Straight rays of equal marginal angular content; tree-ring boundaries
    /// are per-slice conditional radial quantiles.
    RadialRays,
    /// Concentric circles of equal marginal radial content; pie-slice
    /// boundaries are per-ring conditional angular quantiles.
    ConcentricRings,
}

/// An equal-size tiling of the unit disk: `rings x slices` cells, each of
/// prior mass `1/(rings*slices)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tiling {
    pub variant: TilingVariant,
    pub rings: usize,
    pub slices: usize,
    /// Marginal radial quantiles (increasing, last = 1).
    pub ring_radii: Vec<f64>,
    /// Marginal angular quantiles from phi = 0 (increasing, last = 2 pi).
    pub slice_boundaries: Vec<f64>,
    /// Cell boundaries in the conditioned direction:
    /// `RadialRays` — per-slice radii, `slices` rows of `rings` values;
    /// `ConcentricRings` — per-ring angles, `rings` rows of `slices` values.
    pub cell_boundaries: Vec<Vec<f64>>,
}

impl Tiling {
    /// Cell index (ring, slice) of a point of the open disk.
    pub fn locate(&self, pt: &Point) -> (usize, usize) {
        let c = pt.coords();
        let r = pt.norm_sq().sqrt();
        let phi = c[1].atan2(c[0]).rem_euclid(TAU);
        match self.variant {
            TilingVariant::RadialRays => {
                let slice = upper_index(&self.slice_boundaries, phi);
                let ring = upper_index(&self.cell_boundaries[slice], r);
                (ring, slice)
            }
            TilingVariant::ConcentricRings => {
                let ring = upper_index(&self.ring_radii, r);
                let slice = upper_index(&self.cell_boundaries[ring], phi);
                (ring, slice)
            }
        }
    }
}

/// Index of the first boundary >= v (clamped to the last cell).
fn upper_index(bounds: &[f64], v: f64) -> usize {
    bounds
        .iter()
        .position(|&b| v <= b)
        .unwrap_or(bounds.len() - 1)
}

/// Finds boundaries where a cumulative integral from `lo` reaches each of
/// `targets` (ascending), by bisection with incremental integration.
fn quantile_sequence<F>(
    targets: &[f64],
    lo: f64,
    hi: f64,
    mass: F,
    xtol: f64,
) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut out = Vec::with_capacity(targets.len());
    let mut x_lo = lo;
    let mut cum_lo = 0.0;
    for (i, &target) in targets.iter().enumerate() {
        if i + 1 == targets.len() {
            out.push(hi); // full content by construction
            break;
        }
        let mut a = x_lo;
        let mut ca = cum_lo;
        let mut b = hi;
        for _ in 0..90 {
            if (b - a).abs() <= xtol {
                break;
            }
            let m = 0.5 * (a + b);
            let dm = mass(a, m)?;
            if ca + dm < target {
                a = m;
                ca += dm;
            } else {
                b = m;
            }
        }
        if !(ca.is_finite()) {
            return Err(Error::IntegrationFailure(
                "cumulative content is not finite; integration too coarse".into(),
            ));
        }
        let boundary = 0.5 * (a + b);
        out.push(boundary);
        x_lo = boundary;
        cum_lo = target;
    }
    Ok(out)
}

fn build_tiling(
    prior: &Prior,
    pom: &Pom,
    rings: usize,
    slices: usize,
    variant: TilingVariant,
    budget: &Budget,
) -> Result<Tiling> {
    prior.check(pom)?;
    if pom.dimension() != 2 {
        return Err(Error::InvalidArgument(
            "tilings are defined for disk POM priors only".into(),
        ));
    }
    if rings == 0 || slices == 0 {
        return Err(Error::InvalidArgument("rings and slices must be >= 1".into()));
    }
    let tol = budget.quad_tol;
    let z = prior.normalize(pom, budget)?.z;

    let ring_targets: Vec<f64> = (1..=rings).map(|i| i as f64 / rings as f64).collect();
    let slice_targets: Vec<f64> = (1..=slices).map(|j| j as f64 / slices as f64).collect();

    // Marginal radial quantiles. The marginal-purity radial content has a
    // closed form; everything else integrates.
    let ring_radii = if matches!(prior, Prior::MarginalPurityDisk) {
        quantile_sequence(
            &ring_targets,
            0.0,
            1.0,
            |a, b| Ok(marginal_purity_radial_cdf(b) - marginal_purity_radial_cdf(a)),
            1e-13,
        )?
    } else {
        quantile_sequence(
            &ring_targets,
            0.0,
            1.0,
            |a, b| Ok(disk_mass(prior, pom, a, b, 0.0, TAU, tol)? / z),
            1e-13,
        )?
    };
    for w in ring_radii.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::IntegrationFailure(
                "ring radii are not strictly increasing; integration too coarse".into(),
            ));
        }
    }

    // Marginal angular quantiles from phi = 0.
    let slice_boundaries = quantile_sequence(
        &slice_targets,
        0.0,
        TAU,
        |a, b| Ok(disk_mass(prior, pom, 0.0, 1.0, a, b, tol)? / z),
        1e-12,
    )?;

    let cell_boundaries = match variant {
        TilingVariant::RadialRays => {
            // Conditional radii within each straight-ray slice.
            let mut rows = Vec::with_capacity(slices);
            let mut phi_lo = 0.0;
            for &phi_hi in &slice_boundaries {
                let slice_mass = 1.0 / slices as f64;
                let row = quantile_sequence(
                    &ring_targets,
                    0.0,
                    1.0,
                    |a, b| {
                        Ok(disk_mass(prior, pom, a, b, phi_lo, phi_hi, tol)? / (z * slice_mass))
                    },
                    1e-13,
                )?;
                rows.push(row);
                phi_lo = phi_hi;
            }
            rows
        }
        TilingVariant::ConcentricRings => {
            // Conditional angles within each concentric band.
            let mut rows = Vec::with_capacity(rings);
            let mut r_lo = 0.0;
            for &r_hi in &ring_radii {
                let band_mass = 1.0 / rings as f64;
                let row = quantile_sequence(
                    &slice_targets,
                    0.0,
                    TAU,
                    |a, b| Ok(disk_mass(prior, pom, r_lo, r_hi, a, b, tol)? / (z * band_mass)),
                    1e-12,
                )?;
                rows.push(row);
                r_lo = r_hi;
            }
            rows
        }
    };

    Ok(Tiling {
        variant,
        rings,
        slices,
        ring_radii,
        slice_boundaries,
        cell_boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn budget() -> Budget {
        Budget { samples: 100_000, seed: 11, quad_tol: 1e-9 }
    }

    #[test]
    fn jeffreys_crosshair_center_density() {
        let prior = Prior::JeffreysCrossHair4;
        let d = prior.density(&Pom::crosshair4(), &Point::two(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn jeffreys_trine_diverges_at_singular_angle() {
        // s = 1, phi = pi/3 makes the bracket vanish
        let phi = PI / 3.0;
        let pt = Point::two(phi.cos(), phi.sin());
        let d = Prior::JeffreysTrine3.density(&Pom::trine3(), &pt).unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn marginal_purity_vanishes_at_rim() {
        let d = Prior::MarginalPurityDisk
            .density(&Pom::crosshair4(), &Point::two(1.0, 0.0))
            .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn density_outside_domain_errors() {
        let r = Prior::Primitive.density(&Pom::trine3(), &Point::two(0.9, 0.9));
        assert!(matches!(r, Err(Error::OutsideDomain)));
    }

    #[test]
    fn crosshair_polar_bracket_identity_and_symmetry() {
        // the factorized form equals the polar bracket, and the density is
        // invariant under phi -> phi + pi/2
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pom = Pom::crosshair4();
        for _ in 0..10_000 {
            let s = rng.random::<f64>().sqrt();
            let phi = TAU * rng.random::<f64>();
            let pt = Point::two(s * phi.cos(), s * phi.sin());
            let d = Prior::JeffreysCrossHair4.density_unchecked(&pom, &pt);
            let bracket = 1.0 - s * s + 0.25 * s.powi(4) * (2.0 * phi).sin().powi(2);
            assert_abs_diff_eq!(1.0 / (d * d), bracket, epsilon = 1e-12);
            let rot = Point::two(
                s * (phi + PI / 2.0).cos(),
                s * (phi + PI / 2.0).sin(),
            );
            let dr = Prior::JeffreysCrossHair4.density_unchecked(&pom, &rot);
            assert_abs_diff_eq!(1.0 / (d * d), 1.0 / (dr * dr), epsilon = 1e-12);
        }
    }

    #[test]
    fn trine_symmetry_under_rotation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let pom = Pom::trine3();
        for _ in 0..10_000 {
            let s = rng.random::<f64>().sqrt();
            let phi = TAU * rng.random::<f64>();
            let pt = Point::two(s * phi.cos(), s * phi.sin());
            let rot = Point::two(
                s * (phi + TAU / 3.0).cos(),
                s * (phi + TAU / 3.0).sin(),
            );
            let d = Prior::JeffreysTrine3.density_unchecked(&pom, &pt);
            let dr = Prior::JeffreysTrine3.density_unchecked(&pom, &rot);
            assert_abs_diff_eq!(1.0 / (d * d), 1.0 / (dr * dr), epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_constants() {
        let b = budget();
        assert_eq!(
            Prior::Primitive.normalize(&Pom::crosshair4(), &b).unwrap().z,
            1.0
        );
        let zj = Prior::JeffreysCoin.normalize(&Pom::coin(), &b).unwrap().z;
        assert_abs_diff_eq!(zj, 1.0, epsilon = 1e-7);
        let zh = Prior::HedgedCoin.normalize(&Pom::coin(), &b).unwrap().z;
        assert_abs_diff_eq!(zh, PI / 4.0, epsilon = 1e-9);
    }

    #[test]
    fn jeffreys_crosshair_mass_consistent_with_mc() {
        let b = Budget { samples: 200_000, seed: 17, quad_tol: 1e-9 };
        let pom = Pom::crosshair4();
        let quad = Prior::JeffreysCrossHair4.normalize(&pom, &b).unwrap().z;
        let mc = Prior::JeffreysCrossHair4.normalize_mc(&pom, &b).unwrap();
        assert!(
            (quad - mc.z).abs() <= 3.0 * mc.stderr,
            "quad {quad} vs mc {} +- {}",
            mc.z,
            mc.stderr
        );
    }

    #[test]
    fn primitive_sample_symmetry() {
        let s = Prior::Primitive.sample(&Pom::crosshair4(), 100_000, 23).unwrap();
        assert!(s.weights.iter().all(|&w| w == 1.0));
        let (mean, stderr) = s.weighted_mean(|pt| if pt.coords()[0] > 0.0 { 1.0 } else { 0.0 });
        assert!((mean - 0.5).abs() <= 3.0 * stderr);
    }

    #[test]
    fn marginal_purity_radial_content_matches_sample() {
        let s = Prior::MarginalPurityDisk
            .sample(&Pom::crosshair4(), 100_000, 29)
            .unwrap();
        let expected = marginal_purity_radial_cdf(0.5);
        assert_abs_diff_eq!(expected, 0.463_214_1, epsilon = 1e-6);
        let (mean, stderr) =
            s.weighted_mean(|pt| if pt.norm_sq() < 0.25 { 1.0 } else { 0.0 });
        assert!(
            (mean - expected).abs() <= 3.0 * stderr,
            "mean {mean} expected {expected} stderr {stderr}"
        );
    }

    #[test]
    fn jeffreys_coin_cdf_on_grid() {
        let s = Prior::JeffreysCoin.sample(&Pom::coin(), 100_000, 31).unwrap();
        for k in 1..10 {
            let p1 = k as f64 / 10.0;
            // subsegment 0 <= p1' <= p1 corresponds to u <= 2 p1 - 1
            let u_max = 2.0 * p1 - 1.0;
            let (mean, stderr) =
                s.weighted_mean(|pt| if pt.coords()[0] <= u_max { 1.0 } else { 0.0 });
            let exact = 2.0 / PI * p1.sqrt().asin();
            assert!(
                (mean - exact).abs() <= 3.0 * stderr.max(1e-4),
                "p1 {p1}: mean {mean} exact {exact} stderr {stderr}"
            );
        }
    }

    #[test]
    fn conjugate_density_peaks_at_target() {
        let pom = Pom::trine3();
        let target = pom.probabilities(&Point::two(0.3, -0.2)).unwrap();
        let prior = Prior::Conjugate { target, alpha: 6.0 };
        let t_pt = pom.point_from_probabilities(&target).unwrap();
        let peak = prior.density(&pom, &t_pt).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let s = rng.random::<f64>().sqrt();
            let phi = TAU * rng.random::<f64>();
            let pt = Point::two(s * phi.cos(), s * phi.sin());
            assert!(prior.density(&pom, &pt).unwrap() <= peak + 1e-12);
        }
    }

    #[test]
    fn purity_values() {
        assert_abs_diff_eq!(purity(&Point::two(0.0, 0.0), 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(purity(&Point::two(0.6, 0.2), 0.0).unwrap(), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(purity(&Point::two(1.0, 0.0), 0.0).unwrap(), 1.0);
        assert!(purity(&Point::two(0.9, 0.9), 0.0).is_err());
    }

    #[test]
    fn primitive_ring_radii_are_sqrt_quantiles() {
        let t = Prior::Primitive
            .tiling(&Pom::crosshair4(), 8, 12, TilingVariant::RadialRays, &budget())
            .unwrap();
        for (i, r) in t.ring_radii.iter().enumerate() {
            let expected = ((i + 1) as f64 / 8.0).sqrt();
            assert_abs_diff_eq!(*r, expected, epsilon = 1e-9);
        }
        // uniform prior: rays at equal angles
        for (j, phi) in t.slice_boundaries.iter().enumerate() {
            assert_abs_diff_eq!(*phi, (j + 1) as f64 / 12.0 * TAU, epsilon = 1e-8);
        }
    }

    #[test]
    fn marginal_purity_two_rings() {
        let t = Prior::MarginalPurityDisk
            .tiling(&Pom::trine3(), 2, 4, TilingVariant::RadialRays, &budget())
            .unwrap();
        let r1 = t.ring_radii[0];
        // r1 solves r^2 acosh(1/r) - sqrt(1 - r^2) = -1/2
        let f = r1 * r1 * (1.0 / r1).acosh() - (1.0 - r1 * r1).sqrt();
        assert_abs_diff_eq!(f, -0.5, epsilon = 1e-9);
        assert_eq!(t.ring_radii[1], 1.0);
    }

    #[test]
    fn jeffreys_trine_tiling_cells_have_equal_mass() {
        let b = Budget { samples: 200_000, seed: 37, quad_tol: 1e-8 };
        let pom = Pom::trine3();
        let prior = Prior::JeffreysTrine3;
        for variant in [TilingVariant::RadialRays, TilingVariant::ConcentricRings] {
            let t = prior.tiling(&pom, 4, 6, variant, &b).unwrap();
            let sample = prior.sample(&pom, b.samples, b.seed).unwrap();
            let wsum: f64 = sample.weights.iter().sum();
            let mut mass = vec![0.0f64; 24];
            for (pt, &w) in sample.points.iter().zip(&sample.weights) {
                let (ring, slice) = t.locate(pt);
                mass[ring * 6 + slice] += w;
            }
            let expect = 1.0 / 24.0;
            for (idx, m) in mass.iter().enumerate() {
                let est = m / wsum;
                // crude per-cell binomial-scale bound; 4 sigma for stability
                let stderr = (expect * (1.0 - expect) / b.samples as f64).sqrt() * 2.0;
                assert!(
                    (est - expect).abs() <= 4.0 * stderr,
                    "{variant:?} cell {idx}: {est} vs {expect}"
                );
            }
        }
    }
}
