//! Point likelihood, maximum-likelihood estimation, prior likelihood,
//! Bayesian means, and multinomial data simulation.
//!
//! All likelihood arithmetic is carried out in log space; click totals in
//! the thousands would underflow raw products.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::pom::{Counts, Point, Pom};
use crate::prior::Prior;
use crate::quad;
use crate::Budget;

/// Natural log of the point likelihood: sum of `n_k ln p_k` with the
/// `0 ln 0 = 0` convention; `-inf` when an observed outcome has zero
/// probability.
pub fn log_likelihood(pom: &Pom, counts: &Counts, pt: &Point) -> f64 {
    let p = pom.probabilities(pt).expect("dimension mismatch");
    let mut ll = 0.0;
    for (&nk, &pk) in counts.as_slice().iter().zip(p.as_slice()) {
        if nk == 0 {
            continue;
        }
        if pk <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += nk as f64 * pk.ln();
    }
    ll
}

/// Maximum-likelihood estimate over the closed reconstruction space.
#[derive(Debug, Clone, Copy)]
pub struct Mle {
    pub point: Point,
    pub on_boundary: bool,
}

/// Finds the maximizer of the point likelihood.
///
/// When the frequency point lies inside the space it is the stationary point
/// of a concave function and hence the maximizer. Otherwise the maximum sits
/// on the boundary and is located by a scan plus golden-section refinement
/// over the boundary circle (segment endpoints for the coin).
pub fn mle(pom: &Pom, counts: &Counts, _tol: f64) -> Result<Mle> {
    if counts.total() == 0 {
        return Err(Error::EmptyCounts);
    }
    if let Some(pt) = pom.point_from_frequencies(counts)? {
        let on_boundary = match pom.dimension() {
            1 => pt.coords()[0].abs() >= 1.0 - 1e-12,
            _ => pt.norm_sq() >= 1.0 - 1e-12,
        };
        return Ok(Mle { point: pt, on_boundary });
    }
    // boundary maximization (disk models only; the coin always has a
    // frequency point)
    let scan = 2048;
    let g = |theta: f64| log_likelihood(pom, counts, &Point::two(theta.cos(), theta.sin()));
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..scan {
        let v = g(i as f64 * std::f64::consts::TAU / scan as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let h = std::f64::consts::TAU / scan as f64;
    let center = best_i as f64 * h;
    let (theta, _) = quad::golden_max(&g, center - h, center + h, 1e-12);
    Ok(Mle { point: Point::two(theta.cos(), theta.sin()), on_boundary: true })
}

/// A scalar estimate with an attached standard error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Log prior likelihood `ln L(D)` with the prior expectation taken by
/// importance sampling; the standard error refers to the log value.
pub fn prior_likelihood(
    pom: &Pom,
    prior: &Prior,
    counts: &Counts,
    budget: &Budget,
) -> Result<Estimate> {
    budget.validate()?;
    if counts.total() == 0 {
        return Ok(Estimate { value: 0.0, stderr: 0.0 });
    }
    let log_l_max = {
        let m = mle(pom, counts, 1e-10)?;
        log_likelihood(pom, counts, &m.point)
    };
    let sample = prior.sample(pom, budget.samples, budget.seed)?;
    let (ratio, stderr) =
        sample.weighted_mean(|pt| (log_likelihood(pom, counts, pt) - log_l_max).exp());
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::IntegrationFailure(
            "prior likelihood estimate is not positive".into(),
        ));
    }
    Ok(Estimate { value: log_l_max + ratio.ln(), stderr: stderr / ratio })
}

/// Coordinate-wise weighted mean point.
#[derive(Debug, Clone)]
pub struct MeanResult {
    pub point: Point,
    pub stderr: Vec<f64>,
    /// Set when the effective sample size drops below 100.
    pub low_ess: bool,
    pub effective_sample_size: f64,
}

/// Bayesian mean of the reconstruction point: the prior mean when `counts`
/// is absent, the posterior mean when present.
pub fn bayesian_mean(
    pom: &Pom,
    prior: &Prior,
    counts: Option<&Counts>,
    budget: &Budget,
) -> Result<MeanResult> {
    budget.validate()?;
    let sample = prior.sample(pom, budget.samples, budget.seed)?;
    // posterior weights fold the shifted likelihood into the prior weights,
    // reusing the same sample as `prior_likelihood`
    let weights: Vec<f64> = match counts {
        Some(counts) if counts.total() > 0 => {
            let m = mle(pom, counts, 1e-10)?;
            let log_l_max = log_likelihood(pom, counts, &m.point);
            sample
                .points
                .iter()
                .zip(&sample.weights)
                .map(|(pt, &w)| w * (log_likelihood(pom, counts, pt) - log_l_max).exp())
                .collect()
        }
        _ => sample.weights.clone(),
    };
    let wsum: f64 = weights.iter().sum();
    let w2sum: f64 = weights.iter().map(|w| w * w).sum();
    if !(wsum > 0.0) {
        return Err(Error::IntegrationFailure("all posterior weights vanish".into()));
    }
    let ess = wsum * wsum / w2sum;

    let dim = pom.dimension();
    let mut coords = [0.0f64; 2];
    let mut stderr = Vec::with_capacity(dim);
    for d in 0..dim {
        let mean: f64 = sample
            .points
            .iter()
            .zip(&weights)
            .map(|(pt, &w)| w * pt.coords()[d])
            .sum::<f64>()
            / wsum;
        let var: f64 = sample
            .points
            .iter()
            .zip(&weights)
            .map(|(pt, &w)| {
                let e = w * (pt.coords()[d] - mean);
                e * e
            })
            .sum::<f64>();
        coords[d] = mean;
        stderr.push(var.sqrt() / wsum);
    }
    let point = match dim {
        1 => Point::one(coords[0]),
        _ => Point::two(coords[0], coords[1]),
    };
    Ok(MeanResult { point, stderr, low_ess: ess < 100.0, effective_sample_size: ess })
}

/// Simulates `n` independent clicks from the probabilities of `true_pt`.
/// Deterministic for a fixed seed (sequential binomial conditioning).
pub fn simulate(pom: &Pom, true_pt: &Point, n: u64, seed: u64) -> Result<Counts> {
    let p = pom.probabilities(true_pt)?;
    if !pom.is_permissible(&p)? {
        return Err(Error::OutsideDomain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = pom.num_outcomes();
    let mut out = vec![0u64; k];
    let mut remaining = n;
    let mut mass_left = 1.0f64;
    for (i, &pk) in p.as_slice().iter().enumerate() {
        if i + 1 == k {
            out[i] = remaining;
            break;
        }
        if remaining == 0 {
            break;
        }
        let cond = (pk / mass_left).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, cond)
            .map_err(|e| Error::InvalidArgument(format!("binomial parameters: {e}")))?
            .sample(&mut rng);
        out[i] = draw;
        remaining -= draw;
        mass_left = (mass_left - pk).max(0.0);
    }
    Counts::new(pom, &out)
}

/// Summary of the likelihood landscape for one data set.
#[derive(Debug, Clone)]
pub struct LikelihoodSummary {
    pub log_l_max: f64,
    pub mle: Point,
    pub mle_on_boundary: bool,
    pub log_l_d: Option<f64>,
}

impl LikelihoodSummary {
    pub fn compute(
        pom: &Pom,
        counts: &Counts,
        prior: Option<&Prior>,
        budget: &Budget,
    ) -> Result<Self> {
        let m = mle(pom, counts, 1e-10)?;
        let log_l_max = log_likelihood(pom, counts, &m.point);
        let log_l_d = match prior {
            Some(prior) => Some(prior_likelihood(pom, prior, counts, budget)?.value),
            None => None,
        };
        Ok(LikelihoodSummary {
            log_l_max,
            mle: m.point,
            mle_on_boundary: m.on_boundary,
            log_l_d,
        })
    }
}

/// All count vectors with the given total over `num_outcomes` detectors.
pub fn enumerate_counts(num_outcomes: usize, total: u64) -> Vec<Vec<u64>> {
    fn rec(k: usize, left: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 1 {
            let mut v = prefix.clone();
            v.push(left);
            out.push(v);
            return;
        }
        for nk in 0..=left {
            prefix.push(nk);
            rec(k - 1, left - nk, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(num_outcomes, total, &mut Vec::new(), &mut out);
    out
}

/// Multinomial coefficient N! / (n_1! ... n_K!) as f64.
pub fn multinomial_coefficient(n: &[u64]) -> f64 {
    let total: u64 = n.iter().sum();
    let mut log = 0.0f64;
    for &nk in n {
        for j in 1..=nk {
            log -= (j as f64).ln();
        }
    }
    for j in 1..=total {
        log += (j as f64).ln();
    }
    log.exp()
}
