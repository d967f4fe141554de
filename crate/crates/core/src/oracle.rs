//! Independent reference results for the two-outcome coin model.
//!
//! For coin counts `(n1, n2)` the bounded-likelihood region is an interval
//! in `p1`, so sizes and credibilities reduce to 1D integrals. This module
//! computes them by bracketing/bisection root-finding plus adaptive
//! quadrature, entirely apart from the Monte Carlo machinery, and also
//! carries the closed forms known for counts `(1, 1)`.

use crate::error::{Error, Result};
use crate::quad;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinPrior {
    Primitive,
    Jeffreys,
}

/// Closed-form `(size, credibility)` of the BLR at `lambda` for coin counts
/// `(1, 1)`:
/// primitive — `s = sqrt(1-lambda)`, `c = (2+lambda) sqrt(1-lambda) / 2`;
/// Jeffreys — `s = 1 - (2/pi) asin(sqrt(lambda))`, `c = s + (2/pi) sqrt(lambda(1-lambda))`.
pub fn coin_closed_form(prior: CoinPrior, lambda: f64) -> (f64, f64) {
    let lambda = lambda.clamp(0.0, 1.0);
    match prior {
        CoinPrior::Primitive => {
            let s = (1.0 - lambda).sqrt();
            (s, 0.5 * (2.0 + lambda) * s)
        }
        CoinPrior::Jeffreys => {
            let s = 1.0 - 2.0 / PI * lambda.sqrt().asin();
            (s, s + 2.0 / PI * (lambda * (1.0 - lambda)).sqrt())
        }
    }
}

/// Quadrature oracle for arbitrary coin counts.
#[derive(Debug, Clone)]
pub struct CoinOracle {
    pub prior: CoinPrior,
    pub n1: u64,
    pub n2: u64,
    /// MLE location in p1.
    p_star: f64,
    pub log_l_max: f64,
}

impl CoinOracle {
    pub fn new(prior: CoinPrior, n1: u64, n2: u64) -> Self {
        let total = n1 + n2;
        let p_star = if total == 0 { 0.5 } else { n1 as f64 / total as f64 };
        let log_l_max = log_like(n1, n2, p_star);
        CoinOracle { prior, n1, n2, p_star, log_l_max }
    }

    fn degenerate(&self) -> bool {
        self.n1 + self.n2 == 0
    }

    /// BLR endpoints `[a, b]` in `p1`. The log-likelihood is concave, so
    /// there is at most one root on each side of the maximizer; roots are
    /// bracketed and bisected to 1e-12.
    pub fn region(&self, lambda: f64) -> (f64, f64) {
        if self.degenerate() || lambda <= 0.0 {
            return (0.0, 1.0);
        }
        if lambda >= 1.0 {
            return (self.p_star, self.p_star);
        }
        let threshold = lambda.ln() + self.log_l_max;
        let h = |p: f64| log_like(self.n1, self.n2, p) - threshold;
        let a = if h(0.0) >= 0.0 {
            0.0
        } else {
            quad::bisect(&h, 0.0, self.p_star, 1e-12)
        };
        let b = if h(1.0) >= 0.0 {
            1.0
        } else {
            quad::bisect(&h, self.p_star, 1.0, 1e-12)
        };
        (a, b)
    }

    /// Prior content of `[a, b]`.
    fn content(&self, a: f64, b: f64) -> f64 {
        prior_integral(self.prior, a, b, |_| 1.0)
    }

    /// Prior-weighted likelihood mass of `[a, b]`, shifted by `log_l_max`.
    fn likelihood_mass(&self, a: f64, b: f64) -> f64 {
        let (n1, n2, shift) = (self.n1, self.n2, self.log_l_max);
        prior_integral(self.prior, a, b, move |p| (log_like(n1, n2, p) - shift).exp())
    }

    pub fn size(&self, lambda: f64) -> f64 {
        let (a, b) = self.region(lambda);
        self.content(a, b)
    }

    pub fn credibility(&self, lambda: f64) -> f64 {
        if self.degenerate() {
            return 1.0;
        }
        let (a, b) = self.region(lambda);
        if b <= a {
            return 0.0;
        }
        self.likelihood_mass(a, b) / self.likelihood_mass(0.0, 1.0)
    }

    /// Prior likelihood `L(D)` by direct quadrature.
    pub fn prior_likelihood(&self) -> f64 {
        self.likelihood_mass(0.0, 1.0) * self.log_l_max.exp()
    }

    /// Smallest lambda whose BLR has the requested credibility.
    pub fn lambda_for_credibility(&self, c: f64) -> Result<f64> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "credibility target must lie in (0,1), got {c}"
            )));
        }
        if self.degenerate() {
            return Err(Error::InvalidArgument(
                "credibility is constant for empty counts".into(),
            ));
        }
        Ok(quad::bisect(&|l| self.credibility(l) - c, 0.0, 1.0, 1e-11))
    }

    /// Lambda whose BLR has the requested size.
    pub fn lambda_for_size(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "size target must lie in (0,1), got {s}"
            )));
        }
        if self.degenerate() {
            return Err(Error::InvalidArgument("size is constant for empty counts".into()));
        }
        Ok(quad::bisect(&|l| self.size(l) - s, 0.0, 1.0, 1e-11))
    }

    /// Tabulates `(lambda, s, c)` rows on a grid.
    pub fn tabulate(&self, lambdas: &[f64]) -> Vec<(f64, f64, f64)> {
        lambdas
            .iter()
            .map(|&l| (l, self.size(l), self.credibility(l)))
            .collect()
    }
}

fn log_like(n1: u64, n2: u64, p: f64) -> f64 {
    let mut ll = 0.0;
    if n1 > 0 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += n1 as f64 * p.ln();
    }
    if n2 > 0 {
        if p >= 1.0 {
            return f64::NEG_INFINITY;
        }
        ll += n2 as f64 * (1.0 - p).ln();
    }
    ll
}

/// Integral of `f(p) w(p) dp / Z` over `[a, b]` for the coin priors.
/// The Jeffreys weight substitutes `p = sin^2(theta)`, which turns the
/// normalized density into the flat `2/pi d theta`.
fn prior_integral(prior: CoinPrior, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let tol = 1e-11;
    match prior {
        CoinPrior::Primitive => quad::integrate(&f, a, b, tol).unwrap_or(f64::NAN),
        CoinPrior::Jeffreys => {
            let ta = a.clamp(0.0, 1.0).sqrt().asin();
            let tb = b.clamp(0.0, 1.0).sqrt().asin();
            quad::integrate(
                &|theta: f64| {
                    let sin = theta.sin();
                    f(sin * sin) * 2.0 / PI
                },
                ta,
                tb,
                tol,
            )
            .unwrap_or(f64::NAN)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_values() {
        assert_eq!(coin_closed_form(CoinPrior::Primitive, 0.0), (1.0, 1.0));
        let (s, c) = coin_closed_form(CoinPrior::Primitive, 0.5);
        assert_abs_diff_eq!(s, 0.707_106_78, epsilon = 1e-8);
        assert_abs_diff_eq!(c, 0.883_883_48, epsilon = 1e-8);
        let (s, c) = coin_closed_form(CoinPrior::Jeffreys, 0.5);
        assert_abs_diff_eq!(s, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c, 0.818_309_886, epsilon = 1e-8);
    }

    #[test]
    fn quadrature_matches_closed_form_for_1_1() {
        for prior in [CoinPrior::Primitive, CoinPrior::Jeffreys] {
            let oracle = CoinOracle::new(prior, 1, 1);
            for i in 0..=1000 {
                let lambda = i as f64 / 1000.0;
                let (s, c) = coin_closed_form(prior, lambda);
                assert_abs_diff_eq!(oracle.size(lambda), s, epsilon = 1e-8);
                assert_abs_diff_eq!(oracle.credibility(lambda), c, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn two_zero_counts_have_analytic_curves() {
        let oracle = CoinOracle::new(CoinPrior::Primitive, 2, 0);
        for i in 0..=100 {
            let lambda = i as f64 / 100.0;
            // region is p >= sqrt(lambda): s = 1 - sqrt(lambda), c = 1 - lambda^(3/2)
            assert_abs_diff_eq!(oracle.size(lambda), 1.0 - lambda.sqrt(), epsilon = 1e-8);
            assert_abs_diff_eq!(
                oracle.credibility(lambda),
                1.0 - lambda.powf(1.5),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn degenerate_counts_whole_space() {
        let oracle = CoinOracle::new(CoinPrior::Primitive, 0, 0);
        for lambda in [0.0, 0.3, 1.0] {
            assert_eq!(oracle.region(lambda), (0.0, 1.0));
            assert_abs_diff_eq!(oracle.size(lambda), 1.0, epsilon = 1e-10);
            assert_eq!(oracle.credibility(lambda), 1.0);
        }
    }

    #[test]
    fn ratio_limit_matches_prior_likelihood() {
        // c/s -> L_max / L(D) as lambda -> 1
        for (prior, l_d) in [(CoinPrior::Primitive, 1.0 / 6.0), (CoinPrior::Jeffreys, 1.0 / 8.0)]
        {
            let oracle = CoinOracle::new(prior, 1, 1);
            assert_abs_diff_eq!(oracle.prior_likelihood(), l_d, epsilon = 1e-9);
            let lambda = 1.0 - 1e-6;
            let ratio = oracle.credibility(lambda) / oracle.size(lambda);
            let expected = oracle.log_l_max.exp() / l_d;
            assert!((ratio - expected).abs() < 1e-4, "ratio {ratio} vs {expected}");
        }
    }

    #[test]
    fn lambda_inversions() {
        let oracle = CoinOracle::new(CoinPrior::Primitive, 1, 1);
        let l = oracle.lambda_for_size(0.5).unwrap();
        assert_abs_diff_eq!(l, 0.75, epsilon = 1e-9);
        let l = oracle.lambda_for_credibility(0.8).unwrap();
        assert_abs_diff_eq!(oracle.credibility(l), 0.8, epsilon = 1e-9);
        assert!(oracle.lambda_for_size(1.2).is_err());
    }

    #[test]
    fn prior_likelihood_2_0() {
        let oracle = CoinOracle::new(CoinPrior::Primitive, 2, 0);
        assert_abs_diff_eq!(oracle.prior_likelihood(), 1.0 / 3.0, epsilon = 1e-9);
    }
}
