//! Optimal error regions for state estimation from multinomial counts.
//!
//! Given click counts from one of the built-in measurement models, this
//! crate computes maximum-likelihood regions and smallest credible regions,
//! both realized as bounded-likelihood regions: the set of points whose
//! likelihood is at least a fraction `lambda` of the maximum. The library
//! provides the size curve `s(lambda)` and credibility curve `c(lambda)`,
//! membership queries, boundary contours, prior tilings, a closed-form coin
//! oracle, and a confidence-level evaluator for region sets.

pub mod blr;
pub mod confidence;
pub mod curvefit;
pub mod error;
pub mod isotonic;
pub mod likelihood;
pub mod oracle;
pub mod pom;
pub mod prior;
pub mod quad;
pub mod sampling;

pub use blr::{Blr, BlrCurve, Contour, ContourPoint, LambdaGrid};
pub use confidence::{confidence_level, scr_interval_set, RegionSet};
pub use curvefit::{fit_size, FindMode, SizeFit};
pub use error::{Error, Result};
pub use likelihood::{
    bayesian_mean, log_likelihood, mle, prior_likelihood, simulate, Estimate, LikelihoodSummary,
    Mle,
};
pub use oracle::{coin_closed_form, CoinOracle, CoinPrior};
pub use pom::{Counts, Point, Pom, PomKind, Probabilities};
pub use prior::{purity, Normalization, Prior, Tiling, TilingVariant};
pub use sampling::SampleSet;

use serde::{Deserialize, Serialize};

/// Settings for numerical integration and sampling.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Budget {
    /// Monte Carlo sample count.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Base seed; all randomness derives from it deterministically.
    #[serde(default)]
    pub seed: u64,
    /// Absolute tolerance for adaptive quadrature.
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
}

fn default_samples() -> usize {
    100_000
}

fn default_quad_tol() -> f64 {
    1e-9
}

impl Default for Budget {
    fn default() -> Self {
        Budget { samples: default_samples(), seed: 0, quad_tol: default_quad_tol() }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("budget.samples must be >= 1".into()));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::InvalidArgument("budget.quad_tol must be > 0".into()));
        }
        Ok(())
    }
}
