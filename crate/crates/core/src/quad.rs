//! Adaptive Gauss-Kronrod quadrature and 1D root/extremum search.
//!
//! The 15-point Kronrod rule with its embedded 7-point Gauss rule gives a
//! cheap per-interval error estimate; intervals are bisected until the local
//! error fits within the share of the global tolerance. Abscissae and weights
//! are the standard QUADPACK values.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half, descending) and weights,
// plus the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One application of the 15-point Kronrod rule on [a, b].
/// Returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];

    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[j + 7] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            // odd-index Kronrod nodes are the Gauss nodes
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (integral, err)
}

/// Adaptive quadrature of `f` over [a, b] to absolute tolerance `tol`.
///
/// Integrable endpoint singularities are fine as long as `f` itself stays
/// finite at the interior Kronrod nodes; non-finite node values trigger
/// further bisection and eventually an `IntegrationFailure`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, u32)> = vec![(a, b, 0)];
    let width = (b - a).abs();
    const MAX_DEPTH: u32 = 52;

    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi);
        let local_tol = tol * ((hi - lo).abs() / width).max(1e-300);
        if val.is_finite() && (err <= local_tol || err <= 1e-15 * val.abs()) {
            total += val;
        } else if depth >= MAX_DEPTH {
            if !val.is_finite() {
                return Err(Error::IntegrationFailure(format!(
                    "non-finite integrand near [{lo}, {hi}]"
                )));
            }
            total += val; // error estimate stalled; accept best value
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::IntegrationFailure("non-finite integral".into()))
    }
}

/// Bisection for the root of a continuous function with f(a) and f(b) of
/// opposite sign. Tolerance is on the argument.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    debug_assert!(fa * f(b) <= 0.0, "bisect requires a sign change");
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section maximization of `f` on [a, b] to argument tolerance `xtol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kronrod_weights_sum_to_interval_length() {
        let sum_gk: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let sum_g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert_abs_diff_eq!(sum_gk, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sum_g, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn polynomial_exact() {
        // degree-13 polynomial is integrated exactly by a single panel
        let f = |x: f64| 3.0 * x.powi(13) - 2.0 * x.powi(7) + x - 4.0;
        let exact = 3.0 / 14.0 - 2.0 / 8.0 + 0.5 - 4.0;
        let (val, _) = gk15(&f, 0.0, 1.0);
        assert_abs_diff_eq!(val, exact, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_pi() {
        let val = integrate(&|x: f64| 4.0 / (1.0 + x * x), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(val, std::f64::consts::PI, epsilon = 1e-11);
    }

    #[test]
    fn adaptive_sqrt_singularity() {
        // integrable endpoint singularity: int_0^1 1/sqrt(x) dx = 2
        let val = integrate(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9).unwrap();
        assert_abs_diff_eq!(val, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert_abs_diff_eq!(r, 2.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn golden_finds_max() {
        let (x, v) = golden_max(&|x: f64| -(x - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-10);
        assert!(v > -1e-18);
    }
}
