//! Reduction from vector configurations to scalar data.
//!
//! For a configuration (x, y_1..y_n) on `l_p` with ||x||^p = 1/n and
//! sum ||y_i||^p = 1, define
//!
//! ```text
//! sigma_i = ||x - y_i||^p / (||x||^p + ||y_i||^p)
//! alpha_i = (||x||^p + ||y_i||^p) / 2
//! ```
//!
//! and let u_i in [-1, 1] solve (1 - u_i)^p / (1 + |u_i|^p) = sigma_i. The
//! alphas sum to 1 and sit in [1/(2n), (n+1)/(2n)]; the u_i obey the bound
//! |u_i| <= c1 n^(-1/p) alpha_i^(-1/p).

use crate::error::{Error, Result};
use crate::lp::{Configuration, Exponent};
use crate::util::pow_abs;

/// Absolute slack for the alpha range checks.
const ALPHA_RANGE_TOL: f64 = 1e-12;
/// Absolute slack for |sum alpha - 1|.
const ALPHA_SUM_TOL: f64 = 1e-10;
/// Floating-point overshoot absorbed when sigma exceeds 2^(p-1).
const SIGMA_CLAMP: f64 = 1e-9;
/// Absolute tolerance of the u_from_sigma bisection.
const U_BISECT_TOL: f64 = 1e-13;

/// Scalar data (alpha_1..alpha_n, u_1..u_n) on which phi is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedConfig {
    alphas: Vec<f64>,
    us: Vec<f64>,
}

impl ReducedConfig {
    pub fn new(alphas: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != us.len() {
            return Err(Error::InvalidReducedConfig(format!(
                "need matching non-empty lists, got {} alphas and {} us",
                alphas.len(),
                us.len()
            )));
        }
        let n = alphas.len() as f64;
        let (lo, hi) = (0.5 / n, (n + 1.0) / (2.0 * n));
        for (i, &a) in alphas.iter().enumerate() {
            if !(a >= lo - ALPHA_RANGE_TOL && a <= hi + ALPHA_RANGE_TOL) {
                return Err(Error::InvalidReducedConfig(format!(
                    "alpha_{i} = {a} outside [{lo}, {hi}]"
                )));
            }
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > ALPHA_SUM_TOL {
            return Err(Error::InvalidReducedConfig(format!(
                "sum of alphas = {sum}, must be 1"
            )));
        }
        for (i, &u) in us.iter().enumerate() {
            if !(-1.0..=1.0).contains(&u) {
                return Err(Error::InvalidReducedConfig(format!(
                    "u_{i} = {u} outside [-1, 1]"
                )));
            }
        }
        Ok(ReducedConfig { alphas, us })
    }

    /// Uniform alphas 1/n with the given u values.
    pub fn with_uniform_alphas(us: Vec<f64>) -> Result<Self> {
        let n = us.len();
        ReducedConfig::new(vec![1.0 / n as f64; n], us)
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    /// Same alphas with u_j replaced; used by finite-difference checks.
    pub fn with_u(&self, j: usize, u: f64) -> Result<Self> {
        let mut us = self.us.clone();
        *us.get_mut(j).ok_or(Error::IndexOutOfRange {
            index: j,
            n: self.n(),
        })? = u;
        ReducedConfig::new(self.alphas.clone(), us)
    }
}

/// The five p-dependent constants of the bound chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// max(2^(1-1/p), 1/(2 - 2^(1/p)))
    pub c1: f64,
    /// 2^(p-2) - 1
    pub c2: f64,
    /// p 2^(p-1)
    pub c3: f64,
    /// c2 2^(-p-2)
    pub c4: f64,
    /// 1/(8 + 2^(p+3))
    pub c5: f64,
}

/// Evaluate the bound constants; rejects p <= 2 where c2 degenerates to 0.
pub fn bound_constants(p: Exponent) -> Result<BoundConstants> {
    let pv = p.value();
    if pv <= 2.0 {
        return Err(Error::ExponentAtBoundary(pv));
    }
    let c1 = f64::max(2f64.powf(1.0 - 1.0 / pv), 1.0 / (2.0 - 2f64.powf(1.0 / pv)));
    let c2 = 2f64.powf(pv - 2.0) - 1.0;
    let c3 = pv * 2f64.powf(pv - 1.0);
    let c4 = c2 * 2f64.powf(-pv - 2.0);
    let c5 = 1.0 / (8.0 + 2f64.powf(pv + 3.0));
    Ok(BoundConstants { c1, c2, c3, c4, c5 })
}

/// The (sigma_i, alpha_i) of a configuration. The configuration type already
/// guarantees the normalizations, so the denominators are positive.
pub fn sigma_alpha(cfg: &Configuration) -> (Vec<f64>, Vec<f64>) {
    let p = cfg.exponent().value();
    let x_mass = pow_abs(cfg.x().norm(), p);
    let mut sigmas = Vec::with_capacity(cfg.n());
    let mut alphas = Vec::with_capacity(cfg.n());
    for y in cfg.ys() {
        let y_mass = pow_abs(y.norm(), p);
        let dist_mass = pow_abs(cfg.x().distance(y).expect("checked at construction"), p);
        sigmas.push(dist_mass / (x_mass + y_mass));
        alphas.push(0.5 * (x_mass + y_mass));
    }
    (sigmas, alphas)
}

/// Forward map u -> (1 - u)^p / (1 + |u|^p), strictly decreasing on [-1, 1].
pub fn sigma_from_u(u: f64, p: Exponent) -> f64 {
    let pv = p.value();
    pow_abs(1.0 - u, pv) / (1.0 + pow_abs(u, pv))
}

/// Invert the forward map: the unique u in [-1, 1] with
/// (1 - u)^p / (1 + |u|^p) = sigma.
///
/// sigma must lie in [0, 2^(p-1)]; values overshooting the top by at most
/// 1e-9 are clamped, anything further is a domain error. Bisection on
/// [-1, 1] to 1e-13 absolute.
pub fn u_from_sigma(sigma: f64, p: Exponent) -> Result<f64> {
    let pv = p.value();
    let max = 2f64.powf(pv - 1.0);
    let sigma = if sigma > max && sigma <= max + SIGMA_CLAMP {
        max
    } else {
        sigma
    };
    if !(0.0..=max).contains(&sigma) {
        return Err(Error::SigmaOutOfRange { sigma, max });
    }
    if sigma == 0.0 {
        return Ok(1.0);
    }
    // The forward map is flat at u = -1 (zero derivative for p > 2), so a
    // sigma within rounding of the top carries no more information than the
    // endpoint itself.
    if sigma >= max * (1.0 - 4.0 * f64::EPSILON) {
        return Ok(-1.0);
    }
    // f(u) = forward(u) - sigma decreases from max - sigma > 0 to -sigma < 0.
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fm = sigma_from_u(mid, p) - sigma;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= U_BISECT_TOL {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Full reduction: alphas from [`sigma_alpha`], u_i by inverting the forward
/// map on each sigma_i.
pub fn reduce(cfg: &Configuration) -> Result<ReducedConfig> {
    let (sigmas, alphas) = sigma_alpha(cfg);
    let us = sigmas
        .iter()
        .map(|&s| u_from_sigma(s, cfg.exponent()))
        .collect::<Result<Vec<_>>>()?;
    ReducedConfig::new(alphas, us)
}
