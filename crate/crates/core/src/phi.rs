//! The Rademacher sign average
//!
//! ```text
//! phi = 2^-n  sum over eps in {-1,+1}^n  of  S(eps)^(1/p),
//! S(eps) = sum_i alpha_i (1 + eps_i u_i)^p / (1 + |u_i|^p)
//! ```
//!
//! evaluated exactly by a Gray-code walk over all 2^n sign vectors (one term
//! updated per step) or by seeded Monte Carlo, together with the analytic
//! partial derivatives in each u_j.
//!
//! The exact walk is split into fixed-size chunks that are evaluated
//! independently (each chunk rebuilds its running sum from scratch) and merged
//! in index order, so the result is bit-identical whether or not the chunks
//! run in parallel, and the incremental drift stays bounded by the chunk
//! length.

pub mod scalar;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::Exponent;
use crate::reduction::ReducedConfig;
use crate::util::{pow_abs, root_p, Kahan};

/// Default ceiling for exact enumeration; 2^24 sign vectors.
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Chunk length (log2) of the Gray-code walk.
const CHUNK_BITS: u32 = 14;

/// Widest mask the walk supports.
const MASK_LIMIT: usize = 62;

/// How a phi value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// A phi evaluation with its provenance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiResult {
    pub value: f64,
    pub method: Method,
    /// 0 when exact.
    pub samples: usize,
    /// 0 when exact.
    pub std_error: f64,
}

/// A vector of signs, each exactly +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignVector);
        }
        Ok(SignVector(signs))
    }

    /// Bit i set means eps_i = +1.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        SignVector((0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-coordinate sign terms: `plus[i]` and `minus[i]` are
/// alpha_i (1 +/- u_i)^p / (1 + |u_i|^p).
pub(crate) fn sign_terms(rc: &ReducedConfig, p: Exponent) -> (Vec<f64>, Vec<f64>) {
    let pv = p.value();
    let mut plus = Vec::with_capacity(rc.n());
    let mut minus = Vec::with_capacity(rc.n());
    for (&a, &u) in rc.alphas().iter().zip(rc.us()) {
        let denom = 1.0 + pow_abs(u, pv);
        plus.push(a * pow_abs(1.0 + u, pv) / denom);
        minus.push(a * pow_abs(1.0 - u, pv) / denom);
    }
    (plus, minus)
}

/// S(eps) for one sign vector.
pub fn inner_sum(rc: &ReducedConfig, eps: &SignVector, p: Exponent) -> Result<f64> {
    if eps.len() != rc.n() {
        return Err(Error::DimensionMismatch {
            left: eps.len(),
            right: rc.n(),
        });
    }
    let (plus, minus) = sign_terms(rc, p);
    Ok(eps
        .signs()
        .iter()
        .enumerate()
        .map(|(i, &s)| if s == 1 { plus[i] } else { minus[i] })
        .sum())
}

/// S(eps) with the j-th term removed.
pub fn complement_sum(rc: &ReducedConfig, eps: &SignVector, p: Exponent, j: usize) -> Result<f64> {
    if j >= rc.n() {
        return Err(Error::IndexOutOfRange { index: j, n: rc.n() });
    }
    let full = inner_sum(rc, eps, p)?;
    let (plus, minus) = sign_terms(rc, p);
    let own = if eps.signs()[j] == 1 { plus[j] } else { minus[j] };
    Ok(full - own)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MASK_LIMIT);
    if n > cap {
        return Err(Error::OverEnumerationCap { n, cap });
    }
    Ok(())
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

#[inline]
fn sum_for_mask(plus: &[f64], minus: &[f64], mask: u64) -> f64 {
    let mut s = 0.0;
    for i in 0..plus.len() {
        s += if mask >> i & 1 == 1 { plus[i] } else { minus[i] };
    }
    s
}

/// Walk a chunk of Gray codes, feeding each (mask, S) to the visitor.
#[inline]
fn walk_chunk<F: FnMut(u64, f64)>(
    plus: &[f64],
    minus: &[f64],
    start: u64,
    len: u64,
    mut visit: F,
) {
    let mut mask = gray(start);
    let mut s = sum_for_mask(plus, minus, mask);
    visit(mask, s.max(0.0));
    for k in 1..len {
        let idx = start + k;
        let bit = idx.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask >> bit & 1 == 1 {
            s += plus[bit] - minus[bit];
        } else {
            s += minus[bit] - plus[bit];
        }
        visit(mask, s.max(0.0));
    }
}

/// Exact phi by full enumeration. Refuses n above the cap.
pub fn phi_exact(rc: &ReducedConfig, p: Exponent, cap: usize) -> Result<PhiResult> {
    let n = rc.n();
    check_cap(n, cap)?;
    let (plus, minus) = sign_terms(rc, p);
    let pv = p.value();
    let total: u64 = 1 << n;
    let chunk = total.min(1 << CHUNK_BITS);
    let chunk_sums: Vec<f64> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = Kahan::default();
            walk_chunk(&plus, &minus, c * chunk, chunk, |_, s| {
                acc.add(root_p(s, pv));
            });
            acc.value()
        })
        .collect();
    let mut acc = Kahan::default();
    for v in chunk_sums {
        acc.add(v);
    }
    Ok(PhiResult {
        value: acc.value() * 0.5f64.powi(n as i32),
        method: Method::Exact,
        samples: 0,
        std_error: 0.0,
    })
}

/// Reference enumeration that rebuilds S(eps) from scratch for every sign
/// vector. Slow; exists to cross-check the incremental walk.
pub fn phi_exact_naive(rc: &ReducedConfig, p: Exponent, cap: usize) -> Result<f64> {
    let n = rc.n();
    check_cap(n, cap)?;
    let (plus, minus) = sign_terms(rc, p);
    let pv = p.value();
    let mut acc = Kahan::default();
    for mask in 0..(1u64 << n) {
        let s = sum_for_mask(&plus, &minus, mask).max(0.0);
        acc.add(root_p(s, pv));
    }
    Ok(acc.value() * 0.5f64.powi(n as i32))
}

/// Monte Carlo phi: sample mean of S(eps)^(1/p) over uniform sign vectors,
/// with the sample standard error. Deterministic given the seed.
pub fn phi_mc(rc: &ReducedConfig, p: Exponent, samples: usize, seed: u64) -> Result<PhiResult> {
    if samples < 100 {
        return Err(Error::InvalidInput(format!(
            "phi_mc needs at least 100 samples, got {samples}"
        )));
    }
    let (plus, minus) = sign_terms(rc, p);
    let n = rc.n();
    let pv = p.value();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..samples {
        let mut s = 0.0;
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = rng.gen::<u64>();
            }
            s += if word & 1 == 1 { plus[i] } else { minus[i] };
            word >>= 1;
        }
        let x = root_p(s.max(0.0), pv);
        let count = (k + 1) as f64;
        let delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }
    let m = samples as f64;
    Ok(PhiResult {
        value: mean,
        method: Method::MonteCarlo,
        samples,
        std_error: (m2 / (m - 1.0) / m).sqrt(),
    })
}

/// Derivative coefficients in u_j (requires u_j in [0, 1]):
/// `cp[j] = (1+u_j)^(p-1) (1 - u_j^(p-1))`, `cm[j] = (1-u_j)^(p-1) (1 + u_j^(p-1))`,
/// `prefactor[j] = alpha_j / (1 + u_j^p)^2`.
fn grad_coefficients(rc: &ReducedConfig, p: Exponent) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let pv = p.value();
    let n = rc.n();
    let mut cp = Vec::with_capacity(n);
    let mut cm = Vec::with_capacity(n);
    let mut pre = Vec::with_capacity(n);
    for (&a, &u) in rc.alphas().iter().zip(rc.us()) {
        let up1 = pow_abs(u, pv - 1.0);
        cp.push(pow_abs(1.0 + u, pv - 1.0) * (1.0 - up1));
        cm.push(pow_abs(1.0 - u, pv - 1.0) * (1.0 + up1));
        let denom = 1.0 + pow_abs(u, pv);
        pre.push(a / (denom * denom));
    }
    (cp, cm, pre)
}

fn require_unit_interval(rc: &ReducedConfig, j: Option<usize>) -> Result<()> {
    match j {
        Some(j) => {
            let u = rc.us()[j];
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::InvalidInput(format!(
                    "partial derivative needs u_{j} in [0,1], got {u}"
                )));
            }
        }
        None => {
            for (i, &u) in rc.us().iter().enumerate() {
                if !(0.0..=1.0).contains(&u) {
                    return Err(Error::InvalidInput(format!(
                        "gradient needs every u_i in [0,1]; u_{i} = {u}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Exact partial derivative of phi in u_j:
///
/// ```text
/// alpha_j/(1+u_j^p)^2 * 2^-n * sum_eps eps_j (1+eps_j u_j)^(p-1) (1-eps_j u_j^(p-1)) S(eps)^(1/p-1)
/// ```
pub fn phi_partial(rc: &ReducedConfig, p: Exponent, j: usize, cap: usize) -> Result<f64> {
    let n = rc.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    check_cap(n, cap)?;
    require_unit_interval(rc, Some(j))?;
    let (plus, minus) = sign_terms(rc, p);
    let (cp, cm, pre) = grad_coefficients(rc, p);
    let pv = p.value();
    let expo = 1.0 / pv - 1.0;
    let total: u64 = 1 << n;
    let chunk = total.min(1 << CHUNK_BITS);
    let chunk_sums: Vec<f64> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = Kahan::default();
            walk_chunk(&plus, &minus, c * chunk, chunk, |mask, s| {
                let t = s.powf(expo);
                let coef = if mask >> j & 1 == 1 { cp[j] } else { -cm[j] };
                acc.add(coef * t);
            });
            acc.value()
        })
        .collect();
    let mut acc = Kahan::default();
    for v in chunk_sums {
        acc.add(v);
    }
    Ok(pre[j] * acc.value() * 0.5f64.powi(n as i32))
}

/// All partial derivatives in one Gray-code sweep. Requires every u_i in [0, 1].
pub fn phi_gradient(rc: &ReducedConfig, p: Exponent, cap: usize) -> Result<Vec<f64>> {
    let n = rc.n();
    check_cap(n, cap)?;
    require_unit_interval(rc, None)?;
    let (plus, minus) = sign_terms(rc, p);
    let (cp, cm, pre) = grad_coefficients(rc, p);
    let pv = p.value();
    let expo = 1.0 / pv - 1.0;
    let total: u64 = 1 << n;
    let chunk = total.min(1 << CHUNK_BITS);
    let partials: Vec<Vec<f64>> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; n];
            walk_chunk(&plus, &minus, c * chunk, chunk, |mask, s| {
                let t = s.powf(expo);
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot += if mask >> j & 1 == 1 { cp[j] * t } else { -cm[j] * t };
                }
            });
            acc
        })
        .collect();
    let scale = 0.5f64.powi(n as i32);
    let mut grad = vec![Kahan::default(); n];
    for part in partials {
        for (j, v) in part.into_iter().enumerate() {
            grad[j].add(v);
        }
    }
    Ok(grad
        .iter()
        .zip(&pre)
        .map(|(k, &pr)| pr * k.value() * scale)
        .collect())
}

/// The eps_j-symmetrized derivative summand for coordinate j, given the signs
/// of the other coordinates:
///
/// ```text
/// cp_j (a_j + plus_j)^(1/p-1) - cm_j (a_j + minus_j)^(1/p-1)
/// ```
///
/// where a_j is the complement sum. The full partial derivative is the
/// prefactor times half the average of this quantity over the other signs,
/// so its sign at every eps decides the derivative's sign.
pub fn partial_pair_sum(rc: &ReducedConfig, p: Exponent, j: usize, eps: &SignVector) -> Result<f64> {
    require_unit_interval(rc, Some(j))?;
    let a = complement_sum(rc, eps, p, j)?;
    let (plus, minus) = sign_terms(rc, p);
    let (cp, cm, _) = grad_coefficients(rc, p);
    let expo = 1.0 / p.value() - 1.0;
    Ok(cp[j] * (a + plus[j]).powf(expo) - cm[j] * (a + minus[j]).powf(expo))
}

/// Monte Carlo estimate of all partial derivatives, antithetic in eps_j: for
/// each sampled sign vector the j-th coordinate is averaged over both signs
/// (the pair sum above), so the estimate is positive exactly when every
/// sampled pair sum is positive. Deterministic given the seed.
pub fn phi_gradient_mc(
    rc: &ReducedConfig,
    p: Exponent,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::InvalidInput("phi_gradient_mc needs samples >= 1".into()));
    }
    require_unit_interval(rc, None)?;
    let n = rc.n();
    let (plus, minus) = sign_terms(rc, p);
    let (cp, cm, pre) = grad_coefficients(rc, p);
    let pv = p.value();
    let expo = 1.0 / pv - 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = vec![0.0; n];
    let mut bits = vec![false; n];
    for _ in 0..samples {
        let mut s = 0.0;
        let mut word = 0u64;
        for i in 0..n {
            if i % 64 == 0 {
                word = rng.gen::<u64>();
            }
            let b = word & 1 == 1;
            bits[i] = b;
            s += if b { plus[i] } else { minus[i] };
            word >>= 1;
        }
        let s = s.max(0.0);
        let t_here = s.powf(expo);
        for j in 0..n {
            let (t_plus, t_minus) = if bits[j] {
                (t_here, (s - plus[j] + minus[j]).max(0.0).powf(expo))
            } else {
                ((s - minus[j] + plus[j]).max(0.0).powf(expo), t_here)
            };
            acc[j] += cp[j] * t_plus - cm[j] * t_minus;
        }
    }
    let m = samples as f64;
    Ok(acc
        .iter()
        .zip(&pre)
        .map(|(&a, &pr)| pr * 0.5 * a / m)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn rc(alphas: Vec<f64>, us: Vec<f64>) -> ReducedConfig {
        ReducedConfig::new(alphas, us).unwrap()
    }

    #[test]
    fn sign_vector_validation() {
        assert!(SignVector::new(vec![1, -1, 1]).is_ok());
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert!(SignVector::new(vec![]).is_err());
        let sv = SignVector::from_mask(0b101, 3);
        assert_eq!(sv.signs(), &[1, -1, 1]);
    }

    #[test]
    fn inner_sum_all_zero_u_is_one() {
        let r = rc(vec![0.25; 4], vec![0.0; 4]);
        for mask in 0..16u64 {
            let s = inner_sum(&r, &SignVector::from_mask(mask, 4), e(3.0)).unwrap();
            assert_eq!(s, 1.0);
        }
    }

    #[test]
    fn inner_sum_endpoints_n1() {
        let r = rc(vec![1.0], vec![1.0]);
        let p = e(2.5);
        let plus = inner_sum(&r, &SignVector::new(vec![1]).unwrap(), p).unwrap();
        let minus = inner_sum(&r, &SignVector::new(vec![-1]).unwrap(), p).unwrap();
        assert!((plus - 2f64.powf(1.5)).abs() < 1e-14);
        assert_eq!(minus, 0.0);
    }

    #[test]
    fn inner_sum_hand_value_n2() {
        // alpha = (1/2, 1/2), u = (1, 1), eps = (+1, -1), p = 3: 1/2 * 4 + 0 = 2
        let r = rc(vec![0.5, 0.5], vec![1.0, 1.0]);
        let s = inner_sum(&r, &SignVector::new(vec![1, -1]).unwrap(), e(3.0)).unwrap();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn complement_sum_definition() {
        let r = rc(vec![0.3, 0.3, 0.4], vec![0.2, 0.8, 0.5]);
        let p = e(2.5);
        let eps = SignVector::new(vec![1, -1, 1]).unwrap();
        let full = inner_sum(&r, &eps, p).unwrap();
        for j in 0..3 {
            let without = complement_sum(&r, &eps, p, j).unwrap();
            let (plus, minus) = sign_terms(&r, p);
            let own = if eps.signs()[j] == 1 { plus[j] } else { minus[j] };
            assert!((without + own - full).abs() < 1e-12);
        }
        assert!(complement_sum(&r, &eps, p, 3).is_err());
    }

    #[test]
    fn complement_sum_n1_is_empty() {
        let r = rc(vec![1.0], vec![0.4]);
        let eps = SignVector::new(vec![1]).unwrap();
        assert_eq!(complement_sum(&r, &eps, e(3.0), 0).unwrap(), 0.0);
    }

    #[test]
    fn phi_exact_baseline_one() {
        let r = rc(vec![0.25; 4], vec![0.0; 4]);
        let res = phi_exact(&r, e(2.5), 24).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.method, Method::Exact);
        assert_eq!(res.std_error, 0.0);
    }

    #[test]
    fn phi_exact_n1_closed_form() {
        // n=1: phi = 1/(1+u^p)^{1/p}; at u=1, p=4 this is 2^{-1/4}.
        let r = rc(vec![1.0], vec![1.0]);
        let res = phi_exact(&r, e(4.0), 24).unwrap();
        assert!((res.value - 0.8408964152537145).abs() < 1e-15);
        for u in [0.2, 0.5, 0.9] {
            let r = rc(vec![1.0], vec![u]);
            let want = 1.0 / (1.0 + u.powf(4.0)).powf(0.25);
            assert!((phi_exact(&r, e(4.0), 24).unwrap().value - want).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_exact_refuses_over_cap() {
        let r = rc(vec![0.25; 4], vec![0.0; 4]);
        assert!(matches!(
            phi_exact(&r, e(3.0), 3),
            Err(Error::OverEnumerationCap { n: 4, cap: 3 })
        ));
    }

    #[test]
    fn gray_walk_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 2, 5, 9, 12] {
            let alphas = simplex_alphas(&mut rng, n);
            let us: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let r = rc(alphas, us);
            let p = e(2.5);
            let fast = phi_exact(&r, p, 24).unwrap().value;
            let slow = phi_exact_naive(&r, p, 24).unwrap();
            assert!((fast - slow).abs() <= 1e-10, "n={n}: {fast} vs {slow}");
        }
    }

    fn simplex_alphas(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        // 1/(2n) + beta with beta uniform on the half-mass simplex
        let spac: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = spac.iter().sum();
        spac.iter().map(|&s| 0.5 / n as f64 + 0.5 * s / total).collect()
    }

    #[test]
    fn phi_mc_deterministic_and_constant_case() {
        let r = rc(vec![0.5, 0.5], vec![0.0, 0.0]);
        let res = phi_mc(&r, e(3.0), 500, 7).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.std_error, 0.0);
        let r2 = rc(vec![0.5, 0.5], vec![0.3, 0.7]);
        let a = phi_mc(&r2, e(3.0), 500, 7).unwrap();
        let b = phi_mc(&r2, e(3.0), 500, 7).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.std_error, b.std_error);
        assert!(phi_mc(&r2, e(3.0), 99, 7).is_err());
    }

    #[test]
    fn phi_mc_brackets_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 12;
        let alphas = simplex_alphas(&mut rng, n);
        let us: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let r = rc(alphas, us);
        let p = e(2.5);
        let exact = phi_exact(&r, p, 24).unwrap().value;
        let mc = phi_mc(&r, p, 100_000, 3).unwrap();
        assert!(
            (mc.value - exact).abs() <= 4.0 * mc.std_error,
            "exact {exact} mc {} +- {}",
            mc.value,
            mc.std_error
        );
    }

    #[test]
    fn partial_zero_at_symmetric_point() {
        let r = rc(vec![0.25; 4], vec![0.0; 4]);
        for j in 0..4 {
            let d = phi_partial(&r, e(3.0), j, 24).unwrap();
            assert!(d.abs() < 1e-15);
        }
    }

    #[test]
    fn partial_matches_gradient_and_finite_difference() {
        let r = rc(vec![0.5, 0.5], vec![0.3, 0.0]);
        let p = e(3.0);
        let grad = phi_gradient(&r, p, 24).unwrap();
        for j in 0..2 {
            let single = phi_partial(&r, p, j, 24).unwrap();
            assert!((single - grad[j]).abs() < 1e-14);
        }
        // central finite difference on u_1
        let h = 1e-5;
        let up = phi_exact(&r.with_u(0, 0.3 + h).unwrap(), p, 24).unwrap().value;
        let dn = phi_exact(&r.with_u(0, 0.3 - h).unwrap(), p, 24).unwrap().value;
        let fd = (up - dn) / (2.0 * h);
        assert!(grad[0] > 0.0);
        assert!(
            (grad[0] - fd).abs() <= 1e-5 * fd.abs(),
            "analytic {} fd {fd}",
            grad[0]
        );
    }

    #[test]
    fn partial_requires_unit_interval() {
        let r = rc(vec![0.5, 0.5], vec![-0.3, 0.2]);
        assert!(phi_partial(&r, e(3.0), 0, 24).is_err());
        // other coordinates may be negative when differentiating j = 1
        assert!(phi_partial(&r, e(3.0), 1, 24).is_ok());
    }

    #[test]
    fn pair_sum_consistent_with_partial() {
        // Averaging the pair sum over all sign vectors of the others equals
        // the partial derivative (up to the prefactor and the 1/2).
        let r = rc(vec![0.4, 0.35, 0.25], vec![0.5, 0.2, 0.7]);
        let p = e(2.5);
        let j = 1;
        let mut total = 0.0;
        for mask in 0..8u64 {
            total += partial_pair_sum(&r, p, j, &SignVector::from_mask(mask, 3)).unwrap();
        }
        // each (eps_others) pattern appears twice (bit j free)
        let pv = p.value();
        let denom = 1.0 + r.us()[j].powf(pv);
        let pre = r.alphas()[j] / (denom * denom);
        let avg = pre * 0.5 * total / 8.0;
        let exact = phi_partial(&r, p, j, 24).unwrap();
        assert!((avg - exact).abs() < 1e-14, "{avg} vs {exact}");
    }

    #[test]
    fn gradient_mc_matches_exact_on_small_case() {
        let r = rc(vec![0.3, 0.3, 0.2, 0.2], vec![0.4, 0.1, 0.6, 0.25]);
        let p = e(2.5);
        let exact = phi_gradient(&r, p, 24).unwrap();
        let est = phi_gradient_mc(&r, p, 400_000, 11).unwrap();
        for j in 0..4 {
            assert!(
                (est[j] - exact[j]).abs() <= 2e-3 * exact[j].abs().max(1e-3),
                "j={j}: {} vs {}",
                est[j],
                exact[j]
            );
        }
    }

    #[test]
    fn phi_sign_flip_invariance() {
        let r1 = rc(vec![0.5, 0.5], vec![0.3, -0.7]);
        let r2 = rc(vec![0.5, 0.5], vec![0.3, 0.7]);
        let p = e(2.5);
        let a = phi_exact(&r1, p, 24).unwrap().value;
        let b = phi_exact(&r2, p, 24).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn phi_permutation_invariance() {
        let r1 = rc(vec![0.3, 0.45, 0.25], vec![0.2, 0.9, 0.5]);
        let r2 = rc(vec![0.45, 0.25, 0.3], vec![0.9, 0.5, 0.2]);
        let p = e(3.0);
        let a = phi_exact(&r1, p, 24).unwrap().value;
        let b = phi_exact(&r2, p, 24).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }
}
