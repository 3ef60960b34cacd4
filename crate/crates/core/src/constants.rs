//! The two critical exponents of the analysis, located by bracketed
//! bisection on scalar equations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::Exponent;
use crate::phi::scalar::two_sign_sum;
use crate::util::golden_min;

/// A bracketed root with its achieved tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub iterations: usize,
}

/// Bisection on a sign change of `f` over [lo, hi], to |hi - lo| <= 2 tol.
fn bisect_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<RootResult> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(RootResult { value: lo, bracket: (lo, lo), tolerance: tol, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(RootResult { value: hi, bracket: (hi, hi), tolerance: tol, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > 2.0 * tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        iterations += 1;
        if fm == 0.0 {
            return Ok(RootResult { value: mid, bracket: (mid, mid), tolerance: tol, iterations });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootResult {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        tolerance: tol,
        iterations,
    })
}

/// The exponent at which (3^(1/p) + 1) / 8^(1/p) crosses 1 on [2, 3]; the
/// small-n average stays below 1 for smaller p. Bisection to 1e-8.
pub fn threshold_intro() -> Result<RootResult> {
    threshold_intro_with_tol(1e-8)
}

pub fn threshold_intro_with_tol(tol: f64) -> Result<RootResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    bisect_root(intro_objective, 2.0, 3.0, tol)
}

/// (3^(1/p) + 1) / 8^(1/p) - 1.
pub fn intro_objective(p: f64) -> f64 {
    (3f64.powf(1.0 / p) + 1.0) / 8f64.powf(1.0 / p) - 1.0
}

/// Minimize two_sign_sum(u) - 2^(1+1/p) over u in [1e-6, 1]: grid scan plus
/// golden-section refinement around the argmin. Returns (argmin, min value).
/// The grid starts above 0 because the margin is identically 0 there for
/// every p.
pub fn g_min(p: Exponent, grid: usize) -> (f64, f64) {
    assert!(grid >= 1000, "g_min: grid must be >= 1000");
    let threshold = 2f64.powf(1.0 + 1.0 / p.value());
    let eval = |u: f64| two_sign_sum(u, p) - threshold;
    let lo = 1e-6;
    let step = (1.0 - lo) / (grid - 1) as f64;
    let mut best_u = lo;
    let mut best = f64::INFINITY;
    for k in 0..grid {
        let u = lo + k as f64 * step;
        let val = eval(u);
        if val < best {
            best = val;
            best_u = u;
        }
    }
    let (u_ref, v_ref) = golden_min(eval, (best_u - step).max(lo), (best_u + step).min(1.0), 70);
    if v_ref < best {
        (u_ref, v_ref)
    } else {
        (best_u, best)
    }
}

/// The infimum of p > 2 for which the two-point sign average dominates
/// 2^(1+1/p) on all of [0, 1]: predicate bisection over p in [2.05, 2.5]
/// to 1e-6, with a 1e4-point scan per predicate evaluation.
pub fn p_zero() -> Result<RootResult> {
    p_zero_with(1e-6, 10_000)
}

pub fn p_zero_with(tol: f64, grid: usize) -> Result<RootResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let holds = |pv: f64| -> Result<bool> {
        let p = Exponent::new(pv)?;
        Ok(g_min(p, grid).1 >= -1e-10)
    };
    let (mut lo, mut hi) = (2.05, 2.5);
    if holds(lo)? {
        return Err(Error::Bracket(format!("condition already holds at p = {lo}")));
    }
    if !holds(hi)? {
        return Err(Error::Bracket(format!("condition still fails at p = {hi}")));
    }
    let mut iterations = 0;
    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RootResult {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        tolerance: tol,
        iterations,
    })
}
