//! Scalar functions underlying the sign-average analysis.
//!
//! For u in [0, 1] the two sign terms (1 +/- u)^p / (1 + u^p) split into an
//! even and an odd part:
//!
//! ```text
//! even_part(u) = ((1+u)^p + (1-u)^p) / (2 (1+u^p))   >= 1
//! odd_part(u)  = ((1+u)^p - (1-u)^p) / (2 (1+u^p))   >= 0
//! ```
//!
//! [`threshold_ratio`] is the scalar against which the complement sum decides
//! the sign of a paired derivative term, and [`two_sign_sum`] is the
//! two-point sign average used to locate the cap-free critical exponent.

use crate::error::{Error, Result};
use crate::lp::Exponent;
use crate::util::{golden_max, pow_abs};

/// Even part of the sign terms; equals 1 at u = 0 and 2^(p-2) at u = 1.
pub fn even_part(u: f64, p: Exponent) -> f64 {
    assert!((0.0..=1.0).contains(&u), "even_part: u outside [0,1]");
    let pv = p.value();
    (pow_abs(1.0 + u, pv) + pow_abs(1.0 - u, pv)) / (2.0 * (1.0 + pow_abs(u, pv)))
}

/// Odd part of the sign terms; equals 0 at u = 0.
pub fn odd_part(u: f64, p: Exponent) -> f64 {
    assert!((0.0..=1.0).contains(&u), "odd_part: u outside [0,1]");
    let pv = p.value();
    (pow_abs(1.0 + u, pv) - pow_abs(1.0 - u, pv)) / (2.0 * (1.0 + pow_abs(u, pv)))
}

/// Threshold ratio on (0, 1):
///
/// ```text
///  (1-u^2)^p     (1+u^(p-1))^(p/(p-1)) - (1-u^(p-1))^(p/(p-1))
///  ---------  *  ---------------------------------------------------------
///   1+u^p        (1+u)^p (1-u^(p-1))^(p/(p-1)) - (1-u)^p (1+u^(p-1))^(p/(p-1))
/// ```
///
/// Tends to 0 at both ends and is bounded. Both the numerator and the
/// denominator vanish at the ends, so the tails are evaluated in log space
/// with `ln_1p`/`exp_m1` to keep full relative precision through the
/// cancellation; the interior uses the plain formula. The cancellation depth
/// near 0 is u^(p-1), so the compensated region is u^(p-1) < 1e-4 or
/// u > 0.99 (at p = 3 the first condition is exactly u < 0.01).
pub fn threshold_ratio(u: f64, p: Exponent) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidInput(format!(
            "threshold_ratio: u = {u} outside (0,1)"
        )));
    }
    let pv = p.value();
    if u <= 0.99 && u.powf(pv - 1.0) >= 1e-4 {
        Ok(ratio_plain(u, pv))
    } else {
        Ok(ratio_tail(u, pv))
    }
}

fn ratio_plain(u: f64, pv: f64) -> f64 {
    let q = pv / (pv - 1.0);
    let s = u.powf(pv - 1.0);
    let num = (1.0 + s).powf(q) - (1.0 - s).powf(q);
    let den = (1.0 + u).powf(pv) * (1.0 - s).powf(q) - (1.0 - u).powf(pv) * (1.0 + s).powf(q);
    ((1.0 - u * u).powf(pv) / (1.0 + u.powf(pv))) * num / den
}

fn ratio_tail(u: f64, pv: f64) -> f64 {
    let q = pv / (pv - 1.0);
    // u - 1.0 is exact for u in [0.5, 1), so ln u keeps the distance to 1.
    let ln_u = if u > 0.5 { (u - 1.0).ln_1p() } else { u.ln() };
    let ln_s = (pv - 1.0) * ln_u;
    let s = ln_s.exp();
    // 1 - s loses all precision near u -> 1 if formed directly; recover it
    // from ln s via exp_m1 there, and from s itself near u -> 0.
    let ln_1ms = if u < 0.5 {
        (-s).ln_1p()
    } else {
        (-ln_s.exp_m1()).ln()
    };
    let ln_1ps = s.ln_1p();
    let ln_1pu = u.ln_1p();
    let ln_1mu = (-u).ln_1p();

    // Numerator (1+s)^q - (1-s)^q = e^{q ln(1-s)} expm1(q [ln(1+s) - ln(1-s)]);
    // the bracket adds two same-sign terms, no cancellation.
    let gap_n = q * (ln_1ps - ln_1ms);
    let num = (q * ln_1ms).exp() * gap_n.exp_m1();

    // Denominator e^A - e^B with A = p ln(1+u) + q ln(1-s),
    // B = p ln(1-u) + q ln(1+s). Near u -> 0 the exponents nearly coincide.
    let a = pv * ln_1pu + q * ln_1ms;
    let b = pv * ln_1mu + q * ln_1ps;
    let gap_d = a - b;
    let den = if gap_d < 0.7 {
        b.exp() * gap_d.exp_m1()
    } else {
        a.exp() - b.exp()
    };

    let prefactor = (pv * (ln_1pu + ln_1mu)).exp() / (1.0 + (pv * ln_u).exp());
    prefactor * num / den
}

/// Empirical sup of [`threshold_ratio`] over (0, 1): grid scan refined by a
/// golden-section pass around the grid argmax.
pub fn threshold_ratio_sup(p: Exponent, grid: usize) -> f64 {
    assert!(grid >= 1000, "threshold_ratio_sup: grid must be >= 1000");
    let h = 1.0 / (grid as f64 + 1.0);
    let eval = |u: f64| threshold_ratio(u, p).expect("interior point");
    let mut best_val = f64::NEG_INFINITY;
    let mut best_u = h;
    for k in 1..=grid {
        let u = k as f64 * h;
        let val = eval(u);
        if val > best_val {
            best_val = val;
            best_u = u;
        }
    }
    let lo = (best_u - h).max(0.5 * h);
    let hi = (best_u + h).min(1.0 - 0.5 * h);
    let (_, refined) = golden_max(eval, lo, hi, 70);
    refined.max(best_val)
}

/// Two-point sign average
/// `(1 + (1+u)^p/(1+u^p))^(1/p) + (1 + (1-u)^p/(1+u^p))^(1/p)` on [0, 1];
/// equals 2^(1+1/p) at u = 0 and (1 + 2^(p-1))^(1/p) + 1 at u = 1.
pub fn two_sign_sum(u: f64, p: Exponent) -> f64 {
    assert!((0.0..=1.0).contains(&u), "two_sign_sum: u outside [0,1]");
    let pv = p.value();
    let denom = 1.0 + pow_abs(u, pv);
    (1.0 + pow_abs(1.0 + u, pv) / denom).powf(1.0 / pv)
        + (1.0 + pow_abs(1.0 - u, pv) / denom).powf(1.0 / pv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn even_odd_endpoints() {
        for pv in [2.1, 2.5, 3.0, 8.0] {
            let p = e(pv);
            assert_eq!(even_part(0.0, p), 1.0);
            assert_eq!(odd_part(0.0, p), 0.0);
            // even_part(1) = 2^{p-2} = 1 + c2
            let c2 = 2f64.powf(pv - 2.0) - 1.0;
            assert!((even_part(1.0, p) - (1.0 + c2)).abs() < 1e-13);
        }
    }

    #[test]
    fn even_odd_hand_values_p3() {
        let p = e(3.0);
        assert!((even_part(0.5, p) - 14.0 / 9.0).abs() < 1e-15);
        assert!((odd_part(0.5, p) - 13.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn sign_term_identity() {
        // even + odd = (1+u)^p/(1+u^p), even - odd = (1-u)^p/(1+u^p)
        for pv in [2.1, 3.0, 5.0] {
            let p = e(pv);
            for k in 0..=100 {
                let u = k as f64 / 100.0;
                let plus = (1.0 + u).powf(pv) / (1.0 + u.powf(pv));
                let minus = (1.0 - u).powf(pv) / (1.0 + u.powf(pv));
                assert!((even_part(u, p) + odd_part(u, p) - plus).abs() < 1e-12);
                assert!((even_part(u, p) - odd_part(u, p) - minus).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ratio_rejects_boundary() {
        assert!(threshold_ratio(0.0, e(3.0)).is_err());
        assert!(threshold_ratio(1.0, e(3.0)).is_err());
        assert!(threshold_ratio(-0.2, e(3.0)).is_err());
    }

    #[test]
    fn ratio_known_value_p3_half() {
        let got = threshold_ratio(0.5, e(3.0)).unwrap();
        assert!((got - 0.13904236195227926).abs() < 1e-14);
    }

    #[test]
    fn ratio_paths_agree_where_both_are_accurate() {
        // the plain path keeps ~11 digits once u^(p-1) >= 1e-2
        for pv in [2.05, 2.1, 2.5, 3.0, 5.0, 8.0] {
            for u in [0.3, 0.5, 0.7, 0.9, 0.98] {
                let plain = ratio_plain(u, pv);
                let tail = ratio_tail(u, pv);
                assert!(
                    (plain - tail).abs() <= 1e-10 * plain.abs(),
                    "p={pv} u={u}: plain={plain} tail={tail}"
                );
            }
        }
    }

    #[test]
    fn ratio_small_u_order_p3() {
        // Near 0 the ratio behaves like u^{p-2}/(p-1).
        let p = e(3.0);
        let got = threshold_ratio(1e-4, p).unwrap();
        assert!((got - 5.000249845827294e-5).abs() < 1e-12);
        let hi = threshold_ratio(1.0 - 1e-4, p).unwrap();
        assert!((hi - 5.000370629028761e-7).abs() < 1e-14);
    }

    #[test]
    fn ratio_deep_tail_finite() {
        for pv in [2.05, 2.5, 3.0, 5.0, 8.0] {
            let p = e(pv);
            for k in 1..=8 {
                let u = 10f64.powi(-k);
                let lo = threshold_ratio(u, p).unwrap();
                let hi = threshold_ratio(1.0 - u, p).unwrap();
                assert!(lo.is_finite() && lo >= 0.0, "p={pv} k={k} lo={lo}");
                assert!(hi.is_finite() && hi >= 0.0, "p={pv} k={k} hi={hi}");
            }
        }
    }

    #[test]
    fn sup_dominates_midpoint() {
        for pv in [2.05, 2.5, 3.0, 5.0, 8.0] {
            let p = e(pv);
            let sup = threshold_ratio_sup(p, 1000);
            assert!(sup.is_finite());
            assert!(sup >= threshold_ratio(0.5, p).unwrap());
        }
    }

    #[test]
    fn sup_converges_under_grid_doubling() {
        let p = e(3.0);
        let a = threshold_ratio_sup(p, 2000);
        let b = threshold_ratio_sup(p, 4000);
        assert!((a - b).abs() <= 1e-6 * a.abs());
    }

    #[test]
    fn two_sign_sum_endpoints() {
        for pv in [2.1, 2.5, 3.0, 8.0] {
            let p = e(pv);
            let at0 = two_sign_sum(0.0, p);
            assert!((at0 - 2f64.powf(1.0 + 1.0 / pv)).abs() < 4e-16 * at0);
            let at1 = two_sign_sum(1.0, p);
            let want = (1.0 + 2f64.powf(pv - 1.0)).powf(1.0 / pv) + 1.0;
            assert!((at1 - want).abs() < 1e-14);
        }
    }

    #[test]
    fn two_sign_sum_matches_sign_term_reconstruction() {
        // Both addends can be rebuilt from even/odd parts.
        let p = e(3.0);
        for k in 0..=50 {
            let u = k as f64 / 50.0;
            let plus = even_part(u, p) + odd_part(u, p);
            let minus = even_part(u, p) - odd_part(u, p);
            let want = (1.0 + plus).powf(1.0 / 3.0) + (1.0 + minus).powf(1.0 / 3.0);
            assert!((two_sign_sum(u, p) - want).abs() < 1e-12);
        }
    }
}
