//! Finite-dimensional `l_p` vectors: norms, distances and seeded sampling of
//! normalized configurations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::util::{pow_abs, root_p};

/// The exponent p of an `l_p` space. Finite and at least 2; p = 2 is allowed
/// for boundary and degeneracy checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 2.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A vector in `l_p^d` with its exponent attached.
#[derive(Debug, Clone, PartialEq)]
pub struct LpVector {
    coords: Vec<f64>,
    p: Exponent,
}

impl LpVector {
    pub fn new(coords: Vec<f64>, p: Exponent) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        Ok(LpVector { coords, p })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// (sum |xi_k|^p)^(1/p); zero exactly for the zero vector.
    pub fn norm(&self) -> f64 {
        let p = self.p.value();
        let sum: f64 = self.coords.iter().map(|&c| pow_abs(c, p)).sum();
        root_p(sum, p)
    }

    /// norm(self - other); requires matching dimension and exponent.
    pub fn distance(&self, other: &LpVector) -> Result<f64> {
        self.check_compatible(other)?;
        let p = self.p.value();
        let sum: f64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| pow_abs(a - b, p))
            .sum();
        Ok(root_p(sum, p))
    }

    pub(crate) fn check_compatible(&self, other: &LpVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.p != other.p {
            return Err(Error::ExponentMismatch {
                left: self.p.value(),
                right: other.p.value(),
            });
        }
        Ok(())
    }

    pub(crate) fn scaled(&self, c: f64) -> LpVector {
        LpVector {
            coords: self.coords.iter().map(|&x| c * x).collect(),
            p: self.p,
        }
    }
}

/// A point x and points y_1..y_n on the same `l_p^d`, normalized so that
/// ||x||^p = 1/n and sum ||y_i||^p = 1.
#[derive(Debug, Clone)]
pub struct Configuration {
    x: LpVector,
    ys: Vec<LpVector>,
}

/// Relative tolerance for the two normalization invariants.
pub const CONFIG_NORM_TOL: f64 = 1e-10;

impl Configuration {
    pub fn new(x: LpVector, ys: Vec<LpVector>) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::InvalidConfiguration("need at least one y".into()));
        }
        for y in &ys {
            x.check_compatible(y)?;
        }
        let n = ys.len() as f64;
        let p = x.exponent().value();
        let x_mass = pow_abs(x.norm(), p);
        if (x_mass * n - 1.0).abs() > CONFIG_NORM_TOL {
            return Err(Error::InvalidConfiguration(format!(
                "||x||^p = {x_mass} but must equal 1/n = {}",
                1.0 / n
            )));
        }
        let y_mass: f64 = ys.iter().map(|y| pow_abs(y.norm(), p)).sum();
        if (y_mass - 1.0).abs() > CONFIG_NORM_TOL {
            return Err(Error::InvalidConfiguration(format!(
                "sum ||y_i||^p = {y_mass} but must equal 1"
            )));
        }
        Ok(Configuration { x, ys })
    }

    pub fn x(&self) -> &LpVector {
        &self.x
    }

    pub fn ys(&self) -> &[LpVector] {
        &self.ys
    }

    pub fn n(&self) -> usize {
        self.ys.len()
    }

    pub fn exponent(&self) -> Exponent {
        self.x.exponent()
    }
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize, p: Exponent) -> LpVector {
    loop {
        let coords: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let v = LpVector { coords, p };
        let norm = v.norm();
        if norm > 0.0 && norm.is_finite() {
            return v.scaled(1.0 / norm);
        }
    }
}

/// Draw a random [`Configuration`]: x is a uniformly random direction scaled
/// to ||x||^p = 1/n, and the masses t_i = ||y_i||^p are a uniform point of
/// the simplex (exponential spacings), directions independent. Deterministic
/// given the seed.
pub fn sample_configuration(n: usize, d: usize, p: Exponent, seed: u64) -> Result<Configuration> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidInput("n and d must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pv = p.value();

    let x = random_direction(&mut rng, d, p).scaled(root_p(1.0 / n as f64, pv));

    let spacings: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen::<f64>();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = spacings.iter().sum();

    let ys: Vec<LpVector> = spacings
        .iter()
        .map(|&e| {
            let mass = e / total;
            random_direction(&mut rng, d, p).scaled(root_p(mass, pv))
        })
        .collect();

    Configuration::new(x, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn basis(i: usize, d: usize, p: f64) -> LpVector {
        let mut c = vec![0.0; d];
        c[i] = 1.0;
        LpVector::new(c, e(p)).unwrap()
    }

    #[test]
    fn exponent_rejects_bad_values() {
        assert!(Exponent::new(1.99).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::new(f64::INFINITY).is_err());
        assert!(Exponent::new(2.0).is_ok());
    }

    #[test]
    fn vector_rejects_empty_and_nonfinite() {
        assert!(LpVector::new(vec![], e(3.0)).is_err());
        assert!(LpVector::new(vec![1.0, f64::NAN], e(3.0)).is_err());
    }

    #[test]
    fn norm_unit_basis_is_one() {
        for p in [2.0, 2.1, 3.0, 8.0] {
            assert_eq!(basis(0, 4, p).norm(), 1.0);
        }
    }

    #[test]
    fn norm_ones_p2_is_sqrt2() {
        let v = LpVector::new(vec![1.0, 1.0], e(2.0)).unwrap();
        assert!((v.norm() - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn norm_three_four_p3() {
        // 3^3 + 4^3 = 91
        let v = LpVector::new(vec![3.0, 4.0], e(3.0)).unwrap();
        assert!((v.norm() - 4.497941445275415).abs() < 1e-12);
    }

    #[test]
    fn distance_to_self_is_zero() {
        let v = LpVector::new(vec![0.3, -0.7, 0.1], e(2.5)).unwrap();
        assert_eq!(v.distance(&v).unwrap(), 0.0);
    }

    #[test]
    fn distance_antipodal_p2() {
        let a = basis(0, 2, 2.0);
        let b = a.scaled(-1.0);
        assert!((a.distance(&b).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn distance_cross_basis_p3() {
        let a = basis(0, 2, 3.0);
        let b = basis(1, 2, 3.0);
        assert!((a.distance(&b).unwrap() - 1.2599210498948732).abs() < 1e-14);
    }

    #[test]
    fn distance_rejects_mismatch() {
        let a = basis(0, 2, 3.0);
        let b = basis(0, 3, 3.0);
        assert!(matches!(
            a.distance(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = basis(0, 2, 2.5);
        assert!(matches!(a.distance(&c), Err(Error::ExponentMismatch { .. })));
    }

    #[test]
    fn sample_configuration_invariants() {
        for (n, d, p, seed) in [(1, 1, 2.5, 3u64), (4, 3, 2.5, 7), (16, 8, 5.0, 11)] {
            let cfg = sample_configuration(n, d, e(p), seed).unwrap();
            assert_eq!(cfg.n(), n);
            // Configuration::new already enforced the invariants; recheck the masses.
            let x_mass = cfg.x().norm().powf(p);
            assert!((x_mass * n as f64 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sample_configuration_n1_d1_forced() {
        let cfg = sample_configuration(1, 1, e(3.0), 99).unwrap();
        assert!((cfg.x().coords()[0].abs() - 1.0).abs() < 1e-12);
        assert!((cfg.ys()[0].coords()[0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_configuration_deterministic() {
        let a = sample_configuration(4, 3, e(2.5), 7).unwrap();
        let b = sample_configuration(4, 3, e(2.5), 7).unwrap();
        assert_eq!(a.x().coords(), b.x().coords());
        for (ya, yb) in a.ys().iter().zip(b.ys()) {
            assert_eq!(ya.coords(), yb.coords());
        }
        let c = sample_configuration(4, 3, e(2.5), 8).unwrap();
        assert_ne!(a.x().coords(), c.x().coords());
    }
}
