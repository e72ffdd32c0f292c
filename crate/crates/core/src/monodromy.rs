//! Stokes/monodromy data for Painlevé II and its classification into the
//! global solution families.
//!
//! The triple (s1, s2, s3) always satisfies s1 - s2 + s3 + s1 s2 s3 = 0.
//! Purely real solutions have s3 = conj(s1), s2 real; purely imaginary ones
//! have s3 = -conj(s1), s2 imaginary.  Real data with s2 != 0 or |s1| > 1
//! produce pole-bearing solutions and are flagged singular rather than
//! integrated.

use crate::error::{Error, Result};
use crate::numerics::arg_gamma;
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;

const CLASS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonodromyData {
    pub s1: Complex64,
    pub s2: Complex64,
    pub s3: Complex64,
}

impl MonodromyData {
    /// Validate the cubic constraint (within 1e-14 on the natural scale).
    pub fn new(s1: Complex64, s2: Complex64, s3: Complex64) -> Result<Self> {
        let m = MonodromyData { s1, s2, s3 };
        let r = m.constraint_residual();
        if r > 1e-14 * (1.0 + s1.norm() + s2.norm() + s3.norm()) {
            return Err(Error::ConstraintViolation { residual: r });
        }
        Ok(m)
    }

    pub fn constraint_residual(&self) -> f64 {
        (self.s1 - self.s2 + self.s3 + self.s1 * self.s2 * self.s3).norm()
    }

    pub fn negated(&self) -> MonodromyData {
        MonodromyData { s1: -self.s1, s2: -self.s2, s3: -self.s3 }
    }

    /// Real Ablowitz-Segur family: s1 = -i k with -1 < k < 1, s2 = 0, s3 = -s1.
    pub fn real_ablowitz_segur(k: f64) -> Result<Self> {
        if k.abs() >= 1.0 {
            return Err(Error::UnsupportedClass);
        }
        let s1 = Complex64::new(0.0, -k);
        MonodromyData::new(s1, Complex64::new(0.0, 0.0), -s1)
    }

    /// Hastings-McLeod: s1 = sign * (-i), s2 = 0, s3 = -s1.
    pub fn hastings_mcleod(sign: i8) -> Self {
        let s1 = Complex64::new(0.0, -(sign as f64));
        MonodromyData { s1, s2: Complex64::new(0.0, 0.0), s3: -s1 }
    }

    /// Purely imaginary Ablowitz-Segur: s1 = a real, s2 = 0, s3 = -a.
    pub fn imag_ablowitz_segur(a: f64) -> Self {
        let s1 = Complex64::new(a, 0.0);
        MonodromyData { s1, s2: Complex64::new(0.0, 0.0), s3: -s1 }
    }

    /// Generic purely imaginary family from s1 with Im(s1) != 0:
    /// s3 = -conj(s1) and s2 = (s1 - conj(s1)) / (1 + |s1|^2).
    pub fn generic_imaginary(s1: Complex64) -> Result<Self> {
        if s1.im == 0.0 {
            return Err(Error::UnsupportedClass);
        }
        let s2 = (s1 - s1.conj()) / (1.0 + s1.norm_sqr());
        MonodromyData::new(s1, s2, -s1.conj())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionClass {
    RealAblowitzSegur,
    HastingsMcLeod,
    ImagAblowitzSegur,
    GenericImaginary,
    SingularReal,
    Unsupported,
}

impl fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolutionClass::RealAblowitzSegur => "real-ablowitz-segur",
            SolutionClass::HastingsMcLeod => "hastings-mcleod",
            SolutionClass::ImagAblowitzSegur => "imag-ablowitz-segur",
            SolutionClass::GenericImaginary => "generic-imaginary",
            SolutionClass::SingularReal => "singular-real",
            SolutionClass::Unsupported => "unsupported",
        };
        write!(f, "{s}")
    }
}

/// Classify monodromy data into a solution family.
pub fn classify(m: &MonodromyData) -> Result<SolutionClass> {
    let r = m.constraint_residual();
    if r > 1e-12 * (1.0 + m.s1.norm() + m.s2.norm() + m.s3.norm()) {
        return Err(Error::ConstraintViolation { residual: r });
    }
    let real_data = (m.s3 - m.s1.conj()).norm() < CLASS_TOL && m.s2.im.abs() < CLASS_TOL;
    let imag_data = (m.s3 + m.s1.conj()).norm() < CLASS_TOL && m.s2.re.abs() < CLASS_TOL;

    if real_data {
        if m.s2.norm() > CLASS_TOL {
            return Ok(SolutionClass::SingularReal);
        }
        // s2 = 0 and s3 = conj(s1) = -s1 forces s1 purely imaginary
        if m.s1.re.abs() > CLASS_TOL {
            return Ok(SolutionClass::Unsupported);
        }
        let a = m.s1.norm();
        if (a - 1.0).abs() < CLASS_TOL {
            return Ok(SolutionClass::HastingsMcLeod);
        }
        if a < 1.0 {
            return Ok(SolutionClass::RealAblowitzSegur);
        }
        return Ok(SolutionClass::SingularReal);
    }
    if imag_data {
        if m.s1.im.abs() < CLASS_TOL {
            return Ok(SolutionClass::ImagAblowitzSegur);
        }
        return Ok(SolutionClass::GenericImaginary);
    }
    Ok(SolutionClass::Unsupported)
}

/// Endpoint-expansion constants for a classified monodromy datum.
///
/// Only the fields relevant to the class are populated.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AsymptoticParams {
    pub klass: SolutionClass,
    /// (1/2pi) log(1 - |s1|^2) < 0 (real Ablowitz-Segur).
    pub beta: Option<f64>,
    /// Phase of the oscillation at minus infinity.
    pub phi_minus: Option<f64>,
    /// Amplitude d > 0 of the imaginary families.
    pub d: Option<f64>,
    /// rho > 0 of the generic imaginary expansion at plus infinity.
    pub rho: Option<f64>,
    /// sigma = -sgn(Im s1).
    pub sigma_sign: Option<i8>,
    /// theta phase of the plus-infinity cosine.
    pub theta_phase: Option<f64>,
    /// nu = -i sigma rho^2.
    pub nu: Option<Complex64>,
}

/// Derive the expansion constants for one of the four global families.
pub fn asym_params(m: &MonodromyData) -> Result<AsymptoticParams> {
    let klass = classify(m)?;
    let mut p = AsymptoticParams {
        klass,
        beta: None,
        phi_minus: None,
        d: None,
        rho: None,
        sigma_sign: None,
        theta_phase: None,
        nu: None,
    };
    match klass {
        SolutionClass::RealAblowitzSegur => {
            let beta = (1.0 - m.s1.norm_sqr()).ln() / (2.0 * std::f64::consts::PI);
            p.beta = Some(beta);
            if m.s1.norm() > 0.0 {
                let phi = -std::f64::consts::FRAC_PI_4
                    - arg_gamma(Complex64::new(0.0, beta))?
                    - m.s1.arg();
                p.phi_minus = Some(phi);
            }
        }
        SolutionClass::HastingsMcLeod => {}
        SolutionClass::ImagAblowitzSegur | SolutionClass::GenericImaginary => {
            let d2 = (1.0 + m.s1.norm_sqr()).ln() / std::f64::consts::PI;
            p.d = Some(d2.sqrt());
            if m.s1.norm() > 0.0 {
                let phi = 1.5 * d2 * 2.0f64.ln()
                    - std::f64::consts::FRAC_PI_4
                    - arg_gamma(Complex64::new(0.0, d2 / 2.0))?
                    - m.s1.arg();
                p.phi_minus = Some(phi);
            }
            if klass == SolutionClass::GenericImaginary {
                let sigma = if m.s1.im > 0.0 { -1i8 } else { 1i8 };
                let rho2 = -m.s2.norm().ln() / std::f64::consts::PI;
                let theta = -0.75 * std::f64::consts::PI - 3.5 * rho2 * 2.0f64.ln()
                    + arg_gamma(Complex64::new(0.0, rho2))?
                    + (Complex64::new(1.0, 0.0) + m.s1 * m.s1).arg();
                p.sigma_sign = Some(sigma);
                p.rho = Some(rho2.sqrt());
                p.theta_phase = Some(theta);
                p.nu = Some(Complex64::new(0.0, -(sigma as f64) * rho2));
            }
        }
        _ => {
            return Err(Error::ClassMismatch {
                expected: "one of the four global families".into(),
                found: klass.to_string(),
            })
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classify_families() {
        // (-i/2, 0, i/2) -> real AS
        let m = MonodromyData::new(c(0.0, -0.5), c(0.0, 0.0), c(0.0, 0.5)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::RealAblowitzSegur);
        // (-i, 0, i) -> Hastings-McLeod
        let m = MonodromyData::new(c(0.0, -1.0), c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::HastingsMcLeod);
        // (1, 0, -1) -> imaginary AS
        let m = MonodromyData::new(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::ImagAblowitzSegur);
        // (i/2, 4i/5, i/2) -> generic imaginary, constraint checked independently:
        // s1 - s2 + s3 + s1 s2 s3 = i/2 - 4i/5 + i/2 + (i/2)(4i/5)(i/2) = i(1/2-4/5+1/2-1/5) = 0
        let m = MonodromyData::new(c(0.0, 0.5), c(0.0, 0.8), c(0.0, 0.5)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::GenericImaginary);
        // generic constructor agrees
        let g = MonodromyData::generic_imaginary(c(0.0, 0.5)).unwrap();
        assert!((g.s2 - c(0.0, 0.8)).norm() < 1e-15);
        assert!((g.s3 - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn singular_real_data() {
        // real data with s2 != 0: s1 real nonzero gives s2 = 2 s1/(1-|s1|^2)
        let s1 = c(0.5, 0.0);
        let s2 = (s1 + s1.conj()) / (1.0 - s1.norm_sqr());
        let m = MonodromyData::new(s1, s2, s1.conj()).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::SingularReal);
        // |s1| > 1 purely imaginary with s2 = 0
        let m = MonodromyData::new(c(0.0, -1.5), c(0.0, 0.0), c(0.0, 1.5)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::SingularReal);
    }

    #[test]
    fn constraint_violation_detected() {
        assert!(MonodromyData::new(c(0.0, -0.5), c(0.0, 0.0), c(0.0, 0.4)).is_err());
    }

    #[test]
    fn zero_data_is_real_as() {
        let m = MonodromyData::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(classify(&m).unwrap(), SolutionClass::RealAblowitzSegur);
    }

    #[test]
    fn params_real_as() {
        // s1 = -i/2: beta = log(3/4)/(2 pi)
        let m = MonodromyData::real_ablowitz_segur(0.5).unwrap();
        let p = asym_params(&m).unwrap();
        let beta = p.beta.unwrap();
        assert!((beta - 0.75f64.ln() / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(beta < 0.0);
        assert!(p.rho.is_none() && p.d.is_none());
    }

    #[test]
    fn params_imag_as() {
        // s1 = 1: d^2 = log(2)/pi
        let m = MonodromyData::imag_ablowitz_segur(1.0);
        let p = asym_params(&m).unwrap();
        let d = p.d.unwrap();
        assert!((d * d - 2.0f64.ln() / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn params_generic() {
        // s1 = i/2: rho^2 = -(1/pi) log(4/5), sigma = -1
        let m = MonodromyData::generic_imaginary(c(0.0, 0.5)).unwrap();
        let p = asym_params(&m).unwrap();
        let rho2 = p.rho.unwrap().powi(2);
        assert!((rho2 + 0.8f64.ln() / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(p.sigma_sign.unwrap(), -1);
        // nu = -i sigma rho^2 = i rho^2
        assert!((p.nu.unwrap() - c(0.0, rho2)).norm() < 1e-15);
        // rho^2 = (1/pi) log((1+|s1|^2)/(2 |Im s1|)) cross-check
        let alt = ((1.0 + 0.25) / (2.0 * 0.5_f64)).ln() / std::f64::consts::PI;
        assert!((rho2 - alt).abs() < 1e-15);
    }

    #[test]
    fn symmetry_of_negation() {
        let m = MonodromyData::generic_imaginary(c(0.0, 0.5)).unwrap();
        let n = m.negated();
        assert!(n.constraint_residual() < 1e-15);
        assert_eq!(classify(&n).unwrap(), SolutionClass::GenericImaginary);
    }
}
