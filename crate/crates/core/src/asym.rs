//! Endpoint asymptotic expansions of the global Painlevé II families.
//!
//! At +infinity the decaying classes follow i s1 Ai(x); the generic
//! imaginary class follows
//!   u = i sigma sqrt(x/2) + i sigma rho (2x)^{-1/4} cos psi
//!       - 3 i sigma rho^2/(4x) + i sigma rho^2/(4x) cos 2psi + O(x^{-3/2}),
//!   psi = (2 sqrt2/3) x^{3/2} - (3/2) rho^2 log x + theta.
//!
//! At -infinity every non-Hastings-McLeod family oscillates as
//!   u = a s^{-1/4} cos Phi + s^{-7/4} [D cos 3Phi + E cos Phi + E' sin Phi]
//!       + O(s^{-13/4}),            s = -x,
//!   Phi = (2/3) s^{3/2} + (3/2) beta_eff log s + Phi0,   beta_eff = -a^2/2,
//! which unifies the real case (a = sqrt(-2 beta), Phi0 = beta log 8 + phi)
//! and the imaginary one (a = i d, Phi0 = phi - pi/2).  The s^{-7/4}
//! correction is forced by the equation itself:
//!   D = -a^3/16,  E = 3 a^3/8,  E' = 5a/48 - 17 a^5/32.
//! The Hastings-McLeod branch instead grows like
//!   u = i s1 sqrt(s/2) (1 - s^{-3}/8 - 73 s^{-6}/128 - 10657 s^{-9}/1024 + ...).

use crate::error::{Error, Result};
use crate::monodromy::{AsymptoticParams, MonodromyData, SolutionClass};
use crate::numerics::{airy_ai, airy_ai_prime};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    MinusInf,
    PlusInf,
}

/// Hastings-McLeod branch coefficients of 1 + sum a_k s^{-3k}
/// (exact values live in mkdv::series; these are their f64 images).
pub(crate) const HM_F_COEFFS: [f64; 4] = [1.0, -0.125, -73.0 / 128.0, -10657.0 / 1024.0];

/// Oscillatory minus-infinity descriptor shared by the AS and generic
/// families.
#[derive(Clone, Copy, Debug)]
pub struct MinusInfOscillation {
    pub amp: Complex64,
    pub beta_eff: f64,
    pub phi0: f64,
}

impl MinusInfOscillation {
    pub fn from_params(p: &AsymptoticParams) -> Result<Self> {
        match p.klass {
            SolutionClass::RealAblowitzSegur => {
                let beta = p.beta.expect("real AS carries beta");
                let amp = Complex64::new((-2.0 * beta).sqrt(), 0.0);
                let phi0 = match p.phi_minus {
                    Some(phi) => beta * 8.0f64.ln() + phi,
                    None => 0.0, // zero solution; amplitude vanishes
                };
                Ok(MinusInfOscillation { amp, beta_eff: beta, phi0 })
            }
            SolutionClass::ImagAblowitzSegur | SolutionClass::GenericImaginary => {
                let d = p.d.expect("imaginary classes carry d");
                let amp = Complex64::new(0.0, d);
                let phi0 = match p.phi_minus {
                    Some(phi) => phi - std::f64::consts::FRAC_PI_2,
                    None => 0.0,
                };
                Ok(MinusInfOscillation { amp, beta_eff: d * d / 2.0, phi0 })
            }
            _ => Err(Error::ClassMismatch {
                expected: "oscillatory minus-infinity class".into(),
                found: p.klass.to_string(),
            }),
        }
    }

    /// Phase at x = -s.
    pub fn phase(&self, s: f64) -> f64 {
        (2.0 / 3.0) * s.powf(1.5) + 1.5 * self.beta_eff * s.ln() + self.phi0
    }

    /// dPhi/dx at x = -s.
    pub fn dphase_dx(&self, s: f64) -> f64 {
        -(s.sqrt() + 1.5 * self.beta_eff / s)
    }

    /// (u, u_x) through the requested order (0: leading cosine; 1: adds the
    /// s^{-7/4} correction).
    pub fn eval(&self, x: f64, order: usize) -> Result<(Complex64, Complex64)> {
        if order > 1 {
            return Err(Error::OrderUnavailable { order });
        }
        let s = -x;
        let a = self.amp;
        let phi = self.phase(s);
        let dphi = self.dphase_dx(s);
        let (sin_p, cos_p) = phi.sin_cos();

        // leading term a s^{-1/4} cos Phi and its exact x-derivative
        let mut u = a * s.powf(-0.25) * cos_p;
        // d/dx [s^{-1/4}] = (1/4) s^{-5/4}
        let mut ux = a * (0.25 * s.powf(-1.25) * cos_p - s.powf(-0.25) * sin_p * dphi);

        if order >= 1 {
            let a3 = a * a * a;
            let dcoef = -a3 / 16.0;
            let ecoef = 3.0 * a3 / 8.0;
            let epcoef = a * (5.0 / 48.0) - a3 * a * a * (17.0 / 32.0);
            let (s3, c3) = (3.0 * phi).sin_cos();
            let t = dcoef * c3 + ecoef * cos_p + epcoef * sin_p;
            let dt_dx = dcoef * (-3.0 * s3) * dphi + ecoef * (-sin_p) * dphi + epcoef * cos_p * dphi;
            u += s.powf(-1.75) * t;
            ux += 1.75 * s.powf(-2.75) * t + s.powf(-1.75) * dt_dx;
        }
        Ok((u, ux))
    }
}

/// Plus-infinity descriptor of the generic imaginary family.
#[derive(Clone, Copy, Debug)]
pub struct PlusInfGeneric {
    pub rho: f64,
    pub sigma: f64,
    pub theta: f64,
}

impl PlusInfGeneric {
    pub fn from_params(p: &AsymptoticParams) -> Result<Self> {
        if p.klass != SolutionClass::GenericImaginary {
            return Err(Error::ClassMismatch {
                expected: "generic-imaginary".into(),
                found: p.klass.to_string(),
            });
        }
        Ok(PlusInfGeneric {
            rho: p.rho.unwrap(),
            sigma: p.sigma_sign.unwrap() as f64,
            theta: p.theta_phase.unwrap(),
        })
    }

    pub fn psi(&self, x: f64) -> f64 {
        (2.0 * 2.0f64.sqrt() / 3.0) * x.powf(1.5) - 1.5 * self.rho * self.rho * x.ln() + self.theta
    }

    pub fn dpsi_dx(&self, x: f64) -> f64 {
        (2.0 * x).sqrt() - 1.5 * self.rho * self.rho / x
    }

    /// (u, u_x) through the requested order:
    /// 0 the parabola term, 1 + oscillation, 2 + the non-oscillatory 1/x
    /// term, 3 + the second-harmonic 1/x term.
    pub fn eval(&self, x: f64, order: usize) -> Result<(Complex64, Complex64)> {
        if order > 3 {
            return Err(Error::OrderUnavailable { order });
        }
        let is = Complex64::new(0.0, self.sigma);
        let rho2 = self.rho * self.rho;
        let psi = self.psi(x);
        let dpsi = self.dpsi_dx(x);

        let mut u = is * (x / 2.0).sqrt();
        let mut ux = is * (0.5 / (2.0 * x).sqrt());
        if order >= 1 {
            let amp = self.rho * (2.0 * x).powf(-0.25);
            let damp = self.rho * (-0.25) * (2.0 * x).powf(-1.25) * 2.0;
            u += is * amp * psi.cos();
            ux += is * (damp * psi.cos() - amp * psi.sin() * dpsi);
        }
        if order >= 2 {
            u += is * (-0.75 * rho2 / x);
            ux += is * (0.75 * rho2 / (x * x));
        }
        if order >= 3 {
            let amp = 0.25 * rho2 / x;
            let damp = -0.25 * rho2 / (x * x);
            u += is * amp * (2.0 * psi).cos();
            ux += is * (damp * (2.0 * psi).cos() - amp * (2.0 * psi).sin() * 2.0 * dpsi);
        }
        Ok((u, ux))
    }
}

/// Leading decaying data at +infinity: u = i s1 Ai(x).
pub fn airy_tail(s1: Complex64, x: f64) -> (Complex64, Complex64) {
    let is1 = Complex64::i() * s1;
    (is1 * airy_ai(x), is1 * airy_ai_prime(x))
}

/// Hastings-McLeod minus-infinity branch through `order` correction terms.
pub fn hm_minus_inf(s1: Complex64, x: f64, order: usize) -> Result<(Complex64, Complex64)> {
    if order >= HM_F_COEFFS.len() {
        return Err(Error::OrderUnavailable { order });
    }
    let s = -x;
    let is1 = Complex64::i() * s1;
    let mut u = Complex64::new(0.0, 0.0);
    let mut ux = Complex64::new(0.0, 0.0);
    for (k, &a) in HM_F_COEFFS.iter().enumerate().take(order + 1) {
        let p = 0.5 - 3.0 * k as f64;
        let c = a / 2.0f64.sqrt();
        u += is1 * c * s.powf(p);
        ux += -is1 * c * p * s.powf(p - 1.0);
    }
    Ok((u, ux))
}

/// Evaluate the endpoint expansion of a classified family.
///
/// `order` selects how many printed terms are included (0 = leading).
pub fn asym_u(
    params: &AsymptoticParams,
    m: &MonodromyData,
    x: f64,
    endpoint: Endpoint,
    order: usize,
) -> Result<(Complex64, Complex64)> {
    match (params.klass, endpoint) {
        (SolutionClass::RealAblowitzSegur, Endpoint::PlusInf)
        | (SolutionClass::ImagAblowitzSegur, Endpoint::PlusInf)
        | (SolutionClass::HastingsMcLeod, Endpoint::PlusInf) => {
            if x < 2.0 {
                return Err(Error::NonAsymptoticRegime { x, threshold: 2.0 });
            }
            if order > 0 {
                return Err(Error::OrderUnavailable { order });
            }
            Ok(airy_tail(m.s1, x))
        }
        (SolutionClass::HastingsMcLeod, Endpoint::MinusInf) => {
            if x > -2.0 {
                return Err(Error::NonAsymptoticRegime { x, threshold: 2.0 });
            }
            hm_minus_inf(m.s1, x, order)
        }
        (SolutionClass::GenericImaginary, Endpoint::PlusInf) => {
            if x < 10.0 {
                return Err(Error::NonAsymptoticRegime { x, threshold: 10.0 });
            }
            PlusInfGeneric::from_params(params)?.eval(x, order)
        }
        (
            SolutionClass::RealAblowitzSegur
            | SolutionClass::ImagAblowitzSegur
            | SolutionClass::GenericImaginary,
            Endpoint::MinusInf,
        ) => {
            if x > -2.0 {
                return Err(Error::NonAsymptoticRegime { x, threshold: 2.0 });
            }
            MinusInfOscillation::from_params(params)?.eval(x, order)
        }
        _ => Err(Error::ClassMismatch {
            expected: "global family".into(),
            found: params.klass.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::asym_params;

    #[test]
    fn hm_leading_value() {
        // s1 = -i, x = -100, order 0: u = i s1 sqrt(50) = sqrt(50)
        let m = MonodromyData::hastings_mcleod(1);
        let p = asym_params(&m).unwrap();
        let (u, _) = asym_u(&p, &m, -100.0, Endpoint::MinusInf, 0).unwrap();
        assert!((u.re - 50.0f64.sqrt()).abs() < 1e-14);
        assert!(u.im.abs() < 1e-15);
    }

    #[test]
    fn airy_data_at_plus_inf() {
        let m = MonodromyData::real_ablowitz_segur(0.5).unwrap();
        let p = asym_params(&m).unwrap();
        let (u, ux) = asym_u(&p, &m, 8.0, Endpoint::PlusInf, 0).unwrap();
        assert!((u.re - 0.5 * airy_ai(8.0)).abs() < 1e-18);
        assert!((ux.re - 0.5 * airy_ai_prime(8.0)).abs() < 1e-18);
    }

    #[test]
    fn generic_plus_inf_constant_term() {
        // the non-oscillatory 1/x correction is -3 i sigma rho^2/(4x)
        let m = MonodromyData::generic_imaginary(Complex64::new(0.0, 0.5)).unwrap();
        let p = asym_params(&m).unwrap();
        let x = 120.0;
        let (u2, _) = asym_u(&p, &m, x, Endpoint::PlusInf, 2).unwrap();
        let (u1, _) = asym_u(&p, &m, x, Endpoint::PlusInf, 1).unwrap();
        let rho2 = p.rho.unwrap().powi(2);
        let sigma = p.sigma_sign.unwrap() as f64;
        let expect = Complex64::new(0.0, sigma) * (-0.75 * rho2 / x);
        // difference of two O(sqrt(x)) values: roundoff floor ~ |u| eps
        assert!(((u2 - u1) - expect).norm() < 2e-15);
    }

    #[test]
    fn termwise_derivative_consistency() {
        // central finite difference of asym_u matches the returned ux
        let h = 1e-5;
        let cases: Vec<(MonodromyData, Endpoint, f64, usize)> = vec![
            (MonodromyData::real_ablowitz_segur(0.5).unwrap(), Endpoint::MinusInf, -35.0, 1),
            (MonodromyData::imag_ablowitz_segur(1.0), Endpoint::MinusInf, -42.0, 1),
            (MonodromyData::generic_imaginary(Complex64::new(0.0, 0.5)).unwrap(), Endpoint::PlusInf, 90.0, 3),
            (MonodromyData::hastings_mcleod(1), Endpoint::MinusInf, -25.0, 2),
        ];
        for (m, ep, x, order) in cases {
            let p = asym_params(&m).unwrap();
            let (_, ux) = asym_u(&p, &m, x, ep, order).unwrap();
            let (up, _) = asym_u(&p, &m, x + h, ep, order).unwrap();
            let (um, _) = asym_u(&p, &m, x - h, ep, order).unwrap();
            let fd = (up - um) / (2.0 * h);
            assert!(
                (fd - ux).norm() < 1e-6,
                "fd {fd} vs ux {ux} at x = {x} for {:?}",
                p.klass
            );
        }
    }

    #[test]
    fn hm_coeffs_match_exact_series() {
        use num_traits::ToPrimitive;
        let exact = crate::mkdv::series::hm_f_coeffs_public(3);
        for (a, b) in HM_F_COEFFS.iter().zip(exact.iter()) {
            assert!((a - b.to_f64().unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn regime_guards() {
        let m = MonodromyData::real_ablowitz_segur(0.5).unwrap();
        let p = asym_params(&m).unwrap();
        assert!(asym_u(&p, &m, 0.5, Endpoint::PlusInf, 0).is_err());
        assert!(asym_u(&p, &m, -40.0, Endpoint::MinusInf, 7).is_err());
    }
}
