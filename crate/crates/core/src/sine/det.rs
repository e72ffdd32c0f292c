//! Fredholm determinants of the sine kernel by Nyström discretization.
//!
//! P(x) = det(1 - K) on (-1,1) with K(z,z') = sin x(z-z') / (pi (z-z'));
//! D±(x) = det(1 - K±) on (0,1) with the ± image term
//! sin x(z+z') / (pi (z+z')).  The determinant is taken of the symmetrized
//! matrix I - W^{1/2} K W^{1/2} through an LU factorization; Gauss-Legendre
//! weights make the discrete spectrum converge spectrally for this entire
//! kernel, so order-doubling agreement of the log-determinants is the
//! convergence certificate.

use crate::error::{Error, Result};
use crate::quad::QuadratureRule;
use nalgebra::DMatrix;
use serde::Serialize;

/// Sine-kernel determinants at one abscissa.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetReport {
    pub x: f64,
    pub p: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub log_p: f64,
    pub log_d_plus: f64,
    pub log_d_minus: f64,
    /// Order at which the reported values were computed.
    pub order: usize,
    /// Doubling the order moved every log-determinant by < 1e-12.
    pub converged: bool,
}

fn sinc_kernel(x: f64, a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() < 1e-14 {
        x / std::f64::consts::PI
    } else {
        (x * d).sin() / (std::f64::consts::PI * d)
    }
}

/// log det(I - W^{1/2} K W^{1/2}) on the given rule.
fn nystrom_logdet(rule: &QuadratureRule, kernel: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let n = rule.nodes.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - sw[i] * kernel(rule.nodes[i], rule.nodes[j]) * sw[j]
    });
    let lu = m.lu();
    let mut log_det = 0.0;
    let mut sign = 1.0f64;
    for i in 0..n {
        let d = lu.u()[(i, i)];
        if d == 0.0 {
            return Err(Error::IllConditioned { x: 0.0, order: n });
        }
        sign *= d.signum();
        log_det += d.abs().ln();
    }
    // permutation parity
    if lu.p().determinant::<f64>() < 0.0 {
        sign = -sign;
    }
    if sign < 0.0 {
        return Err(Error::IllConditioned { x: 0.0, order: n });
    }
    Ok(log_det)
}

/// Fixed-order log-determinants (log P, log D+, log D-); the identity
/// drivers pick an order that is spectrally converged for their grid.
pub(crate) fn logdets_fixed(x: f64, order: usize) -> Result<(f64, f64, f64)> {
    three_logdets(x, order)
}

fn three_logdets(x: f64, order: usize) -> Result<(f64, f64, f64)> {
    let full = QuadratureRule::on_interval(order, -1.0, 1.0);
    let half = QuadratureRule::on_interval(order, 0.0, 1.0);
    let lp = nystrom_logdet(&full, |a, b| sinc_kernel(x, a, b))?;
    let ldp = nystrom_logdet(&half, |a, b| {
        sinc_kernel(x, a, b) + (x * (a + b)).sin() / (std::f64::consts::PI * (a + b))
    })?;
    let ldm = nystrom_logdet(&half, |a, b| {
        sinc_kernel(x, a, b) - (x * (a + b)).sin() / (std::f64::consts::PI * (a + b))
    })?;
    Ok((lp, ldp, ldm))
}

/// Determinants at x with order-doubling convergence control.
///
/// Elimination runs in double-double arithmetic with extended-precision
/// kernel entries: near x = 8 the matrix I - K is within ~1e-7 of singular
/// and plain f64 entries floor the log-determinants around 1e-11, which
/// would defeat the 1e-12 convergence contract.
pub fn det_sine(x: f64, order: usize) -> Result<DetReport> {
    if x <= 0.0 {
        return Err(Error::NonAsymptoticRegime { x, threshold: 0.0 });
    }
    let order = order.max(8);
    let mut n = order;
    let mut prev = three_logdets_dd(x, n)?;
    loop {
        let next = three_logdets_dd(x, 2 * n)?;
        let moved = (next.0 - prev.0)
            .abs()
            .max((next.1 - prev.1).abs())
            .max((next.2 - prev.2).abs());
        if moved < 1e-13 {
            return Ok(DetReport {
                x,
                p: next.0.exp(),
                d_plus: next.1.exp(),
                d_minus: next.2.exp(),
                log_p: next.0,
                log_d_plus: next.1,
                log_d_minus: next.2,
                order: 2 * n,
                converged: true,
            });
        }
        n *= 2;
        prev = next;
        if n > 256 {
            return Err(Error::DetNonConvergence { order: n });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_x_log_derivatives() {
        // d/dx log P -> -2/pi, d/dx log D+ -> -2/pi, d/dx log D- -> 0 as x -> 0+
        let h = 1e-4;
        let a = det_sine(2.0 * h, 16).unwrap();
        let b = det_sine(h, 16).unwrap();
        let dp = (a.log_p - b.log_p) / h;
        let dplus = (a.log_d_plus - b.log_d_plus) / h;
        let dminus = (a.log_d_minus - b.log_d_minus) / h;
        assert!((dp + 2.0 / std::f64::consts::PI).abs() < 1e-3, "dlogP {dp}");
        assert!((dplus + 2.0 / std::f64::consts::PI).abs() < 1e-3, "dlogD+ {dplus}");
        assert!(dminus.abs() < 1e-3, "dlogD- {dminus}");
    }

    #[test]
    fn factorization_identity() {
        for &x in &[0.5, 1.0, 2.0, 4.0, 8.0] {
            let r = det_sine(x, 32).unwrap();
            assert!(r.converged);
            let delta = (r.log_p - r.log_d_plus - r.log_d_minus).abs();
            assert!(delta < 1e-12, "x = {x}: |log P - log D+ - log D-| = {delta:.3e}");
        }
    }

    #[test]
    fn positivity_and_monotonicity() {
        let mut prev = (1.0f64, 1.0f64, 1.0f64);
        for i in 1..=20 {
            let x = 0.5 * i as f64;
            let r = det_sine(x, 32).unwrap();
            assert!(r.p > 0.0 && r.p <= 1.0);
            assert!(r.d_plus > 0.0 && r.d_plus <= 1.0);
            assert!(r.d_minus > 0.0 && r.d_minus <= 1.0);
            assert!(r.p < prev.0 && r.d_plus < prev.1 && r.d_minus < prev.2, "monotone at {x}");
            prev = (r.p, r.d_plus, r.d_minus);
        }
    }

    #[test]
    fn spectral_convergence_order_doubling() {
        // error against a converged double-double reference decays faster
        // than any power of the order
        let reference = three_logdets_dd(6.0, 64).unwrap().0;
        let e8 = (three_logdets_dd(6.0, 8).unwrap().0 - reference).abs();
        let e16 = (three_logdets_dd(6.0, 16).unwrap().0 - reference).abs();
        let e32 = (three_logdets_dd(6.0, 32).unwrap().0 - reference).abs();
        assert!(e16 < e8 * 1e-4 || e16 < 1e-13, "e8 = {e8:.3e}, e16 = {e16:.3e}");
        assert!(e32 < 1e-13, "e32 = {e32:.3e}");
        // the fast f64 path agrees with the dd reference to its own floor
        let f64_err = (three_logdets(6.0, 64).unwrap().0 - reference).abs();
        assert!(f64_err < 1e-10, "f64 path off by {f64_err:.3e}");
    }

    #[test]
    fn dyson_constant_at_8() {
        use crate::numerics::ZETA_PRIME_MINUS_ONE;
        let r = det_sine(8.0, 64).unwrap();
        let resid = r.log_p + 32.0 + 0.25 * 8.0f64.ln()
            - (2.0f64.ln() / 12.0 + 3.0 * ZETA_PRIME_MINUS_ONE);
        assert!(resid.abs() < 2e-3, "Dyson residual {resid:.3e}");
    }
}

/// Diagnostic entry point (not part of the public surface).
#[doc(hidden)]
pub fn debug_logdets(x: f64, order: usize) -> Result<(f64, f64, f64)> {
    three_logdets(x, order)
}

// ---- double-double path ----------------------------------------------
//
// At x = 8 the smallest eigenvalue of I - K is ~1e-7, so f64 kernel
// rounding alone floors the log-determinants near 1e-11.  The P = D+ D-
// identity is checked at 1e-12, which needs extended-precision entries and
// elimination; everything stays O(order^3).

use crate::numerics::dd::{gauss_legendre_dd, sin_dd2, sqrt_dd2, Dd, PI_DD};

/// Kernel entry with double-double nodes: the near-unit eigenvalue of K
/// turns any f64-level entry error into ~1e-9 relative error of 1 - lambda,
/// so nodes, weights and the kernel must all carry dd accuracy.
fn dd_kernel(x: f64, a: Dd, b: Dd, image: f64) -> Dd {
    // sin(x(a-b))/(pi(a-b)) + image * sin(x(a+b))/(pi(a+b))
    let d = a.sub(b);
    let direct = if d.hi.abs() < 1e-14 {
        Dd::from(x).div(PI_DD)
    } else {
        sin_dd2(d.mul_f64(x)).div(PI_DD.mul(d))
    };
    if image == 0.0 {
        return direct;
    }
    let sd = a.add(b);
    let img = sin_dd2(sd.mul_f64(x)).div(PI_DD.mul(sd));
    direct.add(img.mul_f64(image))
}

/// Affine image of the dd reference rule on [lo, hi].
fn dd_rule(n: usize, lo: f64, hi: f64) -> (Vec<Dd>, Vec<Dd>) {
    let (nodes, weights) = gauss_legendre_dd(n);
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    (
        nodes.iter().map(|t| t.mul_f64(h).add(Dd::from(c))).collect(),
        weights.iter().map(|w| w.mul_f64(h)).collect(),
    )
}

fn nystrom_logdet_dd(nodes: &[Dd], weights: &[Dd], x: f64, image: f64) -> Result<f64> {
    let n = nodes.len();
    let sw: Vec<Dd> = weights.iter().map(|&w| sqrt_dd2(w)).collect();
    let mut m: Vec<Dd> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = dd_kernel(x, nodes[i], nodes[j], image).mul(sw[i]).mul(sw[j]).neg();
            if i == j {
                v = v.add(Dd::ONE);
            }
            m.push(v);
        }
    }
    // LU with partial pivoting on the leading components
    let mut log_det = 0.0f64;
    let mut sign = 1.0f64;
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if m[r * n + k].hi.abs() > m[piv * n + k].hi.abs() {
                piv = r;
            }
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
            }
            sign = -sign;
        }
        let d = m[k * n + k];
        if d.hi == 0.0 {
            return Err(Error::IllConditioned { x, order: n });
        }
        sign *= d.hi.signum();
        log_det += d.abs().to_f64().ln();
        for r in (k + 1)..n {
            let factor = m[r * n + k].div(d);
            if factor.hi == 0.0 {
                continue;
            }
            for c in (k + 1)..n {
                let sub = factor.mul(m[k * n + c]);
                m[r * n + c] = m[r * n + c].sub(sub);
            }
        }
    }
    if sign < 0.0 {
        return Err(Error::IllConditioned { x, order: n });
    }
    Ok(log_det)
}

fn three_logdets_dd(x: f64, order: usize) -> Result<(f64, f64, f64)> {
    let (fnodes, fweights) = dd_rule(order, -1.0, 1.0);
    let (hnodes, hweights) = dd_rule(order, 0.0, 1.0);
    Ok((
        nystrom_logdet_dd(&fnodes, &fweights, x, 0.0)?,
        nystrom_logdet_dd(&hnodes, &hweights, x, 1.0)?,
        nystrom_logdet_dd(&hnodes, &hweights, x, -1.0)?,
    ))
}

