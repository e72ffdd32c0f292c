//! Resolvent route to the sine-kernel quantities: the kernel is integrable,
//! K(z,z') = f^T(z) g(z') / (z - z') with f = (e^{izx}, e^{-izx}) and
//! g = (e^{-izx}, -e^{izx})/(2 pi i), so solving the two Fredholm systems
//! (1 - K) F_j = f_j on the quadrature nodes and assembling
//! m_1 = int F g^T dz reproduces xi = 2i (m_1)_{21} and the logarithmic
//! derivatives of D± without any determinant evaluation.

use crate::error::{Error, Result};
use crate::quad::QuadratureRule;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Solutions of the Fredholm systems at the quadrature nodes plus the first
/// moment matrix of the resolvent expansion.
#[derive(Clone, Debug)]
pub struct ResolventVectors {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub g1: Vec<Complex64>,
    pub g2: Vec<Complex64>,
    pub m1: [[Complex64; 2]; 2],
}

impl ResolventVectors {
    /// xi(x) = 2 i (m1)_{21}.
    pub fn xi(&self) -> Complex64 {
        2.0 * Complex64::i() * self.m1[1][0]
    }

    /// The same function from the other entry, -2 i (m1)_{12}.
    pub fn xi_alt(&self) -> Complex64 {
        -2.0 * Complex64::i() * self.m1[0][1]
    }

    /// d/dx log D± = -i ((m1)_{11} ∓ (m1)_{12}).
    pub fn dlog_d(&self, plus: bool) -> Complex64 {
        let s = if plus { -1.0 } else { 1.0 };
        -Complex64::i() * (self.m1[0][0] + s * self.m1[0][1])
    }

    /// Worst violation of F_1(-z) = F_2(z) over mirrored node pairs.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.nodes.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            let j = n - 1 - i; // Gauss-Legendre nodes are symmetric
            worst = worst.max((self.f1[j] - self.f2[i]).norm());
        }
        worst
    }
}

/// Solve the two Fredholm systems at `order` Gauss-Legendre nodes.
pub fn resolvent_solve(x: f64, order: usize) -> Result<ResolventVectors> {
    if x <= 0.0 {
        return Err(Error::NonAsymptoticRegime { x, threshold: 0.0 });
    }
    let rule = QuadratureRule::on_interval(order.max(8), -1.0, 1.0);
    let n = rule.nodes.len();
    let kernel = |a: f64, b: f64| {
        let d = a - b;
        if d.abs() < 1e-14 {
            x / std::f64::consts::PI
        } else {
            (x * d).sin() / (std::f64::consts::PI * d)
        }
    };
    // collocation matrix A_ij = delta_ij - K(z_i, z_j) w_j (the kernel is
    // symmetric, so the transposed systems for G share the factorization)
    let a = DMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - kernel(rule.nodes[i], rule.nodes[j]) * rule.weights[j]
    });
    let lu = a.lu();

    let solve_c = |rhs: Vec<Complex64>| -> Result<Vec<Complex64>> {
        let re = nalgebra::DVector::from_iterator(n, rhs.iter().map(|v| v.re));
        let im = nalgebra::DVector::from_iterator(n, rhs.iter().map(|v| v.im));
        let sre = lu.solve(&re).ok_or(Error::IllConditioned { x, order })?;
        let sim = lu.solve(&im).ok_or(Error::IllConditioned { x, order })?;
        Ok((0..n).map(|i| Complex64::new(sre[i], sim[i])).collect())
    };

    let f1_rhs: Vec<Complex64> = rule.nodes.iter().map(|&z| (Complex64::i() * z * x).exp()).collect();
    let f2_rhs: Vec<Complex64> = rule.nodes.iter().map(|&z| (-Complex64::i() * z * x).exp()).collect();
    let two_pi_i = 2.0 * std::f64::consts::PI * Complex64::i();
    let g1_rhs: Vec<Complex64> = f2_rhs.iter().map(|v| v / two_pi_i).collect();
    let g2_rhs: Vec<Complex64> = f1_rhs.iter().map(|v| -v / two_pi_i).collect();

    let f1 = solve_c(f1_rhs)?;
    let f2 = solve_c(f2_rhs)?;
    let g1 = solve_c(g1_rhs.clone())?;
    let g2 = solve_c(g2_rhs.clone())?;

    // m1 = int F(z) g^T(z) dz with the *driving* vector g
    let mut m1 = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..n {
        let w = rule.weights[i];
        let fv = [f1[i], f2[i]];
        let gv = [g1_rhs[i], g2_rhs[i]];
        for (r, f_r) in fv.iter().enumerate() {
            for (c, g_c) in gv.iter().enumerate() {
                m1[r][c] += w * f_r * g_c;
            }
        }
    }
    Ok(ResolventVectors {
        nodes: rule.nodes,
        weights: rule.weights,
        f1,
        f2,
        g1,
        g2,
        m1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sine::pv::pv_solve;

    #[test]
    fn xi_routes_agree() {
        let states = pv_solve(&[0.5, 1.0, 2.0]).unwrap();
        for s in &states {
            let r = resolvent_solve(s.x, 48).unwrap();
            assert!((r.xi() - r.xi_alt()).norm() < 1e-10, "entry symmetry at {}", s.x);
            assert!(r.xi().im.abs() < 1e-10, "xi real at {}", s.x);
            assert!(
                (r.xi().re - s.xi).abs() < 1e-7,
                "x = {}: resolvent {} vs ode {}",
                s.x,
                r.xi().re,
                s.xi
            );
        }
    }

    #[test]
    fn resolvent_symmetry() {
        let r = resolvent_solve(1.5, 64).unwrap();
        assert!(r.symmetry_defect() < 1e-11, "defect {}", r.symmetry_defect());
    }

    #[test]
    fn m11_derivative_is_xi_squared() {
        // 2i d/dx (m1)_11 = xi^2 via central differences
        let h = 1e-4;
        let x = 1.0;
        let rp = resolvent_solve(x + h, 48).unwrap();
        let rm = resolvent_solve(x - h, 48).unwrap();
        let d = 2.0 * Complex64::i() * (rp.m1[0][0] - rm.m1[0][0]) / (2.0 * h);
        let xi = resolvent_solve(x, 48).unwrap().xi();
        assert!((d - xi * xi).norm() < 1e-6, "{} vs {}", d, xi * xi);
    }
}
