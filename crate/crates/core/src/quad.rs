//! Gauss-Legendre quadrature rules and composite panel integration.

use serde::Serialize;

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
///
/// Exact for polynomials of degree 2n-1; weights sum to b - a.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Rule on the reference interval [-1, 1] by Newton iteration on P_n.
    pub fn gauss_legendre(n: usize) -> QuadratureRule {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-style initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        QuadratureRule { nodes, weights }
    }

    /// Affine image of the reference rule on [a, b].
    pub fn on_interval(n: usize, a: f64, b: f64) -> QuadratureRule {
        let base = Self::gauss_legendre(n);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        QuadratureRule {
            nodes: base.nodes.iter().map(|t| c + h * t).collect(),
            weights: base.weights.iter().map(|w| h * w).collect(),
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    if n == 1 {
        return (x, 1.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive-panel integration of a smooth scalar function on [a, b]:
/// fixed 16-point panels of width at most `max_panel`, each panel bisected
/// until two estimates agree to `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, max_panel: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let n_panels = ((b - a).abs() / max_panel).ceil().max(1.0) as usize;
    let h = (b - a) / n_panels as f64;
    let mut total = 0.0;
    for i in 0..n_panels {
        let lo = a + i as f64 * h;
        total += panel_rec(f, lo, lo + h, tol, 0);
    }
    total
}

fn panel_rec<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let coarse = QuadratureRule::on_interval(16, a, b).integrate(f);
    let m = 0.5 * (a + b);
    let fine = QuadratureRule::on_interval(16, a, m).integrate(f)
        + QuadratureRule::on_interval(16, m, b).integrate(f);
    if (coarse - fine).abs() < tol || depth > 20 {
        fine
    } else {
        panel_rec(f, a, m, 0.5 * tol, depth + 1) + panel_rec(f, m, b, 0.5 * tol, depth + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_length() {
        for &n in &[4usize, 16, 64, 256] {
            let r = QuadratureRule::on_interval(n, -1.0, 1.0);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n = {n}: sum {s}");
        }
    }

    #[test]
    fn polynomial_exactness() {
        // degree 2n-1 integrated exactly
        let r = QuadratureRule::on_interval(8, 0.0, 1.0);
        let v = r.integrate(|x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_integral() {
        // int_0^pi sin = 2
        let v = integrate_adaptive(|x| x.sin(), 0.0, std::f64::consts::PI, 0.5, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_nodes() {
        let r = QuadratureRule::gauss_legendre(33);
        for i in 0..33 {
            assert!((r.nodes[i] + r.nodes[32 - i]).abs() < 1e-15);
        }
    }
}
