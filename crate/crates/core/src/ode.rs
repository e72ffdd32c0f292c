//! Adaptive Runge-Kutta-Fehlberg 7(8) integration.
//!
//! Explicit 13-stage pair; the eighth-order solution is propagated and the
//! embedded difference drives a PI step controller.  The driver lands on
//! every requested output abscissa exactly (steps are clamped), so no dense
//! interpolation is involved in sampling.

use crate::error::{Error, Result};

/// Right-hand side of a first-order system of dimension D.
pub trait Rhs<const D: usize> {
    fn eval(&self, x: f64, y: &[f64; D], dydx: &mut [f64; D]);
}

impl<F, const D: usize> Rhs<D> for F
where
    F: Fn(f64, &[f64; D], &mut [f64; D]),
{
    fn eval(&self, x: f64, y: &[f64; D], dydx: &mut [f64; D]) {
        self(x, y, dydx)
    }
}

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    /// Abort when a step shrinks below this (pole detector upstream).
    pub h_min: f64,
    /// Abort when the solution norm exceeds this.
    pub norm_guard: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            atol: 1e-14,
            h_max: 1.0,
            h_min: 1e-12,
            norm_guard: 1e8,
        }
    }
}

// Fehlberg 7(8) tableau (NASA TR R-287).
const C: [f64; 13] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

const A: [[f64; 12]; 13] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 0.25, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

/// Eighth-order weights (propagated solution).
const B8: [f64; 13] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

pub struct Integrator<'a, R, const D: usize> {
    rhs: &'a R,
    pub x: f64,
    pub y: [f64; D],
    h: f64,
    dir: f64,
    opts: OdeOptions,
    err_prev: f64,
}

impl<'a, R: Rhs<D>, const D: usize> Integrator<'a, R, D> {
    pub fn new(rhs: &'a R, x0: f64, y0: [f64; D], dir: f64, opts: OdeOptions) -> Self {
        let h = 1e-4_f64.min(opts.h_max);
        Integrator {
            rhs,
            x: x0,
            y: y0,
            h,
            dir: dir.signum(),
            opts,
            err_prev: 1.0,
        }
    }

    /// Advance exactly to `x_target` (same direction as `dir`).
    pub fn advance_to(&mut self, x_target: f64) -> Result<()> {
        while (x_target - self.x) * self.dir > 1e-14 * (1.0 + self.x.abs()) {
            let remaining = (x_target - self.x).abs();
            let h_try = self.h.min(remaining).min(self.opts.h_max);
            self.step(h_try, remaining)?;
        }
        self.x = x_target;
        Ok(())
    }

    fn step(&mut self, mut h: f64, remaining: f64) -> Result<()> {
        loop {
            let (y8, err) = self.attempt(h);
            if err <= 1.0 {
                self.x += self.dir * h;
                self.y = y8;
                // PI controller (Gustafsson): beta = 0.4/8, alpha = 0.7/8
                let fac = 0.9 * err.powf(-0.7 / 8.0) * self.err_prev.powf(0.4 / 8.0);
                let fac = fac.clamp(0.2, 5.0);
                self.err_prev = err.max(1e-4);
                self.h = (h * fac).min(self.opts.h_max);
                let norm = self.y.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > self.opts.norm_guard {
                    return Err(Error::StepSizeCollapse { x: self.x });
                }
                return Ok(());
            }
            h *= (0.9 * err.powf(-1.0 / 8.0)).clamp(0.1, 0.9);
            if h < self.opts.h_min && h < remaining {
                return Err(Error::StepSizeCollapse { x: self.x });
            }
        }
    }

    /// One trial step of size h; returns the 8th-order result and scaled error.
    fn attempt(&self, h: f64) -> ([f64; D], f64) {
        let hd = self.dir * h;
        let mut k = [[0.0f64; D]; 13];
        let mut work = [0.0f64; D];
        self.rhs.eval(self.x, &self.y, &mut work);
        k[0] = work;
        for s in 1..13 {
            let mut ys = self.y;
            for j in 0..s {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..D {
                        ys[i] += hd * a * k[j][i];
                    }
                }
            }
            self.rhs.eval(self.x + C[s] * hd, &ys, &mut work);
            k[s] = work;
        }
        let mut y8 = self.y;
        for s in 0..13 {
            if B8[s] != 0.0 {
                for i in 0..D {
                    y8[i] += hd * B8[s] * k[s][i];
                }
            }
        }
        // embedded difference: (41/840)(k0 + k10 - k11 - k12) h
        let mut err = 0.0f64;
        for i in 0..D {
            let e = hd * 41.0 / 840.0 * (k[0][i] + k[10][i] - k[11][i] - k[12][i]);
            let sc = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y8[i].abs());
            err = err.max((e / sc).abs());
        }
        (y8, err)
    }
}

/// Integrate from (x0, y0) to x1, returning the final state.
pub fn integrate_to<R: Rhs<D>, const D: usize>(
    rhs: &R,
    x0: f64,
    y0: [f64; D],
    x1: f64,
    opts: OdeOptions,
) -> Result<[f64; D]> {
    let mut it = Integrator::new(rhs, x0, y0, x1 - x0, opts);
    it.advance_to(x1)?;
    Ok(it.y)
}

/// Integrate hitting every abscissa in `samples` (monotone in the direction
/// of travel) and hand each state to `on_sample`.
pub fn integrate_sampling<R: Rhs<D>, const D: usize, F: FnMut(f64, &[f64; D])>(
    rhs: &R,
    x0: f64,
    y0: [f64; D],
    samples: &[f64],
    opts: OdeOptions,
    mut on_sample: F,
) -> Result<[f64; D]> {
    if samples.is_empty() {
        return Ok(y0);
    }
    let dir = samples[samples.len() - 1] - x0;
    let mut it = Integrator::new(rhs, x0, y0, dir, opts);
    for &x in samples {
        if (x - it.x) * it.dir < 0.0 {
            continue; // behind the current point (caller includes x0)
        }
        it.advance_to(x)?;
        on_sample(x, &it.y);
    }
    Ok(it.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{airy_ai, airy_ai_prime};

    #[test]
    fn exponential_to_machine_precision() {
        let rhs = |_x: f64, y: &[f64; 1], d: &mut [f64; 1]| d[0] = y[0];
        let y = integrate_to(&rhs, 0.0, [1.0], 1.0, OdeOptions::default()).unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-13);
    }

    #[test]
    fn eighth_order_convergence() {
        // fixed-step convergence measurement on y' = y cos x, y(6) = e^{sin 6}
        let rhs = |x: f64, y: &[f64; 1], d: &mut [f64; 1]| d[0] = y[0] * x.cos();
        let run = |h: f64| {
            let opts = OdeOptions {
                rtol: 1e30, // force acceptance: fixed-step mode
                atol: 1e30,
                h_max: h,
                ..Default::default()
            };
            let y = integrate_to(&rhs, 0.0, [1.0], 6.0, opts).unwrap();
            (y[0] - 6.0f64.sin().exp()).abs()
        };
        let e1 = run(0.5);
        let e2 = run(0.25);
        let order = (e1 / e2).log2();
        assert!(
            (6.5..10.0).contains(&order),
            "measured order {order}, errors {e1:.3e} {e2:.3e}"
        );
    }

    #[test]
    fn airy_equation_cross_check() {
        // u'' = x u from Airy initial data at 0; compare at x = -8 and 2
        let rhs = |x: f64, y: &[f64; 2], d: &mut [f64; 2]| {
            d[0] = y[1];
            d[1] = x * y[0];
        };
        let y0 = [airy_ai(0.0), airy_ai_prime(0.0)];
        let y = integrate_to(&rhs, 0.0, y0, -8.0, OdeOptions::default()).unwrap();
        assert!((y[0] - airy_ai(-8.0)).abs() < 1e-12);
        let y = integrate_to(&rhs, 0.0, y0, 2.0, OdeOptions::default()).unwrap();
        assert!((y[0] - airy_ai(2.0)).abs() < 1e-13);
    }

    #[test]
    fn sampling_hits_points() {
        let rhs = |_x: f64, y: &[f64; 1], d: &mut [f64; 1]| d[0] = -y[0];
        let samples = [0.5, 1.0, 1.5, 3.0];
        let mut got = Vec::new();
        integrate_sampling(&rhs, 0.0, [1.0], &samples, OdeOptions::default(), |x, y| {
            got.push((x, y[0]))
        })
        .unwrap();
        assert_eq!(got.len(), 4);
        for (x, v) in got {
            assert!((v - (-x).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn blowup_detected() {
        // y' = y^2 blows up at x = 1
        let rhs = |_x: f64, y: &[f64; 1], d: &mut [f64; 1]| d[0] = y[0] * y[0];
        let r = integrate_to(&rhs, 0.0, [1.0], 2.0, OdeOptions::default());
        match r {
            Err(Error::StepSizeCollapse { x }) => assert!((x - 1.0).abs() < 0.05),
            other => panic!("expected step collapse, got {other:?}"),
        }
    }
}
