//! Airy function Ai and its derivative on the real line.
//!
//! Two regimes with a switchover at |x| = 9:
//!
//! * |x| <= 9: Maclaurin series summed in double-double arithmetic.  The two
//!   auxiliary sums reach ~3e7 at |x| = 9 while Ai itself is O(1e-4) on the
//!   positive side, so the series is hopeless in plain f64 past |x| ~ 4 but
//!   keeps ~20 spare digits in dd.
//! * |x| > 9: the standard exponential (x > 0) and trigonometric (x < 0)
//!   asymptotic series in zeta = (2/3)|x|^{3/2}, truncated at the smallest
//!   term.  At the switchover the first omitted term is below 3e-16 relative,
//!   and the two branches agree to ~1e-15 on the overlap (tested).
//!
//! Absolute error is below 1e-14 on [-10, 20] and degrades only through the
//! phase roundoff ~|zeta| * eps for very negative arguments.

use super::dd::Dd;

/// Ai(0) = 3^{-2/3} / Gamma(2/3), double-double since the positive-x series
/// cancels through ~13 digits before settling.
const AI_ZERO: Dd = Dd { hi: 0.355_028_053_887_817_2, lo: 2.052_336_324_362_12e-17 };
/// Ai'(0) = -3^{-1/3} / Gamma(1/3).
const AIP_ZERO: Dd = Dd { hi: -0.258_819_403_792_806_8, lo: 2.522_243_111_610_832e-17 };

const SWITCHOVER: f64 = 9.0;

/// Airy function of the first kind.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= SWITCHOVER {
        series_ai_aip(x).0
    } else if x > 0.0 {
        asymptotic_pos(x).0
    } else {
        asymptotic_neg(-x).0
    }
}

/// Derivative of the Airy function of the first kind.
pub fn airy_ai_prime(x: f64) -> f64 {
    if x.abs() <= SWITCHOVER {
        series_ai_aip(x).1
    } else if x > 0.0 {
        asymptotic_pos(x).1
    } else {
        asymptotic_neg(-x).1
    }
}

/// Maclaurin series for (Ai, Ai') in double-double arithmetic.
///
/// Ai(x)  = c1 f(x) - c2 g(x),   f = sum of x^{3k} terms, g of x^{3k+1};
/// Ai'(x) = c1 f'(x) - c2 g'(x) with the differentiated recurrences.
fn series_ai_aip(x: f64) -> (f64, f64) {
    let x3 = Dd::from(x).mul(Dd::from(x)).mul(Dd::from(x));

    // f and g sums for Ai
    let mut tf = Dd::ONE;
    let mut tg = Dd::from(x);
    let mut f = tf;
    let mut g = tg;
    // f' and g' sums for Ai' : f' = sum 3k x^{3k-1}/..., g' = sum (3k+1) x^{3k}/...
    let mut tfp = if x == 0.0 { Dd::ZERO } else { Dd::ZERO }; // k = 0 term of f' is 0
    let mut tgp = Dd::ONE; // k = 0 term of g' is 1
    let mut fp = tfp;
    let mut gp = tgp;

    let mut k = 0usize;
    loop {
        let kf = k as f64;
        // term ratios derived from the hypergeometric recurrences
        tf = tf.mul(x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg = tg.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f = f.add(tf);
        g = g.add(tg);

        // differentiated-series ratios collapse to exact integer products:
        // f'_{k+1}/f'_k = x^3/((3k)(3k+2)),  g'_{k+1}/g'_k = x^3/((3k+1)(3k+3))
        tfp = if k == 0 {
            // first nonzero f' term: 3 x^2 / (2*3) -> x^2/2
            Dd::from(x).mul(Dd::from(x)).div_f64(2.0)
        } else {
            tfp.mul(x3).div_f64(3.0 * kf * (3.0 * kf + 2.0))
        };
        tgp = tgp.mul(x3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        fp = fp.add(tfp);
        gp = gp.add(tgp);

        k += 1;
        if k > 8
            && tf.hi.abs() < 1e-26 * f.hi.abs().max(1.0)
            && tg.hi.abs() < 1e-26 * g.hi.abs().max(1.0)
        {
            break;
        }
        debug_assert!(k < 200);
    }

    let ai = AI_ZERO.mul(f).add(AIP_ZERO.mul(g));
    let aip = AI_ZERO.mul(fp).add(AIP_ZERO.mul(gp));
    (ai.to_f64(), aip.to_f64())
}

/// u_k, v_k coefficient pair of the asymptotic series.
/// u_0 = v_0 = 1, u_k = u_{k-1} (6k-5)(6k-1) / (72 k), v_k = -u_k (6k+1)/(6k-1).
struct UvIter {
    u: f64,
    k: usize,
}

impl UvIter {
    fn new() -> Self {
        UvIter { u: 1.0, k: 0 }
    }
    fn next_pair(&mut self) -> (f64, f64) {
        let (u, k) = (self.u, self.k);
        let v = if k == 0 {
            1.0
        } else {
            -u * (6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0)
        };
        self.k += 1;
        let kk = self.k as f64;
        self.u = u * (6.0 * kk - 5.0) * (6.0 * kk - 1.0) / (72.0 * kk);
        (u, v)
    }
}

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut it = UvIter::new();
    let (mut su, mut sv) = (0.0, 0.0);
    let mut pow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..40 {
        let (u, v) = it.next_pair();
        let tu = u * pow;
        if tu.abs() > prev {
            break; // divergent tail reached
        }
        prev = tu.abs();
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sgn * tu;
        sv += sgn * v * pow;
        pow /= zeta;
        if tu.abs() < 1e-18 * su.abs() {
            break;
        }
    }
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pre * su / x.powf(0.25), -pre * sv * x.powf(0.25))
}

fn asymptotic_neg(s: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * s.powf(1.5);
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let (sin_p, cos_p) = phase.sin_cos();

    // split even/odd coefficients: Ai(-s) = pi^{-1/2} s^{-1/4} [sin(p) Se - cos(p) So]
    //                             Ai'(-s) = -pi^{-1/2} s^{1/4} [cos(p) Te + sin(p) To]
    let mut it = UvIter::new();
    let (mut se, mut so, mut te, mut to) = (0.0, 0.0, 0.0, 0.0);
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        let (u, v) = it.next_pair();
        let t = u * pow;
        if t.abs() > last {
            break;
        }
        last = t.abs();
        let m = k / 2;
        let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            se += sgn * t;
            te += sgn * v * pow;
        } else {
            so += sgn * t;
            to += sgn * v * pow;
        }
        pow /= zeta;
        if t.abs() < 1e-18 {
            break;
        }
    }
    let pre = 1.0 / std::f64::consts::PI.sqrt();
    let ai = pre / s.powf(0.25) * (sin_p * se - cos_p * so);
    let aip = -pre * s.powf(0.25) * (cos_p * te + sin_p * to);
    (ai, aip)
}
