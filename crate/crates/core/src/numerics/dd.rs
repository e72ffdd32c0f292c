//! Minimal double-double arithmetic (~31 significant digits).
//!
//! Only what the Airy Maclaurin series needs: the partial sums of the two
//! auxiliary series grow to ~1e7 before cancelling down to O(1e-4), which
//! costs up to 11 decimal digits in plain f64.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    /// Division by an ordinary double, accurate to ~full dd precision.
    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.sub(Dd::from(q1).mul_f64(b));
        let q2 = r.to_f64() / b;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Full double-double division.
    #[inline]
    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r2 = r.sub(b.mul_f64(q2));
        let q3 = r2.hi / b.hi;
        Dd::from(q1).add(Dd::from(q2)).add(Dd::from(q3))
    }

    /// abs on the leading component.
    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// pi/2 split into two doubles.
const PI_2: Dd = Dd { hi: 1.570_796_326_794_896_6, lo: 6.123_233_995_736_766e-17 };
/// pi split into two doubles.
pub const PI_DD: Dd = Dd { hi: 3.141_592_653_589_793, lo: 1.224_646_799_147_353_2e-16 };

/// sin of a double-double argument, by range reduction modulo pi/2 and a
/// Taylor series on |r| <= pi/4.  Adequate for the moderate arguments of
/// the kernel evaluations (|y| up to a few hundred).
pub fn sin_dd2(y: Dd) -> Dd {
    let k = (y.hi / PI_2.hi).round();
    let r = y.sub(PI_2.mul_f64(k));
    let quadrant = ((k as i64) % 4 + 4) % 4;
    match quadrant {
        0 => sin_taylor(r),
        1 => cos_taylor(r),
        2 => sin_taylor(r).neg(),
        _ => cos_taylor(r).neg(),
    }
}

/// sin of an ordinary double to double-double accuracy.
pub fn sin_dd(y: f64) -> Dd {
    sin_dd2(Dd::from(y))
}

fn sin_taylor(r: Dd) -> Dd {
    let r2 = r.mul(r);
    let mut term = r;
    let mut sum = r;
    let mut k = 1.0f64;
    for _ in 0..15 {
        term = term.mul(r2).div_f64(-((k + 1.0) * (k + 2.0)));
        sum = sum.add(term);
        k += 2.0;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    sum
}

fn cos_taylor(r: Dd) -> Dd {
    let r2 = r.mul(r);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0.0f64;
    for _ in 0..15 {
        term = term.mul(r2).div_f64(-((k + 1.0) * (k + 2.0)));
        sum = sum.add(term);
        k += 2.0;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    sum
}

/// sqrt of an ordinary double refined to double-double.
pub fn sqrt_dd(w: f64) -> Dd {
    sqrt_dd2(Dd::from(w))
}

/// sqrt of a double-double value.
pub fn sqrt_dd2(w: Dd) -> Dd {
    if w.hi == 0.0 {
        return Dd::ZERO;
    }
    let s = w.hi.sqrt();
    // one Newton step in dd: (s + w/s)/2
    Dd::from(s).add(w.div_f64(s)).div_f64(2.0)
}

/// Gauss-Legendre nodes and weights of order n on [-1, 1] refined to
/// double-double accuracy (Newton on the Legendre recurrence, seeded by the
/// f64 rule).
pub fn gauss_legendre_dd(n: usize) -> (Vec<Dd>, Vec<Dd>) {
    let legendre = |x: Dd| -> (Dd, Dd) {
        let mut p0 = Dd::ONE;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = x
                .mul(p1)
                .mul_f64(2.0 * kf - 1.0)
                .sub(p0.mul_f64(kf - 1.0))
                .div_f64(kf);
            p0 = p1;
            p1 = p2;
        }
        // derivative from the pair
        let denom = x.mul(x).sub(Dd::ONE);
        let d = x.mul(p1).sub(p0).mul_f64(n as f64).div(denom);
        (p1, d)
    };
    let seed = crate::quad::QuadratureRule::gauss_legendre(n);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &x0 in &seed.nodes {
        let mut x = Dd::from(x0);
        for _ in 0..3 {
            let (p, d) = legendre(x);
            x = x.sub(p.div(d));
        }
        let (_, d) = legendre(x);
        let w = Dd::from(2.0).div(Dd::ONE.sub(x.mul(x)).mul(d).mul(d));
        nodes.push(x);
        weights.push(w);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_roundtrip() {
        let a = Dd::from(1.0).div_f64(3.0);
        let b = a.mul_f64(3.0);
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
        assert!((b.sub(Dd::ONE).to_f64()).abs() < 1e-30);
    }

    #[test]
    fn catastrophic_cancellation_survives() {
        // (1e8 + 1e-8) - 1e8 in dd keeps the small part exactly
        let big = Dd::from(1e8);
        let s = big.add(Dd::from(1e-8));
        let d = s.sub(big);
        assert_eq!(d.to_f64(), 1e-8);
    }

    #[test]
    fn full_division() {
        let a = Dd::from(1.0).div(Dd::from(7.0));
        let b = a.mul_f64(7.0).sub(Dd::ONE);
        assert!(b.to_f64().abs() < 1e-30);
    }

    #[test]
    fn sine_matches_f64_and_identities() {
        for &y in &[0.3, 1.7, -4.4, 12.9, 15.99, -9.42] {
            let s = sin_dd(y);
            assert!((s.to_f64() - y.sin()).abs() < 1e-15, "sin({y})");
            // sin^2 + cos^2 = 1 at dd accuracy
            let c = sin_dd(y + PI_2.hi + PI_2.lo);
            let one = s.mul(s).add(c.mul(c));
            assert!((one.to_f64() - 1.0).abs() < 1e-28, "pythagoras at {y}");
        }
    }

    #[test]
    fn sqrt_refinement() {
        let r = sqrt_dd(2.0);
        let back = r.mul(r).sub(Dd::from(2.0));
        assert!(back.to_f64().abs() < 1e-30);
    }
}
