//! Exact Gaussian-rational scalars: a + b i with a, b arbitrary-size rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational { re: BigRational::from(BigInt::from(n)), im: BigRational::zero() }
    }

    /// n/d (real part only).
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        GaussianRational {
            re: BigRational::new(BigInt::from(n), BigInt::from(d)),
            im: BigRational::zero(),
        }
    }

    /// (n/d) i.
    pub fn ratio_i(n: i64, d: i64) -> Self {
        assert!(d != 0);
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::new(BigInt::from(n), BigInt::from(d)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Product without consuming either operand.
    pub fn mul_ref(&self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Multiply by the imaginary unit in place: (a+bi) i = -b + ai.
    pub fn times_i(&self) -> GaussianRational {
        GaussianRational { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn div(&self, other: &GaussianRational) -> GaussianRational {
        let denom = &other.re * &other.re + &other.im * &other.im;
        assert!(!denom.is_zero(), "division by zero GaussianRational");
        GaussianRational {
            re: (&self.re * &other.re + &self.im * &other.im) / &denom,
            im: (&self.im * &other.re - &self.re * &other.im) / &denom,
        }
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// JSON-friendly form: decimal strings [re_num, re_den, im_num, im_den].
    pub fn to_string_parts(&self) -> [String; 4] {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
        ]
    }

    /// LaTeX rendering of the scalar, e.g. `-\frac{i}{2}` or `\frac{3}{8}`.
    pub fn to_latex(&self) -> String {
        fn rat(r: &BigRational, unit: &str) -> String {
            let (n, d) = (r.numer(), r.denom());
            if d.is_one() {
                if n.is_one() && !unit.is_empty() {
                    unit.to_string()
                } else if (-n).is_one() && !unit.is_empty() {
                    format!("-{unit}")
                } else {
                    format!("{n}{unit}")
                }
            } else {
                let sign = if n.is_negative() { "-" } else { "" };
                let na = n.abs();
                if na.is_one() && !unit.is_empty() {
                    format!("{sign}\\frac{{{unit}}}{{{d}}}")
                } else {
                    format!("{sign}\\frac{{{na}{unit}}}{{{d}}}")
                }
            }
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => rat(&self.re, ""),
            (true, false) => rat(&self.im, "i"),
            (false, false) => {
                let im = rat(&self.im, "i");
                let joined = if im.starts_with('-') { im } else { format!("+{im}") };
                format!("\\left({}{}\\right)", rat(&self.re, ""), joined)
            }
        }
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    // exact for the moderate numerators/denominators produced by the towers
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => write!(f, "({}+{}i)", self.re, self.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = GaussianRational::ratio(1, 2) + GaussianRational::ratio_i(-1, 3);
        let b = a.clone().mul(a.clone()).div(&a);
        assert_eq!(a, b);
        let i = GaussianRational::i();
        assert_eq!(i.clone().mul(i), GaussianRational::from_int(-1));
    }

    #[test]
    fn latex_forms() {
        assert_eq!(GaussianRational::ratio_i(-1, 2).to_latex(), "-\\frac{i}{2}");
        assert_eq!(GaussianRational::from_int(3).to_latex(), "3");
        assert_eq!(GaussianRational::ratio(-1, 8).to_latex(), "-\\frac{1}{8}");
    }
}
