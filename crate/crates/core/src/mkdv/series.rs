//! Exact Puiseux series in descending powers of s with rational
//! coefficients, used to substitute endpoint expansions of Painlevé II
//! solutions into the antiderivative polynomials L_{2n}.
//!
//! Exponents live on the half-integer lattice (stored doubled).  Series are
//! truncated below a floor exponent; arithmetic keeps track of the floor so
//! discarded tails stay discarded.

use super::poly::DiffPoly;
use super::rational::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// sum c_e s^{e/2} over half-integer exponents e/2, truncated at `floor2`/2.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries {
    /// key: doubled exponent; value: rational coefficient
    coeffs: BTreeMap<i64, BigRational>,
    /// doubled truncation floor (terms below are dropped)
    floor2: i64,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PuiseuxSeries {
    pub fn zero(floor2: i64) -> Self {
        PuiseuxSeries { coeffs: BTreeMap::new(), floor2 }
    }

    pub fn monomial(exp2: i64, c: BigRational, floor2: i64) -> Self {
        let mut s = Self::zero(floor2);
        s.set(exp2, c);
        s
    }

    pub fn floor2(&self) -> i64 {
        self.floor2
    }

    fn set(&mut self, exp2: i64, c: BigRational) {
        if exp2 < self.floor2 || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(exp2).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&exp2);
        }
    }

    pub fn add(&self, o: &PuiseuxSeries) -> PuiseuxSeries {
        let mut out = self.clone();
        out.floor2 = self.floor2.max(o.floor2);
        out.coeffs.retain(|&k, _| k >= out.floor2);
        for (&k, c) in &o.coeffs {
            out.set(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
            floor2: self.floor2,
        }
    }

    pub fn scale(&self, c: &BigRational) -> PuiseuxSeries {
        if c.is_zero() {
            return Self::zero(self.floor2);
        }
        PuiseuxSeries {
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
            floor2: self.floor2,
        }
    }

    pub fn mul(&self, o: &PuiseuxSeries) -> PuiseuxSeries {
        // floors combine through the leading exponents of the other factor
        let lead_self = self.coeffs.keys().next_back().copied().unwrap_or(self.floor2);
        let lead_other = o.coeffs.keys().next_back().copied().unwrap_or(o.floor2);
        let floor2 = (self.floor2 + lead_other).max(o.floor2 + lead_self);
        let mut out = Self::zero(floor2);
        for (&ka, ca) in &self.coeffs {
            for (&kb, cb) in &o.coeffs {
                out.set(ka + kb, ca * cb);
            }
        }
        out
    }

    /// d/ds.
    pub fn diff_s(&self) -> PuiseuxSeries {
        let mut out = Self::zero(self.floor2 - 2);
        for (&k, c) in &self.coeffs {
            out.set(k - 2, c * rat(k, 2));
        }
        out
    }

    /// Reciprocal 1/self via a geometric series; the leading coefficient
    /// must be nonzero.
    pub fn recip(&self) -> PuiseuxSeries {
        let (&lead_k, lead_c) = self.coeffs.iter().next_back().expect("recip of zero series");
        // self = c s^{k/2} (1 + b), b strictly lower order
        let inv_lead = BigRational::one() / lead_c;
        let mut b = Self::zero(self.floor2 - lead_k);
        for (&k, c) in &self.coeffs {
            if k != lead_k {
                b.set(k - lead_k, c * &inv_lead);
            }
        }
        let depth_span = lead_k - self.floor2; // available descending range
        let b_lead = b.coeffs.keys().next_back().copied().unwrap_or(i64::MIN);
        let mut geo = Self::monomial(0, BigRational::one(), b.floor2);
        let mut pow = Self::monomial(0, BigRational::one(), b.floor2);
        if b_lead != i64::MIN {
            let steps = (depth_span / (-b_lead)).max(0) + 1;
            for j in 0..steps {
                pow = pow.mul(&b);
                if pow.coeffs.is_empty() {
                    break;
                }
                let sgn = if j % 2 == 0 { rat(-1, 1) } else { rat(1, 1) };
                geo = geo.add(&pow.scale(&sgn));
            }
        }
        // shift by s^{-k/2} / c
        let mut out = Self::zero(self.floor2 - 2 * lead_k);
        for (&k, c) in &geo.coeffs {
            out.set(k - lead_k, c * &inv_lead);
        }
        out
    }

    pub fn pow(&self, n: u32) -> PuiseuxSeries {
        let mut out = Self::monomial(0, BigRational::one(), self.floor2);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, exp2: i64) -> BigRational {
        self.coeffs.get(&exp2).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Same series with Gaussian-rational coefficients (substituted polynomials
/// carry factors of i).
#[derive(Clone, Debug, Default)]
pub struct GaussianSeries {
    pub coeffs: BTreeMap<i64, GaussianRational>,
}

impl GaussianSeries {
    fn add_term(&mut self, exp2: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exp2) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Keep only the non-decaying part (exponents >= 0).
    pub fn non_decaying(&self) -> GaussianSeries {
        GaussianSeries {
            coeffs: self.coeffs.iter().filter(|(&k, _)| k >= 0).map(|(&k, c)| (k, c.clone())).collect(),
        }
    }

    /// Evaluate at s, as sum c s^{e/2}.
    pub fn eval(&self, s: f64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (&k, c) in &self.coeffs {
            acc += c.to_complex() * s.powf(k as f64 / 2.0);
        }
        acc
    }

    /// d/ds, exactly on exponents.
    pub fn diff_s(&self) -> GaussianSeries {
        let mut out = GaussianSeries::default();
        for (&k, c) in &self.coeffs {
            let factor = GaussianRational {
                re: rat(k, 2),
                im: BigRational::zero(),
            };
            out.add_term(k - 2, c.clone() * factor);
        }
        out
    }
}

/// Substitute an even-degree endpoint expansion into a reduced polynomial.
///
/// The expansion enters through the exact rational series of u^2, u u_x and
/// u_x^2 in s (with x = -s); every monomial of `p` must have even total
/// degree in (u, u_x), which holds for all alpha_k and L_k.
pub fn substitute_even(
    p: &DiffPoly,
    u2: &PuiseuxSeries,
    uux: &PuiseuxSeries,
    ux2: &PuiseuxSeries,
) -> GaussianSeries {
    let mut out = GaussianSeries::default();
    for (&(a, b, c), coeff) in p.terms() {
        assert!((a + b) % 2 == 0, "odd total degree in (u, u_x): ({a},{b},{c})");
        let (qa, qb, cross) = if a % 2 == 0 {
            (a / 2, b / 2, false)
        } else {
            ((a - 1) / 2, (b - 1) / 2, true)
        };
        let mut ser = u2.pow(qa).mul(&ux2.pow(qb));
        if cross {
            ser = ser.mul(uux);
        }
        // x^c = (-1)^c s^c
        let sign = if c % 2 == 0 { 1 } else { -1 };
        for (k, v) in ser.terms() {
            let scalar = GaussianRational {
                re: v * rat(sign, 1),
                im: BigRational::zero(),
            };
            out.add_term(k + 2 * c as i64, coeff.clone() * scalar);
        }
    }
    out
}

/// Exact Hastings-McLeod expansion at x -> -infinity in s = -x:
/// u = sqrt(s/2) (1 - s^{-3}/8 - 73 s^{-6}/128 - 10657 s^{-9}/1024 + ...),
/// returned as the rational series (u^2, u u_x, u_x^2), truncated at
/// exponent floor2/2.
pub fn hastings_mcleod_even_series(floor2: i64) -> (PuiseuxSeries, PuiseuxSeries, PuiseuxSeries) {
    // f(s) coefficients a_k of s^{-3k}; derived by substituting
    // u = sqrt(s/2) f(s) into the equation (see hm_expansion_coeffs)
    let coeffs = hm_f_coeffs(8);
    let mut f = PuiseuxSeries::zero(floor2 - 2);
    for (k, a) in coeffs.iter().enumerate() {
        f.set(-6 * k as i64, a.clone());
    }
    // u^2 = (s/2) f^2
    let u2 = f.pow(2).mul(&PuiseuxSeries::monomial(2, rat(1, 2), floor2));
    // u u_x = (1/2) d(u^2)/dx = -(1/2) d(u^2)/ds
    let uux = u2.diff_s().scale(&rat(-1, 2));
    // u_x^2 = (u u_x)^2 / u^2
    let ux2 = uux.pow(2).mul(&u2.recip());
    (u2, uux, ux2)
}

/// Coefficients a_k of f = 1 + sum_{k>=1} a_k s^{-3k} for the branch
/// u = sqrt(s/2) f(s).  Substituting into u'' = 2u^3 + xu and clearing the
/// prefactor gives  -f/(4 s^3) + f'/s^2 + f''/s = f^3 - f ; the coefficient
/// of s^{-3(k+1)} reads
///
///   (36 k^2 - 1)/4 * a_k = 2 a_{k+1} + R_{k+1},
///
/// where R is the cubic convolution over indices <= k.  The first values
/// are -1/8, -73/128, -10657/1024.
fn hm_f_coeffs(n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = vec![BigRational::one()];
    for k in 0..n {
        let mut r = BigRational::zero();
        for i in 0..=k {
            for j in 0..=(k + 1 - i) {
                let l = k + 1 - i - j;
                if j <= k && l <= k {
                    r += &a[i] * &a[j] * &a[l];
                }
            }
        }
        let lhs = rat(36 * (k as i64) * (k as i64) - 1, 4) * &a[k];
        a.push((lhs - r) / rat(2, 1));
    }
    a
}

/// Exact view of the branch coefficients (cross-checked by the f64 images
/// used in the endpoint expansions).
pub fn hm_f_coeffs_public(n: usize) -> Vec<BigRational> {
    hm_f_coeffs(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mkdv::tower::MkdvEngine;

    #[test]
    fn hastings_mcleod_coefficients() {
        let a = hm_f_coeffs(3);
        assert_eq!(a[1], rat(-1, 8));
        assert_eq!(a[2], rat(-73, 128));
        assert_eq!(a[3], rat(-10657, 1024));
    }

    #[test]
    fn even_series_consistency() {
        // u^2 * u_x^2 == (u u_x)^2 as series
        let (u2, uux, ux2) = hastings_mcleod_even_series(-40);
        let lhs = u2.mul(&ux2);
        let rhs = uux.mul(&uux);
        for (k, c) in lhs.terms() {
            if k >= lhs.floor2() + 6 {
                assert_eq!(c, &rhs.coeff(k), "mismatch at exponent {}", k as f64 / 2.0);
            }
        }
    }

    #[test]
    fn l0_on_hm_expansion() {
        // L_0 = -(i/2)(u^4 + x u^2 - u_x^2) on the HM branch:
        // non-decaying part must be (i/8) x^2 = (i/8) s^2 (even power, x^2 = s^2)
        let e = MkdvEngine::default();
        let l0 = e.l_k(0).unwrap();
        let (u2, uux, ux2) = hastings_mcleod_even_series(-30);
        let ser = substitute_even(&l0, &u2, &uux, &ux2);
        let lead = ser.non_decaying();
        // expect single term (i/8) s^2 (doubled exponent 4)
        let mut terms: Vec<_> = lead.coeffs.iter().collect();
        terms.retain(|(_, c)| !c.is_zero());
        assert_eq!(terms.len(), 1);
        assert_eq!(*terms[0].0, 4);
        assert_eq!(terms[0].1, &GaussianRational::ratio_i(1, 8));
    }

    #[test]
    fn l0_decay_numerically() {
        // full series minus non-decaying part evaluates small at s = 25
        let e = MkdvEngine::default();
        let l0 = e.l_k(0).unwrap();
        let (u2, uux, ux2) = hastings_mcleod_even_series(-30);
        let ser = substitute_even(&l0, &u2, &uux, &ux2);
        let s = 25.0;
        let decaying = ser.eval(s) - ser.non_decaying().eval(s);
        assert!(decaying.norm() < 1e-2);
        assert!(decaying.norm() > 0.0);
    }
}
