//! Polynomials in (u, u_x, x) over Gaussian rationals, reduced modulo the
//! Painlevé II relation.
//!
//! The ring never stores u_xx or higher: every formal x-derivative applies
//! u_x' -> 2u^3 + xu on the spot, so equality of reduced polynomials is
//! literal map equality.

use super::rational::GaussianRational;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Monomial u^a u_x^b x^c.
pub type Monomial = (u32, u32, u32);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn u() -> Self {
        DiffPoly::monomial((1, 0, 0), GaussianRational::one())
    }

    pub fn ux() -> Self {
        DiffPoly::monomial((0, 1, 0), GaussianRational::one())
    }

    pub fn x() -> Self {
        DiffPoly::monomial((0, 0, 1), GaussianRational::one())
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let new = e.get().clone() + c;
                if new.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = new;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -(c.clone())))
                .collect(),
        }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term((m1.0 + m2.0, m1.1 + m2.1, m1.2 + m2.2), c1.mul_ref(c2));
            }
        }
        out
    }

    /// Multiply every coefficient by i.
    pub fn times_i(&self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.times_i())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Formal d/dx in the reduced ring:
    /// du/dx = u_x, du_x/dx = 2u^3 + xu, dx/dx = 1.
    pub fn diff_x(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (&(a, b, c), coeff) in &self.terms {
            if a > 0 {
                out.add_term(
                    (a - 1, b + 1, c),
                    coeff.clone() * GaussianRational::from_int(a as i64),
                );
            }
            if b > 0 {
                let k = GaussianRational::from_int(b as i64);
                // u_x^{b-1} * (2u^3 + xu)
                out.add_term((a + 3, b - 1, c), coeff.clone() * k.clone() * GaussianRational::from_int(2));
                out.add_term((a + 1, b - 1, c + 1), coeff.clone() * k);
            }
            if c > 0 {
                out.add_term(
                    (a, b, c - 1),
                    coeff.clone() * GaussianRational::from_int(c as i64),
                );
            }
        }
        out
    }

    /// Exact division by u; every monomial must carry a factor of u.
    pub fn divide_by_u(&self) -> crate::Result<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (&(a, b, c), coeff) in &self.terms {
            if a == 0 {
                return Err(crate::Error::ExactDivisionFailure);
            }
            out.add_term((a - 1, b, c), coeff.clone());
        }
        Ok(out)
    }

    /// Exact-to-float evaluation at (u, u_x, x).
    pub fn evaluate(&self, u: Complex64, ux: Complex64, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(a, b, c), coeff) in &self.terms {
            acc += coeff.to_complex() * u.powi(a as i32) * ux.powi(b as i32) * x.powi(c as i32);
        }
        acc
    }

    /// JSON record: one entry per monomial.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            monomial: [u32; 3],
            coeff: [String; 4],
        }
        let items: Vec<Term> = self
            .terms
            .iter()
            .map(|(&(a, b, c), coeff)| Term {
                monomial: [a, b, c],
                coeff: coeff.to_string_parts(),
            })
            .collect();
        serde_json::to_value(items).expect("serializable")
    }

    /// LaTeX rendering with u, u_x, x powers.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (&(a, b, c), coeff) in self.terms.iter().rev() {
            let cs = coeff.to_latex();
            let mut body = String::new();
            for (e, sym) in [(a, "u"), (b, "u_x"), (c, "x")] {
                match e {
                    0 => {}
                    1 => body.push_str(&format!("{sym}\\,")),
                    _ => body.push_str(&format!("{sym}^{{{e}}}\\,")),
                }
            }
            let body = body.trim_end_matches("\\,");
            let piece = if body.is_empty() {
                cs.clone()
            } else if cs == "1" {
                body.to_string()
            } else if cs == "-1" {
                format!("-{body}")
            } else {
                format!("{cs}\\,{body}")
            };
            if out.is_empty() {
                out = piece;
            } else if piece.starts_with('-') {
                out.push_str(&format!(" - {}", &piece[1..]));
            } else {
                out.push_str(&format!(" + {piece}"));
            }
        }
        out
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b, c), coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            if a > 0 {
                write!(f, " u^{a}")?;
            }
            if b > 0 {
                write!(f, " ux^{b}")?;
            }
            if c > 0 {
                write!(f, " x^{c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mkdv::rational::GaussianRational as Q;

    #[test]
    fn derivative_of_u_is_ux() {
        assert_eq!(DiffPoly::u().diff_x(), DiffPoly::ux());
    }

    #[test]
    fn reduction_rule_applied() {
        // d/dx u_x = 2u^3 + x u
        let d = DiffPoly::ux().diff_x();
        let expect = DiffPoly::monomial((3, 0, 0), Q::from_int(2))
            .add(&DiffPoly::monomial((1, 0, 1), Q::one()));
        assert_eq!(d, expect);
    }

    #[test]
    fn trace_antiderivative_identity() {
        // d/dx (u_x^2 - x u^2 - u^4) = -u^2 exactly
        let p = DiffPoly::monomial((0, 2, 0), Q::one())
            .add(&DiffPoly::monomial((2, 0, 1), Q::from_int(-1)))
            .add(&DiffPoly::monomial((4, 0, 0), Q::from_int(-1)));
        let d = p.diff_x();
        assert_eq!(d, DiffPoly::monomial((2, 0, 0), Q::from_int(-1)));
    }

    #[test]
    fn division_by_u() {
        let p = DiffPoly::monomial((2, 1, 0), Q::ratio(1, 2));
        assert_eq!(
            p.divide_by_u().unwrap(),
            DiffPoly::monomial((1, 1, 0), Q::ratio(1, 2))
        );
        assert!(DiffPoly::x().divide_by_u().is_err());
    }

    #[test]
    fn evaluation_linearity() {
        use num_complex::Complex64 as C;
        let p = DiffPoly::monomial((2, 0, 0), Q::ratio_i(-1, 2));
        let v = p.evaluate(C::new(2.0, 0.0), C::new(0.0, 0.0), 0.7);
        assert!((v - C::new(0.0, -2.0)).norm() < 1e-15);
    }
}
