//! 2x2 matrices over [`DiffPoly`] stored in the Pauli basis.
//!
//! M = e I + a s1 + b s2 + c s3.  Keeping the basis coefficients makes the
//! diagonal/off-diagonal constraints of the series recurrence structural.

use super::poly::DiffPoly;
use super::rational::GaussianRational;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PauliPoly {
    pub e: DiffPoly,
    pub s1: DiffPoly,
    pub s2: DiffPoly,
    pub s3: DiffPoly,
}

impl PauliPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        PauliPoly { e: DiffPoly::constant(GaussianRational::one()), ..Self::default() }
    }

    pub fn from_parts(e: DiffPoly, s1: DiffPoly, s2: DiffPoly, s3: DiffPoly) -> Self {
        PauliPoly { e, s1, s2, s3 }
    }

    pub fn diag(e: DiffPoly, s3: DiffPoly) -> Self {
        PauliPoly { e, s3, ..Self::default() }
    }

    pub fn offdiag(s1: DiffPoly, s2: DiffPoly) -> Self {
        PauliPoly { s1, s2, ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_zero() && self.s1.is_zero() && self.s2.is_zero() && self.s3.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.s1.is_zero() && self.s2.is_zero()
    }

    pub fn is_off_diagonal(&self) -> bool {
        self.e.is_zero() && self.s3.is_zero()
    }

    pub fn diagonal_part(&self) -> PauliPoly {
        PauliPoly::diag(self.e.clone(), self.s3.clone())
    }

    pub fn off_diagonal_part(&self) -> PauliPoly {
        PauliPoly::offdiag(self.s1.clone(), self.s2.clone())
    }

    pub fn add(&self, o: &PauliPoly) -> PauliPoly {
        PauliPoly {
            e: self.e.add(&o.e),
            s1: self.s1.add(&o.s1),
            s2: self.s2.add(&o.s2),
            s3: self.s3.add(&o.s3),
        }
    }

    pub fn sub(&self, o: &PauliPoly) -> PauliPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PauliPoly {
        PauliPoly { e: self.e.neg(), s1: self.s1.neg(), s2: self.s2.neg(), s3: self.s3.neg() }
    }

    pub fn scale(&self, c: &GaussianRational) -> PauliPoly {
        PauliPoly {
            e: self.e.scale(c),
            s1: self.s1.scale(c),
            s2: self.s2.scale(c),
            s3: self.s3.scale(c),
        }
    }

    pub fn scale_poly(&self, p: &DiffPoly) -> PauliPoly {
        PauliPoly {
            e: self.e.mul(p),
            s1: self.s1.mul(p),
            s2: self.s2.mul(p),
            s3: self.s3.mul(p),
        }
    }

    /// Matrix product through the Pauli algebra
    /// s_a s_b = delta_ab I + i eps_abc s_c.
    pub fn mul(&self, o: &PauliPoly) -> PauliPoly {
        let i = GaussianRational::i();
        let m_i = -GaussianRational::i();

        let e = self
            .e
            .mul(&o.e)
            .add(&self.s1.mul(&o.s1))
            .add(&self.s2.mul(&o.s2))
            .add(&self.s3.mul(&o.s3));
        // s1 coefficient: e*s1 + s1*e + i(s2*s3 - s3*s2)
        let s1 = self
            .e
            .mul(&o.s1)
            .add(&self.s1.mul(&o.e))
            .add(&self.s2.mul(&o.s3).scale(&i))
            .add(&self.s3.mul(&o.s2).scale(&m_i));
        let s2 = self
            .e
            .mul(&o.s2)
            .add(&self.s2.mul(&o.e))
            .add(&self.s3.mul(&o.s1).scale(&i))
            .add(&self.s1.mul(&o.s3).scale(&m_i));
        let s3 = self
            .e
            .mul(&o.s3)
            .add(&self.s3.mul(&o.e))
            .add(&self.s1.mul(&o.s2).scale(&i))
            .add(&self.s2.mul(&o.s1).scale(&m_i));
        PauliPoly { e, s1, s2, s3 }
    }

    /// Commutator [self, o].
    pub fn commutator(&self, o: &PauliPoly) -> PauliPoly {
        self.mul(o).sub(&o.mul(self))
    }

    /// s1 * self, through the component shuffle (e,a,b,c) -> (a, e, -ic, ib).
    pub fn sigma1_times(&self) -> PauliPoly {
        PauliPoly {
            e: self.s1.clone(),
            s1: self.e.clone(),
            s2: self.s3.times_i().neg(),
            s3: self.s2.times_i(),
        }
    }

    /// s2 * self: (e,a,b,c) -> (b, ic, e, -ia).
    pub fn sigma2_times(&self) -> PauliPoly {
        PauliPoly {
            e: self.s2.clone(),
            s1: self.s3.times_i(),
            s2: self.e.clone(),
            s3: self.s1.times_i().neg(),
        }
    }

    /// s3 * self: (e,a,b,c) -> (c, -ib, ia, e).
    pub fn sigma3_times(&self) -> PauliPoly {
        PauliPoly {
            e: self.s3.clone(),
            s1: self.s2.times_i().neg(),
            s2: self.s1.times_i(),
            s3: self.e.clone(),
        }
    }

    /// [s3, self] = (0, -2ib, 2ia, 0).
    pub fn sigma3_commutator(&self) -> PauliPoly {
        let two = GaussianRational::from_int(2);
        PauliPoly {
            e: DiffPoly::zero(),
            s1: self.s2.times_i().scale(&two).neg(),
            s2: self.s1.times_i().scale(&two),
            s3: DiffPoly::zero(),
        }
    }

    /// (1,1) entry = e + s3.
    pub fn entry11(&self) -> DiffPoly {
        self.e.add(&self.s3)
    }

    /// (1,2) entry = s1 - i s2.
    pub fn entry12(&self) -> DiffPoly {
        self.s1.add(&self.s2.scale(&-GaussianRational::i()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> PauliPoly {
        let one = DiffPoly::constant(GaussianRational::one());
        match n {
            1 => PauliPoly::offdiag(one, DiffPoly::zero()),
            2 => PauliPoly::offdiag(DiffPoly::zero(), one),
            3 => PauliPoly::diag(DiffPoly::zero(), one),
            _ => unreachable!(),
        }
    }

    #[test]
    fn pauli_algebra() {
        // s1 s2 = i s3, s2 s1 = -i s3, s1^2 = I
        let i = GaussianRational::i();
        assert_eq!(s(1).mul(&s(2)), s(3).scale(&i));
        assert_eq!(s(2).mul(&s(1)), s(3).scale(&-i.clone()));
        assert_eq!(s(1).mul(&s(1)), PauliPoly::identity());
        // [s3, s1] = 2i s2
        assert_eq!(
            s(3).commutator(&s(1)),
            s(2).scale(&(GaussianRational::i() * GaussianRational::from_int(2)))
        );
    }

    #[test]
    fn entries() {
        let m = PauliPoly::diag(
            DiffPoly::constant(GaussianRational::from_int(5)),
            DiffPoly::constant(GaussianRational::from_int(2)),
        );
        assert_eq!(m.entry11(), DiffPoly::constant(GaussianRational::from_int(7)));
        assert!(m.entry12().is_zero());
    }
}
