//! The conserved-density tower alpha_k, the matrix series (F_k, Lambda_k,
//! m_k) of the dressed formal solution, and the antiderivative polynomials
//! L_k, all exact.
//!
//! The matrix recurrence is derived from the lambda-equation of the Lax pair
//! with Psi = (I + sum F_k lambda^{-k}) exp(sum Lambda_k lambda^{-k})
//! exp(-theta sigma3): collecting the coefficient of lambda^{-k-1} gives
//!
//!   -k F_k - k Lambda_k - sum_{l+m=k} m F_l Lambda_m
//!     = -4i[s3, F_{k+3}] - i x [s3, F_{k+1}] - 2i u^2 s3 F_{k+1}
//!       - 4u s2 F_{k+2} - 2u_x s1 F_{k+1}.
//!
//! The diagonal part fixes Lambda_k, the off-diagonal part fixes F_{k+3}.
//! The seeds F_1 = (u/2) s1 and Lambda_1 = (i/2)(u^4 + x u^2 - u_x^2) s3 are
//! enough; the recurrence then reproduces the remaining printed seed values,
//! which is asserted rather than assumed.

use super::pauli::PauliPoly;
use super::poly::DiffPoly;
use super::rational::GaussianRational as Q;
use crate::error::{Error, Result};
use std::sync::Mutex;

/// One order of the dressed series.
#[derive(Clone, Debug)]
pub struct DiagSeriesTerm {
    /// Off-diagonal factor coefficient F_k.
    pub f: PauliPoly,
    /// Diagonal exponent coefficient Lambda_k.
    pub lambda: PauliPoly,
    /// Plain series coefficient m_k.
    pub m: PauliPoly,
    pub order: usize,
}

/// Memoizing engine for the exact towers.
///
/// Concurrency contract: a single internal mutex serializes first
/// computation; concurrent readers then clone finished results.  Orders are
/// capped by `max_order` (term counts grow quickly past that).
pub struct MkdvEngine {
    max_order: usize,
    state: Mutex<State>,
}

#[derive(Default)]
struct State {
    alphas: Vec<DiffPoly>,   // alpha_0, alpha_1, ...
    f: Vec<PauliPoly>,       // F_0 = I, F_1, F_2, ...
    lambda: Vec<PauliPoly>,  // Lambda_0 = 0, Lambda_1, ...
    m: Vec<PauliPoly>,       // m_0 = I, m_1, ...
    ell: Vec<DiffPoly>,      // L_0, L_1, ...
}

impl Default for MkdvEngine {
    fn default() -> Self {
        MkdvEngine::new(12)
    }
}

fn sigma1() -> PauliPoly {
    PauliPoly::offdiag(DiffPoly::constant(Q::one()), DiffPoly::zero())
}
fn sigma3() -> PauliPoly {
    PauliPoly::diag(DiffPoly::zero(), DiffPoly::constant(Q::one()))
}

/// W = u^4 + x u^2 - u_x^2 (twice the negated Painlevé II Hamiltonian).
fn w_poly() -> DiffPoly {
    DiffPoly::monomial((4, 0, 0), Q::one())
        .add(&DiffPoly::monomial((2, 0, 1), Q::one()))
        .add(&DiffPoly::monomial((0, 2, 0), Q::from_int(-1)))
}

impl MkdvEngine {
    pub fn new(max_order: usize) -> Self {
        MkdvEngine { max_order, state: Mutex::new(State::default()) }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k > self.max_order {
            return Err(Error::OrderOverflow { requested: k, max: self.max_order });
        }
        Ok(())
    }

    /// Conserved density alpha_k in reduction-normal form.
    pub fn alpha(&self, k: usize) -> Result<DiffPoly> {
        self.check_order(k)?;
        let mut st = self.state.lock().unwrap();
        extend_alphas(&mut st, k)?;
        Ok(st.alphas[k].clone())
    }

    /// Antiderivative polynomial L_k with d/dx L_k = alpha_k.
    pub fn l_k(&self, k: usize) -> Result<DiffPoly> {
        self.check_order(k)?;
        let mut st = self.state.lock().unwrap();
        extend_recurrence(&mut st, k + 1)?;
        extend_ell(&mut st, k)?;
        Ok(st.ell[k].clone())
    }

    /// Dressed series through order K: F_k, Lambda_k, m_k for k = 1..=K.
    pub fn psi_series(&self, big_k: usize) -> Result<Vec<DiagSeriesTerm>> {
        self.check_order(big_k)?;
        let mut st = self.state.lock().unwrap();
        extend_psi(&mut st, big_k)?;
        Ok((1..=big_k)
            .map(|k| DiagSeriesTerm {
                f: st.f[k].clone(),
                lambda: st.lambda[k].clone(),
                m: st.m[k].clone(),
                order: k,
            })
            .collect())
    }

    /// The Painlevé II Hamiltonian H = i (Lambda_1)_{11} = (u_x^2 - x u^2 - u^4)/2.
    pub fn hamiltonian(&self) -> DiffPoly {
        let lambda1 = {
            let mut st = self.state.lock().unwrap();
            extend_psi(&mut st, 1).expect("order 1 is always available");
            st.lambda[1].clone()
        };
        let h = lambda1.entry11().scale(&Q::i());
        let direct = w_poly().scale(&Q::ratio(-1, 2));
        assert_eq!(h, direct, "Hamiltonian identity i (Lambda_1)_11 = (u_x^2 - x u^2 - u^4)/2");
        h
    }
}

fn extend_alphas(st: &mut State, k: usize) -> Result<()> {
    if st.alphas.is_empty() {
        // alpha_0 = -(i/2) u^2
        st.alphas
            .push(DiffPoly::monomial((2, 0, 0), Q::ratio_i(-1, 2)));
    }
    while st.alphas.len() <= k {
        let n = st.alphas.len(); // computing alpha_n from alpha_{n-1}
        let prev = &st.alphas[n - 1];
        let div = prev.divide_by_u()?; // alpha_{n-1} must carry a factor of u
        let mut inner = DiffPoly::ux().mul(&div).sub(&prev.diff_x());
        if n >= 2 {
            for l in 0..=(n - 2) {
                let m = n - 2 - l;
                inner = inner.add(&st.alphas[l].mul(&st.alphas[m]));
            }
        }
        st.alphas.push(inner.scale(&Q::ratio_i(1, 2)));
    }
    Ok(())
}

fn extend_psi(st: &mut State, big_k: usize) -> Result<()> {
    extend_recurrence(st, big_k)?;
    // rebuild m_k from scratch whenever stale (only psi_series callers pay)
    if st.m.len() < big_k + 1 {
        st.m = build_m_series(&st.f, &st.lambda, big_k);
    }
    Ok(())
}

/// F / Lambda recurrence alone, no matrix m-series.
fn extend_recurrence(st: &mut State, big_k: usize) -> Result<()> {
    if st.f.is_empty() {
        st.f.push(PauliPoly::identity()); // F_0 = I
        st.f.push(sigma1().scale_poly(&DiffPoly::monomial((1, 0, 0), Q::ratio(1, 2)))); // F_1
        st.lambda.push(PauliPoly::zero()); // Lambda_0 = 0
        st.lambda
            .push(sigma3().scale_poly(&w_poly().scale(&Q::ratio_i(1, 2)))); // Lambda_1
    }
    // to deliver Lambda_k through big_k the recurrence needs F through big_k + 2
    while st.f.len() < big_k + 3 || st.lambda.len() < big_k + 1 {
        let k = st.f.len() as i64 - 3; // stage producing F_{k+3} (and Lambda_k for k >= 1)
        advance_stage(st, k)?;
    }
    Ok(())
}

/// One recurrence stage: from F_0..F_{k+2}, Lambda_1..Lambda_{k-1} produce
/// Lambda_k (k >= 1) and F_{k+3}.
fn advance_stage(st: &mut State, k: i64) -> Result<()> {
    let i = Q::i();
    let two = Q::from_int(2);

    let f_at = |j: i64| -> PauliPoly {
        if j < 0 {
            PauliPoly::zero()
        } else {
            st.f[j as usize].clone()
        }
    };

    // H_k = -k F_k - sum_{l+m=k} m F_l Lambda_m + i x [s3, F_{k+1}]
    //       + 2i u^2 s3 F_{k+1} + 4u s2 F_{k+2} + 2u_x s1 F_{k+1}
    let mut h = PauliPoly::zero();
    if k >= 1 {
        h = h.add(&f_at(k).scale(&Q::from_int(-k)));
        for l in 1..k {
            let m = k - l;
            if (m as usize) < st.lambda.len() {
                let term = st.f[l as usize]
                    .mul(&st.lambda[m as usize])
                    .scale(&Q::from_int(-m));
                h = h.add(&term);
            }
        }
    }
    let fk1 = f_at(k + 1);
    let fk2 = f_at(k + 2);
    h = h.add(&fk1.sigma3_commutator().scale(&i).scale_poly(&DiffPoly::x()));
    h = h.add(
        &fk1.sigma3_times()
            .scale(&(i.clone() * two.clone()))
            .scale_poly(&DiffPoly::monomial((2, 0, 0), Q::one())),
    );
    h = h.add(&fk2.sigma2_times().scale(&Q::from_int(4)).scale_poly(&DiffPoly::u()));
    h = h.add(&fk1.sigma1_times().scale(&two).scale_poly(&DiffPoly::ux()));

    // diagonal part: k Lambda_k = diag(H_k)
    let diag = h.diagonal_part();
    if k >= 1 {
        let lam = diag.scale(&Q::ratio(1, k));
        if (k as usize) < st.lambda.len() {
            // seeded order: the recurrence must reproduce it
            assert_eq!(lam, st.lambda[k as usize], "recurrence disagrees with the seeded Lambda_{k}");
        } else {
            debug_assert_eq!(st.lambda.len(), k as usize);
            st.lambda.push(lam);
        }
    } else {
        assert!(diag.is_zero(), "stage {k}: diagonal balance must vanish");
    }

    // off-diagonal part: -4i[s3, F_{k+3}] = offdiag(H_k)
    // with offdiag = P s1 + Q s2 and F = a s1 + b s2: a = Q/8, b = -P/8
    let off = h.off_diagonal_part();
    let a = off.s2.scale(&Q::ratio(1, 8));
    let b = off.s1.scale(&Q::ratio(-1, 8));
    let f_new = PauliPoly::offdiag(a, b);
    debug_assert_eq!(st.f.len() as i64, k + 3);
    st.f.push(f_new);
    Ok(())
}

/// m-series from (I + sum F/λ^k) exp(sum Lambda/λ^k), truncated at order K.
fn build_m_series(f: &[PauliPoly], lambda: &[PauliPoly], big_k: usize) -> Vec<PauliPoly> {
    let n = big_k + 1;
    // E = exp(Lambda-hat): all diagonal, so plain series exponential
    let mut e: Vec<PauliPoly> = vec![PauliPoly::zero(); n];
    e[0] = PauliPoly::identity();
    let mut term: Vec<PauliPoly> = e.clone();
    for j in 1..n {
        // term <- term * Lambda-hat / j
        let mut next = vec![PauliPoly::zero(); n];
        for a in 0..n {
            if term[a].is_zero() {
                continue;
            }
            for (b, lam) in lambda.iter().enumerate().take(n - a).skip(1) {
                next[a + b] = next[a + b].add(&term[a].mul(lam));
            }
        }
        let inv_j = Q::ratio(1, j as i64);
        for t in &mut next {
            *t = t.scale(&inv_j);
        }
        for a in 0..n {
            e[a] = e[a].add(&next[a]);
        }
        term = next;
    }
    // m = F-hat * E
    let mut m = vec![PauliPoly::zero(); n];
    for (a, fa) in f.iter().enumerate().take(n) {
        for b in 0..(n - a) {
            if !fa.is_zero() && !e[b].is_zero() {
                m[a + b] = m[a + b].add(&fa.mul(&e[b]));
            }
        }
    }
    m
}

/// L_k from exp(-sum L_k λ^{-k-1}) = 1 + sum (m_k)_{11} λ^{-k}:
/// power-series logarithm of the right-hand side.
///
/// Every F_k is off-diagonal, so (m_k)_{11} = (exp Lambda-hat)_{11}: the
/// (1,1) sequence comes from a scalar series exponential and the matrix
/// m-series is never needed here.
fn extend_ell(st: &mut State, k: usize) -> Result<()> {
    if st.ell.len() > k {
        return Ok(());
    }
    let n = k + 2; // need coefficients of λ^{-1} .. λ^{-(k+1)}
    // h = Lambda-hat_{11}; g = exp(h) - 1 as scalar series
    let mut h: Vec<DiffPoly> = vec![DiffPoly::zero(); n];
    for j in 1..n.min(st.lambda.len()) {
        h[j] = st.lambda[j].entry11();
    }
    let mut g: Vec<DiffPoly> = vec![DiffPoly::zero(); n];
    let mut term: Vec<DiffPoly> = g.clone();
    term[0] = DiffPoly::constant(Q::one());
    for j in 1..n {
        let mut next = vec![DiffPoly::zero(); n];
        for a in 0..n {
            if term[a].is_zero() {
                continue;
            }
            for b in 1..(n - a) {
                if !h[b].is_zero() {
                    next[a + b] = next[a + b].add(&term[a].mul(&h[b]));
                }
            }
        }
        let inv_j = Q::ratio(1, j as i64);
        for t in &mut next {
            *t = t.scale(&inv_j);
        }
        for a in 0..n {
            g[a] = g[a].add(&next[a]);
        }
        term = next;
    }
    // log(1+g) = sum_{j>=1} (-1)^{j+1} g^j / j
    let mut logs = vec![DiffPoly::zero(); n];
    let mut gpow = g.clone(); // g^1
    for j in 1..n {
        let sign = Q::ratio(if j % 2 == 1 { 1 } else { -1 }, j as i64);
        for a in 0..n {
            if !gpow[a].is_zero() {
                logs[a] = logs[a].add(&gpow[a].scale(&sign));
            }
        }
        // gpow <- gpow * g (lowest order grows by one each round)
        let mut next = vec![DiffPoly::zero(); n];
        for a in 0..n {
            if gpow[a].is_zero() {
                continue;
            }
            for b in 1..(n - a) {
                if !g[b].is_zero() {
                    next[a + b] = next[a + b].add(&gpow[a].mul(&g[b]));
                }
            }
        }
        gpow = next;
    }
    st.ell = (0..=k).map(|j| logs[j + 1].neg()).collect();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }
    fn qi(n: i64, d: i64) -> Q {
        Q::ratio_i(n, d)
    }
    fn sigma2() -> PauliPoly {
        PauliPoly::offdiag(DiffPoly::zero(), DiffPoly::constant(Q::one()))
    }

    #[test]
    fn printed_densities() {
        let e = MkdvEngine::default();
        // alpha_0 = -(i/2) u^2
        assert_eq!(e.alpha(0).unwrap(), DiffPoly::monomial((2, 0, 0), qi(-1, 2)));
        // alpha_1 = -(1/4) u u_x
        assert_eq!(e.alpha(1).unwrap(), DiffPoly::monomial((1, 1, 0), q(-1, 4)));
        // alpha_2 = (i/8)(u^4 + x u^2) after reduction of (i/8)(u u_xx - u^4)
        let a2 = DiffPoly::monomial((4, 0, 0), qi(1, 8)).add(&DiffPoly::monomial((2, 0, 1), qi(1, 8)));
        assert_eq!(e.alpha(2).unwrap(), a2);
    }

    #[test]
    fn printed_seed_matrices() {
        let e = MkdvEngine::default();
        let s = e.psi_series(4).unwrap();
        // F_1 = (u/2) s1
        assert_eq!(s[0].f, sigma1().scale_poly(&DiffPoly::monomial((1, 0, 0), q(1, 2))));
        // Lambda_1 = (i/2)(u^4 + x u^2 - u_x^2) s3
        assert_eq!(s[0].lambda, sigma3().scale_poly(&w_poly().scale(&qi(1, 2))));
        // F_2 = -(u_x/4) s2
        assert_eq!(s[1].f, sigma2().scale_poly(&DiffPoly::monomial((0, 1, 0), q(-1, 4))));
        // F_4 = (1/16)(u + x u_x + u^2 u_x) s2
        let f4 = DiffPoly::monomial((1, 0, 0), q(1, 16))
            .add(&DiffPoly::monomial((0, 1, 1), q(1, 16)))
            .add(&DiffPoly::monomial((2, 1, 0), q(1, 16)));
        assert_eq!(s[3].f, sigma2().scale_poly(&f4));
        // m_1 = (u/2) s1 + (i/2) W s3
        let m1 = s[0].m.clone();
        assert_eq!(m1.s1, DiffPoly::monomial((1, 0, 0), q(1, 2)));
        assert_eq!(m1.s3, w_poly().scale(&qi(1, 2)));
        assert!(m1.e.is_zero() && m1.s2.is_zero());
        // m_2 = (1/8)(u^2 - W^2) I - (1/4)(u_x - u W) s2
        let m2 = s[1].m.clone();
        let w = w_poly();
        let m2_e = DiffPoly::monomial((2, 0, 0), q(1, 8)).sub(&w.mul(&w).scale(&q(1, 8)));
        let m2_s2 = DiffPoly::ux().scale(&q(-1, 4)).add(&DiffPoly::u().mul(&w).scale(&q(1, 4)));
        assert_eq!(m2.e, m2_e);
        assert_eq!(m2.s2, m2_s2);
        assert!(m2.s1.is_zero() && m2.s3.is_zero());
    }

    #[test]
    fn structural_constraints() {
        let e = MkdvEngine::default();
        for t in e.psi_series(8).unwrap() {
            assert!(t.f.is_off_diagonal(), "F_{} not off-diagonal", t.order);
            assert!(t.lambda.is_diagonal(), "Lambda_{} not diagonal", t.order);
        }
    }

    #[test]
    fn dressed_series_identity() {
        // (I + sum F λ^-k) exp(sum Lambda λ^-k) = I + sum m λ^-k through order 5:
        // verified numerically at a random-ish point
        let e = MkdvEngine::default();
        let terms = e.psi_series(5).unwrap();
        let (u, ux, x) = (C::new(0.7, -0.3), C::new(-0.2, 0.5), 1.3);
        let lam = C::new(1.9, 0.4); // expansion parameter
        let eval2 = |p: &PauliPoly| -> [[C; 2]; 2] {
            let e11 = p.e.evaluate(u, ux, x) + p.s3.evaluate(u, ux, x);
            let e22 = p.e.evaluate(u, ux, x) - p.s3.evaluate(u, ux, x);
            let e12 = p.s1.evaluate(u, ux, x) - C::i() * p.s2.evaluate(u, ux, x);
            let e21 = p.s1.evaluate(u, ux, x) + C::i() * p.s2.evaluate(u, ux, x);
            [[e11, e12], [e21, e22]]
        };
        let matmul = |a: [[C; 2]; 2], b: [[C; 2]; 2]| {
            let mut c = [[C::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        };
        // F-hat and Lambda-hat evaluated with the truncation
        let zero = [[C::new(0.0, 0.0); 2]; 2];
        let idm = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];
        let mut fhat = idm;
        let mut lhat = zero;
        for t in &terms {
            let lp = lam.powi(-(t.order as i32));
            let fm = eval2(&t.f);
            let lm = eval2(&t.lambda);
            for i in 0..2 {
                for j in 0..2 {
                    fhat[i][j] += lp * fm[i][j];
                    lhat[i][j] += lp * lm[i][j];
                }
            }
        }
        // exp of the diagonal lhat
        let ehat = [
            [lhat[0][0].exp(), C::new(0.0, 0.0)],
            [C::new(0.0, 0.0), lhat[1][1].exp()],
        ];
        let lhs = matmul(fhat, ehat);
        let mut rhs = idm;
        for t in &terms {
            let lp = lam.powi(-(t.order as i32));
            let mm = eval2(&t.m);
            for i in 0..2 {
                for j in 0..2 {
                    rhs[i][j] += lp * mm[i][j];
                }
            }
        }
        // truncation error O(λ^{-6}) ~ 2e-2 at |λ| = 1.94; the identity holds well below that
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (lhs[i][j] - rhs[i][j]).norm() < 0.05,
                    "entry ({i},{j}): {} vs {}",
                    lhs[i][j],
                    rhs[i][j]
                );
            }
        }
    }

    #[test]
    fn printed_l_values() {
        let e = MkdvEngine::default();
        // L_0 = -(i/2)(u^4 + x u^2 - u_x^2)
        assert_eq!(e.l_k(0).unwrap(), w_poly().scale(&qi(-1, 2)));
        // L_1 = -(1/8) u^2
        assert_eq!(e.l_k(1).unwrap(), DiffPoly::monomial((2, 0, 0), q(-1, 8)));
        // L_2 cross-checked by d/dx L_2 = alpha_2 (golden identity)
        let l2 = e.l_k(2).unwrap();
        assert_eq!(l2.diff_x(), e.alpha(2).unwrap());
        // and against the closed form (i/24)(u u_x + x^2 u^2 + x u^4 - x u_x^2)
        let l2_direct = DiffPoly::monomial((1, 1, 0), qi(1, 24))
            .add(&DiffPoly::monomial((2, 0, 2), qi(1, 24)))
            .add(&DiffPoly::monomial((4, 0, 1), qi(1, 24)))
            .add(&DiffPoly::monomial((0, 2, 1), qi(-1, 24)));
        assert_eq!(l2, l2_direct);
    }

    #[test]
    fn antiderivative_identity_through_10() {
        let e = MkdvEngine::default();
        for k in 0..=10 {
            let lhs = e.l_k(k).unwrap().diff_x();
            let rhs = e.alpha(k).unwrap();
            assert_eq!(lhs, rhs, "d/dx L_{k} != alpha_{k}");
        }
    }

    #[test]
    fn riccati_coefficients_vanish() {
        // u d(alpha)/dx - 2i λ u alpha - u alpha^2 - u_x alpha + u^3 = 0 order by order:
        // coefficient of λ^{-j}: u alpha'_{j-1} - 2i u alpha_j - u sum_{l+m=j-2} - u_x alpha_{j-1} + u^3 δ_j0
        let e = MkdvEngine::default();
        let alphas: Vec<DiffPoly> = (0..=9).map(|k| e.alpha(k).unwrap()).collect();
        let u = DiffPoly::u();
        let ux = DiffPoly::ux();
        let two_i = Q::ratio_i(2, 1);
        for j in 0..=8usize {
            let mut c = u.mul(&alphas[j]).scale(&two_i).neg();
            if j >= 1 {
                c = c.add(&u.mul(&alphas[j - 1].diff_x()));
                c = c.sub(&ux.mul(&alphas[j - 1]));
            }
            if j >= 2 {
                for l in 0..=(j - 2) {
                    c = c.sub(&u.mul(&alphas[l].mul(&alphas[j - 2 - l])));
                }
            }
            if j == 0 {
                c = c.add(&DiffPoly::monomial((3, 0, 0), Q::one()));
            }
            assert!(c.is_zero(), "Riccati coefficient of λ^-{j} is {c}");
        }
    }

    #[test]
    fn l_extraction_consistent_with_matrix_series() {
        // the log-extraction must agree with (m_k)_11 = (E_k)_11 and with the
        // diagonal-shortcut L_k = -(Lambda_{k+1})_11
        let e = MkdvEngine::default();
        let terms = e.psi_series(6).unwrap();
        for k in 0..=5usize {
            let l = e.l_k(k).unwrap();
            // terms[k] holds order k+1
            assert_eq!(l, terms[k].lambda.entry11().neg(), "L_{k} != -(Lambda_{})_11", k + 1);
        }
        // (formal10) holds with the full matrix m_k: exp(-sum L λ^{-k-1}) * (1 + sum (m)_11 λ^{-k}) = 1
        // verified numerically at a sample point through order 6
        use num_complex::Complex64 as C;
        let (u, ux, x) = (C::new(0.3, 0.4), C::new(0.8, -0.1), 0.9);
        let lam = C::new(2.1, -0.7);
        let mut lhs_exp = C::new(0.0, 0.0);
        for (k, _) in terms.iter().enumerate().take(6) {
            lhs_exp -= e.l_k(k).unwrap().evaluate(u, ux, x) * lam.powi(-(k as i32 + 1));
        }
        let mut rhs = C::new(1.0, 0.0);
        for t in &terms {
            rhs += t.m.entry11().evaluate(u, ux, x) * lam.powi(-(t.order as i32));
        }
        // truncation O(λ^{-7})
        assert!((lhs_exp.exp() - rhs).norm() < 2e-3, "{} vs {}", lhs_exp.exp(), rhs);
    }

    #[test]
    fn hamiltonian_matches_footnote() {
        let e = MkdvEngine::default();
        let h = e.hamiltonian();
        let direct = DiffPoly::monomial((0, 2, 0), q(1, 2))
            .add(&DiffPoly::monomial((2, 0, 1), q(-1, 2)))
            .add(&DiffPoly::monomial((4, 0, 0), q(-1, 2)));
        assert_eq!(h, direct);
        // dH/dx symbolically equals the derivative computed directly
        assert_eq!(h.diff_x(), direct.diff_x());
    }

    #[test]
    fn odd_densities_have_polynomial_antiderivatives() {
        let e = MkdvEngine::default();
        for k in [1usize, 3, 5, 7, 9] {
            let l = e.l_k(k).unwrap();
            assert_eq!(l.diff_x(), e.alpha(k).unwrap());
        }
    }

    #[test]
    fn order_guard() {
        let e = MkdvEngine::new(6);
        assert!(matches!(e.alpha(7), Err(Error::OrderOverflow { .. })));
        assert!(e.alpha(6).is_ok());
    }

    #[test]
    fn evaluate_pre_and_post_reduction_agree() {
        // alpha_2 written with u_xx, evaluated with u_xx = 2u^3 + x u, vs the reduced form
        let e = MkdvEngine::default();
        let a2 = e.alpha(2).unwrap();
        let (u, x) = (C::new(0.4, 0.9), -1.7);
        let ux = C::new(-1.1, 0.2);
        let uxx = 2.0 * u * u * u + x * u;
        // (i/8)(u u_xx - u^4)
        let direct = C::i() / 8.0 * (u * uxx - u.powi(4));
        assert!((a2.evaluate(u, ux, x) - direct).norm() < 1e-14);
    }
}
