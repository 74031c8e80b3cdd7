//! Normal-form arithmetic on monomials `S_mu z^k S_nu^*`.

mod element;
mod sampling;
mod word;

pub use element::Element;
pub use sampling::{leaf_cylinders, span_dimension, Leaf};
pub use word::{Monomial, Word};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{coeff_real, floor_div, rat_int, rat_pow, Coeff};

/// The pair `(m, n)`: `z S_n = S_1 z^m` with `n` isometries. Coprimality is
/// enforced on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub m: u32,
    pub n: u32,
}

impl AlgebraParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput(format!("m and n must be positive, got ({m}, {n})")));
        }
        if m.gcd(&n) != 1 {
            return Err(Error::InvalidInput(format!("gcd({m}, {n}) must be 1")));
        }
        Ok(AlgebraParams { m, n })
    }
}

/// Operations on elements for one fixed pair `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub params: AlgebraParams,
}

impl Algebra {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        Ok(Algebra { params: AlgebraParams::new(m, n)? })
    }

    pub fn m(&self) -> u32 {
        self.params.m
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.in_range(self.n()) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("word {w} has letters outside 1..={}", self.n())))
        }
    }

    pub fn check_monomial(&self, mon: &Monomial) -> Result<()> {
        self.check_word(&mon.mu)?;
        self.check_word(&mon.nu)
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        x.monomials().try_for_each(|m| self.check_monomial(m))
    }

    /// `z^k S_j = S_{j'} z^{k'}`.
    pub fn shift_through(&self, k: i64, j: u32) -> Result<(u32, i64)> {
        if !(1..=self.n()).contains(&j) {
            return Err(Error::InvalidInput(format!("letter {j} outside 1..={}", self.n())));
        }
        Ok(self.shift_letter(k, j))
    }

    fn shift_letter(&self, k: i64, j: u32) -> (u32, i64) {
        let n = self.n() as i64;
        let t = j as i64 - 1 + k;
        ((t.rem_euclid(n) + 1) as u32, self.m() as i64 * floor_div(t, n))
    }

    /// `z^k S_w = S_{w'} z^{k'}`, letter by letter.
    pub fn shift_word(&self, k: i64, w: &Word) -> (Word, i64) {
        let mut k = k;
        let mut out = Vec::with_capacity(w.len());
        for &j in w.letters() {
            let (j2, k2) = self.shift_letter(k, j);
            out.push(j2);
            k = k2;
        }
        (Word(out), k)
    }

    /// Product of two monomials: a single monomial or zero.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let nu = a.nu.letters();
        let alpha = b.mu.letters();
        let common = nu.len().min(alpha.len());
        if nu[..common] != alpha[..common] {
            return None;
        }
        if alpha.len() >= nu.len() {
            // S_nu^* S_alpha = S_rho with alpha = nu rho.
            let rho = Word(alpha[common..].to_vec());
            let (rho2, k2) = self.shift_word(a.k, &rho);
            Some(Monomial { mu: a.mu.concat(&rho2), k: k2 + b.k, nu: b.nu.clone() })
        } else {
            // S_nu^* S_alpha = S_rho^* with nu = alpha rho; move z^{l} left
            // through S_rho^* using z^{-l} S_rho = S_{rho''} z^{l'}.
            let rho = Word(nu[common..].to_vec());
            let (rho2, l2) = self.shift_word(-b.k, &rho);
            Some(Monomial { mu: a.mu.clone(), k: a.k - l2, nu: b.nu.concat(&rho2) })
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some(m) = self.mul_monomials(ma, mb) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[Element]) -> Element {
        factors.iter().fold(Element::one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, x: &Element, e: u32) -> Element {
        (0..e).fold(Element::one(), |acc, _| self.mul(&acc, x))
    }

    pub fn adjoint(&self, x: &Element) -> Element {
        Element::from_terms(x.terms().map(|(m, c)| (m.adjoint(), c.conj())))
    }

    /// Normalizes an arbitrary product of monomials.
    pub fn normalize(&self, factors: &[Monomial]) -> Option<Monomial> {
        factors
            .iter()
            .try_fold(Monomial::one(), |acc, f| self.mul_monomials(&acc, f))
    }

    pub fn gauge_degree(&self, mon: &Monomial) -> i64 {
        mon.gauge_degree()
    }

    /// `sum_i S_i x S_i^*`.
    pub fn canonical_endo(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for i in 1..=self.n() {
            for (m, c) in x.terms() {
                let t = Monomial { mu: m.mu.prepend(i), k: m.k, nu: m.nu.prepend(i) };
                out.add_term(t, c.clone());
            }
        }
        out
    }

    pub fn canonical_endo_iter(&self, x: &Element, times: usize) -> Element {
        (0..times).fold(x.clone(), |acc, _| self.canonical_endo(&acc))
    }

    /// Conditional expectation onto the gauge-fixed subalgebra.
    pub fn expectation(&self, x: &Element) -> Element {
        Element::from_terms(
            x.terms()
                .filter(|(m, _)| m.gauge_degree() == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// The KMS state at inverse temperature `log n`:
    /// `phi(S_mu z^k S_nu^*) = [mu = nu][k = 0] n^{-|mu|}`.
    pub fn kms_state(&self, x: &Element) -> Coeff {
        let n = rat_int(self.n() as i64);
        let mut acc = coeff_real(Zero::zero());
        for (m, c) in x.terms() {
            if m.k == 0 && m.mu == m.nu {
                acc += c * coeff_real(rat_pow(&n, -(m.mu.len() as i64)));
            }
        }
        acc
    }

    /// `sum_i S_i S_i^*`.
    pub fn cuntz_sum(&self) -> Element {
        Element::from_terms(
            (1..=self.n()).map(|i| (Monomial::new(vec![i], 0, vec![i]), coeff_real(One::one()))),
        )
    }

    /// Decides `x = 0` exactly via the faithful shift representation.
    pub fn is_zero(&self, x: &Element) -> Result<bool> {
        sampling::is_zero(self.params, x)
    }

    pub fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        self.is_zero(&(a - b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{coeff_int, rat};

    fn alg(m: u32, n: u32) -> Algebra {
        Algebra::new(m, n).unwrap()
    }

    fn el(m: Monomial) -> Element {
        Element::from(m)
    }

    /// Applies the single-step relations `z S_i = S_{i+1}`, `z S_n = S_1 z^m`
    /// (and their inverses) one power at a time.
    fn shift_by_steps(a: &Algebra, k: i64, j: u32) -> (u32, i64) {
        let n = a.n();
        let (mut j, mut out) = (j, 0i64);
        for _ in 0..k.abs() {
            if k > 0 {
                if j < n {
                    j += 1;
                } else {
                    j = 1;
                    out += a.m() as i64;
                }
            } else if j > 1 {
                j -= 1;
            } else {
                j = n;
                out -= a.m() as i64;
            }
        }
        (j, out)
    }

    #[test]
    fn params_need_coprime_positive() {
        assert!(AlgebraParams::new(2, 4).is_err());
        assert!(AlgebraParams::new(0, 3).is_err());
        assert!(AlgebraParams::new(3, 1).is_ok());
    }

    #[test]
    fn shift_through_examples() {
        assert_eq!(alg(1, 2).shift_through(1, 2).unwrap(), (1, 1));
        assert_eq!(alg(2, 3).shift_through(0, 2).unwrap(), (2, 0));
        assert_eq!(alg(2, 3).shift_through(3, 1).unwrap(), (1, 2));
        assert_eq!(alg(1, 2).shift_through(-1, 1).unwrap(), (2, -1));
        assert!(alg(1, 2).shift_through(1, 3).is_err());
    }

    #[test]
    fn shift_through_matches_stepwise_relations() {
        for (m, n) in [(1, 2), (2, 3), (3, 2), (1, 5), (5, 3)] {
            let a = alg(m, n);
            for k in -12..=12 {
                for j in 1..=n {
                    assert_eq!(a.shift_through(k, j).unwrap(), shift_by_steps(&a, k, j), "({m},{n}) k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let a = alg(1, 2);
        assert_eq!(a.mul_monomials(&Monomial::s_star(1), &Monomial::s(2)), None);
        let x = Monomial::new(vec![1, 2], 3, vec![2]);
        assert_eq!(a.mul_monomials(&Monomial::one(), &x), Some(x.clone()));
        assert_eq!(a.mul_monomials(&x, &Monomial::one()), Some(x));
        let lhs = Monomial::new(vec![1], 1, vec![2]);
        let rhs = Monomial::new(vec![2], 0, vec![1]);
        assert_eq!(a.mul_monomials(&lhs, &rhs), Some(Monomial::new(vec![1], 1, vec![1])));
        // z^2 S_1 = S_1 z, so S_1^* z^2 S_1 = z.
        let z2 = Monomial::z_power(2);
        let got = a.normalize(&[Monomial::s_star(1), z2, Monomial::s(1)]).unwrap();
        assert_eq!(got, Monomial::z_power(1));
    }

    #[test]
    fn adjoint_of_monomial() {
        let a = alg(1, 2);
        let x = el(Monomial::new(vec![1], 1, vec![2]));
        assert_eq!(a.adjoint(&x), el(Monomial::new(vec![2], -1, vec![1])));
    }

    #[test]
    fn gauge_degrees() {
        let a = alg(1, 2);
        assert_eq!(a.gauge_degree(&Monomial::s(1)), 1);
        assert_eq!(a.gauge_degree(&Monomial::z_power(7)), 0);
        let m = a
            .normalize(&[Monomial::s(1), Monomial::z_power(1), Monomial::s_star(2), Monomial::s_star(1)])
            .unwrap();
        assert_eq!(m.gauge_degree(), -1);
    }

    #[test]
    fn canonical_endo_of_unit_and_zero() {
        let a = alg(1, 3);
        let phi1 = a.canonical_endo(&Element::one());
        assert_eq!(phi1.len(), 3);
        assert!(a.equal(&phi1, &Element::one()).unwrap());
        assert!(a.canonical_endo(&Element::zero()).is_empty());
    }

    #[test]
    fn expectation_filters_degree_zero() {
        let a = alg(1, 2);
        let p = Monomial::new(vec![1], 1, vec![1]);
        let x = el(p.clone()) + el(Monomial::s(1));
        assert_eq!(a.expectation(&x), el(p));
        assert_eq!(a.expectation(&el(Monomial::z_power(4))), el(Monomial::z_power(4)));
        assert!(a.expectation(&el(Monomial::s(1))).is_empty());
    }

    #[test]
    fn kms_examples() {
        for n in 2..=5 {
            let a = alg(1, n);
            assert_eq!(a.kms_state(&Element::one()), coeff_int(1));
            let p = el(Monomial::new(vec![1], 0, vec![1]));
            assert_eq!(a.kms_state(&p), coeff_real(rat(1, n as i64)));
            let q = el(Monomial::new(vec![1], 1, vec![1]));
            assert_eq!(a.kms_state(&q), coeff_int(0));
        }
    }

    #[test]
    fn zero_test_examples() {
        let a = alg(1, 2);
        assert!(a.is_zero(&(a.cuntz_sum() - Element::one())).unwrap());
        assert!(a.is_zero(&Element::zero()).unwrap());
        assert!(!a.is_zero(&el(Monomial::s(1))).unwrap());
        assert!(matches!(alg(2, 1).is_zero(&Element::one()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn one_step_refinement_is_zero() {
        for (m, n) in [(1, 2), (2, 3), (3, 2)] {
            let a = alg(m, n);
            for k in -4..=4 {
                let x = Monomial::new(vec![1], k, vec![2]);
                let mut refined = Element::zero();
                for i in 1..=n {
                    let (j, k2) = a.shift_through(k, i).unwrap();
                    refined.add_term(
                        Monomial { mu: x.mu.push(j), k: k2, nu: x.nu.push(i) },
                        coeff_int(1),
                    );
                }
                assert!(a.equal(&el(x), &refined).unwrap());
            }
        }
    }

    #[test]
    fn distinct_small_monomials_are_independent_but_relations_hold() {
        let a = alg(2, 3);
        let x = el(Monomial::s(1)) - el(Monomial::s(2));
        assert!(!a.is_zero(&x).unwrap());
        // z S_3 = S_1 z^2.
        let lhs = el(a.normalize(&[Monomial::z_power(1), Monomial::s(3)]).unwrap());
        let rhs = el(Monomial::new(vec![1], 2, vec![]));
        assert!(a.equal(&lhs, &rhs).unwrap());
        // z^3 = sum_j S_j z^2 S_j^*.
        let rhs: Element = (1..=3)
            .map(|j| el(Monomial::new(vec![j], 2, vec![j])))
            .fold(Element::zero(), |acc, t| acc + t);
        assert!(a.equal(&el(Monomial::z_power(3)), &rhs).unwrap());
        assert!(!a.equal(&el(Monomial::z_power(2)), &rhs).unwrap());
    }
}
