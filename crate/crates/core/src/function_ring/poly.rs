use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Dense polynomial with exact rational coefficients, lowest degree first.
/// Trailing zeros are trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `a t + b`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `t -> p(a t + c)`.
    pub fn compose_linear(&self, a: &BigRational, c: &BigRational) -> Poly {
        let inner = Poly::linear(a.clone(), c.clone());
        self.0.iter().rev().fold(Poly::zero(), |acc, coef| acc.mul(&inner).add(&Poly::constant(coef.clone())))
    }

    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![BigRational::zero()];
        for (i, c) in self.0.iter().enumerate() {
            out.push(c / BigRational::from_integer((i as i64 + 1).into()));
        }
        Poly::new(out)
    }

    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let f = self.antiderivative();
        f.eval(hi) - f.eval(lo)
    }

    /// Minimum over `[lo, hi]` for degree at most 2; `None` otherwise.
    pub fn min_on(&self, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
        let mut cands = vec![self.eval(lo), self.eval(hi)];
        match self.degree() {
            None | Some(0) | Some(1) => {}
            Some(2) => {
                let vertex = -&self.0[1] / (BigRational::from_integer(2.into()) * &self.0[2]);
                if &vertex > lo && &vertex < hi {
                    cands.push(self.eval(&vertex));
                }
            }
            _ => return None,
        }
        cands.into_iter().min()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c} t"),
                _ => format!("{c} t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial with complex double coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CPoly(pub Vec<Complex64>);

impl CPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        CPoly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let n = self.0.len().max(other.0.len());
        let z = Complex64::new(0.0, 0.0);
        CPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, c: Complex64) -> CPoly {
        CPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.is_zero() || other.is_zero() {
            return CPoly::default();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }

    pub fn conj(&self) -> CPoly {
        CPoly(self.0.iter().map(|c| c.conj()).collect())
    }

    /// `t -> p(a t + c)`.
    pub fn compose_linear(&self, a: f64, c: f64) -> CPoly {
        let inner = CPoly::new(vec![Complex64::new(c, 0.0), Complex64::new(a, 0.0)]);
        self.0
            .iter()
            .rev()
            .fold(CPoly::default(), |acc, coef| acc.mul(&inner).add(&CPoly::new(vec![*coef])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{rat, rat_int};

    #[test]
    fn compose_and_integrate() {
        // p(t) = 4(t - 1/2) = 4t - 2
        let p = Poly::linear(rat_int(4), rat_int(-2));
        assert_eq!(p.eval(&rat(5, 8)), rat(1, 2));
        let q = p.compose_linear(&rat_int(2), &rat_int(-1));
        assert_eq!(q.eval(&rat(3, 4)), p.eval(&rat(1, 2)));
        assert_eq!(p.integrate(&rat(1, 2), &rat(3, 4)), rat(1, 8));
        assert_eq!(p.mul(&p).eval(&rat(5, 8)), rat(1, 4));
    }

    #[test]
    fn quadratic_minimum() {
        // (t - 1/2)^2 on [0, 1]
        let p = Poly::new(vec![rat(1, 4), rat_int(-1), rat_int(1)]);
        assert_eq!(p.min_on(&rat_int(0), &rat_int(1)), Some(rat_int(0)));
        assert_eq!(p.min_on(&rat(3, 4), &rat_int(1)), Some(rat(1, 16)));
    }
}
