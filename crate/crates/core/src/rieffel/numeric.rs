//! Floating-point arithmetic in `O_(1,2)(T)` for elements whose middle
//! factors are arbitrary functions of `z`, such as the square roots `a_1`
//! and `b_1`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::ProjectionData;
use crate::algebra::{Element, Word};
use crate::error::Result;
use crate::function_ring::PiecewiseFunction;

/// A 1-periodic complex function, evaluated after reducing `t` into `[0, 1)`.
#[derive(Clone)]
pub struct NumericFn(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>);

impl fmt::Debug for NumericFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NumericFn")
    }
}

impl NumericFn {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        NumericFn(Arc::new(f))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(move |_| c)
    }

    /// `e^{2 pi i k t}`.
    pub fn z_power(k: i64) -> Self {
        Self::new(move |t| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * t))
    }

    pub fn from_piecewise(f: &PiecewiseFunction) -> Self {
        let f = f.clone();
        Self::new(move |t| f.eval(t))
    }

    /// Pointwise square root of the real part, clamped at zero.
    pub fn sqrt_of(f: &PiecewiseFunction) -> Self {
        let f = f.clone();
        Self::new(move |t| Complex64::new(f.eval(t).re.max(0.0).sqrt(), 0.0))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.0)(t - t.floor())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(move |t| f.eval(t) * g.eval(t))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let f = self.clone();
        Self::new(move |t| f.eval(t) * c)
    }

    pub fn conj(&self) -> Self {
        let f = self.clone();
        Self::new(move |t| f.eval(t).conj())
    }

    /// `L_ij h (s) = e^{pi i (j - i) s} (h(s/2) + (-1)^{j-i} h((s+1)/2)) / 2`,
    /// so that `S_i^* h S_j = L_ij(h)`.
    pub fn transfer_ij(&self, i: u32, j: u32) -> Self {
        let h = self.clone();
        let diff = j as f64 - i as f64;
        let sign = if (j + i).is_multiple_of(2) { 1.0 } else { -1.0 };
        Self::new(move |s| {
            let inner = h.eval(s / 2.0) + h.eval((s + 1.0) / 2.0) * sign;
            Complex64::from_polar(0.5, PI * diff * s) * inner
        })
    }
}

/// `S_mu f(z) S_nu^*`.
#[derive(Clone, Debug)]
pub struct FuncTerm {
    pub mu: Word,
    pub f: NumericFn,
    pub nu: Word,
}

/// A finite sum of [`FuncTerm`]s in `O_(1,2)(T)`.
#[derive(Clone, Debug, Default)]
pub struct FuncElement {
    terms: Vec<FuncTerm>,
}

impl FuncElement {
    pub fn zero() -> Self {
        FuncElement::default()
    }

    pub fn term(mu: impl Into<Word>, f: NumericFn, nu: impl Into<Word>) -> Self {
        FuncElement { terms: vec![FuncTerm { mu: mu.into(), f, nu: nu.into() }] }
    }

    pub fn function(f: NumericFn) -> Self {
        Self::term(Word::empty(), f, Word::empty())
    }

    pub fn from_element(x: &Element) -> Self {
        let terms = x
            .terms()
            .map(|(m, c)| {
                let c = Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
                FuncTerm { mu: m.mu.clone(), f: NumericFn::z_power(m.k).scale(c), nu: m.nu.clone() }
            })
            .collect();
        FuncElement { terms }
    }

    pub fn terms(&self) -> &[FuncTerm] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FuncElement { terms }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|t| FuncTerm { f: t.f.scale(c), ..t.clone() }).collect();
        FuncElement { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn adjoint(&self) -> Self {
        let terms =
            self.terms.iter().map(|t| FuncTerm { mu: t.nu.clone(), f: t.f.conj(), nu: t.mu.clone() }).collect();
        FuncElement { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                mul_terms(a, b, &mut terms);
            }
        }
        FuncElement { terms }
    }

    /// Rewrites every term of gauge degree `d` with `|nu| = len` where `len`
    /// is shared within the degree. In that form the element is zero iff
    /// every coefficient function is, and the largest sampled modulus over
    /// `t = j / grid` is returned.
    pub fn canonical_residual(&self, grid: usize) -> f64 {
        let mut by_degree: BTreeMap<i64, Vec<&FuncTerm>> = BTreeMap::new();
        for t in &self.terms {
            by_degree.entry(t.mu.len() as i64 - t.nu.len() as i64).or_default().push(t);
        }
        let mut worst: f64 = 0.0;
        for (deg, terms) in by_degree {
            let len = terms.iter().map(|t| t.nu.len()).max().unwrap_or(0).max((-deg).max(0) as usize);
            let mut coeffs: BTreeMap<(Word, Word), Vec<Complex64>> = BTreeMap::new();
            for t in terms {
                for r in refine(t, len - t.nu.len()) {
                    let acc = coeffs.entry((r.mu, r.nu)).or_insert_with(|| vec![Complex64::new(0.0, 0.0); grid]);
                    for (j, v) in acc.iter_mut().enumerate() {
                        *v += r.f.eval(j as f64 / grid as f64);
                    }
                }
            }
            for v in coeffs.values() {
                worst = v.iter().map(|c| c.norm()).fold(worst, f64::max);
            }
        }
        worst
    }
}

/// `S_mu f S_nu^* = sum_{i,j} S_{mu i} L_ij(f) S_{nu j}^*`, applied `extra` times.
fn refine(t: &FuncTerm, extra: usize) -> Vec<FuncTerm> {
    let mut cur = vec![t.clone()];
    for _ in 0..extra {
        let mut next = Vec::with_capacity(cur.len() * 4);
        for t in &cur {
            for i in 1..=2 {
                for j in 1..=2 {
                    next.push(FuncTerm { mu: t.mu.push(i), f: t.f.transfer_ij(i, j), nu: t.nu.push(j) });
                }
            }
        }
        cur = next;
    }
    cur
}

fn mul_terms(a: &FuncTerm, b: &FuncTerm, out: &mut Vec<FuncTerm>) {
    let (nu, alpha) = (a.nu.letters(), b.mu.letters());
    let common = nu.len().min(alpha.len());
    if nu[..common] != alpha[..common] {
        return;
    }
    if alpha.len() >= nu.len() {
        // f S_rest = sum_rho S_rho L(f), one letter at a time.
        let mut cur = vec![(Vec::new(), a.f.clone())];
        for &letter in &alpha[common..] {
            cur = cur
                .into_iter()
                .flat_map(|(rho, h): (Vec<u32>, NumericFn)| {
                    (1..=2).map(move |j| {
                        let mut rho = rho.clone();
                        rho.push(j);
                        (rho, h.transfer_ij(j, letter))
                    })
                })
                .collect();
        }
        for (rho, h) in cur {
            out.push(FuncTerm { mu: a.mu.concat(&Word(rho)), f: h.mul(&b.f), nu: b.nu.clone() });
        }
    } else {
        // S_rest^* g = sum_rho L(g) S_rho^*, innermost letter first.
        let mut cur = vec![(Vec::new(), b.f.clone())];
        for &letter in &nu[common..] {
            cur = cur
                .into_iter()
                .flat_map(|(rho, h): (Vec<u32>, NumericFn)| {
                    (1..=2).map(move |j| {
                        let mut rho = rho.clone();
                        rho.push(j);
                        (rho, h.transfer_ij(letter, j))
                    })
                })
                .collect();
        }
        for (rho, h) in cur {
            out.push(FuncTerm { mu: a.mu.clone(), f: a.f.mul(&h), nu: b.nu.concat(&Word(rho)) });
        }
    }
}

pub type FuncMatrix = [[FuncElement; 2]; 2];

/// The four entries of `P`, with `a_1`, `b_1` the square roots of the data.
pub fn assemble(d: &ProjectionData) -> Result<FuncMatrix> {
    let a1 = NumericFn::sqrt_of(&d.a1sq);
    let b1 = NumericFn::sqrt_of(&d.b1sq);
    let pa = NumericFn::from_piecewise(&d.a0.dilate(2)?);
    let pb = NumericFn::from_piecewise(&d.b0.dilate(2)?);
    let e = Word::empty;
    let w = |l: u32| Word::letter(l);
    let p11 = FuncElement::term(w(1), a1.clone(), e())
        .add(&FuncElement::function(pa))
        .add(&FuncElement::term(e(), a1.clone(), w(1)));
    let p12 = FuncElement::term(w(2), a1.clone(), e()).add(&FuncElement::term(e(), b1.clone(), w(2)));
    let p21 = FuncElement::term(w(2), b1.clone(), e()).add(&FuncElement::term(e(), a1.clone(), w(2)));
    let p22 = FuncElement::term(w(1), b1.clone(), e())
        .add(&FuncElement::function(pb))
        .add(&FuncElement::term(e(), b1, w(1)));
    Ok([[p11, p12], [p21, p22]])
}

pub fn square(p: &FuncMatrix) -> FuncMatrix {
    let entry = |i: usize, j: usize| p[i][0].mul(&p[0][j]).add(&p[i][1].mul(&p[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub grid: usize,
    /// `max |P^2 - P|` over canonical coefficients, on `grid` points.
    pub residual: f64,
    /// The same on `2 * grid` points.
    pub residual_fine: f64,
    /// `max |P - P^*|` on `grid` points.
    pub self_adjoint_residual: f64,
    pub tolerance: f64,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.residual < self.tolerance
            && self.residual_fine < self.tolerance
            && self.self_adjoint_residual < self.tolerance
    }
}

pub const SQUARE_TOLERANCE: f64 = 1e-9;

/// Forms `P` in floating point and measures `P^2 - P` and `P - P^*`.
pub fn assemble_and_square(d: &ProjectionData, grid: usize) -> Result<SquareReport> {
    let p = assemble(d)?;
    let p2 = square(&p);
    let mut residual: f64 = 0.0;
    let mut residual_fine: f64 = 0.0;
    let mut self_adjoint_residual: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let diff = p2[i][j].sub(&p[i][j]);
            residual = residual.max(diff.canonical_residual(grid));
            residual_fine = residual_fine.max(diff.canonical_residual(2 * grid));
            let sa = p[i][j].sub(&p[j][i].adjoint());
            self_adjoint_residual = self_adjoint_residual.max(sa.canonical_residual(grid));
        }
    }
    Ok(SquareReport { grid, residual, residual_fine, self_adjoint_residual, tolerance: SQUARE_TOLERANCE })
}
