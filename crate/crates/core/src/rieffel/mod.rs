//! A 2x2 projection over `O_(1,2)(T)` built from piecewise-linear functions
//! of `z`, following Rieffel's construction for rotation algebras.
//!
//! ```text
//! P = [ S_1 a_1 + φ(a_0) + a_1 S_1^*    S_2 a_1 + b_1 S_2^*           ]
//!     [ S_2 b_1 + a_1 S_2^*             S_1 b_1 + φ(b_0) + b_1 S_1^*  ]
//! ```
//!
//! with `φ(a)(t) = a(2t)`. The exact path checks the sufficient conditions on
//! the coefficient functions; [`numeric`] multiplies `P` out directly.

pub mod numeric;

pub use numeric::{assemble_and_square, FuncElement, NumericFn, SquareReport};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::function_ring::PiecewiseFunction;
use crate::numbers::{format_rational, rat, rat_int};

/// Coefficient data of the projection. `a1sq` and `b1sq` are the squares of
/// the off-diagonal coefficients, which are not polynomial themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionData {
    pub a0: PiecewiseFunction,
    pub b0: PiecewiseFunction,
    pub a1sq: PiecewiseFunction,
    pub b1sq: PiecewiseFunction,
    pub delta1: PiecewiseFunction,
    pub delta2: PiecewiseFunction,
}

fn r(p: i64, q: i64) -> BigRational {
    rat(p, q)
}

/// `a_0`: `4(t - 1/2)` on `[1/2, 3/4)`, `1 - 8(t - 3/4)` on `[3/4, 7/8)`, else 0.
pub fn canonical_a0() -> PiecewiseFunction {
    PiecewiseFunction::exact(vec![
        (r(0, 1), vec![]),
        (r(1, 2), vec![r(-2, 1), r(4, 1)]),
        (r(3, 4), vec![r(7, 1), r(-8, 1)]),
        (r(7, 8), vec![]),
    ])
    .expect("valid breakpoints")
}

/// `b_0`: 1 on `[0, 1/4)`, `1 - 8(t - 1/4)` on `[1/4, 3/8)`, 0 on
/// `[3/8, 1/2)`, `4(t - 1/2)` on `[1/2, 3/4)`, 1 on `[3/4, 1)`.
///
/// The displayed intervals for this function cannot be taken literally (the
/// second piece would reach -1 and the fourth would exceed 1); this is the
/// piecewise-linear completion forced by the support of `b_1`, the two
/// off-diagonal identities and the trace value.
pub fn canonical_b0() -> PiecewiseFunction {
    PiecewiseFunction::exact(vec![
        (r(0, 1), vec![r(1, 1)]),
        (r(1, 4), vec![r(3, 1), r(-8, 1)]),
        (r(3, 8), vec![]),
        (r(1, 2), vec![r(-2, 1), r(4, 1)]),
        (r(3, 4), vec![r(1, 1)]),
    ])
    .expect("valid breakpoints")
}

impl ProjectionData {
    /// Derives `a_1^2 = (φ(a_0) - φ(a_0^2)) Δ_1` and
    /// `b_1^2 = (φ(a_0) - φ(a_0^2)) Δ_2` from `a_0`, with the supports
    /// `Δ_1 = [3/4, 7/8)` and `Δ_2 = [1/4, 3/8)`.
    pub fn from_diagonal(a0: PiecewiseFunction, b0: PiecewiseFunction) -> Result<Self> {
        let delta1 = PiecewiseFunction::indicator(r(3, 4), r(7, 8))?;
        let delta2 = PiecewiseFunction::indicator(r(1, 4), r(3, 8))?;
        let gap = a0.dilate(2)?.sub(&a0.mul(&a0)?.dilate(2)?)?;
        Ok(ProjectionData { a1sq: gap.mul(&delta1)?, b1sq: gap.mul(&delta2)?, a0, b0, delta1, delta2 })
    }

    pub fn canonical() -> Self {
        Self::from_diagonal(canonical_a0(), canonical_b0()).expect("canonical data is exact")
    }

    /// Diagonal-only data: `P = diag(φ(a_0), φ(b_0))`.
    pub fn diagonal_only(a0: PiecewiseFunction, b0: PiecewiseFunction) -> Result<Self> {
        Ok(ProjectionData {
            a0,
            b0,
            a1sq: PiecewiseFunction::zero(),
            b1sq: PiecewiseFunction::zero(),
            delta1: PiecewiseFunction::indicator(r(3, 4), r(7, 8))?,
            delta2: PiecewiseFunction::indicator(r(1, 4), r(3, 8))?,
        })
    }
}

pub fn build_canonical_data() -> ProjectionData {
    ProjectionData::canonical()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    /// A point where the identity fails, as `"p/q"`.
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// A point inside the first nonzero piece where the piece does not vanish.
fn witness_nonzero(f: &PiecewiseFunction) -> Result<Option<BigRational>> {
    let polys = f.exact_pieces()?;
    for (i, p) in polys.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (lo, hi) = f.interval(i);
        let deg = p.degree().unwrap_or(0) as i64;
        for k in 1..=deg + 1 {
            let t = &lo + (&hi - &lo) * rat(k, deg + 2);
            if !p.eval(&t).is_zero() {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

fn vanishes(name: &str, f: &PiecewiseFunction) -> Result<ConditionResult> {
    let w = witness_nonzero(f)?;
    Ok(ConditionResult { name: name.into(), passed: w.is_none(), first_failure: w.as_ref().map(format_rational) })
}

fn nonnegative(name: &str, f: &PiecewiseFunction) -> Result<ConditionResult> {
    let polys = f.exact_pieces()?;
    for (i, p) in polys.iter().enumerate() {
        let (lo, hi) = f.interval(i);
        let ok = match p.min_on(&lo, &hi) {
            Some(min) => !min.is_negative(),
            None => false,
        };
        if !ok {
            return Ok(ConditionResult { name: name.into(), passed: false, first_failure: Some(format_rational(&lo)) });
        }
    }
    Ok(ConditionResult { name: name.into(), passed: true, first_failure: None })
}

fn within(name: &str, f: &PiecewiseFunction, support: &PiecewiseFunction) -> Result<ConditionResult> {
    let outside = f.mul(&PiecewiseFunction::one().sub(support)?)?;
    vanishes(name, &outside)
}

/// Verifies, exactly, every identity the projection property reduces to.
/// Conditions involving `a_1`, `b_1` themselves are checked on squares:
/// for nonnegative `u`, `u v = 0` iff `u^2 v = 0`.
pub fn check_conditions(d: &ProjectionData) -> Result<ConditionReport> {
    let one = PiecewiseFunction::one();
    let phi = |f: &PiecewiseFunction| f.dilate(2);
    let sq = |f: &PiecewiseFunction| f.mul(f);
    let (a0, b0, a1sq, b1sq) = (&d.a0, &d.b0, &d.a1sq, &d.b1sq);
    let mut out = vec![
        nonnegative("a_1^2 >= 0", a1sq)?,
        nonnegative("b_1^2 >= 0", b1sq)?,
        within("supp a_1 in [3/4, 7/8]", a1sq, &d.delta1)?,
        within("supp b_1 in [1/4, 3/8]", b1sq, &d.delta2)?,
        vanishes("a_1^2 b_1^2 = 0", &a1sq.mul(b1sq)?)?,
    ];

    // (1) φ(x_0) - φ(x_0^2) = a_1^2 + b_1^2 + φ(x_1^2)
    let lhs = phi(a0)?.sub(&phi(&sq(a0)?)?)?;
    let rhs = a1sq.add(b1sq)?.add(&phi(a1sq)?)?;
    out.push(vanishes("φ(a_0) - φ(a_0^2) = a_1^2 + b_1^2 + φ(a_1^2)", &lhs.sub(&rhs)?)?);
    let lhs = phi(b0)?.sub(&phi(&sq(b0)?)?)?;
    let rhs = a1sq.add(b1sq)?.add(&phi(b1sq)?)?;
    out.push(vanishes("φ(b_0) - φ(b_0^2) = a_1^2 + b_1^2 + φ(b_1^2)", &lhs.sub(&rhs)?)?);

    // (2) x_1 (x_0 + φ(x_0)) = x_1
    let ga = a0.add(&phi(a0)?)?.sub(&one)?;
    out.push(vanishes("a_1 (a_0 + φ(a_0)) = a_1", &a1sq.mul(&sq(&ga)?)?)?);
    let gb = b0.add(&phi(b0)?)?.sub(&one)?;
    out.push(vanishes("b_1 (b_0 + φ(b_0)) = b_1", &b1sq.mul(&sq(&gb)?)?)?);

    // (3) x_1 φ(a_1) = 0, x_1 φ(b_1) = 0
    out.push(vanishes("a_1 φ(a_1) = 0", &a1sq.mul(&phi(a1sq)?)?)?);
    out.push(vanishes("a_1 φ(b_1) = 0", &a1sq.mul(&phi(b1sq)?)?)?);
    out.push(vanishes("b_1 φ(b_1) = 0", &b1sq.mul(&phi(b1sq)?)?)?);
    out.push(vanishes("b_1 φ(a_1) = 0", &b1sq.mul(&phi(a1sq)?)?)?);

    // Off-diagonal blocks.
    let g = a0.add(&phi(b0)?)?.sub(&one)?;
    out.push(vanishes("a_0 + φ(b_0) = 1 on supp a_1", &a1sq.mul(&sq(&g)?)?)?);
    let g = phi(a0)?.add(b0)?.sub(&one)?;
    out.push(vanishes("φ(a_0) + b_0 = 1 on supp b_1", &b1sq.mul(&sq(&g)?)?)?);

    // Telescoping identities feeding the winding computation:
    // sum_{k=0}^{m-2} x_0^k x_1^2 = (x_0 - x_0^m) Δ for m = 2, 3, 4.
    for (label, x0, x1sq, delta) in [("a", a0, a1sq, &d.delta1), ("b", b0, b1sq, &d.delta2)] {
        let mut sum = PiecewiseFunction::zero();
        let mut power = PiecewiseFunction::one();
        for m in 2..=4u32 {
            sum = sum.add(&power.mul(x1sq)?)?;
            power = power.mul(x0)?;
            let rhs = x0.sub(&power.mul(x0)?)?.mul(delta)?;
            out.push(vanishes(
                &format!("sum_(k<={}) {label}_0^k {label}_1^2 = ({label}_0 - {label}_0^{m}) Δ", m - 2),
                &sum.sub(&rhs)?,
            )?);
        }
    }
    Ok(ConditionReport { conditions: out })
}

/// `φ ⊗ τ (P) = (∫ a_0 + ∫ b_0) / 2`: the degree ±1 terms vanish under the
/// KMS state, which restricts to Lebesgue measure on functions of `z`.
pub fn kms_trace(d: &ProjectionData) -> Result<BigRational> {
    Ok((d.a0.integrate()? + d.b0.integrate()?) / rat_int(2))
}

/// The K_0 class of `P` through the exponential map:
/// `winding(φ(a_0 Δ_1)) + winding(φ(b_0 Δ_2))`.
pub fn k0_class(d: &ProjectionData) -> Result<BigInt> {
    let wa = d.a0.mul(&d.delta1)?.dilate(2)?.winding()?;
    let wb = d.b0.mul(&d.delta2)?.dilate(2)?.winding()?;
    Ok(wa + wb)
}

/// Each piece of `a_0` or `b_0` bumped by `eps`, one at a time, with the
/// off-diagonal squares recomputed from the bumped data.
pub fn single_piece_perturbations(eps: &BigRational) -> Result<Vec<(String, ProjectionData)>> {
    let mut out = Vec::new();
    for (label, base) in [("a_0", canonical_a0()), ("b_0", canonical_b0())] {
        for i in 0..base.pieces().len() {
            let (lo, hi) = base.interval(i);
            let bump = if hi == BigRational::one() && lo.is_zero() {
                PiecewiseFunction::constant(eps.clone())
            } else {
                PiecewiseFunction::indicator(lo.clone(), hi.clone())?.scale(eps)
            };
            let f = base.add(&bump)?;
            let d = if label == "a_0" {
                ProjectionData::from_diagonal(f, canonical_b0())?
            } else {
                ProjectionData::from_diagonal(canonical_a0(), f)?
            };
            out.push((format!("{label} + {} on [{}, {})", format_rational(eps), lo, hi), d));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_values() {
        let a0 = canonical_a0();
        assert_eq!(a0.eval_exact(&r(5, 8)).unwrap(), r(1, 2));
        for t in [r(0, 1), r(1, 8), r(1, 3), r(7, 16)] {
            assert_eq!(a0.eval_exact(&t).unwrap(), r(0, 1));
        }
        assert_eq!(canonical_b0().eval_exact(&r(9, 16)).unwrap(), r(1, 4));
    }

    #[test]
    fn conditions_hold_exactly() {
        let rep = check_conditions(&ProjectionData::canonical()).unwrap();
        for c in &rep.conditions {
            assert!(c.passed, "{} failed at {:?}", c.name, c.first_failure);
        }
    }

    #[test]
    fn b1_square_matches_the_b_formula() {
        let d = ProjectionData::canonical();
        let b0 = &d.b0;
        let own = b0.dilate(2).unwrap().sub(&b0.mul(b0).unwrap().dilate(2).unwrap()).unwrap();
        let own = own.mul(&d.delta2).unwrap();
        assert_eq!(own, d.b1sq);
    }

    #[test]
    fn perturbing_a0_breaks_condition_two() {
        let bump = PiecewiseFunction::indicator(r(1, 2), r(3, 4)).unwrap().scale(&r(1, 100));
        let a0 = canonical_a0().add(&bump).unwrap();
        let d = ProjectionData::from_diagonal(a0, canonical_b0()).unwrap();
        let rep = check_conditions(&d).unwrap();
        let c2 = rep.get("a_1 (a_0 + φ(a_0)) = a_1").unwrap();
        assert!(!c2.passed);
        assert!(c2.first_failure.is_some());
    }

    #[test]
    fn every_single_piece_perturbation_is_caught() {
        for (label, d) in single_piece_perturbations(&r(1, 100)).unwrap() {
            assert!(!check_conditions(&d).unwrap().all_passed(), "{label} went unnoticed");
        }
    }

    #[test]
    fn trace_and_class() {
        let d = ProjectionData::canonical();
        assert_eq!(d.a0.integrate().unwrap(), r(3, 16));
        assert_eq!(d.b0.integrate().unwrap(), r(11, 16));
        assert_eq!(kms_trace(&d).unwrap(), r(7, 16));
        assert_eq!(k0_class(&d).unwrap(), BigInt::from(-4));
        let wa = d.a0.mul(&d.delta1).unwrap().dilate(2).unwrap().winding().unwrap();
        assert_eq!(wa, BigInt::from(-2));
    }

    #[test]
    fn trivial_data() {
        let zero = ProjectionData::diagonal_only(PiecewiseFunction::zero(), PiecewiseFunction::zero()).unwrap();
        assert_eq!(kms_trace(&zero).unwrap(), r(0, 1));
        assert_eq!(k0_class(&zero).unwrap(), BigInt::from(0));
        let one = ProjectionData::diagonal_only(PiecewiseFunction::one(), PiecewiseFunction::one()).unwrap();
        assert_eq!(kms_trace(&one).unwrap(), r(1, 1));
    }
}
