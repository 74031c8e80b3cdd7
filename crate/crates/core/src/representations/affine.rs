//! Monomials acting on the basis `{e_q : q in Z[1/m]}` of `l^2(Z[1/m])`.
//!
//! `z e_q = e_{q+1}` and `S_1 e_q = e_{(n/m) q + c}` with `c = -1` (variant A)
//! or `c = 0` (variant B). Every monomial then sends basis vectors to basis
//! vectors through an injective affine map on a divisibility-defined domain.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraParams, Monomial, Word};
use crate::error::{Error, Result};
use crate::numbers::{format_rational, in_localized, rat, rat_int, rat_pow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    /// Offset of `S_i`: `S_i e_q = e_{(n/m) q + offset}`.
    pub fn letter_offset(self, i: u32) -> i64 {
        match self {
            Variant::A => i as i64 - 2,
            Variant::B => i as i64 - 1,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            _ => Err(Error::Parse(format!("unknown variant {s:?}, expected A or B"))),
        }
    }
}

/// `q -> a q + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFn {
    pub a: BigRational,
    pub b: BigRational,
}

impl AffineFn {
    pub fn identity() -> Self {
        AffineFn { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn translation(k: i64) -> Self {
        AffineFn { a: BigRational::one(), b: rat_int(k) }
    }

    pub fn apply(&self, q: &BigRational) -> BigRational {
        &self.a * q + &self.b
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AffineFn) -> AffineFn {
        AffineFn { a: &self.a * &inner.a, b: &self.a * &inner.b + &self.b }
    }

    pub fn inverse(&self) -> AffineFn {
        let a = self.a.recip();
        let b = -&self.b * &a;
        AffineFn { a, b }
    }

    /// The unique `q` with `self(q) = other(q)`, if the slopes differ.
    pub fn meet(&self, other: &AffineFn) -> Option<BigRational> {
        if self.a == other.a {
            None
        } else {
            Some((&other.b - &self.b) / (&self.a - &other.a))
        }
    }
}

/// `S_w` as an affine map: `q -> (n/m)^{|w|} q + c_w`.
pub fn word_affine(w: &Word, params: AlgebraParams, variant: Variant) -> AffineFn {
    let r = rat(params.n as i64, params.m as i64);
    let mut f = AffineFn::identity();
    for &j in w.letters().iter().rev() {
        let letter = AffineFn { a: r.clone(), b: rat_int(variant.letter_offset(j)) };
        f = letter.after(&f);
    }
    f
}

/// Domain clause `(q - shift) / divisor in Z[1/m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainCondition {
    pub shift: BigRational,
    pub divisor: BigRational,
}

impl DomainCondition {
    pub fn holds(&self, q: &BigRational, m: u32) -> bool {
        in_localized(&((q - &self.shift) / &self.divisor), m as u64)
    }
}

/// A partial injective affine map on `Z[1/m]`; outside its domain the
/// corresponding operator sends `e_q` to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAffineMap {
    pub map: AffineFn,
    pub domain: Vec<DomainCondition>,
    pub m: u32,
}

impl PartialAffineMap {
    pub fn total(map: AffineFn, m: u32) -> Self {
        PartialAffineMap { map, domain: Vec::new(), m }
    }

    pub fn scale(&self) -> &BigRational {
        &self.map.a
    }

    pub fn offset(&self) -> &BigRational {
        &self.map.b
    }

    pub fn is_defined(&self, q: &BigRational) -> bool {
        in_localized(q, self.m as u64) && self.domain.iter().all(|c| c.holds(q, self.m))
    }

    pub fn apply(&self, q: &BigRational) -> Option<BigRational> {
        self.is_defined(q).then(|| self.map.apply(q))
    }

    /// `self ∘ inner`, defined where `inner` is defined and lands in the
    /// domain of `self`.
    pub fn after(&self, inner: &PartialAffineMap) -> PartialAffineMap {
        let mut domain = inner.domain.clone();
        for c in &self.domain {
            domain.push(DomainCondition {
                shift: (&c.shift - &inner.map.b) / &inner.map.a,
                divisor: &c.divisor / &inner.map.a,
            });
        }
        PartialAffineMap { map: self.map.after(&inner.map), domain, m: self.m }
    }
}

impl fmt::Display for PartialAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q -> {} q + {}", format_rational(&self.map.a), format_rational(&self.map.b))?;
        for c in &self.domain {
            write!(
                f,
                " if (q - {}) / {} in Z[1/{}]",
                format_rational(&c.shift),
                format_rational(&c.divisor),
                self.m
            )?;
        }
        Ok(())
    }
}

/// The action of `S_mu z^k S_nu^*` on basis indices.
pub fn monomial_affine_map(mon: &Monomial, params: AlgebraParams, variant: Variant) -> PartialAffineMap {
    let s_nu = word_affine(&mon.nu, params, variant);
    let s_mu = word_affine(&mon.mu, params, variant);
    let map = s_mu.after(&AffineFn::translation(mon.k)).after(&s_nu.inverse());
    let domain = if mon.nu.is_empty() {
        Vec::new()
    } else {
        vec![DomainCondition { shift: s_nu.b.clone(), divisor: s_nu.a.clone() }]
    };
    PartialAffineMap { map, domain, m: params.m }
}

/// Where two monomial actions agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coincidence {
    None,
    Point(BigRational),
    /// Same affine map on overlapping domains: the pair needs splitting by
    /// domain before generic sampling can separate them.
    Subdomain,
}

pub fn coincidence_points(
    a: &Monomial,
    b: &Monomial,
    params: AlgebraParams,
    variant: Variant,
) -> Result<Coincidence> {
    if a == b {
        return Err(Error::InvalidInput("coincidence of a monomial with itself".into()));
    }
    let fa = monomial_affine_map(a, params, variant);
    let fb = monomial_affine_map(b, params, variant);
    if fa.map == fb.map {
        // Cylinder domains are nested or disjoint.
        let overlap = a.nu.is_prefix_of(&b.nu) || b.nu.is_prefix_of(&a.nu);
        return Ok(if overlap { Coincidence::Subdomain } else { Coincidence::None });
    }
    match fa.map.meet(&fb.map) {
        Some(q) if fa.is_defined(&q) && fb.is_defined(&q) => Ok(Coincidence::Point(q)),
        _ => Ok(Coincidence::None),
    }
}

/// Every `p / m^e` with `|p| <= bound` and `e <= depth`, deduplicated.
pub fn window_indices(m: u32, bound: i64, depth: u32) -> Vec<BigRational> {
    let mut out = std::collections::BTreeSet::new();
    let depth = if m == 1 { 0 } else { depth };
    for e in 0..=depth {
        let den = rat_pow(&rat_int(m as i64), e as i64);
        for p in -bound..=bound {
            out.insert(rat_int(p) / &den);
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32, n: u32) -> AlgebraParams {
        AlgebraParams::new(m, n).unwrap()
    }

    #[test]
    fn s2_fixes_origin_in_variant_a() {
        for (m, n) in [(1, 2), (2, 3), (3, 2), (1, 5)] {
            let f = monomial_affine_map(&Monomial::s(2), p(m, n), Variant::A);
            assert_eq!(f.apply(&rat_int(0)), Some(rat_int(0)));
        }
    }

    #[test]
    fn z_power_is_a_total_translation() {
        let f = monomial_affine_map(&Monomial::z_power(5), p(2, 3), Variant::B);
        assert!(f.domain.is_empty());
        assert_eq!(f.map, AffineFn::translation(5));
    }

    #[test]
    fn s1_star_inverts_on_odd_integers() {
        let f = monomial_affine_map(&Monomial::s_star(1), p(1, 2), Variant::A);
        for q in -9..=9 {
            let got = f.apply(&rat_int(q));
            if q % 2 == 0 {
                assert_eq!(got, None, "q = {q}");
            } else {
                assert_eq!(got, Some(rat(q + 1, 2)));
            }
        }
    }

    #[test]
    fn coincidences() {
        let pr = p(1, 2);
        let c = coincidence_points(&Monomial::z_power(1), &Monomial::z_power(2), pr, Variant::A).unwrap();
        assert_eq!(c, Coincidence::None);
        let proj = Monomial::new(vec![1], 0, vec![1]);
        let c = coincidence_points(&Monomial::one(), &proj, pr, Variant::B).unwrap();
        assert_eq!(c, Coincidence::Subdomain);
        // z S_1 z^{-1} normalizes to S_2 z^{-1}: 2q - 2 against 2q - 1.
        let conj = Monomial::new(vec![2], -1, vec![]);
        let c = coincidence_points(&Monomial::s(1), &conj, pr, Variant::A).unwrap();
        assert_eq!(c, Coincidence::None);
        let c = coincidence_points(&Monomial::z_power(1), &Monomial::s(1), pr, Variant::A).unwrap();
        assert_eq!(c, Coincidence::Point(rat_int(2)));
        assert!(coincidence_points(&proj, &proj, pr, Variant::A).is_err());
    }

    #[test]
    fn window_dedups_for_m_one() {
        assert_eq!(window_indices(1, 3, 4).len(), 7);
        assert_eq!(window_indices(2, 1, 1).len(), 5);
    }
}
