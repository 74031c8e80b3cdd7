use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::word::{Monomial, Word};
use crate::error::Result;
use crate::numbers::{coeff_int, coeff_is_zero, format_rational, parse_rational, Coeff};

/// A finite linear combination of monomials with exact complex-rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Element {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::from(Monomial::one())
    }

    pub fn term(mon: Monomial, c: Coeff) -> Self {
        let mut e = Element::zero();
        e.add_term(mon, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut e = Element::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, mon: Monomial, c: Coeff) {
        if coeff_is_zero(&c) {
            return;
        }
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if coeff_is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, mon: &Monomial) -> Option<&Coeff> {
        self.terms.get(mon)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Syntactically empty. Semantic zero needs [`crate::Algebra::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Coeff) -> Element {
        Element::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Element {
        Element::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn max_word_len(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.mu.len().max(m.nu.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                mu: m.mu.0.clone(),
                k: m.k,
                nu: m.nu.0.clone(),
                re: format_rational(&c.re),
                im: format_rational(&c.im),
            })
            .collect();
        serde_json::to_value(rows).expect("term rows serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Element> {
        let rows: Vec<TermJson> = serde_json::from_value(v.clone())?;
        let mut e = Element::zero();
        for r in rows {
            let c = Coeff::new(parse_rational(&r.re)?, parse_rational(&r.im)?);
            e.add_term(Monomial::new(Word(r.mu), r.k, Word(r.nu)), c);
        }
        Ok(e)
    }

    pub fn from_json_str(s: &str) -> Result<Element> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        Element::from_json(&v)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mu: Vec<u32>,
    k: i64,
    nu: Vec<u32>,
    #[serde(default = "zero_str")]
    re: String,
    #[serde(default = "zero_str")]
    im: String,
}

fn zero_str() -> String {
    "0/1".to_string()
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element::term(m, coeff_int(1))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.im.is_zero() {
                    format!("({}) {}", c.re, m)
                } else {
                    format!("({}+{}i) {}", c.re, c.im, m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
