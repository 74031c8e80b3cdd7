//! The cyclic gauge-type action `β` (`z -> t z`, `S_1 -> S_1`, `t^{|n-m|} = 1`),
//! the symmetry `σ` (`z -> z^{-1}`, `S_1 -> S_1`), and rewriting of
//! `β`-invariant monomials in the generators `z^{|n-m|}` and `S_1`.

pub mod witness;

pub use witness::{subalgebra_witness_power, subalgebra_witness_zk, RelationStatus, WitnessReport};

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{Algebra, Element, Monomial, Word};
use crate::error::{Error, Result};

fn modulus(alg: &Algebra) -> Result<i64> {
    let d = (alg.n() as i64 - alg.m() as i64).abs();
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "the cyclic action needs |n - m| >= 2, got ({}, {})",
            alg.m(),
            alg.n()
        )));
    }
    Ok(d)
}

/// `sum (mu_i - 1) + k - sum (nu_j - 1) mod |n - m|`: `β_t` multiplies the
/// monomial by `t` to this power.
pub fn beta_weight(alg: &Algebra, mon: &Monomial) -> Result<i64> {
    let d = modulus(alg)?;
    let letters = |w: &Word| w.letters().iter().map(|&l| l as i64 - 1).sum::<i64>();
    Ok((letters(&mon.mu) + mon.k - letters(&mon.nu)).rem_euclid(d))
}

pub fn is_beta_fixed(alg: &Algebra, mon: &Monomial) -> Result<bool> {
    Ok(beta_weight(alg, mon)? == 0)
}

/// `σ(S_w)` as a single normalized monomial: each `S_i = z^{i-1} S_1` goes to
/// `z^{-(i-1)} S_1`.
fn sigma_isometry(alg: &Algebra, w: &Word) -> Monomial {
    let factors: Vec<Monomial> =
        w.letters().iter().flat_map(|&i| [Monomial::z_power(-(i as i64 - 1)), Monomial::s(1)]).collect();
    alg.normalize(&factors).expect("products of isometries and unitaries are nonzero")
}

pub fn sigma_monomial(alg: &Algebra, mon: &Monomial) -> Monomial {
    let left = sigma_isometry(alg, &mon.mu);
    let right = sigma_isometry(alg, &mon.nu).adjoint();
    alg.normalize(&[left, Monomial::z_power(-mon.k), right]).expect("nonzero product")
}

pub fn sigma_apply(alg: &Algebra, x: &Element) -> Element {
    Element::from_terms(x.terms().map(|(m, c)| (sigma_monomial(alg, m), c.clone())))
}

/// One letter of a word in `z^{|n-m|}`, `S_1` and `S_1^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Token {
    #[serde(rename = "Z")]
    Z(i64),
    #[serde(rename = "CREATE")]
    Create,
    #[serde(rename = "ANNIHILATE")]
    Annihilate,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Z(e) => write!(f, "Z({e})"),
            Token::Create => write!(f, "CREATE"),
            Token::Annihilate => write!(f, "ANNIHILATE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorWord {
    pub modulus: i64,
    pub tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.tokens.iter().filter_map(|t| match t {
            Token::Z(e) => Some(*e),
            _ => None,
        })
    }

    pub fn exponents_divisible(&self) -> bool {
        self.exponents().all(|e| e % self.modulus == 0)
    }

    /// Multiplies the tokens back out in the algebra.
    pub fn expand(&self, alg: &Algebra) -> Monomial {
        let factors: Vec<Monomial> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Z(e) => Monomial::z_power(*e),
                Token::Create => Monomial::s(1),
                Token::Annihilate => Monomial::s_star(1),
            })
            .collect();
        alg.normalize(&factors).expect("generator words of this shape are nonzero")
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tokens.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Least `p` in `[0, d)` with `c + p n = 0 mod d`.
fn least_solution(c: i64, n: i64, d: i64) -> i64 {
    let inv = n.extended_gcd(&d).x.rem_euclid(d);
    (-c * inv).rem_euclid(d)
}

/// Exponents `γ_i = (w_i - 1 - p_{i-1} m) + p_i n` with `p_0 = 0` and each `p_i`
/// the least residue making `γ_i` divisible by `d`; returns the `γ`s and the
/// last `p`. Then `S_w = z^{γ_1} S_1 ... z^{γ_L} S_1 z^{-p_L m}`.
fn split_word(w: &Word, m: i64, n: i64, d: i64) -> (Vec<i64>, i64) {
    let mut prev = 0;
    let mut gammas = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let c = l as i64 - 1 - prev * m;
        let p = least_solution(c, n, d);
        gammas.push(c + p * n);
        prev = p;
    }
    (gammas, prev)
}

/// Writes a `β`-invariant monomial as
/// `z^{γ_1} S_1 ... z^{γ_L} S_1 z^{mid} S_1^* z^{-δ_L'} ... S_1^* z^{-δ_1}`
/// with every exponent a multiple of `|n - m|`.
pub fn fixed_point_rewrite(alg: &Algebra, mon: &Monomial) -> Result<GeneratorWord> {
    alg.check_monomial(mon)?;
    let d = modulus(alg)?;
    let weight = beta_weight(alg, mon)?;
    if weight != 0 {
        return Err(Error::NotFixed { weight, modulus: d });
    }
    let (m, n) = (alg.m() as i64, alg.n() as i64);
    let (gammas, p_last) = split_word(&mon.mu, m, n, d);
    let (deltas, q_last) = split_word(&mon.nu, m, n, d);
    let mut tokens = Vec::new();
    for g in gammas {
        tokens.push(Token::Z(g));
        tokens.push(Token::Create);
    }
    tokens.push(Token::Z(-p_last * m + mon.k + q_last * m));
    for dl in deltas.iter().rev() {
        tokens.push(Token::Annihilate);
        tokens.push(Token::Z(-dl));
    }
    Ok(GeneratorWord { modulus: d, tokens })
}

/// Rewrites, re-expands and compares with the input under `is_zero`.
pub fn rewrite_round_trip(alg: &Algebra, mon: &Monomial) -> Result<bool> {
    let word = fixed_point_rewrite(alg, mon)?;
    let back = Element::from(word.expand(alg));
    Ok(word.exponents_divisible() && alg.equal(&back, &Element::from(mon.clone()))?)
}
