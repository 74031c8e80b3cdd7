use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite word over the letters `1..=n`. The empty word stands for `S_∅ = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: u32) -> Self {
        Word(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prepend(&self, j: u32) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(j);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push(&self, j: u32) -> Word {
        let mut v = self.0.clone();
        v.push(j);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Checks every letter lies in `1..=n`.
    pub fn in_range(&self, n: u32) -> bool {
        self.0.iter().all(|&j| (1..=n).contains(&j))
    }

    /// All words of length exactly `len` over `1..=n`, in lexicographic order.
    pub fn all_of_length(n: u32, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (1..=n).map(move |j| w.push(j)))
                .collect();
        }
        out
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The spanning element `S_mu z^k S_nu^*`.
///
/// Distinct triples are distinct labels but not linearly independent: the
/// Cuntz relation ties them together, so equality goes through the zero test.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub mu: Word,
    pub k: i64,
    pub nu: Word,
}

impl Monomial {
    pub fn new(mu: impl Into<Word>, k: i64, nu: impl Into<Word>) -> Self {
        Monomial { mu: mu.into(), k, nu: nu.into() }
    }

    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn z_power(k: i64) -> Self {
        Monomial::new(Word::empty(), k, Word::empty())
    }

    pub fn s(j: u32) -> Self {
        Monomial::new(Word::letter(j), 0, Word::empty())
    }

    pub fn s_star(j: u32) -> Self {
        Monomial::new(Word::empty(), 0, Word::letter(j))
    }

    /// `|mu| - |nu|`; the gauge action scales the monomial by `t^degree`.
    pub fn gauge_degree(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial { mu: self.nu.clone(), k: -self.k, nu: self.mu.clone() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.mu.is_empty() {
            parts.push(format!("S[{}]", self.mu));
        }
        if self.k != 0 {
            parts.push(format!("z^{}", self.k));
        }
        if !self.nu.is_empty() {
            parts.push(format!("S[{}]*", self.nu));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}
