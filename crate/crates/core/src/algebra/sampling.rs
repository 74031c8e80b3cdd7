//! Exact zero test and rank computation through the variant-A shift
//! representation on `l^2(Z[1/m])`, which is faithful whenever `n >= 2`.
//!
//! The domain of `S_mu z^k S_nu^*` is the cylinder `S_nu(Z[1/m])`; cylinders
//! are nested or disjoint, so the index set splits into leaf cylinders
//! `S_w(Z[1/m])` on which every term is either fully active or inactive. On
//! a leaf each active term is a total affine map of the cylinder parameter.
//! Distinct affine maps agree in at most one point, so one sample that
//! avoids every pairwise meeting point separates all of them.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraParams, Element, Monomial, Word};
use crate::error::{Error, Result};
use crate::numbers::{coeff_is_zero, rat_int, Coeff};
use crate::representations::affine::{word_affine, AffineFn, Variant};

/// A cylinder `S_word(Z[1/m])` with the indices of the terms defined on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub word: Word,
    pub active: Vec<usize>,
}

/// Splits the index set into cylinders refining every domain `S_nu(Z[1/m])`.
/// Cylinders on which no term is defined are dropped.
pub fn leaf_cylinders(domains: &[&Word], n: u32) -> Vec<Leaf> {
    let mut leaves = Vec::new();
    let mut stack: Vec<(Word, Vec<usize>)> = vec![(Word::empty(), (0..domains.len()).collect())];
    while let Some((w, cands)) = stack.pop() {
        if cands.is_empty() {
            continue;
        }
        let depth = w.len();
        if cands.iter().any(|&t| domains[t].len() > depth) {
            for j in (1..=n).rev() {
                let next: Vec<usize> = cands
                    .iter()
                    .copied()
                    .filter(|&t| domains[t].len() <= depth || domains[t].letters()[depth] == j)
                    .collect();
                stack.push((w.push(j), next));
            }
        } else {
            leaves.push(Leaf { word: w, active: cands });
        }
    }
    leaves
}

/// The action of `mon` restricted to the leaf `S_w(Z[1/m])`, as a map of
/// the cylinder parameter. Requires `mon.nu` to be a prefix of `w`.
fn leaf_map(params: AlgebraParams, w: &Word, mon: &Monomial) -> AffineFn {
    let rest = Word(w.letters()[mon.nu.len()..].to_vec());
    word_affine(&mon.mu, params, Variant::A)
        .after(&AffineFn::translation(mon.k))
        .after(&word_affine(&rest, params, Variant::A))
}

/// Smallest nonnegative integer avoiding all pairwise meeting points.
fn generic_sample(maps: &BTreeSet<AffineFn>) -> BigRational {
    let maps: Vec<&AffineFn> = maps.iter().collect();
    let mut bad = BTreeSet::new();
    for (i, f) in maps.iter().enumerate() {
        for g in &maps[i + 1..] {
            if let Some(q) = f.meet(g) {
                bad.insert(q);
            }
        }
    }
    let mut j = BigRational::zero();
    while bad.contains(&j) {
        j += BigRational::one();
    }
    j
}

fn require_faithful(params: AlgebraParams) -> Result<()> {
    if params.n < 2 {
        return Err(Error::Unsupported(
            "zero-test unsupported for n = 1; representation faithfulness not guaranteed".into(),
        ));
    }
    Ok(())
}

pub(crate) fn is_zero(params: AlgebraParams, x: &Element) -> Result<bool> {
    require_faithful(params)?;
    if x.is_empty() {
        return Ok(true);
    }
    let terms: Vec<(&Monomial, &Coeff)> = x.terms().collect();
    let domains: Vec<&Word> = terms.iter().map(|(m, _)| &m.nu).collect();
    for leaf in leaf_cylinders(&domains, params.n) {
        // Terms sharing an affine map on this leaf hit the same basis vector
        // everywhere; merge them first.
        let mut by_map: BTreeMap<AffineFn, Coeff> = BTreeMap::new();
        for &t in &leaf.active {
            let f = leaf_map(params, &leaf.word, terms[t].0);
            let slot = by_map.entry(f).or_insert_with(|| Coeff::new(rat_int(0), rat_int(0)));
            *slot = &*slot + terms[t].1;
        }
        let maps: BTreeSet<AffineFn> = by_map.keys().cloned().collect();
        let p = generic_sample(&maps);
        let mut image: BTreeMap<BigRational, Coeff> = BTreeMap::new();
        for (f, c) in &by_map {
            let slot = image.entry(f.apply(&p)).or_insert_with(|| Coeff::new(rat_int(0), rat_int(0)));
            *slot = &*slot + c;
        }
        if image.values().any(|c| !coeff_is_zero(c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

type Key = (usize, BigRational);

/// Incremental exact row reduction on sparse vectors.
#[derive(Default)]
struct Echelon {
    pivots: BTreeMap<Key, BTreeMap<Key, Coeff>>,
}

impl Echelon {
    /// Reduces `v` against the pivots; returns true if it was independent.
    fn insert(&mut self, mut v: BTreeMap<Key, Coeff>) -> bool {
        v.retain(|_, c| !coeff_is_zero(c));
        while let Some((lead, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            match self.pivots.get(&lead) {
                None => {
                    let inv = c.inv();
                    for val in v.values_mut() {
                        *val = &*val * &inv;
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
                Some(row) => {
                    for (k, r) in row {
                        let entry = v.entry(k.clone()).or_insert_with(|| Coeff::new(rat_int(0), rat_int(0)));
                        *entry = &*entry - &(&c * r);
                        if coeff_is_zero(entry) {
                            v.remove(k);
                        }
                    }
                }
            }
        }
        false
    }
}

/// Dimension of the linear span of `elements` inside the algebra.
pub fn span_dimension(params: AlgebraParams, elements: &[Element]) -> Result<usize> {
    require_faithful(params)?;
    let mut all: Vec<(usize, &Monomial, &Coeff)> = Vec::new();
    for (e, x) in elements.iter().enumerate() {
        for (m, c) in x.terms() {
            all.push((e, m, c));
        }
    }
    let domains: Vec<&Word> = all.iter().map(|(_, m, _)| &m.nu).collect();
    let mut rows: Vec<BTreeMap<Key, Coeff>> = vec![BTreeMap::new(); elements.len()];
    for (leaf_id, leaf) in leaf_cylinders(&domains, params.n).into_iter().enumerate() {
        let maps: Vec<AffineFn> = leaf.active.iter().map(|&t| leaf_map(params, &leaf.word, all[t].1)).collect();
        let distinct: BTreeSet<AffineFn> = maps.iter().cloned().collect();
        let p = generic_sample(&distinct);
        for (f, &t) in maps.iter().zip(&leaf.active) {
            let (e, _, c) = all[t];
            let slot = rows[e]
                .entry((leaf_id, f.apply(&p)))
                .or_insert_with(|| Coeff::new(rat_int(0), rat_int(0)));
            *slot = &*slot + c;
        }
    }
    let mut ech = Echelon::default();
    Ok(rows.into_iter().filter(|r| !r.is_empty()).map(|r| ech.insert(r)).filter(|&b| b).count())
}
