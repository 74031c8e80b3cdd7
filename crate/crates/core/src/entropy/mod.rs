//! Growth of the canonical endomorphism `Φ(x) = sum_i S_i x S_i^*` on
//! `O_(1,n)(T)`: dimension counting for its entropy, and the matrix picture
//! `ρ_r(x) = sum_{|μ|=|ν|=r} e_{μν} ⊗ S_μ^* x S_ν`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{span_dimension, Algebra, Element, Monomial, Word};
use crate::error::{Error, Result};
use crate::numbers::coeff_is_zero;

/// `sum (μ_i - 1) n^{i-1}`: the word read as a base-`n` number, least
/// significant digit first.
pub fn norm_index(mu: &Word, n: u32) -> u64 {
    mu.letters().iter().rev().fold(0, |acc, &l| acc * n as u64 + (l as u64 - 1))
}

pub fn omega_size(s: u32, n: u32) -> u64 {
    let words: u64 = (0..=s).map(|a| (n as u64).pow(a)).sum();
    words * words * (2 * (n as u64).pow(s) + 1)
}

/// `{ S_α z^k S_β^* : |α|, |β| <= s, |k| <= n^s }`.
pub fn omega(alg: &Algebra, s: u32, max_size: u64) -> Result<Vec<Monomial>> {
    let n = alg.n();
    let size = omega_size(s, n);
    if size > max_size {
        return Err(Error::BoundExceeded(format!("|ω({s})| = {size} exceeds {max_size}")));
    }
    let words: Vec<Word> = (0..=s as usize).flat_map(|a| Word::all_of_length(n, a)).collect();
    let kmax = (n as i64).pow(s);
    let mut out = Vec::with_capacity(size as usize);
    for a in &words {
        for b in &words {
            for k in -kmax..=kmax {
                out.push(Monomial::new(a.clone(), k, b.clone()));
            }
        }
    }
    Ok(out)
}

/// `Φ^l(S_α z^k S_β^*) = sum_{|γ| = l} S_{γα} z^k S_{γβ}^*`, as monomials.
pub fn phi_iter_monomials(alg: &Algebra, mon: &Monomial, l: usize) -> Vec<Monomial> {
    Word::all_of_length(alg.n(), l)
        .into_iter()
        .map(|g| Monomial::new(g.concat(&mon.mu), mon.k, g.concat(&mon.nu)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyRow {
    #[serde(rename = "N")]
    pub n_iter: usize,
    /// Dimension of the span of every monomial of `Φ^l(x)`, `x ∈ ω(s)`, `l < N`.
    pub dimension: usize,
    /// Dimension of the span of the elements `Φ^l(x)` themselves.
    pub orbit_dimension: usize,
    pub log_dim_over_n: f64,
    /// `log D_N - log D_{N-1}`.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyTable {
    pub n: u32,
    pub s: u32,
    pub rows: Vec<EntropyRow>,
    /// Least-squares slope of `log D_N` against `N` over the second half of the rows.
    pub fitted_rate: Option<f64>,
    pub target: f64,
    pub warning: Option<String>,
}

impl EntropyTable {
    /// Relative distance of the last `count` incremental slopes from `log n`.
    pub fn last_slope_errors(&self, count: usize) -> Vec<f64> {
        let slopes: Vec<f64> = self.rows.iter().filter_map(|r| r.slope).collect();
        slopes[slopes.len().saturating_sub(count)..].iter().map(|s| (s - self.target).abs() / self.target).collect()
    }

    /// `D_N <= D_1 n^N` for every row.
    pub fn counting_bound_holds(&self) -> bool {
        let Some(d1) = self.rows.first().map(|r| r.dimension as f64) else { return true };
        self.rows.iter().all(|r| r.dimension as f64 <= d1 * (self.n as f64).powi(r.n_iter as i32))
    }

    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].dimension <= w[1].dimension)
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Rows `N = 1..=n_max` of the dimension growth under `Φ`. Stops early with a
/// warning once the spanning set would exceed `max_terms` monomials.
pub fn entropy_estimate(alg: &Algebra, s: u32, n_max: usize, max_terms: usize) -> Result<EntropyTable> {
    if alg.m() != 1 {
        return Err(Error::InvalidInput(format!("entropy counting needs m = 1, got m = {}", alg.m())));
    }
    if alg.n() < 2 {
        return Err(Error::Unsupported("entropy counting needs n >= 2".into()));
    }
    let base = omega(alg, s, max_terms as u64)?;
    let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
    let mut orbit: Vec<Element> = Vec::new();
    let mut rows: Vec<EntropyRow> = Vec::new();
    let mut warning = None;
    for big_n in 1..=n_max {
        let l = big_n - 1;
        let next = base.len() * alg.n().pow(l as u32) as usize;
        if monomials.len() + next > max_terms {
            warning = Some(format!("stopped before N = {big_n}: more than {max_terms} monomials"));
            break;
        }
        for mon in &base {
            let terms = phi_iter_monomials(alg, mon, l);
            orbit.push(terms.iter().cloned().map(Element::from).fold(Element::zero(), |a, b| a + b));
            monomials.extend(terms);
        }
        let elems: Vec<Element> = monomials.iter().cloned().map(Element::from).collect();
        let dimension = span_dimension(alg.params, &elems)?;
        let orbit_dimension = span_dimension(alg.params, &orbit)?;
        let log_d = (dimension as f64).ln();
        let slope = rows.last().map(|r| log_d - (r.dimension as f64).ln());
        rows.push(EntropyRow { n_iter: big_n, dimension, orbit_dimension, log_dim_over_n: log_d / big_n as f64, slope });
    }
    let tail: Vec<(f64, f64)> =
        rows[rows.len() / 2..].iter().map(|r| (r.n_iter as f64, (r.dimension as f64).ln())).collect();
    Ok(EntropyTable {
        n: alg.n(),
        s,
        fitted_rate: least_squares_slope(&tail),
        target: (alg.n() as f64).ln(),
        rows,
        warning,
    })
}

/// `ρ_r(x)` as a map from index pairs `(μ, ν)` with `|μ| = |ν| = r` to
/// `S_μ^* x S_ν`; zero entries are omitted.
pub fn rho_matrix(alg: &Algebra, x: &Element, r: usize) -> BTreeMap<(Word, Word), Element> {
    let words = Word::all_of_length(alg.n(), r);
    let mut out = BTreeMap::new();
    for mu in &words {
        let left = alg.mul(&Element::from(Monomial::new(Word::empty(), 0, mu.clone())), x);
        if left.is_empty() {
            continue;
        }
        for nu in &words {
            let e = alg.mul(&left, &Element::from(Monomial::new(nu.clone(), 0, Word::empty())));
            if !e.is_empty() {
                out.insert((mu.clone(), nu.clone()), e);
            }
        }
    }
    out
}

/// Entrywise matrix product of two `ρ_r` images.
pub fn rho_product(
    alg: &Algebra,
    a: &BTreeMap<(Word, Word), Element>,
    b: &BTreeMap<(Word, Word), Element>,
) -> BTreeMap<(Word, Word), Element> {
    let mut out: BTreeMap<(Word, Word), Element> = BTreeMap::new();
    for ((mu, lam), x) in a {
        for ((lam2, nu), y) in b.range((lam.clone(), Word::empty())..) {
            if lam2 != lam {
                break;
            }
            let e = out.entry((mu.clone(), nu.clone())).or_default();
            *e = e.clone() + alg.mul(x, y);
        }
    }
    out.retain(|_, e| !e.is_empty());
    out
}

/// Compares two `ρ_r` images entry by entry under `is_zero`.
pub fn rho_equal(
    alg: &Algebra,
    a: &BTreeMap<(Word, Word), Element>,
    b: &BTreeMap<(Word, Word), Element>,
) -> Result<bool> {
    let keys: BTreeSet<&(Word, Word)> = a.keys().chain(b.keys()).collect();
    for k in keys {
        let x = a.get(k).cloned().unwrap_or_default();
        let y = b.get(k).cloned().unwrap_or_default();
        if !alg.equal(&x, &y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub r: usize,
    pub l: usize,
    pub s: u32,
    pub nonzero_entries: usize,
    pub exponents: Vec<i64>,
    pub at_most_two: bool,
    pub consecutive: bool,
    pub q0_bounded: bool,
    /// Every entry is zero or a single monomial with coefficient 1.
    pub single_monomials: bool,
    /// For every tensor factor `S_η z^q S_η'^*`, the positions where it
    /// occurs form a partial isometry (at most one per row and per column).
    pub partial_isometries: bool,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.at_most_two && self.consecutive && self.q0_bounded && self.single_monomials && self.partial_isometries
    }
}

/// `ρ_r(Φ^l(S_α z^k S_β^*))` and its structural check, under the hypotheses
/// `m = 1`, `|α|, |β| <= s`, `|k| <= n^s`, `1 <= l` and `l + s <= r`.
pub fn rho_r(alg: &Algebra, mon: &Monomial, s: u32, r: usize, l: usize) -> Result<ShapeReport> {
    alg.check_monomial(mon)?;
    let n = alg.n();
    let violations = [
        (alg.m() != 1, format!("m = {} but m = 1 is required", alg.m())),
        (mon.mu.len() > s as usize, format!("|α| = {} > s = {s}", mon.mu.len())),
        (mon.nu.len() > s as usize, format!("|β| = {} > s = {s}", mon.nu.len())),
        (mon.k.unsigned_abs() > (n as u64).pow(s), format!("|k| = {} > n^s = {}", mon.k.abs(), (n as u64).pow(s))),
        (l == 0, "l must be at least 1".to_string()),
        (l + s as usize > r, format!("l + s = {} > r = {r}", l + s as usize)),
    ];
    if let Some((_, msg)) = violations.iter().find(|(bad, _)| *bad) {
        return Err(Error::Hypothesis(msg.clone()));
    }
    let x: Element = phi_iter_monomials(alg, mon, l).into_iter().map(Element::from).fold(Element::zero(), |a, b| a + b);
    let matrix = rho_matrix(alg, &x, r);
    let mut exponents = BTreeSet::new();
    let mut single = true;
    let mut patterns: BTreeMap<(Word, Word, i64), Vec<(Word, Word)>> = BTreeMap::new();
    for ((mu, nu), e) in &matrix {
        let terms: Vec<_> = e.terms().collect();
        if terms.len() != 1 || !coeff_is_zero(&(terms[0].1.clone() - crate::numbers::coeff_int(1))) {
            single = false;
            continue;
        }
        let m = terms[0].0;
        exponents.insert(m.k);
        patterns.entry((m.mu.clone(), m.nu.clone(), m.k)).or_default().push((mu.clone(), nu.clone()));
    }
    let partial_isometries = patterns.values().all(|pos| {
        let rows: BTreeSet<&Word> = pos.iter().map(|p| &p.0).collect();
        let cols: BTreeSet<&Word> = pos.iter().map(|p| &p.1).collect();
        rows.len() == pos.len() && cols.len() == pos.len()
    });
    let exps: Vec<i64> = exponents.into_iter().collect();
    let bound = (n as i64).pow(s);
    Ok(ShapeReport {
        r,
        l,
        s,
        nonzero_entries: matrix.len(),
        at_most_two: exps.len() <= 2,
        consecutive: exps.len() < 2 || exps[1] == exps[0] + 1,
        q0_bounded: exps.first().is_none_or(|q| q.abs() <= bound),
        exponents: exps,
        single_monomials: single,
        partial_isometries,
    })
}
