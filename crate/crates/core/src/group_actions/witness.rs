//! Explicit generators inside `C^*(z, S_1^k)` and `C^*(z^k, S_1)` that
//! satisfy the defining relations of `O_(m^k, n^k)(T)` and `O_(m,n)(T)`.

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{Algebra, Element, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RelationStatus {
    pub relation: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    pub k_before: u64,
    /// `S_1^* z^{a n} S_1 = z^{a m}` with `z^{a n}` a power of `z^{k_before}`.
    pub a: u64,
    pub k_after: u64,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub m: u32,
    pub n: u32,
    pub k: u64,
    /// Exponent actually used for the generators after removing primes
    /// shared with `n`.
    pub reduced_k: u64,
    pub generators: usize,
    pub reduction: Vec<ReductionStep>,
    /// `(l_q, p_q)` with `(q - 1) k = l_q + n p_q`, `0 <= l_q < n`.
    pub l_table: Vec<(u64, i64)>,
    pub relations: Vec<RelationStatus>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.failures == 0) && self.reduction.iter().all(|s| s.verified)
    }
}

fn el(m: Monomial) -> Element {
    Element::from(m)
}

/// Checks the Cuntz-type relations for generators `gens` with respect to the
/// unitary `w`: `w g_i = g_{i+1}`, `w g_N = g_1 w^{exp}`, `g_i^* g_j = δ_ij`
/// and `sum g_i g_i^* = 1`.
fn relation_statuses(alg: &Algebra, gens: &[Element], w: &Element, exp: u64) -> Result<Vec<RelationStatus>> {
    let count = gens.len();
    let mut shift = RelationStatus { relation: "w S~_i = S~_(i+1)".into(), instances: 0, failures: 0 };
    for i in 0..count - 1 {
        shift.instances += 1;
        shift.failures += usize::from(!alg.equal(&alg.mul(w, &gens[i]), &gens[i + 1])?);
    }
    let w_exp = alg.pow(w, exp as u32);
    let wrap = RelationStatus {
        relation: format!("w S~_{count} = S~_1 w^{exp}"),
        instances: 1,
        failures: usize::from(!alg.equal(&alg.mul(w, &gens[count - 1]), &alg.mul(&gens[0], &w_exp))?),
    };
    let mut ortho = RelationStatus { relation: "S~_i^* S~_j = δ_ij".into(), instances: 0, failures: 0 };
    for (i, gi) in gens.iter().enumerate() {
        let gi_star = alg.adjoint(gi);
        for (j, gj) in gens.iter().enumerate() {
            let target = if i == j { Element::one() } else { Element::zero() };
            ortho.instances += 1;
            ortho.failures += usize::from(!alg.equal(&alg.mul(&gi_star, gj), &target)?);
        }
    }
    let mut sum = Element::zero();
    for g in gens {
        sum = sum + alg.mul(g, &alg.adjoint(g));
    }
    let cuntz = RelationStatus {
        relation: "sum S~_i S~_i^* = 1".into(),
        instances: 1,
        failures: usize::from(!alg.equal(&sum, &Element::one())?),
    };
    Ok(vec![shift, wrap, ortho, cuntz])
}

/// `S~_j = z^{j-1} S_1^k` for `j = 1..n^k` inside `C^*(z, S_1^k)`.
pub fn subalgebra_witness_power(alg: &Algebra, k: u32, max_generators: u64) -> Result<WitnessReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let count = (alg.n() as u64).checked_pow(k).filter(|&c| c <= max_generators).ok_or_else(|| {
        Error::BoundExceeded(format!("n^k = {}^{k} generators exceed the bound {max_generators}", alg.n()))
    })?;
    let s1k = alg.pow(&el(Monomial::s(1)), k);
    let gens: Vec<Element> =
        (0..count).map(|j| alg.mul(&el(Monomial::z_power(j as i64)), &s1k)).collect();
    let m_k = (alg.m() as u64).pow(k);
    Ok(WitnessReport {
        m: alg.m(),
        n: alg.n(),
        k: k as u64,
        reduced_k: k as u64,
        generators: gens.len(),
        reduction: Vec::new(),
        l_table: Vec::new(),
        relations: relation_statuses(alg, &gens, &el(Monomial::z_power(1)), m_k)?,
    })
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            out.push(p);
            while x.is_multiple_of(p) {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

fn valuation(mut x: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    (e, x)
}

/// Removes from `k` every prime it shares with `n`, one conjugation
/// `S_1^* z^{a n} S_1 = z^{a m}` at a time, each verified in the algebra.
fn reduce_exponent(alg: &Algebra, k: u64) -> Result<(u64, Vec<ReductionStep>)> {
    let n = alg.n() as u64;
    let m = alg.m() as i64;
    let mut k = k;
    let mut steps = Vec::new();
    for p in prime_factors(k.gcd(&n)) {
        let (beta, _) = valuation(n, p);
        loop {
            let (alpha, rest) = valuation(k, p);
            if alpha == 0 {
                break;
            }
            let a = if alpha > beta { p.pow(alpha - beta) * rest } else { rest };
            let an = (a * n) as i64;
            let lhs = alg.normalize(&[Monomial::s_star(1), Monomial::z_power(an), Monomial::s(1)]);
            let ok = (a * n).is_multiple_of(k)
                && lhs.is_some_and(|x| alg.equal(&el(x), &el(Monomial::z_power(a as i64 * m))).unwrap_or(false));
            steps.push(ReductionStep { k_before: k, a, k_after: a, verified: ok });
            k = a;
        }
    }
    Ok((k, steps))
}

/// `S~_q = z^{(q-1) k} S_1` for `q = 1..n` inside `C^*(z^k, S_1)`, after
/// reducing `k` to be coprime to `n`.
pub fn subalgebra_witness_zk(alg: &Algebra, k: u64, max_exponent: u64) -> Result<WitnessReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let n = alg.n() as u64;
    if k.checked_mul(n).is_none_or(|e| e > max_exponent) {
        return Err(Error::BoundExceeded(format!("exponent k n = {k} * {n} exceeds the bound {max_exponent}")));
    }
    let (kr, reduction) = reduce_exponent(alg, k)?;
    let gens: Vec<Element> =
        (0..n).map(|q| el(alg.normalize(&[Monomial::z_power((q * kr) as i64), Monomial::s(1)]).unwrap())).collect();
    let l_table: Vec<(u64, i64)> = (0..n).map(|q| ((q * kr) % n, ((q * kr) / n) as i64)).collect();
    let mut relations = relation_statuses(alg, &gens, &el(Monomial::z_power(kr as i64)), alg.m() as u64)?;
    let mut ls: Vec<u64> = l_table.iter().map(|&(l, _)| l).collect();
    ls.sort_unstable();
    relations.push(RelationStatus {
        relation: "l_q is a permutation of Z_n".into(),
        instances: 1,
        failures: usize::from(ls != (0..n).collect::<Vec<_>>()),
    });
    Ok(WitnessReport {
        m: alg.m(),
        n: alg.n(),
        k,
        reduced_k: kr,
        generators: gens.len(),
        reduction,
        l_table,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_witnesses() {
        let alg = Algebra::new(2, 3).unwrap();
        let r = subalgebra_witness_power(&alg, 2, 81).unwrap();
        assert_eq!(r.generators, 9);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.relations[1].relation, "w S~_9 = S~_1 w^4");
        let r = subalgebra_witness_power(&Algebra::new(1, 2).unwrap(), 2, 81).unwrap();
        assert!(r.passed());
        assert!(subalgebra_witness_power(&alg, 5, 81).is_err());
    }

    #[test]
    fn power_one_is_the_defining_relations() {
        let alg = Algebra::new(3, 4).unwrap();
        assert!(subalgebra_witness_power(&alg, 1, 81).unwrap().passed());
    }

    #[test]
    fn zk_tables() {
        let r = subalgebra_witness_zk(&Algebra::new(1, 2).unwrap(), 3, 1000).unwrap();
        assert_eq!(r.l_table.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1]);
        assert!(r.passed());
        let r = subalgebra_witness_zk(&Algebra::new(2, 3).unwrap(), 2, 1000).unwrap();
        assert_eq!(r.l_table.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 2, 1]);
        assert!(r.passed());
    }

    #[test]
    fn shared_primes_are_reduced() {
        let alg = Algebra::new(1, 4).unwrap();
        let r = subalgebra_witness_zk(&alg, 24, 1000).unwrap();
        assert_eq!(r.reduced_k, 3);
        assert!(!r.reduction.is_empty());
        assert!(r.passed(), "{r:?}");
        let alg = Algebra::new(5, 6).unwrap();
        let r = subalgebra_witness_zk(&alg, 10, 1000).unwrap();
        assert_eq!(r.reduced_k, 5);
        assert!(r.passed());
    }
}
