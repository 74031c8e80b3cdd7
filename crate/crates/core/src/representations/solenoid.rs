//! Periodic points of the shift on the solenoid
//! `S_m = {(x_i) in T^N : x_{i+1}^m = x_i}` and the finite-dimensional
//! covariant representations they induce.
//!
//! A point of period `k` has coordinates `x_i = exp(2 pi i c_i / M)` with
//! `M = m^k - 1`, `c_i = r m^{(k-1) i} mod M`. The shift `σ(x)_i = x_{i+1}`
//! acts on residues as `r -> r m^{k-1}`. Everything below is modular
//! arithmetic; phases live in `Q/Z`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{format_rational, rat};

/// Largest modulus `m^k - 1` enumerated.
pub const MAX_MODULUS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolenoidPeriodicPoint {
    pub m: u64,
    pub period: u32,
    pub residue: u64,
}

fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let (mut b, mut e, mut acc) = ((base % modulus) as u128, exp, 1u128);
    let md = modulus as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % md;
        }
        b = b * b % md;
        e >>= 1;
    }
    acc as u64
}

pub fn modulus(m: u64, k: u32) -> Result<u64> {
    m.checked_pow(k)
        .map(|p| p - 1)
        .filter(|&p| p <= MAX_MODULUS)
        .ok_or_else(|| Error::BoundExceeded(format!("{m}^{k} - 1 exceeds {MAX_MODULUS}")))
}

impl SolenoidPeriodicPoint {
    pub fn modulus(&self) -> u64 {
        self.m.pow(self.period) - 1
    }

    /// `c_i`, the numerator of the `i`-th coordinate's phase.
    pub fn coordinate(&self, i: u64) -> u64 {
        let md = self.modulus();
        if md == 1 {
            return 0;
        }
        let step = pow_mod(self.m, self.period as u64 - 1, md);
        (self.residue as u128 * pow_mod(step, i, md) as u128 % md as u128) as u64
    }

    /// `σ^j(x)` for any integer `j`.
    pub fn shifted(&self, j: i64) -> SolenoidPeriodicPoint {
        let md = self.modulus();
        let j = j.rem_euclid(self.period as i64) as u64;
        let step = pow_mod(self.m, self.period as u64 - 1, md);
        let residue = if md == 1 { 0 } else { (self.residue as u128 * pow_mod(step, j, md) as u128 % md as u128) as u64 };
        SolenoidPeriodicPoint { residue, ..self.clone() }
    }

    /// Checks `m c_{i+1} = c_i` and `c_{i+k} = c_i` for the first few `i`.
    pub fn is_consistent(&self) -> bool {
        let md = self.modulus();
        (0..2 * self.period as u64).all(|i| {
            let ci = self.coordinate(i);
            let next = self.coordinate(i + 1);
            (self.m as u128 * next as u128 % md.max(1) as u128) as u64 == ci % md.max(1)
                && self.coordinate(i + self.period as u64) == ci
        })
    }
}

/// Least `l >= 1` with `σ^l(r) = r`, for a residue mod `m^k - 1`.
fn orbit_period(m: u64, k: u32, r: u64) -> u32 {
    let md = m.pow(k) - 1;
    if md == 1 {
        return 1;
    }
    let step = pow_mod(m, k as u64 - 1, md);
    let mut cur = r;
    for l in 1..=k {
        cur = (cur as u128 * step as u128 % md as u128) as u64;
        if cur == r {
            return l;
        }
    }
    unreachable!("σ^k is the identity on residues mod m^k - 1")
}

/// `Per_k(σ)` as residues mod `m^k - 1`, in increasing order.
pub fn solenoid_periodic_points(m: u64, k: u32) -> Result<Vec<SolenoidPeriodicPoint>> {
    if m < 2 || k < 1 {
        return Err(Error::InvalidInput(format!("need m >= 2 and k >= 1, got m = {m}, k = {k}")));
    }
    let md = modulus(m, k)?;
    Ok((0..md)
        .filter(|&r| orbit_period(m, k, r) == k)
        .map(|r| SolenoidPeriodicPoint { m, period: k, residue: r })
        .collect())
}

/// Splits a list of exact-period-`k` points into σ-orbits.
pub fn orbits(points: &[SolenoidPeriodicPoint]) -> Vec<Vec<SolenoidPeriodicPoint>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in points {
        if seen.contains(&p.residue) {
            continue;
        }
        let orbit: Vec<SolenoidPeriodicPoint> = (0..p.period as i64).map(|j| p.shifted(j)).collect();
        for q in &orbit {
            seen.insert(q.residue);
        }
        out.push(orbit);
    }
    out
}

/// `prod_i x_i^{a_i}` over finitely many coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LaurentMonomial {
    pub exponents: Vec<(u64, i64)>,
}

impl LaurentMonomial {
    pub fn new(exponents: Vec<(u64, i64)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(i, _) in &exponents {
            if !seen.insert(i) {
                return Err(Error::InvalidInput(format!("coordinate x_{i} listed twice")));
            }
        }
        Ok(LaurentMonomial { exponents })
    }

    pub fn coordinate(i: u64, e: i64) -> Self {
        LaurentMonomial { exponents: vec![(i, e)] }
    }

    /// `f(x)` as a phase in `[0, 1)`.
    pub fn phase_at(&self, x: &SolenoidPeriodicPoint) -> BigRational {
        let md = x.modulus() as i64;
        let mut num: i128 = 0;
        for &(i, a) in &self.exponents {
            num += a as i128 * x.coordinate(i) as i128;
        }
        frac(&rat((num.rem_euclid(md as i128)) as i64, md))
    }
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// A `k x k` matrix with exactly one unimodular entry per column: column `j`
/// is `exp(2 pi i phase[j]) e_{perm[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub phase: Vec<BigRational>,
}

impl MonomialMatrix {
    pub fn identity(k: usize) -> Self {
        MonomialMatrix { perm: (0..k).collect(), phase: vec![BigRational::zero(); k] }
    }

    pub fn diagonal(phase: Vec<BigRational>) -> Self {
        MonomialMatrix { perm: (0..phase.len()).collect(), phase: phase.iter().map(frac).collect() }
    }

    pub fn mul(&self, rhs: &MonomialMatrix) -> MonomialMatrix {
        let perm = rhs.perm.iter().map(|&p| self.perm[p]).collect();
        let phase = rhs.phase.iter().zip(&rhs.perm).map(|(t, &p)| frac(&(t + &self.phase[p]))).collect();
        MonomialMatrix { perm, phase }
    }

    pub fn adjoint(&self) -> MonomialMatrix {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut phase = vec![BigRational::zero(); k];
        for j in 0..k {
            perm[self.perm[j]] = j;
            phase[self.perm[j]] = frac(&-&self.phase[j]);
        }
        MonomialMatrix { perm, phase }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let k = self.perm.len();
        let mut out = vec![vec![Complex64::zero(); k]; k];
        for j in 0..k {
            out[self.perm[j]][j] = phase_to_complex(to_f64(&self.phase[j]));
        }
        out
    }
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn phase_to_complex(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * t)
}

/// `ρ_x(f) = diag(f(x), f(σ x), ..., f(σ^{k-1} x))`, pulled back along `σ^shift`.
pub fn rho(point: &SolenoidPeriodicPoint, f: &LaurentMonomial, shift: i64) -> MonomialMatrix {
    MonomialMatrix::diagonal((0..point.period as i64).map(|j| f.phase_at(&point.shifted(j + shift))).collect())
}

/// The cyclic unitary with `z` in the top-right corner.
pub fn corner_unitary(k: usize, z_phase: &BigRational) -> MonomialMatrix {
    let mut u = MonomialMatrix { perm: (0..k).map(|j| (j + 1) % k).collect(), phase: vec![BigRational::zero(); k] };
    u.phase[k - 1] = frac(z_phase);
    u
}

#[derive(Clone, Debug)]
pub enum ZPhase {
    /// `z = exp(2 pi i q)`, a root of unity: exact arithmetic.
    Rational(BigRational),
    /// `z = exp(2 pi i t)`: double precision.
    Float(f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct SolenoidRepReport {
    pub m: u64,
    pub period: u32,
    pub residue: u64,
    pub exact: bool,
    pub unitary: bool,
    /// `u ρ(f) u^* = ρ(f ∘ σ^{-1})`.
    pub covariant_inverse: bool,
    /// `u ρ(f) u^* = ρ(f ∘ σ)`.
    pub covariant_forward: bool,
    pub residual: f64,
    pub diagonal: Vec<String>,
}

impl SolenoidRepReport {
    pub fn passed(&self) -> bool {
        self.unitary && self.covariant_inverse && if self.exact { self.residual == 0.0 } else { self.residual < 1e-12 }
    }
}

fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn dense_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn dense_adjoint(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| a[j][i].conj()).collect()).collect()
}

/// Builds `ρ_x(f)` and `u_{x,z}` and checks unitarity and covariance in both
/// orientations.
pub fn solenoid_rep_check(point: &SolenoidPeriodicPoint, z: &ZPhase, f: &LaurentMonomial) -> SolenoidRepReport {
    let k = point.period as usize;
    let rho_f = rho(point, f, 0);
    let diagonal = rho_f.phase.iter().map(format_rational).collect();
    let base = SolenoidRepReport {
        m: point.m,
        period: point.period,
        residue: point.residue,
        exact: matches!(z, ZPhase::Rational(_)),
        unitary: false,
        covariant_inverse: false,
        covariant_forward: false,
        residual: f64::INFINITY,
        diagonal,
    };
    match z {
        ZPhase::Rational(q) => {
            let u = corner_unitary(k, q);
            let conj = u.mul(&rho_f).mul(&u.adjoint());
            let inverse = conj == rho(point, f, -1);
            SolenoidRepReport {
                unitary: u.mul(&u.adjoint()) == MonomialMatrix::identity(k),
                covariant_inverse: inverse,
                covariant_forward: conj == rho(point, f, 1),
                residual: if inverse { 0.0 } else { 1.0 },
                ..base
            }
        }
        ZPhase::Float(t) => {
            let mut u = corner_unitary(k, &BigRational::zero()).to_dense();
            u[0][k - 1] = phase_to_complex(*t);
            let ua = dense_adjoint(&u);
            let conj = dense_mul(&dense_mul(&u, &rho_f.to_dense()), &ua);
            let eye = MonomialMatrix::identity(k).to_dense();
            let unit_res = max_diff(&dense_mul(&u, &ua), &eye);
            let inv_res = max_diff(&conj, &rho(point, f, -1).to_dense());
            let fwd_res = max_diff(&conj, &rho(point, f, 1).to_dense());
            SolenoidRepReport {
                unitary: unit_res < 1e-12,
                covariant_inverse: inv_res < 1e-12,
                covariant_forward: fwd_res < 1e-12,
                residual: inv_res,
                ..base
            }
        }
    }
}

/// A periodic point of period `k` at which `ρ_x` tells `f` and `g` apart.
pub fn separating_point(m: u64, k: u32, f: &LaurentMonomial, g: &LaurentMonomial) -> Result<Option<SolenoidPeriodicPoint>> {
    Ok(solenoid_periodic_points(m, k)?
        .into_iter()
        .find(|x| rho(x, f, 0) != rho(x, g, 0)))
}

/// The Möbius count `sum_{d | k} μ(k/d) (m^d - 1)` of exact-period points.
pub fn mobius_count(m: u64, k: u32) -> i64 {
    fn mobius(mut n: u32) -> i64 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if n > 1 {
            res = -res;
        }
        res
    }
    (1..=k)
        .filter(|d| k.is_multiple_of(*d))
        .map(|d| mobius(k / d) * (m.pow(d) as i64 - 1))
        .sum()
}

/// Independent count: tuples `(c_0, ..., c_{k-1})` mod `M` with
/// `m c_{i+1} = c_i` cyclically, whose shift has exact period `k`.
pub fn brute_force_count(m: u64, k: u32) -> usize {
    let md = m.pow(k) - 1;
    let mut count = 0;
    for c0 in 0..md {
        // c_{i+1} is determined up to the kernel of multiplication by m,
        // which is trivial since gcd(m, M) = 1; search it directly.
        let mut tuple = vec![c0];
        for i in 0..k as usize - 1 {
            let next = (0..md).find(|&c| (m * c) % md == tuple[i] % md.max(1)).unwrap_or(0);
            tuple.push(next);
        }
        if md > 1 && (m * tuple[0]) % md != tuple[k as usize - 1] {
            continue;
        }
        let exact = (1..k).all(|l| (0..k as usize).any(|i| tuple[i] != tuple[(i + l as usize) % k as usize]));
        if exact {
            count += 1;
        }
    }
    count
}
