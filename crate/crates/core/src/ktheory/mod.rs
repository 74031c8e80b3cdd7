//! K-groups of `O_(m,n)(T)` and of its Z_2 fixed-point algebra, read off
//! from cokernels and kernels of integer (or localized integer) maps.

pub mod group;
pub mod oracle;
pub mod snf;

pub use group::FgAbelianGroup;
pub use snf::{smith_normal_form, IntMatrix, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::AlgebraParams;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KGroups {
    #[serde(rename = "K0")]
    pub k0: FgAbelianGroup,
    #[serde(rename = "K1")]
    pub k1: FgAbelianGroup,
}

/// A cyclic summand of a cokernel: the class of `vector`, of order `order`
/// (`None` when it generates a free summand).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub vector: Vec<i64>,
    pub order: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbelianGroup,
    pub generators: Vec<Generator>,
    snf: Snf,
}

fn small(x: &BigInt) -> i64 {
    i64::try_from(x).expect("entry fits in i64")
}

impl Cokernel {
    /// Order of the class of `v` in `Z^rows / im M`; `None` if infinite.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        let w = self.snf.u.apply(v);
        let d = self.snf.diagonal();
        let mut order = BigInt::one();
        for (i, wi) in w.iter().enumerate() {
            let di = d.get(i).cloned().unwrap_or_else(BigInt::zero);
            if di.is_zero() {
                if !wi.is_zero() {
                    return None;
                }
            } else {
                order = order.lcm(&(&di / di.gcd(wi)));
            }
        }
        Some(order)
    }
}

/// `Z^rows / M Z^cols`, with one generator per nontrivial invariant factor:
/// the columns of `U^{-1}` where `U M V = D`.
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(m);
    let d = snf.diagonal();
    let mut orders = Vec::new();
    let mut generators = Vec::new();
    for i in 0..m.rows() {
        let di = d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_one() {
            continue;
        }
        orders.push(di.clone());
        generators.push(Generator {
            vector: snf.u_inv.column(i).iter().map(small).collect(),
            order: if di.is_zero() { None } else { Some(u64::try_from(&di).expect("small order")) },
        });
    }
    Cokernel { group: FgAbelianGroup::from_orders(0, &orders), generators, snf }
}

/// The kernel of `M` on `Z^cols`: free, spanned by the trailing columns of `V`.
pub fn kernel(m: &IntMatrix) -> (FgAbelianGroup, Vec<Vec<i64>>) {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let basis = (rank..m.cols()).map(|j| snf.v.column(j).iter().map(small).collect()).collect();
    (FgAbelianGroup::free(m.cols() - rank), basis)
}

fn scalar(c: i64) -> IntMatrix {
    IntMatrix::from_i64(&[vec![c]]).expect("1x1")
}

/// Six-term sequence of the Cuntz-Pimsner algebra over `C(T)`: the bimodule
/// acts as multiplication by `n` on `K_0(C(T)) = Z` and by `m` on `K_1`.
/// Both kernels are subgroups of `Z`, hence free, so the extensions split.
pub fn six_term_kgroups(m: u32, n: u32) -> Result<KGroups> {
    AlgebraParams::new(m, n)?;
    let (m, n) = (m as i64, n as i64);
    let (ker_m, _) = kernel(&scalar(1 - m));
    let (ker_n, _) = kernel(&scalar(1 - n));
    assert!(ker_m.torsion.is_empty() && ker_n.torsion.is_empty(), "kernel with torsion");
    Ok(KGroups {
        k0: cokernel(&scalar(1 - n)).group.direct_sum(&ker_m),
        k1: cokernel(&scalar(1 - m)).group.direct_sum(&ker_n),
    })
}

/// `x -> (1 - c) x` on `Z[1/d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizedMap {
    pub d: u64,
    pub c: i64,
}

/// `|a|` with every prime factor shared with `d` divided out.
pub fn strip_primes(a: u64, d: u64) -> u64 {
    let mut a = a;
    loop {
        let g = a.gcd(&d);
        if g == 1 {
            return a;
        }
        a /= g;
    }
}

pub fn localized_coker_ker(map: LocalizedMap) -> Result<(FgAbelianGroup, FgAbelianGroup)> {
    if map.d == 0 {
        return Err(Error::InvalidInput("localization denominator must be positive".into()));
    }
    let a = (1 - map.c).unsigned_abs();
    if a == 0 {
        return Ok((FgAbelianGroup::localized(map.d), FgAbelianGroup::localized(map.d)));
    }
    Ok((FgAbelianGroup::cyclic(strip_primes(a, map.d)), FgAbelianGroup::trivial()))
}

/// The same groups from the Pimsner-Voiculescu sequence of the dual gauge
/// action: the fixed-point algebra has `K_0 = Z[1/n]`, `K_1 = Z[1/m]`, and the
/// generator acts as multiplication by `n` and `m` respectively. For
/// `n = 1` the same splice still applies, with `Z[1/1] = Z`.
pub fn pv_dual_action_kgroups(m: u32, n: u32) -> Result<KGroups> {
    AlgebraParams::new(m, n)?;
    let (ck0, kk0) = localized_coker_ker(LocalizedMap { d: n as u64, c: n as i64 })?;
    let (ck1, kk1) = localized_coker_ker(LocalizedMap { d: m as u64, c: m as i64 })?;
    Ok(KGroups { k0: ck0.direct_sum(&kk1), k1: ck1.direct_sum(&kk0) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            _ => Err(Error::Parse(format!("parity must be odd or even, got {s}"))),
        }
    }
}

impl Parity {
    pub fn of(m: u32) -> Self {
        if m.is_multiple_of(2) { Parity::Even } else { Parity::Odd }
    }
}

/// The bimodule map on `K_0(C(T) ⋊ Z_2) = Z^3` with basis
/// `e_0 = [1]`, `e_1 = [(1 + w)/2]`, `e_2 = [(1 + w z)/2]`: `e_0 -> n e_0`,
/// `e_1 -> e_1 + (n - 1) x`, `e_2 -> n x` where `x = e_1` for even `m` and
/// `x = e_2` for odd `m`.
pub fn fixed_point_bimodule_map(parity: Parity, n: u32) -> IntMatrix {
    let n = n as i64;
    let x = match parity {
        Parity::Even => [0, 1, 0],
        Parity::Odd => [0, 0, 1],
    };
    let cols = [[n, 0, 0], [0, 1 + (n - 1) * x[1], (n - 1) * x[2]], [0, n * x[1], n * x[2]]];
    let rows: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| cols[j][i]).collect()).collect();
    IntMatrix::from_i64(&rows).expect("3x3")
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisClass {
    pub name: &'static str,
    pub order: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointKReport {
    pub parity: Parity,
    pub n: u32,
    /// `I - [Y]_0`, row-major.
    pub matrix: Vec<Vec<i64>>,
    pub invariant_factors: Vec<i64>,
    #[serde(rename = "K0")]
    pub k0: FgAbelianGroup,
    #[serde(rename = "K1")]
    pub k1: FgAbelianGroup,
    pub generators: Vec<Generator>,
    pub kernel_basis: Vec<Vec<i64>>,
    /// Orders of `e_0, e_1, e_2` in `K_0`.
    pub basis_orders: Vec<BasisClass>,
    pub reference_k0: FgAbelianGroup,
    pub reference_k1: FgAbelianGroup,
    pub agrees_with_reference: bool,
    pub flag: Option<String>,
}

/// `K_0 = coker(I - [Y]_0)`, `K_1 = ker(I - [Y]_0)` for the crossed product by
/// the symmetry, compared with the reference answer.
pub fn crossed_product_kgroups(parity: Parity, n: u32) -> Result<FixedPointKReport> {
    if n < 2 {
        return Err(Error::InvalidInput("n must be at least 2".into()));
    }
    let y = fixed_point_bimodule_map(parity, n);
    let rows: Vec<Vec<i64>> =
        (0..3).map(|i| (0..3).map(|j| i64::from(i == j) - small(y.get(i, j))).collect()).collect();
    let m = IntMatrix::from_i64(&rows)?;
    let coker = cokernel(&m);
    let (k1, kernel_basis) = kernel(&m);
    let names = ["e_0", "e_1", "e_2"];
    let basis_orders = (0..3)
        .map(|i| {
            let mut e = vec![BigInt::zero(); 3];
            e[i] = BigInt::one();
            BasisClass { name: names[i], order: coker.order_of(&e).map(|o| u64::try_from(&o).expect("small")) }
        })
        .collect();
    let nm1 = FgAbelianGroup::cyclic(n - 1);
    let (reference_k0, reference_k1) = match parity {
        Parity::Odd => (FgAbelianGroup::free(1).direct_sum(&nm1).direct_sum(&nm1), FgAbelianGroup::free(1)),
        Parity::Even => (nm1, FgAbelianGroup::trivial()),
    };
    let agrees = coker.group == reference_k0 && k1 == reference_k1;
    let flag = (!agrees).then(|| {
        format!(
            "cokernel of I - [Y]_0 is {} and kernel is {}, but the reference groups are K_0 = {}, K_1 = {}",
            coker.group, k1, reference_k0, reference_k1
        )
    });
    Ok(FixedPointKReport {
        parity,
        n,
        matrix: rows,
        invariant_factors: coker.snf.diagonal().iter().map(small).collect(),
        k0: coker.group.clone(),
        k1,
        generators: coker.generators.clone(),
        kernel_basis,
        basis_orders,
        reference_k0,
        reference_k1,
        agrees_with_reference: agrees,
        flag,
    })
}

/// `U M V = D` recomputed for the matrix behind a fixed-point report.
pub fn snf_consistent(m: &IntMatrix) -> bool {
    let s = smith_normal_form(m);
    let d = s.diagonal();
    let chain = d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) });
    s.d.is_diagonal()
        && d.iter().all(|x| !x.is_negative())
        && chain
        && s.u.mul(m).and_then(|um| um.mul(&s.v)).is_ok_and(|umv| umv == s.d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, torsion: &[u64]) -> FgAbelianGroup {
        let orders: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        FgAbelianGroup::from_orders(free, &orders)
    }

    #[test]
    fn reference_examples() {
        for n in 2..=12 {
            let k = six_term_kgroups(1, n).unwrap();
            assert_eq!(k.k0, g(1, &[n as u64 - 1]));
            assert_eq!(k.k1, g(1, &[]));
            let k = six_term_kgroups(n, 1).unwrap();
            assert_eq!(k.k0, g(1, &[]));
            assert_eq!(k.k1, g(1, &[n as u64 - 1]));
        }
        let k = six_term_kgroups(2, 3).unwrap();
        assert_eq!((k.k0, k.k1), (g(0, &[2]), g(0, &[])));
        assert!(six_term_kgroups(2, 4).is_err());
    }

    #[test]
    fn dual_action_agrees() {
        for m in 1..=12 {
            for n in 1..=12 {
                if m.gcd(&n) == 1 {
                    assert_eq!(six_term_kgroups(m, n).unwrap(), pv_dual_action_kgroups(m, n).unwrap(), "({m},{n})");
                }
            }
        }
    }

    #[test]
    fn localized_examples() {
        let (c, k) = localized_coker_ker(LocalizedMap { d: 2, c: 5 }).unwrap();
        assert!(c.is_trivial() && k.is_trivial());
        let (c, k) = localized_coker_ker(LocalizedMap { d: 3, c: 1 }).unwrap();
        assert_eq!(c.localized, vec![3]);
        assert_eq!(k.localized, vec![3]);
        let (c, _) = localized_coker_ker(LocalizedMap { d: 6, c: 7 }).unwrap();
        assert!(c.is_trivial());
        let (c, _) = localized_coker_ker(LocalizedMap { d: 2, c: -11 }).unwrap();
        assert_eq!(c, g(0, &[3]));
    }

    #[test]
    fn fixed_point_odd() {
        for n in 2..=10 {
            let r = crossed_product_kgroups(Parity::Odd, n).unwrap();
            assert!(r.agrees_with_reference, "{:?}", r.flag);
            let orders: Vec<Option<u64>> = r.basis_orders.iter().map(|b| b.order).collect();
            assert_eq!(orders, vec![Some(n as u64 - 1), None, Some(n as u64 - 1)]);
        }
    }

    #[test]
    fn fixed_point_even_is_flagged() {
        let r = crossed_product_kgroups(Parity::Even, 4).unwrap();
        assert_eq!(r.matrix, vec![vec![-3, 0, 0], vec![0, -3, -4], vec![0, 0, 1]]);
        assert_eq!(r.k0, g(0, &[3, 3]));
        assert!(r.k1.is_trivial());
        assert!(!r.agrees_with_reference);
        assert!(r.flag.is_some());
        assert_eq!(r.basis_orders[0].order, Some(3));
    }

    #[test]
    fn generators_have_their_orders() {
        for parity in [Parity::Odd, Parity::Even] {
            let y = fixed_point_bimodule_map(parity, 5);
            let rows: Vec<Vec<i64>> =
                (0..3).map(|i| (0..3).map(|j| i64::from(i == j) - small(y.get(i, j))).collect()).collect();
            let m = IntMatrix::from_i64(&rows).unwrap();
            let c = cokernel(&m);
            for gen in &c.generators {
                let v: Vec<BigInt> = gen.vector.iter().map(|&x| BigInt::from(x)).collect();
                assert_eq!(c.order_of(&v).map(|o| u64::try_from(&o).unwrap()), gen.order);
            }
        }
    }
}
