use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::snf::{smith_normal_form, IntMatrix};

/// `Z^free_rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_k}` with `1 < d_1 | d_2 | ... | d_k`,
/// plus optional summands `Z[1/d]` for `d > 1`, which are not finitely
/// generated and are only carried symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub localized: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, ..Self::default() }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        let order = order.into();
        if order.is_zero() {
            Self::free(1)
        } else {
            Self::from_orders(0, &[order])
        }
    }

    /// `Z[1/d]`; for `d = 1` this is just `Z`.
    pub fn localized(d: u64) -> Self {
        if d == 1 {
            Self::free(1)
        } else {
            FgAbelianGroup { localized: vec![d], ..Self::default() }
        }
    }

    /// Normalizes an arbitrary list of cyclic orders into invariant factors.
    pub fn from_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let snf = smith_normal_form(&IntMatrix::diagonal(orders));
        let mut free_rank = free_rank;
        let mut torsion = Vec::new();
        for d in snf.diagonal() {
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.push(d);
            }
        }
        FgAbelianGroup { free_rank, torsion, localized: Vec::new() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let mut g = Self::from_orders(self.free_rank + other.free_rank, &orders);
        g.localized = self.localized.iter().chain(&other.localized).copied().collect();
        g.localized.sort_unstable();
        g
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.localized.is_empty()
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.localized.is_empty()
    }

    /// `|Hom(G, Z_N)|` for a finitely generated group.
    pub fn hom_count(&self, modulus: u64) -> BigInt {
        let n = BigInt::from(modulus);
        let mut count = num_traits::pow(n.clone(), self.free_rank);
        for d in &self.torsion {
            count *= num_integer::gcd(d.clone(), n.clone());
        }
        count
    }
}

fn int_json(x: &BigInt) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.localized.is_empty() { 2 } else { 3 };
        let mut st = s.serialize_struct("FgAbelianGroup", fields)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &self.torsion.iter().map(int_json).collect::<Vec<_>>())?;
        if !self.localized.is_empty() {
            st.serialize_field("localized", &self.localized)?;
        }
        st.end()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.localized.iter().map(|d| format!("Z[1/{d}]")));
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factors() {
        let g = FgAbelianGroup::from_orders(0, &[BigInt::from(2), BigInt::from(3), BigInt::from(1)]);
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        let h = FgAbelianGroup::cyclic(2).direct_sum(&FgAbelianGroup::cyclic(4));
        assert_eq!(h.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(h.to_string(), "Z_2 + Z_4");
        assert_eq!(FgAbelianGroup::cyclic(1), FgAbelianGroup::trivial());
        assert_eq!(FgAbelianGroup::localized(1), FgAbelianGroup::free(1));
    }

    #[test]
    fn json_shape() {
        let g = FgAbelianGroup::free(1).direct_sum(&FgAbelianGroup::cyclic(2));
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"free_rank":1,"torsion":[2]}"#);
    }
}
