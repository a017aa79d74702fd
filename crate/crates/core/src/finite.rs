//! Element indexing and bitset subsets for finite groups.
//!
//! Subsets of a finite group of order `N <= 64` are `u64` masks; bit `i`
//! stands for the element with mixed-radix index `i`. Translation by a fixed
//! element is a permutation of indices, precomputed once per weight.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::abelian::{GroupElem, GroupSpec};
use crate::error::{Error, Result};

/// Index table for all elements of a finite group.
#[derive(Clone, Debug)]
pub struct ElemTable {
    spec: GroupSpec,
    elems: Vec<GroupElem>,
    order: u64,
}

pub const MASK_CAP: u64 = 64;

impl ElemTable {
    /// Enumerates the whole group. `operation` labels errors; `limit` is the
    /// largest order accepted.
    pub fn new(spec: &GroupSpec, operation: &'static str, limit: u64) -> Result<Self> {
        if !spec.is_finite() {
            return Err(Error::NotFinite { operation, free_rank: spec.free_rank() });
        }
        let order_big = spec.order().expect("finite group has an order");
        let order = order_big.to_u64().unwrap_or(u64::MAX);
        if order > limit {
            return Err(Error::SizeLimit { order, limit });
        }
        let radices: Vec<u64> = spec
            .torsion()
            .iter()
            .map(|n| n.to_u64().expect("torsion factor fits after the order check"))
            .collect();
        let mut elems = Vec::with_capacity(order as usize);
        let mut digits = vec![0u64; radices.len()];
        loop {
            let coords = digits.iter().map(|d| BigInt::from(*d)).collect();
            elems.push(spec.elem(coords).expect("digits are reduced coordinates"));
            let mut pos = radices.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < radices[pos] {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|d| *d == 0) {
                break;
            }
        }
        debug_assert_eq!(elems.len() as u64, order);
        Ok(ElemTable { spec: spec.clone(), elems, order })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elems(&self) -> &[GroupElem] {
        &self.elems
    }

    pub fn elem(&self, idx: usize) -> &GroupElem {
        &self.elems[idx]
    }

    /// Mixed-radix index of a (reduced) element.
    pub fn index_of(&self, g: &GroupElem) -> usize {
        let mut idx: u64 = 0;
        for (j, n) in self.spec.torsion().iter().enumerate() {
            let digit = g.coords()[self.spec.free_rank() + j]
                .to_u64()
                .expect("reduced coordinate is a small nonnegative integer");
            idx = idx * n.to_u64().expect("small torsion factor") + digit;
        }
        idx as usize
    }

    /// Permutation of indices given by `x -> x + w`.
    pub fn translation(&self, w: &GroupElem) -> Vec<usize> {
        self.elems.iter().map(|x| self.index_of(&self.spec.add(x, w))).collect()
    }

    /// Checks that masks are usable for this group.
    pub fn supports_masks(&self) -> bool {
        self.order <= MASK_CAP
    }

    pub fn full_mask(&self) -> u64 {
        if self.order == MASK_CAP {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn mask_of(&self, elems: impl IntoIterator<Item = GroupElem>) -> u64 {
        let mut m = 0u64;
        for e in elems {
            m |= 1u64 << self.index_of(&e);
        }
        m
    }

    pub fn mask_elems(&self, mask: u64) -> Vec<GroupElem> {
        (0..self.order as usize).filter(|i| mask >> i & 1 == 1).map(|i| self.elems[i].clone()).collect()
    }
}

/// Image of a subset mask under a translation permutation.
pub fn translate_mask(mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1u64 << perm[i];
    }
    out
}

/// Saturation of `seed` under all the given translations.
pub fn saturate_mask(seed: u64, perms: &[Vec<usize>]) -> u64 {
    let mut cur = seed;
    loop {
        let mut next = cur;
        for p in perms {
            next |= translate_mask(cur, p);
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Upper bound used by operations that only need the group enumerated, not
/// the power set scanned.
pub const ENUMERATION_CAP: u64 = 1 << 20;

pub fn order_exceeds(spec: &GroupSpec, bound: u64) -> bool {
    match spec.order() {
        None => true,
        Some(n) => n > BigUint::from(bound),
    }
}

pub fn is_zero_big(x: &BigInt) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trips() {
        let g = GroupSpec::new(0, vec![2, 4]).unwrap();
        let table = ElemTable::new(&g, "test", 64).unwrap();
        assert_eq!(table.order(), 8);
        for (i, e) in table.elems().iter().enumerate() {
            assert_eq!(table.index_of(e), i);
        }
    }

    #[test]
    fn translation_is_a_permutation() {
        let g = GroupSpec::new(0, vec![6]).unwrap();
        let table = ElemTable::new(&g, "test", 64).unwrap();
        let perm = table.translation(&g.elem_i64(&[2]).unwrap());
        let mut seen = vec![false; 6];
        for p in perm {
            assert!(!seen[p]);
            seen[p] = true;
        }
    }

    #[test]
    fn saturation_reaches_the_generated_submonoid() {
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let table = ElemTable::new(&g, "test", 64).unwrap();
        let perm = table.translation(&g.elem_i64(&[2]).unwrap());
        let closure = saturate_mask(1, &[perm]);
        assert_eq!(closure, 0b0101);
    }

    #[test]
    fn infinite_group_is_rejected() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        assert!(matches!(
            ElemTable::new(&z, "test", 64),
            Err(Error::NotFinite { .. })
        ));
    }

    #[test]
    fn size_limit_is_enforced() {
        let g = GroupSpec::new(0, vec![30]).unwrap();
        assert!(matches!(
            ElemTable::new(&g, "test", 20),
            Err(Error::SizeLimit { order: 30, limit: 20 })
        ));
    }
}
