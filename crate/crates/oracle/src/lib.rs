//! Brute-force reference implementations, kept deliberately naive.
//!
//! Everything here recomputes its answer from the definitions by explicit
//! enumeration. The only things borrowed from the main crate are the
//! group and weight-system data types; none of its decision procedures
//! are called. Review checklist: any import of `oinfty_core::monoid`,
//! `::invariant` or `::classify` functions in this crate is a bug.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use oinfty_core::abelian::{GroupElem, GroupSpec};
use oinfty_core::monoid::WeightSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    WindowTooSmall,
    NotFinite,
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// All words over the letters `1..=alphabet` of length at most
/// `max_length`, each exactly once, the empty word included.
pub struct WordEnumerator {
    alphabet: usize,
    max_length: usize,
}

impl WordEnumerator {
    pub fn new(alphabet: usize, max_length: usize) -> Self {
        WordEnumerator { alphabet, max_length }
    }

    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.max_length {
            let mut next = Vec::new();
            for word in &level {
                for letter in 1..=self.alphabet {
                    let mut w = word.clone();
                    w.push(letter);
                    next.push(w);
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

/// The sum of the weights along a word of generator indices.
pub fn word_sum(w: &WeightSystem, word: &[usize]) -> GroupElem {
    let spec = w.spec();
    let mut acc = spec.zero();
    for &i in word {
        acc = spec.add(&acc, w.weight_at(i).expect("word letters start at 1"));
    }
    acc
}

fn in_window(spec: &GroupSpec, e: &GroupElem, window: i64) -> bool {
    let bound = BigInt::from(window);
    e.coords().iter().take(spec.free_rank()).all(|c| c.abs() <= bound)
}

/// Every sum of at most `bound` weight values, by direct multiset
/// expansion. On an infinite group the result is clipped to the
/// coordinate window `|c| <= window` on the free coordinates.
pub fn oracle_sg(w: &WeightSystem, bound: usize, window: i64) -> BTreeSet<GroupElem> {
    let spec = w.spec();
    let values: Vec<GroupElem> = w.distinct_values();
    let mut out = BTreeSet::new();
    let mut stack = vec![(spec.zero(), 0usize, 0usize)];
    while let Some((sum, next_value, used)) = stack.pop() {
        if next_value == values.len() {
            out.insert(sum);
            continue;
        }
        let mut acc = sum;
        let mut k = used;
        loop {
            stack.push((acc.clone(), next_value + 1, k));
            if k == bound {
                break;
            }
            acc = spec.add(&acc, &values[next_value]);
            k += 1;
        }
    }
    if spec.is_finite() {
        out
    } else {
        out.into_iter().filter(|e| in_window(spec, e, window)).collect()
    }
}

/// The boundary set of an explicit `X`, straight from the definition:
/// keep the points of `X` that no translate `X + value` reaches, then
/// add every tail translate of `X`.
///
/// With a window the input must be the full restriction of the intended
/// set to `|c| <= window`; the difference part is only trustworthy when
/// every potential preimage `e - value` still lies inside the window.
pub fn oracle_h_set(
    x: &BTreeSet<GroupElem>,
    w: &WeightSystem,
    window: Option<i64>,
) -> Result<BTreeSet<GroupElem>> {
    let spec = w.spec();
    if window.is_none() && !spec.is_finite() {
        return Err(OracleError::NotFinite);
    }
    if let Some(b) = window {
        for e in x {
            if !in_window(spec, e, b) {
                return Err(OracleError::WindowTooSmall);
            }
            for v in w.distinct_values() {
                if !in_window(spec, &spec.sub(e, &v), b) {
                    return Err(OracleError::WindowTooSmall);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for e in x {
        let reached = w.distinct_values().iter().any(|v| x.contains(&spec.sub(e, v)));
        if !reached {
            out.insert(e.clone());
        }
    }
    for e in x {
        for t in w.tail_values() {
            out.insert(spec.add(e, &t));
        }
    }
    Ok(out)
}

fn all_elems(spec: &GroupSpec) -> Result<Vec<GroupElem>> {
    if !spec.is_finite() {
        return Err(OracleError::NotFinite);
    }
    let mut coords: Vec<Vec<BigInt>> = vec![Vec::new()];
    for n in spec.torsion() {
        let n = n.to_u64().expect("oracle groups are tiny");
        let mut next = Vec::new();
        for c in &coords {
            for r in 0..n {
                let mut c = c.clone();
                c.push(BigInt::from(r));
                next.push(c);
            }
        }
        coords = next;
    }
    Ok(coords.into_iter().map(|c| spec.elem(c).expect("valid coordinates")).collect())
}

fn translate(spec: &GroupSpec, x: &BTreeSet<GroupElem>, v: &GroupElem) -> BTreeSet<GroupElem> {
    x.iter().map(|e| spec.add(e, v)).collect()
}

fn is_invariant(w: &WeightSystem, x: &BTreeSet<GroupElem>) -> bool {
    let spec = w.spec();
    w.distinct_values().iter().all(|v| translate(spec, x, v).is_subset(x))
}

/// Every invariant subset of a finite group, by scanning all subsets.
pub fn oracle_invariant_sets(w: &WeightSystem) -> Result<Vec<BTreeSet<GroupElem>>> {
    let elems = all_elems(w.spec())?;
    assert!(elems.len() <= 12, "oracle enumeration is for tiny groups");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << elems.len()) {
        let x: BTreeSet<GroupElem> = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        if is_invariant(w, &x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Definitional primeness: whenever a union of two family members covers
/// `x`, one of them already does.
pub fn oracle_prime(x: &BTreeSet<GroupElem>, all_invariant_sets: &[BTreeSet<GroupElem>]) -> bool {
    for a in all_invariant_sets {
        for b in all_invariant_sets {
            let union: BTreeSet<GroupElem> = a.union(b).cloned().collect();
            if x.is_subset(&union) && !x.is_subset(a) && !x.is_subset(b) {
                return false;
            }
        }
    }
    true
}

/// Every pair of invariant sets with `H_X` inside the smaller and the
/// smaller inside `X`, filtered straight from the definition.
pub fn oracle_pairs(
    w: &WeightSystem,
) -> Result<Vec<(BTreeSet<GroupElem>, BTreeSet<GroupElem>)>> {
    let family = oracle_invariant_sets(w)?;
    let mut out = Vec::new();
    for x in &family {
        let h = oracle_h_set(x, w, None)?;
        for xinf in &family {
            if h.is_subset(xinf) && xinf.is_subset(x) {
                out.push((x.clone(), xinf.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(spec: &GroupSpec, prefix: &[&[i64]], tail: &[&[i64]]) -> WeightSystem {
        let p = prefix.iter().map(|c| spec.elem_i64(c).unwrap()).collect();
        let t = tail.iter().map(|c| spec.elem_i64(c).unwrap()).collect();
        WeightSystem::new(spec.clone(), p, t).unwrap()
    }

    fn ints(spec: &GroupSpec, ks: &[i64]) -> BTreeSet<GroupElem> {
        ks.iter().map(|&k| spec.elem_i64(&[k]).unwrap()).collect()
    }

    #[test]
    fn word_enumeration_is_exhaustive_and_duplicate_free() {
        let en = WordEnumerator::new(3, 4);
        let words = en.words();
        let expected: usize = (0..=4).map(|k| 3usize.pow(k)).sum();
        assert_eq!(words.len(), expected);
        let distinct: BTreeSet<Vec<usize>> = words.iter().cloned().collect();
        assert_eq!(distinct.len(), expected);
        assert!(words.contains(&Vec::new()));
    }

    #[test]
    fn word_sums_agree_with_multiset_expansion() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[&[2]], &[&[3]]);
        let by_words: BTreeSet<GroupElem> = WordEnumerator::new(2, 4)
            .words()
            .iter()
            .map(|word| word_sum(&w, word))
            .collect();
        assert_eq!(by_words, oracle_sg(&w, 4, 100));
    }

    #[test]
    fn sums_on_the_line() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[1]]);
        assert_eq!(oracle_sg(&w, 3, 100), ints(&z, &[0, 1, 2, 3]));
        assert_eq!(oracle_sg(&w, 0, 100), ints(&z, &[0]));

        let w = system(&z, &[], &[&[2], &[3]]);
        assert_eq!(
            oracle_sg(&w, 4, 100),
            ints(&z, &[0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12])
        );
    }

    #[test]
    fn sums_stabilize_on_finite_groups() {
        for (spec, prefix, tail) in [
            (GroupSpec::new(0, vec![4]).unwrap(), vec![], vec![vec![2i64]]),
            (GroupSpec::new(0, vec![6]).unwrap(), vec![vec![3i64]], vec![vec![2]]),
            (GroupSpec::new(0, vec![2, 4]).unwrap(), vec![], vec![vec![1, 1], vec![0, 2]]),
        ] {
            let p: Vec<&[i64]> = prefix.iter().map(|v| v.as_slice()).collect();
            let t: Vec<&[i64]> = tail.iter().map(|v| v.as_slice()).collect();
            let w = system(&spec, &p, &t);
            let order = spec.order().unwrap().to_u64().unwrap() as usize;
            assert_eq!(oracle_sg(&w, order, 0), oracle_sg(&w, 2 * order, 0));
        }
    }

    #[test]
    fn boundary_of_the_half_line() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[1]]);
        let x = ints(&z, &(0..=10).collect::<Vec<_>>());
        let h = oracle_h_set(&x, &w, Some(12)).unwrap();
        assert_eq!(h, ints(&z, &(0..=11).collect::<Vec<_>>()));
    }

    #[test]
    fn boundary_with_prefix_keeps_the_isolated_base() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[&[2]], &[&[3]]);
        let mut xs = vec![0i64];
        xs.extend(2..=20);
        let x = ints(&z, &xs);
        let h = oracle_h_set(&x, &w, Some(25)).unwrap();
        let mut expect = vec![0i64, 3];
        expect.extend(5..=23);
        assert_eq!(h, ints(&z, &expect));
    }

    #[test]
    fn window_validation_rejects_clipped_preimages() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[1]]);
        let x = ints(&z, &[-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(oracle_h_set(&x, &w, Some(3)), Err(OracleError::WindowTooSmall));
        assert_eq!(oracle_h_set(&x, &w, None), Err(OracleError::NotFinite));
        assert_eq!(oracle_h_set(&ints(&z, &[5]), &w, Some(3)), Err(OracleError::WindowTooSmall));
    }

    #[test]
    fn pair_counts_on_small_cyclic_groups() {
        let z2 = GroupSpec::new(0, vec![2]).unwrap();
        assert_eq!(oracle_pairs(&system(&z2, &[], &[&[1]])).unwrap().len(), 2);
        let z3 = GroupSpec::new(0, vec![3]).unwrap();
        assert_eq!(oracle_pairs(&system(&z3, &[], &[&[1]])).unwrap().len(), 2);
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        assert_eq!(oracle_pairs(&system(&z4, &[], &[&[2]])).unwrap().len(), 4);
    }

    #[test]
    fn definitional_primeness_on_the_half_system() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w = system(&z4, &[], &[&[2]]);
        let family = oracle_invariant_sets(&w).unwrap();
        assert_eq!(family.len(), 4);
        let full = ints(&z4, &[0, 1, 2, 3]);
        let evens = ints(&z4, &[0, 2]);
        let odds = ints(&z4, &[1, 3]);
        assert!(!oracle_prime(&full, &family));
        assert!(oracle_prime(&evens, &family));
        assert!(oracle_prime(&odds, &family));
        assert!(oracle_prime(&BTreeSet::new(), &family));
    }
}
