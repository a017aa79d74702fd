//! Invariant sets and pairs.
//!
//! A set `X` is invariant when `X + w ⊆ X` for every weight value `w`. The
//! boundary set `H_X` collects the points of `X` unreachable by translation
//! together with the translates along tail values; a pair `(X, Xinf)` with
//! `H_X ⊆ Xinf ⊆ X` is the combinatorial datum matching one gauge-invariant
//! ideal, ordered by reversed componentwise inclusion. On a finite group the
//! whole pair lattice is enumerable; on an infinite group the supported
//! representations are finite element lists and finite unions of semigroup
//! translates.

use std::collections::BTreeSet;

use crate::abelian::{quotient, subgroup_generated, GroupElem};
use crate::error::{Error, Result};
use crate::finite::{translate_mask, ElemTable, MASK_CAP};
use crate::monoid::{self, WeightSystem};
use crate::Options;

/// Largest finite group order that gets materialized into explicit element
/// sets during canonicalization.
const CANON_CAP: u64 = 1024;

/// Representation of a subset of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRepr {
    Empty,
    Full,
    /// Explicit element list.
    Finite(BTreeSet<GroupElem>),
    /// Union of translates `base + sg` over the listed base points.
    Principal(Vec<GroupElem>),
}

/// A subset of the group tagged with the weight system it is measured
/// against. Construction canonicalizes the representation (small finite
/// groups are materialized, principal base lists are minimized), so derived
/// equality is semantic on small finite groups. Invariance itself is checked
/// by [`InvariantSet::is_invariant`], not enforced at construction: the
/// `Empty`, `Full` and `Principal` variants are invariant by shape, explicit
/// finite sets may be arbitrary user input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    weights: WeightSystem,
    repr: SetRepr,
}

impl InvariantSet {
    pub fn empty(w: &WeightSystem) -> Self {
        InvariantSet { weights: w.clone(), repr: SetRepr::Empty }
    }

    pub fn full(w: &WeightSystem) -> Self {
        InvariantSet { weights: w.clone(), repr: SetRepr::Full }
    }

    pub fn from_elems(
        w: &WeightSystem,
        elems: impl IntoIterator<Item = GroupElem>,
        _opts: &Options,
    ) -> Result<Self> {
        let spec = w.spec();
        let mut set = BTreeSet::new();
        for e in elems {
            if e.coords().len() != spec.rank() {
                return Err(Error::Validation(format!(
                    "element {e} does not live in {}",
                    spec.describe()
                )));
            }
            set.insert(e);
        }
        Ok(InvariantSet { weights: w.clone(), repr: canonical_finite(w, set) })
    }

    /// The union of `base + sg` over the given base points.
    pub fn principal(w: &WeightSystem, bases: Vec<GroupElem>, opts: &Options) -> Result<Self> {
        let spec = w.spec();
        for b in &bases {
            if b.coords().len() != spec.rank() {
                return Err(Error::Validation(format!(
                    "base point {b} does not live in {}",
                    spec.describe()
                )));
            }
        }
        let bases: Vec<GroupElem> =
            bases.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if bases.is_empty() {
            return Ok(Self::empty(w));
        }
        if let Some(sg) = materializable_sg(w, opts)? {
            let mut set = BTreeSet::new();
            for b in &bases {
                for s in &sg {
                    set.insert(spec.add(b, s));
                }
            }
            return Ok(InvariantSet { weights: w.clone(), repr: canonical_finite(w, set) });
        }
        let bases = minimize_bases(w, bases, opts)?;
        Ok(InvariantSet { weights: w.clone(), repr: SetRepr::Principal(bases) })
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn repr(&self) -> &SetRepr {
        &self.repr
    }

    pub fn is_empty_set(&self) -> bool {
        self.repr == SetRepr::Empty
    }

    pub fn contains_elem(&self, x: &GroupElem, opts: &Options) -> Result<bool> {
        if x.coords().len() != self.weights.spec().rank() {
            return Err(Error::Validation(format!(
                "element {x} does not live in {}",
                self.weights.spec().describe()
            )));
        }
        match &self.repr {
            SetRepr::Empty => Ok(false),
            SetRepr::Full => Ok(true),
            SetRepr::Finite(s) => Ok(s.contains(x)),
            SetRepr::Principal(bases) => {
                for b in bases {
                    if monoid::is_member(&self.weights, &self.weights.spec().sub(x, b), opts)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// True iff the set is closed under adding every distinct weight value.
    pub fn is_invariant(&self, _opts: &Options) -> Result<bool> {
        match &self.repr {
            SetRepr::Empty | SetRepr::Full | SetRepr::Principal(_) => Ok(true),
            SetRepr::Finite(s) => {
                let spec = self.weights.spec();
                for w in self.weights.distinct_values() {
                    for x in s {
                        if !s.contains(&spec.add(x, &w)) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// The set translated by `w`.
    fn translated(&self, w: &GroupElem) -> Self {
        let spec = self.weights.spec();
        let repr = match &self.repr {
            SetRepr::Empty => SetRepr::Empty,
            SetRepr::Full => SetRepr::Full,
            SetRepr::Finite(s) => SetRepr::Finite(s.iter().map(|x| spec.add(x, w)).collect()),
            SetRepr::Principal(bases) => {
                SetRepr::Principal(bases.iter().map(|b| spec.add(b, w)).collect())
            }
        };
        InvariantSet { weights: self.weights.clone(), repr }
    }
}

fn canonical_finite(w: &WeightSystem, set: BTreeSet<GroupElem>) -> SetRepr {
    if set.is_empty() {
        return SetRepr::Empty;
    }
    if let Some(order) = w.spec().order() {
        if order == (set.len() as u64).into() {
            return SetRepr::Full;
        }
    }
    SetRepr::Finite(set)
}

/// `sg` as an explicit element list when both `sg` is a finite set and the
/// group is small enough to materialize into.
fn materializable_sg(w: &WeightSystem, opts: &Options) -> Result<Option<Vec<GroupElem>>> {
    if w.spec().is_finite() && crate::finite::order_exceeds(w.spec(), CANON_CAP) {
        return Ok(None);
    }
    monoid::sg_if_finite(w, opts)
}

/// Drops base points lying in another base's translate; ties keep the
/// lexicographically smallest base.
fn minimize_bases(
    w: &WeightSystem,
    bases: Vec<GroupElem>,
    opts: &Options,
) -> Result<Vec<GroupElem>> {
    let spec = w.spec();
    let n = bases.len();
    let mut covers = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                covers[i][j] = monoid::is_member(w, &spec.sub(&bases[i], &bases[j]), opts)?;
            }
        }
    }
    let mut kept = Vec::new();
    for i in 0..n {
        let dominated = (0..n).any(|j| {
            j != i && covers[i][j] && (!covers[j][i] || j < i)
        });
        if !dominated {
            kept.push(bases[i].clone());
        }
    }
    Ok(kept)
}

fn require_same_system(a: &InvariantSet, b: &InvariantSet) -> Result<()> {
    if a.weights != b.weights {
        return Err(Error::Validation(
            "sets measured against different weight systems".into(),
        ));
    }
    Ok(())
}

/// Subset test. Exact for all representable combinations: invariance of the
/// `Principal`, `Full` and `Empty` variants lets base-point membership stand by
/// for the whole translate.
pub fn is_subset_of(a: &InvariantSet, b: &InvariantSet, opts: &Options) -> Result<bool> {
    require_same_system(a, b)?;
    match (&a.repr, &b.repr) {
        (SetRepr::Empty, _) => Ok(true),
        (_, SetRepr::Full) => Ok(true),
        (SetRepr::Finite(s), _) => {
            for x in s {
                if !b.contains_elem(x, opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (SetRepr::Principal(bases), SetRepr::Principal(_)) => {
            for base in bases {
                if !b.contains_elem(base, opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        // A surviving Principal has infinite sg (finite ones are
        // materialized), so it fits in no explicit finite set.
        (SetRepr::Principal(_), SetRepr::Finite(_) | SetRepr::Empty) => Ok(false),
        (SetRepr::Full, SetRepr::Empty) => Ok(false),
        (SetRepr::Full, SetRepr::Finite(s)) => match a.weights.spec().order() {
            Some(order) => Ok(order == (s.len() as u64).into()),
            None => Ok(false),
        },
        (SetRepr::Full, SetRepr::Principal(bases)) => full_inside_principal(a, bases, opts),
    }
}

/// Whether finitely many translates `base + sg` cover the whole group. They
/// do exactly when `sg` is a group (then each translate is a coset of the
/// subgroup the values span) and the bases hit every coset; a non-group `sg`
/// leaves a direction of misses no finite union of its translates patches.
fn full_inside_principal(
    a: &InvariantSet,
    bases: &[GroupElem],
    opts: &Options,
) -> Result<bool> {
    let w = &a.weights;
    let spec = w.spec();
    if monoid::is_full_group(w, opts)? {
        return Ok(true);
    }
    let values = w.distinct_values();
    for v in &values {
        if !monoid::is_member(w, &spec.neg(v), opts)? {
            return Ok(false);
        }
    }
    let sub = subgroup_generated(&values, spec);
    let q = quotient(spec, &sub);
    if !q.group.is_finite() {
        return Ok(false);
    }
    let table = ElemTable::new(&q.group, "coset coverage", CANON_CAP)?;
    let mut hit = vec![false; table.order() as usize];
    for b in bases {
        hit[table.index_of(&q.project(b))] = true;
    }
    Ok(hit.iter().all(|h| *h))
}

pub fn set_eq(a: &InvariantSet, b: &InvariantSet, opts: &Options) -> Result<bool> {
    Ok(is_subset_of(a, b, opts)? && is_subset_of(b, a, opts)?)
}

pub fn union(a: &InvariantSet, b: &InvariantSet, opts: &Options) -> Result<InvariantSet> {
    require_same_system(a, b)?;
    let w = &a.weights;
    match (&a.repr, &b.repr) {
        (SetRepr::Empty, _) => Ok(b.clone()),
        (_, SetRepr::Empty) => Ok(a.clone()),
        (SetRepr::Full, _) | (_, SetRepr::Full) => Ok(InvariantSet::full(w)),
        (SetRepr::Finite(s), SetRepr::Finite(t)) => {
            InvariantSet::from_elems(w, s.iter().chain(t).cloned(), opts)
        }
        (SetRepr::Principal(s), SetRepr::Principal(t)) => {
            InvariantSet::principal(w, s.iter().chain(t).cloned().collect(), opts)
        }
        (SetRepr::Finite(_), SetRepr::Principal(_)) => {
            if is_subset_of(a, b, opts)? {
                Ok(b.clone())
            } else {
                Err(Error::UnsupportedRepresentation {
                    operation: "union",
                    detail: "explicit elements outside every semigroup translate".into(),
                })
            }
        }
        (SetRepr::Principal(_), SetRepr::Finite(_)) => union(b, a, opts),
    }
}

/// The boundary set `H_X`: points of `X` no translate reaches, plus the
/// translates of `X` along tail values.
pub fn h_set(x: &InvariantSet, opts: &Options) -> Result<InvariantSet> {
    let w = &x.weights;
    let spec = w.spec();
    match &x.repr {
        SetRepr::Empty => Ok(InvariantSet::empty(w)),
        // Every translate of the full set is full, so nothing is unreachable
        // and the tail translates restore everything.
        SetRepr::Full => Ok(InvariantSet::full(w)),
        SetRepr::Finite(s) => {
            let mut reached = BTreeSet::new();
            for v in w.distinct_values() {
                reached.extend(s.iter().map(|e| spec.add(e, &v)));
            }
            let mut out: BTreeSet<GroupElem> = s.difference(&reached).cloned().collect();
            for v in w.tail_values() {
                out.extend(s.iter().map(|e| spec.add(e, &v)));
            }
            InvariantSet::from_elems(w, out, opts)
        }
        SetRepr::Principal(bases) => h_principal(x, bases, opts),
    }
}

/// For `X = ⋃(γ_k + sg)` the unreachable part is confined to the base
/// points: any `γ_k + s` with `s ≠ 0` is reached from `γ_k` by the first
/// value of `s`. A base survives iff no `γ_l + w` translate contains it. The
/// surviving bases join the tail translates as a principal union only when
/// each base's whole translate re-enters the tail part, which is automatic
/// once every prefix-only value can be routed through a tail value.
fn h_principal(x: &InvariantSet, bases: &[GroupElem], opts: &Options) -> Result<InvariantSet> {
    let w = &x.weights;
    let spec = w.spec();
    let values = w.distinct_values();
    let tail = w.tail_values();
    let mut tail_bases: Vec<GroupElem> = Vec::new();
    for b in bases {
        for t in &tail {
            tail_bases.push(spec.add(b, t));
        }
    }
    let mut uncovered = Vec::new();
    'bases: for b in bases {
        for l in bases {
            for v in &values {
                let shifted = spec.sub(&spec.sub(b, l), v);
                if monoid::is_member(w, &shifted, opts)? {
                    continue 'bases;
                }
            }
        }
        uncovered.push(b.clone());
    }
    if uncovered.is_empty() {
        return InvariantSet::principal(w, tail_bases, opts);
    }
    for u in &values {
        if tail.contains(u) {
            continue;
        }
        let mut routed = false;
        for t in &tail {
            if monoid::is_member(w, &spec.sub(u, t), opts)? {
                routed = true;
                break;
            }
        }
        if !routed {
            return Err(Error::UnsupportedRepresentation {
                operation: "h_set",
                detail: format!(
                    "isolated base points next to prefix value {u} admit no principal form"
                ),
            });
        }
    }
    uncovered.extend(tail_bases);
    InvariantSet::principal(w, uncovered, opts)
}

/// A pair `(X, Xinf)` with `H_X ⊆ Xinf ⊆ X`; the combinatorial datum of one
/// gauge-invariant ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPair {
    pub x: InvariantSet,
    pub xinf: InvariantSet,
}

pub fn validate_pair(x: &InvariantSet, xinf: &InvariantSet, opts: &Options) -> Result<bool> {
    require_same_system(x, xinf)?;
    if !x.is_invariant(opts)? || !xinf.is_invariant(opts)? {
        return Ok(false);
    }
    let h = h_set(x, opts)?;
    Ok(is_subset_of(&h, xinf, opts)? && is_subset_of(xinf, x, opts)?)
}

/// `X^{(n)} = Xinf ∪ ⋃_{prefix indices i > n}(X + ω_i) ∪ ⋃_{tail values w}(X + w)`.
/// Stabilizes to the tail-only union once `n` passes the prefix length;
/// `X^{(0)} = X` for a valid pair.
pub fn x_n(p: &InvariantPair, n: usize, opts: &Options) -> Result<InvariantSet> {
    let w = p.x.weights();
    let mut translates: Vec<GroupElem> = Vec::new();
    for i in (n + 1)..=w.prefix().len() {
        let v = w.weight_at(i)?.clone();
        if !translates.contains(&v) {
            translates.push(v);
        }
    }
    for v in w.tail_values() {
        if !translates.contains(&v) {
            translates.push(v);
        }
    }
    let mut acc = p.xinf.clone();
    for v in &translates {
        acc = union(&acc, &p.x.translated(v), opts)?;
    }
    Ok(acc)
}

/// Componentwise union; mirrors intersecting the two ideals.
pub fn pair_union(p1: &InvariantPair, p2: &InvariantPair, opts: &Options) -> Result<InvariantPair> {
    Ok(InvariantPair {
        x: union(&p1.x, &p2.x, opts)?,
        xinf: union(&p1.xinf, &p2.xinf, opts)?,
    })
}

// ---------------------------------------------------------------------------
// Finite enumeration.

/// Bitmask workspace over a finite group: the element table plus the
/// translation permutations of every weight value.
pub(crate) struct FiniteCtx {
    pub(crate) table: ElemTable,
    pub(crate) value_perms: Vec<Vec<usize>>,
    pub(crate) tail_perms: Vec<Vec<usize>>,
    zero_index: usize,
}

impl FiniteCtx {
    pub(crate) fn new(w: &WeightSystem, operation: &'static str, limit: u64) -> Result<Self> {
        let table = ElemTable::new(w.spec(), operation, limit.min(MASK_CAP))?;
        let value_perms = w.distinct_values().iter().map(|v| table.translation(v)).collect();
        let tail_perms = w.tail_values().iter().map(|v| table.translation(v)).collect();
        let zero_index = table.index_of(&w.spec().zero());
        Ok(FiniteCtx { table, value_perms, tail_perms, zero_index })
    }

    pub(crate) fn invariant_mask(&self, mask: u64) -> bool {
        self.value_perms.iter().all(|p| translate_mask(mask, p) & !mask == 0)
    }

    pub(crate) fn h_mask(&self, mask: u64) -> u64 {
        let mut reached = 0u64;
        for p in &self.value_perms {
            reached |= translate_mask(mask, p);
        }
        let mut out = mask & !reached;
        for p in &self.tail_perms {
            out |= translate_mask(mask, p);
        }
        out
    }

    pub(crate) fn sg_mask(&self) -> u64 {
        crate::finite::saturate_mask(1 << self.zero_index, &self.value_perms)
    }

    pub(crate) fn set_from_mask(&self, w: &WeightSystem, mask: u64) -> InvariantSet {
        let repr = if mask == 0 {
            SetRepr::Empty
        } else if mask == self.table.full_mask() {
            SetRepr::Full
        } else {
            SetRepr::Finite(self.table.mask_elems(mask).into_iter().collect())
        };
        InvariantSet { weights: w.clone(), repr }
    }

    /// All invariant masks, ascending.
    pub(crate) fn invariant_masks(&self) -> Vec<u64> {
        let n = self.table.order();
        let mut out = Vec::new();
        for mask in 0..(1u64 << n) {
            if self.invariant_mask(mask) {
                out.push(mask);
            }
        }
        out
    }

    /// All pairs `(X, Xinf)` with `H_X ⊆ Xinf ⊆ X`, ordered by `X` mask then
    /// `Xinf` mask. The submask walk is ascending, and `h | s = h + s` for
    /// disjoint masks, so `Xinf` comes out ascending too.
    pub(crate) fn pair_masks(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for x in self.invariant_masks() {
            let h = self.h_mask(x);
            let free = x & !h;
            let mut s = 0u64;
            loop {
                out.push((x, h | s));
                if s == free {
                    break;
                }
                s = (s.wrapping_sub(free)) & free;
            }
        }
        out
    }
}

/// Subset scans shift by the group order, so cap it strictly below the mask
/// width.
pub(crate) const ENUM_BITS: u64 = 62;

/// All invariant sets over a finite group, in mask order.
pub fn enumerate_invariant_sets(w: &WeightSystem, opts: &Options) -> Result<Vec<InvariantSet>> {
    let ctx = FiniteCtx::new(w, "enumerate_invariant_sets", opts.size_limit.min(ENUM_BITS))?;
    Ok(ctx.invariant_masks().into_iter().map(|m| ctx.set_from_mask(w, m)).collect())
}

/// All invariant pairs over a finite group; the count is
/// `Σ_X 2^{|X ∖ H_X|}` over invariant `X`.
pub fn enumerate_pairs(w: &WeightSystem, opts: &Options) -> Result<Vec<InvariantPair>> {
    let ctx = FiniteCtx::new(w, "enumerate_pairs", opts.size_limit.min(ENUM_BITS))?;
    Ok(ctx
        .pair_masks()
        .into_iter()
        .map(|(x, xinf)| InvariantPair {
            x: ctx.set_from_mask(w, x),
            xinf: ctx.set_from_mask(w, xinf),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupSpec;

    fn system(spec: &GroupSpec, prefix: &[&[i64]], tail: &[&[i64]]) -> WeightSystem {
        WeightSystem::new(
            spec.clone(),
            prefix.iter().map(|c| spec.elem_i64(c).unwrap()).collect(),
            tail.iter().map(|c| spec.elem_i64(c).unwrap()).collect(),
        )
        .unwrap()
    }

    fn finite_set(w: &WeightSystem, elems: &[&[i64]]) -> InvariantSet {
        InvariantSet::from_elems(
            w,
            elems.iter().map(|c| w.spec().elem_i64(c).unwrap()),
            &Options::default(),
        )
        .unwrap()
    }

    #[test]
    fn invariance_of_explicit_sets() {
        let opts = Options::default();
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w2 = system(&z4, &[], &[&[2]]);
        assert!(finite_set(&w2, &[]).is_invariant(&opts).unwrap());
        assert!(finite_set(&w2, &[&[1], &[3]]).is_invariant(&opts).unwrap());
        let w1 = system(&z4, &[], &[&[1]]);
        assert!(!finite_set(&w1, &[&[0], &[2]]).is_invariant(&opts).unwrap());
    }

    #[test]
    fn h_of_full_is_full() {
        let z3 = GroupSpec::new(0, vec![3]).unwrap();
        let w = system(&z3, &[], &[&[1]]);
        let h = h_set(&InvariantSet::full(&w), &Options::default()).unwrap();
        assert_eq!(*h.repr(), SetRepr::Full);
    }

    #[test]
    fn h_of_naturals_is_naturals() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[1]]);
        let opts = Options::default();
        let x = InvariantSet::principal(&w, vec![z.zero()], &opts).unwrap();
        let h = h_set(&x, &opts).unwrap();
        assert!(set_eq(&h, &x, &opts).unwrap());
    }

    #[test]
    fn h_with_prefix_keeps_isolated_base() {
        // X = N over prefix [5], tail [1]: the base 0 is unreachable but its
        // translate re-enters through the tail, so H_X is all of N again.
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[&[5]], &[&[1]]);
        let opts = Options::default();
        let x = InvariantSet::principal(&w, vec![z.zero()], &opts).unwrap();
        let h = h_set(&x, &opts).unwrap();
        assert!(set_eq(&h, &x, &opts).unwrap());
        assert!(h.contains_elem(&z.zero(), &opts).unwrap());
    }

    #[test]
    fn h_unsupported_when_no_tail_route_exists() {
        // Values 5 (prefix) and 7 (tail) on Z: 0 stays isolated and 5 cannot
        // be routed through 7, so no principal form represents H_X.
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[&[5]], &[&[7]]);
        let opts = Options::default();
        let x = InvariantSet::principal(&w, vec![z.zero()], &opts).unwrap();
        assert!(matches!(
            h_set(&x, &opts),
            Err(Error::UnsupportedRepresentation { .. })
        ));
    }

    #[test]
    fn x0_is_x() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w = system(&z4, &[&[1]], &[&[2]]);
        let opts = Options::default();
        for x_mask_elems in [vec![], vec![vec![0i64], vec![2]], vec![vec![0], vec![1], vec![2], vec![3]]] {
            let x = InvariantSet::from_elems(
                &w,
                x_mask_elems.iter().map(|c| z4.elem_i64(c).unwrap()),
                &opts,
            )
            .unwrap();
            if !x.is_invariant(&opts).unwrap() {
                continue;
            }
            let h = h_set(&x, &opts).unwrap();
            let p = InvariantPair { x: x.clone(), xinf: h };
            let x0 = x_n(&p, 0, &opts).unwrap();
            assert!(set_eq(&x0, &x, &opts).unwrap());
        }
    }

    #[test]
    fn xn_with_full_xinf_stays_full() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w = system(&z4, &[], &[&[1]]);
        let opts = Options::default();
        let p = InvariantPair { x: InvariantSet::full(&w), xinf: InvariantSet::full(&w) };
        let x7 = x_n(&p, 7, &opts).unwrap();
        assert_eq!(*x7.repr(), SetRepr::Full);
    }

    #[test]
    fn xn_on_the_half_line() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[&[0]], &[&[1]]);
        let opts = Options::default();
        let x = InvariantSet::principal(&w, vec![z.zero()], &opts).unwrap();
        let xinf = h_set(&x, &opts).unwrap();
        let p = InvariantPair { x: x.clone(), xinf: xinf.clone() };
        let x1 = x_n(&p, 1, &opts).unwrap();
        // X^{(1)} = Xinf ∪ (X+1) = 1+N, checked pointwise on a window.
        for k in -2i64..=20 {
            let e = z.elem_i64(&[k]).unwrap();
            assert_eq!(x1.contains_elem(&e, &opts).unwrap(), k >= 1, "window point {k}");
        }
    }

    #[test]
    fn pair_validation_examples() {
        let opts = Options::default();
        let z3 = GroupSpec::new(0, vec![3]).unwrap();
        let w = system(&z3, &[], &[&[1]]);
        let full = InvariantSet::full(&w);
        let empty = InvariantSet::empty(&w);
        assert!(validate_pair(&full, &full, &opts).unwrap());
        assert!(!validate_pair(&full, &empty, &opts).unwrap());
        assert!(validate_pair(&empty, &empty, &opts).unwrap());
    }

    #[test]
    fn pair_union_examples() {
        let opts = Options::default();
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w = system(&z4, &[], &[&[2]]);
        let evens = finite_set(&w, &[&[0], &[2]]);
        let odds = finite_set(&w, &[&[1], &[3]]);
        let p1 = InvariantPair { x: evens.clone(), xinf: evens };
        let p2 = InvariantPair { x: odds.clone(), xinf: odds };
        let both = pair_union(&p1, &p2, &opts).unwrap();
        assert_eq!(*both.x.repr(), SetRepr::Full);
        assert_eq!(*both.xinf.repr(), SetRepr::Full);
        let again = pair_union(&p1, &p1, &opts).unwrap();
        assert_eq!(again, p1);
        let zero = InvariantPair {
            x: InvariantSet::empty(&w),
            xinf: InvariantSet::empty(&w),
        };
        assert_eq!(pair_union(&zero, &p2, &opts).unwrap(), p2);
    }

    #[test]
    fn enumeration_on_small_groups() {
        let opts = Options::default();
        let z3 = GroupSpec::new(0, vec![3]).unwrap();
        let w3 = system(&z3, &[], &[&[1]]);
        let sets = enumerate_invariant_sets(&w3, &opts).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(*sets[0].repr(), SetRepr::Empty);
        assert_eq!(*sets[1].repr(), SetRepr::Full);
        assert_eq!(enumerate_pairs(&w3, &opts).unwrap().len(), 2);

        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w4 = system(&z4, &[], &[&[2]]);
        let sets = enumerate_invariant_sets(&w4, &opts).unwrap();
        assert_eq!(sets.len(), 4);
        assert_eq!(enumerate_pairs(&w4, &opts).unwrap().len(), 4);

        let triv = GroupSpec::trivial();
        let wt = system(&triv, &[], &[&[]]);
        let sets = enumerate_invariant_sets(&wt, &opts).unwrap();
        assert_eq!(sets.len(), 2);
        let pairs = enumerate_pairs(&wt, &opts).unwrap();
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn enumeration_respects_size_limit() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        let w = system(&z4, &[], &[&[1]]);
        let opts = Options { size_limit: 3, ..Options::default() };
        assert!(matches!(
            enumerate_invariant_sets(&w, &opts),
            Err(Error::SizeLimit { order: 4, limit: 3 })
        ));
    }

    #[test]
    fn h_is_always_inside_x_on_enumerated_sets() {
        let opts = Options::default();
        let z8 = GroupSpec::new(0, vec![8]).unwrap();
        let w = system(&z8, &[&[4]], &[&[2]]);
        for x in enumerate_invariant_sets(&w, &opts).unwrap() {
            let h = h_set(&x, &opts).unwrap();
            assert!(is_subset_of(&h, &x, &opts).unwrap(), "H ⊄ X at {:?}", x.repr());
        }
    }

    #[test]
    fn principal_bases_are_minimized() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[2], &[3]]);
        let opts = Options::default();
        let s = InvariantSet::principal(
            &w,
            vec![z.elem_i64(&[0]).unwrap(), z.elem_i64(&[5]).unwrap()],
            &opts,
        )
        .unwrap();
        assert_eq!(*s.repr(), SetRepr::Principal(vec![z.zero()]));
    }

    #[test]
    fn full_subset_of_principal_group_translates() {
        // sg = 2Z from tail [2, -2]; bases over both cosets cover Z.
        let z = GroupSpec::new(1, vec![]).unwrap();
        let w = system(&z, &[], &[&[2], &[-2]]);
        let opts = Options::default();
        let full = InvariantSet::full(&w);
        let both = InvariantSet::principal(
            &w,
            vec![z.zero(), z.elem_i64(&[1]).unwrap()],
            &opts,
        )
        .unwrap();
        let even_only = InvariantSet::principal(&w, vec![z.zero()], &opts).unwrap();
        assert!(is_subset_of(&full, &both, &opts).unwrap());
        assert!(!is_subset_of(&full, &even_only, &opts).unwrap());
        assert!(set_eq(&full, &both, &opts).unwrap());
    }

    #[test]
    fn torsion_confined_principal_sets_materialize() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let w = system(&g, &[], &[&[0, 1]]);
        let opts = Options::default();
        let s = InvariantSet::principal(&w, vec![g.zero()], &opts).unwrap();
        match s.repr() {
            SetRepr::Finite(elems) => assert_eq!(elems.len(), 2),
            other => panic!("expected materialized set, got {other:?}"),
        }
    }
}
