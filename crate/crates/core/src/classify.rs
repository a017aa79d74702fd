//! Structure read off the weight monoid: the escape condition, primeness,
//! the gauge-invariant ideal lattice, the primitive ideal space in both
//! regimes, the strong Connes spectrum, structural flags, and K-theory and
//! fiber reports.

use std::collections::BTreeSet;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::abelian::{quotient, subgroup_generated, GroupElem, Order, Quotient};
use crate::error::{Error, Result};
use crate::finite::translate_mask;
use crate::invariant::{
    self, h_set, is_subset_of, set_eq, x_n, FiniteCtx, InvariantPair, InvariantSet, SetRepr,
};
use crate::monoid::{self, WeightSystem};
use crate::Options;

/// Outcome of the escape condition: every index class must carry a weight
/// of infinite order or admit a return word starting elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionReport {
    Satisfied,
    Violated(ViolatedReport),
}

impl ConditionReport {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ConditionReport::Satisfied)
    }

    pub fn violated(&self) -> Option<&ViolatedReport> {
        match self {
            ConditionReport::Satisfied => None,
            ConditionReport::Violated(rep) => Some(rep),
        }
    }
}

/// The unique violating index: its weight `v` of finite order `K` and the
/// quotient by `<v>` that the circle component lives over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolatedReport {
    pub index: usize,
    pub order_k: u64,
    pub weight: GroupElem,
    pub quotient: Quotient,
}

impl ViolatedReport {
    /// The weight system pushed forward to the quotient group.
    pub fn quotient_weights(&self, w: &WeightSystem) -> Result<WeightSystem> {
        let prefix = w.prefix().iter().map(|v| self.quotient.project(v)).collect();
        let tail = w.tail().iter().map(|v| self.quotient.project(v)).collect();
        WeightSystem::new(self.quotient.group.clone(), prefix, tail)
    }
}

/// Checks the escape condition for every index class.
///
/// Only prefix indices can violate: a tail value recurs at other indices,
/// and its negative lies in the monoid (it is `(m-1)` further copies when
/// the order `m` is finite, and clause (i) applies when it is not).
pub fn check_condition(w: &WeightSystem, opts: &Options) -> Result<ConditionReport> {
    let spec = w.spec();
    let mut violations: Vec<(usize, u64, GroupElem)> = Vec::new();
    for i in 1..=w.prefix().len() {
        let v = w.weight_at(i)?.clone();
        let k = match spec.order_of(&v) {
            Order::Infinite => continue,
            Order::Finite(k) => k,
        };
        let mut escapes = false;
        for u in w.values_avoiding(i)? {
            if monoid::is_member(w, &spec.neg(&u), opts)? {
                escapes = true;
                break;
            }
        }
        if !escapes {
            let k = k.to_u64().ok_or_else(|| {
                Error::Validation(format!("order {k} of the violating weight exceeds u64"))
            })?;
            violations.push((i, k, v));
        }
    }
    match violations.len() {
        0 => Ok(ConditionReport::Satisfied),
        1 => {
            let (index, order_k, weight) = violations.pop().expect("one violation");
            let sub = subgroup_generated(&[weight.clone()], spec);
            Ok(ConditionReport::Violated(ViolatedReport {
                index,
                order_k,
                weight,
                quotient: quotient(spec, &sub),
            }))
        }
        _ => Err(Error::InternalInvariantBroken(format!(
            "indices {:?} all fail the escape condition; the violating index must be unique",
            violations.iter().map(|(i, _, _)| *i).collect::<Vec<_>>()
        ))),
    }
}

/// Primeness of an invariant set: every two elements admit a common
/// ancestor inside the set whose monoid translate reaches both.
pub fn is_prime_set(x: &InvariantSet, opts: &Options) -> Result<bool> {
    let w = x.weights();
    let spec = w.spec();
    match x.repr() {
        SetRepr::Empty => Ok(true),
        // gamma1 - gamma2 = s - t with s, t in the monoid exactly when the
        // subgroup generated by the weight values is everything.
        SetRepr::Full => Ok(subgroup_generated(&w.distinct_values(), spec).is_full()),
        SetRepr::Finite(set) => {
            let elems: Vec<&GroupElem> = set.iter().collect();
            // One closure table amortizes the membership queries on a
            // finite group; explicit sets over an infinite group only
            // arise with a finite monoid, so direct queries stay cheap.
            let table =
                if spec.is_finite() { Some(monoid::closure_table(w, opts)?) } else { None };
            let member = |d: &GroupElem| -> Result<bool> {
                match &table {
                    Some(t) => Ok(t.contains(d)),
                    None => monoid::is_member(w, d, opts),
                }
            };
            for a in 0..elems.len() {
                for b in 0..=a {
                    let mut found = false;
                    for g in &elems {
                        if member(&spec.sub(elems[a], g))? && member(&spec.sub(elems[b], g))? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        // An ancestor of two base points lies in some base translate, and
        // that base then works as well, so base pairs decide the set.
        SetRepr::Principal(bases) => {
            for a in 0..bases.len() {
                for b in 0..=a {
                    let mut found = false;
                    for g in bases {
                        if monoid::is_member(w, &spec.sub(&bases[a], g), opts)?
                            && monoid::is_member(w, &spec.sub(&bases[b], g), opts)?
                        {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// The base point when the set is a single monoid translate `γ + sg`, if
/// any.
pub fn principal_base(x: &InvariantSet, opts: &Options) -> Result<Option<GroupElem>> {
    let w = x.weights();
    let spec = w.spec();
    match x.repr() {
        SetRepr::Empty => Ok(None),
        SetRepr::Full => {
            Ok(if monoid::is_full_group(w, opts)? { Some(spec.zero()) } else { None })
        }
        SetRepr::Finite(set) => {
            let Some(sg) = monoid::sg_if_finite(w, opts)? else {
                return Ok(None);
            };
            for g in set {
                let translate: BTreeSet<GroupElem> =
                    sg.iter().map(|s| spec.add(g, s)).collect();
                if &translate == set {
                    return Ok(Some(g.clone()));
                }
            }
            Ok(None)
        }
        // Bases are minimal: a base covering all the others would have
        // absorbed them during canonicalization.
        SetRepr::Principal(bases) => {
            Ok(if bases.len() == 1 { Some(bases[0].clone()) } else { None })
        }
    }
}

/// The dichotomy for prime pairs: either `X` is prime with boundary
/// `Xinf = H_X`, or `X = γ + sg` and `Xinf = H_X ∪ {γ}` for a base point
/// `γ ∉ H_X`.
pub fn is_prime_pair(p: &InvariantPair, opts: &Options) -> Result<bool> {
    let h = h_set(&p.x, opts)?;
    if is_prime_set(&p.x, opts)? && set_eq(&p.xinf, &h, opts)? {
        return Ok(true);
    }
    // The second branch pins the base as the unique boundary point outside
    // H; any element of H pulls its whole translate along, so only points
    // and bases outside H can witness it.
    let mut candidates: Vec<GroupElem> = Vec::new();
    match p.xinf.repr() {
        SetRepr::Empty => {}
        // A full boundary forces a full monoid, and then H = Γ leaves no
        // point outside it.
        SetRepr::Full => return Ok(false),
        SetRepr::Finite(s) => {
            for e in s {
                if !h.contains_elem(e, opts)? {
                    candidates.push(e.clone());
                }
            }
        }
        SetRepr::Principal(bases) => {
            for b in bases {
                if !h.contains_elem(b, opts)? {
                    candidates.push(b.clone());
                }
            }
        }
    }
    let [gamma] = candidates.as_slice() else {
        return Ok(false);
    };
    if !is_single_translate(&p.x, gamma, opts)? {
        return Ok(false);
    }
    boundary_plus_point_eq(&p.xinf, &h, gamma, opts)
}

/// True when `x` equals the single monoid translate `γ + sg`.
fn is_single_translate(x: &InvariantSet, gamma: &GroupElem, opts: &Options) -> Result<bool> {
    let w = x.weights();
    let spec = w.spec();
    match x.repr() {
        SetRepr::Empty => Ok(false),
        SetRepr::Full => monoid::is_full_group(w, opts),
        SetRepr::Finite(s) => {
            let Some(sg) = monoid::sg_if_finite(w, opts)? else {
                return Ok(false);
            };
            let translate: BTreeSet<GroupElem> =
                sg.iter().map(|e| spec.add(gamma, e)).collect();
            Ok(&translate == s)
        }
        SetRepr::Principal(bases) => {
            if bases.len() != 1 {
                return Ok(false);
            }
            Ok(monoid::is_member(w, &spec.sub(gamma, &bases[0]), opts)?
                && monoid::is_member(w, &spec.sub(&bases[0], gamma), opts)?)
        }
    }
}

/// True when `xinf = h ∪ {γ}`, given `γ ∉ h` and `h` invariant.
fn boundary_plus_point_eq(
    xinf: &InvariantSet,
    h: &InvariantSet,
    gamma: &GroupElem,
    opts: &Options,
) -> Result<bool> {
    if !xinf.contains_elem(gamma, opts)? || !is_subset_of(h, xinf, opts)? {
        return Ok(false);
    }
    match xinf.repr() {
        SetRepr::Empty | SetRepr::Full => Ok(false),
        SetRepr::Finite(s) => {
            for e in s {
                if e != gamma && !h.contains_elem(e, opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SetRepr::Principal(bases) => {
            let w = xinf.weights();
            let spec = w.spec();
            for c in bases {
                if c == gamma {
                    // γ + (sg ∖ {0}) splits over the nonzero values, and
                    // each piece lands in the invariant set h as soon as
                    // its first step does.
                    for v in w.distinct_values() {
                        if v.is_zero() {
                            continue;
                        }
                        if !h.contains_elem(&spec.add(gamma, &v), opts)? {
                            return Ok(false);
                        }
                    }
                } else if !h.contains_elem(c, opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The lattice of gauge-invariant ideals over a finite group, with nodes
/// indexed in ascending pair-mask order.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pairs: Vec<InvariantPair>,
    masks: Vec<(u64, u64)>,
    primitive: Vec<bool>,
    index: HashMap<(u64, u64), usize>,
    note: Option<String>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[InvariantPair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &InvariantPair {
        &self.pairs[i]
    }

    /// Ideal inclusion `I_i ⊆ I_j`: containment reverses on pairs.
    pub fn le(&self, i: usize, j: usize) -> bool {
        let (xi, si) = self.masks[i];
        let (xj, sj) = self.masks[j];
        xj & !xi == 0 && sj & !si == 0
    }

    /// Index of the ideal `I_i ∩ I_j`; intersection joins the pairs.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let (xi, si) = self.masks[i];
        let (xj, sj) = self.masks[j];
        self.index[&(xi | xj, si | sj)]
    }

    /// Whether node `i` is a primitive ideal. The pair over the empty set
    /// is the unit ideal and is never marked.
    pub fn is_primitive(&self, i: usize) -> bool {
        self.primitive[i]
    }

    pub fn primitive_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.primitive[i]).collect()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    #[cfg(test)]
    fn masks_for_test(&self, i: usize) -> (u64, u64) {
        self.masks[i]
    }
}

/// Enumerates the gauge-invariant ideal lattice of a finite instance.
pub fn enumerate_ideals(w: &WeightSystem, opts: &Options) -> Result<IdealLattice> {
    let limit = opts.size_limit.min(invariant::ENUM_BITS);
    let ctx = FiniteCtx::new(w, "enumerate_ideals", limit)?;
    let n = ctx.table.order() as usize;
    let sg = ctx.sg_mask();
    // translate_of[g] is the mask of g + sg; up[e] collects the ancestors
    // of e, so common ancestors of a pair are one mask intersection away.
    let mut translate_of = vec![0u64; n];
    let mut up = vec![0u64; n];
    for g in 0..n {
        let c = translate_mask(sg, &ctx.table.translation(ctx.table.elem(g)));
        translate_of[g] = c;
        for e in 0..n {
            if c >> e & 1 == 1 {
                up[e] |= 1 << g;
            }
        }
    }
    let prime_mask = |x: u64| -> bool {
        let members: Vec<usize> = (0..n).filter(|&e| x >> e & 1 == 1).collect();
        members.iter().all(|&a| members.iter().all(|&b| up[a] & up[b] & x != 0))
    };

    let mut pairs = Vec::new();
    let mut masks = Vec::new();
    let mut primitive = Vec::new();
    let mut last_x: Option<u64> = None;
    let mut h = 0u64;
    let mut x_prime = false;
    for (xm, sm) in ctx.pair_masks() {
        if last_x != Some(xm) {
            last_x = Some(xm);
            h = ctx.h_mask(xm);
            x_prime = prime_mask(xm);
        }
        let prim = if xm == 0 {
            false
        } else if x_prime && sm == h {
            true
        } else {
            // Single-translate branch of the dichotomy. On a finite group
            // every value is monoid-invertible, so H = X swallows every
            // base point and this arm cannot fire; it is kept to mirror
            // the statement being implemented.
            (0..n).any(|g| {
                translate_of[g] == xm && h >> g & 1 == 0 && sm == h | 1 << g
            })
        };
        pairs.push(InvariantPair {
            x: ctx.set_from_mask(w, xm),
            xinf: ctx.set_from_mask(w, sm),
        });
        masks.push((xm, sm));
        primitive.push(prim);
    }
    let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let note = match check_condition(w, opts)? {
        ConditionReport::Satisfied => None,
        ConditionReport::Violated(_) => Some(String::from(
            "escape condition violated: nodes are the gauge-invariant ideals only; \
             the full ideal set is parameterized by circle pairs",
        )),
    };
    Ok(IdealLattice { pairs, masks, primitive, index, note })
}

/// The strong Connes spectrum `{0} ∪ H_sg` of the dual action.
pub fn connes_spectrum(w: &WeightSystem, opts: &Options) -> Result<InvariantSet> {
    let spec = w.spec();
    let sg = InvariantSet::principal(w, vec![spec.zero()], opts)?;
    let h = h_set(&sg, opts)?;
    if h.contains_elem(&spec.zero(), opts)? {
        return Ok(h);
    }
    match h.repr() {
        SetRepr::Empty | SetRepr::Finite(_) => {
            let zero = InvariantSet::from_elems(w, [spec.zero()], opts)?;
            invariant::union(&h, &zero, opts)
        }
        _ => {
            // {0} ∪ H equals sg ∪ H exactly when every nonzero monoid
            // element lands in H. Nonzero elements factor as v + s with v
            // a nonzero value, so zero values carry no obligation.
            let tails = w.tail_values();
            let mut routable = true;
            'values: for u in w.distinct_values() {
                if u.is_zero() || tails.contains(&u) {
                    continue;
                }
                for t in &tails {
                    if monoid::is_member(w, &spec.sub(&u, t), opts)? {
                        continue 'values;
                    }
                }
                routable = false;
                break;
            }
            if routable {
                invariant::union(&h, &sg, opts)
            } else {
                Err(Error::UnsupportedRepresentation {
                    operation: "connes_spectrum",
                    detail: "an isolated zero next to prefix-only values has no principal form"
                        .into(),
                })
            }
        }
    }
}

/// Structural flags read off the weight monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFlags {
    pub simple: bool,
    pub purely_infinite_if_simple: bool,
    pub primitive: bool,
    /// Sufficient only: `false` does not assert non-embeddability.
    pub af_embeddable_sufficient: bool,
    pub condition: ConditionReport,
}

pub fn flags(w: &WeightSystem, opts: &Options) -> Result<StructureFlags> {
    let spec = w.spec();
    let simple = monoid::is_full_group(w, opts)?;
    let primitive = subgroup_generated(&w.distinct_values(), spec).is_full();
    let mut af_embeddable_sufficient = true;
    for v in w.distinct_values() {
        if monoid::is_member(w, &spec.neg(&v), opts)? {
            af_embeddable_sufficient = false;
            break;
        }
    }
    Ok(StructureFlags {
        simple,
        purely_infinite_if_simple: simple,
        primitive,
        af_embeddable_sufficient,
        condition: check_condition(w, opts)?,
    })
}

/// Rank of the K_0 group: free abelian on the points of the dual group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Rank {
    Finite(BigUint),
    CountablyInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheory {
    pub k0_rank: K0Rank,
}

impl KTheory {
    /// K_1 vanishes for every instance.
    pub fn k1_rank(&self) -> u64 {
        0
    }
}

pub fn k_theory(w: &WeightSystem) -> KTheory {
    let k0_rank = match w.spec().order() {
        Some(n) => K0Rank::Finite(n),
        None => K0Rank::CountablyInfinite,
    };
    KTheory { k0_rank }
}

/// One matrix-algebra level of the degree-`n` fiber decomposition.
#[derive(Clone, Debug)]
pub struct FiberLevel {
    pub k: u64,
    pub matrix_size: BigUint,
    pub spectrum: InvariantSet,
}

/// Levels `k = 0..=n`: below the top the spectrum is `X^{(n)}`, at the top
/// it is `X` itself.
pub fn fiber_report(p: &InvariantPair, n: u64, opts: &Options) -> Result<Vec<FiberLevel>> {
    let spec = p.x.weights().spec();
    if !spec.is_finite() {
        return Err(Error::NotFinite { operation: "fiber_report", free_rank: spec.free_rank() });
    }
    if n == 0 {
        return Err(Error::Validation("fiber depth must be positive".into()));
    }
    if n > 4096 {
        return Err(Error::Validation(format!("fiber depth {n} is too large to report")));
    }
    let deep = x_n(p, n as usize, opts)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let spectrum = if k < n { deep.clone() } else { p.x.clone() };
        out.push(FiberLevel { k, matrix_size: BigUint::from(n).pow(k as u32), spectrum });
    }
    Ok(out)
}

/// The primitive ideal space in both regimes.
#[derive(Clone, Debug)]
pub enum PrimReport {
    Satisfied {
        /// Explicit prime pairs on a finite group, mask-ordered.
        prime_pairs: Option<Vec<InvariantPair>>,
        /// Symbolic families on an infinite group.
        families: Vec<String>,
    },
    Violated {
        report: ViolatedReport,
        /// Prime invariant sets that are not single monoid translates.
        delta: Vec<InvariantSet>,
        /// Detection is not exhaustive over an infinite group.
        delta_complete: bool,
    },
}

pub fn prim_space(w: &WeightSystem, opts: &Options) -> Result<PrimReport> {
    match check_condition(w, opts)? {
        ConditionReport::Satisfied => {
            if w.spec().is_finite() {
                let lattice = enumerate_ideals(w, opts)?;
                let prime_pairs = lattice
                    .primitive_indices()
                    .into_iter()
                    .map(|i| lattice.pair(i).clone())
                    .collect();
                Ok(PrimReport::Satisfied { prime_pairs: Some(prime_pairs), families: Vec::new() })
            } else {
                Ok(PrimReport::Satisfied {
                    prime_pairs: None,
                    families: vec![
                        "(γ + sg, H ∪ {γ}) for every group element γ".into(),
                        "(X, H_X) for every prime invariant set X".into(),
                    ],
                })
            }
        }
        ConditionReport::Violated(report) => {
            let delta = detect_delta(w, opts)?;
            Ok(PrimReport::Violated { report, delta, delta_complete: false })
        }
    }
}

/// Known members of the family of prime invariant sets that are not single
/// monoid translates. Detection over an infinite group is not exhaustive.
pub(crate) fn detect_delta(w: &WeightSystem, opts: &Options) -> Result<Vec<InvariantSet>> {
    let full = InvariantSet::full(w);
    let mut out = Vec::new();
    if is_prime_set(&full, opts)? && principal_base(&full, opts)?.is_none() {
        out.push(full);
    }
    Ok(out)
}

/// Subquotient descriptors at an isolated point in the violated regime:
/// one circle factor per point, and the `K` isolated points of the middle
/// layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSubquotients {
    pub circle_points: Vec<GroupElem>,
    pub point_list: Vec<GroupElem>,
}

pub fn local_subquotients(
    w: &WeightSystem,
    report: &ConditionReport,
    gamma0: &GroupElem,
) -> Result<LocalSubquotients> {
    let ConditionReport::Violated(rep) = report else {
        return Err(Error::ConditionNotViolated { operation: "local_subquotients" });
    };
    let spec = w.spec();
    if gamma0.coords().len() != spec.rank() {
        return Err(Error::Validation(format!(
            "point {gamma0} does not live in {}",
            spec.describe()
        )));
    }
    let mut point_list = Vec::with_capacity(rep.order_k as usize);
    let mut cur = gamma0.clone();
    for _ in 0..rep.order_k {
        point_list.push(cur.clone());
        cur = spec.add(&cur, &rep.weight);
    }
    Ok(LocalSubquotients { circle_points: vec![gamma0.clone()], point_list })
}
