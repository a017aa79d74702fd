//! Ideal data for the violated regime: circle-decorated sets over the
//! quotient group, their validation, order, rotation, and closed subsets
//! of the primitive ideal space.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::abelian::GroupElem;
use crate::classify::{detect_delta, ConditionReport, ViolatedReport};
use crate::error::{Error, Result};
use crate::invariant::{h_set, is_subset_of, set_eq, InvariantSet, SetRepr};
use crate::monoid::{self, WeightSystem};
use crate::Options;

/// An exact angle on the circle, held as a rational in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle {
    value: BigRational,
}

impl Angle {
    pub fn new(r: BigRational) -> Self {
        let f = r.floor();
        Angle { value: r - f }
    }

    pub fn zero() -> Self {
        Angle { value: BigRational::zero() }
    }

    pub fn from_i64(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Validation("angle denominator must be nonzero".into()));
        }
        Ok(Angle::new(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// The angle moved backwards by `t`, reduced into `[0, 1)`.
    pub fn shifted_back(&self, t: &BigRational) -> Self {
        Angle::new(&self.value - t)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Validation(format!("cannot parse angle numerator {num:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Validation(format!("cannot parse angle denominator {den:?}")))?;
        if den.is_zero() {
            return Err(Error::Validation("angle denominator must be nonzero".into()));
        }
        Ok(Angle::new(BigRational::new(num, den)))
    }
}

/// A closed subset of the circle bundle over the quotient group, paired
/// with a boundary set: full circles over a coset set, finitely many exact
/// points, and the boundary over the original group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPair {
    /// Cosets whose whole circle lies in the set, over the quotient weight
    /// system.
    pub full_cosets: InvariantSet,
    /// Exact points `([γ], θ)` not already under a full circle.
    pub points: BTreeSet<(GroupElem, Angle)>,
    /// The boundary set over the original weight system.
    pub xinf: InvariantSet,
}

impl YPair {
    /// Canonicalizes: points already under a full circle are dropped.
    pub fn new(
        full_cosets: InvariantSet,
        points: impl IntoIterator<Item = (GroupElem, Angle)>,
        xinf: InvariantSet,
        opts: &Options,
    ) -> Result<Self> {
        let rank = full_cosets.weights().spec().rank();
        let mut kept = BTreeSet::new();
        for (g, theta) in points {
            if g.coords().len() != rank {
                return Err(Error::Validation(format!(
                    "point coset {g} does not live in {}",
                    full_cosets.weights().spec().describe()
                )));
            }
            if !full_cosets.contains_elem(&g, opts)? {
                kept.insert((g, theta));
            }
        }
        Ok(YPair { full_cosets, points: kept, xinf })
    }

    /// The set-level rotation: every exact point moves backwards by `t`.
    pub fn rotated(&self, t: &BigRational) -> YPair {
        YPair {
            full_cosets: self.full_cosets.clone(),
            points: self
                .points
                .iter()
                .map(|(g, theta)| (g.clone(), theta.shifted_back(t)))
                .collect(),
            xinf: self.xinf.clone(),
        }
    }

    /// The gauge automorphism at `t` maps the ideal of this pair to the
    /// ideal of the pair rotated by `K·t`.
    pub fn gauge_rotated(&self, report: &ViolatedReport, t: &BigRational) -> YPair {
        let k = BigRational::from(BigInt::from(report.order_k));
        self.rotated(&(k * t))
    }
}

fn require_violated<'a>(
    report: &'a ConditionReport,
    operation: &'static str,
) -> Result<&'a ViolatedReport> {
    report.violated().ok_or(Error::ConditionNotViolated { operation })
}

/// The pair describing the primitive ideal at the point `([γ], θ)`: full
/// circles over the escape translates, the single exact point, and the
/// boundary of `γ + sg`.
pub fn make_point_primitive(
    w: &WeightSystem,
    report: &ConditionReport,
    gamma: &GroupElem,
    theta: Angle,
    opts: &Options,
) -> Result<YPair> {
    let rep = require_violated(report, "make_point_primitive")?;
    let spec = w.spec();
    if gamma.coords().len() != spec.rank() {
        return Err(Error::Validation(format!(
            "point {gamma} does not live in {}",
            spec.describe()
        )));
    }
    let wp = rep.quotient_weights(w)?;
    let mut bases = Vec::new();
    for u in w.values_avoiding(rep.index)? {
        bases.push(rep.quotient.project(&spec.add(gamma, &u)));
    }
    let full_cosets = InvariantSet::principal(&wp, bases, opts)?;
    let xinf = h_set(&InvariantSet::principal(w, vec![gamma.clone()], opts)?, opts)?;
    if xinf.contains_elem(gamma, opts)? {
        return Err(Error::InternalInvariantBroken(
            "a base point in the violated regime never lies in its own boundary".into(),
        ));
    }
    YPair::new(full_cosets, [(rep.quotient.project(gamma), theta)], xinf, opts)
}

/// Ideal inclusion `I_{y1} ⊆ I_{y2}`: the sets contain each other the
/// other way around, componentwise. Full circles of `y2` must sit under
/// full circles of `y1`; exact points may land on either.
pub fn ypair_contains(y1: &YPair, y2: &YPair, opts: &Options) -> Result<bool> {
    if !is_subset_of(&y2.full_cosets, &y1.full_cosets, opts)? {
        return Ok(false);
    }
    for (g, theta) in &y2.points {
        if !y1.full_cosets.contains_elem(g, opts)?
            && !y1.points.contains(&(g.clone(), theta.clone()))
        {
            return Ok(false);
        }
    }
    is_subset_of(&y2.xinf, &y1.xinf, opts)
}

/// Full validation of a circle pair: the derived set `X` (preimage of the
/// full cosets plus the point cosets) must absorb every escape translate,
/// and the boundary must be an invariant set with `H_X ⊆ Xinf ⊆ X`.
pub fn validate_ypair(
    w: &WeightSystem,
    report: &ConditionReport,
    y: &YPair,
    opts: &Options,
) -> Result<bool> {
    let rep = require_violated(report, "validate_ypair")?;
    let wp = rep.quotient_weights(w)?;
    if y.full_cosets.weights() != &wp {
        return Err(Error::Validation(
            "full cosets must live over the quotient weight system".into(),
        ));
    }
    if y.xinf.weights() != w {
        return Err(Error::Validation(
            "the boundary set must live over the original weight system".into(),
        ));
    }
    for (g, _) in &y.points {
        if g.coords().len() != wp.spec().rank() {
            return Err(Error::Validation(format!(
                "point coset {g} does not live in {}",
                wp.spec().describe()
            )));
        }
    }
    let fc = &y.full_cosets;
    if !fc.is_invariant(opts)? || !y.xinf.is_invariant(opts)? {
        return Ok(false);
    }

    // Escape translates of every exact point must carry full circles.
    let avoid = w.values_avoiding(rep.index)?;
    for (g, _) in &y.points {
        for u in &avoid {
            if !fc.contains_elem(&wp.spec().add(g, &rep.quotient.project(u)), opts)? {
                return Ok(false);
            }
        }
    }

    // The boundary's cosets must carry full circles.
    if !cosets_under(&y.xinf, fc, rep, opts)? {
        return Ok(false);
    }

    // Xinf ⊆ X. The derived X is invariant once the escape checks pass,
    // so base membership suffices for principal boundaries.
    let point_cosets: BTreeSet<GroupElem> = y.points.iter().map(|(g, _)| g.clone()).collect();
    let in_x = |e: &GroupElem, opts: &Options| -> Result<bool> {
        let c = rep.quotient.project(e);
        Ok(point_cosets.contains(&c) || fc.contains_elem(&c, opts)?)
    };
    match y.xinf.repr() {
        SetRepr::Empty => {}
        SetRepr::Full => {
            // The quotient group is infinite, so finitely many point
            // cosets never complete the preimage of the full cosets.
            if !is_subset_of(&InvariantSet::full(&wp), fc, opts)? {
                return Ok(false);
            }
        }
        SetRepr::Finite(s) => {
            for e in s {
                if !in_x(e, opts)? {
                    return Ok(false);
                }
            }
        }
        SetRepr::Principal(bases) => {
            for b in bases {
                if !in_x(b, opts)? {
                    return Ok(false);
                }
            }
        }
    }

    // H_X ⊆ Xinf, exactly. Split X = P ∪ Q with P the preimage of the
    // full cosets and Q the leftover point cosets: Q + v = Q and the
    // escape checks force Q + u ⊆ P, so
    //   H_X = (P-diff ∖ ⋃_{u}(Q+u)) ∪ ⋃_{tail}(P+w) ∪ ⋃_{tail}(Q+w).
    let spec = w.spec();
    let p = preimage_set(fc, w, rep, opts)?;
    let mut q_elems: Vec<GroupElem> = Vec::new();
    for g in &point_cosets {
        if fc.contains_elem(g, opts)? {
            continue;
        }
        let mut cur = rep.quotient.lift(g);
        for _ in 0..rep.order_k {
            q_elems.push(cur.clone());
            cur = spec.add(&cur, &rep.weight);
        }
    }
    let tails = w.tail_values();
    for q in &q_elems {
        for t in &tails {
            if !y.xinf.contains_elem(&spec.add(q, t), opts)? {
                return Ok(false);
            }
        }
    }
    let values = w.distinct_values();
    let swallowed = |e: &GroupElem| -> bool {
        q_elems.iter().any(|q| avoid.iter().any(|u| &spec.add(q, u) == e))
    };
    match p.repr() {
        SetRepr::Empty => {}
        SetRepr::Full => {
            if !is_subset_of(&InvariantSet::full(w), &y.xinf, opts)? {
                return Ok(false);
            }
        }
        SetRepr::Finite(s) => {
            let mut reached: BTreeSet<GroupElem> = BTreeSet::new();
            for e in s {
                for v in &values {
                    reached.insert(spec.add(e, v));
                }
            }
            for e in s {
                if !reached.contains(e) && !swallowed(e) && !y.xinf.contains_elem(e, opts)? {
                    return Ok(false);
                }
                for t in &tails {
                    if !y.xinf.contains_elem(&spec.add(e, t), opts)? {
                        return Ok(false);
                    }
                }
            }
        }
        SetRepr::Principal(bases) => {
            // The difference part of a principal set is confined to its
            // base points.
            for b in bases {
                let mut covered = false;
                'cover: for l in bases {
                    for v in &values {
                        if monoid::is_member(w, &spec.sub(&spec.sub(b, l), v), opts)? {
                            covered = true;
                            break 'cover;
                        }
                    }
                }
                if !covered && !swallowed(b) && !y.xinf.contains_elem(b, opts)? {
                    return Ok(false);
                }
            }
            let mut tail_bases = Vec::new();
            for b in bases {
                for t in &tails {
                    tail_bases.push(spec.add(b, t));
                }
            }
            let tail_part = InvariantSet::principal(w, tail_bases, opts)?;
            if !is_subset_of(&tail_part, &y.xinf, opts)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when every coset met by `x` carries a full circle in `fc`.
fn cosets_under(
    x: &InvariantSet,
    fc: &InvariantSet,
    rep: &ViolatedReport,
    opts: &Options,
) -> Result<bool> {
    match x.repr() {
        SetRepr::Empty => Ok(true),
        SetRepr::Full => {
            let wp = fc.weights();
            is_subset_of(&InvariantSet::full(wp), fc, opts)
        }
        SetRepr::Finite(s) => {
            for e in s {
                if !fc.contains_elem(&rep.quotient.project(e), opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        // fc is invariant, so base cosets pull their translates along.
        SetRepr::Principal(bases) => {
            for b in bases {
                if !fc.contains_elem(&rep.quotient.project(b), opts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The preimage in the original group of a set over the quotient. The
/// violating weight and its negative both lie in `sg`, so a principal
/// preimage needs no extra saturation.
fn preimage_set(
    fc: &InvariantSet,
    w: &WeightSystem,
    rep: &ViolatedReport,
    opts: &Options,
) -> Result<InvariantSet> {
    let spec = w.spec();
    match fc.repr() {
        SetRepr::Empty => Ok(InvariantSet::empty(w)),
        SetRepr::Full => Ok(InvariantSet::full(w)),
        SetRepr::Finite(cosets) => {
            let mut elems = Vec::new();
            for c in cosets {
                let mut cur = rep.quotient.lift(c);
                for _ in 0..rep.order_k {
                    elems.push(cur.clone());
                    cur = spec.add(&cur, &rep.weight);
                }
            }
            InvariantSet::from_elems(w, elems, opts)
        }
        SetRepr::Principal(bases) => {
            let lifted = bases.iter().map(|b| rep.quotient.lift(b)).collect();
            InvariantSet::principal(w, lifted, opts)
        }
    }
}

/// A candidate closed subset of the primitive ideal space: the circle pair
/// plus the members of Δ it should carry.
#[derive(Clone, Debug)]
pub struct ClosedSetQuery {
    pub ypair: YPair,
    pub lambda: Vec<InvariantSet>,
}

/// Decides whether the query describes a closed subset: the circle pair
/// must validate and Λ must match exactly the known Δ members whose
/// circles all lie in the set.
pub fn is_closed_in_prim(
    w: &WeightSystem,
    report: &ConditionReport,
    query: &ClosedSetQuery,
    opts: &Options,
) -> Result<bool> {
    let rep = require_violated(report, "is_closed_in_prim")?;
    if !validate_ypair(w, report, &query.ypair, opts)? {
        return Ok(false);
    }
    let delta = detect_delta(w, opts)?;
    let mut expected = Vec::new();
    for d in delta {
        if cosets_under(&d, &query.ypair.full_cosets, rep, opts)? {
            expected.push(d);
        }
    }
    if expected.len() != query.lambda.len() {
        return Ok(false);
    }
    let mut used = vec![false; query.lambda.len()];
    for d in &expected {
        let mut hit = false;
        for (i, l) in query.lambda.iter().enumerate() {
            if !used[i] && set_eq(d, l, opts)? {
                used[i] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}
