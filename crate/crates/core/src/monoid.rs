//! The weight semigroup `sg` of a quasi-free action and its membership
//! problem.
//!
//! A [`WeightSystem`] lists finitely many prefix weights, one per leading
//! index, followed by a nonempty block of tail weight classes repeated
//! forever. The semigroup `sg` collects the sums of all finite index words.
//! Because words may repeat indices, `sg` is exactly the set of nonnegative
//! integer combinations of the distinct weight values, and membership is a
//! Diophantine feasibility question: torsion coordinates are resolved by
//! residue enumeration, the free part by a complete bounded search. Every
//! search is metered; exhausting the budget reports
//! [`Error::BudgetExceeded`] instead of guessing.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::abelian::{subgroup_generated, GroupElem, GroupSpec, Order};
use crate::error::{Error, Result};
use crate::finite::{ElemTable, ENUMERATION_CAP};
use crate::Options;

/// Weight data of a quasi-free action: a finite prefix of weights, one per
/// index, then tail classes repeated at every later index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    spec: GroupSpec,
    prefix: Vec<GroupElem>,
    tail: Vec<GroupElem>,
}

impl WeightSystem {
    pub fn new(spec: GroupSpec, prefix: Vec<GroupElem>, tail: Vec<GroupElem>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::Validation(
                "the tail must name at least one weight class".into(),
            ));
        }
        for e in prefix.iter().chain(&tail) {
            if e.coords().len() != spec.rank() {
                return Err(Error::Validation(format!(
                    "weight {e} does not live in {}",
                    spec.describe()
                )));
            }
        }
        Ok(WeightSystem { spec, prefix, tail })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn prefix(&self) -> &[GroupElem] {
        &self.prefix
    }

    pub fn tail(&self) -> &[GroupElem] {
        &self.tail
    }

    /// Weight at the 1-based index `i`.
    pub fn weight_at(&self, i: usize) -> Result<&GroupElem> {
        if i == 0 {
            return Err(Error::Validation("weight indices start at 1".into()));
        }
        let p = self.prefix.len();
        if i <= p {
            Ok(&self.prefix[i - 1])
        } else {
            Ok(&self.tail[(i - p - 1) % self.tail.len()])
        }
    }

    /// Distinct weight values in first-occurrence order (prefix, then tail).
    pub fn distinct_values(&self) -> Vec<GroupElem> {
        let mut out: Vec<GroupElem> = Vec::new();
        for v in self.prefix.iter().chain(&self.tail) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn tail_values(&self) -> Vec<GroupElem> {
        let mut out: Vec<GroupElem> = Vec::new();
        for v in &self.tail {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Distinct values realized at some index other than `i`. Tail classes
    /// recur at infinitely many indices, so excluding a tail index excludes
    /// nothing; excluding a prefix index drops only that one occurrence.
    pub fn values_avoiding(&self, i: usize) -> Result<Vec<GroupElem>> {
        if i == 0 {
            return Err(Error::Validation("weight indices start at 1".into()));
        }
        let mut out: Vec<GroupElem> = Vec::new();
        for (pos, v) in self.prefix.iter().enumerate() {
            if pos + 1 != i && !out.contains(v) {
                out.push(v.clone());
            }
        }
        for v in &self.tail {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Ok(out)
    }

    /// True when the value at index `i` occurs at no other index.
    pub fn value_unique_to_index(&self, i: usize) -> Result<bool> {
        let v = self.weight_at(i)?.clone();
        Ok(!self.values_avoiding(i)?.contains(&v))
    }
}

/// Witness for semigroup membership: how many times each distinct weight
/// value is used. Summing `count * value` over the map recovers the queried
/// element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub coefficients: BTreeMap<GroupElem, u64>,
}

impl MembershipCertificate {
    pub fn resum(&self, spec: &GroupSpec) -> GroupElem {
        let mut acc = spec.zero();
        for (v, count) in &self.coefficients {
            acc = spec.add(&acc, &spec.scalar_mul(&BigInt::from(*count), v));
        }
        acc
    }
}

/// Decides `x` in `sg`, returning a certificate on success and `None` on a
/// definite non-membership.
pub fn contains(
    w: &WeightSystem,
    x: &GroupElem,
    opts: &Options,
) -> Result<Option<MembershipCertificate>> {
    if x.coords().len() != w.spec().rank() {
        return Err(Error::Validation(format!(
            "element {x} does not live in {}",
            w.spec().describe()
        )));
    }
    if x.is_zero() {
        return Ok(Some(MembershipCertificate::default()));
    }
    if w.spec().is_finite() {
        return Ok(closure_table(w, opts)?.certificate(x));
    }
    let values = w.distinct_values();
    if !subgroup_generated(&values, w.spec()).contains(x) {
        return Ok(None);
    }
    let mut meter = search::Meter::new(opts.search_budget);
    solve_mixed(w, &values, x, &mut meter)
}

pub fn is_member(w: &WeightSystem, x: &GroupElem, opts: &Options) -> Result<bool> {
    Ok(contains(w, x, opts)?.is_some())
}

/// Decides membership in the escape semigroup `sg1` for index `i`: the union
/// of `u + sg` over all weight values `u` available at an index other than
/// `i`.
pub fn sg1_contains(w: &WeightSystem, i: usize, x: &GroupElem, opts: &Options) -> Result<bool> {
    for u in w.values_avoiding(i)? {
        let shifted = w.spec().sub(x, &u);
        if is_member(w, &shifted, opts)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Reachability table of `sg` over a finite group, computed by saturation
/// from `0` under adding each distinct weight value.
#[derive(Clone, Debug)]
pub struct ClosureTable {
    table: ElemTable,
    reachable: Vec<bool>,
    parent: Vec<Option<(usize, usize)>>,
    values: Vec<GroupElem>,
}

impl ClosureTable {
    pub fn contains(&self, x: &GroupElem) -> bool {
        self.reachable[self.table.index_of(x)]
    }

    pub fn elems(&self) -> Vec<GroupElem> {
        self.table
            .elems()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.reachable[*i])
            .map(|(_, e)| e.clone())
            .collect()
    }

    pub fn is_all(&self) -> bool {
        self.reachable.iter().all(|b| *b)
    }

    pub fn table(&self) -> &ElemTable {
        &self.table
    }

    pub fn reachable(&self) -> &[bool] {
        &self.reachable
    }

    fn certificate(&self, x: &GroupElem) -> Option<MembershipCertificate> {
        let mut idx = self.table.index_of(x);
        if !self.reachable[idx] {
            return None;
        }
        let mut cert = MembershipCertificate::default();
        while let Some((prev, vj)) = self.parent[idx] {
            *cert.coefficients.entry(self.values[vj].clone()).or_insert(0) += 1;
            idx = prev;
        }
        Some(cert)
    }
}

pub fn closure_table(w: &WeightSystem, _opts: &Options) -> Result<ClosureTable> {
    let table = ElemTable::new(w.spec(), "closure table", ENUMERATION_CAP)?;
    let values = w.distinct_values();
    let n = table.order() as usize;
    let perms: Vec<Vec<usize>> = values.iter().map(|v| table.translation(v)).collect();
    let mut reachable = vec![false; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let zero = table.index_of(&w.spec().zero());
    reachable[zero] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(zero);
    while let Some(cur) = queue.pop_front() {
        for (vj, perm) in perms.iter().enumerate() {
            let next = perm[cur];
            if !reachable[next] {
                reachable[next] = true;
                parent[next] = Some((cur, vj));
                queue.push_back(next);
            }
        }
    }
    Ok(ClosureTable { table, reachable, parent, values })
}

/// The elements of `sg` when it is a finite set, `None` otherwise. On an
/// infinite group, `sg` is finite exactly when every weight value lies in
/// the torsion subgroup.
pub fn sg_if_finite(w: &WeightSystem, opts: &Options) -> Result<Option<Vec<GroupElem>>> {
    let spec = w.spec();
    if spec.is_finite() {
        return Ok(Some(closure_table(w, opts)?.elems()));
    }
    let r = spec.free_rank();
    let values = w.distinct_values();
    if values.iter().any(|v| v.coords()[..r].iter().any(|c| !c.is_zero())) {
        return Ok(None);
    }
    let factors: Vec<u64> = spec
        .torsion()
        .iter()
        .map(|n| {
            n.to_u64().ok_or_else(|| {
                Error::Validation("torsion factors larger than 2^64 are not supported".into())
            })
        })
        .collect::<Result<_>>()?;
    let tspec = GroupSpec::new(0, factors).expect("factors come from a valid chain");
    let tvalues: Vec<GroupElem> = values
        .iter()
        .map(|v| tspec.elem(v.coords()[r..].to_vec()).expect("torsion slice is reduced"))
        .collect();
    let tw = WeightSystem::new(tspec, vec![], tvalues)?;
    let lifted = closure_table(&tw, opts)?
        .elems()
        .into_iter()
        .map(|e| {
            let mut coords = vec![BigInt::zero(); r];
            coords.extend(e.coords().iter().cloned());
            spec.elem(coords).expect("lift of a reduced torsion element")
        })
        .collect();
    Ok(Some(lifted))
}

/// True exactly when `sg` is the whole group.
pub fn is_full_group(w: &WeightSystem, opts: &Options) -> Result<bool> {
    if w.spec().is_finite() {
        return Ok(closure_table(w, opts)?.is_all());
    }
    let values = w.distinct_values();
    if !subgroup_generated(&values, w.spec()).is_full() {
        return Ok(false);
    }
    // sg is a group as soon as it contains the inverse of each generator;
    // then it coincides with the subgroup the generators span.
    for v in &values {
        if !is_member(w, &w.spec().neg(v), opts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Gen {
    free: Vec<BigInt>,
    tors: GroupElem,
    modulus: u64,
}

fn solve_mixed(
    w: &WeightSystem,
    values: &[GroupElem],
    x: &GroupElem,
    meter: &mut search::Meter,
) -> Result<Option<MembershipCertificate>> {
    let spec = w.spec();
    let r = spec.free_rank();
    let factors: Vec<u64> = spec
        .torsion()
        .iter()
        .map(|n| {
            n.to_u64().ok_or_else(|| {
                Error::Validation("torsion factors larger than 2^64 are not supported".into())
            })
        })
        .collect::<Result<_>>()?;
    let tspec = GroupSpec::new(0, factors).expect("factors come from a valid chain");
    let torsion_part = |g: &GroupElem| -> GroupElem {
        tspec.elem(g.coords()[r..].to_vec()).expect("torsion slice is reduced")
    };
    let free_part = |g: &GroupElem| -> Vec<BigInt> { g.coords()[..r].to_vec() };

    let gens: Vec<Gen> = values
        .iter()
        .map(|v| {
            let tors = torsion_part(v);
            let modulus = match tspec.order_of(&tors) {
                Order::Finite(n) => n
                    .to_u64()
                    .ok_or_else(|| Error::Validation("torsion order overflow".into()))?,
                Order::Infinite => {
                    return Err(Error::InternalInvariantBroken(
                        "torsion part with infinite order".into(),
                    ))
                }
            };
            Ok(Gen { free: free_part(v), tors, modulus })
        })
        .collect::<Result<_>>()?;

    let ctx = ResidueCtx {
        tspec: &tspec,
        gens: &gens,
        target_tors: torsion_part(x),
        target_free: free_part(x),
        values,
    };
    let mut residues = vec![0u64; gens.len()];
    ctx.dfs(0, &tspec.zero(), &mut residues, meter)
}

struct ResidueCtx<'a> {
    tspec: &'a GroupSpec,
    gens: &'a [Gen],
    target_tors: GroupElem,
    target_free: Vec<BigInt>,
    values: &'a [GroupElem],
}

impl ResidueCtx<'_> {
    /// Enumerates residue vectors `a` with `a_j < modulus_j`; a residue that
    /// matches the torsion target leaves the free-part system
    /// `sum b_j (modulus_j * free_j) = target_free - sum a_j free_j`.
    fn dfs(
        &self,
        depth: usize,
        acc: &GroupElem,
        residues: &mut Vec<u64>,
        meter: &mut search::Meter,
    ) -> Result<Option<MembershipCertificate>> {
        meter.spend(1)?;
        if depth == self.gens.len() {
            if *acc != self.target_tors {
                return Ok(None);
            }
            return self.free_stage(residues, meter);
        }
        let mut cur = acc.clone();
        for a in 0..self.gens[depth].modulus {
            if a > 0 {
                cur = self.tspec.add(&cur, &self.gens[depth].tors);
            }
            residues[depth] = a;
            if let Some(cert) = self.dfs(depth + 1, &cur, residues, meter)? {
                return Ok(Some(cert));
            }
        }
        residues[depth] = 0;
        Ok(None)
    }

    fn free_stage(
        &self,
        residues: &[u64],
        meter: &mut search::Meter,
    ) -> Result<Option<MembershipCertificate>> {
        let mut y = self.target_free.clone();
        for (g, a) in self.gens.iter().zip(residues) {
            for (yi, fi) in y.iter_mut().zip(&g.free) {
                *yi -= BigInt::from(*a) * fi;
            }
        }
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        let mut kept: Vec<usize> = Vec::new();
        for (j, g) in self.gens.iter().enumerate() {
            let col: Vec<BigInt> =
                g.free.iter().map(|fi| fi * BigInt::from(g.modulus)).collect();
            if col.iter().any(|c| !c.is_zero()) {
                cols.push(col);
                kept.push(j);
            }
        }
        let b = if y.iter().all(Zero::is_zero) {
            Some(vec![0u64; cols.len()])
        } else {
            search::solve_nonneg(&cols, &y, meter)?
        };
        let Some(b) = b else { return Ok(None) };
        let mut cert = MembershipCertificate::default();
        for (j, a) in residues.iter().enumerate() {
            if *a > 0 {
                *cert.coefficients.entry(self.values[j].clone()).or_insert(0) += *a;
            }
        }
        for (slot, j) in kept.iter().enumerate() {
            if b[slot] > 0 {
                *cert.coefficients.entry(self.values[*j].clone()).or_insert(0) +=
                    b[slot] * self.gens[*j].modulus;
            }
        }
        Ok(Some(cert))
    }
}

mod search {
    //! Complete nonnegative-integer feasibility search for `G b = y`.
    //!
    //! The homogenized system `[G | -y] z = 0` is explored breadth-first from
    //! the unit vectors, extending `z` by `e_j` only when the step shrinks
    //! the defect (`<Az, Ae_j> < 0`). Nodes dominated by an already-found
    //! homogeneous solution are pruned, as are nodes using the target column
    //! twice. The walk terminates on its own; the meter bounds pathological
    //! blowup.

    use super::*;
    use std::collections::HashSet;

    pub struct Meter {
        pub budget: u64,
        spent: u64,
    }

    impl Meter {
        pub fn new(budget: u64) -> Self {
            Meter { budget, spent: 0 }
        }

        pub fn spend(&mut self, n: u64) -> Result<()> {
            self.spent = self.spent.saturating_add(n);
            if self.spent > self.budget {
                Err(Error::BudgetExceeded { explored: self.spent, budget: self.budget })
            } else {
                Ok(())
            }
        }
    }

    pub fn solve_nonneg(
        cols: &[Vec<BigInt>],
        y: &[BigInt],
        meter: &mut Meter,
    ) -> Result<Option<Vec<u64>>> {
        if cols.is_empty() {
            return Ok(None);
        }
        if cols[0].len() == 1 {
            if let Some(answer) = scalar_fast_path(cols, y, meter)? {
                return Ok(answer);
            }
        }
        branch_search(cols, y, meter)
    }

    /// One-dimensional targets with same-sign generators reduce to a coin
    /// problem, solved by dynamic programming over `[0, y]`. Returns `None`
    /// when the signs are mixed and the general search must run.
    #[allow(clippy::type_complexity)]
    fn scalar_fast_path(
        cols: &[Vec<BigInt>],
        y: &[BigInt],
        meter: &mut Meter,
    ) -> Result<Option<Option<Vec<u64>>>> {
        let mut vals: Vec<BigInt> = cols.iter().map(|c| c[0].clone()).collect();
        let mut target = y[0].clone();
        if vals.iter().all(|v| v.sign() == Sign::Minus) {
            for v in &mut vals {
                *v = -&*v;
            }
            target = -target;
        } else if !vals.iter().all(|v| v.sign() == Sign::Plus) {
            return Ok(None);
        }
        if target.sign() != Sign::Plus {
            return Ok(Some(None));
        }
        if vals.len() == 1 {
            return Ok(Some(if (&target % &vals[0]).is_zero() {
                target.checked_div(&vals[0]).and_then(|q| q.to_u64()).map(|q| vec![q])
            } else {
                None
            }));
        }
        let Some(t) = target.to_u64() else {
            meter.spend(meter.budget)?;
            unreachable!("spending the whole budget always errors");
        };
        meter.spend(t)?;
        let small: Vec<u64> = vals.iter().map(|v| v.to_u64().unwrap_or(u64::MAX)).collect();
        let mut parent: Vec<Option<usize>> = vec![None; t as usize + 1];
        let mut reach = vec![false; t as usize + 1];
        reach[0] = true;
        for s in 1..=t as usize {
            for (j, v) in small.iter().enumerate() {
                let v = *v as usize;
                if v <= s && v > 0 && reach[s - v] {
                    reach[s] = true;
                    parent[s] = Some(j);
                    break;
                }
            }
        }
        if !reach[t as usize] {
            return Ok(Some(None));
        }
        let mut counts = vec![0u64; vals.len()];
        let mut s = t as usize;
        while s > 0 {
            let j = parent[s].expect("reachable states have parents");
            counts[j] += 1;
            s -= small[j] as usize;
        }
        Ok(Some(Some(counts)))
    }

    fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn dominated(z: &[u64], minimals: &[Vec<u64>]) -> bool {
        minimals.iter().any(|m| m.iter().zip(z).all(|(mi, zi)| mi <= zi))
    }

    fn branch_search(
        cols: &[Vec<BigInt>],
        y: &[BigInt],
        meter: &mut Meter,
    ) -> Result<Option<Vec<u64>>> {
        let q = cols.len();
        let mut acols: Vec<Vec<BigInt>> = cols.to_vec();
        acols.push(y.iter().map(|v| -v).collect());
        let dim = q + 1;

        let mut frontier: Vec<(Vec<u64>, Vec<BigInt>)> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for j in 0..dim {
            let mut z = vec![0u64; dim];
            z[j] = 1;
            seen.insert(z.clone());
            frontier.push((z, acols[j].clone()));
        }
        let mut minimals: Vec<Vec<u64>> = Vec::new();

        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (z, az) in frontier {
                if az.iter().all(Zero::is_zero) {
                    if z[q] == 1 {
                        return Ok(Some(z[..q].to_vec()));
                    }
                    minimals.push(z);
                    continue;
                }
                for j in 0..dim {
                    if j == q && z[q] >= 1 {
                        continue;
                    }
                    if dot(&az, &acols[j]).sign() != Sign::Minus {
                        continue;
                    }
                    let mut z2 = z.clone();
                    z2[j] += 1;
                    if dominated(&z2, &minimals) || seen.contains(&z2) {
                        continue;
                    }
                    meter.spend(1)?;
                    seen.insert(z2.clone());
                    next.push((z2, add_vec(&az, &acols[j])));
                }
            }
            frontier = next;
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupSpec {
        GroupSpec::new(1, vec![]).unwrap()
    }

    fn weights(spec: &GroupSpec, prefix: &[&[i64]], tail: &[&[i64]]) -> WeightSystem {
        WeightSystem::new(
            spec.clone(),
            prefix.iter().map(|c| spec.elem_i64(c).unwrap()).collect(),
            tail.iter().map(|c| spec.elem_i64(c).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_word_always_contributes_zero() {
        let w = weights(&z(), &[], &[&[2], &[3]]);
        let cert = contains(&w, &z().zero(), &Options::default()).unwrap().unwrap();
        assert!(cert.coefficients.is_empty());
    }

    #[test]
    fn numerical_semigroup_two_three_omits_one() {
        let w = weights(&z(), &[], &[&[2], &[3]]);
        let opts = Options::default();
        assert!(contains(&w, &z().elem_i64(&[1]).unwrap(), &opts).unwrap().is_none());
        for k in [2i64, 3, 4, 5, 6, 7, 12, 29] {
            let x = z().elem_i64(&[k]).unwrap();
            let cert = contains(&w, &x, &opts).unwrap().expect("member");
            assert_eq!(cert.resum(&z()), x, "certificate must re-sum to {k}");
        }
        assert!(contains(&w, &z().elem_i64(&[-2]).unwrap(), &opts).unwrap().is_none());
    }

    #[test]
    fn prefix_values_may_be_reused() {
        // Words may repeat an index, so one prefix occurrence of 2 still
        // yields 4 = 2 + 2.
        let w = weights(&z(), &[&[2]], &[&[5]]);
        let opts = Options::default();
        let four = z().elem_i64(&[4]).unwrap();
        let cert = contains(&w, &four, &opts).unwrap().expect("4 = 2 + 2");
        assert_eq!(cert.resum(&z()), four);
        assert!(contains(&w, &z().elem_i64(&[1]).unwrap(), &opts).unwrap().is_none());
        assert!(contains(&w, &z().elem_i64(&[3]).unwrap(), &opts).unwrap().is_none());
    }

    #[test]
    fn torsion_membership_with_certificate() {
        let g = GroupSpec::new(0, vec![6]).unwrap();
        let w = weights(&g, &[], &[&[2]]);
        let x = g.elem_i64(&[4]).unwrap();
        let cert = contains(&w, &x, &Options::default()).unwrap().expect("4 = 2 + 2 mod 6");
        assert_eq!(cert.resum(&g), x);
        assert_eq!(cert.coefficients.get(&g.elem_i64(&[2]).unwrap()), Some(&2));
        assert!(contains(&w, &g.elem_i64(&[3]).unwrap(), &Options::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn mixed_free_and_torsion_coordinates() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let w = weights(&g, &[&[0, 1]], &[&[1, 0]]);
        let opts = Options::default();
        let member = g.elem_i64(&[3, 1]).unwrap();
        let cert = contains(&w, &member, &opts).unwrap().expect("3*(1,0) + (0,1)");
        assert_eq!(cert.resum(&g), member);
        assert!(contains(&w, &g.elem_i64(&[-1, 0]).unwrap(), &opts).unwrap().is_none());
    }

    #[test]
    fn mixed_sign_free_weights_cover_a_full_sublattice() {
        let w = weights(&z(), &[], &[&[2], &[-2]]);
        let opts = Options::default();
        for k in [-6i64, -4, -2, 0, 2, 4, 6] {
            let x = z().elem_i64(&[k]).unwrap();
            let cert = contains(&w, &x, &opts).unwrap().expect("even numbers reachable");
            assert_eq!(cert.resum(&z()), x);
        }
        assert!(contains(&w, &z().elem_i64(&[3]).unwrap(), &opts).unwrap().is_none());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let w = weights(&z(), &[], &[&[2], &[3]]);
        let opts = Options::with_budget(10);
        let big = z().elem_i64(&[100_000]).unwrap();
        assert!(matches!(
            contains(&w, &big, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn escape_semigroup_on_the_marked_index() {
        // Weight 0 sits only at index 1; everything escaping must start with
        // the tail value 1.
        let w = weights(&z(), &[&[0]], &[&[1]]);
        let opts = Options::default();
        assert!(!sg1_contains(&w, 1, &z().zero(), &opts).unwrap());
        assert!(sg1_contains(&w, 1, &z().elem_i64(&[1]).unwrap(), &opts).unwrap());
        assert!(sg1_contains(&w, 1, &z().elem_i64(&[5]).unwrap(), &opts).unwrap());
        assert!(!sg1_contains(&w, 1, &z().elem_i64(&[-1]).unwrap(), &opts).unwrap());
    }

    #[test]
    fn escape_semigroup_ignores_removed_tail_indices() {
        let w = weights(&z(), &[], &[&[2], &[3]]);
        let opts = Options::default();
        // Index 2 carries value 3, which recurs at later tail indices.
        assert!(sg1_contains(&w, 2, &z().elem_i64(&[3]).unwrap(), &opts).unwrap());
        assert!(sg1_contains(&w, 2, &z().elem_i64(&[2]).unwrap(), &opts).unwrap());
        assert!(!sg1_contains(&w, 2, &z().zero(), &opts).unwrap());
    }

    #[test]
    fn closure_table_of_even_residues() {
        let g = GroupSpec::new(0, vec![6]).unwrap();
        let w = weights(&g, &[], &[&[2]]);
        let closure = closure_table(&w, &Options::default()).unwrap();
        let got: Vec<i64> = closure
            .elems()
            .iter()
            .map(|e| e.coords()[0].to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![0, 2, 4]);
        assert!(!closure.is_all());
    }

    #[test]
    fn closure_table_generating_pair_fills_klein_group() {
        let g = GroupSpec::new(0, vec![2, 2]).unwrap();
        let w = weights(&g, &[], &[&[1, 0], &[0, 1]]);
        assert!(closure_table(&w, &Options::default()).unwrap().is_all());
    }

    #[test]
    fn contains_and_closure_table_agree_exhaustively() {
        let g = GroupSpec::new(0, vec![2, 4]).unwrap();
        let w = weights(&g, &[&[1, 1]], &[&[0, 2]]);
        let opts = Options::default();
        let closure = closure_table(&w, &opts).unwrap();
        for e in closure.table().elems() {
            let member = contains(&w, e, &opts).unwrap();
            assert_eq!(member.is_some(), closure.contains(e), "mismatch at {e}");
            if let Some(cert) = member {
                assert_eq!(cert.resum(&g), *e);
            }
        }
    }

    #[test]
    fn full_group_detection() {
        let opts = Options::default();
        assert!(is_full_group(&weights(&z(), &[], &[&[1], &[-1]]), &opts).unwrap());
        assert!(!is_full_group(&weights(&z(), &[], &[&[1]]), &opts).unwrap());
        let z3 = GroupSpec::new(0, vec![3]).unwrap();
        assert!(is_full_group(&weights(&z3, &[], &[&[1]]), &opts).unwrap());
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        assert!(!is_full_group(&weights(&z4, &[], &[&[2]]), &opts).unwrap());
        let z2 = GroupSpec::new(2, vec![]).unwrap();
        assert!(!is_full_group(&weights(&z2, &[], &[&[1, 0]]), &opts).unwrap());
        assert!(is_full_group(
            &weights(&z2, &[], &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            &opts
        )
        .unwrap());
    }

    #[test]
    fn weight_indexing_wraps_the_tail() {
        let w = weights(&z(), &[&[9]], &[&[2], &[3]]);
        assert_eq!(*w.weight_at(1).unwrap(), z().elem_i64(&[9]).unwrap());
        assert_eq!(*w.weight_at(2).unwrap(), z().elem_i64(&[2]).unwrap());
        assert_eq!(*w.weight_at(3).unwrap(), z().elem_i64(&[3]).unwrap());
        assert_eq!(*w.weight_at(4).unwrap(), z().elem_i64(&[2]).unwrap());
        assert!(w.value_unique_to_index(1).unwrap());
        assert!(!w.value_unique_to_index(2).unwrap());
    }
}
