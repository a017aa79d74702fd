//! Exact arithmetic in finitely generated abelian groups.
//!
//! A group is stored in invariant-factor form `Z^r + Z/n_1 + ... + Z/n_k`
//! with `n_1 | n_2 | ... | n_k` and every `n_j >= 2`. Elements are integer
//! coordinate vectors, free coordinates first, torsion coordinates reduced
//! into `[0, n_j)`. All integer work is arbitrary precision.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

type Mat = Vec<Vec<BigInt>>;

/// A finitely generated abelian group in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<BigUint>,
}

/// An element of a [`GroupSpec`], always stored in reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem {
    coords: Vec<BigInt>,
}

/// Order of a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl GroupSpec {
    /// Builds a group from its invariant factors. Factors equal to 1 are
    /// dropped; the remaining factors must form a divisibility chain.
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        let torsion: Vec<BigUint> =
            torsion.into_iter().filter(|n| *n != 1).map(BigUint::from).collect();
        for n in &torsion {
            if n.is_zero() {
                return Err(Error::Validation(
                    "torsion coefficient 0 is not allowed; use a free coordinate".into(),
                ));
            }
        }
        for w in torsion.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::Validation(format!(
                    "torsion coefficients must form a divisibility chain, but {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    /// Number of coordinates.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        let mut n = BigUint::one();
        for t in &self.torsion {
            n *= t;
        }
        Some(n)
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem { coords: vec![BigInt::zero(); self.rank()] }
    }

    /// Builds an element from raw coordinates, reducing torsion coordinates.
    pub fn elem(&self, coords: Vec<BigInt>) -> Result<GroupElem> {
        if coords.len() != self.rank() {
            return Err(Error::Validation(format!(
                "element has {} coordinates, expected {} for {}",
                coords.len(),
                self.rank(),
                self.describe()
            )));
        }
        let mut e = GroupElem { coords };
        self.reduce(&mut e);
        Ok(e)
    }

    pub fn elem_i64(&self, coords: &[i64]) -> Result<GroupElem> {
        self.elem(coords.iter().map(|c| BigInt::from(*c)).collect())
    }

    fn reduce(&self, e: &mut GroupElem) {
        for (j, n) in self.torsion.iter().enumerate() {
            let i = self.free_rank + j;
            e.coords[i] = e.coords[i].mod_floor(&BigInt::from(n.clone()));
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        let mut e = GroupElem { coords };
        self.reduce(&mut e);
        e
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        let mut e = GroupElem { coords: a.coords.iter().map(|x| -x).collect() };
        self.reduce(&mut e);
        e
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: &BigInt, a: &GroupElem) -> GroupElem {
        let mut e = GroupElem { coords: a.coords.iter().map(|x| x * k).collect() };
        self.reduce(&mut e);
        e
    }

    /// Order of `g`: infinite as soon as a free coordinate is nonzero,
    /// otherwise the lcm of the cyclic-coordinate orders.
    pub fn order_of(&self, g: &GroupElem) -> Order {
        for c in &g.coords[..self.free_rank] {
            if !c.is_zero() {
                return Order::Infinite;
            }
        }
        let mut ord = BigUint::one();
        for (j, n) in self.torsion.iter().enumerate() {
            let c = g.coords[self.free_rank + j].to_biguint().expect("reduced coordinate");
            let d = n.gcd(&c);
            ord = ord.lcm(&(n / d));
        }
        Order::Finite(ord)
    }

    /// Human-readable name such as `Z^2 + Z/4`, or `0` for the trivial group.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for n in &self.torsion {
            parts.push(format!("Z/{n}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Rows spanning the relation lattice of this group inside `Z^rank`.
    fn relation_rows(&self) -> Mat {
        let m = self.rank();
        let mut rows = Vec::new();
        for (j, n) in self.torsion.iter().enumerate() {
            let mut row = vec![BigInt::zero(); m];
            row[self.free_rank + j] = BigInt::from(n.clone());
            rows.push(row);
        }
        rows
    }
}

impl GroupElem {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Canonicalizes a presentation `Z^rank / <relations>` into invariant-factor
/// form via the Smith normal form of the relation matrix.
pub fn normalize(rank: usize, relations: &[Vec<BigInt>]) -> Result<GroupSpec> {
    for rel in relations {
        if rel.len() != rank {
            return Err(Error::Validation(format!(
                "relation has {} coordinates, expected {rank}",
                rel.len()
            )));
        }
    }
    let ambient = GroupSpec { free_rank: rank, torsion: Vec::new() };
    let sub = SubgroupDescriptor::from_rows(&ambient, relations.to_vec());
    Ok(quotient(&ambient, &sub).group)
}

/// Identity alias for [`GroupSpec::order_of`]; kept as a free function to
/// mirror the other group operations.
pub fn order_of(g: &GroupElem, spec: &GroupSpec) -> Order {
    spec.order_of(g)
}

/// A subgroup of a [`GroupSpec`], stored as the canonical Hermite normal
/// form of its preimage lattice in `Z^rank`. Two descriptors are equal as
/// values exactly when they describe the same subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupDescriptor {
    ambient: GroupSpec,
    rows: Mat,
}

impl SubgroupDescriptor {
    fn from_rows(ambient: &GroupSpec, mut rows: Mat) -> Self {
        rows.extend(ambient.relation_rows());
        let rows = hermite(rows, ambient.rank());
        SubgroupDescriptor { ambient: ambient.clone(), rows }
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    /// Canonical lattice rows (the ambient relations are always included).
    pub fn rows(&self) -> &Mat {
        &self.rows
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        lattice_contains(&self.rows, g.coords())
    }

    /// True when the subgroup is the whole group.
    pub fn is_full(&self) -> bool {
        let m = self.ambient.rank();
        if self.rows.len() != m {
            return false;
        }
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

/// Subgroup generated by `gens` inside `spec`.
pub fn subgroup_generated(gens: &[GroupElem], spec: &GroupSpec) -> SubgroupDescriptor {
    let rows = gens.iter().map(|g| g.coords().to_vec()).collect();
    SubgroupDescriptor::from_rows(spec, rows)
}

/// A quotient group together with the projection map onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub group: GroupSpec,
    ambient: GroupSpec,
    u: Mat,
    kinds: Vec<CoordKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum CoordKind {
    Free,
    Drop,
    Torsion(BigUint),
}

impl Quotient {
    /// Image of `g` under the projection.
    pub fn project(&self, g: &GroupElem) -> GroupElem {
        let w: Vec<BigInt> = self
            .u
            .iter()
            .map(|row| row.iter().zip(g.coords()).map(|(a, b)| a * b).sum())
            .collect();
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (i, kind) in self.kinds.iter().enumerate() {
            match kind {
                CoordKind::Free => free.push(w[i].clone()),
                CoordKind::Drop => {}
                CoordKind::Torsion(n) => tors.push(w[i].mod_floor(&BigInt::from(n.clone()))),
            }
        }
        free.extend(tors);
        self.group.elem(free).expect("projection produces valid coordinates")
    }

    /// A section of the projection: `project(lift(y)) == y` for every `y`
    /// in the quotient group.
    pub fn lift(&self, y: &GroupElem) -> GroupElem {
        let m = self.u.len();
        let mut w = vec![BigInt::zero(); m];
        let mut it = y.coords().iter();
        for (i, kind) in self.kinds.iter().enumerate() {
            if matches!(kind, CoordKind::Free) {
                w[i] = it.next().expect("free coordinate present").clone();
            }
        }
        for (i, kind) in self.kinds.iter().enumerate() {
            if matches!(kind, CoordKind::Torsion(_)) {
                w[i] = it.next().expect("torsion coordinate present").clone();
            }
        }
        let inv = invert_unimodular(&self.u);
        let coords: Vec<BigInt> = inv
            .iter()
            .map(|row| row.iter().zip(&w).map(|(a, b)| a * b).sum())
            .collect();
        self.ambient.elem(coords).expect("lift produces valid coordinates")
    }
}

/// Quotient of `spec` by the subgroup `h`, in invariant-factor form.
pub fn quotient(spec: &GroupSpec, h: &SubgroupDescriptor) -> Quotient {
    assert_eq!(spec, h.ambient(), "subgroup belongs to a different group");
    let m = spec.rank();
    // Relation columns: the subgroup lattice rows, transposed.
    let s = h.rows.len();
    let mut b = vec![vec![BigInt::zero(); s]; m];
    for (j, row) in h.rows.iter().enumerate() {
        for i in 0..m {
            b[i][j] = row[i].clone();
        }
    }
    let snf = smith(&b);
    let mut kinds = Vec::with_capacity(m);
    let mut free_rank = 0;
    let mut torsion = Vec::new();
    for i in 0..m {
        let d = if i < s { snf.d[i][i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            kinds.push(CoordKind::Free);
            free_rank += 1;
        } else if d.is_one() {
            kinds.push(CoordKind::Drop);
        } else {
            let n = d.to_biguint().expect("positive invariant factor");
            torsion.push(n.clone());
            kinds.push(CoordKind::Torsion(n));
        }
    }
    let group = GroupSpec { free_rank, torsion };
    Quotient { group, ambient: spec.clone(), u: snf.u, kinds }
}

/// Inverse of a unimodular integer matrix, computed exactly.
fn invert_unimodular(u: &Mat) -> Mat {
    let m = u.len();
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            (0..2 * m)
                .map(|j| {
                    if j < m {
                        BigRational::from(u[i][j].clone())
                    } else if j - m == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&i| !a[i][col].is_zero())
            .expect("unimodular matrix has full rank");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in &mut a[col] {
            *x /= &p;
        }
        for i in 0..m {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[m..]
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "inverse of a unimodular matrix is integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Integer matrix normal forms.

struct Snf {
    d: Mat,
    u: Mat,
    #[allow(dead_code)]
    v: Mat,
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form `d = u * a * v` with unimodular `u`, `v`.
fn smith(a: &Mat) -> Snf {
    let m = a.len();
    let s = if m == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(s);

    let find_pivot = |d: &Mat, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..s {
                if !d[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        best
    };

    for t in 0..m.min(s) {
        'pivot: loop {
            let Some((pi, pj)) = find_pivot(&d, t) else { break 'pivot };
            if pi != t {
                d.swap(pi, t);
                u.swap(pi, t);
            }
            if pj != t {
                for row in &mut d {
                    row.swap(pj, t);
                }
                for row in &mut v {
                    row.swap(pj, t);
                }
            }
            let mut clean = true;
            for r in t + 1..m {
                if !d[r][t].is_zero() {
                    let q = d[r][t].div_floor(&d[t][t]);
                    row_sub(&mut d, r, t, &q);
                    row_sub(&mut u, r, t, &q);
                    if !d[r][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for c in t + 1..s {
                if !d[t][c].is_zero() {
                    let q = d[t][c].div_floor(&d[t][t]);
                    col_sub(&mut d, c, t, &q);
                    col_sub(&mut v, c, t, &q);
                    if !d[t][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Force the pivot to divide every remaining entry.
            for i in t + 1..m {
                if d[i].iter().skip(t + 1).any(|x| !x.mod_floor(&d[t][t]).is_zero()) {
                    let one = BigInt::one();
                    row_sub(&mut d, t, i, &-&one);
                    row_sub(&mut u, t, i, &-&one);
                    continue 'pivot;
                }
            }
            break 'pivot;
        }
        if d[t][t].is_negative() {
            for x in &mut d[t] {
                *x = -&*x;
            }
            for x in &mut u[t] {
                *x = -&*x;
            }
        }
    }
    Snf { d, u, v }
}

/// `rows[i] -= q * rows[j]`
fn row_sub(mat: &mut Mat, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let rj = mat[j].clone();
    for (x, y) in mat[i].iter_mut().zip(rj) {
        *x -= q * y;
    }
}

/// `cols[i] -= q * cols[j]`
fn col_sub(mat: &mut Mat, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in mat.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

/// Canonical row Hermite normal form of the lattice spanned by `rows`:
/// echelon shape, positive pivots, entries above a pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
fn hermite(mut rows: Mat, width: usize) -> Mat {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut r = 0;
    for col in 0..width {
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][col].is_zero()
                    && best.map_or(true, |b| rows[i][col].abs() < rows[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(i) = best else { break };
            rows.swap(r, i);
            if rows[r][col].is_negative() {
                for x in &mut rows[r] {
                    *x = -&*x;
                }
            }
            let mut clean = true;
            for k in r + 1..rows.len() {
                if !rows[k][col].is_zero() {
                    let q = rows[k][col].div_floor(&rows[r][col]);
                    row_sub(&mut rows, k, r, &q);
                    if !rows[k][col].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                for k in 0..r {
                    let q = rows[k][col].div_floor(&rows[r][col]);
                    row_sub(&mut rows, k, r, &q);
                }
                r += 1;
                break;
            }
        }
    }
    rows.truncate(r);
    rows
}

/// Membership of an integer vector in the lattice spanned by Hermite rows.
fn lattice_contains(rows: &Mat, x: &[BigInt]) -> bool {
    let mut x = x.to_vec();
    for row in rows {
        let p = row.iter().position(|v| !v.is_zero()).expect("no zero rows in normal form");
        if x[p].is_zero() {
            continue;
        }
        if !x[p].mod_floor(&row[p]).is_zero() {
            return false;
        }
        let q = &x[p] / &row[p];
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= &q * ri;
        }
    }
    x.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_mul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let k = b.len();
        let m = if k == 0 { 0 } else { b[0].len() };
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn normalize_single_relation() {
        let g = normalize(1, &[big(&[3])]).unwrap();
        assert_eq!(g.free_rank(), 0);
        assert_eq!(g.torsion(), &[BigUint::from(3u32)]);
    }

    #[test]
    fn normalize_rank_two_relation() {
        let g = normalize(2, &[big(&[2, 4])]).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[BigUint::from(2u32)]);
    }

    #[test]
    fn normalize_full_relations_gives_trivial_group() {
        let g = normalize(2, &[big(&[1, 0]), big(&[0, 1])]).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.describe(), "0");
    }

    #[test]
    fn new_rejects_broken_divisibility_chain() {
        assert!(GroupSpec::new(0, vec![2, 3]).is_err());
        assert!(GroupSpec::new(0, vec![2, 6]).is_ok());
        assert!(GroupSpec::new(0, vec![1, 5]).unwrap().torsion() == &[BigUint::from(5u32)]);
    }

    #[test]
    fn order_of_elements() {
        let z4 = GroupSpec::new(0, vec![4]).unwrap();
        assert_eq!(z4.order_of(&z4.elem_i64(&[1]).unwrap()), Order::Finite(BigUint::from(4u32)));
        assert_eq!(z4.order_of(&z4.elem_i64(&[2]).unwrap()), Order::Finite(BigUint::from(2u32)));

        let zz2 = GroupSpec::new(1, vec![2]).unwrap();
        assert_eq!(zz2.order_of(&zz2.elem_i64(&[1, 0]).unwrap()), Order::Infinite);
        assert_eq!(
            zz2.order_of(&zz2.elem_i64(&[0, 1]).unwrap()),
            Order::Finite(BigUint::from(2u32))
        );
        assert_eq!(zz2.order_of(&zz2.zero()), Order::Finite(BigUint::one()));
    }

    #[test]
    fn subgroup_of_integers_by_two_and_three_is_full() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let h = subgroup_generated(
            &[z.elem_i64(&[2]).unwrap(), z.elem_i64(&[3]).unwrap()],
            &z,
        );
        assert!(h.is_full());
        assert!(h.contains(&z.elem_i64(&[1]).unwrap()));
    }

    #[test]
    fn subgroup_membership_in_rank_two() {
        let z2 = GroupSpec::new(2, vec![]).unwrap();
        let h = subgroup_generated(
            &[z2.elem_i64(&[2, 0]).unwrap(), z2.elem_i64(&[0, 2]).unwrap()],
            &z2,
        );
        assert!(!h.is_full());
        assert!(h.contains(&z2.elem_i64(&[4, 2]).unwrap()));
        assert!(!h.contains(&z2.elem_i64(&[1, 0]).unwrap()));
    }

    #[test]
    fn subgroup_descriptor_is_canonical() {
        let z2 = GroupSpec::new(2, vec![]).unwrap();
        let h1 = subgroup_generated(
            &[z2.elem_i64(&[2, 1]).unwrap(), z2.elem_i64(&[0, 3]).unwrap()],
            &z2,
        );
        let h2 = subgroup_generated(
            &[z2.elem_i64(&[2, 4]).unwrap(), z2.elem_i64(&[-2, 2]).unwrap(), z2.elem_i64(&[2, 1]).unwrap()],
            &z2,
        );
        assert_eq!(h1, h2);
    }

    #[test]
    fn quotient_of_z_plus_z2_by_diagonal_is_z4() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let h = subgroup_generated(&[g.elem_i64(&[2, 1]).unwrap()], &g);
        let q = quotient(&g, &h);
        assert_eq!(q.group.free_rank(), 0);
        assert_eq!(q.group.torsion(), &[BigUint::from(4u32)]);
    }

    /// Independent coset-table check for the projection map: two elements in
    /// a bounded box project equally exactly when their difference lies in
    /// the subgroup.
    #[test]
    fn quotient_projection_matches_coset_table() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let h = subgroup_generated(&[g.elem_i64(&[2, 1]).unwrap()], &g);
        let q = quotient(&g, &h);
        let mut sample = Vec::new();
        for a in -2..=2 {
            for b in 0..2 {
                sample.push(g.elem_i64(&[a, b]).unwrap());
            }
        }
        for x in &sample {
            assert_eq!(q.project(x).is_zero(), h.contains(x), "kernel mismatch at {x}");
            for y in &sample {
                let same_coset = h.contains(&g.sub(x, y));
                assert_eq!(q.project(x) == q.project(y), same_coset, "coset mismatch at {x}, {y}");
            }
        }
    }

    #[test]
    fn quotient_by_trivial_subgroup_is_identity_up_to_iso() {
        let g = GroupSpec::new(1, vec![]).unwrap();
        let h = subgroup_generated(&[], &g);
        let q = quotient(&g, &h);
        assert_eq!(q.group, g);
        assert_eq!(q.project(&g.elem_i64(&[5]).unwrap()).coords()[0].abs(), BigInt::from(5));
    }

    #[test]
    fn lift_is_a_section_of_project() {
        let cases = vec![
            (GroupSpec::new(1, vec![2]).unwrap(), vec![vec![2, 1]]),
            (GroupSpec::new(1, vec![]).unwrap(), vec![]),
            (GroupSpec::new(1, vec![]).unwrap(), vec![vec![0]]),
            (GroupSpec::new(2, vec![]).unwrap(), vec![vec![1, 2]]),
            (GroupSpec::new(0, vec![2, 8]).unwrap(), vec![vec![0, 4]]),
        ];
        for (g, gens) in cases {
            let gens: Vec<GroupElem> =
                gens.iter().map(|c| g.elem_i64(c).unwrap()).collect();
            let h = subgroup_generated(&gens, &g);
            let q = quotient(&g, &h);
            let samples: Vec<GroupElem> = match q.group.order() {
                Some(_) => {
                    let mut out = Vec::new();
                    let mut seen = std::collections::BTreeSet::new();
                    for a in -3i64..=3 {
                        for b in -3i64..=3 {
                            let coords: Vec<i64> =
                                (0..q.group.rank()).map(|k| if k == 0 { a } else { b }).collect();
                            if let Ok(e) = q.group.elem_i64(&coords) {
                                if seen.insert(e.clone()) {
                                    out.push(e);
                                }
                            }
                        }
                    }
                    out
                }
                None => (-3i64..=3)
                    .map(|a| {
                        let coords: Vec<i64> =
                            (0..q.group.rank()).map(|k| if k == 0 { a } else { 1 }).collect();
                        q.group.elem_i64(&coords).unwrap()
                    })
                    .collect(),
            };
            for y in samples {
                assert_eq!(q.project(&q.lift(&y)), y, "section failure");
            }
        }
    }

    proptest! {
        #[test]
        fn smith_factors_the_matrix(
            entries in proptest::collection::vec(-9i64..=9, 1..=9),
            m in 1usize..=3,
        ) {
            let s = entries.len().div_ceil(m).max(1);
            let mut a: Mat = vec![vec![BigInt::zero(); s]; m];
            for (idx, e) in entries.iter().enumerate() {
                let (i, j) = (idx / s, idx % s);
                if i < m { a[i][j] = BigInt::from(*e); }
            }
            let snf = smith(&a);
            let uav = mat_mul(&mat_mul(&snf.u, &a), &snf.v);
            prop_assert_eq!(&uav, &snf.d);
            for i in 0..m {
                for j in 0..s {
                    if i != j {
                        prop_assert!(snf.d[i][j].is_zero());
                    }
                }
            }
            let mut diag: Vec<BigInt> =
                (0..m.min(s)).map(|i| snf.d[i][i].clone()).collect();
            diag.retain(|x| !x.is_zero());
            for w in diag.windows(2) {
                prop_assert!(w[1].mod_floor(&w[0]).is_zero(), "not a divisibility chain");
            }
        }

        #[test]
        fn hermite_membership_accepts_integer_combinations(
            g1 in proptest::collection::vec(-6i64..=6, 3),
            g2 in proptest::collection::vec(-6i64..=6, 3),
            c1 in -4i64..=4,
            c2 in -4i64..=4,
        ) {
            let rows = hermite(vec![big(&g1), big(&g2)], 3);
            let combo: Vec<BigInt> = (0..3)
                .map(|i| BigInt::from(c1 * g1[i] + c2 * g2[i]))
                .collect();
            prop_assert!(lattice_contains(&rows, &combo));
        }
    }
}
