//! Finite groups as validated multiplication tables.
//!
//! Elements are indices 0..n with the identity fixed at index 0. The
//! constructors emit canonical orderings (residues for cyclic groups,
//! lexicographic tuples for products) so every downstream report is
//! reproducible byte for byte. There is no presentation machinery here:
//! every computation in this crate needs only element arithmetic.

use crate::fpalgebra::{is_prime, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Default cap on group order; bar-complex sizes grow as a power of it.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the configured cap {cap}")]
    SizeCapExceeded { order: usize, cap: usize },
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("the given members do not form a subgroup of the parent group")]
    NotASubgroup,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// A finite group stored extensionally: an order-n multiplication table
/// with `table[a * n + b] = a * b` and the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate and adopt an explicit multiplication table.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!(
                    "row of length {} in a table of order {n}",
                    row.len()
                )));
            }
            for &e in row {
                if e >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {e} out of range for order {n}"
                    )));
                }
                flat.push(e);
            }
        }
        Self::from_flat_table(n, flat)
    }

    fn from_flat_table(n: usize, flat: Vec<usize>) -> Result<Self, GroupError> {
        // identity law at index 0
        for a in 0..n {
            if flat[a] != a || flat[a * n] != a {
                return Err(GroupError::InvalidTable(format!(
                    "index 0 is not a two-sided identity at element {a}"
                )));
            }
        }
        // inverses
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| flat[a * n + b] == 0) {
                Some(b) if flat[b * n + a] == 0 => inverse[a] = b,
                _ => {
                    return Err(GroupError::InvalidTable(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        // associativity, exhaustive
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { order: n, table: flat, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Abelian with every non-identity element of order exactly p.
    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.is_abelian() && (1..self.order).all(|a| self.element_order(a) as u64 == p)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order as u64;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }
}

/// Constructor description of a group; `Explicit` tables are fully
/// validated against the group laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    ElementaryAbelian { p: u64, rank: usize },
    Product { factors: Vec<GroupSpec> },
    Explicit { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    fn order(&self) -> usize {
        match self {
            GroupSpec::Cyclic { n } => *n,
            GroupSpec::ElementaryAbelian { p, rank } => (*p as usize).pow(*rank as u32),
            GroupSpec::Product { factors } => factors.iter().map(|f| f.order()).product(),
            GroupSpec::Explicit { table } => table.len(),
        }
    }
}

/// Build a group from its description, enforcing the order cap.
pub fn build_group(spec: &GroupSpec, max_order: usize) -> Result<FiniteGroup, GroupError> {
    let order = spec.order();
    if order > max_order {
        return Err(GroupError::SizeCapExceeded { order, cap: max_order });
    }
    match spec {
        GroupSpec::Cyclic { n } => {
            if *n == 0 {
                return Err(GroupError::InvalidTable("cyclic group of order 0".into()));
            }
            let table: Vec<usize> =
                (0..*n).flat_map(|a| (0..*n).map(move |b| (a + b) % n)).collect();
            FiniteGroup::from_flat_table(*n, table)
        }
        GroupSpec::ElementaryAbelian { p, rank } => {
            if !is_prime(*p) {
                return Err(GroupError::NotPrime(*p));
            }
            let factors = vec![GroupSpec::Cyclic { n: *p as usize }; *rank];
            if factors.is_empty() {
                return build_group(&GroupSpec::Cyclic { n: 1 }, max_order);
            }
            build_group(&GroupSpec::Product { factors }, max_order)
        }
        GroupSpec::Product { factors } => {
            if factors.is_empty() {
                return build_group(&GroupSpec::Cyclic { n: 1 }, max_order);
            }
            let built: Vec<FiniteGroup> = factors
                .iter()
                .map(|f| build_group(f, max_order))
                .collect::<Result<_, _>>()?;
            // lexicographic tuple indexing: the last factor varies fastest
            let sizes: Vec<usize> = built.iter().map(|g| g.order()).collect();
            let unrank = |mut i: usize| -> Vec<usize> {
                let mut tuple = vec![0; sizes.len()];
                for k in (0..sizes.len()).rev() {
                    tuple[k] = i % sizes[k];
                    i /= sizes[k];
                }
                tuple
            };
            let rank = |tuple: &[usize]| -> usize {
                tuple.iter().zip(&sizes).fold(0, |acc, (&t, &s)| acc * s + t)
            };
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                let ta = unrank(a);
                for b in 0..order {
                    let tb = unrank(b);
                    let prod: Vec<usize> = built
                        .iter()
                        .enumerate()
                        .map(|(k, g)| g.mul(ta[k], tb[k]))
                        .collect();
                    table.push(rank(&prod));
                }
            }
            FiniteGroup::from_flat_table(order, table)
        }
        GroupSpec::Explicit { table } => FiniteGroup::from_table(table),
    }
}

/// A subgroup of a shared parent group, stored as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    /// Adopt an explicit member list, verifying closure.
    pub fn new(parent: Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotASubgroup);
        }
        for &a in &members {
            if a >= parent.order() {
                return Err(GroupError::IndexOutOfRange { index: a, order: parent.order() });
            }
        }
        for &a in &members {
            if members.binary_search(&parent.inv(a)).is_err() {
                return Err(GroupError::NotASubgroup);
            }
            for &b in &members {
                if members.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup);
                }
            }
        }
        Ok(Self { parent, members })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Index [G : H].
    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.order())
            .all(|g| self.members.iter().all(|&x| self.contains(self.parent.conjugate(g, x))))
    }

    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.as_group().0.is_elementary_abelian(p)
    }

    /// Left cosets gH, each sorted, ordered by their minimal element, so
    /// the coset of the identity comes first and representatives are
    /// canonical (minimal element per coset).
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let n = self.parent.order();
        let mut seen = vec![false; n];
        let mut cosets = Vec::with_capacity(self.index());
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> =
                self.members.iter().map(|&h| self.parent.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Reindex the members as a standalone group. Returns the group and
    /// the member list in the order used for reindexing (the identity
    /// stays at index 0 because member lists are sorted).
    pub fn as_group(&self) -> (FiniteGroup, Vec<usize>) {
        let m = &self.members;
        let pos = |e: usize| m.binary_search(&e).expect("closed subgroup");
        let n = m.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in m {
            for &b in m {
                table.push(pos(self.parent.mul(a, b)));
            }
        }
        let g = FiniteGroup::from_flat_table(n, table).expect("subgroup inherits the group laws");
        (g, m.clone())
    }
}

/// Smallest subgroup containing the generators; empty generators give the
/// trivial subgroup.
pub fn subgroup_generated(
    parent: &Arc<FiniteGroup>,
    generators: &[usize],
) -> Result<Subgroup, GroupError> {
    let n = parent.order();
    for &g in generators {
        if g >= n {
            return Err(GroupError::IndexOutOfRange { index: g, order: n });
        }
    }
    let members = close_under_product(parent, generators);
    Ok(Subgroup { parent: Arc::clone(parent), members })
}

fn close_under_product(parent: &FiniteGroup, seed: &[usize]) -> Vec<usize> {
    let n = parent.order();
    let mut in_set = vec![false; n];
    in_set[0] = true;
    let mut queue: Vec<usize> = vec![0];
    for &g in seed {
        if !in_set[g] {
            in_set[g] = true;
            queue.push(g);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        for i in 0..queue.len() {
            let b = queue[i];
            for prod in [parent.mul(a, b), parent.mul(b, a)] {
                if !in_set[prod] {
                    in_set[prod] = true;
                    queue.push(prod);
                }
            }
        }
    }
    let mut members: Vec<usize> = (0..n).filter(|&e| in_set[e]).collect();
    members.sort_unstable();
    members
}

/// The subgroup generated by all commutators a b a^-1 b^-1.
pub fn commutator_subgroup(parent: &Arc<FiniteGroup>) -> Subgroup {
    let n = parent.order();
    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            gens.push(parent.commutator(a, b));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    subgroup_generated(parent, &gens).expect("commutators are in range")
}

/// Every subgroup of the parent, found by closing each known subgroup
/// under one extra generator until nothing new appears. Sorted by
/// (order, members) for deterministic output.
pub fn all_subgroups(parent: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let n = parent.order();
    let trivial = vec![0usize];
    let mut found: Vec<Vec<usize>> = vec![trivial.clone()];
    let mut queue = vec![trivial];
    while let Some(current) = queue.pop() {
        for g in 1..n {
            if current.binary_search(&g).is_ok() {
                continue;
            }
            let mut seed = current.clone();
            seed.push(g);
            let closed = close_under_product(parent, &seed);
            if !found.contains(&closed) {
                found.push(closed.clone());
                queue.push(closed);
            }
        }
    }
    found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    found
        .into_iter()
        .map(|members| Subgroup { parent: Arc::clone(parent), members })
        .collect()
}

/// dim over F_p of (G/[G,G]) tensor F_p.
///
/// The abelian quotient is presented by an integer relation matrix built
/// from Schreier generators of the kernel of Z^k -> Q (k generators of the
/// quotient, coset representatives from a breadth-first search), and the
/// rank is the number of Smith invariant factors divisible by p.
pub fn abelianization_p_rank(parent: &Arc<FiniteGroup>, p: u64) -> Result<usize, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let derived = commutator_subgroup(parent);
    let quotient = quotient_by_normal(parent, &derived);
    let m = quotient.order();
    if m == 1 {
        return Ok(0);
    }
    // greedy generating set of the quotient
    let mut gens: Vec<usize> = Vec::new();
    let quotient_arc = Arc::new(quotient);
    let mut span = vec![0usize];
    for e in 1..m {
        if span.binary_search(&e).is_err() {
            gens.push(e);
            let mut seed = span.clone();
            seed.push(e);
            span = close_under_product(&quotient_arc, &seed);
            if span.len() == m {
                break;
            }
        }
    }
    let quotient = quotient_arc;
    let k = gens.len();
    // BFS representatives r(q) in Z^k
    let mut rep: Vec<Option<Vec<i64>>> = vec![None; m];
    rep[0] = Some(vec![0; k]);
    let mut frontier = vec![0usize];
    while let Some(q) = frontier.pop() {
        for (i, &g) in gens.iter().enumerate() {
            let next = quotient.mul(q, g);
            if rep[next].is_none() {
                let mut r = rep[q].clone().unwrap();
                r[i] += 1;
                rep[next] = Some(r);
                frontier.push(next);
            }
        }
    }
    // Schreier rows r(q) + e_i - r(q * g_i) generate the relation lattice
    let mut rows: Vec<i64> = Vec::new();
    let mut row_count = 0;
    for q in 0..m {
        for (i, &g) in gens.iter().enumerate() {
            let target = quotient.mul(q, g);
            let rq = rep[q].as_ref().unwrap();
            let rt = rep[target].as_ref().unwrap();
            let mut row: Vec<i64> = rq.iter().zip(rt).map(|(&a, &b)| a - b).collect();
            row[i] += 1;
            if row.iter().any(|&v| v != 0) {
                rows.extend_from_slice(&row);
                row_count += 1;
            }
        }
    }
    if row_count == 0 {
        // no relations at all cannot happen for a finite nontrivial group
        return Ok(0);
    }
    let matrix = IntegerMatrix::from_i64(row_count, k, &rows).expect("consistent row length");
    let factors = matrix.smith_normal_form();
    let big_p = BigInt::from(p);
    let mut rank = factors.iter().filter(|d| (&**d % &big_p).is_zero()).count();
    // a zero factor would be a free summand; finite quotients have none,
    // but any generator not covered by a diagonal slot counts as free
    rank += k.saturating_sub(factors.len());
    Ok(rank)
}

/// Quotient of the parent by a normal subgroup, as a group on coset ids
/// ordered by minimal coset element (so the trivial coset is index 0).
fn quotient_by_normal(parent: &Arc<FiniteGroup>, normal: &Subgroup) -> FiniteGroup {
    debug_assert!(normal.is_normal());
    let cosets = normal.left_cosets();
    let n = parent.order();
    let mut coset_of = vec![usize::MAX; n];
    for (i, coset) in cosets.iter().enumerate() {
        for &x in coset {
            coset_of[x] = i;
        }
    }
    let m = cosets.len();
    let mut table = Vec::with_capacity(m * m);
    for a in cosets.iter() {
        for b in cosets.iter() {
            table.push(coset_of[parent.mul(a[0], b[0])]);
        }
    }
    FiniteGroup::from_flat_table(m, table).expect("quotient by a normal subgroup is a group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        Arc::new(build_group(&GroupSpec::Cyclic { n }, DEFAULT_MAX_ORDER).unwrap())
    }

    fn elem_ab(p: u64, rank: usize) -> Arc<FiniteGroup> {
        Arc::new(build_group(&GroupSpec::ElementaryAbelian { p, rank }, DEFAULT_MAX_ORDER).unwrap())
    }

    #[test]
    fn cyclic_4_has_a_generator_of_order_4() {
        let g = cyclic(4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn elementary_abelian_2_2_is_exponent_2() {
        let g = elem_ab(2, 2);
        assert_eq!(g.order(), 4);
        for a in 1..4 {
            assert_eq!(g.element_order(a), 2);
        }
        assert!(g.is_elementary_abelian(2));
    }

    #[test]
    fn broken_associativity_is_rejected() {
        // start from C3 and corrupt one entry
        let mut table = cyclic(3).table_rows();
        table[1][2] = 1;
        match FiniteGroup::from_table(&table) {
            Err(GroupError::InvalidTable(_)) => {}
            other => panic!("expected invalid-table, got {other:?}"),
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = build_group(&GroupSpec::Cyclic { n: 65 }, 64).unwrap_err();
        assert_eq!(err, GroupError::SizeCapExceeded { order: 65, cap: 64 });
    }

    #[test]
    fn subgroup_of_cyclic_6() {
        let g = cyclic(6);
        let h = subgroup_generated(&g, &[2]).unwrap();
        assert_eq!(h.members(), &[0, 2, 4]);
    }

    #[test]
    fn subgroup_generated_by_nothing_is_trivial() {
        let g = elem_ab(2, 2);
        let h = subgroup_generated(&g, &[]).unwrap();
        assert_eq!(h.members(), &[0]);
        let line = subgroup_generated(&g, &[1]).unwrap();
        assert_eq!(line.order(), 2);
    }

    #[test]
    fn out_of_range_generator_is_rejected() {
        let g = cyclic(4);
        assert_eq!(
            subgroup_generated(&g, &[7]).unwrap_err(),
            GroupError::IndexOutOfRange { index: 7, order: 4 }
        );
    }

    /// Brute-force closure written independently of `subgroup_generated`.
    fn closure_oracle(g: &FiniteGroup, seed: &[usize]) -> Vec<usize> {
        let mut set: Vec<usize> = vec![0];
        set.extend_from_slice(seed);
        set.sort_unstable();
        set.dedup();
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    for x in [g.mul(a, b), g.inv(a)] {
                        if !set.contains(&x) {
                            set.push(x);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                set.sort_unstable();
                return set;
            }
            set.sort_unstable();
        }
    }

    #[test]
    fn commutator_subgroup_of_abelian_groups_is_trivial() {
        for g in [cyclic(1), cyclic(5), elem_ab(2, 3), elem_ab(3, 2)] {
            assert_eq!(commutator_subgroup(&g).members(), &[0]);
        }
    }

    #[test]
    fn commutator_subgroup_of_dihedral_8() {
        let g = Arc::new(catalog::dihedral_group(4).unwrap());
        let derived = commutator_subgroup(&g);
        // oracle: brute-force enumeration of all commutators, then closure
        let mut comms: Vec<usize> = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .collect();
        comms.sort_unstable();
        comms.dedup();
        assert_eq!(derived.members(), closure_oracle(&g, &comms).as_slice());
        // r^2 is the element of order 2 in the rotation subgroup
        assert_eq!(derived.members(), &[0, 2]);
    }

    #[test]
    fn commutator_subgroup_of_quaternion_8() {
        let g = Arc::new(catalog::quaternion_group().unwrap());
        let derived = commutator_subgroup(&g);
        let mut comms: Vec<usize> = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .collect();
        comms.sort_unstable();
        comms.dedup();
        assert_eq!(derived.members(), closure_oracle(&g, &comms).as_slice());
        assert_eq!(derived.order(), 2);
        // the nontrivial member is the central element -1
        let minus_one = derived.members()[1];
        assert_eq!(g.element_order(minus_one), 2);
        assert!((0..8).all(|a| g.mul(a, minus_one) == g.mul(minus_one, a)));
    }

    /// Independent p-rank oracle: in a finite abelian group Q the F_p
    /// dimension of Q tensor F_p equals log_p of the number of solutions
    /// of x^p = e.
    fn p_rank_oracle(q: &FiniteGroup, p: u64) -> usize {
        let count = (0..q.order())
            .filter(|&x| {
                let mut acc = 0usize;
                for _ in 0..p {
                    acc = q.mul(acc, x);
                }
                acc == 0
            })
            .count();
        let mut rank = 0;
        let mut c = count as u64;
        while c.is_multiple_of(p) && c > 1 {
            c /= p;
            rank += 1;
        }
        rank
    }

    #[test]
    fn abelianization_rank_examples() {
        assert_eq!(abelianization_p_rank(&elem_ab(2, 2), 2).unwrap(), 2);
        assert_eq!(abelianization_p_rank(&elem_ab(3, 2), 3).unwrap(), 2);
        assert_eq!(abelianization_p_rank(&elem_ab(5, 1), 5).unwrap(), 1);
        assert_eq!(abelianization_p_rank(&cyclic(4), 2).unwrap(), 1);
        let d4 = Arc::new(catalog::dihedral_group(4).unwrap());
        assert_eq!(abelianization_p_rank(&d4, 2).unwrap(), 2);
        let q8 = Arc::new(catalog::quaternion_group().unwrap());
        assert_eq!(abelianization_p_rank(&q8, 2).unwrap(), 2);
    }

    #[test]
    fn abelianization_rank_matches_counting_oracle() {
        for (_, g) in catalog::builtin().entries() {
            let derived = commutator_subgroup(g);
            let quotient = super::quotient_by_normal(g, &derived);
            for p in [2u64, 3, 5] {
                assert_eq!(
                    abelianization_p_rank(g, p).unwrap(),
                    p_rank_oracle(&quotient, p),
                    "group of order {} at p = {p}",
                    g.order()
                );
            }
        }
    }

    #[test]
    fn lagrange_holds_for_all_catalog_subgroups() {
        for (_, g) in catalog::builtin().entries() {
            for h in all_subgroups(g) {
                assert_eq!(g.order() % h.order(), 0);
            }
        }
    }

    #[test]
    fn commutator_subgroup_is_normal() {
        for (_, g) in catalog::builtin().entries() {
            assert!(commutator_subgroup(g).is_normal());
        }
    }

    #[test]
    fn subgroup_counts_for_known_groups() {
        // V4: trivial, three lines, whole
        assert_eq!(all_subgroups(&elem_ab(2, 2)).len(), 5);
        // C6: one subgroup per divisor
        assert_eq!(all_subgroups(&cyclic(6)).len(), 4);
        // D4 has 10 subgroups, Q8 has 6
        let d4 = Arc::new(catalog::dihedral_group(4).unwrap());
        assert_eq!(all_subgroups(&d4).len(), 10);
        let q8 = Arc::new(catalog::quaternion_group().unwrap());
        assert_eq!(all_subgroups(&q8).len(), 6);
    }

    #[test]
    fn cosets_are_canonical() {
        let g = Arc::new(catalog::dihedral_group(4).unwrap());
        let h = subgroup_generated(&g, &[4]).unwrap(); // a reflection
        let cosets = h.left_cosets();
        assert_eq!(cosets.len(), 4);
        // ordered by minimal element, starting with the identity coset
        assert_eq!(cosets[0][0], 0);
        for w in cosets.windows(2) {
            assert!(w[0][0] < w[1][0]);
        }
    }

    #[test]
    fn subgroup_as_group_roundtrip() {
        let g = Arc::new(catalog::quaternion_group().unwrap());
        for h in all_subgroups(&g) {
            let (sub, members) = h.as_group();
            assert_eq!(sub.order(), h.order());
            for (i, &a) in members.iter().enumerate() {
                for (j, &b) in members.iter().enumerate() {
                    assert_eq!(members[sub.mul(i, j)], g.mul(a, b));
                }
            }
        }
    }
}
