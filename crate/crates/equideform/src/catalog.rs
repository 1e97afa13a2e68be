//! Built-in catalog of named test groups.
//!
//! Cyclic and elementary abelian groups come from their constructors; the
//! dihedral and quaternion groups of order 8 ship as explicit tables and
//! serve as the nonabelian test subjects. The same catalog can be loaded
//! from a JSON file (see the `io` module and `schemas/group_catalog.schema.json`).

use crate::groups::{build_group, FiniteGroup, GroupError, GroupSpec, DEFAULT_MAX_ORDER};
use std::sync::{Arc, OnceLock};

pub struct Catalog {
    entries: Vec<(String, Arc<FiniteGroup>)>,
}

impl Catalog {
    pub fn entries(&self) -> impl Iterator<Item = (&str, &Arc<FiniteGroup>)> {
        self.entries.iter().map(|(n, g)| (n.as_str(), g))
    }

    pub fn get(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Specs for every built-in group, in catalog order.
pub fn builtin_specs() -> Vec<(&'static str, GroupSpec)> {
    vec![
        ("trivial", GroupSpec::Cyclic { n: 1 }),
        ("C2", GroupSpec::Cyclic { n: 2 }),
        ("C3", GroupSpec::Cyclic { n: 3 }),
        ("C4", GroupSpec::Cyclic { n: 4 }),
        ("V4", GroupSpec::ElementaryAbelian { p: 2, rank: 2 }),
        ("C5", GroupSpec::Cyclic { n: 5 }),
        ("C6", GroupSpec::Cyclic { n: 6 }),
        ("C8", GroupSpec::Cyclic { n: 8 }),
        (
            "C2xC4",
            GroupSpec::Product {
                factors: vec![GroupSpec::Cyclic { n: 2 }, GroupSpec::Cyclic { n: 4 }],
            },
        ),
        ("E8", GroupSpec::ElementaryAbelian { p: 2, rank: 3 }),
        ("D4", GroupSpec::Explicit { table: dihedral_table(4) }),
        ("Q8", GroupSpec::Explicit { table: quaternion_table() }),
        ("C9", GroupSpec::Cyclic { n: 9 }),
        ("E9", GroupSpec::ElementaryAbelian { p: 3, rank: 2 }),
        ("C10", GroupSpec::Cyclic { n: 10 }),
        ("D5", GroupSpec::Explicit { table: dihedral_table(5) }),
    ]
}

pub fn builtin() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let entries = builtin_specs()
            .into_iter()
            .map(|(name, spec)| {
                let g = build_group(&spec, DEFAULT_MAX_ORDER)
                    .expect("builtin catalog specs are valid");
                (name.to_string(), Arc::new(g))
            })
            .collect();
        Catalog { entries }
    })
}

/// Multiplication table of the dihedral group of order 2m: elements
/// r^i s^j indexed as i + m*j, with r the rotation and s a reflection.
pub fn dihedral_table(m: usize) -> Vec<Vec<usize>> {
    let n = 2 * m;
    let unrank = |e: usize| (e % m, e / m);
    let rank = |i: usize, j: usize| i % m + m * (j % 2);
    (0..n)
        .map(|a| {
            let (i, j) = unrank(a);
            (0..n)
                .map(|b| {
                    let (k, l) = unrank(b);
                    // (r^i s^j)(r^k s^l) = r^(i + k (-1)^j) s^(j+l)
                    let exp = if j == 0 { (i + k) % m } else { (i + m - k % m) % m };
                    rank(exp, j + l)
                })
                .collect()
        })
        .collect()
}

/// Multiplication table of the quaternion group {1, -1, i, -i, j, -j, k, -k}
/// with the identity first and each negative following its positive.
pub fn quaternion_table() -> Vec<Vec<usize>> {
    // represent q = (sign, axis) with axis in {1, i, j, k}
    // index = 2*axis + (sign < 0)
    let mul = |a: usize, b: usize| -> usize {
        let (ax_a, neg_a) = (a / 2, a % 2 == 1);
        let (ax_b, neg_b) = (b / 2, b % 2 == 1);
        // axis products: table[a][b] = (axis, extra sign)
        let axis_mul = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let (ax, extra_neg) = axis_mul[ax_a][ax_b];
        let neg = neg_a ^ neg_b ^ extra_neg;
        2 * ax + usize::from(neg)
    };
    (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect()
}

pub fn dihedral_group(m: usize) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_table(&dihedral_table(m))
}

pub fn quaternion_group() -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_table(&quaternion_table())
}
