//! Ramification data for a Galois cover of curves: branch points with
//! their filtration orders and decomposition subgroups, plus the divisor
//! arithmetic on the quotient curve.
//!
//! The filtration of a branch point stores only the orders e_0 >= e_1 >= ...
//! of the ramification groups that exceed 1; unramified points are simply
//! absent from the list. The index-start convention is explicit in every
//! sum: `FromE0` starts at the e_0 term (the classical ramification
//! divisor), `FromE1` omits it.

use crate::groups::{FiniteGroup, Subgroup};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Where the per-point filtration sums start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexStart {
    FromE0,
    FromE1,
}

impl fmt::Display for IndexStart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexStart::FromE0 => write!(f, "from_e0"),
            IndexStart::FromE1 => write!(f, "from_e1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid cover: {0}")]
    Invalid(String),
    #[error("no-branch-points: the operation requires at least one branch point")]
    NoBranchPoints,
    #[error("genus-too-small: Riemann-Hurwitz gives g_X = {0}, below the required 2")]
    GenusTooSmall(i64),
    #[error("non-integral-genus: Riemann-Hurwitz total {0} is odd")]
    NonIntegralGenus(i64),
}

/// One branch point of the cover: the filtration orders (all > 1) and the
/// decomposition subgroup at a chosen point above it.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    /// e_0 >= e_1 >= ... >= e_n, each >= 2
    pub filtration: Vec<u64>,
    pub decomposition: Subgroup,
}

impl BranchPoint {
    /// True if some e_i with i >= 1 is present (nontrivial wild part).
    pub fn is_wild(&self) -> bool {
        self.filtration.len() > 1
    }

    pub fn e0(&self) -> u64 {
        self.filtration[0]
    }

    /// The divisor coefficient from the ordinary-curve count: 1 for a
    /// tamely ramified point, 2 for a wildly ramified one.
    pub fn lambda(&self) -> u64 {
        if self.is_wild() {
            2
        } else {
            1
        }
    }
}

/// A curve with automorphism group G, described by the characteristic,
/// the group, the genus of the quotient, and the branch data.
#[derive(Debug, Clone)]
pub struct RamifiedCover {
    pub p: u64,
    pub group: Arc<FiniteGroup>,
    pub quotient_genus: u64,
    pub branch_points: Vec<BranchPoint>,
}

/// A single validation violation, as data: the `code` is stable and the
/// message carries the specifics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: String,
    pub message: String,
}

impl Violation {
    fn new(code: &str, message: String) -> Self {
        Self { code: code.into(), message }
    }
}

impl RamifiedCover {
    pub fn branch_count(&self) -> usize {
        self.branch_points.len()
    }

    pub fn wild_count(&self) -> usize {
        self.branch_points.iter().filter(|b| b.is_wild()).count()
    }

    /// Check every invariant; an empty list means the cover is valid.
    /// Violations are data, not errors.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !crate::fpalgebra::is_prime(self.p) {
            out.push(Violation::new(
                "characteristic-not-prime",
                format!("characteristic {} is not prime", self.p),
            ));
        }
        let group_is_p_power = self.p > 1 && self.group.is_p_group(self.p);
        for (k, b) in self.branch_points.iter().enumerate() {
            if b.decomposition.parent().as_ref() != self.group.as_ref() {
                out.push(Violation::new(
                    "foreign-decomposition-group",
                    format!("branch point {k}: decomposition subgroup has a different parent"),
                ));
                continue;
            }
            if b.filtration.is_empty() {
                out.push(Violation::new(
                    "empty-filtration",
                    format!("branch point {k}: the filtration must contain e_0"),
                ));
                continue;
            }
            if b.filtration.iter().any(|&e| e < 2) {
                out.push(Violation::new(
                    "filtration-entry-below-2",
                    format!("branch point {k}: every filtration order must be at least 2"),
                ));
            }
            if b.filtration.windows(2).any(|w| w[0] < w[1]) {
                out.push(Violation::new(
                    "filtration-not-non-increasing",
                    format!("branch point {k}: filtration {:?} is not non-increasing", b.filtration),
                ));
            }
            if b.e0() != b.decomposition.order() as u64 {
                out.push(Violation::new(
                    "e0-differs-from-decomposition-order",
                    format!(
                        "branch point {k}: e_0 = {} but |G(b)| = {}",
                        b.e0(),
                        b.decomposition.order()
                    ),
                ));
            }
            if !b.is_wild() && self.p > 1 && b.e0() % self.p == 0 {
                // p dividing e_0 forces a nontrivial wild subgroup, so the
                // filtration cannot stop at e_0
                out.push(Violation::new(
                    "tame-order-divisible-by-p",
                    format!(
                        "branch point {k}: tame order {} is divisible by the characteristic {}",
                        b.e0(),
                        self.p
                    ),
                ));
            }
            for (i, &e) in b.filtration.iter().enumerate().skip(1) {
                if !is_power_of(e, self.p) {
                    out.push(Violation::new(
                        "wild-order-not-p-power",
                        format!("branch point {k}: e_{i} = {e} is not a power of {}", self.p),
                    ));
                }
                if b.e0() % e != 0 {
                    out.push(Violation::new(
                        "wild-order-does-not-divide-e0",
                        format!("branch point {k}: e_{i} = {e} does not divide e_0 = {}", b.e0()),
                    ));
                }
            }
            if group_is_p_power && self.group.order() > 1 {
                // inside a p-group a nontrivial tame quotient G_0/G_1
                // (cyclic of order prime to p) is impossible
                if !b.is_wild() {
                    out.push(Violation::new(
                        "tame-point-in-p-group",
                        format!(
                            "branch point {k}: tame ramification of order {} cannot occur in a p-group",
                            b.e0()
                        ),
                    ));
                } else if b.filtration[1] != b.e0() {
                    out.push(Violation::new(
                        "p-group-needs-e0-equal-e1",
                        format!(
                            "branch point {k}: in a p-group e_0 = {} must equal e_1 = {}",
                            b.e0(),
                            b.filtration[1]
                        ),
                    ));
                }
            }
        }
        if out.is_empty() {
            // Riemann-Hurwitz integrality and the genus hypothesis
            match self.genus_via_riemann_hurwitz_unchecked() {
                Err(CoverError::NonIntegralGenus(t)) => out.push(Violation::new(
                    "non-integral-genus",
                    format!("2g_X - 2 = {t} is odd"),
                )),
                Err(CoverError::GenusTooSmall(g)) => out.push(Violation::new(
                    "genus-too-small",
                    format!("Riemann-Hurwitz gives g_X = {g} < 2"),
                )),
                _ => {}
            }
        }
        out
    }

    pub fn require_valid(&self) -> Result<(), CoverError> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        // surface genus problems under their own error codes
        for v in &violations {
            if v.code == "genus-too-small" || v.code == "non-integral-genus" {
                return self.genus_via_riemann_hurwitz_unchecked().map(|_| ());
            }
        }
        let summary: Vec<&str> = violations.iter().map(|v| v.code.as_str()).collect();
        Err(CoverError::Invalid(summary.join(", ")))
    }

    /// deg R = sum_k (|G| / e_0^(k)) * sum_i (e_i^(k) - 1), with the inner
    /// sum starting at i = 0 or i = 1 depending on the convention; the
    /// orbit factor |G| / e_0 accounts for all points above each branch
    /// point.
    pub fn ramification_divisor_degree(&self, convention: IndexStart) -> Result<u64, CoverError> {
        self.require_valid()?;
        Ok(self.ramification_divisor_degree_unchecked(convention))
    }

    fn ramification_divisor_degree_unchecked(&self, convention: IndexStart) -> u64 {
        let order = self.group.order() as u64;
        self.branch_points
            .iter()
            .map(|b| {
                let skip = match convention {
                    IndexStart::FromE0 => 0,
                    IndexStart::FromE1 => 1,
                };
                let local: u64 = b.filtration.iter().skip(skip).map(|&e| e - 1).sum();
                (order / b.e0()) * local
            })
            .sum()
    }

    /// g_X from 2g_X - 2 = |G| (2g_Y - 2) + deg R, using the classical
    /// (from e_0) ramification divisor.
    pub fn genus_via_riemann_hurwitz(&self) -> Result<u64, CoverError> {
        self.require_valid()?;
        self.genus_via_riemann_hurwitz_unchecked()
    }

    fn genus_via_riemann_hurwitz_unchecked(&self) -> Result<u64, CoverError> {
        let order = self.group.order() as i64;
        let total = order * (2 * self.quotient_genus as i64 - 2)
            + self.ramification_divisor_degree_unchecked(IndexStart::FromE0) as i64;
        if total % 2 != 0 {
            return Err(CoverError::NonIntegralGenus(total));
        }
        let g_x = total / 2 + 1;
        if g_x < 2 {
            return Err(CoverError::GenusTooSmall(g_x));
        }
        Ok(g_x as u64)
    }

    /// Whether the data is compatible with an ordinary curve and a p-group
    /// of automorphisms: every filtration has length at most 2 (no e_2),
    /// every decomposition subgroup is elementary abelian of exponent p,
    /// and |G| is a power of p.
    pub fn ordinarity_check(&self) -> OrdinarityDiagnosis {
        let mut reasons = Vec::new();
        if !(self.group.order() == 1 || self.group.is_p_group(self.p)) {
            reasons.push(format!(
                "group order {} is not a power of the characteristic {}",
                self.group.order(),
                self.p
            ));
        }
        for (k, b) in self.branch_points.iter().enumerate() {
            if b.filtration.len() > 2 {
                reasons.push(format!("branch point {k}: e_2 != 0 (filtration has length > 2)"));
            }
            if b.decomposition.order() > 1 && !b.decomposition.is_elementary_abelian(self.p) {
                reasons.push(format!(
                    "branch point {k}: decomposition subgroup is not elementary abelian of exponent {}",
                    self.p
                ));
            }
        }
        OrdinarityDiagnosis { compatible: reasons.is_empty(), reasons }
    }

    /// l(K + A) = g_Y - 1 + r + s where A = sum lambda_i b_i; lambda_i is
    /// 1 at tame points and 2 at wild ones, and s counts the wild points.
    /// Exact because deg A > 0 forces l(-A) = 0, which needs r >= 1.
    pub fn ell_k_plus_a(&self) -> Result<EllKPlusA, CoverError> {
        self.require_valid()?;
        if self.branch_points.is_empty() {
            return Err(CoverError::NoBranchPoints);
        }
        let lambdas: Vec<u64> = self.branch_points.iter().map(|b| b.lambda()).collect();
        let r = self.branch_count() as u64;
        let s = self.wild_count() as u64;
        Ok(EllKPlusA { value: self.quotient_genus + r + s - 1, lambdas })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinarityDiagnosis {
    pub compatible: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllKPlusA {
    pub value: u64,
    pub lambdas: Vec<u64>,
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if p < 2 || n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, subgroup_generated, GroupSpec};

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        Arc::new(build_group(&GroupSpec::Cyclic { n }, 64).unwrap())
    }

    fn whole(g: &Arc<FiniteGroup>) -> Subgroup {
        subgroup_generated(g, &(0..g.order()).collect::<Vec<_>>()).unwrap()
    }

    fn cover(
        p: u64,
        group: &Arc<FiniteGroup>,
        g_y: u64,
        points: Vec<(Vec<u64>, Subgroup)>,
    ) -> RamifiedCover {
        RamifiedCover {
            p,
            group: Arc::clone(group),
            quotient_genus: g_y,
            branch_points: points
                .into_iter()
                .map(|(filtration, decomposition)| BranchPoint { filtration, decomposition })
                .collect(),
        }
    }

    #[test]
    fn well_formed_cover_has_no_violations() {
        let g = cyclic(3);
        let c = cover(3, &g, 2, vec![(vec![3, 3], whole(&g))]);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn increasing_filtration_is_flagged() {
        let g = cyclic(4);
        // non-p-group scenario is irrelevant here: use p = 2, C4, orders 4, 8
        let c = cover(2, &g, 2, vec![(vec![4, 8], whole(&g))]);
        let violations = c.validate();
        assert!(violations.iter().any(|v| v.code == "filtration-not-non-increasing"));
    }

    #[test]
    fn e0_must_match_decomposition_order() {
        let g = cyclic(4);
        let h = subgroup_generated(&g, &[2]).unwrap(); // order 2
        let c = cover(2, &g, 2, vec![(vec![4, 4], h)]);
        let violations = c.validate();
        assert!(violations.iter().any(|v| v.code == "e0-differs-from-decomposition-order"));
    }

    #[test]
    fn tame_point_inside_p_group_is_rejected() {
        let g = cyclic(4);
        let h = subgroup_generated(&g, &[2]).unwrap();
        let c = cover(2, &g, 2, vec![(vec![2], h)]);
        let violations = c.validate();
        assert!(violations.iter().any(|v| v.code == "tame-point-in-p-group"));
    }

    #[test]
    fn wild_p_group_point_needs_e1_equal_e0() {
        let g = cyclic(4);
        let c = cover(2, &g, 2, vec![(vec![4, 2], whole(&g))]);
        let violations = c.validate();
        assert!(violations.iter().any(|v| v.code == "p-group-needs-e0-equal-e1"));
    }

    #[test]
    fn divisor_degree_conventions() {
        let g = cyclic(3);
        let c = cover(3, &g, 2, vec![(vec![3, 3], whole(&g))]);
        // one point, |G| = e_0 = 3: from e_0 gives (3-1)+(3-1) = 4
        assert_eq!(c.ramification_divisor_degree(IndexStart::FromE0).unwrap(), 4);
        assert_eq!(c.ramification_divisor_degree(IndexStart::FromE1).unwrap(), 2);
    }

    #[test]
    fn unramified_cover_has_degree_zero() {
        let g = cyclic(2);
        let c = cover(2, &g, 2, vec![]);
        assert_eq!(c.ramification_divisor_degree(IndexStart::FromE0).unwrap(), 0);
        assert_eq!(c.ramification_divisor_degree(IndexStart::FromE1).unwrap(), 0);
    }

    #[test]
    fn riemann_hurwitz_examples() {
        // |G| = 2, g_Y = 2, unramified: 2g - 2 = 2*2, g = 3
        let g2 = cyclic(2);
        assert_eq!(cover(2, &g2, 2, vec![]).genus_via_riemann_hurwitz().unwrap(), 3);
        // |G| = 3, g_Y = 2, one point (3,3): 2g - 2 = 3*2 + 4, g = 6
        let g3 = cyclic(3);
        let c = cover(3, &g3, 2, vec![(vec![3, 3], whole(&g3))]);
        assert_eq!(c.genus_via_riemann_hurwitz().unwrap(), 6);
    }

    #[test]
    fn genus_below_two_is_an_error() {
        let g = cyclic(2);
        let c = cover(2, &g, 0, vec![]);
        assert_eq!(c.genus_via_riemann_hurwitz().unwrap_err(), CoverError::GenusTooSmall(-1));
    }

    #[test]
    fn odd_riemann_hurwitz_total_is_an_error() {
        // |G| = 2, g_Y = 1, one wild point (2, 2): total = 0 + 1*(1+1) ... even;
        // use filtration (2,2,2) to make it odd: 1+1+1 = 3
        let g = cyclic(2);
        let c = cover(2, &g, 1, vec![(vec![2, 2, 2], whole(&g))]);
        assert_eq!(
            c.genus_via_riemann_hurwitz().unwrap_err(),
            CoverError::NonIntegralGenus(3)
        );
    }

    #[test]
    fn ordinarity_diagnosis() {
        let g = cyclic(2);
        let ok = cover(2, &g, 2, vec![(vec![2, 2], whole(&g))]);
        assert!(ok.ordinarity_check().compatible);

        let long = cover(2, &g, 2, vec![(vec![2, 2, 2], whole(&g))]);
        let d = long.ordinarity_check();
        assert!(!d.compatible);
        assert!(d.reasons.iter().any(|r| r.contains("e_2")));

        let g4 = cyclic(4);
        let not_elem = cover(2, &g4, 2, vec![(vec![4, 4], whole(&g4))]);
        let d = not_elem.ordinarity_check();
        assert!(!d.compatible);
        assert!(d.reasons.iter().any(|r| r.contains("elementary abelian")));
    }

    #[test]
    fn ell_k_plus_a_counts() {
        // g_Y = 2, r = 2, one wild one tame: 2 - 1 + 2 + 1 = 4
        // tame points need a non-p-group; use C6 with p = 2, a wild C2 and
        // a tame C3
        let g = Arc::new(build_group(&GroupSpec::Cyclic { n: 6 }, 64).unwrap());
        let wild = subgroup_generated(&g, &[3]).unwrap(); // order 2
        let tame = subgroup_generated(&g, &[2]).unwrap(); // order 3
        let c = cover(2, &g, 2, vec![(vec![2, 2], wild), (vec![3], tame)]);
        let out = c.ell_k_plus_a().unwrap();
        assert_eq!(out.value, 4);
        assert_eq!(out.lambdas, vec![2, 1]);

        // g_Y = 0, r = 3, all wild: 0 - 1 + 3 + 3 = 5
        let g2 = cyclic(2);
        let w = || (vec![2u64, 2], whole(&g2));
        let c = cover(2, &g2, 0, vec![w(), w(), w()]);
        let out = c.ell_k_plus_a().unwrap();
        assert_eq!(out.value, 5);
    }

    #[test]
    fn tame_order_divisible_by_p_is_flagged() {
        let g = Arc::new(build_group(&GroupSpec::Cyclic { n: 6 }, 64).unwrap());
        let h = subgroup_generated(&g, &[2]).unwrap(); // order 3
        let c = cover(3, &g, 2, vec![(vec![3], h)]);
        let violations = c.validate();
        assert!(violations.iter().any(|v| v.code == "tame-order-divisible-by-p"));
    }

    #[test]
    fn ell_k_plus_a_requires_branch_points() {
        let g = cyclic(2);
        let c = cover(2, &g, 2, vec![]);
        assert_eq!(c.ell_k_plus_a().unwrap_err(), CoverError::NoBranchPoints);
    }

    #[test]
    fn degree_conventions_agree_exactly_when_unramified() {
        let g = cyclic(2);
        for r in 0..=3usize {
            let c = cover(2, &g, 2, (0..r).map(|_| (vec![2, 2], whole(&g))).collect());
            let d0 = c.ramification_divisor_degree(IndexStart::FromE0).unwrap();
            let d1 = c.ramification_divisor_degree(IndexStart::FromE1).unwrap();
            if r == 0 {
                assert_eq!(d0, d1);
            } else {
                assert!(d0 > d1);
            }
        }
    }

    #[test]
    fn genus_is_monotone_in_ramification() {
        // at fixed |G| and g_Y, more ramification never lowers the genus
        let g = cyclic(2);
        let mut last = cover(2, &g, 2, vec![]).genus_via_riemann_hurwitz().unwrap();
        for r in 1..=4usize {
            let c = cover(2, &g, 2, (0..r).map(|_| (vec![2, 2], whole(&g))).collect());
            let g_x = c.genus_via_riemann_hurwitz().unwrap();
            assert!(g_x >= last);
            last = g_x;
        }
    }

    #[test]
    fn adding_a_branch_point_increases_degree() {
        let g = cyclic(2);
        let one = cover(2, &g, 2, vec![(vec![2, 2], whole(&g))]);
        let two = cover(2, &g, 2, vec![(vec![2, 2], whole(&g)), (vec![2, 2], whole(&g))]);
        let d1 = one.ramification_divisor_degree(IndexStart::FromE0).unwrap();
        let d2 = two.ramification_divisor_degree(IndexStart::FromE0).unwrap();
        assert!(d2 > d1);
        // and the from_e0 degree dominates the from_e1 one
        assert!(d1 > one.ramification_divisor_degree(IndexStart::FromE1).unwrap());
    }
}
