//! Built-in verification suites: every structural identity the library
//! relies on, run over the built-in catalog and deterministic input
//! batteries. `Fast` restricts to groups of order at most 8; `Full` runs
//! the whole catalog wherever the size caps allow.
//!
//! Summaries contain no timings or other environment-dependent data, so
//! repeated runs render byte-identical reports.

use crate::catalog;
use crate::covers::{BranchPoint, IndexStart, RamifiedCover};
use crate::dimensions::{
    dim_covariants_ordinary, dim_im_alpha, psi_report, tail_identity_prediction,
    ImAlphaConvention,
};
use crate::fpalgebra::IntegerMatrix;
use crate::groups::{all_subgroups, subgroup_generated, FiniteGroup, Subgroup};
use crate::homology::{
    bar_boundary, build_phi_morphism, coinvariants_dim, homology_dim, GModule, HomologyError,
    SizeCaps,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyScope {
    Fast,
    Full,
}

impl VerifyScope {
    fn max_group_order(self) -> usize {
        match self {
            VerifyScope::Fast => 8,
            VerifyScope::Full => 16,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub scope: VerifyScope,
    pub checks: Vec<CheckResult>,
    pub checks_run: usize,
    pub passed: usize,
    pub failed: usize,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            out.push_str(&format!("[{status}] {}: {}\n", c.name, c.detail));
        }
        out.push_str(&format!(
            "checks run: {}, passed: {}, failed: {}\n",
            self.checks_run, self.passed, self.failed
        ));
        out
    }
}

/// A check body returns (passed, detail). Failures never panic; they are
/// reported in the summary.
struct Runner {
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, name: &str, body: impl FnOnce() -> (bool, String)) {
        let (passed, detail) = body();
        self.checks.push(CheckResult { name: name.into(), passed, detail });
    }
}

pub fn verify_suite(scope: VerifyScope, caps: &SizeCaps) -> VerifySummary {
    let mut r = Runner { checks: Vec::new() };
    let max_order = scope.max_group_order().min(caps.max_order);

    r.run("snf-rank-cross", snf_rank_cross);
    r.run("group-laws", || group_laws(max_order));
    r.run("boundary-composites", || boundary_composites(scope, caps));
    r.run("shapiro", || shapiro(max_order, caps));
    r.run("h1-abelianization", || h1_abelianization(max_order, caps));
    r.run("h2-closed-form", || h2_closed_form(caps));
    r.run("route-equality", || route_equality(caps));
    r.run("tail-identity", || tail_identity(caps));
    r.run("closed-form-consistency", || closed_form_consistency(caps));
    r.run("tame-consistency", tame_consistency);

    let checks_run = r.checks.len();
    let passed = r.checks.iter().filter(|c| c.passed).count();
    VerifySummary { scope, checks: r.checks, checks_run, passed, failed: checks_run - passed }
}

fn snf_rank_cross() -> (bool, String) {
    // deterministic battery of small integer matrices
    let battery: Vec<(usize, usize, Vec<i64>)> = {
        let mut out = Vec::new();
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for rows in 1..=4usize {
            for cols in 1..=4usize {
                for _ in 0..4 {
                    out.push((rows, cols, (0..rows * cols).map(|_| next()).collect()));
                }
            }
        }
        out
    };
    let mut cases = 0;
    for (rows, cols, vals) in &battery {
        let m = IntegerMatrix::from_i64(*rows, *cols, vals).expect("battery shapes");
        let d = m.smith_normal_form();
        for w in d.windows(2) {
            let chain_ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_zero() || (&w[1] % &w[0]).is_zero()
            };
            if !chain_ok {
                return (false, format!("divisibility chain broken for {vals:?}"));
            }
        }
        for p in [2u64, 3, 5] {
            let expected = d
                .iter()
                .filter(|f| !f.is_zero() && !(&**f % BigInt::from(p)).is_zero())
                .count();
            let got = match m.reduce_mod(p) {
                Ok(red) => red.rank(),
                Err(e) => return (false, format!("reduction failed: {e}")),
            };
            if got != expected {
                return (
                    false,
                    format!("rank mod {p} is {got}, SNF predicts {expected} for {vals:?}"),
                );
            }
            cases += 1;
        }
        // permutation invariance: reverse rows and columns
        let mut rev = Vec::with_capacity(vals.len());
        for r in (0..*rows).rev() {
            for c in (0..*cols).rev() {
                rev.push(vals[r * cols + c]);
            }
        }
        let m_rev = IntegerMatrix::from_i64(*rows, *cols, &rev).expect("battery shapes");
        if m.reduce_mod(5).unwrap().rank() != m_rev.reduce_mod(5).unwrap().rank() {
            return (false, format!("rank not permutation invariant for {vals:?}"));
        }
    }
    (true, format!("{cases} rank/SNF comparisons agreed"))
}

fn group_laws(max_order: usize) -> (bool, String) {
    let mut groups = 0;
    let mut subgroups = 0;
    for (name, g) in catalog::builtin().entries() {
        if g.order() > max_order {
            continue;
        }
        // revalidate the table through the explicit-table constructor
        if FiniteGroup::from_table(&g.table_rows()).is_err() {
            return (false, format!("{name} fails table validation"));
        }
        for h in all_subgroups(g) {
            if g.order() % h.order() != 0 {
                return (false, format!("Lagrange fails for a subgroup of {name}"));
            }
            subgroups += 1;
        }
        groups += 1;
    }
    (true, format!("{groups} groups validated, {subgroups} subgroups satisfy Lagrange"))
}

fn boundary_composites(scope: VerifyScope, caps: &SizeCaps) -> (bool, String) {
    let cap = match scope {
        VerifyScope::Fast => 6,
        VerifyScope::Full => 8,
    };
    let mut cases = 0;
    for (name, g) in catalog::builtin().entries() {
        if g.order() > cap {
            continue;
        }
        for p in [2u64, 3] {
            let modules = [GModule::trivial(g, p), GModule::regular(g, p)];
            for m in &modules {
                for n in [1usize, 2] {
                    let dn = match bar_boundary(m, n, caps) {
                        Ok(x) => x,
                        Err(HomologyError::SizeCapExceeded { .. }) => continue,
                        Err(e) => return (false, format!("{name}: {e}")),
                    };
                    let dn1 = match bar_boundary(m, n + 1, caps) {
                        Ok(x) => x,
                        Err(HomologyError::SizeCapExceeded { .. }) => continue,
                        Err(e) => return (false, format!("{name}: {e}")),
                    };
                    match dn.mul(&dn1) {
                        Ok(prod) if prod.is_zero() => cases += 1,
                        Ok(_) => {
                            return (
                                false,
                                format!("boundary composite nonzero for {name}, p = {p}, n = {n}"),
                            )
                        }
                        Err(e) => return (false, format!("{name}: {e}")),
                    }
                }
            }
        }
    }
    (true, format!("{cases} boundary composites vanish"))
}

fn shapiro(max_order: usize, caps: &SizeCaps) -> (bool, String) {
    let mut cases = 0;
    let mut skipped = 0;
    for (name, g) in catalog::builtin().entries() {
        if g.order() > max_order {
            continue;
        }
        for h in all_subgroups(g) {
            let h_arc = Arc::new(h.as_group().0);
            for p in [2u64, 3, 5] {
                let induced = match GModule::permutation(g, p, &h) {
                    Ok(m) => m,
                    Err(e) => return (false, format!("{name}: {e}")),
                };
                let trivial_h = GModule::trivial(&h_arc, p);
                for n in 0..=2usize {
                    let lhs = match homology_dim(&induced, n, caps) {
                        Ok(d) => d,
                        Err(HomologyError::SizeCapExceeded { .. }) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return (false, format!("{name}: {e}")),
                    };
                    let rhs = match homology_dim(&trivial_h, n, caps) {
                        Ok(d) => d,
                        Err(HomologyError::SizeCapExceeded { .. }) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return (false, format!("{name}: {e}")),
                    };
                    if lhs != rhs {
                        return (
                            false,
                            format!(
                                "Shapiro fails: {name}, |H| = {}, p = {p}, degree {n}: {lhs} vs {rhs}",
                                h.order()
                            ),
                        );
                    }
                    cases += 1;
                }
            }
        }
    }
    (true, format!("{cases} equalities hold ({skipped} over the size cap)"))
}

fn h1_abelianization(max_order: usize, caps: &SizeCaps) -> (bool, String) {
    let mut cases = 0;
    for (name, g) in catalog::builtin().entries() {
        if g.order() > max_order {
            continue;
        }
        for p in [2u64, 3, 5] {
            let bar = match homology_dim(&GModule::trivial(g, p), 1, caps) {
                Ok(d) => d,
                Err(e) => return (false, format!("{name}: {e}")),
            };
            let ab = match crate::groups::abelianization_p_rank(g, p) {
                Ok(d) => d,
                Err(e) => return (false, format!("{name}: {e}")),
            };
            if bar != ab {
                return (false, format!("{name} at p = {p}: bar H_1 = {bar}, SNF rank = {ab}"));
            }
            cases += 1;
        }
    }
    (true, format!("{cases} comparisons agreed"))
}

fn h2_closed_form(caps: &SizeCaps) -> (bool, String) {
    for (p, n) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let name = format!("elementary abelian p = {p}, rank {n}");
        let Some(g) = lookup_elementary_abelian(p, n) else {
            return (false, format!("{name} missing from the catalog"));
        };
        let got = match homology_dim(&GModule::trivial(&g, p), 2, caps) {
            Ok(d) => d,
            Err(e) => return (false, format!("{name}: {e}")),
        };
        if got != n * (n + 1) / 2 {
            return (false, format!("{name}: H_2 = {got}, closed form says {}", n * (n + 1) / 2));
        }
    }
    (true, "all five (p, rank) cases match n(n+1)/2".into())
}

fn lookup_elementary_abelian(p: u64, rank: usize) -> Option<Arc<FiniteGroup>> {
    let name = match (p, rank) {
        (2, 1) => "C2",
        (2, 2) => "V4",
        (2, 3) => "E8",
        (3, 1) => "C3",
        (3, 2) => "E9",
        (5, 1) => "C5",
        _ => return None,
    };
    catalog::builtin().get(name).cloned()
}

/// Deterministic battery of (group, p, subgroup list) configurations with
/// |G| <= 8 and 1 <= r <= 3, shared by the verify suite and the
/// acceptance tests.
pub fn route_check_configs() -> Vec<(String, Arc<FiniteGroup>, u64, Vec<Subgroup>)> {
    let mut out = Vec::new();
    for (name, g) in catalog::builtin().entries() {
        if g.order() < 2 || g.order() > 8 {
            continue;
        }
        let subgroups = all_subgroups(g);
        let primes: Vec<u64> =
            [2u64, 3, 5].into_iter().filter(|p| (g.order() as u64).is_multiple_of(*p)).collect();
        for p in primes {
            let whole = subgroups.last().expect("whole group").clone();
            let first_proper = subgroups
                .iter()
                .find(|h| h.order() > 1 && !h.is_whole_group())
                .cloned();
            let mut configs: Vec<(String, Vec<Subgroup>)> = vec![
                (format!("{name}/p{p}/r1-whole"), vec![whole.clone()]),
                (format!("{name}/p{p}/r2-whole-whole"), vec![whole.clone(), whole.clone()]),
            ];
            if let Some(h) = &first_proper {
                configs.push((format!("{name}/p{p}/r1-proper"), vec![h.clone()]));
                configs.push((format!("{name}/p{p}/r2-proper-whole"), vec![h.clone(), whole.clone()]));
                configs.push((
                    format!("{name}/p{p}/r3-proper-proper-whole"),
                    vec![h.clone(), h.clone(), whole.clone()],
                ));
            }
            // a pair of distinct proper subgroups when available
            let distinct: Vec<&Subgroup> = subgroups
                .iter()
                .filter(|h| h.order() > 1 && !h.is_whole_group())
                .take(2)
                .collect();
            if distinct.len() == 2 {
                configs.push((
                    format!("{name}/p{p}/r2-two-proper"),
                    vec![distinct[0].clone(), distinct[1].clone()],
                ));
            }
            for (label, config) in configs {
                out.push((label, Arc::clone(g), p, config));
            }
        }
    }
    out
}

fn route_equality(caps: &SizeCaps) -> (bool, String) {
    let configs = route_check_configs();
    let mut cases = 0;
    for (label, g, p, subgroups) in &configs {
        let report = match psi_report(g, *p, subgroups, caps) {
            Ok(r) => r,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let route_a = report.psi1.cokernel_dim() + report.psi2.kernel_dim();
        let phi = match build_phi_morphism(g, *p, subgroups) {
            Ok(f) => f,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let kernel = match GModule::kernel_of(&phi) {
            Ok(k) => k,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let route_b = match homology_dim(&kernel, 1, caps) {
            Ok(d) => d,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        if route_a != route_b {
            return (false, format!("{label}: route A = {route_a}, route B = {route_b}"));
        }
        cases += 1;
    }
    (true, format!("{cases} configurations agree on both routes"))
}

fn tail_identity(caps: &SizeCaps) -> (bool, String) {
    let configs = route_check_configs();
    let mut cases = 0;
    for (label, g, p, subgroups) in &configs {
        let report = match psi_report(g, *p, subgroups, caps) {
            Ok(r) => r,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let phi = match build_phi_morphism(g, *p, subgroups) {
            Ok(f) => f,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let kernel = match GModule::kernel_of(&phi) {
            Ok(k) => k,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let observed = match coinvariants_dim(&kernel, caps) {
            Ok(d) => d as i64,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        let predicted =
            match tail_identity_prediction(g, *p, &report.psi2, subgroups.len(), caps) {
                Ok(v) => v,
                Err(e) => return (false, format!("{label}: {e}")),
            };
        if observed != predicted {
            return (false, format!("{label}: coinvariants {observed}, tail predicts {predicted}"));
        }
        cases += 1;
    }
    (true, format!("{cases} tail identities hold"))
}

/// Deterministic battery of valid ordinary covers over catalog p-groups.
pub fn ordinary_cover_battery() -> Vec<(String, RamifiedCover)> {
    let mut out = Vec::new();
    let cat = catalog::builtin();
    let mut push = |label: &str, p: u64, group: &Arc<FiniteGroup>, subgroups: Vec<Subgroup>| {
        let branch_points = subgroups
            .into_iter()
            .map(|h| BranchPoint {
                filtration: vec![h.order() as u64, h.order() as u64],
                decomposition: h,
            })
            .collect();
        let cover = RamifiedCover {
            p,
            group: Arc::clone(group),
            quotient_genus: 2,
            branch_points,
        };
        debug_assert!(cover.validate().is_empty(), "{label}");
        out.push((label.to_string(), cover));
    };

    let c2 = cat.get("C2").unwrap();
    let whole_c2 = subgroup_generated(c2, &[1]).unwrap();
    push("C2/r1", 2, c2, vec![whole_c2.clone()]);
    push("C2/r2", 2, c2, vec![whole_c2.clone(), whole_c2.clone()]);
    push("C2/r3", 2, c2, vec![whole_c2.clone(), whole_c2.clone(), whole_c2]);

    let c4 = cat.get("C4").unwrap();
    let half_c4 = subgroup_generated(c4, &[2]).unwrap();
    push("C4/r1-order2", 2, c4, vec![half_c4.clone()]);
    push("C4/r2-order2", 2, c4, vec![half_c4.clone(), half_c4]);

    let v4 = cat.get("V4").unwrap();
    let line_a = subgroup_generated(v4, &[1]).unwrap();
    let line_b = subgroup_generated(v4, &[2]).unwrap();
    let whole_v4 = subgroup_generated(v4, &[1, 2]).unwrap();
    push("V4/r2-lines", 2, v4, vec![line_a.clone(), line_b.clone()]);
    push("V4/r1-whole", 2, v4, vec![whole_v4.clone()]);
    push("V4/r3-mixed", 2, v4, vec![line_a, line_b, whole_v4]);

    let d4 = cat.get("D4").unwrap();
    let center = subgroup_generated(d4, &[2]).unwrap();
    let klein = subgroup_generated(d4, &[2, 4]).unwrap();
    push("D4/r1-center", 2, d4, vec![center.clone()]);
    push("D4/r2-center-klein", 2, d4, vec![center, klein]);

    let q8 = cat.get("Q8").unwrap();
    let minus_one = subgroup_generated(q8, &[1]).unwrap();
    push("Q8/r1-center", 2, q8, vec![minus_one.clone()]);
    push("Q8/r2-center", 2, q8, vec![minus_one.clone(), minus_one]);

    let c3 = cat.get("C3").unwrap();
    let whole_c3 = subgroup_generated(c3, &[1]).unwrap();
    push("C3/r1", 3, c3, vec![whole_c3.clone()]);
    push("C3/r2", 3, c3, vec![whole_c3.clone(), whole_c3]);

    let e9 = cat.get("E9").unwrap();
    let line_e9 = subgroup_generated(e9, &[1]).unwrap();
    let line_e9b = subgroup_generated(e9, &[3]).unwrap();
    push("E9/r2-lines", 3, e9, vec![line_e9, line_e9b]);

    let c5 = cat.get("C5").unwrap();
    let whole_c5 = subgroup_generated(c5, &[1]).unwrap();
    push("C5/r1", 5, c5, vec![whole_c5]);

    out
}

fn closed_form_consistency(caps: &SizeCaps) -> (bool, String) {
    let battery = ordinary_cover_battery();
    let mut cases = 0;
    for (label, cover) in &battery {
        let out = match dim_covariants_ordinary(cover, caps) {
            Ok(o) => o,
            Err(e) => return (false, format!("{label}: {e}")),
        };
        if out.exact != out.paper_plus1 {
            return (
                false,
                format!("{label}: exact = {}, +1 closed form = {}", out.exact, out.paper_plus1),
            );
        }
        if out.paper_plus1 - out.paper_minus1 != 2 {
            return (false, format!("{label}: closed forms differ by other than 2"));
        }
        if !out.h1_ker_phi.agree() {
            return (false, format!("{label}: routes disagree"));
        }
        cases += 1;
    }
    (true, format!("{cases} covers have matching exact and +1 closed forms"))
}

fn tame_consistency() -> (bool, String) {
    // all-tame covers over C6 in characteristic 5, order-3 points
    let g = catalog::builtin().get("C6").unwrap();
    let tame = subgroup_generated(g, &[2]).unwrap();
    let mut cases = 0;
    for g_y in [2u64, 3] {
        for r in 0..=2usize {
            let cover = RamifiedCover {
                p: 5,
                group: Arc::clone(g),
                quotient_genus: g_y,
                branch_points: (0..r)
                    .map(|_| BranchPoint {
                        filtration: vec![3],
                        decomposition: tame.clone(),
                    })
                    .collect(),
            };
            let out = match dim_im_alpha(&cover, ImAlphaConvention::ClassicalFloorFromE0) {
                Ok(o) => o,
                Err(e) => return (false, format!("g_Y = {g_y}, r = {r}: {e}")),
            };
            let expected = 3 * g_y as i64 - 3 + r as i64;
            if out.value != expected {
                return (
                    false,
                    format!("g_Y = {g_y}, r = {r}: got {}, expected {expected}", out.value),
                );
            }
            cases += 1;
        }
    }
    // the divisor-degree convention comparison rides along
    let cover = RamifiedCover {
        p: 5,
        group: Arc::clone(g),
        quotient_genus: 2,
        branch_points: vec![BranchPoint { filtration: vec![3], decomposition: tame }],
    };
    let from_e0 = cover.ramification_divisor_degree(IndexStart::FromE0).unwrap();
    let from_e1 = cover.ramification_divisor_degree(IndexStart::FromE1).unwrap();
    if from_e0 <= from_e1 {
        return (false, "from_e0 degree does not dominate from_e1".into());
    }
    (true, format!("{cases} tame covers match 3 g_Y - 3 + r"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let summary = verify_suite(VerifyScope::Fast, &SizeCaps::default());
        assert!(summary.all_passed(), "{}", summary.render_text());
        assert_eq!(summary.checks_run, 10);
    }

    #[test]
    fn battery_is_large_enough() {
        assert!(route_check_configs().len() >= 20);
        assert!(ordinary_cover_battery().len() >= 10);
    }

    #[test]
    fn summary_text_is_deterministic() {
        let caps = SizeCaps::default();
        let a = verify_suite(VerifyScope::Fast, &caps).render_text();
        let b = verify_suite(VerifyScope::Fast, &caps).render_text();
        assert_eq!(a, b);
    }
}
