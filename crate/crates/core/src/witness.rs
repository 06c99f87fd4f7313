//! Explicit non-closure witnesses for `p`-groups with a normal subgroup
//! `H = <a> x <c>` of type `(p, p)` meeting the center in `<a>`.
//!
//! `H` acts on `Delta = {1..2p}` with `a` cycling the first block and `c` the
//! second; two embeddings lift this to `Gamma = Delta x C/H` for `C = C_G(H)`
//! and then to `Omega = Gamma x G/C`. The permutation `theta` cycles the second
//! block of every fiber and fixes everything else.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::action::{universal_embedding, universal_embedding_with, EmbeddedAction, Homomorphism, Verdict};
use crate::closure::{k_closure_with, SearchLimits};
use crate::coloring::orbit_coloring;
use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::perm::{format_cycles, KTuple, Perm};
use crate::structure::factorize;
use crate::subgroups::{set_to_group, SubgroupLattice, DEFAULT_SUBGROUP_COUNT_CAP, DEFAULT_SUBGROUP_GROUP_CAP};

#[derive(Clone, Debug)]
pub struct SpecialSubgroupData {
    pub p: usize,
    /// `<a, c>`, generated in that order
    pub h: PermGroup,
    pub a: Perm,
    pub c: Perm,
    pub b: Perm,
    pub centralizer: PermGroup,
    /// How many times `c` was replaced by `c a` to make `<c>` non-normal.
    pub replacements: usize,
}

fn odd_prime_power(order: usize) -> Option<usize> {
    match factorize(order as u64).as_slice() {
        [(p, _)] if *p != 2 => Some(*p as usize),
        _ => None,
    }
}

fn cyclic_group(degree: usize, x: &Perm) -> PermGroup {
    PermGroup::generate(degree, &[x.clone()], DEFAULT_ORDER_CAP).expect("cyclic subgroup")
}

impl SpecialSubgroupData {
    /// Validates a designated `(H, a, c)`, then picks `b` and normalizes `c`.
    pub fn from_designated(g: &PermGroup, a: &Perm, c: &Perm) -> Result<Self> {
        let p = odd_prime_power(g.order()).ok_or_else(|| Error::NotApplicable("not a p-group of odd order".into()))?;
        let n = g.degree();
        let h = PermGroup::generate(n, &[a.clone(), c.clone()], DEFAULT_ORDER_CAP)?;
        if !h.is_subgroup_of(g) {
            return Err(Error::NotApplicable("H is not a subgroup of G".into()));
        }
        if h.order() != p * p || !h.is_abelian() || h.elements().iter().any(|e| !e.is_identity() && e.order() != p as u64) {
            return Err(Error::NotApplicable(format!("H is not elementary abelian of order {}", p * p)));
        }
        if !g.is_normal(&h)? {
            return Err(Error::NotApplicable("H is not normal".into()));
        }
        let center = g.center();
        if h.elements().iter().filter(|e| center.contains(e)).count() != p {
            return Err(Error::NotApplicable("|H meet Z(G)| is not p".into()));
        }
        if !center.contains(a) || a.is_identity() {
            return Err(Error::NotApplicable("a is not a central element of order p".into()));
        }
        if cyclic_group(n, a).contains(c) {
            return Err(Error::NotApplicable("c lies in <a>".into()));
        }
        let centralizer = g.centralizer(h.generators())?;
        if g.order() / centralizer.order() != p {
            return Err(Error::Internal(format!("|G : C_G(H)| = {}, expected {p}", g.order() / centralizer.order())));
        }
        let b = g.elements().iter().find(|x| !centralizer.contains(x)).cloned().expect("C_G(H) is proper");
        let mut c = c.clone();
        let mut replacements = 0;
        while cyclic_group(n, &c).contains(&c.conjugate_by(&b)) {
            if replacements == p {
                return Err(Error::NotApplicable("no choice of c makes <c> non-normal".into()));
            }
            c = c.then(a);
            replacements += 1;
        }
        let h = PermGroup::generate(n, &[a.clone(), c.clone()], DEFAULT_ORDER_CAP)?;
        Ok(SpecialSubgroupData { p, h, a: a.clone(), c, b, centralizer, replacements })
    }
}

/// Searches the normal subgroups of `G` for a qualifying `H` (first in lattice order).
pub fn find_special_subgroup(g: &PermGroup) -> Result<SpecialSubgroupData> {
    let p = odd_prime_power(g.order()).ok_or_else(|| Error::NotApplicable("not a p-group of odd order".into()))?;
    if g.is_abelian() {
        return Err(Error::NotApplicable("G is abelian: every H is central".into()));
    }
    let lattice = SubgroupLattice::new(g, DEFAULT_SUBGROUP_GROUP_CAP, DEFAULT_SUBGROUP_COUNT_CAP)?;
    let center = g.center();
    for set in lattice.sets().iter().filter(|s| s.len() == p * p) {
        let h = set_to_group(g, set);
        if !h.is_abelian() || h.exponent() != p as u64 || !g.is_normal(&h)? {
            continue;
        }
        let central: Vec<&Perm> = h.elements().iter().filter(|e| center.contains(e)).collect();
        if central.len() != p {
            continue;
        }
        let a = central.iter().find(|e| !e.is_identity()).copied().expect("order p");
        let a_group = cyclic_group(g.degree(), a);
        let c = h.elements().iter().find(|e| !a_group.contains(e)).expect("|H| > p");
        match SpecialSubgroupData::from_designated(g, a, c) {
            Err(Error::NotApplicable(_)) => continue,
            other => return other,
        }
    }
    Err(Error::NotApplicable("no normal subgroup of type (p,p) meets the center in order p".into()))
}

/// `G` on `Omega` together with the intermediate stages.
#[derive(Clone, Debug)]
pub struct WitnessAction {
    pub p: usize,
    /// `H` on `Delta`
    pub delta: Homomorphism,
    /// `C_G(H)` on `Gamma = Delta x C/H`
    pub gamma: EmbeddedAction,
    /// `G` on `Omega = Gamma x G/C`, transversal `1, b, .., b^(p-1)`
    pub omega: EmbeddedAction,
}

/// Coordinates of a point of `Omega`: 1-based `i`, the `C/H` coset index, and `m` for the coset `b^m C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaLabel {
    pub i: usize,
    pub xh: usize,
    pub m: usize,
}

impl std::fmt::Display for OmegaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let xh = if self.xh == 0 { "H".to_string() } else { format!("x{}H", self.xh) };
        let bc = match self.m {
            0 => "C".to_string(),
            1 => "bC".to_string(),
            m => format!("b^{m}C"),
        };
        write!(f, "(({},{xh}),{bc})", self.i)
    }
}

impl WitnessAction {
    pub fn degree(&self) -> usize {
        self.omega.degree()
    }

    pub fn label(&self, point: usize) -> OmegaLabel {
        let (gamma_point, m) = self.omega.label(point);
        let (delta, xh) = self.gamma.label(gamma_point);
        OmegaLabel { i: delta + 1, xh, m }
    }

    pub fn point(&self, label: OmegaLabel) -> usize {
        self.omega.point(self.gamma.point(label.i - 1, label.xh), label.m)
    }

    pub fn group(&self) -> &PermGroup {
        &self.omega.group
    }

    /// Cycle notation over labeled points.
    pub fn format_labeled(&self, x: &Perm) -> String {
        let cycles = x.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|&p| self.label(p).to_string()).collect::<Vec<_>>().join(", ")))
            .collect()
    }
}

pub fn build_witness_action(g: &PermGroup, data: &SpecialSubgroupData) -> Result<WitnessAction> {
    let p = data.p;
    let block1: Vec<usize> = (0..p).collect();
    let block2: Vec<usize> = (p..2 * p).collect();
    let delta = Homomorphism::from_generator_images(&data.h, &[Perm::cycle(2 * p, &block1)?, Perm::cycle(2 * p, &block2)?])?;
    let gamma = universal_embedding(&data.centralizer, &data.h, &delta)?;
    let reps: Vec<Perm> = (0..p as i64).map(|m| data.b.pow(m)).collect();
    let cosets = g.coset_space(&data.centralizer)?.with_transversal(g, reps)?;
    let omega = universal_embedding_with(g, &data.centralizer, &gamma.hom, cosets)?;
    Ok(WitnessAction { p, delta, gamma, omega })
}

/// Fixes the first block of every fiber and cycles `p+1 -> .. -> 2p -> p+1` in the second.
pub fn build_theta(action: &WitnessAction) -> Result<Perm> {
    let p = action.p;
    if action.gamma.delta_degree * action.omega.delta_degree == 0 || action.gamma.delta_degree != 2 * p {
        return Err(Error::InvalidInput("action does not carry the (i, xH, b^m C) labeling".into()));
    }
    Perm::from_fn(action.degree(), |pt| {
        let l = action.label(pt);
        if l.i <= p {
            pt
        } else {
            let i = p + 1 + (l.i - p) % p;
            action.point(OmegaLabel { i, ..l })
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArityCheck {
    pub k: usize,
    pub theta_preserves_orbits: bool,
    /// First tuple whose orbit `theta` changes, as labeled points.
    pub violation: Option<Vec<String>>,
    pub closure_order: Option<String>,
    pub closure_strict: Option<bool>,
    pub closure_contains_theta: Option<bool>,
    pub closure_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerCheck {
    pub point: String,
    pub expected: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub group_order: usize,
    pub p: usize,
    pub omega_degree: usize,
    pub expected_degree: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub c_replacements: usize,
    pub theta: String,
    pub theta_labeled: String,
    pub theta_not_in_g: bool,
    pub theta_preserves_fibers: bool,
    pub stabilizers: Vec<StabilizerCheck>,
    pub c_meet_cb_trivial: bool,
    pub arities: Vec<ArityCheck>,
    /// WITNESS when every check passes, FALSIFIED otherwise.
    pub outcome: Verdict,
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

impl WitnessReport {
    /// Whether `theta` certifies non-closure at arity `k` (it is outside `G` and preserves every orbit).
    pub fn witnesses(&self, k: usize) -> bool {
        self.theta_not_in_g && self.arities.iter().any(|a| a.k == k && a.theta_preserves_orbits)
    }
}

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// Also compute the full closure at each arity.
    pub full_closure: bool,
    pub limits: SearchLimits,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { full_closure: true, limits: SearchLimits::default().with_max_degree(64) }
    }
}

/// The preimage in `G` of the stabilizer of `point`.
fn stabilizer_in_g(g: &PermGroup, action: &WitnessAction, point: usize) -> Result<PermGroup> {
    let kept: Vec<Perm> = g
        .elements()
        .iter()
        .filter(|x| action.omega.image(x).map(|img| img.apply(point) == point).unwrap_or(false))
        .cloned()
        .collect();
    PermGroup::from_closed_subset(g.degree(), &kept)
}

/// Checks every claim about `theta` on `Omega`; failures are report content, not errors.
pub fn verify_witness(
    g: &PermGroup,
    data: &SpecialSubgroupData,
    action: &WitnessAction,
    theta: &Perm,
    k_list: &[usize],
    options: &WitnessOptions,
) -> Result<WitnessReport> {
    let start = Instant::now();
    let p = data.p;
    let omega_g = action.group();
    let n = action.degree();
    if theta.degree() != n {
        return Err(Error::DegreeMismatch { left: n, right: theta.degree() });
    }
    let mut failures = Vec::new();
    let c_h = data.centralizer.order() / data.h.order();
    let expected_degree = 2 * p * c_h * p;
    if n != expected_degree {
        failures.push(format!("Omega has degree {n}, expected {expected_degree}"));
    }

    let theta_not_in_g = !omega_g.contains(theta);
    if !theta_not_in_g {
        failures.push("theta lies in the image of G".into());
    }

    // each fiber {(., xH, b^m C)} must be fixed setwise
    let theta_preserves_fibers = (0..n).all(|pt| {
        let (l, m) = (action.label(pt), action.label(theta.apply(pt)));
        l.xh == m.xh && l.m == m.m
    });
    if !theta_preserves_fibers {
        failures.push("theta moves a point to another fiber".into());
    }

    let c_group = cyclic_group(g.degree(), &data.c);
    let cb_group = cyclic_group(g.degree(), &data.c.conjugate_by(&data.b));
    let a_group = cyclic_group(g.degree(), &data.a);
    let mut stabilizers = Vec::new();
    for xh in 0..c_h {
        for (i, m, expected, name) in [(1, 0, &c_group, "<c>"), (1, 1, &cb_group, "<c^b>"), (p + 1, 0, &a_group, "<a>")] {
            let label = OmegaLabel { i, xh, m };
            let stab = stabilizer_in_g(g, action, action.point(label))?;
            let holds = stab == *expected;
            if !holds {
                failures.push(format!("stabilizer of {label} has order {}, expected {name}", stab.order()));
            }
            stabilizers.push(StabilizerCheck { point: label.to_string(), expected: name.into(), holds });
        }
    }
    let c_meet_cb_trivial = c_group.elements().iter().filter(|e| cb_group.contains(e)).count() == 1;
    if !c_meet_cb_trivial {
        failures.push("<c> meets <c^b> non-trivially".into());
    }

    let mut arities = Vec::new();
    for &k in k_list {
        let coloring = orbit_coloring(omega_g, k, options.limits.tuple_cap)?;
        let violation = coloring.find_violation(theta)?.map(|t: KTuple| {
            t.points().iter().map(|&pt| action.label(pt).to_string()).collect::<Vec<_>>()
        });
        let preserves = violation.is_none();
        if !preserves {
            failures.push(format!("theta changes the orbit of ({}) at k = {k}", violation.as_ref().expect("some").join(", ")));
        }
        let mut check = ArityCheck {
            k,
            theta_preserves_orbits: preserves,
            violation,
            closure_order: None,
            closure_strict: None,
            closure_contains_theta: None,
            closure_error: None,
        };
        if options.full_closure {
            match k_closure_with(omega_g, k, &options.limits) {
                Ok(cl) => {
                    let contains = cl.contains(theta);
                    if contains != preserves {
                        return Err(Error::Internal("closure membership disagrees with the orbit test".into()));
                    }
                    check.closure_order = Some(cl.order.to_string());
                    check.closure_strict = Some(cl.strict);
                    check.closure_contains_theta = Some(contains);
                    if !cl.strict {
                        failures.push(format!("the {k}-closure on Omega equals G"));
                    }
                }
                Err(e) if e.is_resource_limit() => check.closure_error = Some(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        arities.push(check);
    }

    let outcome = if failures.is_empty() { Verdict::Witness } else { Verdict::Falsified };
    Ok(WitnessReport {
        group_order: g.order(),
        p,
        omega_degree: n,
        expected_degree,
        a: format_cycles(&data.a),
        b: format_cycles(&data.b),
        c: format_cycles(&data.c),
        c_replacements: data.replacements,
        theta: format_cycles(theta),
        theta_labeled: action.format_labeled(theta),
        theta_not_in_g,
        theta_preserves_fibers,
        stabilizers,
        c_meet_cb_trivial,
        arities,
        outcome,
        failures,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// The full pipeline: find `H`, build `Omega` and `theta`, verify.
pub fn run_witness(g: &PermGroup, k_list: &[usize], options: &WitnessOptions) -> Result<(SpecialSubgroupData, WitnessAction, WitnessReport)> {
    let data = find_special_subgroup(g)?;
    run_witness_with(g, data, k_list, options)
}

pub fn run_witness_with(
    g: &PermGroup,
    data: SpecialSubgroupData,
    k_list: &[usize],
    options: &WitnessOptions,
) -> Result<(SpecialSubgroupData, WitnessAction, WitnessReport)> {
    let action = build_witness_action(g, &data)?;
    let theta = build_theta(&action)?;
    let report = verify_witness(g, &data, &action, &theta, k_list, options)?;
    Ok((data, action, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{construct, heisenberg};

    fn heis3() -> (PermGroup, SpecialSubgroupData) {
        let h = heisenberg(3).unwrap();
        let (a, c, _) = h.designated();
        let data = SpecialSubgroupData::from_designated(&h.group, &a, &c).unwrap();
        (h.group, data)
    }

    #[test]
    fn designated_heisenberg_data() {
        let (g, data) = heis3();
        assert_eq!(data.p, 3);
        assert_eq!(data.centralizer.order(), 9);
        assert_eq!(data.centralizer, data.h);
        assert!(!data.centralizer.contains(&data.b));
        assert!(data.centralizer.contains(&data.b.pow(3)));
        assert!(!g.is_normal(&cyclic_group(9, &data.c)).unwrap());
    }

    #[test]
    fn search_finds_subgroups() {
        for name in ["heisenberg:3", "modular:3"] {
            let g = construct(name).unwrap();
            let data = find_special_subgroup(&g).unwrap();
            assert_eq!(data.h.order(), 9, "{name}");
            assert_eq!(g.order() / data.centralizer.order(), 3);
        }
        for name in ["abelian:3,3", "cyclic:9", "sym:3", "q8"] {
            assert!(matches!(find_special_subgroup(&construct(name).unwrap()), Err(Error::NotApplicable(_))), "{name}");
        }
    }

    #[test]
    fn omega_shape_and_theta() {
        let (g, data) = heis3();
        let action = build_witness_action(&g, &data).unwrap();
        assert_eq!(action.degree(), 18);
        assert_eq!(action.group().order(), 27);
        let theta = build_theta(&action).unwrap();
        assert!(theta.pow(3).is_identity());
        let pt = |i, m| action.point(OmegaLabel { i, xh: 0, m });
        assert_eq!(theta.apply(pt(4, 0)), pt(5, 0));
        assert_eq!(theta.apply(pt(6, 0)), pt(4, 0));
        assert_eq!(theta.apply(pt(1, 1)), pt(1, 1));
        for p in 0..18 {
            assert_eq!(action.point(action.label(p)), p);
        }
    }

    #[test]
    fn negative_controls() {
        let (g, data) = heis3();
        let action = build_witness_action(&g, &data).unwrap();
        let opts = WitnessOptions { full_closure: false, ..Default::default() };
        let id = Perm::identity(18);
        let r = verify_witness(&g, &data, &action, &id, &[2], &opts).unwrap();
        assert!(!r.theta_not_in_g);
        assert_eq!(r.outcome, Verdict::Falsified);

        let swap = Perm::cycle(18, &[action.point(OmegaLabel { i: 1, xh: 0, m: 0 }), action.point(OmegaLabel { i: 2, xh: 0, m: 0 })]).unwrap();
        let r = verify_witness(&g, &data, &action, &swap, &[2], &opts).unwrap();
        assert!(!r.arities[0].theta_preserves_orbits);
        assert!(r.arities[0].violation.is_some());
    }
}
