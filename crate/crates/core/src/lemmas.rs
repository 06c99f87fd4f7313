//! Property checks on nilpotent permutation groups:
//!
//! * `sylow-orbit-restriction`: for a Sylow `P` and a union `D` of at most
//!   three `P`-orbits, the subgroup `L` fixing each of those orbits setwise
//!   induces the same group on `D` as `P`.
//! * `hall-orbits`: in a transitive nilpotent group, every orbit of a Hall
//!   `pi`-subgroup `H` has size `n_pi`, and `H` is the kernel of the action on
//!   its orbits.
//! * `center-closure`: the closure of `Z(G)` centralizes the closure of `G`.

use serde::{Deserialize, Serialize};

use crate::action::{faithful_actions, realize, EnumerationBounds};
use crate::closure::{k_closure_with, SearchLimits};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::structure::{hall, is_nilpotent, pi_part, prime_divisors, sylow_subgroups};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub group: String,
    pub action: String,
    pub detail: String,
    pub status: CheckStatus,
}

impl PropertyCheck {
    fn new(property: &str, group: &str, action: &str, detail: String, pass: bool) -> Self {
        let status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
        PropertyCheck { property: property.into(), group: group.into(), action: action.into(), detail, status }
    }

    fn skipped(property: &str, group: &str, action: &str, reason: &str) -> Self {
        PropertyCheck {
            property: property.into(),
            group: group.into(),
            action: action.into(),
            detail: reason.into(),
            status: CheckStatus::Skipped,
        }
    }
}

fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, max, cur, out);
            cur.pop();
        }
    }
    rec(0, n, max, &mut cur, &mut out);
    out
}

/// `L^D = P^D` for every Sylow `P` and every union `D` of at most three `P`-orbits.
pub fn sylow_orbit_restriction(name: &str, action: &str, g: &PermGroup) -> Result<Vec<PropertyCheck>> {
    const PROP: &str = "sylow-orbit-restriction";
    if !is_nilpotent(g) {
        return Ok(vec![PropertyCheck::skipped(PROP, name, action, "group is not nilpotent")]);
    }
    let mut out = Vec::new();
    for (p, sylow) in sylow_subgroups(g)? {
        let orbits = sylow.orbits();
        for choice in subsets_up_to(orbits.len(), 3) {
            let blocks: Vec<Vec<usize>> = choice.iter().map(|&i| orbits[i].clone()).collect();
            let delta: Vec<usize> = blocks.concat();
            let l = g.setwise_stabilizer_family(&blocks)?;
            let l_delta = l.restrict(&delta)?;
            let p_delta = sylow.restrict(&delta)?;
            let pass = l_delta == p_delta;
            let detail = format!("p = {p}, orbits {choice:?}: |L^D| = {}, |P^D| = {}", l_delta.order(), p_delta.order());
            out.push(PropertyCheck::new(PROP, name, action, detail, pass));
        }
    }
    Ok(out)
}

/// Orbit sizes and block kernel of every Hall subgroup of a transitive nilpotent group.
pub fn hall_orbits(name: &str, action: &str, g: &PermGroup) -> Result<Vec<PropertyCheck>> {
    const PROP: &str = "hall-orbits";
    if !is_nilpotent(g) {
        return Ok(vec![PropertyCheck::skipped(PROP, name, action, "group is not nilpotent")]);
    }
    if !g.is_transitive() {
        return Ok(vec![PropertyCheck::skipped(PROP, name, action, "group is not transitive")]);
    }
    let primes = prime_divisors(g.order() as u64);
    let n = g.degree() as u64;
    let mut out = Vec::new();
    for mask in 1u32..(1 << primes.len()) {
        let pi: Vec<u64> = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let h = hall(g, &pi)?;
        let n_pi = pi_part(n, &pi)?.value;
        let orbits = h.orbits();
        let sizes_ok = orbits.iter().all(|o| o.len() as u64 == n_pi);
        let (kernel_ok, kernel_order) = match g.induced_block_action(&orbits) {
            Ok((_, kernel)) => (kernel == h, kernel.order()),
            Err(Error::NotInvariant { .. }) => (false, 0),
            Err(e) => return Err(e),
        };
        let detail = format!(
            "pi = {pi:?}: |H| = {}, n_pi = {n_pi}, orbit sizes {:?}, kernel order {kernel_order}",
            h.order(),
            orbits.iter().map(|o| o.len()).collect::<Vec<_>>()
        );
        out.push(PropertyCheck::new(PROP, name, action, detail, sizes_ok && kernel_ok));
    }
    Ok(out)
}

/// The `k`-closure of `Z(G)` commutes with, and lies inside the center of, the `k`-closure of `G`.
pub fn center_closure(name: &str, action: &str, g: &PermGroup, k: usize, limits: &SearchLimits) -> Result<PropertyCheck> {
    const PROP: &str = "center-closure";
    let z = g.center();
    let gz = match (k_closure_with(&z, k, limits), k_closure_with(g, k, limits)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) if e.is_resource_limit() => {
            return Ok(PropertyCheck::skipped(PROP, name, action, &format!("k = {k}: {e}")))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let (zc, gc) = gz;
    // both closures are generated by their generator lists, so generators suffice
    let commute = zc.generators.iter().all(|x| gc.generators.iter().all(|y| x.commutes_with(y)));
    let inside = zc.generators.iter().all(|x| gc.contains(x));
    let detail = format!("k = {k}: |Z| = {}, |Z^(k)| = {}, |G^(k)| = {}", z.order(), zc.order, gc.order);
    Ok(PropertyCheck::new(PROP, name, &format!("{action}, k = {k}"), detail, commute && inside))
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub k_values: Vec<usize>,
    /// Faithful actions examined besides the given one.
    pub bounds: EnumerationBounds,
    pub limits: SearchLimits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            k_values: vec![2, 3],
            bounds: EnumerationBounds { max_degree: 12, max_components: 2, ..Default::default() },
            limits: SearchLimits::default(),
        }
    }
}

/// All three property checks on the given action and on every enumerated faithful action within bounds.
pub fn lemma_suite(name: &str, g: &PermGroup, options: &SuiteOptions) -> Result<Vec<PropertyCheck>> {
    let mut actions = vec![("given".to_string(), g.clone())];
    if g.order() > 1 {
        for spec in faithful_actions(g, &options.bounds)?.specs {
            actions.push((spec.describe(g), realize(g, &spec)?.group));
        }
    }
    let mut out = Vec::new();
    for (label, action) in &actions {
        out.extend(sylow_orbit_restriction(name, label, action)?);
        out.extend(hall_orbits(name, label, action)?);
        for &k in &options.k_values {
            out.push(center_closure(name, label, action, k, &options.limits)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;

    fn all_pass(checks: &[PropertyCheck]) -> bool {
        checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    #[test]
    fn z6_hall_three() {
        let g = construct("cyclic:6").unwrap();
        let checks = hall_orbits("cyclic:6", "regular", &g).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(all_pass(&checks));
        assert!(checks.iter().any(|c| c.detail.starts_with("pi = [3]: |H| = 3, n_pi = 3")));
    }

    #[test]
    fn z15_sylow_restriction() {
        let g = construct("abelian:3,5").unwrap();
        let checks = sylow_orbit_restriction("abelian:3,5", "3+5", &g).unwrap();
        assert!(all_pass(&checks));
        // Syl_3 has orbits {0,1,2} and five fixed points
        assert!(checks.iter().any(|c| c.detail.contains("p = 3, orbits [0]: |L^D| = 3, |P^D| = 3")));
    }

    #[test]
    fn skips_are_explicit() {
        let s3 = construct("sym:3").unwrap();
        assert_eq!(hall_orbits("sym:3", "natural", &s3).unwrap()[0].status, CheckStatus::Skipped);
        let z15 = construct("abelian:3,5").unwrap();
        assert_eq!(hall_orbits("abelian:3,5", "3+5", &z15).unwrap()[0].status, CheckStatus::Skipped);
    }

    #[test]
    fn abelian_center_closure_is_self_centralizing() {
        let g = construct("abelian:3,3").unwrap();
        let c = center_closure("abelian:3,3", "3+3", &g, 2, &SearchLimits::default()).unwrap();
        assert_eq!(c.status, CheckStatus::Pass);
    }

    #[test]
    fn suite_on_heisenberg() {
        let g = construct("heisenberg:3").unwrap();
        let checks = lemma_suite("heisenberg:3", &g, &SuiteOptions::default()).unwrap();
        assert!(checks.iter().all(|c| c.status != CheckStatus::Fail), "{checks:#?}");
    }
}
