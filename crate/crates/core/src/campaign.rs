//! The classification campaign: expected total-closure verdicts from group
//! structure, compared against bounded searches and explicit witnesses.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::action::{faithful_actions, totally_k_closed_bounded, ActionSpecRecord, BoundedCheck, EnumerationBounds, Verdict};
use crate::closure::{k_closure_nilpotent_with, k_closure_with, SearchLimits};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::structure::{abelian_invariants, factorize, is_nilpotent, sylow};
use crate::witness::{run_witness, WitnessOptions, WitnessReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    TotallyClosed,
    NotTotallyClosed,
    /// The classification says nothing (even order at `k > 2`, or not nilpotent).
    NotCovered,
}

/// A nilpotent group whose Sylow 2-subgroup is nonabelian with a unique involution
/// (generalized quaternion) and whose odd part is cyclic.
fn is_quaternion_times_odd_cyclic(g: &PermGroup) -> Result<bool> {
    if g.order() % 2 != 0 {
        return Ok(false);
    }
    let two = sylow(g, 2)?;
    let involutions = two.elements().iter().filter(|e| e.order() == 2).count();
    if two.is_abelian() || involutions != 1 {
        return Ok(false);
    }
    for (p, _) in factorize(g.order() as u64).into_iter().filter(|&(p, _)| p != 2) {
        let s = sylow(g, p)?;
        if !s.is_abelian() || !abelian_invariants(&s)?.is_cyclic() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Expected verdict from structure alone.
///
/// Odd-order nilpotent: totally `k`-closed iff cyclic, or abelian with `n(G) <= k-1`.
/// Any nilpotent group at `k = 2`: iff cyclic, or generalized quaternion times odd cyclic.
pub fn expected_verdict(g: &PermGroup, k: usize) -> Result<Expectation> {
    if !is_nilpotent(g) || k < 2 {
        return Ok(Expectation::NotCovered);
    }
    let abelian_count = if g.is_abelian() { Some(abelian_invariants(g)?.count()) } else { None };
    let cyclic = abelian_count.is_some_and(|n| n <= 1);
    let closed = if g.order() % 2 == 1 {
        cyclic || abelian_count.is_some_and(|n| n < k)
    } else if k == 2 {
        cyclic || is_quaternion_times_odd_cyclic(g)?
    } else {
        return Ok(Expectation::NotCovered);
    };
    Ok(if closed { Expectation::TotallyClosed } else { Expectation::NotTotallyClosed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessDetail {
    /// A faithful action from the bounded enumeration.
    Action { description: String, degree: usize, spec: ActionSpecRecord, closure_order: String },
    /// The explicit `theta` on the constructed `Omega`.
    Theta { omega_degree: usize, theta: String, closure_order: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub k: usize,
    pub expected: Expectation,
    pub observed: Verdict,
    /// How the observation was made: `witness`, `enumeration`, or `witness+enumeration`.
    pub route: String,
    pub witness: Option<WitnessDetail>,
    pub specs_examined: usize,
    pub max_degree_examined: usize,
    pub note: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SylowCheck {
    pub k: usize,
    pub direct_order: String,
    pub factored_order: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub max_degree: usize,
    /// `max_degree`, raised to the smallest faithful degree when that is larger.
    pub effective_max_degree: usize,
    pub max_components: usize,
    pub allow_duplicates: bool,
    pub tuple_cap: usize,
    pub order_cap: usize,
    pub budget_seconds: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub schema_version: u32,
    pub group: String,
    pub lane: String,
    pub order: usize,
    pub degree: usize,
    pub nilpotent: bool,
    pub abelian: bool,
    pub cyclic: bool,
    pub invariant_factors: Option<Vec<u64>>,
    pub n_g: Option<usize>,
    pub cells: Vec<Cell>,
    /// Direct closure against the product of the Sylow closures, on the given action.
    pub sylow_factorization: Vec<SylowCheck>,
    pub two_closure_nilpotent: Option<bool>,
    pub witness_construction: Option<WitnessReport>,
    pub bounds: BoundsRecord,
    pub falsified: bool,
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

impl GroupRow {
    pub fn inconclusive_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.observed == Verdict::Inconclusive).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rows: Vec<GroupRow>,
}

impl TheoremReport {
    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        self.rows.iter().map(|r| serde_json::to_string(r).expect("serializable") + "\n").collect()
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str::<GroupRow>(l).map_err(|e| Error::InvalidInput(format!("report line: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = rows.iter().find(|r| r.schema_version != SCHEMA_VERSION) {
            return Err(Error::InvalidInput(format!("unsupported schema_version {}", r.schema_version)));
        }
        Ok(TheoremReport { rows })
    }

    pub fn falsified_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.falsified).count()
    }

    pub fn inconclusive_cells(&self) -> usize {
        self.rows.iter().map(|r| r.inconclusive_cells()).sum()
    }

    /// 0 clean, 1 something falsified, 2 only inconclusive cells.
    pub fn exit_code(&self) -> i32 {
        if self.falsified_rows() > 0 {
            1
        } else if self.inconclusive_cells() > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {:>5} {:>2}  {:<18} {:<22} {:<20} note", "group", "order", "k", "expected", "observed", "route");
        for r in &self.rows {
            for c in &r.cells {
                let expected = match c.expected {
                    Expectation::TotallyClosed => "closed",
                    Expectation::NotTotallyClosed => "not closed",
                    Expectation::NotCovered => "not covered",
                };
                let _ = writeln!(
                    out,
                    "{:<16} {:>5} {:>2}  {:<18} {:<22} {:<20} {}",
                    r.group,
                    r.order,
                    c.k,
                    expected,
                    c.observed.as_str(),
                    c.route,
                    c.note.as_deref().unwrap_or("")
                );
            }
            for f in &r.failures {
                let _ = writeln!(out, "{:<16} FALSIFIED: {f}", r.group);
            }
        }
        let _ = writeln!(
            out,
            "rows: {}, falsified rows: {}, inconclusive cells: {}",
            self.rows.len(),
            self.falsified_rows(),
            self.inconclusive_cells()
        );
        out
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub bounds: EnumerationBounds,
    pub limits: SearchLimits,
    /// Wall-clock budget per group.
    pub budget: Duration,
    /// Compute full closures on the constructed witness action.
    pub witness_full_closure: bool,
    /// Compare direct closures with the product of Sylow closures on the given action.
    pub sylow_lane: bool,
    pub lane: String,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            k_min: 2,
            k_max: 3,
            bounds: EnumerationBounds::default(),
            limits: SearchLimits::default(),
            budget: Duration::from_secs(120),
            witness_full_closure: true,
            sylow_lane: true,
            lane: "theorem".into(),
        }
    }
}

/// Smallest faithful degree, searching up to the regular degree.
fn smallest_faithful_degree(g: &PermGroup, bounds: &EnumerationBounds) -> Result<usize> {
    let wide = EnumerationBounds { max_degree: g.order().max(1), ..bounds.clone() };
    let found = faithful_actions(g, &wide)?;
    Ok(found.specs.first().map_or(g.order(), |s| s.degree))
}

fn odd_p_group(g: &PermGroup) -> bool {
    matches!(factorize(g.order() as u64).as_slice(), [(p, _)] if *p != 2)
}

fn detail_from_check(g: &PermGroup, check: &BoundedCheck) -> Option<WitnessDetail> {
    check.witness.as_ref().map(|w| WitnessDetail::Action {
        description: w.spec.describe(g),
        degree: w.spec.degree,
        spec: w.spec.to_record(),
        closure_order: w.closure.order.to_string(),
    })
}

/// Runs every cell for one group.
pub fn verify_group(name: &str, g: &PermGroup, config: &CampaignConfig) -> Result<GroupRow> {
    let start = Instant::now();
    let deadline = start + config.budget;
    let limits = SearchLimits { deadline: Some(deadline), ..config.limits.clone() };
    let nilpotent = is_nilpotent(g);
    let abelian = g.is_abelian();
    let invariants = if abelian { Some(abelian_invariants(g)?) } else { None };
    let cyclic = invariants.as_ref().is_some_and(|i| i.is_cyclic());
    let mut failures = Vec::new();

    let effective = config.bounds.max_degree.max(smallest_faithful_degree(g, &config.bounds)?);
    let bounds = EnumerationBounds { max_degree: effective, ..config.bounds.clone() };
    let record = BoundsRecord {
        max_degree: config.bounds.max_degree,
        effective_max_degree: effective,
        max_components: bounds.max_components,
        allow_duplicates: bounds.allow_duplicates,
        tuple_cap: limits.tuple_cap,
        order_cap: limits.order_cap,
        budget_seconds: config.budget.as_secs(),
    };
    let ks: Vec<usize> = (config.k_min..=config.k_max).collect();

    // direct closure against the product of Sylow closures, on the given action
    let mut sylow_factorization = Vec::new();
    let mut two_closure_nilpotent = None;
    if nilpotent && config.sylow_lane {
        let wide = SearchLimits { max_degree: limits.max_degree.max(g.degree()), ..limits.clone() };
        for &k in &ks {
            match (k_closure_with(g, k, &wide), k_closure_nilpotent_with(g, k, &wide)) {
                (Ok(direct), Ok(factored)) => {
                    let equal = direct.same_group(&factored);
                    if !equal {
                        failures.push(format!("k = {k}: direct closure differs from the product of Sylow closures"));
                    }
                    if k == 2 {
                        two_closure_nilpotent = direct.group.as_ref().map(is_nilpotent);
                        if two_closure_nilpotent == Some(false) {
                            failures.push("the 2-closure of a nilpotent group is not nilpotent".into());
                        }
                    }
                    sylow_factorization.push(SylowCheck {
                        k,
                        direct_order: direct.order.to_string(),
                        factored_order: factored.order.to_string(),
                        equal,
                    });
                }
                (Err(e), _) | (_, Err(e)) if e.is_resource_limit() => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
    }

    // explicit witness for nonabelian p-groups of odd order
    let mut witness_construction = None;
    if nilpotent && !abelian && odd_p_group(g) {
        let options = WitnessOptions {
            full_closure: config.witness_full_closure,
            limits: SearchLimits { max_degree: limits.max_degree.max(64), ..limits.clone() },
        };
        match run_witness(g, &ks, &options) {
            Ok((_, _, report)) => {
                if report.outcome == Verdict::Falsified {
                    failures.extend(report.failures.iter().map(|f| format!("witness construction: {f}")));
                }
                witness_construction = Some(report);
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) if e.is_resource_limit() => {}
            Err(e) => return Err(e),
        }
    }

    let mut cells = Vec::new();
    for &k in &ks {
        let cell_start = Instant::now();
        let expected = expected_verdict(g, k)?;
        if !nilpotent {
            cells.push(Cell {
                k,
                expected,
                observed: Verdict::NotApplicable,
                route: "none".into(),
                witness: None,
                specs_examined: 0,
                max_degree_examined: 0,
                note: Some("group is not nilpotent".into()),
                elapsed_ms: 0.0,
            });
            continue;
        }
        let mut route = "enumeration".to_string();
        let mut note = None;
        if let Some(report) = &witness_construction {
            if report.witnesses(k) {
                let closure_order = report.arities.iter().find(|a| a.k == k).and_then(|a| a.closure_order.clone());
                let observed = if expected == Expectation::TotallyClosed { Verdict::Falsified } else { Verdict::Witness };
                cells.push(Cell {
                    k,
                    expected,
                    observed,
                    route: "witness".into(),
                    witness: Some(WitnessDetail::Theta { omega_degree: report.omega_degree, theta: report.theta.clone(), closure_order }),
                    specs_examined: 0,
                    max_degree_examined: report.omega_degree,
                    note: None,
                    elapsed_ms: cell_start.elapsed().as_secs_f64() * 1e3,
                });
                continue;
            }
            route = "witness+enumeration".into();
            note = Some(format!("theta does not preserve the {k}-orbits on Omega"));
        }
        let check = match totally_k_closed_bounded(g, k, &bounds, &limits) {
            Ok(c) => c,
            Err(e) if e.is_resource_limit() => BoundedCheck {
                verdict: Verdict::Inconclusive,
                arity: k,
                witness: None,
                degrees_examined: Vec::new(),
                failures: vec![("enumeration".into(), e.to_string())],
                truncated: None,
                elapsed_ms: 0.0,
            },
            Err(e) => return Err(e),
        };
        let witness_failed = witness_construction.is_some();
        let observed = match (check.verdict, expected) {
            (Verdict::Witness, Expectation::TotallyClosed) => Verdict::Falsified,
            (Verdict::ConfirmedUpToBound, Expectation::NotTotallyClosed) if witness_failed => Verdict::Falsified,
            (Verdict::ConfirmedUpToBound, Expectation::NotTotallyClosed) => {
                note = Some("no witness within the bounds".into());
                Verdict::Inconclusive
            }
            (v, _) => v,
        };
        if let Some((spec, why)) = check.failures.first() {
            note = Some(format!("{}; undecided {spec}: {why}", note.unwrap_or_default()));
        }
        if observed == Verdict::Falsified {
            failures.push(format!("k = {k}: expected {expected:?}, bounded search gave {}", check.verdict));
        }
        cells.push(Cell {
            k,
            expected,
            observed,
            route,
            witness: detail_from_check(g, &check),
            specs_examined: check.degrees_examined.len(),
            max_degree_examined: check.degrees_examined.iter().copied().max().unwrap_or(0),
            note,
            elapsed_ms: cell_start.elapsed().as_secs_f64() * 1e3,
        });
    }

    let falsified = !failures.is_empty() || cells.iter().any(|c| c.observed == Verdict::Falsified);
    Ok(GroupRow {
        schema_version: SCHEMA_VERSION,
        group: name.to_string(),
        lane: config.lane.clone(),
        order: g.order(),
        degree: g.degree(),
        nilpotent,
        abelian,
        cyclic,
        n_g: invariants.as_ref().map(|i| i.count()),
        invariant_factors: invariants.map(|i| i.factors),
        cells,
        sylow_factorization,
        two_closure_nilpotent,
        witness_construction,
        bounds: record,
        falsified,
        failures,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs the campaign over `(name, group)` pairs, in catalog order.
pub fn verify_theorem(catalog: &[(String, PermGroup)], config: &CampaignConfig) -> Result<TheoremReport> {
    let rows = catalog.iter().map(|(name, g)| verify_group(name, g, config)).collect::<Result<Vec<_>>>()?;
    Ok(TheoremReport { rows })
}

/// The `k = 2` lane for nilpotent groups of any parity.
pub fn quaternion_lane_config() -> CampaignConfig {
    CampaignConfig {
        k_min: 2,
        k_max: 2,
        bounds: EnumerationBounds { max_degree: 16, max_components: 2, ..Default::default() },
        lane: "k2-nilpotent".into(),
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;

    #[test]
    fn expectations() {
        let e = |name: &str, k| expected_verdict(&construct(name).unwrap(), k).unwrap();
        assert_eq!(e("cyclic:9", 2), Expectation::TotallyClosed);
        assert_eq!(e("abelian:3,3", 2), Expectation::NotTotallyClosed);
        assert_eq!(e("abelian:3,3", 3), Expectation::TotallyClosed);
        assert_eq!(e("abelian:3,3,3", 3), Expectation::NotTotallyClosed);
        assert_eq!(e("heisenberg:3", 3), Expectation::NotTotallyClosed);
        assert_eq!(e("q8", 2), Expectation::TotallyClosed);
        assert_eq!(e("q8", 3), Expectation::NotCovered);
        assert_eq!(e("abelian:2,2", 2), Expectation::NotTotallyClosed);
        assert_eq!(e("sym:3", 2), Expectation::NotCovered);
    }

    #[test]
    fn small_campaign() {
        let catalog: Vec<(String, PermGroup)> =
            ["cyclic:9", "abelian:3,3"].iter().map(|n| (n.to_string(), construct(n).unwrap())).collect();
        let report = verify_theorem(&catalog, &CampaignConfig::default()).unwrap();
        assert_eq!(report.falsified_rows(), 0, "{}", report.to_table());
        assert_eq!(report.exit_code(), 0);
        let z33 = &report.rows[1];
        assert_eq!(z33.cells[0].observed, Verdict::Witness);
        assert_eq!(z33.cells[1].observed, Verdict::ConfirmedUpToBound);
        assert_eq!(TheoremReport::from_jsonl(&report.to_jsonl()).unwrap(), report);
    }

    #[test]
    fn schema_version_pinned() {
        let text = r#"{"schema_version": 2}"#;
        assert!(TheoremReport::from_jsonl(text).is_err());
    }
}
