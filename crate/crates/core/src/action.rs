//! Faithful `G`-sets: unions of coset actions, bounded enumeration, and the
//! embedding of `G` into `K wr G/K` for a normal subgroup `K`.

use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::closure::{k_closure_with, ClosureResult, SearchLimits};
use crate::error::{Error, Result};
use crate::group::{CosetSpace, PermGroup};
use crate::perm::{format_cycles, parse_cycles, Perm};
use crate::subgroups::{ElementSet, SubgroupLattice, DEFAULT_SUBGROUP_COUNT_CAP, DEFAULT_SUBGROUP_GROUP_CAP};

/// A group homomorphism from a fully enumerated group, stored element by element.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    domain: PermGroup,
    images: Vec<Perm>,
}

impl Homomorphism {
    /// Extends generator images along the domain's enumeration and checks the
    /// extension is well defined.
    pub fn from_generator_images(domain: &PermGroup, images: &[Perm]) -> Result<Self> {
        let gens = domain.generators();
        if gens.len() != images.len() {
            return Err(Error::InvalidInput(format!("{} generators but {} images", gens.len(), images.len())));
        }
        let target_degree = images.first().map_or(0, |p| p.degree());
        if images.iter().any(|p| p.degree() != target_degree) {
            return Err(Error::InvalidInput("generator images have different degrees".into()));
        }
        let order = domain.order();
        let mut table: Vec<Option<Perm>> = vec![None; order];
        table[0] = Some(Perm::identity(target_degree));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            let img_e = table[e].clone().expect("queued");
            for (s, img_s) in gens.iter().zip(images) {
                let prod = domain.index_of(&domain.elements()[e].then(s)).expect("closed");
                let img = img_e.then(img_s);
                match &table[prod] {
                    None => {
                        table[prod] = Some(img);
                        queue.push(prod);
                    }
                    Some(existing) if *existing != img => {
                        return Err(Error::InvalidInput(
                            "generator images do not extend to a homomorphism".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        let hom = Homomorphism { domain: domain.clone(), images: table.into_iter().map(|p| p.expect("generated")).collect() };
        hom.check_multiplicative()?;
        Ok(hom)
    }

    /// Builds the map from a per-element rule, then checks it is a homomorphism.
    pub fn from_fn(domain: &PermGroup, f: impl Fn(&Perm) -> Result<Perm>) -> Result<Self> {
        let images = domain.elements().iter().map(f).collect::<Result<Vec<_>>>()?;
        let hom = Homomorphism { domain: domain.clone(), images };
        hom.check_multiplicative()?;
        Ok(hom)
    }

    /// `phi(x s) = phi(x) phi(s)` for every element `x` and generator `s`.
    fn check_multiplicative(&self) -> Result<()> {
        for (i, x) in self.domain.elements().iter().enumerate() {
            for s in self.domain.generators() {
                let xs = self.domain.index_of(&x.then(s)).expect("closed");
                let s_idx = self.domain.index_of(s).expect("generator");
                if self.images[xs] != self.images[i].then(&self.images[s_idx]) {
                    return Err(Error::Internal(format!("map is not multiplicative at {x} * {s}")));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &PermGroup {
        &self.domain
    }

    pub fn target_degree(&self) -> usize {
        self.images.first().map_or(0, |p| p.degree())
    }

    pub fn image(&self, x: &Perm) -> Result<&Perm> {
        self.domain
            .index_of(x)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::NotASubgroup(format!("{x} not in the domain")))
    }

    pub fn is_injective(&self) -> bool {
        self.images.iter().skip(1).all(|p| !p.is_identity())
    }

    pub fn generator_images(&self) -> Vec<Perm> {
        self.domain.generators().iter().map(|g| self.image(g).expect("generator").clone()).collect()
    }

    /// The image as a permutation group on the target points.
    pub fn image_group(&self) -> Result<PermGroup> {
        PermGroup::generate(self.target_degree(), &self.generator_images(), self.domain.order().max(1))
    }

    /// The same map restricted to a subgroup of the domain.
    pub fn restrict_to(&self, sub: &PermGroup) -> Result<Homomorphism> {
        Homomorphism::from_fn(sub, |x| self.image(x).cloned())
    }
}

/// A family of subgroups with multiplicities; `G` acts on the disjoint union of their right coset spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpec {
    pub subgroups: Vec<PermGroup>,
    pub multiplicities: Vec<usize>,
    /// Positions in the subgroup lattice, when the spec came from enumeration.
    pub lattice_indices: Vec<usize>,
    pub degree: usize,
    pub faithful: bool,
}

/// Serialized form: generators in 1-based cycle notation over `G`'s points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpecRecord {
    pub subgroups: Vec<Vec<String>>,
    pub multiplicities: Vec<usize>,
}

impl ActionSpec {
    pub fn new(g: &PermGroup, subgroups: Vec<PermGroup>, multiplicities: Vec<usize>) -> Result<Self> {
        if subgroups.len() != multiplicities.len() || subgroups.is_empty() {
            return Err(Error::InvalidInput("an action spec needs one multiplicity per subgroup".into()));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        // the kernel is the intersection of the cores
        let mut kernel: Vec<Perm> = g.elements().to_vec();
        for h in &subgroups {
            if !h.is_subgroup_of(g) {
                return Err(Error::NotASubgroup("spec component is not a subgroup of G".into()));
            }
            let core = g.core(h)?;
            kernel.retain(|e| core.contains(e));
        }
        let degree = subgroups.iter().zip(&multiplicities).map(|(h, m)| m * g.order() / h.order()).sum();
        Ok(ActionSpec { subgroups, multiplicities, lattice_indices: Vec::new(), degree, faithful: kernel.len() == 1 })
    }

    pub fn regular(g: &PermGroup) -> Self {
        ActionSpec::new(g, vec![PermGroup::trivial(g.degree())], vec![1]).expect("trivial subgroup")
    }

    pub fn num_orbits(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn to_record(&self) -> ActionSpecRecord {
        ActionSpecRecord {
            subgroups: self.subgroups.iter().map(|h| h.generators().iter().map(format_cycles).collect()).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }

    pub fn from_record(g: &PermGroup, record: &ActionSpecRecord) -> Result<Self> {
        let subgroups = record
            .subgroups
            .iter()
            .map(|gens| {
                let perms = gens.iter().map(|s| parse_cycles(s, g.degree())).collect::<Result<Vec<_>>>()?;
                PermGroup::generate(g.degree(), &perms, g.order().max(1))
            })
            .collect::<Result<Vec<_>>>()?;
        ActionSpec::new(g, subgroups, record.multiplicities.clone())
    }

    /// Human-readable summary such as `9 + 3 + 3`.
    pub fn describe(&self, g: &PermGroup) -> String {
        let mut parts = Vec::new();
        for (h, &m) in self.subgroups.iter().zip(&self.multiplicities) {
            for _ in 0..m {
                parts.push((g.order() / h.order()).to_string());
            }
        }
        parts.join(" + ")
    }
}

/// Label of a point of a realized action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLabel {
    pub component: usize,
    pub copy: usize,
    pub coset: usize,
}

/// `G` acting on the points of an [`ActionSpec`].
#[derive(Clone, Debug)]
pub struct RealizedAction {
    pub group: PermGroup,
    /// Images of `G`'s generators, in order.
    pub generator_images: Vec<Perm>,
    pub labels: Vec<PointLabel>,
    pieces: Vec<(CosetSpace, usize, usize)>,
    degree: usize,
}

impl RealizedAction {
    /// Image of an arbitrary element of `G`.
    pub fn map(&self, g: &PermGroup, x: &Perm) -> Perm {
        let mut images = vec![0u32; self.degree];
        for (cosets, offset, copies) in &self.pieces {
            let local = cosets.action_of(g, x);
            for copy in 0..*copies {
                let base = offset + copy * cosets.len();
                for i in 0..cosets.len() {
                    images[base + i] = (base + local.apply(i)) as u32;
                }
            }
        }
        Perm::from_images(images).expect("block-wise bijection")
    }
}

/// Disjoint union of the right-coset actions described by `spec`.
pub fn realize(g: &PermGroup, spec: &ActionSpec) -> Result<RealizedAction> {
    let mut pieces = Vec::new();
    let mut labels = Vec::new();
    let mut offset = 0;
    for (component, (h, &m)) in spec.subgroups.iter().zip(&spec.multiplicities).enumerate() {
        let cosets = g.coset_space(h)?;
        for copy in 0..m {
            for coset in 0..cosets.len() {
                labels.push(PointLabel { component, copy, coset });
            }
        }
        let len = cosets.len();
        pieces.push((cosets, offset, m));
        offset += m * len;
    }
    let mut realized = RealizedAction { group: PermGroup::trivial(offset), generator_images: Vec::new(), labels, pieces, degree: offset };
    realized.generator_images = g.generators().iter().map(|x| realized.map(g, x)).collect();
    realized.group = PermGroup::generate(offset, &realized.generator_images, g.order().max(1))?;
    if spec.faithful != (realized.group.order() == g.order()) {
        return Err(Error::Internal("faithfulness flag disagrees with the realized order".into()));
    }
    Ok(realized)
}

/// Result of a bounded enumeration, with a marker when a cap cut it short.
#[derive(Clone, Debug)]
pub struct ActionEnumeration {
    pub specs: Vec<ActionSpec>,
    pub truncated: Option<String>,
}

#[derive(Clone, Debug)]
pub struct EnumerationBounds {
    pub max_degree: usize,
    /// Bound on the number of orbits (counting repeated components).
    pub max_components: usize,
    /// Allow a component to appear twice.
    pub allow_duplicates: bool,
    /// Stop after this many specs.
    pub max_specs: usize,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds { max_degree: 24, max_components: 4, allow_duplicates: false, max_specs: 200_000 }
    }
}

/// Faithful specs built from conjugacy-class representatives of proper
/// subgroups, by ascending degree and then lexicographically by lattice index.
pub fn faithful_actions(g: &PermGroup, bounds: &EnumerationBounds) -> Result<ActionEnumeration> {
    let lattice = SubgroupLattice::new(g, DEFAULT_SUBGROUP_GROUP_CAP, DEFAULT_SUBGROUP_COUNT_CAP)?;
    let table = lattice.table();
    let order = g.order();
    // fixed points never change a closure, so the whole group is not a component
    let reps: Vec<usize> = lattice
        .class_representatives()
        .into_iter()
        .filter(|&i| lattice.sets()[i].len() < order || order == 1)
        .filter(|&i| order / lattice.sets()[i].len() <= bounds.max_degree)
        .collect();
    let cores: Vec<ElementSet> = reps.iter().map(|&i| table.core(&lattice.sets()[i])).collect();
    let indices: Vec<usize> = reps.iter().map(|&i| order / lattice.sets()[i].len()).collect();
    let max_mult = if bounds.allow_duplicates { 2 } else { 1 };

    let mut found: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    let mut truncated = None;
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let full = {
        let mut s = ElementSet::empty(order);
        (0..order).for_each(|i| {
            s.insert(i);
        });
        s
    };
    #[allow(clippy::too_many_arguments)]
    fn walk(
        start: usize,
        degree: usize,
        orbits: usize,
        core: &ElementSet,
        chosen: &mut Vec<(usize, usize)>,
        ctx: &(&[usize], &[ElementSet], usize, &EnumerationBounds),
        found: &mut Vec<(usize, Vec<(usize, usize)>)>,
        truncated: &mut Option<String>,
    ) {
        let (indices, cores, max_mult, bounds) = *ctx;
        if truncated.is_some() {
            return;
        }
        if !chosen.is_empty() && core.len() == 1 {
            if found.len() >= bounds.max_specs {
                *truncated = Some(format!("stopped after {} specs", bounds.max_specs));
                return;
            }
            found.push((degree, chosen.clone()));
        }
        for r in start..indices.len() {
            for m in 1..=max_mult {
                let d = degree + m * indices[r];
                if d > bounds.max_degree || orbits + m > bounds.max_components {
                    break;
                }
                chosen.push((r, m));
                let next = core.intersect(&cores[r]);
                walk(r + 1, d, orbits + m, &next, chosen, ctx, found, truncated);
                chosen.pop();
            }
        }
    }
    let ctx = (&indices[..], &cores[..], max_mult, bounds);
    walk(0, 0, 0, &full, &mut chosen, &ctx, &mut found, &mut truncated);
    found.sort_by(|a, b| {
        let key = |v: &Vec<(usize, usize)>| v.iter().map(|&(r, m)| (reps[r], m)).collect::<Vec<_>>();
        a.0.cmp(&b.0).then_with(|| key(&a.1).cmp(&key(&b.1)))
    });
    let specs = found
        .into_iter()
        .map(|(degree, comps)| {
            let subgroups = comps.iter().map(|&(r, _)| lattice.to_group(g, reps[r])).collect();
            let multiplicities = comps.iter().map(|&(_, m)| m).collect();
            let lattice_indices = comps.iter().map(|&(r, _)| reps[r]).collect();
            ActionSpec { subgroups, multiplicities, lattice_indices, degree, faithful: true }
        })
        .collect();
    Ok(ActionEnumeration { specs, truncated })
}

/// `G` acting faithfully on `Delta x G/K` through `K wr G/K`.
#[derive(Clone, Debug)]
pub struct EmbeddedAction {
    pub delta_degree: usize,
    pub cosets: CosetSpace,
    /// `G` on the `|Delta| * |G:K|` points `(delta, coset i)`, indexed `i * |Delta| + delta`.
    pub hom: Homomorphism,
    pub group: PermGroup,
}

impl EmbeddedAction {
    pub fn degree(&self) -> usize {
        self.delta_degree * self.cosets.len()
    }

    pub fn point(&self, delta: usize, coset: usize) -> usize {
        coset * self.delta_degree + delta
    }

    /// `(delta, coset)` of a point index.
    pub fn label(&self, point: usize) -> (usize, usize) {
        (point % self.delta_degree, point / self.delta_degree)
    }

    pub fn image(&self, x: &Perm) -> Result<&Perm> {
        self.hom.image(x)
    }
}

/// Embeds `G` using a faithful action `delta` of the normal subgroup `K`, with
/// the default transversal (first element of each coset, identity first).
pub fn universal_embedding(g: &PermGroup, k: &PermGroup, delta: &Homomorphism) -> Result<EmbeddedAction> {
    let cosets = g.coset_space(k)?;
    universal_embedding_with(g, k, delta, cosets)
}

/// As [`universal_embedding`], over a caller-chosen transversal of `G/K`.
pub fn universal_embedding_with(g: &PermGroup, k: &PermGroup, delta: &Homomorphism, cosets: CosetSpace) -> Result<EmbeddedAction> {
    if !g.is_normal(k)? {
        return Err(Error::NotNormal);
    }
    if delta.domain() != k {
        return Err(Error::InvalidInput("the Delta-action must be defined on K".into()));
    }
    if !delta.is_injective() {
        return Err(Error::InvalidInput("the Delta-action of K is not faithful".into()));
    }
    let dn = delta.target_degree();
    let m = cosets.len();
    let transversal = cosets.transversal().to_vec();
    let inverses: Vec<Perm> = transversal.iter().map(|t| t.inverse()).collect();
    let rule = |x: &Perm| -> Result<Perm> {
        let mut images = vec![0u32; dn * m];
        for (i, gi) in transversal.iter().enumerate() {
            let gix = gi.then(x);
            let j = cosets.coset_of_element(g, &gix)?;
            let f = gix.then(&inverses[j]);
            if !k.contains(&f) {
                return Err(Error::Internal(format!("g_i x g_j^-1 = {f} is not in K")));
            }
            let fd = delta.image(&f)?;
            for d in 0..dn {
                images[i * dn + d] = (j * dn + fd.apply(d)) as u32;
            }
        }
        Perm::from_images(images)
    };
    let hom = Homomorphism::from_fn(g, rule)?;
    if !hom.is_injective() {
        return Err(Error::Internal("embedded action is not faithful".into()));
    }
    let group = hom.image_group()?;
    Ok(EmbeddedAction { delta_degree: dn, cosets, hom, group })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Witness,
    ConfirmedUpToBound,
    NotApplicable,
    Inconclusive,
    Falsified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Witness => "WITNESS",
            Verdict::ConfirmedUpToBound => "CONFIRMED-UP-TO-BOUND",
            Verdict::NotApplicable => "NOT-APPLICABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Falsified => "FALSIFIED",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A faithful action whose `k`-closure is strictly larger than `G`.
#[derive(Clone, Debug)]
pub struct ActionWitness {
    pub spec: ActionSpec,
    pub action: RealizedAction,
    pub closure: ClosureResult,
}

#[derive(Clone, Debug)]
pub struct BoundedCheck {
    pub verdict: Verdict,
    pub arity: usize,
    pub witness: Option<ActionWitness>,
    /// Degrees of every spec whose closure was computed, in stream order.
    pub degrees_examined: Vec<usize>,
    /// Specs that could not be decided, with the reason.
    pub failures: Vec<(String, String)>,
    pub truncated: Option<String>,
    pub elapsed_ms: f64,
}

/// Looks for a faithful action within `bounds` whose `k`-closure is strict.
///
/// Never claims total `k`-closedness outright: without a witness the verdict
/// is CONFIRMED-UP-TO-BOUND, or INCONCLUSIVE if any spec was undecided.
pub fn totally_k_closed_bounded(g: &PermGroup, k: usize, bounds: &EnumerationBounds, limits: &SearchLimits) -> Result<BoundedCheck> {
    let start = Instant::now();
    let actions = faithful_actions(g, bounds)?;
    let mut degrees_examined = Vec::new();
    let mut failures = Vec::new();
    let limits = SearchLimits { max_degree: limits.max_degree.max(bounds.max_degree), ..limits.clone() };
    for spec in actions.specs {
        let action = realize(g, &spec)?;
        match k_closure_with(&action.group, k, &limits) {
            Ok(closure) => {
                degrees_examined.push(spec.degree);
                if closure.strict {
                    return Ok(BoundedCheck {
                        verdict: Verdict::Witness,
                        arity: k,
                        witness: Some(ActionWitness { spec, action, closure }),
                        degrees_examined,
                        failures,
                        truncated: actions.truncated,
                        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    });
                }
            }
            Err(e) if e.is_resource_limit() => {
                failures.push((spec.describe(g), e.to_string()));
                if matches!(e, Error::BudgetExceeded { .. }) {
                    break;
                }
            }
            Err(e) => return Err(e),
        }
    }
    let verdict = if failures.is_empty() && actions.truncated.is_none() { Verdict::ConfirmedUpToBound } else { Verdict::Inconclusive };
    Ok(BoundedCheck {
        verdict,
        arity: k,
        witness: None,
        degrees_examined,
        failures,
        truncated: actions.truncated,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Order of the closure divided by `|G|`, for reporting.
pub fn closure_index(closure: &ClosureResult) -> BigUint {
    &closure.order / BigUint::from(closure.input_order.max(1))
}
