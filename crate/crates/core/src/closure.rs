//! The `k`-closure of a permutation group.
//!
//! The closure is the set of all permutations of `Omega` that keep every
//! `G`-orbit on `Omega^k` in place. It is found by a backtracking search over
//! images of the points `0, 1, .., n-1`, pruning a partial assignment as soon
//! as some fully assigned tuple changes color. The search is organised along
//! the base `0, 1, .., n-1`: for each base point it determines the full basic
//! orbit of the closure's pointwise stabilizer, which yields a strong
//! generating set and the exact order without listing every element.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::coloring::{orbit_coloring, OrbitColoring, DEFAULT_TUPLE_CAP};
use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::perm::{format_cycles, Perm};
use crate::stabchain::StabChain;
use crate::structure::{is_nilpotent, sylow_subgroups};

pub const DEFAULT_MAX_DEGREE: usize = 32;
pub const BRUTEFORCE_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Largest degree the backtracking search accepts.
    pub max_degree: usize,
    pub tuple_cap: usize,
    /// Closures up to this order are materialized as element sets.
    pub order_cap: usize,
    pub node_cap: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_degree: DEFAULT_MAX_DEGREE,
            tuple_cap: DEFAULT_TUPLE_CAP,
            order_cap: DEFAULT_ORDER_CAP,
            node_cap: None,
            deadline: None,
        }
    }
}

impl SearchLimits {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    pub fn with_max_degree(mut self, max_degree: usize) -> Self {
        self.max_degree = max_degree;
        self
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded { seconds: 0 }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureMethod {
    Backtrack,
    Bruteforce,
    Sylow,
}

impl std::str::FromStr for ClosureMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backtrack" => Ok(ClosureMethod::Backtrack),
            "bruteforce" => Ok(ClosureMethod::Bruteforce),
            "sylow" => Ok(ClosureMethod::Sylow),
            _ => Err(Error::InvalidInput(format!("unknown closure method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClosureStats {
    /// Search-tree nodes visited (partial assignments tested).
    pub nodes: u64,
    /// Existence searches launched, one per untested basic-orbit candidate.
    pub searches: u64,
    /// Elements emitted beyond those supplied by the input group.
    pub elements_emitted: usize,
    pub elapsed_ms: f64,
}

/// `G^(k)` on the input's point set.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub arity: usize,
    pub degree: usize,
    pub method: ClosureMethod,
    pub input_order: usize,
    pub order: BigUint,
    pub strict: bool,
    /// Generates the closure: the input's generators followed by emitted elements.
    pub generators: Vec<Perm>,
    /// The element set, when the order is within the materialization cap.
    pub group: Option<PermGroup>,
    pub stats: ClosureStats,
    chain: StabChain,
}

impl ClosureResult {
    pub fn contains(&self, x: &Perm) -> bool {
        self.chain.contains(x)
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    /// Order as a machine integer, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    pub fn is_subgroup_of(&self, other: &ClosureResult) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality as sets of permutations.
    pub fn same_group(&self, other: &ClosureResult) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    /// Elements emitted beyond the input generators.
    pub fn extra_generators(&self) -> &[Perm] {
        &self.generators[self.generators.len() - self.stats.elements_emitted..]
    }
}

/// Serializable view of a [`ClosureResult`], permutations in 1-based cycle notation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureSummary {
    pub arity: usize,
    pub degree: usize,
    pub method: ClosureMethod,
    pub input_order: usize,
    pub order: String,
    pub strict: bool,
    pub generators: Vec<String>,
    /// Generators found by the search that are not input generators.
    pub new_generators: Vec<String>,
    pub basic_orbit_sizes: Vec<usize>,
    pub stats: ClosureStats,
}

impl ClosureResult {
    pub fn summary(&self) -> ClosureSummary {
        ClosureSummary {
            arity: self.arity,
            degree: self.degree,
            method: self.method,
            input_order: self.input_order,
            order: self.order.to_string(),
            strict: self.strict,
            generators: self.generators.iter().map(format_cycles).collect(),
            new_generators: self.extra_generators().iter().map(format_cycles).collect(),
            basic_orbit_sizes: self.chain.basic_orbit_sizes(),
            stats: self.stats.clone(),
        }
    }
}

/// Per-depth lists of the tuples that become fully assigned when the point at that depth is fixed.
struct DepthChecks {
    /// `[arity-1]` -> flattened coordinates and source colors
    by_arity: Vec<(Vec<u32>, Vec<u32>)>,
}

struct Searcher<'a> {
    n: usize,
    colorings: &'a [OrbitColoring],
    depth_checks: Vec<DepthChecks>,
    image: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    limits: &'a SearchLimits,
}

impl<'a> Searcher<'a> {
    fn new(colorings: &'a [OrbitColoring], limits: &'a SearchLimits) -> Self {
        let n = colorings[0].degree();
        let mut depth_checks = Vec::with_capacity(n);
        for d in 0..n {
            let mut by_arity = Vec::new();
            for c in colorings {
                let k = c.arity();
                let mut coords = Vec::new();
                let mut colors = Vec::new();
                let mut tuple = vec![0usize; k];
                // tuples over {0..=d} with at least one coordinate equal to d
                enumerate_tuples_with(d, k, &mut tuple, 0, false, &mut |t| {
                    coords.extend(t.iter().map(|&x| x as u32));
                    colors.push(c.color(c.indexer().index(t)));
                });
                by_arity.push((coords, colors));
            }
            depth_checks.push(DepthChecks { by_arity });
        }
        Searcher { n, colorings, depth_checks, image: vec![u32::MAX; n], used: vec![false; n], nodes: 0, limits }
    }

    /// Whether fixing the image of `d` keeps every newly assigned tuple in its orbit.
    fn consistent(&self, d: usize) -> bool {
        for (c, (coords, colors)) in self.colorings.iter().zip(&self.depth_checks[d].by_arity) {
            let k = c.arity();
            for (t, &src) in coords.chunks_exact(k).zip(colors) {
                let dst = t.iter().fold(0usize, |acc, &p| acc * self.n + self.image[p as usize] as usize);
                if c.color(dst) != src {
                    return false;
                }
            }
        }
        true
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(cap) = self.limits.node_cap {
            if self.nodes > cap {
                return Err(Error::SearchBoundExceeded(format!("node cap {cap} reached")));
            }
        }
        if self.nodes % 4096 == 0 {
            self.limits.check_deadline()?;
        }
        Ok(())
    }

    /// Depth-first extension of the assignment on `0..d` to a full permutation.
    fn extend(&mut self, d: usize) -> Result<bool> {
        if d == self.n {
            return Ok(true);
        }
        let color1 = self.colorings[0].color(d);
        for w in 0..self.n {
            if self.used[w] || self.colorings[0].color(w) != color1 {
                continue;
            }
            self.tick()?;
            self.image[d] = w as u32;
            self.used[w] = true;
            if self.consistent(d) && self.extend(d + 1)? {
                return Ok(true);
            }
            self.used[w] = false;
            self.image[d] = u32::MAX;
        }
        Ok(false)
    }

    /// Looks for a closure element fixing `0..level` pointwise and sending `level` to `target`.
    fn find(&mut self, level: usize, target: usize) -> Result<Option<Perm>> {
        self.image.iter_mut().for_each(|x| *x = u32::MAX);
        self.used.iter_mut().for_each(|x| *x = false);
        for p in 0..level {
            self.image[p] = p as u32;
            self.used[p] = true;
        }
        self.image[level] = target as u32;
        self.used[target] = true;
        self.tick()?;
        if !self.consistent(level) {
            return Ok(None);
        }
        if self.extend(level + 1)? {
            Ok(Some(Perm::from_images_unchecked(self.image.clone())))
        } else {
            Ok(None)
        }
    }
}

fn enumerate_tuples_with(d: usize, k: usize, t: &mut [usize], pos: usize, has_d: bool, f: &mut impl FnMut(&[usize])) {
    if pos == k {
        if has_d {
            f(t);
        }
        return;
    }
    // remaining slots must still be able to place d
    for v in 0..=d {
        if !has_d && pos == k - 1 && v != d {
            continue;
        }
        t[pos] = v;
        enumerate_tuples_with(d, k, t, pos + 1, has_d || v == d, f);
    }
}

fn orbit_under(n: usize, start: usize, gens: &[&Perm]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Colorings of arities `1..=k` for the group (lower arities only prune).
fn colorings_up_to(g: &PermGroup, k: usize, tuple_cap: usize) -> Result<Vec<OrbitColoring>> {
    (1..=k).map(|j| orbit_coloring(g, j, tuple_cap)).collect()
}

/// `G^(k)` by base-guided backtracking.
pub fn k_closure(g: &PermGroup, k: usize) -> Result<ClosureResult> {
    k_closure_with(g, k, &SearchLimits::default())
}

pub fn k_closure_with(g: &PermGroup, k: usize, limits: &SearchLimits) -> Result<ClosureResult> {
    let start = Instant::now();
    let n = g.degree();
    if k == 0 {
        return Err(Error::InvalidInput("arity must be at least 1".into()));
    }
    if n > limits.max_degree {
        return Err(Error::SearchBoundExceeded(format!("degree {n} exceeds search bound {}", limits.max_degree)));
    }
    if n == 0 {
        return finish(g, k, ClosureMethod::Backtrack, Vec::new(), StabChain::trivial(0), ClosureStats::default(), start, limits);
    }
    let colorings = colorings_up_to(g, k, limits.tuple_cap)?;

    // Elements of G supply part of every basic orbit for free.
    let mut level_of_seed: Vec<(usize, Perm)> = Vec::new();
    {
        let mut seen_image = vec![vec![false; n]; n];
        for e in g.elements() {
            if let Some(m) = e.first_moved() {
                let img = e.apply(m);
                if !seen_image[m][img] {
                    seen_image[m][img] = true;
                    level_of_seed.push((m, e.clone()));
                }
            }
        }
    }
    let mut found: Vec<(usize, Perm)> = Vec::new();
    let mut searcher = Searcher::new(&colorings, limits);
    let mut searches = 0u64;

    for level in (0..n).rev() {
        let level_gens = |found: &[(usize, Perm)]| -> Vec<Perm> {
            level_of_seed
                .iter()
                .chain(found.iter())
                .filter(|(l, _)| *l >= level)
                .map(|(_, p)| p.clone())
                .collect()
        };
        let mut gens = level_gens(&found);
        let mut in_orbit = orbit_under(n, level, &gens.iter().collect::<Vec<_>>());
        let mut impossible = vec![false; n];
        let color1 = colorings[0].color(level);
        for target in level + 1..n {
            if in_orbit[target] || impossible[target] || colorings[0].color(target) != color1 {
                continue;
            }
            searches += 1;
            match searcher.find(level, target)? {
                Some(x) => {
                    found.push((level, x));
                    gens = level_gens(&found);
                    in_orbit = orbit_under(n, level, &gens.iter().collect::<Vec<_>>());
                }
                None => {
                    // every point in the known orbit of `target` is unreachable too
                    let refs: Vec<&Perm> = gens.iter().collect();
                    for (p, hit) in orbit_under(n, target, &refs).into_iter().enumerate() {
                        if hit {
                            impossible[p] = true;
                        }
                    }
                }
            }
        }
    }

    let mut strong: Vec<Perm> = level_of_seed.iter().map(|(_, p)| p.clone()).collect();
    strong.extend(found.iter().map(|(_, p)| p.clone()));
    let base: Vec<usize> = (0..n).collect();
    let chain = StabChain::from_strong_generators(n, &base, &strong);
    let stats = ClosureStats { nodes: searcher.nodes, searches, elements_emitted: found.len(), elapsed_ms: 0.0 };
    let extra: Vec<Perm> = found.into_iter().map(|(_, p)| p).collect();
    finish(g, k, ClosureMethod::Backtrack, extra, chain, stats, start, limits)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    g: &PermGroup,
    k: usize,
    method: ClosureMethod,
    extra: Vec<Perm>,
    chain: StabChain,
    mut stats: ClosureStats,
    start: Instant,
    limits: &SearchLimits,
) -> Result<ClosureResult> {
    let n = g.degree();
    let order = chain.order();
    if order < BigUint::from(g.order()) || g.generators().iter().any(|x| !chain.contains(x)) {
        return Err(Error::Internal("closure does not contain the input group".into()));
    }
    let mut generators: Vec<Perm> = g.generators().to_vec();
    generators.extend(extra.iter().cloned());
    stats.elements_emitted = extra.len();
    let group = if order <= BigUint::from(limits.order_cap) {
        let materialized = PermGroup::generate(n, &generators, limits.order_cap)?;
        if BigUint::from(materialized.order()) != order {
            return Err(Error::Internal(format!(
                "emitted elements generate {} elements, search counted {order}",
                materialized.order()
            )));
        }
        Some(materialized)
    } else {
        None
    };
    stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let strict = order > BigUint::from(g.order());
    Ok(ClosureResult { arity: k, degree: n, method, input_order: g.order(), order, strict, generators, group, stats, chain })
}

/// `G^(k)` by filtering all of `Sym(n)` through the orbit coloring (`n <= 8`).
pub fn k_closure_bruteforce(g: &PermGroup, k: usize) -> Result<ClosureResult> {
    let start = Instant::now();
    let n = g.degree();
    if n > BRUTEFORCE_MAX_DEGREE {
        return Err(Error::SearchBoundExceeded(format!("brute force limited to degree {BRUTEFORCE_MAX_DEGREE}, got {n}")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("arity must be at least 1".into()));
    }
    let coloring = orbit_coloring(g, k, DEFAULT_TUPLE_CAP)?;
    let mut members = Vec::new();
    let mut nodes = 0u64;
    for_each_permutation(n, |images| {
        nodes += 1;
        let x = Perm::from_images_unchecked(images.to_vec());
        if coloring.preserves(&x).expect("same degree") {
            members.push(x);
        }
    });
    let group = PermGroup::from_closed_subset(n, &members)?;
    let extra: Vec<Perm> = group.generators().iter().filter(|x| !g.contains(x)).cloned().collect();
    let chain = StabChain::schreier_sims(n, group.generators());
    let stats = ClosureStats { nodes, searches: 1, elements_emitted: 0, elapsed_ms: 0.0 };
    let mut result = finish(g, k, ClosureMethod::Bruteforce, extra, chain, stats, start, &SearchLimits::default())?;
    result.group = Some(group);
    Ok(result)
}

/// Heap's algorithm over all permutations of `0..n`.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut a: Vec<u32> = (0..n as u32).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The group generated by the `k`-closures of the Sylow subgroups of a nilpotent `G`.
pub fn k_closure_nilpotent(g: &PermGroup, k: usize) -> Result<ClosureResult> {
    k_closure_nilpotent_with(g, k, &SearchLimits::default())
}

pub fn k_closure_nilpotent_with(g: &PermGroup, k: usize, limits: &SearchLimits) -> Result<ClosureResult> {
    let start = Instant::now();
    if k < 2 {
        return Err(Error::InvalidInput("the Sylow-factored closure needs k >= 2".into()));
    }
    if !is_nilpotent(g) {
        return Err(Error::NotNilpotent);
    }
    let n = g.degree();
    let mut gens: Vec<Perm> = Vec::new();
    let mut stats = ClosureStats::default();
    for (_, p) in sylow_subgroups(g)? {
        let part = k_closure_with(&p, k, limits)?;
        stats.nodes += part.stats.nodes;
        stats.searches += part.stats.searches;
        for x in part.generators {
            if !gens.contains(&x) {
                gens.push(x);
            }
        }
    }
    let chain = StabChain::schreier_sims(n, &gens);
    let extra: Vec<Perm> = gens.into_iter().filter(|x| !g.contains(x)).collect();
    finish(g, k, ClosureMethod::Sylow, extra, chain, stats, start, limits)
}

/// Closures for `k = 1..=k_max`, checked to descend: `G <= G^(k_max) <= .. <= G^(1)`.
pub fn closure_chain(g: &PermGroup, k_max: usize, limits: &SearchLimits) -> Result<Vec<ClosureResult>> {
    let mut out: Vec<ClosureResult> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let c = k_closure_with(g, k, limits)?;
        if g.generators().iter().any(|x| !c.contains(x)) {
            return Err(Error::Internal(format!("input group not inside its {k}-closure")));
        }
        if let Some(prev) = out.last() {
            if !c.is_subgroup_of(prev) {
                return Err(Error::Internal(format!("{k}-closure not inside the {}-closure", k - 1)));
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// Dispatches on the method name used by the CLI.
pub fn k_closure_by(g: &PermGroup, k: usize, method: ClosureMethod, limits: &SearchLimits) -> Result<ClosureResult> {
    match method {
        ClosureMethod::Backtrack => k_closure_with(g, k, limits),
        ClosureMethod::Bruteforce => k_closure_bruteforce(g, k),
        ClosureMethod::Sylow => k_closure_nilpotent_with(g, k, limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;
    use crate::coloring::preserves_coloring;

    fn fact(n: usize) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    #[test]
    fn symmetric_groups_are_closed() {
        for n in 2..=5 {
            let g = construct(&format!("sym:{n}")).unwrap();
            for k in 1..=3 {
                let c = k_closure(&g, k).unwrap();
                assert_eq!(c.order, fact(n));
                assert!(!c.strict);
            }
        }
    }

    #[test]
    fn cyclic_four_is_two_closed() {
        let c = k_closure(&construct("cyclic:4").unwrap(), 2).unwrap();
        assert_eq!(c.order, BigUint::from(4u32));
        assert!(!c.strict);
    }

    #[test]
    fn trivial_group_arity_one() {
        let c = k_closure(&PermGroup::trivial(5), 1).unwrap();
        assert_eq!(c.order, BigUint::from(1u32));
        assert!(!c.strict);
    }

    #[test]
    fn z2_on_two_points_arity_one() {
        let g = construct("cyclic:2").unwrap();
        let c = k_closure_bruteforce(&g, 1).unwrap();
        assert_eq!(c.order, BigUint::from(2u32));
    }

    #[test]
    fn arity_one_is_product_of_symmetric_groups_on_orbits() {
        for name in ["abelian:3,5", "abelian:2,2,3", "cyclic:9", "heisenberg:3"] {
            let g = construct(name).unwrap();
            let c = k_closure(&g, 1).unwrap();
            let expected: BigUint = g.orbits().iter().map(|o| fact(o.len())).product();
            assert_eq!(c.order, expected, "{name}");
        }
    }

    #[test]
    fn backtrack_matches_bruteforce_small() {
        for name in ["cyclic:3", "cyclic:4", "abelian:3,3", "abelian:2,2", "abelian:2,4", "q8", "sym:3", "cyclic:6"] {
            let g = construct(name).unwrap();
            for k in 1..=3 {
                let fast = k_closure(&g, k).unwrap();
                let slow = k_closure_bruteforce(&g, k).unwrap();
                assert_eq!(fast.group.as_ref().unwrap(), slow.group.as_ref().unwrap(), "{name} k={k}");
                assert!(fast.same_group(&slow));
            }
        }
    }

    #[test]
    fn closure_preserves_every_orbit() {
        let g = construct("abelian:2,4").unwrap();
        for k in 1..=3 {
            let c = k_closure(&g, k).unwrap();
            let coloring = orbit_coloring(&g, k, DEFAULT_TUPLE_CAP).unwrap();
            let closed = c.group.as_ref().unwrap();
            for x in closed.elements() {
                assert!(preserves_coloring(x, &coloring).unwrap());
            }
            assert!(orbit_coloring(closed, k, DEFAULT_TUPLE_CAP).unwrap().same_partition(&coloring));
        }
    }

    #[test]
    fn idempotent() {
        let g = construct("abelian:2,2,2").unwrap();
        let c = k_closure(&g, 2).unwrap();
        let again = k_closure(c.group.as_ref().unwrap(), 2).unwrap();
        assert_eq!(again.order, c.order);
        assert!(!again.strict);
    }

    #[test]
    fn sylow_factoring_on_z15() {
        let g = construct("abelian:3,5").unwrap();
        let direct = k_closure(&g, 2).unwrap();
        let factored = k_closure_nilpotent(&g, 2).unwrap();
        assert!(direct.same_group(&factored));
        assert_eq!(factored.method, ClosureMethod::Sylow);
        assert!(k_closure_nilpotent(&g, 1).is_err());
        assert_eq!(k_closure_nilpotent(&construct("sym:3").unwrap(), 2).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn chain_descends() {
        let g = construct("cyclic:6").unwrap();
        let chain = closure_chain(&g, 3, &SearchLimits::default()).unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0].order, fact(6));
        assert_eq!(chain[1].order, BigUint::from(6u32));
    }

    #[test]
    fn degree_bound_enforced() {
        let g = construct("cyclic:40").unwrap();
        assert!(matches!(k_closure(&g, 2), Err(Error::SearchBoundExceeded(_))));
        assert!(k_closure_with(&g, 2, &SearchLimits::default().with_max_degree(40)).is_ok());
        assert!(matches!(k_closure_bruteforce(&construct("cyclic:9").unwrap(), 1), Err(Error::SearchBoundExceeded(_))));
    }

    #[test]
    fn heap_enumerates_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }
}
