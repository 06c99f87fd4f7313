//! Finite permutation groups held as fully enumerated element sets.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{KTuple, Perm};

/// Default ceiling on the number of elements any enumeration may produce.
pub const DEFAULT_ORDER_CAP: usize = 200_000;

/// A permutation group: generators together with every element.
///
/// Elements are listed breadth-first from the identity, trying generators in
/// the order given, so the listing is a deterministic function of the
/// generator list.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for PermGroup {
    /// Equal as sets of permutations on the same degree.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.elements.iter().all(|e| other.contains(e))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Enumerates `<gens>` on `degree` points.
    pub fn generate(degree: usize, gens: &[Perm], order_cap: usize) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        if order_cap == 0 {
            return Err(Error::InvalidInput("order cap must be at least 1".into()));
        }
        let generators: Vec<Perm> = gens.to_vec();
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let next = elements[i].then(g);
                if !index.contains_key(&next) {
                    if elements.len() >= order_cap {
                        return Err(Error::OrderCapExceeded { cap: order_cap });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(PermGroup { degree, generators, elements, index })
    }

    /// Convenience for non-empty generator lists.
    pub fn from_generators(gens: &[Perm]) -> Result<Self> {
        let degree = gens
            .first()
            .map(Perm::degree)
            .ok_or_else(|| Error::InvalidInput("empty generator list; degree unknown".into()))?;
        Self::generate(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, &[], 1).expect("trivial group always fits")
    }

    /// Symmetric group on `degree` points, generated by a transposition and an n-cycle.
    pub fn symmetric(degree: usize, order_cap: usize) -> Result<Self> {
        if degree < 2 {
            return Ok(Self::trivial(degree));
        }
        let t = Perm::cycle(degree, &[0, 1])?;
        let c = Perm::cycle(degree, &(0..degree).collect::<Vec<_>>())?;
        Self::generate(degree, &[t, c], order_cap)
    }

    /// The subgroup formed by a subset already known to be closed under composition.
    ///
    /// A small generating set is picked greedily in the order of `subset`, and
    /// the result is re-enumerated from it.
    pub fn from_closed_subset(degree: usize, subset: &[Perm]) -> Result<Self> {
        let members: HashSet<&Perm> = subset.iter().collect();
        let mut gens: Vec<Perm> = Vec::new();
        let mut current = Self::trivial(degree);
        for e in subset {
            if !current.contains(e) {
                gens.push(e.clone());
                current = Self::generate(degree, &gens, subset.len().max(1))
                    .map_err(|_| Error::Internal("subset is not closed under composition".into()))?;
            }
        }
        if current.order() != members.len() || current.elements.iter().any(|e| !members.contains(e)) {
            return Err(Error::Internal("subset is not closed under composition".into()));
        }
        Ok(current)
    }

    fn filter_subgroup(&self, keep: impl Fn(&Perm) -> bool) -> PermGroup {
        let subset: Vec<Perm> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        Self::from_closed_subset(self.degree, &subset).expect("filter predicate defines a subgroup")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Subgroup test on element sets (same degree, every element of `self` in `other`).
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.elements.iter().fold(1u64, |acc, e| acc.lcm(&e.order()))
    }

    /// Point orbits, each sorted, listed by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_of(0).len() == self.degree
    }

    /// Elements fixing every coordinate of `t`.
    pub fn point_stabilizer(&self, t: &KTuple) -> Result<PermGroup> {
        t.check_range(self.degree)?;
        Ok(self.filter_subgroup(|g| t.points().iter().all(|&p| g.apply(p) == p)))
    }

    /// Elements mapping each listed block onto itself.
    pub fn setwise_stabilizer_family(&self, blocks: &[Vec<usize>]) -> Result<PermGroup> {
        let mut masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut mask = vec![false; self.degree];
            for &p in block {
                if p >= self.degree {
                    return Err(Error::PointOutOfRange { point: p, degree: self.degree });
                }
                mask[p] = true;
            }
            masks.push((block.clone(), mask));
        }
        Ok(self.filter_subgroup(|g| {
            masks.iter().all(|(block, mask)| block.iter().all(|&p| mask[g.apply(p)]))
        }))
    }

    /// `{g in G : g s = s g for all s in S}`; `S` must lie inside `G`.
    pub fn centralizer(&self, subset: &[Perm]) -> Result<PermGroup> {
        if let Some(bad) = subset.iter().find(|s| !self.contains(s)) {
            return Err(Error::NotASubgroup(format!("{bad} is not an element of the group")));
        }
        Ok(self.filter_subgroup(|g| subset.iter().all(|s| g.commutes_with(s))))
    }

    pub fn center(&self) -> PermGroup {
        self.filter_subgroup(|g| self.generators.iter().all(|s| g.commutes_with(s)))
    }

    fn require_subgroup(&self, h: &PermGroup) -> Result<()> {
        if h.degree != self.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: h.degree });
        }
        if let Some(bad) = h.generators.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotASubgroup(format!("generator {bad} not in the parent group")));
        }
        Ok(())
    }

    pub fn is_normal(&self, h: &PermGroup) -> Result<bool> {
        self.require_subgroup(h)?;
        Ok(self
            .generators
            .iter()
            .all(|g| h.generators.iter().all(|x| h.contains(&x.conjugate_by(g)))))
    }

    /// Largest normal subgroup of `self` inside `h`: the intersection of all conjugates of `h`.
    pub fn core(&self, h: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(h)?;
        let inverses: Vec<Perm> = self.elements.iter().map(Perm::inverse).collect();
        let kept: Vec<Perm> = h
            .elements
            .iter()
            .filter(|x| {
                self.elements
                    .iter()
                    .zip(&inverses)
                    .all(|(g, g_inv)| h.contains(&g.then(x).then(g_inv)))
            })
            .cloned()
            .collect();
        Self::from_closed_subset(self.degree, &kept)
    }

    pub fn coset_space(&self, h: &PermGroup) -> Result<CosetSpace> {
        CosetSpace::new(self, h)
    }

    /// Right-multiplication action on the right cosets of `h`.
    ///
    /// Returns the image group together with the images of `self.generators()`.
    pub fn coset_action(&self, h: &PermGroup) -> Result<(PermGroup, Vec<Perm>)> {
        let cosets = self.coset_space(h)?;
        let images: Vec<Perm> = self.generators.iter().map(|g| cosets.action_of(self, g)).collect();
        let image = PermGroup::generate(cosets.len(), &images, self.order().max(1))?;
        Ok((image, images))
    }

    /// Action on the blocks of a `G`-invariant partition, and its kernel.
    pub fn induced_block_action(&self, blocks: &[Vec<usize>]) -> Result<(PermGroup, PermGroup)> {
        let mut block_of = vec![usize::MAX; self.degree];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidInput(format!("block {b} is empty")));
            }
            for &p in block {
                if p >= self.degree {
                    return Err(Error::PointOutOfRange { point: p, degree: self.degree });
                }
                if block_of[p] != usize::MAX {
                    return Err(Error::InvalidInput(format!("point {p} lies in two blocks")));
                }
                block_of[p] = b;
            }
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidInput(format!("point {p} is in no block")));
        }
        let image_of = |g: &Perm| -> std::result::Result<Perm, usize> {
            let mut images = Vec::with_capacity(blocks.len());
            for (b, block) in blocks.iter().enumerate() {
                let target = block_of[g.apply(block[0])];
                if block.iter().any(|&p| block_of[g.apply(p)] != target)
                    || blocks[target].len() != block.len()
                {
                    return Err(b);
                }
                images.push(target as u32);
            }
            Ok(Perm::from_images_unchecked(images))
        };
        let mut gen_images = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            gen_images.push(image_of(g).map_err(|block| Error::NotInvariant { generator: i, block })?);
        }
        let action = PermGroup::generate(blocks.len(), &gen_images, self.order().max(1))?;
        let kernel = self.filter_subgroup(|g| blocks.iter().all(|b| b.iter().all(|&p| block_of[g.apply(p)] == block_of[b[0]])));
        Ok((action, kernel))
    }

    /// The group induced on an invariant point set, relabelled `0..|delta|` in increasing order.
    pub fn restrict(&self, delta: &[usize]) -> Result<PermGroup> {
        let mut sorted = delta.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut pos = vec![usize::MAX; self.degree];
        for (i, &p) in sorted.iter().enumerate() {
            if p >= self.degree {
                return Err(Error::PointOutOfRange { point: p, degree: self.degree });
            }
            pos[p] = i;
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut images = Vec::with_capacity(sorted.len());
            for &p in &sorted {
                let q = pos[g.apply(p)];
                if q == usize::MAX {
                    return Err(Error::NotInvariant { generator: gi, block: 0 });
                }
                images.push(q as u32);
            }
            gens.push(Perm::from_images_unchecked(images));
        }
        PermGroup::generate(sorted.len(), &gens, self.order().max(1))
    }

    /// Restriction of a single element to an invariant set (same relabelling as [`restrict`]).
    pub fn restrict_element(g: &Perm, delta: &[usize]) -> Result<Perm> {
        let mut sorted = delta.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut pos = vec![usize::MAX; g.degree()];
        for (i, &p) in sorted.iter().enumerate() {
            pos[p] = i;
        }
        let images: Option<Vec<u32>> = sorted.iter().map(|&p| {
            let q = pos[g.apply(p)];
            (q != usize::MAX).then_some(q as u32)
        }).collect();
        images
            .map(Perm::from_images_unchecked)
            .ok_or(Error::NotInvariant { generator: 0, block: 0 })
    }

    /// Subgroup of elements whose order is a product of primes in `primes`.
    pub(crate) fn elements_with_order_in(&self, primes: &[u64]) -> Vec<Perm> {
        self.elements
            .iter()
            .filter(|e| {
                let mut o = e.order();
                for &p in primes {
                    while o % p == 0 {
                        o /= p;
                    }
                }
                o == 1
            })
            .cloned()
            .collect()
    }
}

/// Direct product acting on the disjoint union of the two point sets.
pub fn direct_product(g1: &PermGroup, g2: &PermGroup, order_cap: usize) -> Result<PermGroup> {
    let n1 = g1.degree();
    let n = n1 + g2.degree();
    let lift = |g: &Perm, shift: usize, width: usize| {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for i in 0..width {
            images[shift + i] = (shift + g.apply(i)) as u32;
        }
        Perm::from_images_unchecked(images)
    };
    let mut gens: Vec<Perm> = g1.generators().iter().map(|g| lift(g, 0, n1)).collect();
    gens.extend(g2.generators().iter().map(|g| lift(g, n1, g2.degree())));
    PermGroup::generate(n, &gens, order_cap)
}

pub fn orbits_of(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Right cosets `K g` of a subgroup, with a transversal whose first entry is the identity.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    transversal: Vec<Perm>,
    /// Coset index of each parent element, indexed like `parent.elements()`.
    coset_of: Vec<usize>,
    subgroup_order: usize,
}

impl CosetSpace {
    pub fn new(parent: &PermGroup, subgroup: &PermGroup) -> Result<Self> {
        parent.require_subgroup(subgroup)?;
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut transversal = Vec::new();
        for (i, e) in parent.elements().iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let c = transversal.len();
            transversal.push(e.clone());
            for h in subgroup.elements() {
                let idx = parent.index_of(&h.then(e)).expect("subgroup inside parent");
                coset_of[idx] = c;
            }
        }
        debug_assert!(transversal[0].is_identity());
        Ok(CosetSpace { transversal, coset_of, subgroup_order: subgroup.order() })
    }

    /// Same cosets, with representatives replaced by `reps` (one per coset, identity first).
    pub fn with_transversal(mut self, parent: &PermGroup, reps: Vec<Perm>) -> Result<Self> {
        if reps.len() != self.transversal.len() {
            return Err(Error::InvalidInput(format!(
                "transversal has {} representatives, expected {}",
                reps.len(),
                self.transversal.len()
            )));
        }
        if !reps[0].is_identity() {
            return Err(Error::InvalidInput("transversal must start with the identity".into()));
        }
        let mut ordered: Vec<Option<Perm>> = vec![None; reps.len()];
        for r in reps {
            let c = self.coset_of_element(parent, &r)?;
            if ordered[c].replace(r).is_some() {
                return Err(Error::InvalidInput("two representatives of the same coset".into()));
            }
        }
        self.transversal = ordered.into_iter().map(|r| r.expect("bijective")).collect();
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.transversal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transversal.is_empty()
    }

    pub fn transversal(&self) -> &[Perm] {
        &self.transversal
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    pub fn coset_of_element(&self, parent: &PermGroup, g: &Perm) -> Result<usize> {
        parent
            .index_of(g)
            .map(|i| self.coset_of[i])
            .ok_or_else(|| Error::NotASubgroup(format!("{g} not in the parent group")))
    }

    /// The permutation of cosets induced by right multiplication by `x`.
    pub fn action_of(&self, parent: &PermGroup, x: &Perm) -> Perm {
        let images = self
            .transversal
            .iter()
            .map(|r| self.coset_of[parent.index_of(&r.then(x)).expect("element of parent")] as u32)
            .collect();
        Perm::from_images_unchecked(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn p(s: &str, n: usize) -> Perm {
        parse_cycles(s, n).unwrap()
    }

    fn z15() -> PermGroup {
        PermGroup::generate(8, &[p("(1 2 3)", 8), p("(4 5 6 7 8)", 8)], DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn generate_examples() {
        let c3 = PermGroup::generate(3, &[p("(1 2 3)", 3)], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c3.order(), 3);
        let s3 = PermGroup::generate(3, &[p("(1 2)", 3), p("(1 2 3)", 3)], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(s3.order(), 6);
        let shift = Perm::from_fn(9, |x| (x + 1) % 9).unwrap();
        let mult = Perm::from_fn(9, |x| (4 * x) % 9).unwrap();
        let g = PermGroup::generate(9, &[shift, mult], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 27);
        // orbit-stabilizer cross-check: transitive on 9 points, stabilizer of 0 has order 3
        assert!(g.is_transitive());
        assert_eq!(g.point_stabilizer(&KTuple(vec![0])).unwrap().order(), 3);
    }

    #[test]
    fn generate_enforces_cap() {
        let err = PermGroup::symmetric(6, 100).unwrap_err();
        assert_eq!(err, Error::OrderCapExceeded { cap: 100 });
    }

    #[test]
    fn enumeration_is_idempotent() {
        let g = z15();
        let again = PermGroup::generate(8, g.elements(), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(again, g);
        assert_eq!(g.elements()[0], Perm::identity(8));
    }

    #[test]
    fn stabilizers() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(s3.point_stabilizer(&KTuple(vec![0])).unwrap().order(), 2);
        assert!(s3.point_stabilizer(&KTuple(vec![0, 1, 2])).unwrap().is_trivial());
        let singletons: Vec<Vec<usize>> = (0..3).map(|i| vec![i]).collect();
        assert!(s3.setwise_stabilizer_family(&singletons).unwrap().is_trivial());
        assert_eq!(s3.setwise_stabilizer_family(&[vec![0, 1, 2]]).unwrap(), s3);
        let g = z15();
        assert_eq!(g.setwise_stabilizer_family(&[vec![0, 1, 2]]).unwrap(), g);
        assert_eq!(g.setwise_stabilizer_family(&[vec![0, 1]]).unwrap().order(), 5);
    }

    #[test]
    fn centers() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        assert!(s3.center().is_trivial());
        assert!(!s3.is_abelian());
        let g = z15();
        assert_eq!(g.center(), g);
        assert!(g.is_abelian());
        assert!(g.centralizer(&[p("(1 2)", 8)]).is_err());
    }

    #[test]
    fn cores() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let refl = PermGroup::generate(3, &[p("(1 2)", 3)], 10).unwrap();
        assert!(s3.core(&refl).unwrap().is_trivial());
        let a3 = PermGroup::generate(3, &[p("(1 2 3)", 3)], 10).unwrap();
        assert_eq!(s3.core(&a3).unwrap(), a3);
        assert!(s3.is_normal(&a3).unwrap());
        assert!(!s3.is_normal(&refl).unwrap());
        let g = z15();
        let h = PermGroup::generate(8, &[p("(4 5 6 7 8)", 8)], 10).unwrap();
        assert_eq!(g.core(&h).unwrap(), h);
    }

    #[test]
    fn coset_actions() {
        let g = z15();
        let (reg, _) = g.coset_action(&PermGroup::trivial(8)).unwrap();
        assert_eq!(reg.degree(), 15);
        assert_eq!(reg.order(), 15);
        let (one, _) = g.coset_action(&g).unwrap();
        assert_eq!(one.degree(), 1);
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let refl = PermGroup::generate(3, &[p("(1 2)", 3)], 10).unwrap();
        let (act, imgs) = s3.coset_action(&refl).unwrap();
        assert_eq!(act.degree(), 3);
        assert_eq!(act.order(), 6);
        assert_eq!(imgs.len(), 2);
    }

    #[test]
    fn coset_space_partitions() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let refl = PermGroup::generate(3, &[p("(1 2)", 3)], 10).unwrap();
        let cs = s3.coset_space(&refl).unwrap();
        assert_eq!(cs.len() * cs.subgroup_order(), s3.order());
        assert!(cs.transversal()[0].is_identity());
        for h in refl.elements() {
            for (i, r) in cs.transversal().iter().enumerate() {
                assert_eq!(cs.coset_of_element(&s3, &h.then(r)).unwrap(), i);
            }
        }
    }

    #[test]
    fn block_actions() {
        let g = z15();
        let singletons: Vec<Vec<usize>> = (0..8).map(|i| vec![i]).collect();
        let (_, kernel) = g.induced_block_action(&singletons).unwrap();
        assert!(kernel.is_trivial());
        let (act, kernel) = g.induced_block_action(&g.orbits()).unwrap();
        assert!(act.is_trivial());
        assert_eq!(kernel, g);
        let err = g.induced_block_action(&[vec![0, 1], vec![2], vec![3, 4, 5, 6, 7]]).unwrap_err();
        assert!(matches!(err, Error::NotInvariant { .. }));
    }

    #[test]
    fn products_and_restrictions() {
        let c3 = PermGroup::generate(3, &[p("(1 2 3)", 3)], 10).unwrap();
        let c5 = PermGroup::generate(5, &[p("(1 2 3 4 5)", 5)], 10).unwrap();
        let g = direct_product(&c3, &c5, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 15);
        assert_eq!(g, z15());
        let c33 = direct_product(&c3, &c3, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c33.order(), 9);
        assert_eq!(c33.orbits().len(), 2);
        let with_trivial = direct_product(&c3, &PermGroup::trivial(0), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(with_trivial, c3);

        assert_eq!(g.restrict(&(0..8).collect::<Vec<_>>()).unwrap(), g);
        assert_eq!(g.restrict(&[0, 1, 2]).unwrap(), c3);
        assert!(g.restrict(&[0, 1]).is_err());
    }

    #[test]
    fn orbit_stabilizer_on_s4() {
        let s4 = PermGroup::symmetric(4, DEFAULT_ORDER_CAP).unwrap();
        for a in 0..4 {
            let orbit = s4.orbit_of(a).len();
            let stab = s4.point_stabilizer(&KTuple(vec![a])).unwrap().order();
            assert_eq!(orbit * stab, 24);
        }
    }
}
