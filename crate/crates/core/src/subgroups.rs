//! Subgroup enumeration for small groups via a Cayley table.
//!
//! Subgroups are element-index bitsets over the parent's enumeration. The
//! lattice is the join closure of the cyclic subgroups.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::PermGroup;

pub const DEFAULT_SUBGROUP_GROUP_CAP: usize = 512;
pub const DEFAULT_SUBGROUP_COUNT_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet { words: vec![0; n.div_ceil(64)] }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let was = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    pub fn intersect(&self, other: &ElementSet) -> ElementSet {
        ElementSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

/// Multiplication table of an enumerated group.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    pub fn new(g: &PermGroup) -> Self {
        let n = g.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in g.elements() {
            for b in g.elements() {
                mul.push(g.index_of(&a.then(b)).expect("closed") as u32);
            }
        }
        let inv = g.elements().iter().map(|a| g.index_of(&a.inverse()).expect("closed") as u32).collect();
        CayleyTable { n, mul, inv }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Closure of `seed` under multiplication (finite, so also under inverses).
    pub fn close(&self, seed: &ElementSet, extra: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut set = seed.clone();
        set.insert(0);
        let gens: Vec<usize> = seed.iter().chain(extra).collect();
        for &g in &gens {
            set.insert(g);
        }
        let mut frontier: Vec<usize> = set.iter().collect();
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                let c = self.mul(a, g);
                if set.insert(c) {
                    frontier.push(c);
                }
            }
        }
        set
    }

    pub fn cyclic(&self, a: usize) -> ElementSet {
        let mut set = ElementSet::empty(self.n);
        set.insert(0);
        let mut x = a;
        while set.insert(x) {
            x = self.mul(x, a);
        }
        set
    }

    pub fn conjugate_set(&self, s: &ElementSet, g: usize) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for a in s.iter() {
            out.insert(self.conj(a, g));
        }
        out
    }

    /// Intersection of all conjugates.
    pub fn core(&self, s: &ElementSet) -> ElementSet {
        let mut acc = s.clone();
        for g in 0..self.n {
            acc = acc.intersect(&self.conjugate_set(s, g));
        }
        acc
    }
}

/// All subgroups of a small group, ordered by size then by element indices.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    table: CayleyTable,
    subgroups: Vec<ElementSet>,
}

impl SubgroupLattice {
    pub fn new(g: &PermGroup, group_cap: usize, count_cap: usize) -> Result<Self> {
        if g.order() > group_cap {
            return Err(Error::InvalidInput(format!(
                "subgroup enumeration limited to groups of order <= {group_cap}, got {}",
                g.order()
            )));
        }
        let table = CayleyTable::new(g);
        let n = g.order();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut cyclics: Vec<(ElementSet, usize)> = Vec::new();
        for a in 0..n {
            let c = table.cyclic(a);
            if seen.insert(c.clone()) {
                cyclics.push((c, a));
            }
        }
        let mut all: Vec<ElementSet> = cyclics.iter().map(|(c, _)| c.clone()).collect();
        let mut i = 0;
        while i < all.len() {
            let current = all[i].clone();
            for (c, a) in &cyclics {
                if c.is_subset(&current) {
                    continue;
                }
                let joined = table.close(&current, [*a]);
                if seen.insert(joined.clone()) {
                    if all.len() >= count_cap {
                        return Err(Error::SubgroupCapExceeded { cap: count_cap });
                    }
                    all.push(joined);
                }
            }
            i += 1;
        }
        all.sort_by(|a, b| {
            a.len().cmp(&b.len()).then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
        });
        Ok(SubgroupLattice { table, subgroups: all })
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.subgroups
    }

    pub fn to_group(&self, parent: &PermGroup, idx: usize) -> PermGroup {
        set_to_group(parent, &self.subgroups[idx])
    }

    /// One subgroup per conjugacy class (the first in lattice order), as lattice indices.
    pub fn class_representatives(&self) -> Vec<usize> {
        let position: std::collections::HashMap<&ElementSet, usize> =
            self.subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut assigned = vec![false; self.subgroups.len()];
        let mut reps = Vec::new();
        for i in 0..self.subgroups.len() {
            if assigned[i] {
                continue;
            }
            reps.push(i);
            for g in 0..self.table.order() {
                let c = self.table.conjugate_set(&self.subgroups[i], g);
                assigned[position[&c]] = true;
            }
        }
        reps
    }
}

pub fn set_to_group(parent: &PermGroup, set: &ElementSet) -> PermGroup {
    let subset: Vec<_> = set.iter().map(|i| parent.elements()[i].clone()).collect();
    PermGroup::from_closed_subset(parent.degree(), &subset).expect("lattice entries are subgroups")
}

/// All subgroups of `g` as groups, in lattice order.
pub fn subgroups(g: &PermGroup, count_cap: usize) -> Result<Vec<PermGroup>> {
    let lattice = SubgroupLattice::new(g, DEFAULT_SUBGROUP_GROUP_CAP, count_cap)?;
    Ok((0..lattice.len()).map(|i| lattice.to_group(g, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, DEFAULT_ORDER_CAP};
    use crate::perm::Perm;

    fn cyclic(n: usize) -> PermGroup {
        PermGroup::generate(n, &[Perm::cycle(n, &(0..n).collect::<Vec<_>>()).unwrap()], DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn prime_cyclic_has_two_subgroups() {
        for p in [2, 3, 5, 7] {
            assert_eq!(subgroups(&cyclic(p), 100).unwrap().len(), 2);
        }
    }

    #[test]
    fn elementary_abelian_of_order_nine() {
        let g = direct_product(&cyclic(3), &cyclic(3), DEFAULT_ORDER_CAP).unwrap();
        let subs = subgroups(&g, 100).unwrap();
        assert_eq!(subs.len(), 1 + (9 - 1) / (3 - 1) + 1);
        assert!(subs[0].is_trivial());
        assert_eq!(subs.last().unwrap(), &g);
    }

    #[test]
    fn s3_subgroups_and_classes() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let lattice = SubgroupLattice::new(&s3, 512, 100).unwrap();
        assert_eq!(lattice.len(), 6);
        // 1, three conjugate reflections, A3, S3
        assert_eq!(lattice.class_representatives().len(), 4);
    }

    #[test]
    fn lagrange_holds() {
        let g = direct_product(&cyclic(4), &cyclic(6), DEFAULT_ORDER_CAP).unwrap();
        for h in subgroups(&g, 1000).unwrap() {
            assert_eq!(g.order() % h.order(), 0);
            assert!(h.is_subgroup_of(&g));
        }
    }

    #[test]
    fn caps_are_enforced() {
        let g = direct_product(&cyclic(3), &cyclic(3), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(subgroups(&g, 3).unwrap_err(), Error::SubgroupCapExceeded { cap: 3 });
        let big = cyclic(600);
        assert!(SubgroupLattice::new(&big, 512, 100).is_err());
    }

    #[test]
    fn table_core_matches_group_core() {
        let s3 = PermGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let lattice = SubgroupLattice::new(&s3, 512, 100).unwrap();
        for (i, set) in lattice.sets().iter().enumerate() {
            let h = lattice.to_group(&s3, i);
            let core = set_to_group(&s3, &lattice.table().core(set));
            assert_eq!(core, s3.core(&h).unwrap());
        }
    }
}
