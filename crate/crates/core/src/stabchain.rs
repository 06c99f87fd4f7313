//! Stabilizer chains: exact order and membership for groups too large to enumerate.

use num_bigint::BigUint;

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// generators of the pointwise stabilizer of the earlier base points
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[p]` maps `base` to `p`
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base: usize, gens: Vec<Perm>) -> Self {
        let mut level = Level { base, gens, orbit: Vec::new(), transversal: vec![None; degree] };
        level.rebuild();
        level
    }

    fn rebuild(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal[self.base] = Some(Perm::identity(degree));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let u = self.transversal[x].as_ref().expect("orbit point").then(s);
                    self.transversal[y] = Some(u);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

/// A base with strong generators, stored level by level.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn trivial(degree: usize) -> Self {
        StabChain { degree, levels: Vec::new() }
    }

    /// Builds the chain from a set already known to be a strong generating set
    /// relative to `base` (levels with a trivial basic orbit are dropped).
    pub fn from_strong_generators(degree: usize, base: &[usize], gens: &[Perm]) -> Self {
        let mut levels = Vec::new();
        for (i, &b) in base.iter().enumerate() {
            let level_gens: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                .cloned()
                .collect();
            let level = Level::new(degree, b, level_gens);
            if level.orbit.len() > 1 {
                levels.push(level);
            }
        }
        StabChain { degree, levels }
    }

    /// Deterministic Schreier-Sims on an arbitrary generating set.
    pub fn schreier_sims(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain::trivial(degree);
        for g in gens {
            if let Some((residue, depth)) = chain.sift_from(0, g) {
                chain.insert(depth, residue);
            }
        }
        chain
    }

    /// Adds `g` (which fixes the first `depth` base points and is not in the
    /// group at that depth) and restores the strong generating property.
    fn insert(&mut self, depth: usize, g: Perm) {
        if depth == self.levels.len() {
            let b = g.first_moved().expect("non-identity residue");
            self.levels.push(Level::new(self.degree, b, Vec::new()));
        }
        for l in 0..=depth {
            self.levels[l].gens.push(g.clone());
        }
        for l in (0..=depth).rev() {
            self.levels[l].rebuild();
        }
        // Schreier generators at the new depth, then upwards
        let mut l = depth;
        loop {
            if let Some((residue, d)) = self.first_failing_schreier_generator(l) {
                // the nested insert re-verifies every level up to d
                self.insert(d, residue);
                return;
            }
            if l == 0 {
                break;
            }
            l -= 1;
        }
    }

    fn first_failing_schreier_generator(&self, l: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[l];
        for &b in &level.orbit {
            let ub = level.transversal[b].as_ref().expect("orbit point");
            for s in &level.gens {
                let target = s.apply(b);
                let ut = level.transversal[target].as_ref().expect("orbit closed");
                let h = ub.then(s).then(&ut.inverse());
                if let Some(found) = self.sift_from(l + 1, &h) {
                    return Some(found);
                }
            }
        }
        None
    }

    /// Sifts `g` from level `start`; returns the non-trivial residue and the
    /// level where it stopped, or `None` if `g` is in the group.
    fn sift_from(&self, start: usize, g: &Perm) -> Option<(Perm, usize)> {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let img = h.apply(level.base);
            match &level.transversal[img] {
                Some(u) => h = h.then(&u.inverse()),
                None => return Some((h, l)),
            }
        }
        (!h.is_identity()).then_some((h, self.levels.len()))
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(0, g).is_none()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Union of the generators of all levels, deduplicated.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;

    #[test]
    fn orders_match_enumeration() {
        for name in ["sym:5", "heisenberg:3", "modular:3", "abelian:3,9", "q8", "cyclic:12", "sym:1"] {
            let g = construct(name).unwrap();
            let chain = StabChain::schreier_sims(g.degree(), g.generators());
            assert_eq!(chain.order(), BigUint::from(g.order()), "{name}");
            for e in g.elements() {
                assert!(chain.contains(e));
            }
        }
    }

    #[test]
    fn non_members_are_rejected() {
        let g = construct("heisenberg:3").unwrap();
        let chain = StabChain::schreier_sims(9, g.generators());
        let swap = Perm::cycle(9, &[0, 1]).unwrap();
        assert!(!chain.contains(&swap));
        assert!(!chain.contains(&Perm::identity(8)));
    }

    #[test]
    fn large_symmetric_order() {
        let n = 30;
        let t = Perm::cycle(n, &[0, 1]).unwrap();
        let c = Perm::cycle(n, &(0..n).collect::<Vec<_>>()).unwrap();
        let chain = StabChain::schreier_sims(n, &[t, c]);
        let fact: BigUint = (1..=n).map(BigUint::from).product();
        assert_eq!(chain.order(), fact);
    }

    #[test]
    fn strong_generators_rebuild_same_chain() {
        let g = construct("sym:5").unwrap();
        let chain = StabChain::schreier_sims(5, g.generators());
        let rebuilt = StabChain::from_strong_generators(5, &chain.base(), &chain.strong_generators());
        assert_eq!(rebuilt.order(), chain.order());
    }
}
