//! Orbit colorings of `Omega^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{KTuple, Perm};

pub const DEFAULT_TUPLE_CAP: usize = 10_000_000;

/// Big-endian mixed-radix addressing of `Omega^k`: the first coordinate is most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleIndexer {
    degree: usize,
    arity: usize,
    size: usize,
}

impl TupleIndexer {
    pub fn new(degree: usize, arity: usize, cap: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidInput("arity must be at least 1".into()));
        }
        let size = (0..arity)
            .try_fold(1usize, |acc, _| acc.checked_mul(degree))
            .filter(|&s| s <= cap)
            .ok_or(Error::TupleCapExceeded { degree, arity, cap })?;
        Ok(TupleIndexer { degree, arity, size })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, points: &[usize]) -> usize {
        debug_assert_eq!(points.len(), self.arity);
        points.iter().fold(0, |acc, &p| acc * self.degree + p)
    }

    pub fn tuple(&self, mut index: usize) -> KTuple {
        let mut pts = vec![0; self.arity];
        for slot in pts.iter_mut().rev() {
            *slot = index % self.degree;
            index /= self.degree;
        }
        KTuple(pts)
    }

    /// Index of the image of tuple `index` under `g`.
    #[inline]
    pub fn image_index(&self, mut index: usize, g: &Perm) -> usize {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.arity {
            let p = index % self.degree;
            index /= self.degree;
            out += g.apply(p) * scale;
            scale *= self.degree;
        }
        out
    }
}

/// The partition of `Omega^k` into `G`-orbits, one color per tuple index.
///
/// Colors are numbered by first occurrence in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitColoring {
    indexer: TupleIndexer,
    colors: Vec<u32>,
    num_colors: usize,
}

impl OrbitColoring {
    pub fn degree(&self) -> usize {
        self.indexer.degree
    }

    pub fn arity(&self) -> usize {
        self.indexer.arity
    }

    pub fn indexer(&self) -> &TupleIndexer {
        &self.indexer
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn color(&self, index: usize) -> u32 {
        self.colors[index]
    }

    pub fn color_of(&self, t: &KTuple) -> Result<u32> {
        if t.arity() != self.arity() {
            return Err(Error::InvalidInput(format!("tuple arity {} vs coloring arity {}", t.arity(), self.arity())));
        }
        t.check_range(self.degree())?;
        Ok(self.colors[self.indexer.index(t.points())])
    }

    /// Size of each color class, indexed by color.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// First tuple whose color changes under `x`, if any.
    pub fn find_violation(&self, x: &Perm) -> Result<Option<KTuple>> {
        if x.degree() != self.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: x.degree() });
        }
        Ok((0..self.colors.len())
            .find(|&i| self.colors[self.indexer.image_index(i, x)] != self.colors[i])
            .map(|i| self.indexer.tuple(i)))
    }

    /// Whether `x` maps every tuple into its own orbit.
    pub fn preserves(&self, x: &Perm) -> Result<bool> {
        Ok(self.find_violation(x)?.is_none())
    }

    /// Same partition into classes, ignoring color names.
    pub fn same_partition(&self, other: &OrbitColoring) -> bool {
        // canonical numbering makes equal partitions have equal color vectors
        self.indexer == other.indexer && self.colors == other.colors
    }
}

/// Orbit coloring of the group generated by `gens` on `degree` points.
pub fn orbit_coloring_of_generators(degree: usize, gens: &[Perm], arity: usize, tuple_cap: usize) -> Result<OrbitColoring> {
    let indexer = TupleIndexer::new(degree, arity, tuple_cap)?;
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
        }
    }
    let mut colors = vec![u32::MAX; indexer.size()];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..indexer.size() {
        if colors[start] != u32::MAX {
            continue;
        }
        colors[start] = next;
        stack.push(start);
        while let Some(t) = stack.pop() {
            for g in gens {
                let u = indexer.image_index(t, g);
                if colors[u] == u32::MAX {
                    colors[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    Ok(OrbitColoring { indexer, colors, num_colors: next as usize })
}

pub fn orbit_coloring(g: &PermGroup, arity: usize, tuple_cap: usize) -> Result<OrbitColoring> {
    orbit_coloring_of_generators(g.degree(), g.generators(), arity, tuple_cap)
}

/// Membership test for the `k`-closure: `x` preserves every orbit of the coloring.
pub fn preserves_coloring(x: &Perm, coloring: &OrbitColoring) -> Result<bool> {
    coloring.preserves(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;
    use crate::perm::parse_cycles;

    #[test]
    fn indexer_round_trip() {
        let ix = TupleIndexer::new(5, 3, 1000).unwrap();
        assert_eq!(ix.size(), 125);
        for i in 0..125 {
            assert_eq!(ix.index(ix.tuple(i).points()), i);
        }
        assert_eq!(ix.index(&[1, 0, 0]), 25);
        assert!(matches!(TupleIndexer::new(10, 4, 9999), Err(Error::TupleCapExceeded { degree: 10, arity: 4, cap: 9999 })));
        assert!(TupleIndexer::new(3, 0, 10).is_err());
    }

    #[test]
    fn trivial_group_has_singleton_orbits() {
        let g = PermGroup::trivial(4);
        for k in 1..=3 {
            let c = orbit_coloring(&g, k, DEFAULT_TUPLE_CAP).unwrap();
            assert_eq!(c.num_colors(), 4usize.pow(k as u32));
        }
    }

    #[test]
    fn sym3_pairs() {
        let c = orbit_coloring(&construct("sym:3").unwrap(), 2, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(c.num_colors(), 2);
        assert_eq!(c.orbit_sizes(), vec![3, 6]);
    }

    #[test]
    fn z3_pairs() {
        let c = orbit_coloring(&construct("cyclic:3").unwrap(), 2, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(c.num_colors(), 3);
        assert_eq!(c.orbit_sizes(), vec![3, 3, 3]);
        for i in 0..3 {
            for d in 0..3 {
                let t = KTuple(vec![i, (i + d) % 3]);
                assert_eq!(c.color_of(&t).unwrap(), c.color_of(&KTuple(vec![0, d])).unwrap());
            }
        }
    }

    #[test]
    fn membership_examples() {
        let g = construct("cyclic:3").unwrap();
        let c = orbit_coloring(&g, 2, DEFAULT_TUPLE_CAP).unwrap();
        for x in g.elements() {
            assert!(preserves_coloring(x, &c).unwrap());
        }
        let swap = parse_cycles("(1 2)", 3).unwrap();
        assert!(!preserves_coloring(&swap, &c).unwrap());
        let bad = c.find_violation(&swap).unwrap().unwrap();
        // the diagonal is preserved, so the first violation is off-diagonal
        assert_ne!(bad.points()[0], bad.points()[1]);
        assert!(preserves_coloring(&Perm::identity(4), &c).is_err());
    }

    #[test]
    fn orbit_sizes_sum() {
        let g = construct("heisenberg:3").unwrap();
        let c = orbit_coloring(&g, 3, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(c.orbit_sizes().iter().sum::<usize>(), 729);
        // every orbit size divides |G|
        assert!(c.orbit_sizes().iter().all(|s| 27 % s == 0));
    }
}
