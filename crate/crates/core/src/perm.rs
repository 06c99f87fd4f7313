//! Permutations of `{0, .., n-1}` and the coordinate-wise action on tuples.
//!
//! Composition is left to right: `compose(p, q)` applies `p` first, then `q`,
//! so that `a.compose(&b).apply(x) == b.apply(a.apply(x))`. Cycle notation on
//! the text boundary is 1-based.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::PointOutOfRange { point: x, degree: n });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Perm { images })
    }

    pub fn from_usize_images(images: &[usize]) -> Result<Self> {
        Self::from_images(images.iter().map(|&x| x as u32).collect())
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// The cycle `(p0 p1 .. pr)` on `degree` points, 0-based.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for (idx, &p) in points.iter().enumerate() {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotAPermutation(format!("point {p} repeated in cycle")));
            }
            images[p] = points[(idx + 1) % points.len()] as u32;
        }
        Ok(Perm { images })
    }

    /// Builds the permutation `i -> f(i)`; fails if `f` is not a bijection.
    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_images((0..degree).map(|i| f(i) as u32).collect())
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`. Panics on degree mismatch; see [`compose`] for the checked form.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in composition");
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`, the right-action conjugate `self^g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Non-trivial cycles, each starting at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// First point moved by `self`, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    /// Image of a k-tuple under the coordinate-wise action.
    pub fn apply_tuple(&self, t: &KTuple) -> Result<KTuple> {
        apply_tuple(t, self)
    }
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Perm::from_images(v)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), format_cycles(self))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cycles(self))
    }
}

/// `p` then `q`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

/// A point of `Omega^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTuple(pub Vec<usize>);

impl KTuple {
    pub fn new(points: Vec<usize>) -> Self {
        KTuple(points)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn check_range(&self, degree: usize) -> Result<()> {
        match self.0.iter().find(|&&p| p >= degree) {
            Some(&point) => Err(Error::PointOutOfRange { point, degree }),
            None => Ok(()),
        }
    }
}

pub fn apply_tuple(t: &KTuple, g: &Perm) -> Result<KTuple> {
    t.check_range(g.degree())?;
    Ok(KTuple(t.0.iter().map(|&p| g.apply(p)).collect()))
}

/// Parses 1-based cycle notation such as `"(1 2 3)(4,5)"` into a permutation of `degree` points.
///
/// The empty string and `"()"` denote the identity. Points may be separated by
/// commas or whitespace; cycles may be separated by whitespace or commas.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
    let bytes = text.as_bytes();
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut used = vec![false; degree];
    let mut pos = 0;

    let skip_sep = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos].is_ascii_whitespace() || bytes[*pos] == b',') {
            *pos += 1;
        }
    };

    loop {
        skip_sep(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(Error::Parse {
                pos,
                msg: format!("expected '(' but found '{}'", bytes[pos] as char),
            });
        }
        pos += 1;
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            skip_sep(&mut pos);
            if pos >= bytes.len() {
                return Err(Error::Parse {
                    pos,
                    msg: "unterminated cycle".into(),
                });
            }
            match bytes[pos] {
                b')' => {
                    pos += 1;
                    break;
                }
                b'0'..=b'9' => {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let value: usize = text[start..pos].parse().map_err(|_| Error::Parse {
                        pos: start,
                        msg: "integer overflow".into(),
                    })?;
                    if value == 0 || value > degree {
                        return Err(Error::Parse {
                            pos: start,
                            msg: format!("point {value} outside 1..={degree}"),
                        });
                    }
                    let point = value - 1;
                    if std::mem::replace(&mut used[point], true) {
                        return Err(Error::Parse {
                            pos: start,
                            msg: format!("point {value} repeated"),
                        });
                    }
                    cycle.push(point);
                }
                c => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("unexpected character '{}'", c as char),
                    })
                }
            }
        }
        for (i, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(i + 1) % cycle.len()] as u32;
        }
    }
    Ok(Perm { images })
}

/// Canonical 1-based cycle notation: cycles sorted by least point, each
/// starting at its least point, fixed points omitted, identity as `"()"`.
pub fn format_cycles(p: &Perm) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    let mut out = String::new();
    for cyc in cycles {
        out.push('(');
        for (i, x) in cyc.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&(x + 1).to_string());
        }
        out.push(')');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(images: &[usize]) -> Perm {
        Perm::from_usize_images(images).unwrap()
    }

    #[test]
    fn compose_hand_example() {
        let p = perm(&[1, 2, 0]);
        let q = perm(&[1, 0, 2]);
        assert_eq!(compose(&p, &q).unwrap(), perm(&[0, 2, 1]));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let p = perm(&[3, 0, 4, 1, 2]);
        let e = Perm::identity(5);
        assert_eq!(compose(&e, &p).unwrap(), p);
        assert!(compose(&p, &p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = compose(&Perm::identity(3), &Perm::identity(4)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn tuple_action() {
        let swap = perm(&[0, 2, 1]);
        assert_eq!(apply_tuple(&KTuple(vec![1, 2]), &swap).unwrap(), KTuple(vec![2, 1]));
        let t = KTuple(vec![2, 0, 1]);
        assert_eq!(apply_tuple(&t, &Perm::identity(3)).unwrap(), t);
        let g = perm(&[1, 2, 0]);
        assert_eq!(apply_tuple(&KTuple(vec![0, 0, 0]), &g).unwrap(), KTuple(vec![1, 1, 1]));
        assert!(apply_tuple(&KTuple(vec![3]), &g).is_err());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_cycles("(1 2 3)", 3).unwrap(), perm(&[1, 2, 0]));
        let two = parse_cycles("(1 2 3)(4 5 6)", 6).unwrap();
        assert_eq!(two, perm(&[1, 2, 0, 4, 5, 3]));
        let a = Perm::cycle(6, &[0, 1, 2]).unwrap();
        let c = Perm::cycle(6, &[3, 4, 5]).unwrap();
        assert_eq!(two, a.then(&c));
        assert!(parse_cycles("", 4).unwrap().is_identity());
        assert!(parse_cycles("()", 4).unwrap().is_identity());
        assert_eq!(parse_cycles("(1,2), (3, 4)", 4).unwrap(), perm(&[1, 0, 3, 2]));
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!(matches!(parse_cycles("(1 2)(2 3)", 3), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_cycles("(1 5)", 4), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_cycles("(1 2", 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("1 2)", 4), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_cycles("(0 1)", 4), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_cycles("(1 x)", 4), Err(Error::Parse { pos: 3, .. })));
    }

    #[test]
    fn canonical_form() {
        let p = parse_cycles("(5 4)(3 1 2)", 5).unwrap();
        assert_eq!(format_cycles(&p), "(1,2,3)(4,5)");
        assert_eq!(format_cycles(&Perm::identity(3)), "()");
    }

    #[test]
    fn order_and_pow() {
        let p = parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(7), p);
    }

    fn arb_perm(max_degree: usize) -> impl Strategy<Value = Perm> {
        (1..=max_degree).prop_flat_map(|n| {
            Just((0..n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(v).unwrap())
        })
    }

    fn arb_triple(n: usize) -> impl Strategy<Value = (Perm, Perm, Perm)> {
        let one = || {
            Just((0..n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(v).unwrap())
        };
        (one(), one(), one())
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(p in arb_perm(12)) {
            prop_assert_eq!(parse_cycles(&format_cycles(&p), p.degree()).unwrap(), p);
        }

        #[test]
        fn inverse_law(p in arb_perm(12)) {
            prop_assert!(compose(&p, &p.inverse()).unwrap().is_identity());
        }

        #[test]
        fn associativity((a, b, c) in arb_triple(9)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }

        #[test]
        fn action_compatibility((g, h, _) in arb_triple(7), coords in proptest::collection::vec(0usize..7, 1..4)) {
            let t = KTuple(coords);
            let lhs = apply_tuple(&t, &g.then(&h)).unwrap();
            let rhs = apply_tuple(&apply_tuple(&t, &g).unwrap(), &h).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutes_matches_composition((a, b, _) in arb_triple(6)) {
            prop_assert_eq!(a.commutes_with(&b), a.then(&b) == b.then(&a));
        }
    }
}
