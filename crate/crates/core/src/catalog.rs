//! Named group constructors.
//!
//! Grammar: `cyclic:n`, `abelian:d1,..,dm`, `heisenberg:p`, `modular:p`, `q8`, `sym:n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::perm::Perm;
use crate::structure::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Constructor {
    Cyclic(usize),
    Abelian(Vec<usize>),
    Heisenberg(usize),
    Modular(usize),
    Q8,
    Sym(usize),
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constructor::Cyclic(n) => write!(f, "cyclic:{n}"),
            Constructor::Abelian(ds) => {
                let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            Constructor::Heisenberg(p) => write!(f, "heisenberg:{p}"),
            Constructor::Modular(p) => write!(f, "modular:{p}"),
            Constructor::Q8 => write!(f, "q8"),
            Constructor::Sym(n) => write!(f, "sym:{n}"),
        }
    }
}

impl From<Constructor> for String {
    fn from(c: Constructor) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Constructor {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn parse_positive(s: &str, what: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::InvalidInput(format!("{what}: expected a positive integer, got '{s}'"))),
    }
}

fn odd_prime(s: &str, family: &str) -> Result<usize> {
    let p = parse_positive(s, family)?;
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{family} needs an odd prime, got {p}")));
    }
    Ok(p)
}

impl FromStr for Constructor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, arg) = match s.split_once(':') {
            Some((f, a)) => (f.trim(), Some(a)),
            None => (s, None),
        };
        let need = |what: &str| arg.ok_or_else(|| Error::InvalidInput(format!("{what} needs an argument")));
        match family {
            "cyclic" => Ok(Constructor::Cyclic(parse_positive(need("cyclic")?, "cyclic")?)),
            "abelian" => {
                let ds = need("abelian")?
                    .split(',')
                    .map(|d| parse_positive(d, "abelian"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Constructor::Abelian(ds))
            }
            "heisenberg" => Ok(Constructor::Heisenberg(odd_prime(need("heisenberg")?, "heisenberg")?)),
            "modular" => Ok(Constructor::Modular(odd_prime(need("modular")?, "modular")?)),
            "q8" if arg.is_none() => Ok(Constructor::Q8),
            "sym" => Ok(Constructor::Sym(parse_positive(need("sym")?, "sym")?)),
            _ => Err(Error::InvalidInput(format!("unknown group constructor '{s}'"))),
        }
    }
}

impl Constructor {
    pub fn build(&self, order_cap: usize) -> Result<PermGroup> {
        match self {
            Constructor::Cyclic(n) => cyclic(*n, order_cap),
            Constructor::Abelian(ds) => abelian(ds, order_cap),
            Constructor::Heisenberg(p) => Ok(heisenberg(*p)?.group),
            Constructor::Modular(p) => modular(*p),
            Constructor::Q8 => q8(),
            Constructor::Sym(n) => PermGroup::symmetric(*n, order_cap),
        }
    }
}

/// Builds a catalog group from its constructor string.
pub fn construct(name: &str) -> Result<PermGroup> {
    name.parse::<Constructor>()?.build(DEFAULT_ORDER_CAP)
}

fn full_cycle(n: usize) -> Perm {
    Perm::from_fn(n, |i| (i + 1) % n).expect("rotation is a bijection")
}

pub fn cyclic(n: usize, order_cap: usize) -> Result<PermGroup> {
    PermGroup::generate(n, &[full_cycle(n)], order_cap)
}

/// Product of cycles of lengths `ds` on consecutive disjoint blocks.
pub fn abelian(ds: &[usize], order_cap: usize) -> Result<PermGroup> {
    let degree: usize = ds.iter().sum();
    let mut gens = Vec::with_capacity(ds.len());
    let mut start = 0;
    for &d in ds {
        let block: Vec<usize> = (start..start + d).collect();
        gens.push(Perm::cycle(degree, &block)?);
        start += d;
    }
    PermGroup::generate(degree, &gens, order_cap)
}

/// The Heisenberg group mod `p` on the points `(i, j)` of `Z_p x Z_p`, flattened as `i*p + j`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    pub group: PermGroup,
    /// `(i, j) -> (i+1, j)`
    pub x: Perm,
    /// `(i, j) -> (i, j+i)`
    pub y: Perm,
    /// `[x, y]`, `(i, j) -> (i, j+1)`, generating the center
    pub z: Perm,
}

impl Heisenberg {
    /// The designated central element, complement element and normal subgroup `<z, x>`.
    pub fn designated(&self) -> (Perm, Perm, PermGroup) {
        let h = PermGroup::generate(self.group.degree(), &[self.z.clone(), self.x.clone()], DEFAULT_ORDER_CAP)
            .expect("order p^2");
        (self.z.clone(), self.x.clone(), h)
    }
}

pub fn heisenberg(p: usize) -> Result<Heisenberg> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("heisenberg needs an odd prime, got {p}")));
    }
    let n = p * p;
    let pt = |i: usize, j: usize| (i % p) * p + (j % p);
    let x = Perm::from_fn(n, |v| pt(v / p + 1, v % p))?;
    let y = Perm::from_fn(n, |v| pt(v / p, v % p + v / p))?;
    let z = Perm::from_fn(n, |v| pt(v / p, v % p + 1))?;
    let group = PermGroup::generate(n, &[x.clone(), y.clone()], DEFAULT_ORDER_CAP)?;
    Ok(Heisenberg { group, x, y, z })
}

/// `<x -> x+1, x -> (1+p)x>` on `Z_(p^2)`.
pub fn modular(p: usize) -> Result<PermGroup> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("modular needs an odd prime, got {p}")));
    }
    let n = p * p;
    let shift = full_cycle(n);
    let mult = Perm::from_fn(n, |x| ((1 + p) * x) % n)?;
    PermGroup::generate(n, &[shift, mult], DEFAULT_ORDER_CAP)
}

/// Right regular representation of the quaternion group.
///
/// Element `4*s + u` stands for `(-1)^s * [1, i, j, k][u]`.
pub fn q8() -> Result<PermGroup> {
    // unit products: (sign, unit) of e_a * e_b for a, b in {1, i, j, k}
    const UNIT: [[(u8, u8); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mul = |a: usize, b: usize| -> usize {
        let (s, u) = UNIT[a % 4][b % 4];
        let sign = (a / 4 + b / 4 + s as usize) % 2;
        4 * sign + u as usize
    };
    let right = |g: usize| Perm::from_fn(8, |x| mul(x, g));
    PermGroup::generate(8, &[right(1)?, right(2)?], DEFAULT_ORDER_CAP)
}

/// The default catalog used by the theorem campaign.
pub const DEFAULT_CATALOG: [&str; 11] = [
    "cyclic:3",
    "cyclic:9",
    "cyclic:27",
    "abelian:3,3",
    "abelian:3,9",
    "abelian:3,3,3",
    "cyclic:15",
    "cyclic:45",
    "heisenberg:3",
    "modular:3",
    "heisenberg:5",
];
