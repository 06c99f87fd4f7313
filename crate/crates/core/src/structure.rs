//! Nilpotency, Sylow and Hall subgroups, abelian invariant factors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// `n_pi`: the product over `p in pi` of the largest power of `p` dividing `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiPart {
    pub n: u64,
    pub pi: Vec<u64>,
    pub value: u64,
}

pub fn pi_part(n: u64, pi: &[u64]) -> Result<PiPart> {
    if n == 0 {
        return Err(Error::InvalidInput("pi_part needs n >= 1".into()));
    }
    let value = factorize(n)
        .into_iter()
        .filter(|(p, _)| pi.contains(p))
        .map(|(p, e)| p.pow(e))
        .product();
    let mut pi = pi.to_vec();
    pi.sort_unstable();
    pi.dedup();
    Ok(PiPart { n, pi, value })
}

/// True iff every Sylow subgroup is normal, tested as: for each prime `p`
/// dividing `|G|`, the `p`-elements number exactly `|G|_p` (so they form the
/// unique Sylow `p`-subgroup).
pub fn is_nilpotent(g: &PermGroup) -> bool {
    let order = g.order() as u64;
    prime_divisors(order).into_iter().all(|p| {
        let count = g.elements_with_order_in(&[p]).len() as u64;
        count == pi_part(order, &[p]).expect("order >= 1").value
    })
}

/// The Hall `pi`-subgroup of a nilpotent group: all elements whose order involves only primes in `pi`.
pub fn hall(g: &PermGroup, pi: &[u64]) -> Result<PermGroup> {
    let order = g.order() as u64;
    let expected = pi_part(order, pi)?.value;
    let elements = g.elements_with_order_in(pi);
    if elements.len() as u64 != expected {
        return Err(Error::NotNilpotent);
    }
    PermGroup::from_closed_subset(g.degree(), &elements).map_err(|_| Error::NotNilpotent)
}

pub fn sylow(g: &PermGroup, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if g.order() as u64 % p != 0 {
        return Err(Error::InvalidInput(format!("{p} does not divide the group order {}", g.order())));
    }
    hall(g, &[p])
}

/// All Sylow subgroups of a nilpotent group, by increasing prime.
pub fn sylow_subgroups(g: &PermGroup) -> Result<Vec<(u64, PermGroup)>> {
    prime_divisors(g.order() as u64)
        .into_iter()
        .map(|p| sylow(g, p).map(|s| (p, s)))
        .collect()
}

/// Invariant factors `d1 | d2 | .. | dm` with `d1 > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub factors: Vec<u64>,
}

impl AbelianInvariants {
    /// `n(G)`, the number of invariant factors.
    pub fn count(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }
}

/// Invariant factors of an abelian group from element-order censuses.
///
/// For each prime `p`, `s_i = log_p |{g : g^(p^i) = 1}|`; the number of cyclic
/// `p`-factors of order at least `p^i` is `s_i - s_(i-1)`. Per-prime factors are
/// then paired largest with largest.
pub fn abelian_invariants(g: &PermGroup) -> Result<AbelianInvariants> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let order = g.order() as u64;
    let orders: Vec<u64> = g.elements().iter().map(|e| e.order()).collect();
    // per prime: exponents of cyclic factors, descending
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, total) in factorize(order) {
        let mut counts_at_least = Vec::new();
        let mut prev = 0u32;
        let mut i = 1u32;
        loop {
            let pi = p.pow(i);
            let killed = orders.iter().filter(|&&o| pi % o == 0 && is_p_power(o, p)).count() as u64;
            let s = ilog(killed, p)?;
            counts_at_least.push(s - prev);
            prev = s;
            if s == total {
                break;
            }
            i += 1;
        }
        // counts_at_least[i-1] = number of factors of order >= p^i
        let mut exps = Vec::new();
        for (idx, &c) in counts_at_least.iter().enumerate() {
            let next = counts_at_least.get(idx + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                exps.push(idx as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push((p, exps));
    }
    let m = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..m)
        .map(|i| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    factors.reverse();
    Ok(AbelianInvariants { factors })
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn ilog(n: u64, p: u64) -> Result<u32> {
    let mut e = 0;
    let mut x = 1u64;
    while x < n {
        x *= p;
        e += 1;
    }
    if x != n {
        return Err(Error::Internal(format!("{n} is not a power of {p}")));
    }
    Ok(e)
}

/// Largest `log_p |{g : g^p = 1}|` over primes `p`; equals `n(G)` for abelian `G`.
pub fn max_elementary_rank(g: &PermGroup) -> Result<u32> {
    let orders: Vec<u64> = g.elements().iter().map(|e| e.order()).collect();
    prime_divisors(g.order() as u64)
        .into_iter()
        .map(|p| ilog(orders.iter().filter(|&&o| o == 1 || o == p).count() as u64, p))
        .try_fold(0, |acc, r| r.map(|r| acc.max(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::construct;
    use crate::group::{direct_product, DEFAULT_ORDER_CAP};

    #[test]
    fn pi_parts() {
        assert_eq!(pi_part(6, &[3]).unwrap().value, 3);
        assert_eq!(pi_part(12, &[2, 3]).unwrap().value, 12);
        assert_eq!(pi_part(7, &[2]).unwrap().value, 1);
        assert!(pi_part(0, &[2]).is_err());
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&construct("abelian:6,4").unwrap()));
        assert!(is_nilpotent(&construct("heisenberg:3").unwrap()));
        assert!(!is_nilpotent(&construct("sym:3").unwrap()));
        assert!(is_nilpotent(&construct("q8").unwrap()));
        assert!(!is_nilpotent(&construct("sym:4").unwrap()));
    }

    #[test]
    fn sylow_examples() {
        let z15 = construct("abelian:3,5").unwrap();
        assert_eq!(sylow(&z15, 3).unwrap().order(), 3);
        assert_eq!(sylow(&z15, 5).unwrap().order(), 5);
        let h = construct("heisenberg:3").unwrap();
        assert_eq!(sylow(&h, 3).unwrap(), h);
        let z6 = construct("cyclic:6").unwrap();
        let hall3 = hall(&z6, &[3]).unwrap();
        assert_eq!(hall3.order(), 3);
        assert_eq!(sylow(&construct("sym:3").unwrap(), 2).unwrap_err(), Error::NotNilpotent);
        assert!(sylow(&z15, 7).is_err());
    }

    #[test]
    fn invariant_factor_examples() {
        let inv = abelian_invariants(&construct("cyclic:6").unwrap()).unwrap();
        assert_eq!(inv.factors, vec![6]);
        assert_eq!(inv.count(), 1);
        let inv = abelian_invariants(&construct("abelian:3,9").unwrap()).unwrap();
        assert_eq!(inv.factors, vec![3, 9]);
        assert_eq!(abelian_invariants(&construct("abelian:6,4").unwrap()).unwrap().factors, vec![2, 12]);
        assert!(abelian_invariants(&construct("sym:3").unwrap()).is_err());
        assert!(abelian_invariants(&PermGroup::trivial(3)).unwrap().factors.is_empty());
    }

    /// Independent census: count solutions of g^(p^i) = 1 directly by powering.
    #[test]
    fn census_oracle_for_6_4() {
        let g = construct("abelian:6,4").unwrap();
        let count = |e: i64| g.elements().iter().filter(|x| x.pow(e).is_identity()).count();
        // 2-part: Z2 x Z4 -> 2, 8 solutions for exponents 2, 4; 3-part: Z3 -> 3
        assert_eq!((count(1), count(2), count(4), count(8)), (1, 4, 8, 8));
        assert_eq!(count(3), 3);
        // rank 2 at p=2 with one factor of order >= 4: Z2 x Z4; times Z3 -> [2, 12]
        assert_eq!(abelian_invariants(&g).unwrap().factors, vec![2, 12]);
    }

    #[test]
    fn rank_cross_check() {
        for name in ["abelian:3,3", "abelian:3,9", "abelian:3,3,3", "cyclic:45", "abelian:2,6,4", "abelian:5,25"] {
            let g = construct(name).unwrap();
            let inv = abelian_invariants(&g).unwrap();
            assert_eq!(inv.order(), g.order() as u64, "{name}");
            assert!(inv.factors.windows(2).all(|w| w[1] % w[0] == 0), "{name}");
            assert_eq!(inv.count() as u32, max_elementary_rank(&g).unwrap(), "{name}");
        }
    }

    #[test]
    fn products_of_coprime_prime_power_groups_are_nilpotent() {
        let p = construct("heisenberg:3").unwrap();
        let q = construct("cyclic:5").unwrap();
        assert!(is_nilpotent(&direct_product(&p, &q, DEFAULT_ORDER_CAP).unwrap()));
        let q8 = construct("q8").unwrap();
        assert!(is_nilpotent(&direct_product(&q8, &construct("cyclic:3").unwrap(), DEFAULT_ORDER_CAP).unwrap()));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
