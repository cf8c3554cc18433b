//! The projective line P1(Z/N).
//!
//! A point `(c:d)_N` is stored through its canonical representative: the
//! lexicographically least pair among all unit multiples `(uc, ud)` mod N.
//! For `N = 1` the single point is stored as `(0, 0)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// An integer vector in Z^2.
pub type Vector = (i64, i64);

/// `v1 ^ v2 = c1*d2 - c2*d1`.
pub fn wedge(v1: Vector, v2: Vector) -> i64 {
    v1.0 * v2.1 - v2.0 * v1.1
}

/// A point of P1(Z/N) in canonical form.
///
/// Ordering is by modulus, then lexicographically on `(c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    n: u64,
    c: u64,
    d: u64,
}

type Cache<T> = OnceLock<RwLock<HashMap<u64, Arc<[T]>>>>;

static UNITS: Cache<u64> = OnceLock::new();
static POINTS: Cache<ProjPoint> = OnceLock::new();

fn cached<T>(cache: &'static Cache<T>, n: u64, fill: impl FnOnce() -> Vec<T>) -> Arc<[T]> {
    let map = cache.get_or_init(Default::default);
    if let Some(v) = map.read().expect("cache poisoned").get(&n) {
        return v.clone();
    }
    let value: Arc<[T]> = fill().into();
    map.write()
        .expect("cache poisoned")
        .entry(n)
        .or_insert(value)
        .clone()
}

/// Units of Z/N, ascending.
pub(crate) fn units(n: u64) -> Arc<[u64]> {
    cached(&UNITS, n, || (1..=n.max(1)).filter(|u| u.gcd(&n) == 1).map(|u| u % n.max(1)).collect())
}

fn canonical(c: u64, d: u64, n: u64) -> (u64, u64) {
    if n == 1 {
        return (0, 0);
    }
    units(n)
        .iter()
        .map(|&u| ((u * c) % n, (u * d) % n))
        .min()
        .expect("Z/N has units")
}

impl ProjPoint {
    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The canonical representative as a pair.
    pub fn pair(&self) -> Vector {
        (self.c as i64, self.d as i64)
    }

    /// The unique point of P1(Z/1).
    pub fn trivial() -> Self {
        ProjPoint { n: 1, c: 0, d: 0 }
    }

    /// Image of the vector `v` in P1(Z/N).
    pub fn from_vector(v: Vector, n: u64) -> Result<Self> {
        normalize(v.0, v.1, n)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{};{}", self.c, self.d, self.n)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Parses `c:d;N`; `c` and `d` may be any integers.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected c:d;N, got {s:?}"));
        let (cd, n) = s.trim().split_once(';').ok_or_else(bad)?;
        let (c, d) = cd.split_once(':').ok_or_else(bad)?;
        let c: i64 = c.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        normalize(c, d, n)
    }
}

/// Canonical point of `(c : d)` in P1(Z/N).
pub fn normalize(c: i64, d: i64, n: u64) -> Result<ProjPoint> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let ni = n as i64;
    let (cr, dr) = (c.rem_euclid(ni) as u64, d.rem_euclid(ni) as u64);
    if cr.gcd(&dr).gcd(&n) != 1 {
        return Err(Error::NotCoprime { c, d, n });
    }
    let (c, d) = canonical(cr, dr, n);
    Ok(ProjPoint { n, c, d })
}

/// Equality of points via the cross-product test `c1 d2 == c2 d1 (mod N)`.
pub fn equal(p1: &ProjPoint, p2: &ProjPoint) -> Result<bool> {
    if p1.n != p2.n {
        return Err(Error::ModulusMismatch(p1.n, p2.n));
    }
    let w = wedge(p1.pair(), p2.pair());
    Ok(w.rem_euclid(p1.n as i64) == 0)
}

/// All `psi(N)` points of P1(Z/N) in canonical order.
pub fn enumerate_points(n: u64) -> Vec<ProjPoint> {
    points(n).to_vec()
}

pub(crate) fn points(n: u64) -> Arc<[ProjPoint]> {
    cached(&POINTS, n, || {
        if n <= 1 {
            return vec![ProjPoint::trivial()];
        }
        // Scanning pairs in lexicographic order, the first unseen pair of
        // each unit orbit is its least element.
        let us = units(n);
        let size = (n * n) as usize;
        let mut seen = vec![0u64; size.div_ceil(64)];
        let mut out = Vec::new();
        for c in 0..n {
            for d in 0..n {
                let k = (c * n + d) as usize;
                if seen[k / 64] >> (k % 64) & 1 == 1 || c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                out.push(ProjPoint { n, c, d });
                for &u in us.iter() {
                    let j = ((u * c % n) * n + u * d % n) as usize;
                    seen[j / 64] |= 1 << (j % 64);
                }
            }
        }
        out
    })
}

/// Image of `p` under P1(Z/N) -> P1(Z/M) for `M | N`.
pub fn reduce(p: &ProjPoint, m: u64) -> Result<ProjPoint> {
    if m == 0 || p.n % m != 0 {
        return Err(Error::NotDivisor { divisor: m, n: p.n });
    }
    Ok(reduce_unchecked(p, m))
}

pub(crate) fn reduce_unchecked(p: &ProjPoint, m: u64) -> ProjPoint {
    if m == p.n {
        return *p;
    }
    let (c, d) = canonical(p.c % m, p.d % m, m);
    ProjPoint { n: m, c, d }
}

/// The first coprime integer pair `(c + tN, d + sN)`, `t, s >= 0`, scanning
/// by increasing `t + s` and then by `t`.
pub fn coprime_rep(p: &ProjPoint) -> Vector {
    let (c, d, n) = (p.c as i64, p.d as i64, p.n as i64);
    for total in 0i64.. {
        for t in 0..=total {
            let v = (c + t * n, d + (total - t) * n);
            if v.0.gcd(&v.1) == 1 {
                return v;
            }
        }
    }
    unreachable!()
}

/// The preimages of `p` in P1(Z/qN): `q` of them if `q | N`, else `q + 1`.
pub fn lifts(p: &ProjPoint, q: u64) -> Result<Vec<ProjPoint>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(prime_lifts(p, q))
}

fn prime_lifts(p: &ProjPoint, q: u64) -> Vec<ProjPoint> {
    let big = p.n * q;
    let (c, d) = if p.n == 1 { (0, 1) } else { (p.c, p.d) };
    let mut out = Vec::with_capacity(q as usize + 1);
    if p.n == 1 {
        // Every point of P1(Z/q) lies over the trivial point.
        out.extend(points(q).iter().copied());
        return out;
    }
    for k in 0..q {
        for l in 0..q {
            let (x, y) = (c + k * p.n, d + l * p.n);
            if x.gcd(&y).gcd(&big) != 1 {
                continue;
            }
            let (x, y) = canonical(x, y, big);
            out.push(ProjPoint { n: big, c: x, d: y });
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All preimages of `p` in P1(Z/N), by chaining prime lifts over the
/// factorization of `N / modulus(p)`.
pub fn lifts_to(p: &ProjPoint, n: u64) -> Result<Vec<ProjPoint>> {
    if n == 0 || n % p.n != 0 {
        return Err(Error::NotDivisor { divisor: p.n, n });
    }
    let mut layer = vec![*p];
    for &(q, e) in factorize(n / p.n)?.entries() {
        for _ in 0..e {
            layer = layer.iter().flat_map(|x| prime_lifts(x, q)).collect();
        }
    }
    layer.sort_unstable();
    Ok(layer)
}

/// A common preimage of `p1` and `p2` in P1(Z/lcm(N1, N2)), if one exists.
///
/// One exists iff both reduce to the same point mod `gcd(N1, N2)`. The
/// representative of `p1` is first rescaled by a unit so that it agrees
/// with that of `p2` mod the gcd; the coordinates are then glued by CRT.
pub fn crt_lift(p1: &ProjPoint, p2: &ProjPoint) -> Option<ProjPoint> {
    let (n1, n2) = (p1.n, p2.n);
    let m = n1.gcd(&n2);
    let n = n1.lcm(&n2);
    if reduce_unchecked(p1, m) != reduce_unchecked(p2, m) {
        return None;
    }
    let u = units(n1)
        .iter()
        .copied()
        .find(|&u| (u * p1.c) % m == p2.c % m && (u * p1.d) % m == p2.d % m)?;
    let glue = |a1: u64, a2: u64| {
        (0..n / n1)
            .map(|k| a1 + k * n1)
            .find(|x| x % n2 == a2)
            .expect("residues agree modulo the gcd")
    };
    let c = glue((u * p1.c) % n1, p2.c);
    let d = glue((u * p1.d) % n1, p2.d);
    Some(normalize(c as i64, d as i64, n).expect("glued pair is coprime to N"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::psi;

    fn pt(c: i64, d: i64, n: u64) -> ProjPoint {
        normalize(c, d, n).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge((1, 0), (0, 1)), 1);
        assert_eq!(wedge((5, 7), (5, 7)), 0);
        assert_eq!(wedge((1, 2), (3, 4)), -2);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pt(3, 1, 2), ProjPoint { n: 2, c: 1, d: 1 });
        assert_eq!(pt(2, 4, 5), pt(1, 2, 5));
        assert_eq!(pt(0, 7, 1), ProjPoint::trivial());
        assert!(matches!(normalize(2, 4, 6), Err(Error::NotCoprime { .. })));
        assert_eq!(normalize(1, 1, 0), Err(Error::Zero));
    }

    #[test]
    fn equal_examples() {
        assert!(equal(&pt(1, 1, 2), &pt(3, 5, 2)).unwrap());
        assert!(!equal(&pt(0, 1, 2), &pt(1, 0, 2)).unwrap());
        assert!(equal(&pt(1, 2, 5), &pt(2, 4, 5)).unwrap());
        assert_eq!(equal(&pt(0, 1, 2), &pt(0, 1, 3)), Err(Error::ModulusMismatch(2, 3)));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_points(1), vec![ProjPoint::trivial()]);
        assert_eq!(enumerate_points(2), vec![pt(0, 1, 2), pt(1, 0, 2), pt(1, 1, 2)]);
        assert_eq!(enumerate_points(30).len(), 72);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&pt(1, 1, 6), 2).unwrap(), pt(1, 1, 2));
        assert_eq!(reduce(&pt(6, 5, 30), 6).unwrap(), pt(0, 1, 6));
        assert_eq!(reduce(&pt(7, 3, 10), 1).unwrap(), ProjPoint::trivial());
        assert!(reduce(&pt(1, 1, 6), 4).is_err());
    }

    #[test]
    fn coprime_rep_examples() {
        assert_eq!(coprime_rep(&pt(0, 1, 2)), (0, 1));
        assert_eq!(coprime_rep(&pt(2, 1, 4)), (2, 1));
        assert_eq!(coprime_rep(&pt(6, 5, 30)), (6, 5));
        assert_eq!(coprime_rep(&ProjPoint::trivial()), (0, 1));
        for n in 1..=60 {
            for p in points(n).iter() {
                let v = coprime_rep(p);
                assert_eq!(v.0.gcd(&v.1), 1);
                assert_eq!(ProjPoint::from_vector(v, n).unwrap(), *p);
            }
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lifts(&pt(0, 1, 2), 2).unwrap(), vec![pt(0, 1, 4), pt(2, 1, 4)]);
        assert_eq!(lifts(&ProjPoint::trivial(), 3).unwrap().len(), 4);
        let mut expected = vec![pt(1, 1, 30), pt(11, 1, 30), pt(21, 1, 30), pt(1, 21, 30)];
        expected.sort();
        assert_eq!(lifts(&pt(1, 1, 10), 3).unwrap(), expected);
        assert_eq!(lifts(&pt(1, 1, 10), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn lifts_to_examples() {
        let fiber = lifts_to(&pt(0, 1, 6), 30).unwrap();
        let mut expected: Vec<_> =
            [(0, 1), (6, 1), (12, 1), (18, 1), (24, 1), (6, 5)].iter().map(|&(c, d)| pt(c, d, 30)).collect();
        expected.sort();
        assert_eq!(fiber, expected);

        let p = pt(3, 2, 7);
        assert_eq!(lifts_to(&p, 7).unwrap(), vec![p]);

        let fiber = lifts_to(&pt(-1, 1, 15), 30).unwrap();
        let mut expected = vec![pt(-1, 1, 30), pt(14, 1, 30), pt(13, 2, 30)];
        expected.sort();
        assert_eq!(fiber, expected);

        assert!(lifts_to(&pt(1, 1, 4), 6).is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_lift(&pt(1, 0, 2), &pt(1, 0, 3)), Some(pt(1, 0, 6)));
        assert_eq!(crt_lift(&pt(1, 1, 2), &pt(0, 1, 3)), Some(pt(3, 1, 6)));
        assert_eq!(crt_lift(&pt(0, 1, 2), &pt(1, 0, 2)), None);
    }

    #[test]
    fn counts_match_psi() {
        for n in 1..=200 {
            assert_eq!(points(n).len() as u64, psi(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn equality_routes_agree() {
        for n in 1..=60u64 {
            let reps: Vec<(u64, u64)> = (0..n)
                .flat_map(|c| (0..n).map(move |d| (c, d)))
                .filter(|&(c, d)| c.gcd(&d).gcd(&n) == 1)
                .collect();
            for &(c1, d1) in reps.iter().step_by(3) {
                let p1 = pt(c1 as i64, d1 as i64, n);
                assert_eq!(normalize(p1.c as i64, p1.d as i64, n).unwrap(), p1);
                for &(c2, d2) in reps.iter().step_by(5) {
                    let p2 = pt(c2 as i64, d2 as i64, n);
                    let cross = (c1 * d2 + n * n - (c2 * d1) % n) % n == 0;
                    assert_eq!(p1 == p2, cross);
                    assert_eq!(equal(&p1, &p2).unwrap(), cross);
                }
            }
        }
    }

    #[test]
    fn crt_bijection_for_coprime_moduli() {
        for n1 in 1..=50u64 {
            for n2 in 1..=50u64 {
                if n1.gcd(&n2) != 1 || n1 * n2 > 600 {
                    continue;
                }
                let mut seen = std::collections::HashSet::new();
                for p in points(n1 * n2).iter() {
                    assert!(seen.insert((reduce_unchecked(p, n1), reduce_unchecked(p, n2))));
                }
                assert_eq!(seen.len(), points(n1).len() * points(n2).len());
            }
        }
    }

    #[test]
    fn lift_fibers() {
        for n in 1..=200u64 {
            let divs = crate::arith::divisors(n).unwrap();
            for &m in &divs {
                if n > 60 && m != 1 && m * 2 < n {
                    continue;
                }
                for p in points(m).iter() {
                    let fiber = lifts_to(p, n).unwrap();
                    assert_eq!(fiber.len() as u64, psi(n).unwrap() / psi(m).unwrap());
                    assert!(fiber.windows(2).all(|w| w[0] < w[1]));
                    assert!(fiber.iter().all(|x| reduce_unchecked(x, m) == *p));
                }
            }
        }
    }

    #[test]
    fn crt_lift_exhaustive() {
        for n1 in 1..=24u64 {
            for n2 in 1..=24u64 {
                let (m, n) = (n1.gcd(&n2), n1.lcm(&n2));
                for p1 in points(n1).iter() {
                    for p2 in points(n2).iter() {
                        let compatible = reduce_unchecked(p1, m) == reduce_unchecked(p2, m);
                        let lift = crt_lift(p1, p2);
                        assert_eq!(lift.is_some(), compatible);
                        if let Some(x) = lift {
                            assert_eq!(x.modulus(), n);
                            assert_eq!(reduce_unchecked(&x, n1), *p1);
                            assert_eq!(reduce_unchecked(&x, n2), *p2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_display() {
        let p: ProjPoint = "-1:1;15".parse().unwrap();
        assert_eq!(p, pt(-1, 1, 15));
        assert_eq!(p.to_string().parse::<ProjPoint>().unwrap(), p);
        assert!("1:2".parse::<ProjPoint>().is_err());
    }
}
