//! Classical covering systems of congruences, checked over one period of
//! the modulus lcm.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::One;

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

/// The residue class `a + NZ`, with `0 <= a < N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    a: u64,
    n: u64,
}

// Sorted by modulus, then residue.
impl Ord for ResidueClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.a).cmp(&(other.n, other.a))
    }
}

impl PartialOrd for ResidueClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl ResidueClass {
    pub fn new(a: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        Ok(ResidueClass { a: a.rem_euclid(n as i64) as u64, n })
    }

    pub fn residue(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn contains(&self, x: i64) -> bool {
        x.rem_euclid(self.n as i64) as u64 == self.a
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.a, self.n)
    }
}

impl FromStr for ResidueClass {
    type Err = Error;

    /// Parses `a mod N`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `a mod N`, got {s:?}"));
        let (a, n) = s.trim().split_once("mod").ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        ResidueClass::new(a, n)
    }
}

/// A sorted, duplicate-free system of residue classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCovering {
    classes: Vec<ResidueClass>,
    lcm: u64,
    weight: Rational,
}

impl CongruenceCovering {
    pub fn new<I: IntoIterator<Item = ResidueClass>>(classes: I) -> Result<Self> {
        let mut classes: Vec<_> = classes.into_iter().collect();
        if classes.is_empty() {
            return Err(Error::Empty);
        }
        classes.sort_unstable();
        let before = classes.len();
        classes.dedup();
        if classes.len() != before {
            return Err(Error::Invalid("duplicate residue class".into()));
        }
        let lcm = classes.iter().fold(1u64, |acc, r| acc.lcm(&r.n));
        let weight = classes.iter().map(|r| Rational::new(1, r.n as i128)).sum();
        Ok(CongruenceCovering { classes, lcm, weight })
    }

    /// All classes modulo `n`.
    pub fn full(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        Self::new((0..n).map(|a| ResidueClass { a, n }))
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// `sum 1/N_i`.
    pub fn weight(&self) -> Rational {
        self.weight
    }

    /// Number of classes containing each residue in `[0, lcm)`.
    fn multiplicities(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.lcm as usize];
        for r in &self.classes {
            for x in (r.a..self.lcm).step_by(r.n as usize) {
                counts[x as usize] += 1;
            }
        }
        counts
    }
}

pub fn cc_is_covering(c: &CongruenceCovering) -> bool {
    c.multiplicities().iter().all(|&k| k > 0)
}

/// Moduli `tN` (`t > 1`, `tN | lcm`) to which class `j` could shrink while
/// the system still covers. Empty iff the class is minimal in the system.
fn admissible_shrinks(c: &CongruenceCovering, counts: &[u32], j: usize) -> Vec<u64> {
    let class = c.classes[j];
    let owned: Vec<u64> = (class.a..c.lcm)
        .step_by(class.n as usize)
        .filter(|&x| counts[x as usize] == 1)
        .collect();
    let Some(&first) = owned.first() else {
        // Redundant: any subclass works.
        return vec![c.lcm.max(2 * class.n)];
    };
    arith::divisors(c.lcm / class.n)
        .expect("lcm >= 1")
        .into_iter()
        .filter(|&t| t > 1)
        .map(|t| t * class.n)
        .filter(|&m| owned.iter().all(|&x| x % m == first % m))
        .collect()
}

/// Covering, and no class can be removed.
pub fn cc_is_irredundant(c: &CongruenceCovering) -> bool {
    let counts = c.multiplicities();
    counts.iter().all(|&k| k > 0)
        && c.classes.iter().all(|r| (r.a..c.lcm).step_by(r.n as usize).any(|x| counts[x as usize] == 1))
}

/// The strict subclasses `R(a'; M)` that class `j` could be replaced by
/// while keeping the covering, one per admissible modulus `M`.
pub fn cc_shrinks(c: &CongruenceCovering, j: usize) -> Vec<ResidueClass> {
    let counts = c.multiplicities();
    let class = c.classes[j];
    let first = (class.a..c.lcm)
        .step_by(class.n as usize)
        .find(|&x| counts[x as usize] == 1)
        .unwrap_or(class.a);
    admissible_shrinks(c, &counts, j)
        .into_iter()
        .map(|m| ResidueClass { a: first % m, n: m })
        .collect()
}

/// Covering, and no class can be replaced by a strict subclass.
pub fn cc_is_minimal(c: &CongruenceCovering) -> bool {
    let counts = c.multiplicities();
    if counts.contains(&0) {
        return false;
    }
    (0..c.classes.len()).all(|j| admissible_shrinks(c, &counts, j).is_empty())
}

/// Every integer lies in exactly one class.
pub fn cc_is_strongly_minimal(c: &CongruenceCovering) -> bool {
    c.multiplicities().iter().all(|&k| k == 1) && c.weight == Rational::one()
}

/// Replaces `class` by its `q` subclasses modulo `qN`.
pub fn cc_refine(c: &CongruenceCovering, class: &ResidueClass, q: u64) -> Result<CongruenceCovering> {
    if q < 2 {
        return Err(Error::Invalid(format!("refinement factor must be at least 2, got {q}")));
    }
    if c.classes.binary_search(class).is_err() {
        return Err(Error::NotMember(class.to_string()));
    }
    let m = class.n * q;
    let subclasses = (0..q).map(|k| ResidueClass { a: class.a + k * class.n, n: m });
    CongruenceCovering::new(c.classes.iter().copied().filter(|r| r != class).chain(subclasses))
}

/// `n >= 1 + sum e_i (p_i - 1)` over the factorization of the lcm.
pub fn cc_simpson_bound(c: &CongruenceCovering) -> bool {
    c.classes.len() as u64 >= cc_simpson_lower_bound(c)
}

pub fn cc_simpson_lower_bound(c: &CongruenceCovering) -> u64 {
    1 + arith::big_f(c.lcm).expect("lcm >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(pairs: &[(i64, u64)]) -> CongruenceCovering {
        CongruenceCovering::new(pairs.iter().map(|&(a, n)| ResidueClass::new(a, n).unwrap())).unwrap()
    }

    fn erdos() -> CongruenceCovering {
        cls(&[(0, 2), (1, 4), (3, 8), (0, 3), (7, 12), (23, 24)])
    }

    /// Independent scan over ten periods with direct membership tests.
    fn covers_by_scan(c: &CongruenceCovering) -> bool {
        (0..10 * c.lcm() as i64).all(|x| c.classes().iter().any(|r| r.contains(x)))
    }

    #[test]
    fn covering_examples() {
        for n in 1..=12 {
            assert!(cc_is_covering(&CongruenceCovering::full(n).unwrap()));
        }
        assert!(!cc_is_covering(&cls(&[(0, 2)])));
        assert!(cc_is_covering(&erdos()));
        assert!(covers_by_scan(&erdos()));
    }

    /// Brute-force minimality: try every strict subclass of every class.
    fn minimal_by_scan(c: &CongruenceCovering) -> bool {
        if !covers_by_scan(c) {
            return false;
        }
        c.classes().iter().all(|r| {
            (2..=c.lcm() / r.modulus()).all(|t| {
                let m = t * r.modulus();
                (0..t).all(|k| {
                    let sub = ResidueClass::new((r.residue() + k * r.modulus()) as i64, m).unwrap();
                    let rest = c.classes().iter().filter(|x| *x != r).copied().chain([sub]);
                    let shrunk = CongruenceCovering::new(rest).unwrap();
                    !covers_by_scan(&shrunk)
                })
            })
        })
    }

    #[test]
    fn minimality_examples() {
        // R(0;3) only owns the residue 3 mod 6, so it shrinks to R(3;6).
        let c = cls(&[(0, 2), (0, 3), (1, 6), (5, 6)]);
        assert!(cc_is_irredundant(&c));
        assert!(!cc_is_minimal(&c));
        assert_eq!(cc_shrinks(&c, 1), vec![ResidueClass::new(3, 6).unwrap()]);
        assert!(!cc_is_strongly_minimal(&c));
        for n in 1..=12 {
            let full = CongruenceCovering::full(n).unwrap();
            assert!(cc_is_minimal(&full) && cc_is_strongly_minimal(&full));
        }
        // Likewise R(0;3) owns only 15 mod 24 in the Erdos system.
        let e = erdos();
        assert!(cc_is_irredundant(&e));
        assert!(!cc_is_minimal(&e));
        let j = e.classes().iter().position(|r| r.modulus() == 3).unwrap();
        let expected: Vec<_> = [(3, 6), (3, 12), (15, 24)].iter().map(|&(a, n)| ResidueClass::new(a, n).unwrap()).collect();
        assert_eq!(cc_shrinks(&e, j), expected);
        assert!(!cc_is_strongly_minimal(&e));
        assert_eq!(e.weight(), Rational::new(4, 3));
    }

    #[test]
    fn minimality_matches_scan() {
        let systems = [
            erdos(),
            cls(&[(0, 2), (0, 3), (1, 6), (5, 6)]),
            cls(&[(0, 2), (0, 3), (1, 6), (5, 12), (11, 12)]),
            cls(&[(0, 2), (1, 4), (3, 4)]),
            cls(&[(0, 2), (1, 2), (3, 4)]),
            cls(&[(0, 3), (1, 3), (2, 6), (5, 6)]),
            cls(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)]),
        ];
        for c in systems {
            assert_eq!(cc_is_minimal(&c), minimal_by_scan(&c), "{c:?}");
        }
    }

    #[test]
    fn non_minimal_detected() {
        // R(1;2) can shrink to R(1;4) once R(3;4) is present.
        assert!(!cc_is_minimal(&cls(&[(0, 2), (1, 2), (3, 4)])));
        assert!(!cc_is_minimal(&cls(&[(0, 2), (1, 4), (3, 4), (1, 2)])));
        assert!(!cc_is_minimal(&cls(&[(0, 1), (0, 2)])));
    }

    #[test]
    fn refine_examples() {
        let r = cc_refine(&cls(&[(0, 1)]), &ResidueClass::new(0, 1).unwrap(), 2).unwrap();
        assert_eq!(r, cls(&[(0, 2), (1, 2)]));
        let full2 = CongruenceCovering::full(2).unwrap();
        let r = cc_refine(&full2, &ResidueClass::new(1, 2).unwrap(), 2).unwrap();
        assert_eq!(r, cls(&[(0, 2), (1, 4), (3, 4)]));
        assert!(cc_is_strongly_minimal(&r));
        assert!(cc_refine(&full2, &ResidueClass::new(1, 3).unwrap(), 2).is_err());
        assert!(cc_refine(&full2, &ResidueClass::new(1, 2).unwrap(), 1).is_err());
    }

    #[test]
    fn jointly_coprime_exact_cover() {
        let base = [(0i64, 6u64), (1, 10), (2, 15)];
        let mut classes: Vec<ResidueClass> = base.iter().map(|&(a, n)| ResidueClass::new(a, n).unwrap()).collect();
        let rest: Vec<_> = (0..30i64).filter(|&x| !classes.iter().any(|r| r.contains(x))).collect();
        // 5 + 3 + 2 classes mod 30 are taken by the first three.
        assert_eq!(rest.len(), 20);
        classes.extend(rest.iter().map(|&a| ResidueClass::new(a, 30).unwrap()));
        let c = CongruenceCovering::new(classes).unwrap();
        assert_eq!(c.classes().len(), 23);
        assert!(cc_is_strongly_minimal(&c) && cc_is_minimal(&c));
    }

    #[test]
    fn simpson_examples() {
        assert_eq!(cc_simpson_lower_bound(&erdos()), 6);
        assert!(cc_simpson_bound(&erdos()));
        for p in [2u64, 3, 5, 7] {
            let full = CongruenceCovering::full(p).unwrap();
            assert_eq!(cc_simpson_lower_bound(&full), p);
            assert!(cc_simpson_bound(&full));
        }
        assert!(cc_simpson_bound(&cls(&[(0, 2), (1, 2)])));
    }

    #[test]
    fn weight_at_least_one() {
        let systems = [erdos(), cls(&[(0, 2), (0, 3), (1, 6), (5, 6)]), CongruenceCovering::full(7).unwrap()];
        for c in systems {
            assert_eq!(cc_is_covering(&c), covers_by_scan(&c));
            assert!(c.weight() >= Rational::one());
            assert_eq!(c.weight() == Rational::one(), cc_is_strongly_minimal(&c));
        }
    }
}
