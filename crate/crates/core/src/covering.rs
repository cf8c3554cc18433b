//! Finite collections of cocyclic lattices and the covering predicates.
//!
//! Everything is decided on P1(Z/N) with `N = lcm(C)`: a collection covers
//! Z^2 iff every point of P1(Z/N) lies over some member, and the points
//! lying over exactly one member drive irredundancy and minimality.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::One;

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::lattice::{self, contains_lattice, contains_vector, require_prime, CocyclicLattice};
use crate::projline::{self, coprime_rep, wedge, ProjPoint, Vector};

/// A duplicate-free, canonically sorted set of cocyclic lattices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covering {
    lattices: Vec<CocyclicLattice>,
    lcm: u64,
    weight: Rational,
}

impl Covering {
    /// Builds a collection from any lattices; duplicates are dropped.
    pub fn new<I: IntoIterator<Item = CocyclicLattice>>(lattices: I) -> Result<Self> {
        let mut lattices: Vec<_> = lattices.into_iter().collect();
        if lattices.is_empty() {
            return Err(Error::Empty);
        }
        lattices.sort_unstable();
        lattices.dedup();
        let lcm = lattices.iter().fold(1u64, |acc, l| acc.lcm(&l.index()));
        let weight = lattices.iter().map(lattice::weight).sum();
        Ok(Covering { lattices, lcm, weight })
    }

    /// The trivial covering `{Z^2}`.
    pub fn trivial() -> Self {
        Self::new([CocyclicLattice::full()]).expect("nonempty")
    }

    /// The full index-`N` covering: every cocyclic lattice of index `N`.
    pub fn full(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        Self::new(lattice::full_covering_lattices(n))
    }

    pub fn lattices(&self) -> &[CocyclicLattice] {
        &self.lattices
    }

    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn weight(&self) -> Rational {
        self.weight
    }

    pub fn contains(&self, l: &CocyclicLattice) -> bool {
        self.lattices.binary_search(l).is_ok()
    }

    /// Member indices, ascending.
    pub fn index_sequence(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.lattices.iter().map(|l| l.index()).collect();
        v.sort_unstable();
        v
    }

    fn replace(&self, old: &CocyclicLattice, new: impl IntoIterator<Item = CocyclicLattice>) -> Result<Self> {
        if !self.contains(old) {
            return Err(Error::NotMember(old.to_string()));
        }
        Self::new(self.lattices.iter().copied().filter(|l| l != old).chain(new))
    }
}

impl fmt::Display for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.lattices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Which members lie over each point of P1(Z/lcm).
struct Incidence {
    points: std::sync::Arc<[ProjPoint]>,
    owners: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(c: &Covering) -> Self {
        let n = c.lcm;
        let points = projline::points(n);
        let mut owners = vec![Vec::new(); points.len()];
        for (j, l) in c.lattices.iter().enumerate() {
            for x in projline::lifts_to(l.point(), n).expect("index divides lcm") {
                let i = points.binary_search(&x).expect("canonical point");
                owners[i].push(j);
            }
        }
        Incidence { points, owners }
    }

    fn covers(&self) -> bool {
        self.owners.iter().all(|o| !o.is_empty())
    }

    /// Points lying over member `j` and no other member.
    fn private(&self, j: usize) -> impl Iterator<Item = &ProjPoint> + '_ {
        self.points
            .iter()
            .zip(&self.owners)
            .filter(move |(_, o)| o.as_slice() == [j])
            .map(|(p, _)| p)
    }
}

pub fn is_covering(c: &Covering) -> bool {
    Incidence::new(c).covers()
}

/// Independent check: every primitive `(x, y)` with `0 <= x, y < bound`
/// lies in some member. Membership is tested directly on vectors.
///
/// `bound` should be at least `lcm(C)`; every class of P1(Z/lcm) then has a
/// primitive representative in range.
pub fn is_covering_bruteforce(c: &Covering, bound: u64) -> bool {
    let b = bound.max(c.lcm) as i64;
    (0..b).all(|x| {
        (0..b).all(|y| x.gcd(&y) != 1 || c.lattices.iter().any(|l| contains_vector(l, (x, y))))
    })
}

/// Whether no member is contained in the union of the others.
pub fn is_irredundant(c: &Covering) -> Result<bool> {
    let inc = Incidence::new(c);
    if !inc.covers() {
        return Err(Error::NotCovering);
    }
    Ok((0..c.len()).all(|j| inc.private(j).next().is_some()))
}

/// Data deciding whether a member can be shrunk.
///
/// `s_size` counts transversal vectors lying only in `target`; `d` is the
/// gcd of `lcm(C)` with their wedges against one of them, and `replacement`
/// is the index-`d` lattice through them. `target` is minimal in the
/// covering iff `d == target.index()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityWitness {
    pub target: CocyclicLattice,
    pub s_size: usize,
    pub d: u64,
    pub replacement: CocyclicLattice,
}

impl MinimalityWitness {
    pub fn is_minimal(&self) -> bool {
        self.d == self.target.index()
    }
}

fn witness_from(inc: &Incidence, c: &Covering, j: usize) -> Result<MinimalityWitness> {
    let target = c.lattices[j];
    let s: Vec<Vector> = inc.private(j).map(coprime_rep).collect();
    let v = *s.first().ok_or_else(|| Error::Redundant(target.to_string()))?;
    let d = s.iter().fold(c.lcm as i64, |g, &w| g.gcd(&wedge(v, w))) as u64;
    let replacement = CocyclicLattice::containing(v, d)?;
    Ok(MinimalityWitness { target, s_size: s.len(), d, replacement })
}

/// Computes the shrink witness of member `l` in an irredundant covering.
pub fn minimality_witness(c: &Covering, l: &CocyclicLattice) -> Result<MinimalityWitness> {
    let j = c.lattices.binary_search(l).map_err(|_| Error::NotMember(l.to_string()))?;
    let inc = Incidence::new(c);
    if !inc.covers() {
        return Err(Error::NotCovering);
    }
    witness_from(&inc, c, j)
}

/// Covering, irredundant, and no member can be replaced by a proper sublattice.
pub fn is_minimal(c: &Covering) -> bool {
    let inc = Incidence::new(c);
    if !inc.covers() {
        return false;
    }
    (0..c.len()).all(|j| witness_from(&inc, c, j).is_ok_and(|w| w.is_minimal()))
}

/// Covering whose members are pairwise separated.
pub fn is_strongly_minimal(c: &Covering) -> bool {
    if !is_covering(c) {
        return false;
    }
    let ls = &c.lattices;
    ls.iter()
        .enumerate()
        .all(|(i, a)| ls[i + 1..].iter().all(|b| lattice::meet(a, b).is_separated()))
}

/// Covering with weight exactly 1; agrees with [`is_strongly_minimal`].
pub fn has_unit_weight(c: &Covering) -> bool {
    c.weight == Rational::one()
}

/// Shrinks non-minimal members one at a time (canonically least first)
/// until the covering is minimal. Size and lcm are unchanged.
pub fn minimise(c: &Covering) -> Result<Covering> {
    let mut current = c.clone();
    loop {
        let inc = Incidence::new(&current);
        if !inc.covers() {
            return Err(Error::NotCovering);
        }
        let mut step = None;
        for j in 0..current.len() {
            let w = witness_from(&inc, &current, j)?;
            if !w.is_minimal() {
                step = Some(w);
                break;
            }
        }
        match step {
            None => return Ok(current),
            Some(w) => current = current.replace(&w.target, [w.replacement])?,
        }
    }
}

/// Replaces member `l` by all its `q`-descendants.
pub fn p_refine(c: &Covering, l: &CocyclicLattice, q: u64) -> Result<Covering> {
    require_prime(q)?;
    if !c.contains(l) {
        return Err(Error::NotMember(l.to_string()));
    }
    c.replace(l, lattice::p_descendants(l, q)?)
}

/// How a covering arises from `{Z^2}` by prime refinements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementTree {
    Leaf(CocyclicLattice),
    Node {
        lattice: CocyclicLattice,
        prime: u64,
        children: Vec<RefinementTree>,
    },
}

impl RefinementTree {
    pub fn lattice(&self) -> &CocyclicLattice {
        match self {
            RefinementTree::Leaf(l) => l,
            RefinementTree::Node { lattice, .. } => lattice,
        }
    }

    pub fn index(&self) -> u64 {
        self.lattice().index()
    }

    pub fn leaves(&self) -> Vec<CocyclicLattice> {
        match self {
            RefinementTree::Leaf(l) => vec![*l],
            RefinementTree::Node { children, .. } => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// Checks the node arities and that each child is a descendant of its parent.
    pub fn is_well_formed(&self) -> bool {
        match self {
            RefinementTree::Leaf(_) => true,
            RefinementTree::Node { lattice, prime, children } => {
                let Ok(expected) = lattice::p_descendants(lattice, *prime) else {
                    return false;
                };
                let got: Vec<_> = children.iter().map(|c| *c.lattice()).collect();
                got == expected && children.iter().all(|c| c.is_well_formed())
            }
        }
    }
}

/// A refinement tree with root `Z^2` whose leaves are exactly `C`, if any.
///
/// Works top-down: the members under a node are those contained in it, and
/// a node can be split by a prime `q` only if `q` divides every member's
/// relative index. Each candidate prime is tried, smallest first, with
/// results memoized per node, so an empty answer is exhaustive.
pub fn refinement_structure(c: &Covering) -> Option<RefinementTree> {
    fn build(
        node: CocyclicLattice,
        members: &[CocyclicLattice],
        memo: &mut HashMap<CocyclicLattice, Option<RefinementTree>>,
    ) -> Option<RefinementTree> {
        if let Some(hit) = memo.get(&node) {
            return hit.clone();
        }
        let result = (|| {
            if members == [node] {
                return Some(RefinementTree::Leaf(node));
            }
            if members.is_empty() || members.contains(&node) {
                return None;
            }
            let rel = members.iter().fold(0u64, |g, l| g.gcd(&(l.index() / node.index())));
            for (q, _) in arith::factorize(rel).ok()?.entries().iter().copied() {
                let kids = lattice::p_descendants(&node, q).ok()?;
                let child_index = node.index() * q;
                let mut children = Vec::with_capacity(kids.len());
                for kid in kids {
                    let under: Vec<_> = members
                        .iter()
                        .copied()
                        .filter(|l| l.ancestor_unchecked(child_index) == kid)
                        .collect();
                    match build(kid, &under, memo) {
                        Some(t) => children.push(t),
                        None => break,
                    }
                }
                if children.len() as u64 == children_expected(node.index(), q) {
                    return Some(RefinementTree::Node { lattice: node, prime: q, children });
                }
            }
            None
        })();
        memo.insert(node, result.clone());
        result
    }

    fn children_expected(n: u64, q: u64) -> u64 {
        if n % q == 0 {
            q
        } else {
            q + 1
        }
    }

    let mut memo = HashMap::new();
    build(CocyclicLattice::full(), c.lattices(), &mut memo)
}

/// `C(v; p^e)`: starting from `{Z^2}`, `e` successive `p`-refinements, each
/// applied to the member containing `v`.
pub fn simpson_covering(v: Vector, p: u64, e: u32) -> Result<Covering> {
    if v.0.gcd(&v.1) != 1 {
        return Err(Error::NotPrimitive(v.0, v.1));
    }
    require_prime(p)?;
    if e == 0 {
        return Err(Error::Invalid("exponent must be at least 1".into()));
    }
    let mut c = Covering::trivial();
    for _ in 0..e {
        let target = *c
            .lattices()
            .iter()
            .find(|l| contains_vector(l, v))
            .expect("a covering contains every primitive vector");
        c = p_refine(&c, &target, p)?;
    }
    Ok(c)
}

/// The lower bound `#{L in C : index(L) does not divide D} >= 1 + G(N) - G(D)`
/// for an irredundant covering with `N = lcm(C)` and a proper divisor `D`.
pub fn simpson_bound_holds(c: &Covering, d: u64) -> Result<bool> {
    let n = c.lcm;
    if d == 0 || n % d != 0 || d == n {
        return Err(Error::Invalid(format!("{d} is not a proper divisor of lcm {n}")));
    }
    if !is_irredundant(c)? {
        return Err(Error::Redundant("covering".into()));
    }
    let count = c.lattices.iter().filter(|l| d % l.index() != 0).count() as i64;
    Ok(count >= 1 + arith::g_of(n) as i64 - arith::g_of(d) as i64)
}

/// Whether every member of `inner` is contained in some member of `outer`.
pub fn refines(inner: &Covering, outer: &Covering) -> bool {
    inner
        .lattices
        .iter()
        .all(|l| outer.lattices.iter().any(|o| contains_lattice(o, l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(c: i64, d: i64, n: u64) -> CocyclicLattice {
        CocyclicLattice::from_coords(c, d, n).unwrap()
    }

    fn cov(ls: &[(i64, i64, u64)]) -> Covering {
        Covering::new(ls.iter().map(|&(c, d, n)| lat(c, d, n))).unwrap()
    }

    fn min_not_strong() -> Covering {
        cov(&[(1, 0, 2), (1, 0, 3), (0, 1, 3), (1, 1, 6), (-1, 1, 6), (2, 1, 6), (-2, 1, 6)])
    }

    fn c6() -> Covering {
        cov(&[(0, 1, 2), (1, 0, 2), (0, 1, 3), (1, 1, 6), (5, 1, 6), (1, 3, 6)])
    }

    #[test]
    fn construction_dedups() {
        let c = Covering::new([lat(1, 1, 2), lat(3, 1, 2), lat(0, 1, 4)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.lcm(), 4);
        assert_eq!(c.weight(), Rational::new(1, 3) + Rational::new(1, 6));
        assert_eq!(Covering::new(Vec::new()), Err(Error::Empty));
    }

    #[test]
    fn covering_examples() {
        let l2 = Covering::full(2).unwrap();
        assert!(is_covering(&l2));
        assert!(!is_covering(&cov(&[(0, 1, 2), (1, 0, 2)])));
        assert!(is_covering(&min_not_strong()));
        assert!(is_covering_bruteforce(&l2, 2));
        assert!(is_covering_bruteforce(&Covering::trivial(), 1));
        assert!(!is_covering_bruteforce(&cov(&[(0, 1, 3), (1, 0, 3)]), 3));
    }

    #[test]
    fn irredundant_examples() {
        assert_eq!(is_irredundant(&Covering::full(2).unwrap()), Ok(true));
        let both = Covering::new(
            lattice::full_covering_lattices(2).into_iter().chain(lattice::full_covering_lattices(3)),
        )
        .unwrap();
        assert_eq!(both.len(), 7);
        assert_eq!(is_irredundant(&both), Ok(false));
        assert_eq!(is_irredundant(&min_not_strong()), Ok(true));
        assert_eq!(is_irredundant(&cov(&[(0, 1, 2)])), Err(Error::NotCovering));
    }

    #[test]
    fn witness_examples() {
        let l2 = Covering::full(2).unwrap();
        let w = minimality_witness(&l2, &lat(1, 1, 2)).unwrap();
        assert_eq!((w.d, w.replacement), (2, lat(1, 1, 2)));

        let w = minimality_witness(&c6(), &lat(0, 1, 3)).unwrap();
        assert_eq!(w.d, 6);
        assert_eq!(w.replacement, lat(3, 1, 6));
        assert!(!w.is_minimal());

        let w = minimality_witness(&min_not_strong(), &lat(1, 0, 2)).unwrap();
        assert_eq!(w.d, 2);
        assert!(w.s_size > 0);

        assert!(matches!(
            minimality_witness(&l2, &lat(1, 0, 3)),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn c6_private_points_bruteforce() {
        // S for L(0:1;3): primitive classes mod 6 that are (1,1) mod 2 and (0:1) mod 3.
        let c = c6();
        let target = lat(0, 1, 3);
        let others: Vec<_> = c.lattices().iter().filter(|l| **l != target).copied().collect();
        let mut s = Vec::new();
        for x in 0..6i64 {
            for y in 0..6i64 {
                if x.gcd(&y) != 1 || others.iter().any(|l| contains_vector(l, (x, y))) {
                    continue;
                }
                assert!(contains_vector(&target, (x, y)));
                assert!(x % 2 == 1 && y % 2 == 1 && x % 3 == 0);
                s.push((x, y));
            }
        }
        let v = s[0];
        let d = s.iter().fold(6i64, |g, &w| g.gcd(&wedge(v, w)));
        assert_eq!(d, 6);
        assert_eq!(CocyclicLattice::containing(v, 6).unwrap(), lat(3, 1, 6));
    }

    #[test]
    fn minimal_examples() {
        assert!(is_minimal(&Covering::full(3).unwrap()));
        assert!(!is_minimal(&c6()));
        let both = Covering::new(
            lattice::full_covering_lattices(2).into_iter().chain(lattice::full_covering_lattices(3)),
        )
        .unwrap();
        assert!(!is_minimal(&both));
        assert!(is_minimal(&min_not_strong()));
    }

    #[test]
    fn strongly_minimal_examples() {
        let l2 = Covering::full(2).unwrap();
        assert!(is_strongly_minimal(&l2) && has_unit_weight(&l2));
        assert!(!is_strongly_minimal(&min_not_strong()));
        assert!(!has_unit_weight(&min_not_strong()));
    }

    #[test]
    fn minimise_examples() {
        let l2 = Covering::full(2).unwrap();
        assert_eq!(minimise(&l2).unwrap(), l2);
        let m = minimise(&c6()).unwrap();
        let expected = cov(&[(0, 1, 2), (1, 0, 2), (3, 1, 6), (1, 1, 6), (5, 1, 6), (1, 3, 6)]);
        assert_eq!(m, expected);
        assert!(is_minimal(&m));
        assert_eq!(m.index_sequence(), vec![2, 2, 6, 6, 6, 6]);
        assert!(refines(&m, &c6()));
        assert_eq!(minimise(&min_not_strong()).unwrap(), min_not_strong());
    }

    #[test]
    fn refine_examples() {
        let l2 = p_refine(&Covering::trivial(), &CocyclicLattice::full(), 2).unwrap();
        assert_eq!(l2, Covering::full(2).unwrap());

        let r = p_refine(&l2, &lat(1, 0, 2), 3).unwrap();
        assert_eq!(r.index_sequence(), vec![2, 2, 6, 6, 6, 6]);
        assert!(is_strongly_minimal(&r));

        let r = p_refine(&l2, &lat(0, 1, 2), 2).unwrap();
        assert_eq!(r.index_sequence(), vec![2, 2, 4, 4]);

        assert!(matches!(p_refine(&l2, &lat(0, 1, 3), 2), Err(Error::NotMember(_))));
        assert_eq!(p_refine(&l2, &lat(0, 1, 2), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn worked_refinement_from_trivial() {
        // L(2), then (1:0)_2 replaced by its 3-descendants.
        let r = p_refine(&Covering::full(2).unwrap(), &lat(1, 0, 2), 3).unwrap();
        let expected = cov(&[(0, 1, 2), (3, 2, 6), (1, 4, 6), (1, 2, 6), (1, 0, 6), (1, 1, 2)]);
        assert_eq!(r, expected);
    }

    #[test]
    fn structure_examples() {
        let t = refinement_structure(&Covering::full(2).unwrap()).unwrap();
        match &t {
            RefinementTree::Node { lattice, prime, children } => {
                assert_eq!((lattice.index(), *prime), (1, 2));
                assert_eq!(children.iter().map(|c| c.index()).collect::<Vec<_>>(), vec![2, 2, 2]);
            }
            _ => panic!("expected a node"),
        }
        assert!(t.is_well_formed());
        assert!(refinement_structure(&min_not_strong()).is_none());
        assert!(refinement_structure(&Covering::trivial()).is_some());
    }

    #[test]
    fn simpson_examples() {
        assert_eq!(simpson_covering((0, 1), 2, 1).unwrap(), Covering::full(2).unwrap());
        let c = simpson_covering((0, 1), 2, 3).unwrap();
        assert_eq!(c.len() as u64, arith::g_of(8) + 1);
        assert!(c.contains(&CocyclicLattice::containing((0, 1), 8).unwrap()));
        let c = simpson_covering((1, 0), 3, 2).unwrap();
        assert_eq!(c.len() as u64, arith::g_of(9) + 1);
        assert_eq!(c.index_sequence(), vec![3, 3, 3, 9, 9, 9]);
        assert_eq!(simpson_covering((2, 4), 2, 1), Err(Error::NotPrimitive(2, 4)));
    }

    #[test]
    fn simpson_bound_examples() {
        assert_eq!(simpson_bound_holds(&Covering::full(2).unwrap(), 1), Ok(true));
        assert_eq!(simpson_bound_holds(&min_not_strong(), 1), Ok(true));
        assert!(simpson_bound_holds(&min_not_strong(), 6).is_err());
        assert!(simpson_bound_holds(&min_not_strong(), 4).is_err());
    }

    #[test]
    fn simpson_coverings_meet_bound_with_equality() {
        for p in [2u64, 3, 5] {
            for e in 1..=3u32 {
                for v in [(0, 1), (1, 0), (1, 1), (2, 3)] {
                    let c = simpson_covering(v, p, e).unwrap();
                    assert_eq!(c.len() as u64, arith::g_of(p.pow(e)) + 1);
                    assert_eq!(c.lcm(), p.pow(e));
                    assert!(is_strongly_minimal(&c));
                    assert!(c.contains(&CocyclicLattice::containing(v, p.pow(e)).unwrap()));
                }
            }
        }
    }
}
