//! Cocyclic sublattices of Z^2.
//!
//! `L(c:d; N) = { (x, y) : c*y == d*x (mod N) }` is determined by its index
//! `N` and the point `(c:d)_N`, so a lattice is stored as a [`ProjPoint`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{index_weight, is_prime, Rational};
use crate::error::{Error, Result};
use crate::projline::{self, coprime_rep, wedge, ProjPoint, Vector};

/// A cocyclic lattice of finite index in Z^2.
///
/// Ordered by index, then by the canonical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CocyclicLattice {
    point: ProjPoint,
}

/// JSON form `{"c": .., "d": .., "n": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub c: i64,
    pub d: i64,
    pub n: u64,
}

impl CocyclicLattice {
    pub fn new(point: ProjPoint) -> Self {
        CocyclicLattice { point }
    }

    /// `L(c:d; N)`.
    pub fn from_coords(c: i64, d: i64, n: u64) -> Result<Self> {
        Ok(Self::new(projline::normalize(c, d, n)?))
    }

    /// `L(v; N)`, the index-`N` cocyclic lattice containing `v`.
    pub fn containing(v: Vector, n: u64) -> Result<Self> {
        Self::from_coords(v.0, v.1, n)
    }

    /// Z^2 itself.
    pub fn full() -> Self {
        Self::new(ProjPoint::trivial())
    }

    pub fn index(&self) -> u64 {
        self.point.modulus()
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn record(&self) -> LatticeRecord {
        LatticeRecord { c: self.point.c() as i64, d: self.point.d() as i64, n: self.index() }
    }

    pub fn from_record(r: &LatticeRecord) -> Result<Self> {
        Self::from_coords(r.c, r.d, r.n)
    }

    /// The lattice of index `m` containing this one (`m` must divide the index).
    pub fn ancestor(&self, m: u64) -> Result<Self> {
        Ok(Self::new(projline::reduce(&self.point, m)?))
    }

    pub(crate) fn ancestor_unchecked(&self, m: u64) -> Self {
        Self::new(projline::reduce_unchecked(&self.point, m))
    }
}

impl fmt::Display for CocyclicLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.point.fmt(f)
    }
}

impl FromStr for CocyclicLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }
}

/// Result of intersecting two cocyclic lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeetResult {
    /// The intersection is cocyclic, of index `lcm` of the two indices.
    Cyclic(CocyclicLattice),
    /// No primitive vector lies in both.
    Separated,
}

impl MeetResult {
    pub fn is_separated(&self) -> bool {
        matches!(self, MeetResult::Separated)
    }
}

pub fn contains_vector(l: &CocyclicLattice, v: Vector) -> bool {
    let w = wedge(coprime_rep(&l.point), v);
    w.rem_euclid(l.index() as i64) == 0
}

/// A basis `{N(a, b), (c, d)}` with `ad - bc = 1`, as rows.
pub fn basis(l: &CocyclicLattice) -> [[i64; 2]; 2] {
    let (c, d) = coprime_rep(&l.point);
    let n = l.index() as i64;
    // x*d + y*c = 1  =>  a = x, b = -y
    let e = d.extended_gcd(&c);
    let (a, b) = if e.gcd == 1 { (e.x, -e.y) } else { (-e.x, e.y) };
    debug_assert_eq!(a * d - b * c, 1);
    [[n * a, n * b], [c, d]]
}

/// `inner <= outer` as lattices.
pub fn contains_lattice(outer: &CocyclicLattice, inner: &CocyclicLattice) -> bool {
    inner.index() % outer.index() == 0 && inner.ancestor_unchecked(outer.index()) == *outer
}

pub fn meet(l1: &CocyclicLattice, l2: &CocyclicLattice) -> MeetResult {
    match projline::crt_lift(&l1.point, &l2.point) {
        Some(p) => MeetResult::Cyclic(CocyclicLattice::new(p)),
        None => MeetResult::Separated,
    }
}

/// The smallest cocyclic lattice containing every input, all of one index.
pub fn join(ls: &[CocyclicLattice]) -> Result<CocyclicLattice> {
    let first = ls.first().ok_or(Error::Empty)?;
    let n = first.index();
    if let Some(other) = ls.iter().find(|l| l.index() != n) {
        return Err(Error::MixedIndices(n, other.index()));
    }
    let v1 = coprime_rep(&first.point);
    let m = ls
        .iter()
        .fold(n as i64, |g, l| g.gcd(&wedge(v1, coprime_rep(&l.point))));
    CocyclicLattice::containing(v1, m as u64)
}

/// The cocyclic sublattices of relative index `q` (`q` prime).
pub fn p_descendants(l: &CocyclicLattice, q: u64) -> Result<Vec<CocyclicLattice>> {
    Ok(projline::lifts(&l.point, q)?.into_iter().map(CocyclicLattice::new).collect())
}

pub fn weight(l: &CocyclicLattice) -> Rational {
    index_weight(l.index())
}

/// All `psi(N)` cocyclic lattices of index `N`.
pub fn full_covering_lattices(n: u64) -> Vec<CocyclicLattice> {
    projline::points(n).iter().copied().map(CocyclicLattice::new).collect()
}

pub(crate) fn require_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}
