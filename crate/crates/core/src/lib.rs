//! Coverings of Z^2 by finitely many cocyclic sublattices.
//!
//! A cocyclic lattice of index `N` is `L(c:d; N) = {(x, y) : cy == dx mod N}`
//! for a point `(c:d)` of the projective line P1(Z/N). This crate decides
//! the covering, irredundancy, minimality and strong minimality of finite
//! collections of such lattices, builds prime refinements and recovers
//! refinement trees, and enumerates every minimal covering of a given size.
//!
//! ```
//! use latcover::{covering, Covering};
//!
//! let full = Covering::full(2).unwrap();
//! assert!(covering::is_strongly_minimal(&full));
//! ```

pub mod arith;
pub mod congruence;
pub mod covering;
pub mod enumerate;
pub mod error;
pub mod io;
pub mod lattice;
pub mod projline;

pub use arith::Rational;
pub use covering::{Covering, MinimalityWitness, RefinementTree};
pub use enumerate::{EnumerateOptions, EnumerationReport};
pub use error::{Error, Result};
pub use lattice::{CocyclicLattice, MeetResult};
pub use projline::{ProjPoint, Vector};
