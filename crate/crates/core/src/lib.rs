//! Finite-scale twisted Steinberg algebras and algebraic quasi-Cartan pairs.
//!
//! Everything here is finite and discrete: rings are explicit tables,
//! groupoids are finite, and every subset of a groupoid is a compact open
//! set. In that setting the correspondence between discrete `R`-twists and
//! quasi-Cartan pairs becomes a collection of exhaustive computations:
//!
//! * [`finring`]: finite commutative rings and linear solving over them.
//! * [`groupoid`]: finite groupoids, groups, isotropy, bisections.
//! * [`twist`]: 2-cocycles and explicit central extensions.
//! * [`steinberg`]: twisted convolution algebras and their diagonals.
//! * [`pairs`]: normalisers, conditional expectations, ADP/ACP/AQP.
//! * [`reconstruct`]: the ultrafilter groupoid, `Φ`, `â`, twist comparison.
//! * [`grouprings`]: twisted group rings, unit scans, unique products.

pub mod error;
pub mod finring;
pub mod fixtures;
pub mod groupoid;
pub mod grouprings;
pub mod pairs;
pub mod reconstruct;
pub mod steinberg;
pub mod twist;

pub use error::{Error, Result, Violation};
pub use finring::{Elem, FiniteRing};
pub use groupoid::{FiniteGroup, FiniteGroupoid};
pub use pairs::{AbstractAlgebra, Normaliser, Pair};
pub use steinberg::{AlgebraElement, SteinbergAlgebra};
pub use twist::{Cocycle, ExplicitTwist};

/// Default cap on the number of candidates any single enumeration may visit.
pub const DEFAULT_CAP: u64 = 1_000_000;
