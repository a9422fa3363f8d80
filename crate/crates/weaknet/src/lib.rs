//! Weak epsilon-nets for finite point sets in R^d with respect to convex ranges.
//!
//! The library is organized in layers. `scalar` and `lp` provide exact rational
//! arithmetic with floating-point filtering and a small dense simplex solver.
//! `geom` builds the predicate layer on top (orientation, hull membership,
//! vertical-line intercepts, general-position perturbation). `arrangement`,
//! `partition`, and `selection` implement the combinatorial machinery
//! (hyperplane arrangements with bottom-vertex triangulation and cuttings,
//! low-crossing simplicial partitions, selection points and line families).
//! `net` assembles the full net construction pipeline, and `oracle` contains
//! the brute-force verifiers and instance generators that everything is tested
//! against.
//!
//! All randomness flows through explicit `u64` seeds; two runs with the same
//! seed and schedule produce identical output byte for byte.

pub mod scalar;
pub mod lp;
pub mod geom;
pub mod fileio;
pub mod util;
pub mod schedule;
pub mod ranges;
pub mod arrangement;
pub mod partition;
pub mod selection;
pub mod net;
pub mod oracle;


pub use geom::{Hyperplane, Point, Simplex, VerticalLine};
pub use scalar::{Rat, Sign};
