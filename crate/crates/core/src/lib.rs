//! Exact laboratory for piercing finite families of axis-parallel rectangles
//! through a prescribed point set.
//!
//! The library works with *traces*: each rectangle is identified with the set
//! of candidate points it contains, and every quantity (piercing number tau,
//! packing number nu) is computed exactly on that finite set system. On top of
//! the solvers sit constructive piercing pipelines with certified size bounds
//! and verifiers that hunt for counterexamples to the bounds they rely on.
//!
//! All geometry is integer-exact. Coordinates are generic over a signed
//! integer scalar; the crate root fixes [`Coord`] = `i64` aliases for the
//! common case. Every comparison the geometry performs is order-based, so no
//! arithmetic on coordinates can overflow.

pub mod dinterval;
pub mod fixtures;
pub mod geom;
pub mod reduction;
pub mod solver;
pub mod trace;
pub mod verify;

mod bitset;

use std::fmt::Debug;
use std::hash::Hash;

/// Scalar trait for coordinates: signed primitive integers.
///
/// `f32`/`f64` are deliberately excluded; the solvers need total order and
/// exact equality on endpoints.
pub trait CoordNum:
    num_traits::PrimInt + num_traits::Signed + Hash + Debug + Send + Sync + 'static
{
}

impl<T> CoordNum for T where
    T: num_traits::PrimInt + num_traits::Signed + Hash + Debug + Send + Sync + 'static
{
}

/// Default concrete coordinate scalar.
pub type Coord = i64;

/// Largest coordinate value accepted from external input (fits in 63 signed
/// bits so that differences of any two accepted values fit in an `i64`).
pub const COORD_MAX: Coord = (1 << 62) - 1;
/// Smallest coordinate value accepted from external input.
pub const COORD_MIN: Coord = -(1 << 62);

pub type Point = geom::Point<Coord>;
pub type Rect = geom::Rect<Coord>;
pub type Instance = trace::Instance<Coord>;

/// Default node budget for the branch and bound solvers.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
