//! Rigorous certification of covering relations and cone conditions on
//! central-hyperbolic sets.
//!
//! The crate verifies, with outward-rounded interval arithmetic, the
//! algebraic inequalities that force a normally hyperbolic-like invariant
//! manifold inside a compact bundle region: a self-covering relation
//! (topological expansion through the exit set, contraction away from the
//! entry set) plus cone conditions at an expansion rate `m > 1`, checked
//! from interval enclosures of the local-map derivatives. The
//! [`henon`] module applies the machinery to the rotating Henon map and
//! certifies an invariant circle for all perturbation sizes up to 1/2.
//!
//! The numeric kernel is generic over the scalar type through
//! [`scalar::IntervalScalar`]; the aliases below fix `f64`, which is what
//! the Henon application and the command-line tool use.
//!
//! A `holds`/`pass` outcome is always rigorous under the stated rounding
//! model; a failing outcome is advisory (the true quantity might still
//! satisfy the inequality with a tighter enclosure).

#![forbid(unsafe_code)]

pub mod atlas;
pub mod certificate;
pub mod cones;
pub mod covering;
pub mod error;
pub mod henon;
pub mod interval;
pub mod matrix;
pub mod scalar;

pub use error::{Error, Result};

/// `f64` interval, the concrete type used throughout the application.
pub type Interval = interval::Interval<f64>;
/// `f64` interval matrix.
pub type IntervalMatrix = matrix::IntervalMatrix<f64>;
/// `f64` block bounds.
pub type BlockBounds = matrix::BlockBounds<f64>;
/// `f64` derivative bounds.
pub type DerivativeBounds = cones::DerivativeBounds<f64>;
/// `f64` circle atlas.
pub type CircleAtlas = atlas::CircleAtlas<f64>;
/// Single-precision interval, for callers that want the narrow kernel.
pub type IntervalF32 = interval::Interval<f32>;
