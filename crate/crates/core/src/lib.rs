//! Differential algebra over theta-monoids: jets, coherence conditions,
//! rank matroids and a small decision layer for ordered differential fields.

pub mod algebra;
pub mod codf;
pub mod coherence;
pub mod diffpoly;
pub mod jet;
pub mod matroid;
pub mod parse;
pub mod random;
pub mod series_models;
pub mod theta;

pub use algebra::{rat, AlgebraError, MultiPoly, Rational, RationalFunction, TruncatedSeries};
pub use diffpoly::{DiffPoly, DiffRational, DiffVar, PolyDerivation};
pub use theta::{Antichain, Theta, ThetaPartition};
