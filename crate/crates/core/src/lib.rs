//! Exact column-vector calculus for lattice polytopes.
//!
//! The crate computes support forms, lattice points and column vectors of
//! lattice polytopes, doubles polytopes along facets, evaluates elementary
//! automorphisms of polytopal semigroup algebras over pluggable rings and
//! checks the commutator and Steinberg relations they satisfy.
//!
//! The geometric layer is generic over an integer [`Scalar`]; the aliases
//! below fix the arbitrary-precision instantiation used by the CLI.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod columns;
pub mod doubling;
pub mod error;
pub mod format;
pub mod intlin;
pub mod polytope;
pub mod ring;
pub mod scalar;
pub mod steinberg;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision integer used by the default instantiation.
pub type Int = num_bigint::BigInt;

pub type IntMatrix = intlin::IntMatrix<Int>;
pub type LatticeBasisChange = intlin::LatticeBasisChange<Int>;
pub type Facet = polytope::Facet<Int>;
pub type Polytope = polytope::Polytope<Int>;
pub type NormalFan = polytope::NormalFan<Int>;
pub type ColumnVector = columns::ColumnVector<Int>;
pub type ColumnTable = columns::ColumnTable<Int>;
pub type CbMatrix = columns::CbMatrix<Int>;
pub type DoubledPolytope = doubling::DoubledPolytope<Int>;
pub type Spectrum = doubling::Spectrum<Int>;
