//! Exact computations for periodic Floer homology and cylindrical Heegaard
//! Floer homology in the Morse model of an admissible link on a surface.
//!
//! The crate is generic over the ordered field used for areas and actions
//! (see [`Scalar`]); [`Rational`] is the default and every identity in the
//! test-suite is decided with it exactly. The discriminant winding oracle in
//! [`symprod`] is the only floating point code.

pub mod closed_open;
pub mod complex;
pub mod geometry;
pub mod index;
pub mod lattice;
pub mod morse;
pub mod scalar;
pub mod symprod;

use thiserror::Error;

pub use num_rational::BigRational as ExactRational;
pub use scalar::Scalar;

/// Rationals with 64-bit numerator and denominator.
pub type Rational = num_rational::Ratio<i64>;

pub type RationalModel = geometry::SurfaceLinkModel<Rational>;
pub type RationalHamiltonian = geometry::MorseHamiltonian<Rational>;
pub type RationalComplex = complex::FilteredComplex<Rational>;
pub type RationalGenerator = complex::FloerGenerator<Rational>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Index(#[from] index::IndexError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    ClosedOpen(#[from] closed_open::ClosedOpenError),
    #[error(transparent)]
    Symprod(#[from] symprod::SymprodError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
