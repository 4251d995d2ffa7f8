//! Exact computer algebra for the complex Clifford algebra in dimension 4p:
//! Witt bases and spinor spaces, symplectic cells with their projectors,
//! quaternionic structures and Spin elements, bivector Lie algebras, and the
//! hermitian and quaternionic Dirac operators on Clifford-valued polynomials.

pub mod error;
pub mod scalar;
pub mod clifford;
pub mod linalg;
pub mod witt;
pub mod cells;
pub mod groups;
pub mod lie;
pub mod dirac;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{FieldElement, Rational};
pub use clifford::{Blade, Multivector};
pub use linalg::Matrix;
