//! Exact computer algebra for unimodular rows, Jacobson-radical arithmetic
//! and elementary / triangular-unipotent matrix factorizations.

pub mod cert;
pub mod error;
pub mod factor;
pub mod finite;
pub mod ideal;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod radical;
pub mod ring;
pub mod scalar;
pub mod suite;
pub mod unimodular;
pub mod word;

pub use error::{Error, Result};
pub use matrix::RingMatrix;
pub use poly::{Monomial, RingElement};
pub use ring::{Ring, RingDescriptor, RingKind};
pub use scalar::{BaseRing, Scalar};
pub use word::{Factor, FactorWord, Shape};
