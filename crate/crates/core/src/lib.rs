#![allow(clippy::needless_range_loop)]

//! Exact arithmetic for lattices that are modules over maximal orders in
//! imaginary quadratic fields and definite rational quaternion algebras.
//!
//! Everything is computed over the rationals: Gram matrices, determinants,
//! duals, sections, projections and shortest vectors. Hermite-type bounds
//! are handled as exact products of rational powers of primes.

pub mod algebra;
pub mod catalog;
pub mod corpus;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mordell;
pub mod num;
pub mod orders;
pub mod par;
pub mod powerproduct;
pub mod reduction;
pub mod sections;
pub mod verify;
pub mod zlattice;

pub use algebra::{AlgebraElement, AlgebraSpec};
pub use error::{Error, ParseError, Result};
pub use lattice::OLattice;
pub use num::Rational;
pub use orders::Order;
pub use par::Parallelism;
pub use powerproduct::PowerProduct;
pub use reduction::{EnumOptions, HermiteData};
