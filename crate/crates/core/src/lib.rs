//! Exact computer algebra for first-order Melnikov functions near elementary
//! and nilpotent centers of planar polynomial Hamiltonian systems.
//!
//! Everything here is `no_std` + `alloc`; file formats, the command line and
//! floating-point cross-checks live in the `melnikov-kit` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bigfloat;
pub mod bipoly;
pub mod cyclicity;
pub mod error;
pub mod gamma;
pub mod gcd;
pub mod interval;
pub mod melnikov;
pub mod mixed;
pub mod normal_form;
pub mod parse;
pub mod poly;
pub mod radical;
pub mod ratfunc;
pub mod series;
pub mod univariate;

pub use error::{Error, Result};
pub use mixed::GammaRad;

pub use poly::{Monomial, Poly, Var, Q};
pub use radical::RadExpr;
pub use ratfunc::RatFunc;
