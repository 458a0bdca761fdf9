//! Exact polynomial ideal computations for quasilength, content and
//! tight-closure experiments.

pub mod budget;
pub mod closure;
pub mod content;
pub mod error;
pub mod field;
pub mod groebner;
pub mod lab;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod quasilength;
pub mod quotient;
pub mod ring;

pub use error::{Error, Result};
pub use field::{Coeff, CoeffField};
pub use groebner::{GroebnerBasis, Ideal, IdealRelation, Membership};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::PolyRing;
