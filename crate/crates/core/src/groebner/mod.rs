//! Reduced Gröbner bases and the ideal calculus built on them.

mod buchberger;
mod ideal;

pub use buchberger::{extend_basis, groebner_basis, normal_form};
pub use ideal::{GroebnerBasis, Ideal, IdealRelation, Membership};
