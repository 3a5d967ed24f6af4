//! Sparse multivariate polynomials over a [`crate::Field`] and a Gröbner
//! basis kernel: Buchberger with the Gebauer–Möller criteria, normal forms,
//! standard monomials and FGLM conversion to lex.

mod fglm;
mod groebner;
mod monomial;
mod parse;
mod poly;
mod ring;

pub use fglm::fglm;
pub use groebner::{buchberger, buchberger_with_budget, GroebnerBasis, StandardMonomials, DEFAULT_STEP_BUDGET};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::MPoly;
pub use ring::{PolyRing, TermOrder};
