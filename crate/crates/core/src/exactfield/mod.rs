//! Exact arithmetic in `F_p` and `F_{p^m}`.
//!
//! The algebraic closure of `F_p` is approximated by finite stages
//! `F_{p^M}`; the absolute Frobenius `x ↦ x^p` is the generator through
//! which the Galois group acts at every stage.

mod factor;
mod field;
mod tower;
mod unipoly;

pub use factor::{factor_univariate, is_irreducible, roots_in, Factorization};
pub(crate) use field::inv_mod as field_inv_mod;
pub use field::{is_prime, Fe, Field, FieldElement, MAX_EXT_DEGREE};
pub use tower::{make_ext_field, Embedding};
pub use unipoly::UniPoly;
