//! Exact computation of Weil restrictions of affine schemes along finite
//! algebras over prime fields, together with the Frobenius (Galois) sets of
//! geometric points and connected components on both sides of the
//! comparison `π₀(Res_{A/k} X) ≅ ∏_s π₀(X_s)`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the companion `resweil` crate.
//!
//! Layout:
//! - [`exactfield`]: `F_p`, `F_{p^m}`, univariate factorization, Frobenius.
//! - [`multipoly`]: sparse multivariate polynomials and Gröbner bases.
//! - [`finalg`]: finite algebras, local decomposition, étaleness.
//! - [`weilres`]: restriction by basis expansion and its structural checks.
//! - [`gammaset`]: Frobenius sets, fibers, twisted products, isomorphisms.
//! - [`verify`]: end-to-end comparison pipelines with explicit witnesses.

#![no_std]

extern crate alloc;

mod error;
pub mod exactfield;
pub mod finalg;
pub mod gammaset;
pub mod linalg;
pub mod multipoly;
pub mod verify;
pub mod weilres;

pub use error::{Error, Result};
pub use exactfield::{Embedding, Fe, Field, UniPoly};
pub use finalg::{
    decompose_local, etale_check, product_algebra, AlgebraHom, AlgebraPresentation, EtaleCertificate, FiniteAlgebra,
    LocalFactor, ProductAlgebra,
};
pub use gammaset::{
    fiber, gamma_iso, geometric_points, pi0_points, product_gamma_set, reduction_map, EquivariantMap, GammaSet,
    GeometricPoint, ProductGammaSet,
};
pub use multipoly::{GroebnerBasis, MPoly, Monomial, PolyRing, TermOrder};
pub use verify::{verify_lemma_local, verify_theorem, Check, LemmaOutcome, TheoremOutcome};
pub use weilres::{
    adjunction_check, enumerate_points, is_empty, open_cover_check, product_formula_check, weil_restrict,
    RestrictedScheme, SchemePresentation,
};

/// Default seed for the randomized splitting steps of factorization and
/// idempotent search. Results never depend on it, only running time does.
pub const DEFAULT_SEED: u64 = 42;
