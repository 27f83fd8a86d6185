//! Border bases of Hankel kernels over exact fields.
//!
//! Given a truncated moment sequence `σ`, [`border::border_basis`] computes a
//! monomial basis of the quotient by the ideal of linear recurrence relations
//! of `σ`, pairwise orthogonal bases for the bilinear form `⟨p, q⟩_σ`, and the
//! border relations. Certified results give multiplication tables, normal
//! forms, and, through [`decomp`], the decomposition `σ_α = Σ ω_i ξ_i^α`.

pub mod apps;
pub mod bench;
pub mod border;
pub mod decomp;
pub mod error;
pub mod fields;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod moments;
pub mod polys;

pub use border::{border_basis, mult_matrices, BorderBasisResult, BorderOptions, MultTables};
pub use decomp::{decompose, Decomposition, Term};
pub use error::{Error, FieldError, Result};
pub use fields::{FieldSpec, FieldValue};
pub use moments::MomentSequence;
pub use polys::{Exponent, MonomialOrder, OrderKind, Polynomial};
