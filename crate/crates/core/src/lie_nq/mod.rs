//! Nilpotent quotients of finitely presented graded Lie algebras over F_p.

mod algebra;
mod presentation;
mod quotient;
mod search;

pub use algebra::{
    AlgebraSnapshot, BasisEntry, EvalError, GradedLieAlgebra, GradedSubspace, ProductEntry,
    StructureError,
};
pub use presentation::{LiePresentation, PresentationParseError};
pub use quotient::{nilpotent_quotient, NilpotentQuotient, NqError};
pub use search::{
    alpha_presentation, liedims_search, liedims_search_report, meets_dimension_conditions,
    SearchReport, ALPHA_BRACKETS,
};
