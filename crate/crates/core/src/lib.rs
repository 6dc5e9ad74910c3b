//! Computational tools for the derived series of finite p-groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`field_linalg`]: exact linear algebra over a prime field.
//! - [`free_lie`]: the free Lie algebra on weighted generators, in the Lyndon basis.
//! - [`lie_nq`]: nilpotent quotients of finitely presented graded Lie algebras.
//! - [`pc_group`]: finite p-groups given by consistent power-commutator presentations.
//! - [`graded_bridge`]: graded Lie rings built from filtrations of concrete groups.
//! - [`bounds`]: closed-form order bounds and the case-by-case replay of the main bound.

pub mod bounds;
pub mod field_linalg;
pub mod free_lie;
pub mod graded_bridge;
pub mod lie_nq;
pub mod pc_group;
