//! Exact-arithmetic toolkit for labeled rational polytopes.
//!
//! A labeled polytope is an intersection of rational half-spaces
//! `⟨x, v_i⟩ ≤ λ_i` whose integer normals carry facet labels through
//! `v_i = a_i·w_i` with `w_i` primitive. On top of an exact rational
//! LP/lattice core, the crate computes:
//!
//! - the shrinking procedure (stage times, frozen facet groups, dimension
//!   drops, redundancy events) and the centering translation ([`shrink`]);
//! - the decomposition of a centered polytope into monotone factors,
//!   machine-verified ([`decompose`]);
//! - reduction certificates presenting the polytope as a centered reduction
//!   of a product of weighted projective spaces ([`reduce`]);
//! - certified Gromov-width lower/upper bounds as exact rational
//!   coefficients of π ([`gromov`]).
//!
//! Everything is deterministic: fixed pivot rules, canonical normal forms,
//! lexicographic orderings. There is no floating point anywhere.

pub mod error;
pub mod rational;
pub mod linalg;
pub mod lp;
pub mod lattice;
pub mod polytope;
pub mod shrink;
pub mod decompose;
pub mod reduce;
pub mod gromov;
pub mod generator;
pub mod fixtures;

pub use error::{Error, Result};
