//! Exact computational-algebra workbench for adequacy analysis of modular
//! representations of small finite groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — exact GF(p^s) arithmetic and polynomials;
//! * [`linalg`] — dense matrices, rank/nullspace, minimal polynomials, and
//!   an incremental row-echelon span accumulator;
//! * [`groups`] — concrete finite groups enumerated breadth-first from
//!   generators, with subgroup/quotient/Sylow machinery;
//! * [`modrep`] — matrix representations over finite fields: induction,
//!   tensor/dual/adjoint, fixed spaces, averaging projectors, characters;
//! * [`cohomology`] — first cohomology via one-cocycle linear systems;
//! * [`adequacy`] — spanning criteria for matrix algebras, weak adequacy,
//!   coset obstructions, and the four-condition report;
//! * [`constructions`] — the counterexample families and scans (semidirect
//!   orbit characters, twisted wreath products, projective 2x2 groups);
//! * [`catalog`] — a fixed library of small test groups and modules.
//!
//! All arithmetic is exact; no floating point is used anywhere. Every search
//! that has a random component takes an explicit seed, and all scans resolve
//! ties by canonical (breadth-first discovery) order so results are
//! reproducible run to run and identical under any worker count.

pub mod adequacy;
pub mod catalog;
pub mod cohomology;
pub mod constructions;
pub mod error;
pub mod field;
pub mod groups;
pub mod linalg;
pub mod modrep;
pub mod par;

pub use error::{Error, Result};
