//! Finite groups: concrete element shapes, BFS enumeration, and structural
//! machinery (orders, cosets, normal closures, O_p/O_{p'}, quotients, Sylow
//! subgroups, p-complements, p-solvability), plus an on-disk group cache.

mod cache;
mod element;
mod group;

pub use cache::{cache_key, load_or_build, CacheStatus};
pub use element::{GroupElement, ShapeDescriptor};
pub use group::{ComplementOutcome, FiniteGroup, QuotientCtx, DEFAULT_GROUP_CAP};
