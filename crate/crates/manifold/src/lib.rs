//! Core geometry layer for optimization on Hadamard manifolds.
//!
//! This crate defines the backend-agnostic vocabulary the rest of the
//! workspace is written against:
//!
//! - [`Manifold`]: an object-safe trait for Hadamard-manifold backends
//!   (exp/log maps, distances, parallel transport, Busemann functions,
//!   orthonormal frames). Concrete backends live in sibling crates and are
//!   selected at runtime through registries keyed by [`BackendId`].
//! - [`Point`] / [`Tangent`]: flat coordinate vectors tagged with the backend
//!   they belong to. Tangents carry their base point; linear combinations of
//!   tangents at the same base are performed coordinate-wise, which is exact
//!   for every backend in this workspace (tangent spaces embed linearly in
//!   the ambient coordinates).
//! - [`numerics`]: scale-robust scalar kernels (`acosh` near 1 and at huge
//!   arguments, `sinh x / x`, `x coth x`, `ln sinh`) shared by the backends.
//! - [`descent`]: the Armijo descent engine used by every strongly
//!   geodesically convex subproblem (Fréchet means, proximal points), with a
//!   gradient-norm optimality certificate.
//! - [`sampling`]: deterministic seed-addressed random constructions for
//!   tests, demos, and instance generators.
//!
//! # Conventions
//!
//! - `busemann(p, v, x)` is the *scaled* Busemann function with anchor `p`
//!   and slope `v`: zero at `p`, gradient `v` at `p` (norm `‖v‖`
//!   everywhere), increasing along `v` and decreasing toward its ideal
//!   point, which lies in direction `−v`. `v = 0` yields the zero function.
//! - Distances are geodesic distances for each backend's canonical metric.
//! - Validation entry points (`validate_point`, `new_point`, deserialization)
//!   return [`GeometryError`]; the geometry kernels themselves (`dist`,
//!   `exp`, `log`, ...) treat malformed input as programmer error and panic,
//!   matching the convention of the numeric crates this workspace builds on.

pub mod descent;
pub mod error;
pub mod manifold;
pub mod numerics;
pub mod point;
pub mod sampling;

pub use error::{DescentError, GeometryError};
pub use manifold::Manifold;
pub use point::{BackendId, BackendKind, Point, Tangent};
