//! Symmetric positive-definite matrix backend for the Hadamard manifold
//! interface.
//!
//! The space of `n × n` SPD matrices with the affine-invariant metric is a
//! Hadamard manifold whose geometry is fully explicit through symmetric
//! eigendecompositions: geodesics are congruence-conjugated matrix
//! exponentials, distances are log-spectra norms, and parallel transport is
//! a congruence. On top of the [`Manifold`](horo_manifold::Manifold)
//! implementation the crate provides horosphere evaluations for
//! directions-at-infinity with simple spectrum ([`busemann_flag`], exact via
//! a triangular factorization), a truncated-limit fallback for every other
//! direction ([`busemann_numeric`]), and the scatter-estimation kernels
//! ([`tyler_component`], [`det_normalize`]) whose objectives are sums of
//! horospherically convex terms.

mod busemann;
mod estimators;
mod linalg;
mod space;

pub use busemann::{busemann_flag, busemann_numeric, BusemannLimit, FlagDirection, FLAG_GAP};
pub use estimators::{det_normalize, tyler_component};
pub use space::{SpdSpace, SYM_TOL};
