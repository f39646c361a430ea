//! Horospherically convex calculus over Hadamard-manifold backends.
//!
//! Geodesic convexity supports a function by comparison along geodesics;
//! horospherical (h-) convexity strengthens the comparison to horoballs:
//! every point admits a subgradient whose *horofunction* — affine along all
//! geodesics into its ideal point — lower-bounds the function globally.
//! The strengthening buys curvature-independent guarantees: first-order
//! methods driven by h-subgradients converge at their Euclidean rates with
//! constants that never see a curvature bound.
//!
//! This crate supplies the calculus layer between the geometry backends and
//! the solvers:
//!
//! - [`oracle`]: the [`HOracle`](oracle::HOracle) interface (value,
//!   h-subgradient, regularity certificates) with the model oracles —
//!   scaled horofunctions, distances, squared distances — and the
//!   closure combinators (scaling, suprema, increasing convex
//!   post-composition, uniform averages).
//! - [`qfunction`]: the quadratic support model
//!   `Q_{y,v}^μ` of strong h-convexity, with a deep-shift evaluation path
//!   and the verification that it collapses onto the horofunction as
//!   `μ → 0`.
//! - [`checks`]: sampled certificates of h-convexity and h-smoothness,
//!   plus the comparison and quadruple inequalities that anchor them.
//! - [`moreau`]: the proximal map and Moreau envelope, built on the
//!   certified strongly-convex descent engine, including the envelope
//!   packaged back up as an oracle.

pub mod checks;
pub mod moreau;
pub mod oracle;
pub mod qfunction;

pub use checks::{
    certify_hconvex, certify_hsmooth, law_of_cosines_check, quadruple_inequality_check,
    CertifyReport, ComparisonResiduals, HSmoothReport,
};
pub use moreau::{moreau_grad, moreau_prox, moreau_value, MoreauOracle};
pub use oracle::{
    ComposedOracle, DistanceTo, HOracle, PowerGauge, ScalarGauge, ScaledBusemann, ScaledOracle,
    SqDistance, SumObjective, SupOracle,
};
pub use qfunction::{q_limit_check, QFunction, QLimitReport};
