//! Hyperboloid-model backend for hyperbolic space `H^n`.
//!
//! Points live on the upper sheet `⟨x, x⟩ = −1`, `x₀ ≥ 1` of the Minkowski
//! quadric with bilinear form `⟨x, y⟩ = −x₀y₀ + Σ xᵢyᵢ`; tangent vectors
//! at `x` are ambient vectors with `⟨x, v⟩ = 0`. All closed forms
//! (distance, exponential, logarithm, parallel transport, Busemann
//! functions) are algebraic in this model, which is why it is the
//! production backend rather than the ball chart.
//!
//! # Dynamic range
//!
//! Coordinates grow like `e^t` with the distance `t` from the chart apex
//! `(1, 0, …, 0)`, so the implementation is explicitly regime-aware:
//!
//! * distances switch between a chordal form (nearby points), the direct
//!   `acosh` form, and a log-domain form once coordinate products would
//!   overflow — radii up to ~700 are supported when **one endpoint stays
//!   within ~20 of the apex**, the geometry all shipped workloads use;
//! * the exponential map splits into null directions `x ± v̂` scaled by
//!   `e^{±s}`, reconstructing catastrophically cancelled components from
//!   the exact pairing `⟨x + v̂, x − v̂⟩ = −2`, so far radial traversals
//!   are exact to rounding;
//! * tangents produced by the kernels carry their Riemannian norm as a
//!   side value ([`horo_manifold::Tangent::norm_hint`]), because at far
//!   base points the norm is no longer recoverable from coordinates.
//!
//! Pairs that are simultaneously far from the apex *and* from each other
//! condition like `ε·e^{2t}` in any fixed chart; such configurations are
//! outside the supported envelope and validation rejects what it can
//! detect.
//!
//! # Module map
//!
//! * [`minkowski`] — the bilinear form and scale-robust helpers;
//! * [`space`] — [`HyperbolicSpace`], the `Manifold` implementation;
//! * [`ideal`] — boundary points at infinity and apex-anchored Busemann
//!   closed forms;
//! * [`chart`] — the Poincaré ball chart, used for visualization and as
//!   an independent test oracle.

pub mod chart;
pub mod ideal;
pub mod minkowski;
pub mod space;

pub use ideal::IdealPoint;
pub use space::HyperbolicSpace;
