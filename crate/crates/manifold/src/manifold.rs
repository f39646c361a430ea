//! The backend-agnostic manifold interface.
//!
//! Every consumer above the backends (the h-convex calculus, the Fréchet
//! subproblem solvers, the optimization algorithms) is written against
//! `&dyn Manifold` plus the tagged [`Point`]/[`Tangent`] types, so the same
//! solver runs unchanged on hyperbolic space and on SPD matrices. Backends
//! are registered by name and dimension at the application layer.
//!
//! # Contract
//!
//! - All maps are for a complete, simply connected manifold of nonpositive
//!   curvature: `exp` is a global diffeomorphism, `log` its inverse, and
//!   `dist(x, y) = ‖log_x(y)‖`.
//! - `busemann(p, v, x)` is the scaled Busemann function with anchor `p` and
//!   slope `v`: the h-affine function vanishing at `p` whose Riemannian
//!   gradient is `v` at `p` and has norm `‖v‖` everywhere. It increases at
//!   rate `‖v‖` along `t ↦ exp_p(t·v/‖v‖)` and decreases toward its ideal
//!   point, which lies along `−v`; its sublevel sets are horoballs. `v = 0`
//!   gives the zero function.
//! - `frame(x)` returns a deterministic orthonormal basis of the tangent
//!   space at `x` (same input, same basis), used for finite differences,
//!   random directions, and chart constructions.
//! - Kernels panic when handed data from a different backend or other
//!   violations of documented preconditions (programmer error); everything
//!   that vets *external* data returns [`GeometryError`].

use crate::error::GeometryError;
use crate::point::{BackendId, Point, Tangent};

pub trait Manifold: Send + Sync {
    /// Identity of this backend instance (family + size parameter).
    fn id(&self) -> BackendId;

    /// Number of entries in a flat point coordinate vector.
    fn ambient_len(&self) -> usize {
        self.id().ambient_len()
    }

    /// Intrinsic dimension, equal to `frame(x).len()`.
    fn manifold_dim(&self) -> usize;

    /// Check that `coords` describe a valid point of this backend.
    ///
    /// # Errors
    ///
    /// [`GeometryError::InvalidPoint`] describing the first violated
    /// invariant (wrong length, non-finite entries, off the model surface,
    /// not positive definite, ...).
    fn validate_point(&self, coords: &[f64]) -> Result<(), GeometryError>;

    /// Check that `coords` describe a tangent vector at `base`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::InvalidTangent`] (wrong length, non-finite entries,
    /// violated tangency constraint) or [`GeometryError::BackendMismatch`]
    /// if `base` belongs to another backend.
    fn validate_tangent(&self, base: &Point, coords: &[f64]) -> Result<(), GeometryError>;

    /// Geodesic distance.
    fn dist(&self, x: &Point, y: &Point) -> f64;

    /// Riemannian inner product of two tangents based at the same point.
    ///
    /// # Panics
    ///
    /// Panics if `u` and `v` are not both based at `x`.
    fn inner(&self, x: &Point, u: &Tangent, v: &Tangent) -> f64;

    /// Exponential map: the point at `‖v‖` along the geodesic from `x`
    /// in direction `v`.
    ///
    /// # Panics
    ///
    /// Panics if `v` is not based at `x`.
    fn exp(&self, x: &Point, v: &Tangent) -> Point;

    /// Inverse exponential: the tangent at `x` pointing to `y` with
    /// `‖log_x(y)‖ = dist(x, y)`.
    fn log(&self, x: &Point, y: &Point) -> Tangent;

    /// Parallel transport of `v` along the geodesic from `v.base` to `to`.
    fn transport(&self, v: &Tangent, to: &Point) -> Tangent;

    /// Scaled Busemann function with anchor `p` and slope `v` (see the
    /// module docs for the sign convention), evaluated at `x`; returns `0`
    /// for every `x` when `v = 0`.
    fn busemann(&self, p: &Point, v: &Tangent, x: &Point) -> f64;

    /// Riemannian gradient at `x` of `busemann(p, v, ·)`; its norm is `‖v‖`
    /// (the zero vector when `v = 0`).
    fn busemann_grad(&self, p: &Point, v: &Tangent, x: &Point) -> Tangent;

    /// Deterministic orthonormal basis of the tangent space at `x`.
    fn frame(&self, x: &Point) -> Vec<Tangent>;

    // ------------------------------------------------------------------
    // Provided methods (backend-generic).
    // ------------------------------------------------------------------

    /// Riemannian norm of a tangent vector.
    fn norm(&self, v: &Tangent) -> f64 {
        self.inner(&v.base, v, v).max(0.0).sqrt()
    }

    /// The zero tangent vector at `x`.
    fn zero_tangent(&self, x: &Point) -> Tangent {
        Tangent::zero(x)
    }

    /// Validating point constructor.
    ///
    /// # Errors
    ///
    /// Propagates [`Manifold::validate_point`].
    fn new_point(&self, coords: Vec<f64>) -> Result<Point, GeometryError> {
        self.validate_point(&coords)?;
        Ok(Point {
            backend: self.id(),
            coords,
        })
    }

    /// Validating tangent constructor.
    ///
    /// # Errors
    ///
    /// Propagates [`Manifold::validate_tangent`].
    fn new_tangent(&self, base: &Point, coords: Vec<f64>) -> Result<Tangent, GeometryError> {
        self.validate_tangent(base, &coords)?;
        Ok(Tangent::new(base, coords))
    }

    /// The point `γ(t)` on the geodesic with `γ(0) = x`, `γ(1) = y`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] if `t ∉ [0, 1]`. (Extrapolation is
    /// deliberate enough to deserve an explicit `exp`/`log` composition at
    /// the call site.)
    fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point, GeometryError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeometryError::OutOfRange(format!(
                "geodesic parameter t = {t} outside [0, 1]"
            )));
        }
        if t == 0.0 {
            return Ok(x.clone());
        }
        if t == 1.0 {
            return Ok(y.clone());
        }
        Ok(self.exp(x, &self.log(x, y).scale(t)))
    }

    /// Metric projection onto the closed ball of radius `radius` around
    /// `center` (the identity for points already inside).
    fn project_ball(&self, center: &Point, radius: f64, x: &Point) -> Point {
        let d = self.dist(center, x);
        if d <= radius {
            x.clone()
        } else {
            self.exp(center, &self.log(center, x).scale(radius / d))
        }
    }

    /// Central finite-difference approximation of the Riemannian gradient of
    /// `f` at `x`, over the orthonormal frame. A test oracle: `O(h²)` error,
    /// `2·dim` evaluations of `f`.
    fn finite_diff_grad(&self, x: &Point, h: f64, f: &mut dyn FnMut(&Point) -> f64) -> Tangent {
        assert!(h > 0.0, "finite-difference step must be positive");
        let mut g = self.zero_tangent(x);
        for e in self.frame(x) {
            let fp = f(&self.exp(x, &e.scale(h)));
            let fm = f(&self.exp(x, &e.scale(-h)));
            g.axpy((fp - fm) / (2.0 * h), &e);
        }
        g
    }
}

/// Panic unless `p` belongs to backend `id`; shared precondition check for
/// backend kernels.
pub fn expect_backend(id: BackendId, p: &Point) {
    assert!(
        p.backend == id,
        "point from backend {} handed to backend {}",
        p.backend,
        id
    );
}
