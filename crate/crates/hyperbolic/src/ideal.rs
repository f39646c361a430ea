//! Ideal boundary points of the hyperboloid sheet.
//!
//! An ideal point is a ray of lightlike vectors; we store the
//! representative scaled so its time component is exactly 1, i.e.
//! `b = (1, ζ)` with `‖ζ‖ = 1`. Under the ball chart of [`crate::chart`]
//! the spatial part `ζ` *is* the boundary direction, which makes the two
//! views easy to cross-check.
//!
//! The unit-slope Busemann function attached to `b`,
//! `B_b(x) = ln(−⟨x, b⟩)`, vanishes at the chart apex, decreases at unit
//! rate toward `b`, and its Riemannian gradient `x + b/⟨x, b⟩` has unit
//! norm everywhere. This is the apex-anchored special case of
//! [`Manifold::busemann`]; anchored evaluations at other base points go
//! through the trait, which re-centers before taking logs.

use crate::minkowski::mdot_rescaled;
use crate::space::HyperbolicSpace;
use horo_manifold::error::GeometryError;
use horo_manifold::{Manifold, Point, Tangent};

/// A boundary-at-infinity point of `H^n`, stored as `(1, ζ)` with `‖ζ‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPoint {
    /// Ambient dimension `n` of the space this boundary point belongs to.
    pub n: usize,
    /// The full lightlike representative `(1, ζ)`, length `n + 1`.
    coords: Vec<f64>,
}

impl IdealPoint {
    /// Ideal point in the ball-boundary direction `ζ` (any nonzero vector;
    /// it is normalized internally).
    ///
    /// # Errors
    ///
    /// [`GeometryError::Degenerate`] if `ζ` is zero or non-finite,
    /// [`GeometryError::InvalidPoint`] if the dimension does not match.
    pub fn from_ball_direction(
        space: &HyperbolicSpace,
        zeta: &[f64],
    ) -> Result<Self, GeometryError> {
        if zeta.len() != space.dim() {
            return Err(GeometryError::InvalidPoint(format!(
                "boundary direction in H^{} needs {} coordinates, got {}",
                space.dim(),
                space.dim(),
                zeta.len()
            )));
        }
        if !zeta.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::Degenerate(
                "non-finite boundary direction".into(),
            ));
        }
        let norm = zeta.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(GeometryError::Degenerate(
                "zero vector has no boundary direction".into(),
            ));
        }
        let mut coords = Vec::with_capacity(zeta.len() + 1);
        coords.push(1.0);
        coords.extend(zeta.iter().map(|&c| c / norm));
        Ok(Self {
            n: space.dim(),
            coords,
        })
    }

    /// The endpoint at infinity of the geodesic ray `t ↦ exp_p(t·v)`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::Degenerate`] if `v` is (numerically) zero, or if
    /// the lightlike representative loses its time component to rounding.
    pub fn from_ray(
        space: &HyperbolicSpace,
        p: &Point,
        v: &Tangent,
    ) -> Result<Self, GeometryError> {
        space.validate_point(&p.coords)?;
        space.validate_tangent(p, &v.coords)?;
        let norm = space.norm(v);
        if norm <= 0.0 || !norm.is_finite() {
            return Err(GeometryError::Degenerate(
                "zero tangent has no ray endpoint".into(),
            ));
        }
        // The endpoint of the ray along +v is p + v̂, which is the ideal
        // anchor of the *reversed* slope in the anchored convention; the
        // space's kernel handles the far-field cancellation.
        let eta = space.busemann_ideal(p, &v.scale(-1.0), norm);
        let eta0 = eta[0];
        if !(eta0 > 0.0) || !eta0.is_finite() {
            return Err(GeometryError::Degenerate(format!(
                "ray endpoint degenerated (time component {eta0})"
            )));
        }
        let mut coords = vec![1.0];
        coords.extend(eta[1..].iter().map(|&c| c / eta0));
        // rounding in the division can leave ‖ζ‖ off 1 by a few ulps; re-align
        let zn = coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
        for c in &mut coords[1..] {
            *c /= zn;
        }
        Ok(Self {
            n: space.dim(),
            coords,
        })
    }

    /// The lightlike representative `(1, ζ)`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The boundary direction `ζ` in the ball chart.
    pub fn ball_direction(&self) -> &[f64] {
        &self.coords[1..]
    }

    /// Unit-slope Busemann value `ln(−⟨x, b⟩)`, zero at the chart apex and
    /// decreasing toward this ideal point.
    ///
    /// Accurate while `x` stays within the chart-supported range of the
    /// apex (`d ≲ 17`); anchored far-field evaluations belong to
    /// [`Manifold::busemann`].
    ///
    /// # Panics
    ///
    /// Panics if `x` belongs to a different backend.
    pub fn busemann_at(&self, space: &HyperbolicSpace, x: &Point) -> f64 {
        assert!(x.backend == space.id(), "point from a different backend");
        let m = mdot_rescaled(&x.coords, &self.coords);
        (-m).max(f64::MIN_POSITIVE).ln()
    }

    /// Riemannian gradient of [`Self::busemann_at`]: `x + b/⟨x, b⟩`,
    /// a unit tangent pointing *away from* this ideal point.
    ///
    /// # Panics
    ///
    /// Panics if `x` belongs to a different backend.
    pub fn busemann_grad_at(&self, space: &HyperbolicSpace, x: &Point) -> Tangent {
        assert!(x.backend == space.id(), "point from a different backend");
        let m = mdot_rescaled(&x.coords, &self.coords);
        let coords: Vec<f64> = x
            .coords
            .iter()
            .zip(&self.coords)
            .map(|(&xi, &bi)| xi + bi / m)
            .collect();
        Tangent::new(x, coords).with_hint(1.0)
    }
}
