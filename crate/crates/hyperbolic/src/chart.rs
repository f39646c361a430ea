//! The Poincaré ball chart and its closed forms.
//!
//! The stereographic correspondence `z = xₛ/(1 + x₀)` identifies the
//! hyperboloid sheet with the open unit ball; a point at distance `t` from
//! the apex maps to radius `tanh(t/2)`. The ball radius saturates to 1 in
//! f64 near `t ≈ 36`; the round trip is `1e-9`-tight for `t ≲ 15` and
//! degrades like `ε·eᵗ` beyond (the gap `1 − ‖z‖²` absorbs all the
//! radial information) — the chart is a *visualization and
//! cross-checking* tool, while all optimization runs on hyperboloid
//! coordinates.
//!
//! The ball-model distance and Busemann formulas below are deliberately
//! independent of the hyperboloid kernels (different model, different
//! algebra), which makes them usable as test oracles.

use crate::space::HyperbolicSpace;
use horo_manifold::error::GeometryError;
use horo_manifold::numerics::stable_acosh;
use horo_manifold::{Manifold, Point};

/// Ball coordinates of a hyperboloid point: `z = xₛ/(1 + x₀)`.
///
/// # Panics
///
/// Panics if `x` is not a point of `space` (programmer error).
pub fn to_ball(space: &HyperbolicSpace, x: &Point) -> Vec<f64> {
    assert!(x.backend == space.id(), "point from a different backend");
    let denom = 1.0 + x.coords[0];
    x.coords[1..].iter().map(|&c| c / denom).collect()
}

/// Hyperboloid point for ball coordinates `z`, `‖z‖ < 1`.
///
/// # Errors
///
/// [`GeometryError::InvalidPoint`] if the dimension is wrong, an entry is
/// non-finite, or `‖z‖ ≥ 1` (including radii that saturated to 1 in f64).
pub fn from_ball(space: &HyperbolicSpace, z: &[f64]) -> Result<Point, GeometryError> {
    if z.len() != space.dim() {
        return Err(GeometryError::InvalidPoint(format!(
            "ball point in H^{} needs {} coordinates, got {}",
            space.dim(),
            space.dim(),
            z.len()
        )));
    }
    if !z.iter().all(|c| c.is_finite()) {
        return Err(GeometryError::InvalidPoint("non-finite coordinate".into()));
    }
    let r2: f64 = z.iter().map(|c| c * c).sum();
    if r2 >= 1.0 {
        return Err(GeometryError::InvalidPoint(format!(
            "ball radius {} ≥ 1",
            r2.sqrt()
        )));
    }
    let w = 1.0 - r2;
    let mut coords = Vec::with_capacity(space.dim() + 1);
    coords.push((1.0 + r2) / w);
    for &c in z {
        coords.push(2.0 * c / w);
    }
    space.new_point(coords)
}

/// Ball-model geodesic distance:
/// `acosh(1 + 2‖z − w‖² / ((1 − ‖z‖²)(1 − ‖w‖²)))`.
///
/// # Panics
///
/// Panics if either point lies outside the open ball.
pub fn ball_dist(z: &[f64], w: &[f64]) -> f64 {
    assert_eq!(z.len(), w.len(), "dimension mismatch");
    let nz: f64 = 1.0 - z.iter().map(|c| c * c).sum::<f64>();
    let nw: f64 = 1.0 - w.iter().map(|c| c * c).sum::<f64>();
    assert!(nz > 0.0 && nw > 0.0, "points must lie inside the open ball");
    let d2: f64 = z.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum();
    stable_acosh(1.0 + 2.0 * d2 / (nz * nw))
}

/// Unit-slope ball-model Busemann function for the boundary point `ζ`
/// (`‖ζ‖ = 1`), normalized to vanish at the ball center:
/// `B_ζ(z) = −ln((1 − ‖z‖²)/‖z − ζ‖²)`.
///
/// Decreases at unit rate toward `ζ` (its ideal point); for the anchored
/// convention of [`Manifold::busemann`] with anchor at the apex and slope
/// pointing *away from* `ζ`, the values agree.
///
/// # Panics
///
/// Panics if `‖ζ‖` is not 1 to within `1e-9` or `z` is outside the ball.
pub fn ball_busemann(zeta: &[f64], z: &[f64]) -> f64 {
    assert_eq!(zeta.len(), z.len(), "dimension mismatch");
    let nzeta: f64 = zeta.iter().map(|c| c * c).sum();
    assert!(
        (nzeta - 1.0).abs() <= 1e-9,
        "ζ must be a unit boundary direction, got ‖ζ‖² = {nzeta}"
    );
    let w: f64 = 1.0 - z.iter().map(|c| c * c).sum::<f64>();
    assert!(w > 0.0, "z must lie inside the open ball");
    let d2: f64 = z.iter().zip(zeta).map(|(a, b)| (a - b) * (a - b)).sum();
    d2.ln() - w.ln()
}
