//! Scatter-estimation kernels on the SPD manifold.
//!
//! The shape-estimation objective is a sum of per-sample terms
//! `ln(xᵀ Σ⁻¹ x)`, each of which is horospherically convex in `Σ`; its
//! minimizers over the unit-determinant slice are the classical fixed-point
//! scatter estimates. This module provides the per-sample value/gradient
//! kernel and the determinant normalization that selects the slice
//! representative.

use crate::linalg::{to_mat, Eigh};
use crate::space::SpdSpace;
use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::{Manifold, Point, Tangent};
use nalgebra::{Cholesky, DVector};

/// Value and Riemannian gradient of `Σ ↦ ln(xᵀ Σ⁻¹ x)` at `sigma`.
///
/// The gradient is `−x xᵀ / (xᵀ Σ⁻¹ x)`, which has *unit* affine-invariant
/// norm at every `Σ` (the function is a Busemann function of the rank-one
/// direction spanned by `x`), so the returned tangent carries an exact norm
/// hint of `1`.
///
/// # Errors
///
/// [`GeometryError::Degenerate`] when `x = 0` (the objective is undefined);
/// [`GeometryError::InvalidPoint`] when `sigma` is not positive definite;
/// [`GeometryError::OutOfRange`] when `x` has the wrong length.
pub fn tyler_component(
    space: &SpdSpace,
    x: &[f64],
    sigma: &Point,
) -> Result<(f64, Tangent), GeometryError> {
    expect_backend(space.id(), sigma);
    let n = space.size();
    if x.len() != n {
        return Err(GeometryError::OutOfRange(format!(
            "sample has {} entries, expected {n}",
            x.len()
        )));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(GeometryError::OutOfRange("sample must be finite".into()));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(GeometryError::Degenerate(
            "zero sample has no shape information".into(),
        ));
    }
    let m = to_mat(n, &sigma.coords);
    let chol = Cholesky::new(m).ok_or_else(|| {
        GeometryError::InvalidPoint("scatter matrix is not positive definite".into())
    })?;
    let xv = DVector::from_column_slice(x);
    let q = xv.dot(&chol.solve(&xv));
    if !(q.is_finite() && q > 0.0) {
        return Err(GeometryError::InvalidPoint(format!(
            "quadratic form evaluated to {q}; scatter matrix is numerically singular"
        )));
    }
    let mut grad = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            grad.push(-x[i] * x[j] / q);
        }
    }
    Ok((q.ln(), Tangent::new(sigma, grad).with_hint(1.0)))
}

/// Scales a point to unit determinant: `P ↦ P / det(P)^{1/n}`.
///
/// Idempotent up to round-off, and the canonical representative of the
/// scale orbit `{c·P : c > 0}` along which shape objectives are flat.
///
/// # Panics
///
/// Panics if `p` belongs to a different backend or is not positive definite.
pub fn det_normalize(space: &SpdSpace, p: &Point) -> Point {
    expect_backend(space.id(), p);
    let n = space.size();
    let e = Eigh::new(&to_mat(n, &p.coords));
    e.require_pd("determinant normalization")
        .expect("point is positive definite");
    // log-domain determinant: exact scale even for widely spread spectra
    let mean_log: f64 = e.vals.iter().map(|v| v.ln()).sum::<f64>() / n as f64;
    let scale = (-mean_log).exp();
    Point {
        backend: p.backend,
        coords: p.coords.iter().map(|c| c * scale).collect(),
    }
}
