//! The Moreau envelope and proximal map of an h-convex function.
//!
//! The proximal map `prox_{λf}(x)` minimizes `z ↦ f(z) + d(x,z)²/(2λ)`,
//! which is `1/λ`-strongly geodesically convex regardless of `f`'s own
//! modulus, so the certified descent engine solves it with a computable
//! optimality gap. The envelope `f_λ(x) = f(prox) + d(x,prox)²/(2λ)`
//! smooths `f` from below without moving its infimum: it is h-convex,
//! `1/λ`-h-smooth, and its gradient `−log_x(prox)/λ` has norm
//! `d(x, prox)/λ` — the envelope trades kinks for a tunable smoothness
//! constant, which is exactly what the smoothed solvers need.

use crate::oracle::HOracle;
use horo_manifold::descent::{minimize_with_slack, ProxSolution};
use horo_manifold::error::{DescentError, GeometryError};
use horo_manifold::manifold::expect_backend;
use horo_manifold::{Manifold, Point, Tangent};

/// Solve the proximal subproblem `min_z f(z) + d(x,z)²/(2λ)` to certified
/// gap `tol`.
///
/// The returned solution's `value` is the Moreau envelope `f_λ(x)`, and
/// `cert_gap` bounds how far that value sits above the true envelope. The
/// objective's kink slack feeds the stopping certificate, so nonsmooth
/// components (a distance function at its pole) do not stall the
/// subproblem.
///
/// # Errors
///
/// [`DescentError`] with the best iterate when the certificate has not
/// fired within the engine's iteration budget.
///
/// # Panics
///
/// Panics if `lambda ≤ 0` or `tol ≤ 0`.
pub fn moreau_prox(
    m: &dyn Manifold,
    f: &dyn HOracle,
    x: &Point,
    lambda: f64,
    tol: f64,
) -> Result<ProxSolution, DescentError> {
    assert!(
        lambda > 0.0 && lambda.is_finite(),
        "envelope parameter must be positive and finite"
    );
    expect_backend(m.id(), x);
    let sigma = 1.0 / lambda;
    minimize_with_slack(
        m,
        &mut |z| {
            let (fv, fg) = f.eval(m, z);
            let d = m.dist(x, z);
            let mut g = fg;
            g.axpy(-sigma, &m.log(z, x));
            (fv + 0.5 * sigma * d * d, g, f.kink_slack(m, z))
        },
        sigma,
        x,
        tol,
    )
}

/// The Moreau envelope value `f_λ(x)`.
///
/// # Errors
///
/// [`DescentError`] when the proximal subproblem does not certify; its
/// `value` field still upper-bounds the envelope.
///
/// # Panics
///
/// Panics if `lambda ≤ 0` or `tol ≤ 0`.
pub fn moreau_value(
    m: &dyn Manifold,
    f: &dyn HOracle,
    x: &Point,
    lambda: f64,
    tol: f64,
) -> Result<f64, DescentError> {
    moreau_prox(m, f, x, lambda, tol).map(|s| s.value)
}

/// The Moreau envelope gradient `−log_x(prox_{λf}(x))/λ`.
///
/// # Errors
///
/// [`DescentError`] when the proximal subproblem does not certify.
///
/// # Panics
///
/// Panics if `lambda ≤ 0` or `tol ≤ 0`.
pub fn moreau_grad(
    m: &dyn Manifold,
    f: &dyn HOracle,
    x: &Point,
    lambda: f64,
    tol: f64,
) -> Result<Tangent, DescentError> {
    let sol = moreau_prox(m, f, x, lambda, tol)?;
    Ok(m.log(x, &sol.point).scale(-1.0 / lambda))
}

/// The Moreau envelope `f_λ` packaged as a first-order oracle.
///
/// Each evaluation solves the proximal subproblem to the configured
/// tolerance. If the subproblem's certificate fails to fire within the
/// engine budget, the oracle falls back to the best iterate found — its
/// value still upper-bounds the envelope — rather than aborting an outer
/// solve.
pub struct MoreauOracle {
    inner: Box<dyn HOracle>,
    lambda: f64,
    tol: f64,
}

impl MoreauOracle {
    /// Wrap `inner` in its envelope with parameter `lambda`, solving each
    /// proximal subproblem to certified gap `tol`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] when `lambda` or `tol` is not
    /// positive.
    pub fn new(inner: Box<dyn HOracle>, lambda: f64, tol: f64) -> Result<Self, GeometryError> {
        if lambda <= 0.0 || !lambda.is_finite() {
            return Err(GeometryError::OutOfRange(format!(
                "envelope parameter must be positive and finite, got {lambda}"
            )));
        }
        if tol <= 0.0 || tol.is_nan() {
            return Err(GeometryError::OutOfRange(format!(
                "subproblem tolerance must be positive, got {tol}"
            )));
        }
        Ok(MoreauOracle { inner, lambda, tol })
    }

    /// The envelope parameter `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl HOracle for MoreauOracle {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let sol = match moreau_prox(m, &*self.inner, x, self.lambda, self.tol) {
            Ok(sol) => sol,
            Err(e) => ProxSolution {
                point: e.best,
                value: e.value,
                grad_norm: e.grad_norm,
                cert_gap: e.cert_gap,
                iters: e.iters,
            },
        };
        let g = m.log(x, &sol.point).scale(-1.0 / self.lambda);
        (sol.value, g)
    }

    fn lipschitz(&self) -> Option<f64> {
        // The envelope never steepens: it keeps any Lipschitz bound the
        // underlying function satisfies.
        self.inner.lipschitz()
    }

    fn hsmooth(&self) -> Option<f64> {
        Some(1.0 / self.lambda)
    }
}
