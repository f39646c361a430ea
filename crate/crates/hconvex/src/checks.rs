//! Certification routines for h-convexity, h-smoothness, and the
//! supporting comparison inequalities.
//!
//! Each check evaluates an inequality that holds exactly in theory and
//! reports the signed residuals; a residual below a small negative
//! tolerance is a genuine violation (the function is not h-convex, the
//! claimed smoothness constant is too small, ...), while nonnegative
//! residuals up to rounding certify the property on the sampled pairs.
//! The residual lists are kept in the reports so callers can inspect how
//! tight each inequality sat, not just whether it held.

use crate::oracle::HOracle;
use crate::qfunction::QFunction;
use horo_manifold::error::GeometryError;
use horo_manifold::{Manifold, Point};

/// Relative tolerance for the sampled convexity and smoothness
/// certificates.
pub const CERT_TOL: f64 = 1e-8;

/// Absolute tolerance for the two comparison inequalities, whose operands
/// stay within a few orders of magnitude of one.
pub const COMPARISON_TOL: f64 = 1e-9;

/// Outcome of a sampled certificate: one residual per sample pair,
/// normalized so that `pass` means every residual cleared `−CERT_TOL`
/// after dividing by `1 + |f(x)|`.
#[derive(Debug, Clone)]
pub struct CertifyReport {
    /// Raw signed residuals, one per pair, theory-nonnegative.
    pub residuals: Vec<f64>,
    /// The smallest normalized residual across all pairs.
    pub worst: f64,
    /// All normalized residuals cleared `−CERT_TOL`.
    pub pass: bool,
}

impl CertifyReport {
    fn from_normalized(residuals: Vec<f64>, normalized: Vec<f64>) -> Self {
        let worst = normalized.iter().copied().fold(f64::INFINITY, f64::min);
        CertifyReport {
            residuals,
            worst,
            pass: worst >= -CERT_TOL,
        }
    }
}

/// Certify `mu`-strong h-convexity of `f` on sample pairs.
///
/// For each `(y, x)` the support model at `y` — the horofunction
/// `B_{y,∂f(y)}` when `mu = 0`, the quadratic `Q_{y,∂f(y)}^mu` otherwise —
/// must lower-bound the increment: the recorded residual is
/// `f(x) − f(y) − S_y(x)`.
///
/// # Errors
///
/// [`GeometryError::OutOfRange`] when `mu` is negative or non-finite.
pub fn certify_hconvex(
    m: &dyn Manifold,
    f: &dyn HOracle,
    pairs: &[(Point, Point)],
    mu: f64,
) -> Result<CertifyReport, GeometryError> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(GeometryError::OutOfRange(format!(
            "claimed modulus must be nonnegative and finite, got {mu}"
        )));
    }
    let mut residuals = Vec::with_capacity(pairs.len());
    let mut normalized = Vec::with_capacity(pairs.len());
    for (y, x) in pairs {
        let (fy, gy) = f.eval(m, y);
        let (fx, _) = f.eval(m, x);
        let support = if mu == 0.0 {
            m.busemann(y, &gy, x)
        } else {
            QFunction::new(m, y.clone(), gy, mu)?.value(m, x)
        };
        let r = fx - fy - support;
        residuals.push(r);
        normalized.push(r / (1.0 + fx.abs()));
    }
    Ok(CertifyReport::from_normalized(residuals, normalized))
}

/// Outcome of an h-smoothness certificate: the upper-model residuals and
/// the descent-step residuals, both theory-nonnegative.
#[derive(Debug, Clone)]
pub struct HSmoothReport {
    /// `Q_{y,∇f(y)}^L(x) − (f(x) − f(y))` per pair.
    pub upper: Vec<f64>,
    /// `f(y) − ‖∇f(y)‖²/(2L) − f(exp_y(−∇f(y)/L))` per pair's `y`.
    pub descent: Vec<f64>,
    /// The smallest normalized residual across both families.
    pub worst: f64,
    /// All normalized residuals cleared `−CERT_TOL`.
    pub pass: bool,
}

/// Certify `L`-h-smoothness of `f` on sample pairs.
///
/// Checks the quadratic model from *above* — `f(x) − f(y) ≤
/// Q_{y,∇f(y)}^L(x)` — and its standard consequence, guaranteed progress of
/// the curvature-blind gradient step: `f(exp_y(−∇f(y)/L)) ≤ f(y) −
/// ‖∇f(y)‖²/(2L)`.
///
/// # Errors
///
/// [`GeometryError::OutOfRange`] when `lip` is not positive.
pub fn certify_hsmooth(
    m: &dyn Manifold,
    f: &dyn HOracle,
    pairs: &[(Point, Point)],
    lip: f64,
) -> Result<HSmoothReport, GeometryError> {
    if lip <= 0.0 || !lip.is_finite() {
        return Err(GeometryError::OutOfRange(format!(
            "smoothness constant must be positive and finite, got {lip}"
        )));
    }
    let mut upper = Vec::with_capacity(pairs.len());
    let mut descent = Vec::with_capacity(pairs.len());
    let mut worst = f64::INFINITY;
    for (y, x) in pairs {
        let (fy, gy) = f.eval(m, y);
        let (fx, _) = f.eval(m, x);
        let gnorm = m.norm(&gy);
        let step = m.exp(y, &gy.scale(-1.0 / lip));
        let (fstep, _) = f.eval(m, &step);

        let model = QFunction::new(m, y.clone(), gy, lip)?.value(m, x);
        let ru = model - (fx - fy);
        upper.push(ru);
        worst = worst.min(ru / (1.0 + fx.abs()));

        let rd = fy - gnorm * gnorm / (2.0 * lip) - fstep;
        descent.push(rd);
        worst = worst.min(rd / (1.0 + fy.abs()));
    }
    Ok(HSmoothReport {
        upper,
        descent,
        worst,
        pass: worst >= -CERT_TOL,
    })
}

/// Residuals of the comparison ("law of cosines") inequalities relating
/// horofunctions, quadratic models, and distances; all are
/// theory-nonnegative.
#[derive(Debug, Clone)]
pub struct ComparisonResiduals {
    /// `B_{y,v}(x) + (L/2)·d(y,x)² − Q_{y,v}^L(x)`: the horofunction plus a
    /// full quadratic dominates the sharp model.
    pub busemann_upper: f64,
    /// `Q_{y,v}^μ(x) + ((L−μ)/2)·d(y,x)² − Q_{y,v}^L(x)`: a flatter model
    /// plus the modulus difference dominates the sharper one.
    pub model_upper: f64,
    /// `d(p,y)² + d(x,y)² + 2·B_{y,v}(x) − d(p,x)²` with `p = exp_y(−v)`:
    /// the horofunction absorbs the inner-product term of the Euclidean
    /// expansion of `d(p,x)²`.
    pub point_form: f64,
}

impl ComparisonResiduals {
    /// All residuals cleared `−COMPARISON_TOL`.
    pub fn pass(&self) -> bool {
        self.busemann_upper >= -COMPARISON_TOL
            && self.model_upper >= -COMPARISON_TOL
            && self.point_form >= -COMPARISON_TOL
    }
}

/// Evaluate the comparison inequalities at one configuration.
///
/// # Errors
///
/// [`GeometryError::OutOfRange`] when the moduli do not satisfy
/// `0 < mu ≤ lip`; [`GeometryError::InvalidTangent`] when `v` is not based
/// at `y`.
pub fn law_of_cosines_check(
    m: &dyn Manifold,
    y: &Point,
    v: &horo_manifold::Tangent,
    x: &Point,
    mu: f64,
    lip: f64,
) -> Result<ComparisonResiduals, GeometryError> {
    if mu <= 0.0 || !mu.is_finite() || mu > lip || !lip.is_finite() {
        return Err(GeometryError::OutOfRange(format!(
            "moduli must satisfy 0 < mu <= lip, got mu = {mu}, lip = {lip}"
        )));
    }
    let d = m.dist(y, x);
    let b = m.busemann(y, v, x);
    let q_lip = QFunction::new(m, y.clone(), v.clone(), lip)?.value(m, x);
    let q_mu = QFunction::new(m, y.clone(), v.clone(), mu)?.value(m, x);
    let p = m.exp(y, &v.scale(-1.0));
    let dpy = m.dist(&p, y);
    let dpx = m.dist(&p, x);
    Ok(ComparisonResiduals {
        busemann_upper: b + 0.5 * lip * d * d - q_lip,
        model_upper: q_mu + 0.5 * (lip - mu) * d * d - q_lip,
        point_form: dpy * dpy + d * d + 2.0 * b - dpx * dpx,
    })
}

/// Residual of the quadruple inequality
/// `B_{x',log_{x'}(x)}(y') + ½d(y,y')² + ½d(x,x')² − B_{x',log_{x'}(x)}(y)`,
/// theory-nonnegative on any Hadamard manifold.
///
/// This is the metric face of the cosine rule: perturbing both the
/// horofunction's query point and its defining segment costs at most half
/// the squared perturbation distances. With `x = x'` the horofunction has
/// zero scale and the residual collapses to `½d(y,y')² + ½d(x,x')² ≥ 0`.
pub fn quadruple_inequality_check(
    m: &dyn Manifold,
    x: &Point,
    xp: &Point,
    y: &Point,
    yp: &Point,
) -> f64 {
    let v = m.log(xp, x);
    let by = m.busemann(xp, &v, y);
    let byp = m.busemann(xp, &v, yp);
    let dyy = m.dist(y, yp);
    let dxx = m.dist(x, xp);
    byp + 0.5 * dyy * dyy + 0.5 * dxx * dxx - by
}
