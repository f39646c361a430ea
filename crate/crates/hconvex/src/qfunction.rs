//! The quadratic upper model behind strong h-convexity.
//!
//! A function is `μ`-strongly h-convex when every point `y` and subgradient
//! `v` support it from below by
//!
//! `Q_{y,v}^μ(x) = −‖v‖²/(2μ) + (μ/2)·d(exp_y(−v/μ), x)²`,
//!
//! a squared-distance paraboloid centered at the shifted point
//! `y⁺⁺ = exp_y(−v/μ)`. The model is zero at `y` with gradient `v` there,
//! attains its minimum `−‖v‖²/(2μ)` at `y⁺⁺`, and sits above the
//! horofunction `B_{y,v}` everywhere, decreasing pointwise onto it as
//! `μ → 0`; it is the curvature-robust replacement for the Euclidean
//! expansion `⟨v, x−y⟩ + (μ/2)‖x−y‖²`.
//!
//! Evaluating the model verbatim walks a geodesic a distance `‖v‖/μ`, which
//! for small `μ` leaves the range either backend can represent. Deep models
//! are therefore evaluated through the horofunction they converge to: along
//! the support ray, `g(t) = d(γ(t), x)² − t²` tends to an affine function
//! `2·t·B̂ + C²` of the depth (`B̂` the unit-scale horofunction value), so a
//! single moderate-depth probe of `g` recovers the intercept `C²` and the
//! identity `Q = ‖v‖·B̂ + (μ/2)·C²` finishes the job. The probe depth where
//! the two branches meet keeps the handoff monotone in `μ`.

use crate::oracle::HOracle;
use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::{Manifold, Point, Tangent};

/// Deepest shifted point `exp_y(−v/μ)` materialized eagerly; beyond this
/// travel distance the model is evaluated through its horofunction limit.
pub const SHIFT_CAP: f64 = 20.0;

/// Direct evaluation is used while travel distance plus base-to-query
/// distance stays below this; past it, eigenvalue spreads on the
/// positive-definite backend approach the relative floor its factorizations
/// enforce, so the limit form takes over while both are still accurate.
pub const DIRECT_CAP: f64 = 15.0;

/// Relative tolerance on the final gap in [`q_limit_check`].
pub const LIMIT_TOL: f64 = 1e-3;

/// The quadratic model `Q_{y,v}^μ` for one support point, subgradient, and
/// modulus.
pub struct QFunction {
    y: Point,
    v: Tangent,
    mu: f64,
    scale: f64,
    ypp: Option<Point>,
}

impl QFunction {
    /// Build the model supported at `y` with subgradient `v` and modulus
    /// `mu`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] when `mu` is not positive;
    /// [`GeometryError::InvalidTangent`] when `v` is not based at `y`.
    pub fn new(m: &dyn Manifold, y: Point, v: Tangent, mu: f64) -> Result<Self, GeometryError> {
        expect_backend(m.id(), &y);
        if mu <= 0.0 || !mu.is_finite() {
            return Err(GeometryError::OutOfRange(format!(
                "strong convexity modulus must be positive and finite, got {mu}"
            )));
        }
        if v.base != y {
            return Err(GeometryError::InvalidTangent(
                "support subgradient must be based at the support point".into(),
            ));
        }
        let scale = m.norm(&v);
        let travel = scale / mu;
        let ypp = if travel <= SHIFT_CAP {
            Some(m.exp(&y, &v.scale(-1.0 / mu)))
        } else {
            None
        };
        Ok(QFunction {
            y,
            v,
            mu,
            scale,
            ypp,
        })
    }

    /// The support point `y`.
    pub fn support(&self) -> &Point {
        &self.y
    }

    /// The support subgradient `v` (the model's gradient at `y`).
    pub fn subgradient(&self) -> &Tangent {
        &self.v
    }

    /// The modulus `μ`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The minimizer `y⁺⁺ = exp_y(−v/μ)` when it is close enough to
    /// materialize; deep models (`‖v‖/μ` beyond [`SHIFT_CAP`]) return
    /// `None` and are evaluated through the horofunction limit instead.
    pub fn minimizer(&self) -> Option<&Point> {
        self.ypp.as_ref()
    }

    /// The model's minimum value `−‖v‖²/(2μ)`.
    pub fn min_value(&self) -> f64 {
        -self.scale * self.scale / (2.0 * self.mu)
    }

    /// Evaluate the model at `x`.
    pub fn value(&self, m: &dyn Manifold, x: &Point) -> f64 {
        expect_backend(m.id(), x);
        if self.scale == 0.0 {
            // Zero subgradient: the model is the plain paraboloid at y.
            let d = m.dist(&self.y, x);
            return 0.5 * self.mu * d * d;
        }
        let d0 = m.dist(&self.y, x);
        let travel = self.scale / self.mu;
        if let Some(ypp) = &self.ypp {
            if travel + d0 <= DIRECT_CAP {
                let d = m.dist(ypp, x);
                return self.min_value() + 0.5 * self.mu * d * d;
            }
        }
        // Limit form: read the affine tail of g(t) = d(γ(t), x)² − t² at a
        // probe depth t_s that is deep enough to be past the transient but
        // shallow enough for exact distances, then extend to depth ‖v‖/μ
        // through the slope 2·B̂.
        let b = m.busemann(&self.y, &self.v, x);
        let bhat = b / self.scale;
        let t_s = ((DIRECT_CAP - d0) * 0.7).clamp(1.0, 10.0);
        let probe = m.exp(&self.y, &self.v.scale(-t_s / self.scale));
        let dp = m.dist(&probe, x);
        let c2 = (dp * dp - t_s * t_s - 2.0 * t_s * bhat).max(0.0);
        b + 0.5 * self.mu * c2
    }

    /// Gradient of the model at `x`.
    ///
    /// Exact (`−μ·log_x(y⁺⁺)`) wherever `value` evaluates directly; for
    /// deep models it returns the horofunction gradient, which the model
    /// gradient approaches at rate `O(μ)`.
    pub fn grad(&self, m: &dyn Manifold, x: &Point) -> Tangent {
        expect_backend(m.id(), x);
        if self.scale == 0.0 {
            return m.log(x, &self.y).scale(-self.mu);
        }
        let d0 = m.dist(&self.y, x);
        let travel = self.scale / self.mu;
        if let Some(ypp) = &self.ypp {
            if travel + d0 <= DIRECT_CAP {
                return m.log(x, ypp).scale(-self.mu);
            }
        }
        m.busemann_grad(&self.y, &self.v, x)
    }
}

/// Outcome of [`q_limit_check`]: the per-modulus gaps `|Q^μ − B|`, whether
/// they decrease monotonically, and whether the final gap is below
/// [`LIMIT_TOL`] relative to the horofunction value.
#[derive(Debug, Clone)]
pub struct QLimitReport {
    /// The moduli probed, in the order given (decreasing).
    pub mus: Vec<f64>,
    /// `|Q^μ(x) − B(x)|` per modulus.
    pub gaps: Vec<f64>,
    /// The horofunction value `B_{y,v}(x)` being approached.
    pub busemann: f64,
    /// Gaps never increase (up to rounding) as `μ` decreases.
    pub monotone: bool,
    /// The last gap is at most `LIMIT_TOL·(1 + |B|)`.
    pub final_ok: bool,
    /// Both conditions hold.
    pub pass: bool,
}

/// Verify that the quadratic models collapse onto the horofunction as the
/// modulus vanishes: evaluates `Q_{y,v}^μ(x)` for each modulus in `mus`
/// (which must be positive and strictly decreasing) and compares against
/// `B_{y,v}(x)`.
///
/// # Errors
///
/// [`GeometryError::OutOfRange`] when the modulus sequence is empty, has a
/// nonpositive entry, or fails to decrease strictly.
pub fn q_limit_check(
    m: &dyn Manifold,
    y: &Point,
    v: &Tangent,
    x: &Point,
    mus: &[f64],
) -> Result<QLimitReport, GeometryError> {
    if mus.is_empty() {
        return Err(GeometryError::OutOfRange(
            "modulus sequence must be nonempty".into(),
        ));
    }
    for w in mus.windows(2) {
        if w[1] >= w[0] {
            return Err(GeometryError::OutOfRange(
                "modulus sequence must be strictly decreasing".into(),
            ));
        }
    }
    let last = mus[mus.len() - 1];
    if last <= 0.0 || !last.is_finite() {
        return Err(GeometryError::OutOfRange(
            "all moduli must be positive".into(),
        ));
    }

    let b = m.busemann(y, v, x);
    let mut gaps = Vec::with_capacity(mus.len());
    for &mu in mus {
        let q = QFunction::new(m, y.clone(), v.clone(), mu)?;
        gaps.push((q.value(m, x) - b).abs());
    }
    let slack = 1e-9 * (1.0 + b.abs());
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + slack);
    let final_ok = gaps[gaps.len() - 1] <= LIMIT_TOL * (1.0 + b.abs());
    Ok(QLimitReport {
        mus: mus.to_vec(),
        gaps,
        busemann: b,
        monotone,
        final_ok,
        pass: monotone && final_ok,
    })
}

/// The support model an oracle certifies at `y`: the horofunction
/// `B_{y,∂f(y)}` when the oracle's modulus is zero, the quadratic
/// `Q_{y,∂f(y)}^μ` otherwise. Shared by the convexity certifier and the
/// residual checks.
///
/// # Errors
///
/// Propagates model construction failures (these indicate a broken oracle,
/// for example a non-finite modulus).
pub fn support_value(
    m: &dyn Manifold,
    f: &dyn HOracle,
    y: &Point,
    x: &Point,
) -> Result<f64, GeometryError> {
    let (_, g) = f.eval(m, y);
    let mu = f.mu();
    if mu == 0.0 {
        Ok(m.busemann(y, &g, x))
    } else {
        Ok(QFunction::new(m, y.clone(), g, mu)?.value(m, x))
    }
}
