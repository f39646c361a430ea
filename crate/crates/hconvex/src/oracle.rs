//! Objective oracles for horospherically convex optimization.
//!
//! Every objective this workspace optimizes is assembled from first-order
//! oracles: given a point, an oracle reports its value and one
//! h-subgradient, together with whatever regularity certificates it can
//! vouch for (a strong-convexity modulus, a Lipschitz bound, a smoothness
//! bound). The calculus rules — nonnegative scaling, pointwise suprema,
//! post-composition with increasing convex functions, and averaging —
//! preserve h-convexity, and the combinators here propagate the
//! certificates exactly as far as those rules allow and no further.

use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::{Manifold, Point, Tangent};

/// Two values within this relative tolerance are treated as tied when a
/// supremum selects its active branch, and a distance below it counts as
/// "at the kink" for the distance oracle.
pub const KINK_TOL: f64 = 1e-9;

/// A first-order oracle for a horospherically convex function.
///
/// `eval` returns the value and one h-subgradient. At points where the
/// function is differentiable the subgradient is the Riemannian gradient;
/// at kinks any selection is allowed, and [`HOracle::kink_slack`] reports
/// how large the subdifferential ball is there so that certificate-based
/// stopping rules can discount an unlucky selection.
pub trait HOracle {
    /// Value and h-subgradient at `x`.
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent);

    /// Certified strong h-convexity modulus (`0` for merely h-convex).
    fn mu(&self) -> f64 {
        0.0
    }

    /// A global Lipschitz bound, when one is certified.
    fn lipschitz(&self) -> Option<f64> {
        None
    }

    /// An h-smoothness bound, when one is certified.
    fn hsmooth(&self) -> Option<f64> {
        None
    }

    /// Radius of the subdifferential ball at `x` beyond the reported
    /// subgradient, measuring how much of the gradient norm at a kink is an
    /// artifact of the selection. Smooth oracles return `0`.
    fn kink_slack(&self, _m: &dyn Manifold, _x: &Point) -> f64 {
        0.0
    }
}

/// The horofunction `x ↦ B_{p,v}(x)` of the geodesic ray leaving `p` with
/// velocity `−v/‖v‖`, scaled by `‖v‖`.
///
/// This is the model h-convex function: affine along every geodesic into
/// its ideal point, `‖v‖`-Lipschitz, zero at `p`, with gradient `v` there.
/// A zero `v` yields the constant-zero function, the natural degenerate
/// member of the family (it is the scale-zero limit, and doubles as a valid
/// subgradient certificate for the distance function at its own minimizer).
pub struct ScaledBusemann {
    p: Point,
    v: Tangent,
    scale: f64,
}

impl ScaledBusemann {
    /// Build the oracle from an anchor and a (possibly zero) direction.
    ///
    /// # Errors
    ///
    /// [`GeometryError::InvalidTangent`] when `v` is not based at `p`.
    pub fn new(m: &dyn Manifold, p: Point, v: Tangent) -> Result<Self, GeometryError> {
        expect_backend(m.id(), &p);
        if v.base != p {
            return Err(GeometryError::InvalidTangent(
                "direction must be based at the anchor point".into(),
            ));
        }
        let scale = m.norm(&v);
        Ok(ScaledBusemann { p, v, scale })
    }

    /// The anchor point `p`.
    pub fn anchor(&self) -> &Point {
        &self.p
    }

    /// The scaled direction `v` (the gradient at the anchor).
    pub fn direction(&self) -> &Tangent {
        &self.v
    }

    /// `‖v‖`, the Lipschitz constant and uniform gradient norm.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Value at `x`.
    pub fn value(&self, m: &dyn Manifold, x: &Point) -> f64 {
        m.busemann(&self.p, &self.v, x)
    }

    /// Gradient at `x`; its norm is exactly `‖v‖` everywhere.
    pub fn grad(&self, m: &dyn Manifold, x: &Point) -> Tangent {
        m.busemann_grad(&self.p, &self.v, x)
    }
}

impl HOracle for ScaledBusemann {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        (self.value(m, x), self.grad(m, x))
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.scale)
    }

    fn hsmooth(&self) -> Option<f64> {
        // Affine along geodesics toward the ideal point: the quadratic
        // upper model holds with a vanishing curvature coefficient.
        Some(0.0)
    }
}

/// The distance function `x ↦ d(x, p)`.
///
/// H-convex and 1-Lipschitz, smooth away from `p`; at `p` the
/// subdifferential is the whole unit ball, which the oracle reports via a
/// kink slack of `1`.
pub struct DistanceTo {
    p: Point,
}

impl DistanceTo {
    /// Build the oracle for the distance to `p`.
    pub fn new(m: &dyn Manifold, p: Point) -> Self {
        expect_backend(m.id(), &p);
        DistanceTo { p }
    }

    /// The pole `p`.
    pub fn pole(&self) -> &Point {
        &self.p
    }
}

impl HOracle for DistanceTo {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let d = m.dist(x, &self.p);
        if d <= KINK_TOL {
            // At the kink the zero tangent is a valid selection (the
            // subdifferential is the whole unit ball).
            return (d, Tangent::zero(x));
        }
        let g = m.log(x, &self.p).scale(-1.0 / d);
        (d, g)
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(1.0)
    }

    fn kink_slack(&self, m: &dyn Manifold, x: &Point) -> f64 {
        if m.dist(x, &self.p) <= KINK_TOL {
            1.0
        } else {
            0.0
        }
    }
}

/// The scaled squared distance `x ↦ (c/2)·d(x, p)²`.
///
/// Strongly h-convex with modulus `c` and h-smooth with the same constant;
/// the gradient is `−c·log_x(p)`.
pub struct SqDistance {
    p: Point,
    coeff: f64,
}

impl SqDistance {
    /// Build the oracle `(coeff/2)·d(·, p)²`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] when `coeff` is not positive.
    pub fn new(m: &dyn Manifold, p: Point, coeff: f64) -> Result<Self, GeometryError> {
        expect_backend(m.id(), &p);
        if coeff <= 0.0 || !coeff.is_finite() {
            return Err(GeometryError::OutOfRange(format!(
                "squared-distance coefficient must be positive, got {coeff}"
            )));
        }
        Ok(SqDistance { p, coeff })
    }

    /// The center `p`.
    pub fn center(&self) -> &Point {
        &self.p
    }
}

impl HOracle for SqDistance {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let d = m.dist(x, &self.p);
        let g = m.log(x, &self.p).scale(-self.coeff);
        (0.5 * self.coeff * d * d, g)
    }

    fn mu(&self) -> f64 {
        self.coeff
    }

    fn hsmooth(&self) -> Option<f64> {
        Some(self.coeff)
    }
}

/// A nonnegative multiple `r·f` of another oracle.
///
/// Scaling by `r ≥ 0` multiplies the value, subgradient, strong-convexity
/// modulus, Lipschitz bound, smoothness bound, and kink slack alike.
pub struct ScaledOracle {
    inner: Box<dyn HOracle>,
    r: f64,
}

impl ScaledOracle {
    /// Build `r·f`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] when `r` is negative (that would leave
    /// the h-convex cone).
    pub fn new(inner: Box<dyn HOracle>, r: f64) -> Result<Self, GeometryError> {
        if r < 0.0 || !r.is_finite() {
            return Err(GeometryError::OutOfRange(format!(
                "scaling factor must be nonnegative, got {r}"
            )));
        }
        Ok(ScaledOracle { inner, r })
    }
}

impl HOracle for ScaledOracle {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let (f, g) = self.inner.eval(m, x);
        (self.r * f, g.scale(self.r))
    }

    fn mu(&self) -> f64 {
        self.r * self.inner.mu()
    }

    fn lipschitz(&self) -> Option<f64> {
        self.inner.lipschitz().map(|l| self.r * l)
    }

    fn hsmooth(&self) -> Option<f64> {
        self.inner.hsmooth().map(|l| self.r * l)
    }

    fn kink_slack(&self, m: &dyn Manifold, x: &Point) -> f64 {
        self.r * self.inner.kink_slack(m, x)
    }
}

/// The pointwise maximum of two oracles.
///
/// On a tie (values within [`KINK_TOL`] relatively) the *first* branch is
/// selected, so repeated evaluations are deterministic. The maximum keeps
/// the weaker strong-convexity modulus and the larger Lipschitz bound;
/// smoothness does not survive the maximum, so no bound is reported.
pub struct SupOracle {
    a: Box<dyn HOracle>,
    b: Box<dyn HOracle>,
}

impl SupOracle {
    /// Build `max(a, b)` with ties resolved toward `a`.
    pub fn new(a: Box<dyn HOracle>, b: Box<dyn HOracle>) -> Self {
        SupOracle { a, b }
    }

    fn tied(fa: f64, fb: f64) -> bool {
        (fa - fb).abs() <= KINK_TOL * (1.0 + fa.abs().max(fb.abs()))
    }
}

impl HOracle for SupOracle {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let (fa, ga) = self.a.eval(m, x);
        let (fb, gb) = self.b.eval(m, x);
        if fa >= fb || Self::tied(fa, fb) {
            (fa.max(fb), ga)
        } else {
            (fb, gb)
        }
    }

    fn mu(&self) -> f64 {
        self.a.mu().min(self.b.mu())
    }

    fn lipschitz(&self) -> Option<f64> {
        match (self.a.lipschitz(), self.b.lipschitz()) {
            (Some(la), Some(lb)) => Some(la.max(lb)),
            _ => None,
        }
    }

    fn kink_slack(&self, m: &dyn Manifold, x: &Point) -> f64 {
        let (fa, _) = self.a.eval(m, x);
        let (fb, _) = self.b.eval(m, x);
        let active = if fa >= fb || Self::tied(fa, fb) {
            self.a.kink_slack(m, x)
        } else {
            self.b.kink_slack(m, x)
        };
        if Self::tied(fa, fb) {
            // At a crossing the subdifferential is the convex hull of both
            // branches; the Lipschitz bounds cap how far a selection can sit
            // from the hull's far side.
            let spread = self.a.lipschitz().unwrap_or(0.0) + self.b.lipschitz().unwrap_or(0.0);
            active + spread
        } else {
            active
        }
    }
}

/// An increasing convex scalar function `g : ℝ → ℝ` given by value and a
/// subderivative, used to post-compose oracles.
pub trait ScalarGauge {
    /// `(g(t), g'(t))` with `g'(t) ≥ 0` a subderivative selection.
    fn eval(&self, t: f64) -> (f64, f64);
}

/// The power gauge `g(t) = max(t, 0)^q / q` for `q ≥ 1`.
///
/// Increasing and convex on all of ℝ; composing it with a 1-Lipschitz
/// h-convex function produces the standard family of growth-adjusted
/// objectives (for example `d(·,p)^q / q` from the distance).
pub struct PowerGauge {
    q: f64,
}

impl PowerGauge {
    /// Build `t ↦ max(t,0)^q / q`.
    ///
    /// # Errors
    ///
    /// [`GeometryError::OutOfRange`] when `q < 1` (convexity would fail).
    pub fn new(q: f64) -> Result<Self, GeometryError> {
        if q < 1.0 || !q.is_finite() {
            return Err(GeometryError::OutOfRange(format!(
                "power gauge exponent must be at least 1, got {q}"
            )));
        }
        Ok(PowerGauge { q })
    }
}

impl ScalarGauge for PowerGauge {
    fn eval(&self, t: f64) -> (f64, f64) {
        let t0 = t.max(0.0);
        // On the flat region the zero subderivative is the valid selection
        // (t0^{q-1} would evaluate 0⁰ = 1 at the kink when q = 1).
        let deriv = if t0 > 0.0 {
            t0.powf(self.q - 1.0)
        } else {
            0.0
        };
        (t0.powf(self.q) / self.q, deriv)
    }
}

/// The composition `g ∘ f` of an oracle with an increasing convex gauge.
///
/// The chain rule gives the subgradient `g'(f(x))·∂f(x)`; composition
/// preserves h-convexity but, in general, neither strong convexity nor
/// smoothness, so only a Lipschitz bound is propagated (and only when the
/// gauge derivative admits a global cap, which it does not here).
pub struct ComposedOracle {
    inner: Box<dyn HOracle>,
    gauge: Box<dyn ScalarGauge>,
}

impl ComposedOracle {
    /// Build `g ∘ f`.
    pub fn new(inner: Box<dyn HOracle>, gauge: Box<dyn ScalarGauge>) -> Self {
        ComposedOracle { inner, gauge }
    }
}

impl HOracle for ComposedOracle {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let (f, g) = self.inner.eval(m, x);
        let (gv, gd) = self.gauge.eval(f);
        (gv, g.scale(gd))
    }

    fn kink_slack(&self, m: &dyn Manifold, x: &Point) -> f64 {
        let (f, _) = self.inner.eval(m, x);
        let (_, gd) = self.gauge.eval(f);
        gd * self.inner.kink_slack(m, x)
    }
}

/// A uniformly weighted sum `f = (1/m)·Σ fᵢ` of component oracles.
///
/// The workhorse objective shape: Fréchet means, medians, and scatter
/// objectives are all uniform averages. Averaging preserves h-convexity;
/// the aggregate keeps the *smallest* component modulus (each component is
/// at least that strongly convex, so their mean is too, and no more can be
/// promised without inspecting cross terms) and the largest Lipschitz
/// bound.
pub struct SumObjective {
    components: Vec<Box<dyn HOracle>>,
}

impl SumObjective {
    /// Build the averaged objective.
    ///
    /// # Errors
    ///
    /// [`GeometryError::Degenerate`] when no components are given.
    pub fn new(components: Vec<Box<dyn HOracle>>) -> Result<Self, GeometryError> {
        if components.is_empty() {
            return Err(GeometryError::Degenerate(
                "averaged objective needs at least one component".into(),
            ));
        }
        Ok(SumObjective { components })
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// Whether the sum has no components (never true for a built value).
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The component oracles.
    pub fn components(&self) -> &[Box<dyn HOracle>] {
        &self.components
    }
}

impl HOracle for SumObjective {
    fn eval(&self, m: &dyn Manifold, x: &Point) -> (f64, Tangent) {
        let w = 1.0 / self.components.len() as f64;
        let mut value = 0.0;
        let mut grad = Tangent::zero(x);
        for c in &self.components {
            let (f, g) = c.eval(m, x);
            value += w * f;
            grad.axpy(w, &g);
        }
        (value, grad)
    }

    fn mu(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.mu())
            .fold(f64::INFINITY, f64::min)
    }

    fn lipschitz(&self) -> Option<f64> {
        self.components
            .iter()
            .map(|c| c.lipschitz())
            .try_fold(0.0_f64, |acc, l| l.map(|l| acc.max(l)))
    }

    fn kink_slack(&self, m: &dyn Manifold, x: &Point) -> f64 {
        let w = 1.0 / self.components.len() as f64;
        self.components.iter().map(|c| w * c.kink_slack(m, x)).sum()
    }
}
