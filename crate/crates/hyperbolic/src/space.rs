//! Hyperbolic space `H^n` in the hyperboloid model.
//!
//! Points are ambient vectors `x = (x₀, x₁, ..., xₙ)` on the upper sheet
//! `⟨x, x⟩ = −1`, `x₀ > 0` of the Minkowski quadric; the metric is the
//! restriction of the ambient form. A point at distance `t` from the chart
//! apex `(1, 0, ..., 0)` has coordinates of size `e^t`, so every kernel here
//! is branched by scale:
//!
//! - `dist` uses a chordal form for near pairs, the direct Minkowski product
//!   mid-range, and a factored log-domain form when the product would
//!   overflow;
//! - `exp` uses the null-ray split `exp_x(s v̂) = (e^s/2)(x + v̂) +
//!   (e^{−s}/2)(x − v̂)` and reconstructs a split that cancels below rounding
//!   from the dual-pairing identity, which makes radial traversals of the
//!   apex region exact at any representable scale;
//! - `log` uses the scalar form `(d/sinh d)·y − (d·coth d)·x`, which is
//!   algebraically tangent at `x` and never forms overflowing products;
//! - points are re-projected onto the sheet only while the sheet residual is
//!   measurable (`x₀ ≤ 10⁶`); beyond that projection would inject radial
//!   error far larger than the drift it removes.
//!
//! Two far-apart points that are both far from the apex *and* nearly on the
//! same ray through it have distances below the information content of their
//! coordinates (any method sees `O(ε e^{2t})` noise); the workloads in this
//! workspace keep one end of every distance near the apex, where everything
//! is well-conditioned.

use crate::minkowski::{dual_null, max_abs, mdot, mdot_rescaled, sheet_residual, CANCEL_FLUSH_REL};
use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::numerics::{ln_sinh, stable_acosh, x_coth_x};
use horo_manifold::{BackendId, BackendKind, Manifold, Point, Tangent};
use std::f64::consts::LN_2;

/// Maximum sheet residual (relative, see [`sheet_residual`]) accepted by
/// point validation.
pub const SHEET_TOL: f64 = 1e-10;

/// Maximum relative tangency defect accepted by tangent validation.
pub const TANGENT_TOL: f64 = 1e-10;

/// `H^n` in the hyperboloid model.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicSpace {
    n: usize,
}

impl HyperbolicSpace {
    /// Hyperbolic space of dimension `n ≥ 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "hyperbolic space needs dimension ≥ 1, got {n}");
        HyperbolicSpace { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The chart apex `(1, 0, ..., 0)` — the canonical origin.
    pub fn origin(&self) -> Point {
        let mut coords = vec![0.0; self.n + 1];
        coords[0] = 1.0;
        Point {
            backend: self.id(),
            coords,
        }
    }

    /// Ambient coordinates of the ideal endpoint of the ray from `p` along
    /// `−v̂` (the ideal point of the Busemann function with slope `v`),
    /// normalized so `−⟨p, η⟩ = 1`. That is `η = p − v̂`, with the
    /// cancellation-flush reconstruction when `p` is far out and `v̂` points
    /// radially outward.
    pub(crate) fn busemann_ideal(&self, p: &Point, v: &Tangent, norm_v: f64) -> Vec<f64> {
        let inv = 1.0 / norm_v;
        let len = self.n + 1;
        let mut eta = Vec::with_capacity(len);
        let mut opp = Vec::with_capacity(len);
        for i in 0..len {
            let vh = v.coords[i] * inv;
            eta.push(p.coords[i] - vh);
            opp.push(p.coords[i] + vh);
        }
        let scale = max_abs(&p.coords).max(max_abs(&eta));
        if max_abs(&eta) <= CANCEL_FLUSH_REL * scale {
            eta = dual_null(&opp);
        }
        eta
    }

    fn point_from(&self, coords: Vec<f64>) -> Point {
        Point {
            backend: self.id(),
            coords,
        }
    }
}

impl Manifold for HyperbolicSpace {
    fn id(&self) -> BackendId {
        BackendId::new(BackendKind::Hyperbolic, self.n)
    }

    fn manifold_dim(&self) -> usize {
        self.n
    }

    fn validate_point(&self, coords: &[f64]) -> Result<(), GeometryError> {
        if coords.len() != self.n + 1 {
            return Err(GeometryError::InvalidPoint(format!(
                "hyperboloid point in H^{} needs {} coordinates, got {}",
                self.n,
                self.n + 1,
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::InvalidPoint(
                "non-finite coordinate".into(),
            ));
        }
        if coords[0] < 1.0 {
            return Err(GeometryError::InvalidPoint(format!(
                "time coordinate {} below 1 (not on the upper sheet)",
                coords[0]
            )));
        }
        let r = sheet_residual(coords);
        if r > SHEET_TOL {
            return Err(GeometryError::InvalidPoint(format!(
                "sheet residual {r:.3e} exceeds tolerance {SHEET_TOL:.0e}"
            )));
        }
        Ok(())
    }

    fn validate_tangent(&self, base: &Point, coords: &[f64]) -> Result<(), GeometryError> {
        if base.backend != self.id() {
            return Err(GeometryError::BackendMismatch {
                expected: self.id(),
                got: base.backend,
            });
        }
        if coords.len() != self.n + 1 {
            return Err(GeometryError::InvalidTangent(format!(
                "tangent in H^{} needs {} coordinates, got {}",
                self.n,
                self.n + 1,
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::InvalidTangent(
                "non-finite coordinate".into(),
            ));
        }
        let defect = mdot_rescaled(&base.coords, coords).abs();
        let tol = TANGENT_TOL * (1.0 + max_abs(&base.coords) * max_abs(coords));
        if defect > tol {
            return Err(GeometryError::InvalidTangent(format!(
                "tangency defect {defect:.3e} exceeds tolerance {tol:.3e}"
            )));
        }
        Ok(())
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        expect_backend(self.id(), x);
        expect_backend(self.id(), y);
        let (xc, yc) = (&x.coords, &y.coords);
        if xc == yc {
            return 0.0;
        }
        // Polar split. Writing each point as radius t from the apex plus a
        // unit spatial direction, the law of cosines becomes
        //   cosh d − 1 = 2·sinh²(Δt/2) + sinh(t_x)·sinh(t_y)·½‖u − v‖²,
        // a sum of nonnegative terms: no cancellation at any scale, unlike
        // the naive −⟨x, y⟩, which close pairs of far points reduce to
        // rounding noise. Each term is assembled in the log domain, so
        // coordinate scales up to the f64 limit never overflow. The split
        // still carries the model's irreducible ε·eᵗ angular resolution —
        // nothing recovers below that floor from stored coordinates.
        let tx = stable_acosh(xc[0]);
        let ty = stable_acosh(yc[0]);
        let half_dt = 0.5 * (tx - ty).abs();
        let ln_a = if half_dt > 0.0 {
            LN_2 + 2.0 * ln_sinh(half_dt)
        } else {
            f64::NEG_INFINITY
        };
        let nx = spatial_norm(xc);
        let ny = spatial_norm(yc);
        let mut h = 0.0;
        if nx > 0.0 && ny > 0.0 {
            for i in 1..xc.len() {
                let du = xc[i] / nx - yc[i] / ny;
                h += du * du;
            }
            h *= 0.5;
        }
        let ln_b = if h > 0.0 && tx > 0.0 && ty > 0.0 {
            ln_sinh(tx) + ln_sinh(ty) + h.ln()
        } else {
            f64::NEG_INFINITY
        };
        let ln_q = log_add_exp(ln_a, ln_b);
        if ln_q == f64::NEG_INFINITY {
            0.0
        } else if ln_q > 60.0 {
            // acosh(1 + q) = ln 2 + ln q up to 1/q — far below rounding here
            LN_2 + ln_q
        } else {
            let q = ln_q.exp();
            (q + (q * (q + 2.0)).sqrt()).ln_1p()
        }
    }

    fn inner(&self, x: &Point, u: &Tangent, v: &Tangent) -> f64 {
        assert!(
            u.base == *x && v.base == *x,
            "inner product of tangents based away from x"
        );
        mdot_rescaled(&u.coords, &v.coords)
    }

    fn norm(&self, v: &Tangent) -> f64 {
        if let Some(h) = v.norm_hint {
            return h;
        }
        mdot_rescaled(&v.coords, &v.coords).max(0.0).sqrt()
    }

    /// # Panics
    ///
    /// Panics (beyond the base-point contract) if the step would leave the
    /// representable coordinate range (`‖v‖ + d(apex, x) ≳ 709`); span-scale
    /// moves should go through [`Manifold::geodesic_point`], which works in
    /// the log domain.
    fn exp(&self, x: &Point, v: &Tangent) -> Point {
        expect_backend(self.id(), x);
        assert!(v.base == *x, "tangent based away from x");
        let s = self.norm(v);
        assert!(s.is_finite(), "tangent norm is not finite");
        if s == 0.0 {
            return x.clone();
        }
        let inv = 1.0 / s;
        let len = self.n + 1;
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        for i in 0..len {
            let vh = v.coords[i] * inv;
            a.push(x.coords[i] + vh);
            b.push(x.coords[i] - vh);
        }
        let scale = max_abs(&x.coords);
        if max_abs(&a) <= CANCEL_FLUSH_REL * scale {
            a = dual_null(&b);
        } else if max_abs(&b) <= CANCEL_FLUSH_REL * scale {
            b = dual_null(&a);
        }
        let (ep, em) = (0.5 * s.exp(), 0.5 * (-s).exp());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(ep * a[i] + em * b[i]);
        }
        assert!(
            out[0].is_finite(),
            "hyperbolic exp overflow: step {s:.3e} from coordinate scale {:.3e}",
            x.coords[0]
        );
        // No sheet re-projection: the output's quadric residual stays at
        // rounding level *relative to the coordinate scale*, which point
        // validation accepts. An ε-level defect in the input tangent shows
        // up in the raw quadric value amplified by e^{2s}, but displaced
        // along a near-null direction that leaves all measured distances
        // intact — rescaling by the measured value would convert that
        // harmless defect into a genuine radial error of half its size.
        self.point_from(out)
    }

    fn log(&self, x: &Point, y: &Point) -> Tangent {
        let d = self.dist(x, y);
        if d < 1e-12 {
            // below this separation the direction is noise; the zero tangent
            // keeps downstream steps exact
            return Tangent::zero(x);
        }
        let c1 = if d > 700.0 {
            2.0 * d * (-d).exp() // d/sinh d, where sinh would overflow
        } else {
            d / d.sinh()
        };
        let c2 = x_coth_x(d);
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(&xi, &yi)| c1 * yi - c2 * xi)
            .collect();
        Tangent::new(x, coords).with_hint(d)
    }

    fn transport(&self, v: &Tangent, to: &Point) -> Tangent {
        expect_backend(self.id(), to);
        let x = &v.base;
        if x == to {
            return v.clone();
        }
        // Γ(v) = v + ⟨y, v⟩/(1 + cosh d) · (x + y), cosh d = −⟨x, y⟩
        let m = -mdot_rescaled(&x.coords, &to.coords);
        let k = mdot_rescaled(&to.coords, &v.coords) / (1.0 + m);
        let coords = v
            .coords
            .iter()
            .zip(x.coords.iter().zip(&to.coords))
            .map(|(&vi, (&xi, &yi))| vi + k * (xi + yi))
            .collect();
        let mut out = Tangent::new(to, coords);
        out.norm_hint = v.norm_hint; // transport is an isometry
        out
    }

    fn busemann(&self, p: &Point, v: &Tangent, x: &Point) -> f64 {
        expect_backend(self.id(), x);
        assert!(v.base == *p, "slope tangent based away from the anchor");
        let s = self.norm(v);
        if s == 0.0 {
            return 0.0;
        }
        let eta = self.busemann_ideal(p, v, s);
        s * horosphere_log(&eta, &x.coords)
    }

    fn busemann_grad(&self, p: &Point, v: &Tangent, x: &Point) -> Tangent {
        expect_backend(self.id(), x);
        assert!(v.base == *p, "slope tangent based away from the anchor");
        let s = self.norm(v);
        if s == 0.0 {
            return Tangent::zero(x);
        }
        let eta = self.busemann_ideal(p, v, s);
        // Same regime split as the value path: the direct pairing while it
        // is well-conditioned (self-consistent near the anchor), otherwise
        // −⟨x, η⟩ = η₀·x₀·val with the stable polar `val`, grouping
        // (x₀·val) first to keep the product in range whenever one end of
        // the configuration is near the apex.
        let md_direct = mdot_rescaled(&x.coords, &eta);
        let gate = DIRECT_GATE * x.coords[0] * max_abs(&eta);
        let md = if md_direct.is_finite() && gate.is_finite() && -md_direct > gate {
            md_direct
        } else {
            -(x.coords[0] * horosphere_val(&eta, &x.coords)) * eta[0]
        };
        let coords = x
            .coords
            .iter()
            .zip(&eta)
            .map(|(&xi, &ei)| s * (xi + ei / md))
            .collect();
        Tangent::new(x, coords).with_hint(s)
    }

    fn frame(&self, x: &Point) -> Vec<Tangent> {
        expect_backend(self.id(), x);
        let len = self.n + 1;
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(self.n);
        for i in 1..len {
            // project the canonical eᵢ onto the tangent space:
            // w = eᵢ + ⟨x, eᵢ⟩·x (the projector is w ↦ w + ⟨x, w⟩x)
            let mut w = vec![0.0; len];
            w[i] = 1.0;
            let c = x.coords[i];
            for (wj, &xj) in w.iter_mut().zip(&x.coords) {
                *wj += c * xj;
            }
            for b in &basis {
                let ip = mdot(&w, b);
                for (wj, &bj) in w.iter_mut().zip(b) {
                    *wj -= ip * bj;
                }
            }
            let nw = mdot(&w, &w).max(0.0).sqrt();
            assert!(
                nw > 1e-8,
                "tangent frame degenerated at coordinate scale {:.3e} \
                 (frames are supported near the chart apex)",
                x.coords[0]
            );
            for wj in w.iter_mut() {
                *wj /= nw;
            }
            basis.push(w);
        }
        basis
            .into_iter()
            .map(|w| Tangent::new(x, w).with_hint(1.0))
            .collect()
    }

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
        let d = self.dist(x, y);
        if d < 1e-12 {
            return Ok(x.clone());
        }
        // sinh-interpolation with log-domain weights: stable even when the
        // endpoints' scales differ by hundreds of e-foldings
        let (da, db) = ((1.0 - t) * d, t * d);
        if da <= 0.0 {
            return Ok(y.clone());
        }
        if db <= 0.0 {
            return Ok(x.clone());
        }
        let lsd = ln_sinh(d);
        let wx = (ln_sinh(da) - lsd).exp();
        let wy = (ln_sinh(db) - lsd).exp();
        let out: Vec<f64> = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(&xi, &yi)| wx * xi + wy * yi)
            .collect();
        Ok(self.point_from(out))
    }
}

/// `ln(eᵃ + eᵇ)` without leaving the log domain.
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Radial/angular split of a horosphere evaluation `−⟨x, η⟩` for a
/// lightlike `η` with `η₀ > 0`. Returns `(t, h, e2)` with `t = d(apex, x)`,
/// `h = ½‖u − ω‖²` the angular gap between the unit spatial direction of
/// `x` and the ideal direction `ω = ηₛ/η₀`, and `e2 = e^{−2t}`; then
/// `−⟨x, η⟩ = η₀ · cosh t · val` with `val = h + (1 − h)·(1 − tanh t)`.
///
/// Every term is nonnegative, so the split stays accurate at coordinate
/// scales where the direct bilinear form has cancelled to noise. An `h`
/// below the `ε²` angular resolution of the coordinates is snapped to 0
/// (the point is on the ray into the ideal point as far as f64 can tell),
/// which keeps on-ray evaluations exact at any supported radius.
fn horosphere_parts(eta: &[f64], xc: &[f64]) -> (f64, f64, f64) {
    let tx = stable_acosh(xc[0]);
    let nx = spatial_norm(xc);
    let h = if nx == 0.0 {
        0.0 // at the apex val = 1 regardless of direction
    } else {
        let mut acc = 0.0;
        for i in 1..xc.len() {
            let du = xc[i] / nx - eta[i] / eta[0];
            acc += du * du;
        }
        let h = 0.5 * acc;
        if h < 64.0 * (f64::EPSILON * f64::EPSILON) {
            0.0
        } else {
            h
        }
    };
    (tx, h, (-2.0 * tx).exp())
}

/// The factor `val = −⟨x, η⟩ / (η₀ · x₀)`, clamped positive. Underflows
/// for on-ray points beyond `t ≈ 354`; callers needing the value that far
/// out use [`horosphere_log`].
fn horosphere_val(eta: &[f64], xc: &[f64]) -> f64 {
    let (_tx, h, e2) = horosphere_parts(eta, xc);
    let g = 2.0 * e2 / (1.0 + e2);
    (h + (1.0 - h) * g).max(f64::MIN_POSITIVE)
}

/// Fraction of the natural product scale `x₀·max|η|` below which the
/// direct bilinear form has lost too many digits to cancellation and the
/// polar split takes over. At the gate the direct form still carries
/// ~`n·ε/10⁻³ ≈ 10⁻¹²` relative error, comfortably inside every stated
/// tolerance.
const DIRECT_GATE: f64 = 1e-3;

/// `ln(−⟨x, η⟩)`.
///
/// Two regimes. While the product is a healthy fraction of its natural
/// scale, the direct bilinear form is used: it is *self-consistent* with
/// how `η = p − v̂` was assembled, so anchored evaluations cancel to
/// rounding level even when the anchor sits far from the apex (the polar
/// split would re-derive the angular relationship through unit vectors
/// and pick up the slope's normalization defect amplified by `e^{t_p}`).
/// Once cancellation erodes the direct product — evaluation points deep
/// on the ideal side — the polar split takes over, staying in the log
/// domain on the on-ray branch so the result is exact far beyond where
/// `e^{−2t}` underflows.
fn horosphere_log(eta: &[f64], xc: &[f64]) -> f64 {
    let m = -mdot_rescaled(eta, xc);
    let gate = DIRECT_GATE * xc[0] * max_abs(eta);
    if m.is_finite() && gate.is_finite() && m > gate {
        return m.ln();
    }
    let (tx, h, e2) = horosphere_parts(eta, xc);
    let base = eta[0].ln() + ln_cosh_from(tx, xc[0]);
    if h == 0.0 {
        base + LN_2 - 2.0 * tx - e2.ln_1p()
    } else {
        let g = 2.0 * e2 / (1.0 + e2);
        base + (h + (1.0 - h) * g).ln()
    }
}

/// `ln(cosh t)` given both `t` and `cosh t = x₀`: the stored `x₀` is exact
/// in range, the log-domain form takes over once `t` is large.
fn ln_cosh_from(t: f64, cosh_t: f64) -> f64 {
    if t > 20.0 {
        t - LN_2 + (-2.0 * t).exp().ln_1p()
    } else {
        cosh_t.ln()
    }
}

/// Euclidean norm of the spatial block `c[1..]`, rescaled so squares of
/// huge components cannot overflow.
fn spatial_norm(c: &[f64]) -> f64 {
    let m = max_abs(&c[1..]);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = c[1..]
        .iter()
        .map(|&v| {
            let r = v / m;
            r * r
        })
        .sum();
    m * s.sqrt()
}
