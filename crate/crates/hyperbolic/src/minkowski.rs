//! The Minkowski bilinear form and null-vector helpers.
//!
//! Everything here is scale-aware. Points far from the chart apex have
//! coordinates of size `e^d`; naive products overflow once two points'
//! scales multiply past f64 range (`d_x + d_y ≳ 709`), and near-cancelling
//! combinations (`x ± v̂` for radial directions) lose their tiny null
//! component to rounding. The helpers below rescale before multiplying and
//! reconstruct lost null components from the algebraic identity
//! `⟨x + v̂, x − v̂⟩ = −2` that holds for every unit tangent `v̂` at `x`.

/// `⟨x, y⟩ = −x₀y₀ + Σᵢ xᵢyᵢ` — the ambient bilinear form of signature
/// `(−, +, ..., +)`.
///
/// # Panics
///
/// Panics if the slices have different lengths (programmer error).
pub fn mdot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "mdot length mismatch");
    let mut s = 0.0;
    for i in 1..x.len() {
        s += x[i] * y[i];
    }
    s - x[0] * y[0]
}

/// Largest absolute entry.
pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |a, &c| a.max(c.abs()))
}

/// `⟨x, y⟩` computed with both operands rescaled by their joint magnitude,
/// so intermediate products cannot overflow for representable inputs.
pub fn mdot_rescaled(x: &[f64], y: &[f64]) -> f64 {
    let m = max_abs(x).max(max_abs(y));
    if m <= 1e150 {
        return mdot(x, y);
    }
    let inv = 1.0 / m;
    let mut s = 0.0;
    for i in 1..x.len() {
        s += (x[i] * inv) * (y[i] * inv);
    }
    (s - (x[0] * inv) * (y[0] * inv)) * m * m
}

/// Relative deviation of `x` from the unit hyperboloid `⟨x, x⟩ = −1`,
/// measured against the squared coordinate magnitude (so the check stays
/// meaningful at every representable scale: far from the apex the `−1` is
/// beneath the rounding of the squares and the condition degrades to
/// "null to relative precision", which is all the coordinates can express).
pub fn sheet_residual(x: &[f64]) -> f64 {
    let m = max_abs(x);
    if m == 0.0 || !m.is_finite() {
        return f64::INFINITY;
    }
    let inv = 1.0 / m;
    let mut q = 0.0;
    let mut mag = 0.0;
    for (i, &c) in x.iter().enumerate() {
        let s = c * inv;
        mag += s * s;
        if i == 0 {
            q -= s * s;
        } else {
            q += s * s;
        }
    }
    let target = inv * inv; // ⟨x,x⟩/m² should equal −1/m²
    (q + target).abs() / (target + mag)
}

/// Relative threshold below which a near-cancelled sum of unit-scale-matched
/// vectors is pure rounding noise and must be reconstructed, not trusted.
pub const CANCEL_FLUSH_REL: f64 = 64.0 * f64::EPSILON;

/// Given a (numerically) null future-pointing vector `b`, return the dual
/// null vector `a` on the same 2-plane with `⟨a, b⟩ = −2`.
///
/// For a unit tangent `v̂` at a sheet point `x`, the splits `a = x + v̂` and
/// `b = x − v̂` satisfy `⟨a, b⟩ = ⟨x,x⟩ − ⟨v̂,v̂⟩ = −2` exactly. When one of
/// them cancels below rounding (radial directions far from the apex), this
/// rebuilds it from the other: `a = α(1, −b̂ₛ)` with `α = 2/(b₀ + ‖bₛ‖²/b₀)`.
///
/// # Panics
///
/// Panics if `b₀ ≤ 0` (not future-pointing).
pub fn dual_null(b: &[f64]) -> Vec<f64> {
    let b0 = b[0];
    assert!(b0 > 0.0, "dual_null needs a future-pointing vector");
    let mut ss = 0.0;
    for &c in &b[1..] {
        let r = c / b0;
        ss += r * r;
    }
    let alpha = 2.0 / (b0 * (1.0 + ss));
    let mut a = Vec::with_capacity(b.len());
    a.push(alpha);
    for &c in &b[1..] {
        a.push(-alpha * (c / b0));
    }
    a
}
