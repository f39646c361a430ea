//! Scale-robust scalar kernels shared by the geometry backends.
//!
//! Hyperbolic quantities live on an exponential scale: a point at distance
//! `d` from a reference has coordinates of size `e^d`, and the workloads in
//! this workspace legitimately reach `d ≈ 700` (the edge of f64 range). The
//! standard library versions of these kernels either lose all relative
//! accuracy near the identity (`acosh` near 1) or overflow long before the
//! representable range ends (`x*x` inside `acosh`, `sinh` beyond ~710), so
//! the backends route through the branched versions here.

use std::f64::consts::LN_2;

/// Inverse hyperbolic cosine, accurate near 1 and safe at any magnitude.
///
/// - Near 1 it evaluates `ln1p(t + √(t(x+1)))` with `t = x − 1`, which keeps
///   full relative accuracy where `std`'s formulation loses half its digits.
/// - Beyond `1e8` it switches to `ln 2 + ln x` (the neglected term is
///   `≤ 1/(4x²) < 3e-17`), avoiding the `x²` overflow at `x > ~1e154`.
///
/// Arguments slightly below 1 are treated as roundoff and clamped to 1;
/// callers decide how much negative slack is legitimate before calling.
pub fn stable_acosh(x: f64) -> f64 {
    if x >= 1e8 {
        return LN_2 + x.ln();
    }
    let t = (x - 1.0).max(0.0);
    (t + (t * (x + 1.0)).sqrt()).ln_1p()
}

/// `sinh(x)/x`, continuously extended to 1 at `x = 0`.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// `x·coth(x)`, continuously extended to 1 at `x = 0`.
///
/// Even in `x`; grows like `|x|` for large arguments (where `tanh`
/// saturates to 1 in f64, the division is exact).
pub fn x_coth_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0
    } else {
        ax / ax.tanh()
    }
}

/// `ln(sinh(x))` for `x > 0`, safe for large `x` where `sinh` overflows.
///
/// # Panics
///
/// Panics if `x ≤ 0`.
pub fn ln_sinh(x: f64) -> f64 {
    assert!(x > 0.0, "ln_sinh needs a positive argument, got {x}");
    if x > 20.0 {
        // sinh x = (e^x / 2)(1 − e^{−2x})
        x - LN_2 + (-(2.0 * x)).exp().ln_1p()
    } else {
        x.ln() + sinhc(x).ln()
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
///
/// Returns `(argmin, min)` once the bracket is narrower than `tol`. This is
/// deliberately derivative-free and slow-but-certain; it exists as an
/// independent oracle for tests that freeze reference values.
pub fn golden_section_min(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    assert!(a < b, "empty bracket [{a}, {b}]");
    assert!(tol > 0.0, "tolerance must be positive");
    let inv_phi = 0.618_033_988_749_894_9_f64; // (√5 − 1)/2
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}
