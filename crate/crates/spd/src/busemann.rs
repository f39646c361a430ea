//! Horosphere evaluations on the SPD manifold.
//!
//! A direction with simple, strictly decreasing spectrum `λ` admits a closed
//! form: factor `P = L·D·Lᵀ` with `L` unit lower-triangular and `D` diagonal
//! positive, and the horofunction value is `Σᵢ λᵢ·ln Dᵢᵢ`. The diagonal is
//! read off an ordinary Cholesky factorization, exact at the cost of one
//! triangular decomposition. (The opposite, upper-triangular factorization
//! belongs to the opposite ideal point; the two agree on every diagonal
//! matrix, so only off-flat evaluations tell them apart.) Repeated spectra
//! have no such form and are served by [`busemann_numeric`], a truncated
//! evaluation of the defining limit `lim_{t→∞} d(γ(t), x) − t`.
//!
//! The truncated limit needs care that the rank-one (hyperbolic) case never
//! does. This space contains totally geodesic flats, and along them
//! `h(t) = d(γ(t), x) − t` converges only like `1/t` — no affordable depth
//! reaches target accuracy from `h` alone. But `d(γ(t), x)² − t²` is
//! *exactly* affine in `t` on a flat and exponentially close to affine off
//! it, so a secant through two deep evaluations recovers the limit with the
//! `1/t` tail cancelled identically. Depth is then limited only by the
//! eigensolver: the congruence `γ(t)^{−1/2}·X·γ(t)^{−1/2}` has spectral
//! spread `e^{2t·ρ}`, which an absolute-accuracy solver turns into garbage
//! past `t ≈ 30`. Forming the congruence entrywise in the direction's
//! eigenbasis (where the grading is exact) and reading its spectrum with
//! the relative-accuracy Jacobi sweep removes that ceiling; truncations at
//! `t` in the hundreds cost nothing in precision.
//!
//! Sign conventions: `busemann_flag` for direction `λ` *increases* along the
//! ray `t ↦ mexp(t·λ̂)` and agrees with the limit value of the opposite ray
//! `t ↦ mexp(−t·λ̂)`, matching the anchored-slope convention of
//! [`Manifold::busemann`](horo_manifold::Manifold::busemann) with slope
//! `diag(λ)` at the identity.

use crate::linalg::{jacobi_eigenvalues, sqrt_pair, symmetrize, to_mat, Eigh};
use crate::space::SpdSpace;
use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::{Manifold, Point, Tangent};
use nalgebra::{Cholesky, DMatrix};

/// Minimum gap between consecutive direction eigenvalues for the closed
/// form; below this the factor ordering is numerically ambiguous and the
/// limit evaluation takes over.
pub const FLAG_GAP: f64 = 1e-8;

/// Largest exponent allowed in the graded congruence; keeps every entry and
/// eigenvalue of the deep-ray evaluation inside the double range.
const RAY_EXPONENT_CAP: f64 = 660.0;

/// Disagreement between the two secant estimates beyond which a
/// [`BusemannLimit`] carries a warning.
const RAY_WARN: f64 = 1e-4;

/// A direction-at-infinity with simple spectrum: weights `λ₁ > … > λₙ`
/// (gaps at least [`FLAG_GAP`]) and an orthogonal frame positioning the
/// associated flag of subspaces.
#[derive(Debug, Clone)]
pub struct FlagDirection {
    lambda: Vec<f64>,
    /// `None` means the identity frame.
    frame: Option<DMatrix<f64>>,
}

impl FlagDirection {
    /// Direction with the identity frame.
    ///
    /// # Errors
    ///
    /// [`GeometryError::Degenerate`] unless the entries strictly decrease
    /// with gaps at least [`FLAG_GAP`].
    pub fn axis(lambda: Vec<f64>) -> Result<Self, GeometryError> {
        check_gaps(&lambda)?;
        Ok(FlagDirection {
            lambda,
            frame: None,
        })
    }

    /// Direction conjugated by an orthogonal frame, given row-major.
    ///
    /// # Errors
    ///
    /// [`GeometryError::Degenerate`] for bad gaps;
    /// [`GeometryError::OutOfRange`] if the frame is not orthogonal to
    /// `1e-10` or has the wrong size.
    pub fn new(lambda: Vec<f64>, frame_rows: &[f64]) -> Result<Self, GeometryError> {
        check_gaps(&lambda)?;
        let n = lambda.len();
        if frame_rows.len() != n * n {
            return Err(GeometryError::OutOfRange(format!(
                "frame needs {} entries, got {}",
                n * n,
                frame_rows.len()
            )));
        }
        let g = to_mat(n, frame_rows);
        let defect = (g.transpose() * &g - DMatrix::identity(n, n))
            .iter()
            .fold(0.0_f64, |a, &v| a.max(v.abs()));
        if defect > 1e-10 {
            return Err(GeometryError::OutOfRange(format!(
                "frame orthogonality defect {defect:.3e} exceeds 1e-10"
            )));
        }
        Ok(FlagDirection {
            lambda,
            frame: Some(g),
        })
    }

    /// The direction weights.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }
}

fn check_gaps(lambda: &[f64]) -> Result<(), GeometryError> {
    if lambda.is_empty() || !lambda.iter().all(|v| v.is_finite()) {
        return Err(GeometryError::Degenerate(
            "direction weights must be finite and nonempty".into(),
        ));
    }
    for w in lambda.windows(2) {
        let gap = w[0] - w[1];
        if gap < FLAG_GAP {
            return Err(GeometryError::Degenerate(format!(
                "direction weights must strictly decrease with gaps >= \
                 {FLAG_GAP:.0e}; found gap {gap:.3e}"
            )));
        }
    }
    Ok(())
}

/// Closed-form horofunction of a simple-spectrum direction, evaluated at a
/// point; zero at the identity.
///
/// # Panics
///
/// Panics if `p` belongs to a different backend or its size does not match
/// the direction.
pub fn busemann_flag(space: &SpdSpace, dir: &FlagDirection, p: &Point) -> f64 {
    expect_backend(space.id(), p);
    assert_eq!(
        dir.lambda.len(),
        space.size(),
        "direction size does not match the space"
    );
    let m = to_mat(space.size(), &p.coords);
    let conj = match &dir.frame {
        None => m,
        // the frame acts by the congruence isometry, pulling the evaluation
        // back to the identity frame
        Some(g) => g.transpose() * m * g,
    };
    flag_value(&dir.lambda, &conj)
}

/// `Σᵢ λᵢ·ln Dᵢᵢ` for the unit-lower-triangular factorization `M = L̂·D·L̂ᵀ`.
///
/// Shared kernel: `lambda` is assumed strictly decreasing and `m` symmetric
/// positive definite (caller-checked). The ordinary Cholesky `M = L·Lᵀ`
/// carries the factorization, with `Dᵢᵢ = L²ᵢᵢ`.
pub(crate) fn flag_value(lambda: &[f64], m: &DMatrix<f64>) -> f64 {
    let chol = Cholesky::new(m.clone()).expect("matrix is positive definite");
    let l = chol.l();
    lambda
        .iter()
        .enumerate()
        .map(|(i, &lam)| lam * 2.0 * l[(i, i)].ln())
        .sum()
}

/// Euclidean derivative `∂/∂M` of [`flag_value`] at `M`.
///
/// From `d(ln Lᵢᵢ) = ½·[L⁻¹·dM·L⁻ᵀ]ᵢᵢ` for the Cholesky `M = L·Lᵀ`: the
/// derivative is `L⁻ᵀ·diag(λ)·L⁻¹`. Exact up to one triangular inversion.
pub(crate) fn flag_grad(lambda: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let chol = Cholesky::new(m.clone()).expect("matrix is positive definite");
    let l = chol.l();
    let w = l
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .expect("triangular factor is invertible");
    let mut lam = DMatrix::zeros(n, n);
    for k in 0..n {
        lam[(k, k)] = lambda[k];
    }
    symmetrize(&(w.transpose() * lam * w))
}

/// Result of a truncated-limit horofunction evaluation.
#[derive(Debug, Clone, Copy)]
pub struct BusemannLimit {
    /// The deeper of the two secant estimates (the returned value).
    pub value: f64,
    /// `(deeper, shallower)` secant estimates; their agreement measures how
    /// far the truncation has settled.
    pub bracket: (f64, f64),
    /// Set when the two estimates disagree by more than `1e-4`, signalling
    /// that the truncation has not settled (e.g. an extremely distant
    /// evaluation point crowding out the usable depth).
    pub warning: bool,
}

/// Truncated evaluation of the horofunction limit `d(γ(t), x) − t` for the
/// unit-speed ray `γ(t) = exp_base(t·dir)`.
///
/// Evaluates the ray distance at three depths scaled to the direction's
/// spectral radius (hundreds of units; see the module notes on why depth is
/// free), forms the two secant estimates of the limit from `d² − t²`, and
/// returns the deeper one; the raw `h(t) = d(γ(t), x) − t` values are
/// checked to be non-increasing, as the limit demands.
///
/// # Panics
///
/// Panics if `dir` is not based at `base`, is not unit within `1e-9`, or the
/// points mix backends; and if the evaluations violate monotonicity by more
/// than round-off (the limit is approached from above).
pub fn busemann_numeric(space: &SpdSpace, base: &Point, dir: &Tangent, x: &Point) -> BusemannLimit {
    expect_backend(space.id(), base);
    expect_backend(space.id(), x);
    assert!(dir.base == *base, "ray direction based away from the base");
    let nrm = space.norm(dir);
    assert!(
        (nrm - 1.0).abs() <= 1e-9,
        "ray direction must be unit (norm {nrm})"
    );
    ray_limit(space, base, dir, x)
}

/// [`busemann_numeric`] without the unit-norm vetting, for internal callers
/// that normalized already.
pub(crate) fn ray_limit(space: &SpdSpace, base: &Point, dir: &Tangent, x: &Point) -> BusemannLimit {
    let n = space.size();
    let d0 = space.dist(base, x);
    // Congruence to the identity at the base, then to the direction's
    // eigenbasis: the ray becomes t ↦ diag(e^{t·λᵢ}) and the evaluation
    // point a fixed well-conditioned matrix Y.
    let (_, pih) = sqrt_pair(&to_mat(n, &base.coords)).expect("base is positive definite");
    let vt = symmetrize(&(&pih * to_mat(n, &dir.coords) * &pih));
    let ev = Eigh::new(&vt);
    let top = ev.vals.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    assert!(top > 0.0, "ray direction must be nonzero");
    let xt = symmetrize(&(&pih * to_mat(n, &x.coords) * &pih));
    let y = symmetrize(&(ev.vecs.transpose() * xt * &ev.vecs));
    let ymax = y.iter().fold(1.0_f64, |a, &v| a.max(v.abs()));

    // d(γ(t), x)² via the exactly-graded congruence E·Y·E,
    // Eᵢᵢ = e^{−t·λᵢ/2}, whose spectrum Jacobi reads at full relative
    // accuracy regardless of depth.
    let eval = |t: f64| -> (f64, f64) {
        let m = DMatrix::from_fn(n, n, |i, j| {
            y[(i, j)] * (-t * 0.5 * (ev.vals[i] + ev.vals[j])).exp()
        });
        let d2: f64 = jacobi_eigenvalues(&m)
            .iter()
            .map(|&mu| {
                assert!(mu > 0.0, "ray evaluation lost positivity");
                mu.ln().powi(2)
            })
            .sum();
        (d2.sqrt() - t, d2 - t * t)
    };

    // deepest safe truncation for this direction, then thirds
    let t3 = (RAY_EXPONENT_CAP - ymax.ln()) / top;
    let t1 = (d0 + 20.0).max(0.6 * t3).min(t3 * 0.9);
    let dt = (t3 - t1) / 2.0;
    let crowded = t3 < d0 + 40.0;

    let (h1, g1) = eval(t1);
    let (h2, g2) = eval(t1 + dt);
    let (h3, g3) = eval(t3);
    assert!(
        h2 <= h1 + 1e-9 && h3 <= h2 + 1e-9,
        "horofunction limit must be approached from above \
         (h: {h1}, {h2}, {h3} at t = {t1}, {}, {t3})",
        t1 + dt
    );
    let shallow = (g2 - g1) / (2.0 * dt);
    let deep = (g3 - g2) / (2.0 * dt);
    BusemannLimit {
        value: deep,
        bracket: (deep, shallow),
        warning: crowded || (shallow - deep).abs() > RAY_WARN,
    }
}
