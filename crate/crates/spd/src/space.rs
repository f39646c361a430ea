//! The manifold of symmetric positive-definite matrices.
//!
//! Points are `n × n` SPD matrices stored row-major; tangent vectors at `P`
//! are symmetric matrices with the affine-invariant inner product
//! `⟨U, V⟩_P = Tr(P⁻¹ U P⁻¹ V)`. Every kernel reduces to the base point's
//! symmetric square root: congruence by `P^{−1/2}` carries the configuration
//! to the identity, where geodesics are one-parameter groups
//! `t ↦ mexp(t·S)`, and congruence by `P^{1/2}` carries results back. The
//! group of invertible congruences acts by isometry, which is what the
//! tests exercise.
//!
//! Horosphere evaluations take a closed form when the slope's spectrum is
//! simple — see [`crate::busemann`] — and fall back to a truncated-ray limit
//! otherwise. Gradients always use the closed form: the triangular
//! factorization behind the value differentiates exactly, so no far ray
//! point (whose congruence would outrun double precision) is ever needed;
//! repeated slope eigenvalues are split by a deterministic `1e-6` staircase
//! first, which perturbs the gradient by the same order.

use crate::busemann::{flag_grad, flag_value, ray_limit, FLAG_GAP};
use crate::linalg::{asymmetry, mexp, sqrt_pair, symmetrize, to_coords, to_mat, Eigh};
use horo_manifold::error::GeometryError;
use horo_manifold::manifold::expect_backend;
use horo_manifold::{BackendId, BackendKind, Manifold, Point, Tangent};
use nalgebra::{Cholesky, DMatrix};

/// Maximum relative asymmetry accepted by point and tangent validation.
pub const SYM_TOL: f64 = 1e-10;

/// Gap forced between repeated slope eigenvalues before differentiating
/// the closed form; the induced gradient error is of the same order.
const STAIR: f64 = 1e-6;

/// The space of `n × n` symmetric positive-definite matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpdSpace {
    n: usize,
}

impl SpdSpace {
    /// The manifold of `n × n` SPD matrices, `n ≥ 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be at least 1");
        SpdSpace { n }
    }

    /// Matrix size `n`.
    pub fn size(&self) -> usize {
        self.n
    }

    /// The identity matrix as a point.
    pub fn identity(&self) -> Point {
        let mut coords = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            coords[i * self.n + i] = 1.0;
        }
        self.point_from(coords)
    }

    /// Point from coordinates known to be valid (kernel outputs).
    fn point_from(&self, coords: Vec<f64>) -> Point {
        Point {
            backend: self.id(),
            coords,
        }
    }

    /// The base point's matrix together with `(P^{1/2}, P^{−1/2})`.
    ///
    /// # Panics
    ///
    /// Panics if the point is not positive definite — validated points
    /// cannot trip this, so it marks a constructed-not-validated point.
    fn roots(&self, x: &Point) -> (DMatrix<f64>, DMatrix<f64>) {
        sqrt_pair(&to_mat(self.n, &x.coords)).expect("point is positive definite")
    }

    /// `P⁻¹ M` via Cholesky of the (validated) base point.
    fn solve(&self, x: &Point, m: &DMatrix<f64>) -> DMatrix<f64> {
        let p = to_mat(self.n, &x.coords);
        let chol = Cholesky::new(p).expect("point is positive definite");
        chol.solve(m)
    }
}

impl Manifold for SpdSpace {
    fn id(&self) -> BackendId {
        BackendId::new(BackendKind::Spd, self.n)
    }

    fn manifold_dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn validate_point(&self, coords: &[f64]) -> Result<(), GeometryError> {
        if coords.len() != self.n * self.n {
            return Err(GeometryError::InvalidPoint(format!(
                "expected {} coordinates for {}, got {}",
                self.n * self.n,
                self.id(),
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::InvalidPoint("non-finite coordinate".into()));
        }
        let m = to_mat(self.n, coords);
        let asym = asymmetry(&m);
        if asym > SYM_TOL {
            return Err(GeometryError::InvalidPoint(format!(
                "asymmetry {asym:.3e} exceeds tolerance {SYM_TOL:.0e}"
            )));
        }
        Eigh::new(&symmetrize(&m)).require_pd("point validation")
    }

    fn validate_tangent(&self, base: &Point, coords: &[f64]) -> Result<(), GeometryError> {
        if base.backend != self.id() {
            return Err(GeometryError::BackendMismatch {
                expected: self.id(),
                got: base.backend,
            });
        }
        if coords.len() != self.n * self.n {
            return Err(GeometryError::InvalidTangent(format!(
                "expected {} coordinates, got {}",
                self.n * self.n,
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::InvalidTangent(
                "non-finite coordinate".into(),
            ));
        }
        let asym = asymmetry(&to_mat(self.n, coords));
        if asym > SYM_TOL {
            return Err(GeometryError::InvalidTangent(format!(
                "asymmetry {asym:.3e} exceeds tolerance {SYM_TOL:.0e}"
            )));
        }
        Ok(())
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        expect_backend(self.id(), x);
        expect_backend(self.id(), y);
        if x.coords == y.coords {
            return 0.0;
        }
        let (_, pih) = self.roots(x);
        let q = to_mat(self.n, &y.coords);
        let m = symmetrize(&(&pih * q * &pih));
        let e = Eigh::new(&m);
        e.require_pd("distance target")
            .expect("point is positive definite");
        e.vals.iter().map(|&v| v.ln().powi(2)).sum::<f64>().sqrt()
    }

    fn inner(&self, x: &Point, u: &Tangent, v: &Tangent) -> f64 {
        expect_backend(self.id(), x);
        assert!(
            u.base == *x && v.base == *x,
            "inner product of tangents based away from x"
        );
        let a = self.solve(x, &to_mat(self.n, &u.coords));
        let b = self.solve(x, &to_mat(self.n, &v.coords));
        (a * b).trace()
    }

    fn exp(&self, x: &Point, v: &Tangent) -> Point {
        expect_backend(self.id(), x);
        assert!(v.base == *x, "tangent based away from x");
        let (ph, pih) = self.roots(x);
        let s = symmetrize(&(&pih * to_mat(self.n, &v.coords) * &pih));
        let out = symmetrize(&(&ph * mexp(&s) * &ph));
        assert!(
            out.iter().all(|c| c.is_finite()),
            "matrix exponential overflow: step norm {:.3e}",
            self.norm(v)
        );
        self.point_from(to_coords(&out))
    }

    fn log(&self, x: &Point, y: &Point) -> Tangent {
        expect_backend(self.id(), x);
        expect_backend(self.id(), y);
        if x.coords == y.coords {
            return Tangent::zero(x);
        }
        let (ph, pih) = self.roots(x);
        let m = symmetrize(&(&pih * to_mat(self.n, &y.coords) * &pih));
        let e = Eigh::new(&m);
        e.require_pd("log target")
            .expect("point is positive definite");
        let d = e.vals.iter().map(|&v| v.ln().powi(2)).sum::<f64>().sqrt();
        let l = e.apply(f64::ln);
        let out = symmetrize(&(&ph * l * &ph));
        Tangent::new(x, to_coords(&out)).with_hint(d)
    }

    fn transport(&self, v: &Tangent, to: &Point) -> Tangent {
        expect_backend(self.id(), to);
        let x = &v.base;
        if x == to {
            return v.clone();
        }
        // E = P^{1/2} (P^{−1/2} Q P^{−1/2})^{1/2} P^{−1/2} carries T_P to T_Q
        // isometrically along the connecting geodesic, via V ↦ E V Eᵀ.
        let (ph, pih) = self.roots(x);
        let m = symmetrize(&(&pih * to_mat(self.n, &to.coords) * &pih));
        let (mh, _) = sqrt_pair(&m).expect("point is positive definite");
        let e = &ph * mh * &pih;
        let out = symmetrize(&(&e * to_mat(self.n, &v.coords) * e.transpose()));
        let mut t = Tangent::new(to, to_coords(&out));
        t.norm_hint = v.norm_hint; // transport is an isometry
        t
    }

    fn busemann(&self, p: &Point, v: &Tangent, x: &Point) -> f64 {
        expect_backend(self.id(), x);
        assert!(v.base == *p, "slope tangent based away from the anchor");
        let s = self.norm(v);
        if s == 0.0 {
            return 0.0;
        }
        let (_, pih) = self.roots(p);
        let vt = symmetrize(&(&pih * to_mat(self.n, &v.coords) * &pih)) / s;
        let e = Eigh::new(&vt);
        // Flag direction of the slope: unit spectrum sorted descending with
        // matching eigenvector columns.
        let lam: Vec<f64> = e.vals.iter().rev().copied().collect();
        let simple = lam.windows(2).all(|w| w[0] - w[1] >= FLAG_GAP);
        if simple {
            let n = self.n;
            let mut w = DMatrix::zeros(n, n);
            for j in 0..n {
                w.set_column(j, &e.vecs.column(n - 1 - j));
            }
            let xt = symmetrize(&(&pih * to_mat(self.n, &x.coords) * &pih));
            let c = symmetrize(&(w.transpose() * xt * &w));
            s * flag_value(&lam, &c)
        } else {
            // repeated slope eigenvalues: no closed form, use the ray limit
            s * ray_limit(self, p, &v.scale(-1.0 / s), x).value
        }
    }

    fn busemann_grad(&self, p: &Point, v: &Tangent, x: &Point) -> Tangent {
        expect_backend(self.id(), x);
        assert!(v.base == *p, "slope tangent based away from the anchor");
        let s = self.norm(v);
        if s == 0.0 {
            return Tangent::zero(x);
        }
        let (_, pih) = self.roots(p);
        let vt = symmetrize(&(&pih * to_mat(self.n, &v.coords) * &pih)) / s;
        let e = Eigh::new(&vt);
        let mut lam: Vec<f64> = e.vals.iter().rev().copied().collect();
        // split repeated eigenvalues so the triangular closed form applies;
        // the gradient moves by O(STAIR). Renormalizing keeps the weights
        // unit, so the reported norm stays exactly the slope.
        for i in 1..lam.len() {
            let cap = lam[i - 1] - STAIR;
            if lam[i] > cap {
                lam[i] = cap;
            }
        }
        let unit = lam.iter().map(|w| w * w).sum::<f64>().sqrt();
        for w in lam.iter_mut() {
            *w /= unit;
        }
        let n = self.n;
        let mut w = DMatrix::zeros(n, n);
        for j in 0..n {
            w.set_column(j, &e.vecs.column(n - 1 - j));
        }
        // value = s·flag_value(λ, AᵀXA) with A = P^{−1/2}·W̃; chain rule
        // through the congruence, then raise to the Riemannian gradient
        // (∇ = X·∂·X), which has norm s — horofunctions have unit slope.
        let a = &pih * w;
        let xm = to_mat(n, &x.coords);
        let c = symmetrize(&(a.transpose() * &xm * &a));
        let g_c = flag_grad(&lam, &c);
        let g_x = symmetrize(&(&xm * &a * g_c * a.transpose() * &xm)) * s;
        Tangent::new(x, to_coords(&g_x)).with_hint(s)
    }

    fn frame(&self, x: &Point) -> Vec<Tangent> {
        expect_backend(self.id(), x);
        let (ph, _) = self.roots(x);
        let mut out = Vec::with_capacity(self.manifold_dim());
        let mut push = |b: DMatrix<f64>| {
            let f = symmetrize(&(&ph * b * &ph));
            out.push(Tangent::new(x, to_coords(&f)).with_hint(1.0));
        };
        for i in 0..self.n {
            let mut b = DMatrix::zeros(self.n, self.n);
            b[(i, i)] = 1.0;
            push(b);
        }
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let mut b = DMatrix::zeros(self.n, self.n);
                b[(i, j)] = inv_sqrt2;
                b[(j, i)] = inv_sqrt2;
                push(b);
            }
        }
        out
    }
}
