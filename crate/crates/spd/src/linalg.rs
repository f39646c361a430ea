//! Dense symmetric linear algebra shared by the SPD kernels.
//!
//! Everything funnels through one sorted symmetric eigendecomposition so
//! matrix functions (`exp`, `log`, powers) are evaluated spectrally. The
//! matrices involved are small (estimation problems live on `PD(2)`–`PD(5)`),
//! so clarity wins over blocked routines. Positivity is *checked*, never
//! repaired: an eigenvalue below `1e-14` of the spectral radius raises an
//! error instead of being clamped, because a silently regularized matrix
//! would poison every distance computed from it.

use horo_manifold::error::GeometryError;
use nalgebra::{DMatrix, SymmetricEigen};

/// Relative spectral floor below which a matrix is treated as singular.
pub const EIG_FLOOR: f64 = 1e-14;

/// Reinterpret flat row-major coordinates as an `n × n` matrix.
///
/// # Panics
///
/// Panics if `coords` does not hold exactly `n²` entries (programmer error;
/// validated data can never reach this).
pub fn to_mat(n: usize, coords: &[f64]) -> DMatrix<f64> {
    assert_eq!(coords.len(), n * n, "coordinate block is not n x n");
    DMatrix::from_row_slice(n, n, coords)
}

/// Flatten a matrix to row-major coordinates.
pub fn to_coords(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// `(M + Mᵀ)/2`: congruences and products of symmetric inputs pick up
/// rounding-level asymmetry that would otherwise accumulate across calls.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for i in 0..out.nrows() {
        for j in (i + 1)..out.ncols() {
            let v = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Largest absolute deviation from symmetry, relative to `1 + max |entry|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = 1.0 + m.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// ascending and eigenvector columns permuted to match.
pub struct Eigh {
    /// Orthogonal matrix whose columns are eigenvectors.
    pub vecs: DMatrix<f64>,
    /// Eigenvalues, ascending.
    pub vals: Vec<f64>,
}

impl Eigh {
    /// Decompose `m` (assumed symmetric; symmetrize first if in doubt).
    pub fn new(m: &DMatrix<f64>) -> Self {
        let se = SymmetricEigen::new(m.clone());
        let n = m.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let mut vecs = DMatrix::zeros(n, n);
        let mut vals = Vec::with_capacity(n);
        for (dst, &src) in order.iter().enumerate() {
            vecs.set_column(dst, &se.eigenvectors.column(src));
            vals.push(se.eigenvalues[src]);
        }
        Eigh { vecs, vals }
    }

    /// `f` applied spectrally: `Q · diag(f(λ)) · Qᵀ`, re-symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.vals.len();
        let mut scaled = self.vecs.clone();
        for (j, &v) in self.vals.iter().enumerate() {
            let fv = f(v);
            for i in 0..n {
                scaled[(i, j)] *= fv;
            }
        }
        symmetrize(&(scaled * self.vecs.transpose()))
    }

    /// Error unless every eigenvalue clears the relative positivity floor.
    ///
    /// # Errors
    ///
    /// [`GeometryError::InvalidPoint`] naming the offending eigenvalue.
    pub fn require_pd(&self, what: &str) -> Result<(), GeometryError> {
        let top = self.vals.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        let min = self.vals[0];
        if min <= EIG_FLOOR * top.max(1.0) {
            return Err(GeometryError::InvalidPoint(format!(
                "{what}: eigenvalue {min:.3e} below the positivity floor \
                 ({EIG_FLOOR:.0e} of spectral radius {top:.3e})"
            )));
        }
        Ok(())
    }
}

/// Matrix exponential of a symmetric matrix.
pub fn mexp(m: &DMatrix<f64>) -> DMatrix<f64> {
    Eigh::new(m).apply(f64::exp)
}

/// Eigenvalues of a symmetric positive-definite matrix by cyclic Jacobi
/// rotations, sorted ascending.
///
/// Unlike a tridiagonalization-based solver, whose errors are absolute in
/// `‖M‖`, Jacobi computes *every* eigenvalue of a positive-definite matrix
/// to a relative accuracy governed by the condition number of the
/// diagonally-rescaled matrix `D⁻¹MD⁻¹` (`D = diag(√Mᵢᵢ)`). For graded
/// matrices `E·Y·E` with `E` diagonal and `Y` well-conditioned, that
/// rescaled condition never degrades as the grading deepens, so eigenvalues
/// spanning hundreds of orders of magnitude come out with full relative
/// precision — the property the deep-ray horofunction evaluations rely on.
/// The convergence threshold is likewise relative (`|mᵖᑫ| ≤ ε·√(mᵖᵖmᑫᑫ)`);
/// an absolute threshold would forfeit the accuracy guarantee.
///
/// # Panics
///
/// Panics if the sweep cap is exhausted (cyclic Jacobi provably converges;
/// hitting the cap marks a non-symmetric or non-finite input).
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = symmetrize(m);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                // Square roots are taken before multiplying: the diagonal
                // entries of a graded matrix can each sit near the overflow
                // threshold, and their product would saturate to infinity,
                // silently disabling the rotation for that pair.
                let scale = a[(p, p)].abs().sqrt() * a[(q, q)].abs().sqrt();
                if apq == 0.0 || apq.abs() <= scale * 1e-17 {
                    continue;
                }
                rotated = true;
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                // tan of the annihilating angle; the asymptotic branch keeps
                // θ² from overflowing for extreme gradings
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(p, k)] = a[(k, p)];
                    a[(k, q)] = s * akp + c * akq;
                    a[(q, k)] = a[(k, q)];
                }
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        assert!(
            sweeps < 64,
            "Jacobi sweep cap exhausted; input is malformed"
        );
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// The pair `(P^{1/2}, P^{−1/2})` from one decomposition.
///
/// # Errors
///
/// [`GeometryError::InvalidPoint`] if the spectrum does not clear the
/// positivity floor.
pub fn sqrt_pair(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>), GeometryError> {
    let e = Eigh::new(m);
    e.require_pd("matrix square root")?;
    Ok((e.apply(f64::sqrt), e.apply(|v| 1.0 / v.sqrt())))
}
