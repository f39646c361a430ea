//! Horofunction evaluations on the SPD manifold: closed form, truncated
//! limit, their agreement, and the gradient contract.

use approx::assert_abs_diff_eq;
use horo_manifold::error::GeometryError;
use horo_manifold::sampling::{point_in_ball, rng, unit_tangent};
use horo_manifold::{Manifold, Point, Tangent};
use horo_spd::{busemann_flag, busemann_numeric, FlagDirection, SpdSpace};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn tangent_gap(space: &SpdSpace, a: &Tangent, b: &Tangent) -> f64 {
    let mut d = a.clone();
    d.axpy(-1.0, b);
    space.norm(&d)
}

fn diag_point(space: &SpdSpace, d: &[f64]) -> Point {
    let n = space.size();
    let mut coords = vec![0.0; n * n];
    for (i, &v) in d.iter().enumerate() {
        coords[i * n + i] = v;
    }
    space.new_point(coords).expect("diagonal point is valid")
}

fn diag_tangent(space: &SpdSpace, base: &Point, d: &[f64]) -> Tangent {
    let n = space.size();
    let mut coords = vec![0.0; n * n];
    for (i, &v) in d.iter().enumerate() {
        coords[i * n + i] = v;
    }
    space
        .new_tangent(base, coords)
        .expect("diagonal tangent is valid")
}

/// Strictly decreasing unit weights with gaps at least `0.35`, so the closed
/// form applies with a comfortable margin.
fn rand_lambda(n: usize, r: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    let mut lam: Vec<f64> = (0..n).map(|_| r.random::<f64>() * 2.0 - 1.0).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    for i in 1..n {
        let cap = lam[i - 1] - 0.35;
        if lam[i] > cap {
            lam[i] = cap;
        }
    }
    let nrm = lam.iter().map(|v| v * v).sum::<f64>().sqrt();
    lam.iter().map(|v| v / nrm).collect()
}

/// Random orthogonal matrix from the QR factorization of a Gaussian draw.
fn rand_orthogonal(n: usize, r: &mut rand_chacha::ChaCha8Rng) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(r));
    let qr = g.qr();
    qr.q()
}

#[test]
fn flag_value_reference_points() {
    // Zero at the identity for any direction.
    for n in [2usize, 3] {
        let space = SpdSpace::new(n);
        let lam = rand_lambda(n, &mut rng(7));
        let dir = FlagDirection::axis(lam).expect("gaps are wide");
        let at_id = busemann_flag(&space, &dir, &space.identity());
        assert_abs_diff_eq!(at_id, 0.0, epsilon = 1e-14);
    }

    // diag(e², 1) along λ = (1, −1)/√2 sits at height √2·... the weighted
    // log-diagonal: (1/√2)·2 + (−1/√2)·0 = √2.
    let space = SpdSpace::new(2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dir = FlagDirection::axis(vec![s, -s]).expect("gaps are wide");
    let p = diag_point(&space, &[(2.0_f64).exp(), 1.0]);
    assert_abs_diff_eq!(
        busemann_flag(&space, &dir, &p),
        std::f64::consts::SQRT_2,
        epsilon = 1e-12
    );

    // Off-diagonal witness, solvable by hand through the pencil
    // det([[2,1],[1,1]] − μ·diag(e^{-a}, e^{a})): the value is √2·ln 2.
    let q = space
        .new_point(vec![2.0, 1.0, 1.0, 1.0])
        .expect("point is positive definite");
    assert_abs_diff_eq!(
        busemann_flag(&space, &dir, &q),
        std::f64::consts::SQRT_2 * (2.0_f64).ln(),
        epsilon = 1e-12
    );
}

#[test]
fn flag_value_is_linear_along_its_own_axis() {
    let space = SpdSpace::new(3);
    let mut r = rng(11);
    for _ in 0..20 {
        let lam = rand_lambda(3, &mut r);
        let dir = FlagDirection::axis(lam.clone()).expect("gaps are wide");
        let s = 0.25 + 4.0 * r.random::<f64>();
        let p = diag_point(
            &space,
            &[(s * lam[0]).exp(), (s * lam[1]).exp(), (s * lam[2]).exp()],
        );
        assert_abs_diff_eq!(
            busemann_flag(&space, &dir, &p),
            s,
            epsilon = 1e-12 * (1.0 + s)
        );
    }
}

#[test]
fn flag_value_reads_the_triangular_factorization() {
    // Assemble P = L·D·Lᵀ from a known unit lower-triangular factor and a
    // known positive diagonal; the horofunction must report Σ λᵢ·ln Dᵢᵢ
    // exactly, independently of how the strict triangle is filled.
    for n in [3usize, 4] {
        let space = SpdSpace::new(n);
        let mut r = rng(100 + n as u64);
        for _ in 0..20 {
            let lam = rand_lambda(n, &mut r);
            let dir = FlagDirection::axis(lam.clone()).expect("gaps are wide");
            let mut l = nalgebra::DMatrix::identity(n, n);
            for i in 0..n {
                for j in 0..i {
                    l[(i, j)] = 2.0 * r.random::<f64>() - 1.0;
                }
            }
            let d: Vec<f64> = (0..n)
                .map(|_| (2.0 * r.random::<f64>() - 1.0).exp())
                .collect();
            let mut dm = nalgebra::DMatrix::zeros(n, n);
            for (i, &v) in d.iter().enumerate() {
                dm[(i, i)] = v;
            }
            let p_mat = &l * dm * l.transpose();
            let coords: Vec<f64> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| 0.5 * (p_mat[(i, j)] + p_mat[(j, i)]))
                .collect();
            let p = space.new_point(coords).expect("assembled point is valid");
            let want: f64 = lam.iter().zip(&d).map(|(&w, &v)| w * v.ln()).sum();
            assert_abs_diff_eq!(busemann_flag(&space, &dir, &p), want, epsilon = 1e-10);
        }
    }
}

#[test]
fn frame_conjugation_pulls_back_to_the_identity_frame() {
    let n = 3;
    let space = SpdSpace::new(n);
    let mut r = rng(23);
    for _ in 0..10 {
        let lam = rand_lambda(n, &mut r);
        let g = rand_orthogonal(n, &mut r);
        let frame_rows: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| g[(i, j)])
            .collect();
        let framed = FlagDirection::new(lam.clone(), &frame_rows).expect("frame is orthogonal");
        let axis = FlagDirection::axis(lam).expect("gaps are wide");
        let p = point_in_ball(&space, &space.identity(), 3.0, &mut r);
        let p_mat = nalgebra::DMatrix::from_row_slice(n, n, &p.coords);
        let pushed_mat = &g * p_mat * g.transpose();
        let pushed_coords: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| 0.5 * (pushed_mat[(i, j)] + pushed_mat[(j, i)]))
            .collect();
        let pushed = space
            .new_point(pushed_coords)
            .expect("conjugated point is valid");
        assert_abs_diff_eq!(
            busemann_flag(&space, &framed, &pushed),
            busemann_flag(&space, &axis, &p),
            epsilon = 1e-10
        );
    }
}

#[test]
fn closed_form_matches_the_truncated_limit() {
    // The two evaluation routes are independent: one reads a triangular
    // factorization, the other chases the defining limit down the ray
    // t ↦ exp(−t·diag(λ̂)). Their agreement pins the shared convention.
    for n in [2usize, 3, 4] {
        let space = SpdSpace::new(n);
        let id = space.identity();
        let mut r = rng(1000 + n as u64);
        let mut worst = 0.0_f64;
        for _ in 0..25 {
            let lam = rand_lambda(n, &mut r);
            let dir = FlagDirection::axis(lam.clone()).expect("gaps are wide");
            let p = point_in_ball(&space, &id, 5.0, &mut r);
            let flag = busemann_flag(&space, &dir, &p);
            let ray = diag_tangent(&space, &id, &lam.iter().map(|v| -v).collect::<Vec<_>>());
            let limit = busemann_numeric(&space, &id, &ray, &p);
            assert!(!limit.warning, "truncation failed to settle");
            assert!(
                (limit.bracket.0 - limit.bracket.1).abs() <= 1e-8,
                "secant estimates disagree: {:?}",
                limit.bracket
            );
            worst = worst.max((flag - limit.value).abs());
        }
        assert!(
            worst <= 1e-8,
            "closed form and limit disagree by {worst:.3e} on size {n}"
        );
    }
}

#[test]
fn closed_form_matches_the_limit_under_a_frame() {
    let n = 3;
    let space = SpdSpace::new(n);
    let id = space.identity();
    let mut r = rng(41);
    for _ in 0..10 {
        let lam = rand_lambda(n, &mut r);
        let g = rand_orthogonal(n, &mut r);
        let frame_rows: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| g[(i, j)])
            .collect();
        let dir = FlagDirection::new(lam.clone(), &frame_rows).expect("frame is orthogonal");
        // ray tangent −g·diag(λ̂)·gᵀ at the identity
        let mut lam_mat = nalgebra::DMatrix::zeros(n, n);
        for (i, &v) in lam.iter().enumerate() {
            lam_mat[(i, i)] = -v;
        }
        let v_mat = &g * lam_mat * g.transpose();
        let v_coords: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| 0.5 * (v_mat[(i, j)] + v_mat[(j, i)]))
            .collect();
        let ray = space.new_tangent(&id, v_coords).expect("tangent is valid");
        let p = point_in_ball(&space, &id, 4.0, &mut r);
        let limit = busemann_numeric(&space, &id, &ray, &p);
        assert!(!limit.warning, "truncation failed to settle");
        assert_abs_diff_eq!(busemann_flag(&space, &dir, &p), limit.value, epsilon = 1e-8);
    }
}

#[test]
fn limit_on_the_ray_itself_is_minus_arclength() {
    let space = SpdSpace::new(3);
    let id = space.identity();
    let mut r = rng(53);
    let lam = rand_lambda(3, &mut r);
    let ray = diag_tangent(&space, &id, &lam);
    for s in [0.5, 2.0, 4.0] {
        let on_ray = space.exp(&id, &ray.scale(s));
        let limit = busemann_numeric(&space, &id, &ray, &on_ray);
        assert!(!limit.warning);
        assert_abs_diff_eq!(limit.value, -s, epsilon = 1e-9);
    }
    let at_base = busemann_numeric(&space, &id, &ray, &id);
    assert!(!at_base.warning);
    assert_abs_diff_eq!(at_base.value, 0.0, epsilon = 1e-10);
}

#[test]
fn limit_handles_repeated_spectra() {
    // Equal-weight directions have no closed form; the limit must still
    // behave like a horofunction: zero at the base and 1-Lipschitz.
    let space = SpdSpace::new(3);
    let id = space.identity();
    let mut r = rng(59);
    let s = 1.0 / 6.0_f64.sqrt();
    let ray = diag_tangent(&space, &id, &[s, s, -2.0 * s]);
    let at_base = busemann_numeric(&space, &id, &ray, &id);
    assert!(!at_base.warning);
    assert_abs_diff_eq!(at_base.value, 0.0, epsilon = 1e-10);
    for _ in 0..10 {
        let a = point_in_ball(&space, &id, 4.0, &mut r);
        let b = point_in_ball(&space, &id, 4.0, &mut r);
        let la = busemann_numeric(&space, &id, &ray, &a);
        let lb = busemann_numeric(&space, &id, &ray, &b);
        assert!(!la.warning && !lb.warning);
        assert!(
            (la.value - lb.value).abs() <= space.dist(&a, &b) + 1e-9,
            "horofunction must be 1-Lipschitz"
        );
    }
}

#[test]
fn directions_reject_bad_input() {
    // Nearly equal weights are ambiguous for the closed form.
    match FlagDirection::axis(vec![1.0, 1.0 - 1e-9]) {
        Err(GeometryError::Degenerate(_)) => {}
        other => panic!("expected a degeneracy error, got {other:?}"),
    }
    // Increasing weights are not a flag order.
    assert!(FlagDirection::axis(vec![-1.0, 1.0]).is_err());
    // A frame that is not orthogonal is rejected with a range error.
    match FlagDirection::new(vec![1.0, -1.0], &[1.0, 0.3, 0.0, 1.0]) {
        Err(GeometryError::OutOfRange(_)) => {}
        other => panic!("expected a range error, got {other:?}"),
    }
    // A frame of the wrong size is rejected before any numerics run.
    assert!(FlagDirection::new(vec![1.0, -1.0], &[1.0, 0.0]).is_err());
}

#[test]
fn trait_busemann_is_anchored_and_slope_normalized() {
    // B(p; v, p) = 0, B grows at unit rate per unit of ‖v‖ along the
    // geodesic through v, and scaling v scales the whole function.
    let space = SpdSpace::new(3);
    let mut r = rng(61);
    for _ in 0..10 {
        let p = point_in_ball(&space, &space.identity(), 3.0, &mut r);
        let v = unit_tangent(&space, &p, &mut r).scale(0.5 + 2.0 * r.random::<f64>());
        let s = space.norm(&v);
        assert_abs_diff_eq!(space.busemann(&p, &v, &p), 0.0, epsilon = 1e-12);
        for t in [0.5, 1.5] {
            let q = space.exp(&p, &v.scale(t / s));
            assert_abs_diff_eq!(
                space.busemann(&p, &v, &q),
                s * t,
                epsilon = 1e-9 * (1.0 + s * t)
            );
        }
        let x = point_in_ball(&space, &p, 3.0, &mut r);
        let twice = space.busemann(&p, &v.scale(2.0), &x);
        assert_abs_diff_eq!(twice, 2.0 * space.busemann(&p, &v, &x), epsilon = 1e-9);
    }
}

#[test]
fn trait_busemann_is_lipschitz_with_the_slope_constant() {
    let space = SpdSpace::new(3);
    let mut r = rng(67);
    for _ in 0..15 {
        let p = point_in_ball(&space, &space.identity(), 2.0, &mut r);
        let v = unit_tangent(&space, &p, &mut r).scale(0.25 + 2.0 * r.random::<f64>());
        let s = space.norm(&v);
        let a = point_in_ball(&space, &p, 4.0, &mut r);
        let b = point_in_ball(&space, &p, 4.0, &mut r);
        let gap = (space.busemann(&p, &v, &a) - space.busemann(&p, &v, &b)).abs();
        assert!(
            gap <= s * space.dist(&a, &b) + 1e-9,
            "|B(a) − B(b)| = {gap:.3e} exceeds s·d(a,b)"
        );
    }
}

#[test]
fn trait_busemann_agrees_with_the_flag_form_at_the_identity() {
    let space = SpdSpace::new(4);
    let id = space.identity();
    let mut r = rng(71);
    for _ in 0..10 {
        let lam = rand_lambda(4, &mut r);
        let s = 0.5 + 2.0 * r.random::<f64>();
        let v = diag_tangent(&space, &id, &lam.iter().map(|w| s * w).collect::<Vec<_>>());
        let dir = FlagDirection::axis(lam).expect("gaps are wide");
        let x = point_in_ball(&space, &id, 4.0, &mut r);
        assert_abs_diff_eq!(
            space.busemann(&id, &v, &x),
            s * busemann_flag(&space, &dir, &x),
            epsilon = 1e-9 * (1.0 + s)
        );
    }
}

#[test]
fn trait_busemann_serves_repeated_spectra() {
    // The trait route must fall back to the limit when the slope spectrum
    // is degenerate, keeping the anchored-slope identities.
    let space = SpdSpace::new(3);
    let id = space.identity();
    let s = 1.0 / 6.0_f64.sqrt();
    let v = diag_tangent(&space, &id, &[s, s, -2.0 * s]);
    assert_abs_diff_eq!(space.busemann(&id, &v, &id), 0.0, epsilon = 1e-9);
    for t in [0.5, 2.0] {
        let q = space.exp(&id, &v.scale(t));
        assert_abs_diff_eq!(space.busemann(&id, &v, &q), t, epsilon = 1e-9);
    }
}

#[test]
fn busemann_gradient_matches_finite_differences() {
    let space = SpdSpace::new(3);
    let mut r = rng(73);
    for _ in 0..10 {
        let p = point_in_ball(&space, &space.identity(), 2.0, &mut r);
        let v = unit_tangent(&space, &p, &mut r).scale(0.5 + 1.5 * r.random::<f64>());
        let x = point_in_ball(&space, &p, 3.0, &mut r);
        let grad = space.busemann_grad(&p, &v, &x);
        let fd = space.finite_diff_grad(&x, 1e-6, &mut |y| space.busemann(&p, &v, y));
        let gap = tangent_gap(&space, &grad, &fd);
        assert!(
            gap <= 1e-5,
            "gradient differs from finite differences by {gap:.3e}"
        );
    }
}

#[test]
fn busemann_gradient_norm_equals_the_slope() {
    let space = SpdSpace::new(3);
    let mut r = rng(79);
    for _ in 0..10 {
        let p = point_in_ball(&space, &space.identity(), 2.0, &mut r);
        let s = 0.25 + 3.0 * r.random::<f64>();
        let v = unit_tangent(&space, &p, &mut r).scale(s);
        let x = point_in_ball(&space, &p, 3.0, &mut r);
        let grad = space.busemann_grad(&p, &v, &x);
        assert_abs_diff_eq!(space.norm(&grad), s, epsilon = 1e-12 * (1.0 + s));
        let hint = grad.norm_hint.expect("gradient carries its norm");
        assert_abs_diff_eq!(hint, s, epsilon = 1e-12 * (1.0 + s));
    }
}

#[test]
fn busemann_gradient_at_the_anchor_points_down_the_ray() {
    // At the anchor the horofunction decreases fastest toward the ideal
    // point, so the gradient is −(−v̂)·s = v itself.
    let space = SpdSpace::new(3);
    let mut r = rng(83);
    for _ in 0..5 {
        let p = point_in_ball(&space, &space.identity(), 2.0, &mut r);
        let v = unit_tangent(&space, &p, &mut r).scale(0.5 + r.random::<f64>());
        let grad = space.busemann_grad(&p, &v, &p);
        let gap = tangent_gap(&space, &grad, &v);
        assert!(
            gap <= 1e-9,
            "anchor gradient differs from the slope by {gap:.3e}"
        );
    }
}

#[test]
fn busemann_gradient_serves_repeated_spectra() {
    // Degenerate slope spectra take the perturbed route; the gradient must
    // stay consistent with finite differences of the limit evaluation.
    let space = SpdSpace::new(3);
    let id = space.identity();
    let mut r = rng(89);
    let s = 1.0 / 6.0_f64.sqrt();
    let v = diag_tangent(&space, &id, &[s, s, -2.0 * s]).scale(1.5);
    let x = point_in_ball(&space, &id, 3.0, &mut r);
    let grad = space.busemann_grad(&id, &v, &x);
    let fd = space.finite_diff_grad(&x, 1e-6, &mut |y| space.busemann(&id, &v, y));
    let gap = tangent_gap(&space, &grad, &fd);
    assert!(
        gap <= 1e-5,
        "gradient differs from finite differences by {gap:.3e}"
    );
    assert_abs_diff_eq!(space.norm(&grad), 1.5, epsilon = 1e-9);
}
