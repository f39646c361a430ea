//! Sampled certification of h-convexity and h-smoothness, the comparison
//! inequalities in bulk, and the classical counterexample showing the sum
//! of two horofunctions need not be h-convex.

use approx::assert_abs_diff_eq;
use horo_hconvex::{
    certify_hconvex, certify_hsmooth, law_of_cosines_check, quadruple_inequality_check,
    ComposedOracle, DistanceTo, HOracle, PowerGauge, ScaledBusemann, ScaledOracle, SqDistance,
    SumObjective, SupOracle,
};
use horo_hyperbolic::{chart::from_ball, HyperbolicSpace};
use horo_manifold::sampling::{point_in_ball, rng, unit_tangent};
use horo_manifold::{Manifold, Point, Tangent};
use horo_spd::SpdSpace;
use rand::Rng;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Seeded support/query pairs in a ball, the standard certification
/// workload.
fn sample_pairs(
    m: &dyn Manifold,
    center: &Point,
    radius: f64,
    count: usize,
    seed: u64,
) -> Vec<(Point, Point)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            (
                point_in_ball(m, center, radius, &mut r),
                point_in_ball(m, center, radius, &mut r),
            )
        })
        .collect()
}

#[test]
fn half_squared_distance_certifies_exactly_at_modulus_one() {
    let hyp = HyperbolicSpace::new(2);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let f = SqDistance::new(*space, center.clone(), 1.0).expect("positive coefficient");
        let pairs = sample_pairs(*space, center, 4.0, 50, 70);
        let report = certify_hconvex(*space, &f, &pairs, 1.0).expect("valid modulus");
        assert!(report.pass);
        // the support model of the squared distance closes without slack:
        // its shifted point is the center itself, and the two sides cancel
        for r in &report.residuals {
            assert_abs_diff_eq!(*r, 0.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn claiming_a_larger_modulus_than_one_fails_for_the_squared_distance() {
    let space = HyperbolicSpace::new(2);
    let center = space.origin();
    let f = SqDistance::new(&space, center.clone(), 1.0).expect("positive coefficient");
    let pairs = sample_pairs(&space, &center, 4.0, 50, 71);
    // the support is exact at modulus 1, and the model grows with the
    // claimed modulus, so any inflation sends the residuals negative
    let report = certify_hconvex(&space, &f, &pairs, 1.5).expect("valid modulus");
    assert!(!report.pass);
    assert!(report.worst < -1e-3);
}

#[test]
fn certified_modulus_nests_downward() {
    let hyp = HyperbolicSpace::new(2);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let f = SqDistance::new(*space, center.clone(), 1.0).expect("positive coefficient");
        let pairs = sample_pairs(*space, center, 4.0, 30, 72);
        for mu in [1.0, 0.6, 0.2, 0.0] {
            let report = certify_hconvex(*space, &f, &pairs, mu).expect("valid modulus");
            assert!(report.pass, "modulus {mu} must certify");
        }
    }
}

#[test]
fn distance_function_certifies_including_its_kink() {
    let hyp = HyperbolicSpace::new(2);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let f = DistanceTo::new(*space, center.clone());
        let mut pairs = sample_pairs(*space, center, 4.0, 50, 73);
        // support at the pole itself: the zero-scale horofunction is the
        // constant zero, a legitimate subgradient certificate there
        let mut r = rng(74);
        pairs.push((center.clone(), point_in_ball(*space, center, 4.0, &mut r)));
        let report = certify_hconvex(*space, &f, &pairs, 0.0).expect("valid modulus");
        assert!(report.pass);
        // the kink pair's residual is the full distance, strictly positive
        let last = *report.residuals.last().expect("nonempty");
        assert!(last > 0.1);
    }
}

#[test]
fn a_horofunction_supports_itself_without_slack() {
    let hyp = HyperbolicSpace::new(3);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let mut r = rng(75);
        let p = point_in_ball(*space, center, 2.0, &mut r);
        let v = unit_tangent(*space, &p, &mut r).scale(1.3);
        let f = ScaledBusemann::new(*space, p, v).expect("valid direction");
        let pairs = sample_pairs(*space, center, 3.0, 40, 76);
        let report = certify_hconvex(*space, &f, &pairs, 0.0).expect("valid modulus");
        assert!(report.pass);
        // the horofunction re-anchored at y is the same horofunction
        // shifted by its value: the certificate closes to rounding
        for r in &report.residuals {
            assert_abs_diff_eq!(*r, 0.0, epsilon = 1e-8);
        }
    }
}

#[test]
fn the_sum_of_two_horofunctions_fails_certification_at_the_witness() {
    let space = HyperbolicSpace::new(2);
    let origin = space.origin();
    // unit horofunctions of the two coordinate-axis ideal points
    let b1 = ScaledBusemann::new(
        &space,
        origin.clone(),
        Tangent::new(&origin, vec![0.0, -1.0, 0.0]),
    )
    .expect("valid direction");
    let b2 = ScaledBusemann::new(
        &space,
        origin.clone(),
        Tangent::new(&origin, vec![0.0, 0.0, -1.0]),
    )
    .expect("valid direction");
    let witness = from_ball(&space, &[FRAC_1_SQRT_2, 0.0]).expect("inside the ball");

    // the three ingredient values: the witness sits deep along the first
    // axis, symmetric between the axes' bisector
    let f1 = b1.value(&space, &witness);
    let f2 = b2.value(&space, &witness);
    assert_abs_diff_eq!(f1, -1.762_747_174_039_086_1, epsilon = 1e-11);
    assert_abs_diff_eq!(f2, 1.098_612_288_668_109_8, epsilon = 1e-11);

    // f = B₁ + B₂ via the combinators; its gradient at the origin points
    // along the bisector, whose own horofunction vanishes at the witness
    let sum = SumObjective::new(vec![Box::new(b1), Box::new(b2)]).expect("nonempty");
    let f = ScaledOracle::new(Box::new(sum), 2.0).expect("nonnegative factor");
    let (f0, g0) = f.eval(&space, &origin);
    assert_abs_diff_eq!(f0, 0.0, epsilon = 1e-14);
    let support = space.busemann(&origin, &g0, &witness);
    assert_abs_diff_eq!(support, 0.0, epsilon = 1e-11);

    // so the candidate certificate misses by the full value drop at the
    // witness, and certification reports the violation
    let report =
        certify_hconvex(&space, &f, &[(origin, witness)], 0.0).expect("valid modulus");
    assert!(!report.pass);
    assert_abs_diff_eq!(
        report.residuals[0],
        -0.664_134_885_370_976_3,
        epsilon = 1e-9
    );
}

#[test]
fn scaling_certifies_at_the_scaled_modulus() {
    let space = SpdSpace::new(2);
    let center = space.identity();
    let f = ScaledOracle::new(
        Box::new(SqDistance::new(&space, center.clone(), 1.0).expect("positive coefficient")),
        0.3,
    )
    .expect("nonnegative factor");
    assert_abs_diff_eq!(f.mu(), 0.3, epsilon = 1e-15);
    let pairs = sample_pairs(&space, &center, 4.0, 30, 77);
    let report = certify_hconvex(&space, &f, &pairs, 0.3).expect("valid modulus");
    assert!(report.pass);
    for r in &report.residuals {
        assert_abs_diff_eq!(*r, 0.0, epsilon = 1e-9);
    }
}

#[test]
fn suprema_of_horofunctions_stay_certifiable() {
    let space = HyperbolicSpace::new(2);
    let origin = space.origin();
    let mut r = rng(78);
    let pa = point_in_ball(&space, &origin, 1.5, &mut r);
    let pb = point_in_ball(&space, &origin, 1.5, &mut r);
    let va = unit_tangent(&space, &pa, &mut r).scale(0.8);
    let vb = unit_tangent(&space, &pb, &mut r).scale(1.1);
    let sup = SupOracle::new(
        Box::new(ScaledBusemann::new(&space, pa, va).expect("valid direction")),
        Box::new(ScaledBusemann::new(&space, pb, vb).expect("valid direction")),
    );
    let pairs = sample_pairs(&space, &origin, 3.0, 60, 79);
    let report = certify_hconvex(&space, &sup, &pairs, 0.0).expect("valid modulus");
    assert!(report.pass);
}

#[test]
fn power_compositions_certify_at_both_claims() {
    let space = HyperbolicSpace::new(2);
    let center = space.origin();
    let f = ComposedOracle::new(
        Box::new(DistanceTo::new(&space, center.clone())),
        Box::new(PowerGauge::new(2.0).expect("exponent at least one")),
    );
    // the composition itself only promises plain h-convexity
    assert_eq!(f.mu(), 0.0);
    let pairs = sample_pairs(&space, &center, 4.0, 40, 80);
    let plain = certify_hconvex(&space, &f, &pairs, 0.0).expect("valid modulus");
    assert!(plain.pass);
    // but this particular composition is the squared distance, so the
    // caller-supplied sharper claim certifies too
    let sharp = certify_hconvex(&space, &f, &pairs, 1.0).expect("valid modulus");
    assert!(sharp.pass);
}

#[test]
fn constant_zero_oracle_certifies_trivially() {
    let space = HyperbolicSpace::new(2);
    let origin = space.origin();
    let f = ScaledBusemann::new(&space, origin.clone(), Tangent::zero(&origin))
        .expect("zero is a valid member");
    let pairs = sample_pairs(&space, &origin, 3.0, 20, 81);
    let report = certify_hconvex(&space, &f, &pairs, 0.0).expect("valid modulus");
    assert!(report.pass);
    for r in &report.residuals {
        assert_eq!(*r, 0.0);
    }
}

#[test]
fn half_squared_distance_is_one_smooth() {
    let hyp = HyperbolicSpace::new(2);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let f = SqDistance::new(*space, center.clone(), 1.0).expect("positive coefficient");
        let pairs = sample_pairs(*space, center, 4.0, 40, 82);
        let report = certify_hsmooth(*space, &f, &pairs, 1.0).expect("valid constant");
        assert!(report.pass);
        // at the exact constant both the upper model and the descent step
        // close without slack: the gradient step lands on the center
        for r in report.upper.iter().chain(report.descent.iter()) {
            assert_abs_diff_eq!(*r, 0.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn an_understated_smoothness_constant_is_rejected() {
    let space = HyperbolicSpace::new(2);
    let center = space.origin();
    let f = SqDistance::new(&space, center.clone(), 1.0).expect("positive coefficient");
    let pairs = sample_pairs(&space, &center, 4.0, 40, 83);
    let report = certify_hsmooth(&space, &f, &pairs, 0.3).expect("valid constant");
    assert!(!report.pass);
    assert!(report.worst < -1e-2);
}

#[test]
fn horofunctions_are_smooth_at_every_constant() {
    let hyp = HyperbolicSpace::new(3);
    let spd = SpdSpace::new(2);
    let spaces: [(&dyn Manifold, Point); 2] = [(&hyp, hyp.origin()), (&spd, spd.identity())];
    for (space, center) in &spaces {
        let mut r = rng(84);
        let p = point_in_ball(*space, center, 1.5, &mut r);
        let v = unit_tangent(*space, &p, &mut r).scale(0.9);
        let f = ScaledBusemann::new(*space, p, v).expect("valid direction");
        let pairs = sample_pairs(*space, center, 2.5, 30, 85);
        for lip in [0.5, 2.0] {
            let report = certify_hsmooth(*space, &f, &pairs, lip).expect("valid constant");
            assert!(report.pass, "constant {lip} must certify");
        }
    }
}

#[test]
fn comparison_inequalities_hold_in_bulk() {
    let hyp = HyperbolicSpace::new(3);
    let spd = SpdSpace::new(3);
    let configs: [(&dyn Manifold, Point, usize); 2] =
        [(&hyp, hyp.origin(), 1000), (&spd, spd.identity(), 200)];
    for (space, center, count) in &configs {
        let mut r = rng(86);
        let mut worst = f64::INFINITY;
        for _ in 0..*count {
            let y = point_in_ball(*space, center, 2.5, &mut r);
            let x = point_in_ball(*space, center, 2.5, &mut r);
            let s = r.random_range(0.3..1.2);
            let v = unit_tangent(*space, &y, &mut r).scale(s);
            let lip = r.random_range(0.3..2.0);
            let mu = r.random_range((0.15_f64).min(lip)..=lip);
            let res = law_of_cosines_check(*space, &y, &v, &x, mu, lip).expect("valid moduli");
            assert!(
                res.pass(),
                "violation at mu = {mu}, lip = {lip}: {res:?}"
            );
            worst = worst
                .min(res.busemann_upper)
                .min(res.model_upper)
                .min(res.point_form);
        }
        // the inequalities are strict away from flats, so the sampled
        // worst case stays clear of the tolerance floor
        assert!(worst > -1e-12, "worst residual {worst}");
    }
}

#[test]
fn comparison_inequalities_collapse_for_a_zero_direction() {
    let space = HyperbolicSpace::new(2);
    let mut r = rng(87);
    let y = point_in_ball(&space, &space.origin(), 2.0, &mut r);
    let x = point_in_ball(&space, &space.origin(), 2.0, &mut r);
    let res = law_of_cosines_check(&space, &y, &Tangent::zero(&y), &x, 0.5, 1.5)
        .expect("valid moduli");
    // with no direction every bound is the same paraboloid: all residuals
    // are exact differences of equal quantities
    assert_abs_diff_eq!(res.busemann_upper, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(res.model_upper, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(res.point_form, 0.0, epsilon = 1e-12);
}

#[test]
fn comparison_check_rejects_misordered_moduli() {
    let space = HyperbolicSpace::new(2);
    let mut r = rng(88);
    let y = point_in_ball(&space, &space.origin(), 1.0, &mut r);
    let x = point_in_ball(&space, &space.origin(), 1.0, &mut r);
    let v = unit_tangent(&space, &y, &mut r);
    assert!(law_of_cosines_check(&space, &y, &v, &x, 0.0, 1.0).is_err());
    assert!(law_of_cosines_check(&space, &y, &v, &x, 2.0, 1.0).is_err());
    assert!(law_of_cosines_check(&space, &y, &v, &x, 0.5, f64::NAN).is_err());
}

#[test]
fn quadruple_inequality_holds_in_bulk() {
    let hyp = HyperbolicSpace::new(3);
    let spd = SpdSpace::new(2);
    let configs: [(&dyn Manifold, Point, usize); 2] =
        [(&hyp, hyp.origin(), 1000), (&spd, spd.identity(), 200)];
    for (space, center, count) in &configs {
        let mut r = rng(89);
        for _ in 0..*count {
            let x = point_in_ball(*space, center, 3.0, &mut r);
            let xp = point_in_ball(*space, center, 3.0, &mut r);
            let y = point_in_ball(*space, center, 3.0, &mut r);
            let yp = point_in_ball(*space, center, 3.0, &mut r);
            let res = quadruple_inequality_check(*space, &x, &xp, &y, &yp);
            assert!(res >= -1e-9, "violation: residual {res}");
        }
    }
}

#[test]
fn quadruple_inequality_degenerates_to_squared_distances() {
    let space = SpdSpace::new(2);
    let mut r = rng(90);
    let x = point_in_ball(&space, &space.identity(), 2.0, &mut r);
    let y = point_in_ball(&space, &space.identity(), 2.0, &mut r);
    let yp = point_in_ball(&space, &space.identity(), 2.0, &mut r);
    // coinciding segment endpoints: the zero-scale horofunction vanishes
    // and only the perturbation costs remain
    let res = quadruple_inequality_check(&space, &x, &x, &y, &yp);
    let d = space.dist(&y, &yp);
    assert_abs_diff_eq!(res, 0.5 * d * d, epsilon = 1e-10);
}
