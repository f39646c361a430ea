use horo_hconvex::{certify_hconvex, HOracle, SqDistance};
use horo_hyperbolic::HyperbolicSpace;
use horo_manifold::sampling::{point_in_ball, rng};
use horo_manifold::Manifold;

#[test]
fn dbg_exactness() {
    let space = HyperbolicSpace::new(2);
    let center = space.origin();
    let f = SqDistance::new(&space, center.clone(), 1.0).unwrap();
    let mut r = rng(70);
    let pairs: Vec<_> = (0..50)
        .map(|_| {
            (
                point_in_ball(&space, &center, 4.0, &mut r),
                point_in_ball(&space, &center, 4.0, &mut r),
            )
        })
        .collect();
    let report = certify_hconvex(&space, &f, &pairs, 1.0).unwrap();
    println!("pass {} worst {:.3e}", report.pass, report.worst);
    let mut idx = 0;
    let mut w = f64::INFINITY;
    for (i, r0) in report.residuals.iter().enumerate() {
        if *r0 < w { w = *r0; idx = i; }
    }
    println!("worst raw {:.6e} at pair {}", w, idx);
    let (y, x) = &pairs[idx];
    let (fy, gy) = f.eval(&space, y);
    let (fx, _) = f.eval(&space, x);
    println!("fy {:.6} fx {:.6} d(y,c) {:.6} d(x,c) {:.6} d(y,x) {:.6}",
        fy, fx, space.dist(y, &center), space.dist(x, &center), space.dist(y, x));
    println!("gnorm {:.9} travel+d0 {:.6}", space.norm(&gy), space.norm(&gy) + space.dist(y, x));
    let q = horo_hconvex::QFunction::new(&space, y.clone(), gy, 1.0).unwrap();
    match q.minimizer() {
        Some(ypp) => println!("d(ypp, center) {:.3e}", space.dist(ypp, &center)),
        None => println!("NO MINIMIZER"),
    }
    println!("support {:.9}  fx-fy {:.9}", q.value(&space, x), fx - fy);
    panic!("debug only");
}
