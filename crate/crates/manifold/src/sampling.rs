//! Deterministic, seed-addressed random constructions.
//!
//! All randomness in the workspace flows through a counter-based ChaCha
//! generator seeded explicitly, so every instance, test, and trace is
//! reproducible byte-for-byte from its seed. Directions are drawn isotropically
//! in the tangent space via Gaussian frame coefficients.

use crate::manifold::Manifold;
use crate::point::{Point, Tangent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The workspace-wide seeded generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit tangent at `x`, direction uniform on the tangent sphere.
pub fn unit_tangent(m: &dyn Manifold, x: &Point, rng: &mut ChaCha8Rng) -> Tangent {
    loop {
        let mut v = m.zero_tangent(x);
        for e in m.frame(x) {
            let g: f64 = rng.sample(StandardNormal);
            v.axpy(g, &e);
        }
        let n = m.norm(&v);
        if n > 1e-6 {
            return v.scale(1.0 / n).with_hint(1.0);
        }
    }
}

/// Random point at distance exactly `d` from `center`, direction uniform.
pub fn point_at_distance(m: &dyn Manifold, center: &Point, d: f64, rng: &mut ChaCha8Rng) -> Point {
    assert!(d >= 0.0, "distance must be nonnegative, got {d}");
    if d == 0.0 {
        return center.clone();
    }
    let dir = unit_tangent(m, center, rng);
    m.exp(center, &dir.scale(d))
}

/// Random point in the closed ball of radius `radius` around `center`.
///
/// The radial law is `radius · u^{1/dim}` (uniform for the flat volume
/// element); directions are isotropic. This is an instance-generation
/// heuristic, not an exactly Riemannian-uniform sample.
pub fn point_in_ball(
    m: &dyn Manifold,
    center: &Point,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Point {
    assert!(radius >= 0.0, "radius must be nonnegative, got {radius}");
    let u: f64 = rng.random();
    let d = radius * u.powf(1.0 / m.manifold_dim() as f64);
    point_at_distance(m, center, d, rng)
}
