//! Backend-tagged points and tangent vectors.
//!
//! Coordinates are flat `Vec<f64>` whose meaning depends on the backend:
//! the hyperboloid backend stores ambient Minkowski coordinates (`n + 1`
//! entries for the `n`-dimensional space), the SPD backend stores the matrix
//! row-major (`n²` entries). Keeping the representation flat and tagged lets
//! every layer above the backends stay fully generic while serialized points
//! remain self-describing.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Which family of manifold a point belongs to.
///
/// The set of backends is closed by design (this workspace does not accept
/// user-supplied manifolds); open-ended extension happens at the registry
/// level, where solvers and instance builders are looked up by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    /// Hyperbolic space in the hyperboloid model.
    Hyperbolic,
    /// Symmetric positive-definite matrices with the affine-invariant metric.
    Spd,
}

impl BackendKind {
    /// Stable lowercase name, matching the serialized form.
    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::Hyperbolic => "hyperbolic",
            BackendKind::Spd => "spd",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full identity of a backend instance: the family plus its size parameter
/// (`n` is the dimension for hyperbolic space, the matrix size for SPD).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BackendId {
    pub kind: BackendKind,
    pub n: usize,
}

impl BackendId {
    pub fn new(kind: BackendKind, n: usize) -> Self {
        Self { kind, n }
    }

    /// Length of the flat coordinate vector for points of this backend.
    pub fn ambient_len(self) -> usize {
        match self.kind {
            BackendKind::Hyperbolic => self.n + 1,
            BackendKind::Spd => self.n * self.n,
        }
    }
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.n)
    }
}

/// A point on a manifold, as flat coordinates tagged with its backend.
///
/// Serializes to the flat record `{"backend": "hyperbolic", "n": 2,
/// "coords": [...]}` so traces and configs stay self-describing without
/// nested structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PointRepr", try_from = "PointRepr")]
pub struct Point {
    pub backend: BackendId,
    pub coords: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    backend: BackendKind,
    n: usize,
    coords: Vec<f64>,
}

impl From<Point> for PointRepr {
    fn from(p: Point) -> Self {
        PointRepr {
            backend: p.backend.kind,
            n: p.backend.n,
            coords: p.coords,
        }
    }
}

impl TryFrom<PointRepr> for Point {
    type Error = String;

    fn try_from(r: PointRepr) -> Result<Self, String> {
        let backend = BackendId::new(r.backend, r.n);
        if r.coords.len() != backend.ambient_len() {
            return Err(format!(
                "point for {} needs {} coordinates, got {}",
                backend,
                backend.ambient_len(),
                r.coords.len()
            ));
        }
        if !r.coords.iter().all(|c| c.is_finite()) {
            return Err(format!("point for {backend} has non-finite coordinates"));
        }
        Ok(Point {
            backend,
            coords: r.coords,
        })
    }
}

/// A tangent vector, stored in ambient coordinates at an explicit base point.
///
/// Tangent spaces of both backends are linear subspaces of the ambient
/// coordinate space, so addition and scaling are coordinate-wise. Combining
/// tangents at different base points is a programmer error and panics; use
/// [`crate::Manifold::transport`] to move vectors first.
///
/// `norm_hint` optionally carries the exact Riemannian norm. Backends whose
/// coordinates grow exponentially with distance (the hyperboloid model) lose
/// the norm of a far-out tangent to cancellation in raw coordinates, while
/// the operations that *produce* such tangents (`log`, Busemann gradients,
/// transport) know the norm analytically. The hint is maintained exactly
/// under `scale` and transport, dropped by `add`/`axpy`, and never
/// serialized. When present it must equal the Riemannian norm; it is not
/// part of equality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tangent {
    pub base: Point,
    pub coords: Vec<f64>,
    #[serde(skip)]
    pub norm_hint: Option<f64>,
}

impl PartialEq for Tangent {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.coords == other.coords
    }
}

impl Tangent {
    /// Tangent with the given coordinates at `base` and no norm hint.
    pub fn new(base: &Point, coords: Vec<f64>) -> Self {
        Tangent {
            base: base.clone(),
            coords,
            norm_hint: None,
        }
    }

    /// The zero vector at `base`.
    pub fn zero(base: &Point) -> Self {
        Tangent {
            base: base.clone(),
            coords: vec![0.0; base.coords.len()],
            norm_hint: Some(0.0),
        }
    }

    /// Attach an analytically known Riemannian norm.
    pub fn with_hint(mut self, norm: f64) -> Self {
        self.norm_hint = Some(norm);
        self
    }

    /// `a · self`, at the same base.
    pub fn scale(&self, a: f64) -> Self {
        Tangent {
            base: self.base.clone(),
            coords: self.coords.iter().map(|c| a * c).collect(),
            norm_hint: self.norm_hint.map(|h| h * a.abs()),
        }
    }

    /// `self + other`; both must be based at the same point.
    pub fn add(&self, other: &Tangent) -> Self {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    /// In-place `self += a · other`; both must be based at the same point.
    /// Drops any norm hint (sums have no analytically tracked norm).
    pub fn axpy(&mut self, a: f64, other: &Tangent) {
        assert!(
            self.base == other.base,
            "tangent combination across distinct base points (transport first)"
        );
        for (s, o) in self.coords.iter_mut().zip(&other.coords) {
            *s += a * o;
        }
        self.norm_hint = None;
    }

    /// Euclidean norm of the raw coordinates (NOT the Riemannian norm; use
    /// [`crate::Manifold::norm`] for that). Handy for cheap zero checks.
    pub fn coord_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2_point(coords: Vec<f64>) -> Point {
        Point {
            backend: BackendId::new(BackendKind::Hyperbolic, 2),
            coords,
        }
    }

    #[test]
    fn point_serializes_to_flat_record() {
        let p = h2_point(vec![1.0, 0.0, 0.0]);
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"backend": "hyperbolic", "n": 2, "coords": [1.0, 0.0, 0.0]})
        );
        let back: Point = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn point_deserialization_rejects_wrong_coordinate_count() {
        let err = serde_json::from_value::<Point>(serde_json::json!({
            "backend": "spd", "n": 2, "coords": [1.0, 0.0, 0.0]
        }))
        .unwrap_err();
        assert!(
            err.to_string().contains("needs 4 coordinates"),
            "unexpected message: {err}"
        );
    }

    #[test]
    fn point_deserialization_rejects_non_finite_coordinates() {
        assert!(serde_json::from_value::<Point>(serde_json::json!({
            "backend": "hyperbolic", "n": 1, "coords": [1.0, f64::NAN]
        }))
        .is_err());
    }

    #[test]
    #[should_panic(expected = "distinct base points")]
    fn tangent_axpy_panics_across_bases() {
        let a = h2_point(vec![1.0, 0.0, 0.0]);
        let b = h2_point(vec![2.0, 0.0, 0.0]);
        let mut u = Tangent::zero(&a);
        let v = Tangent::zero(&b);
        u.axpy(1.0, &v);
    }

    #[test]
    fn tangent_linear_ops() {
        let p = h2_point(vec![1.0, 0.0, 0.0]);
        let u = Tangent::new(&p, vec![0.0, 1.0, 2.0]);
        let v = Tangent::new(&p, vec![0.0, -1.0, 0.5]);
        let w = u.scale(2.0).add(&v);
        assert_eq!(w.coords, vec![0.0, 1.0, 4.5]);
    }

    #[test]
    fn norm_hint_follows_scaling_and_drops_on_sums() {
        let p = h2_point(vec![1.0, 0.0, 0.0]);
        let u = Tangent::new(&p, vec![0.0, 3.0, 4.0]).with_hint(5.0);
        assert_eq!(u.scale(-2.0).norm_hint, Some(10.0));
        assert_eq!(u.add(&u).norm_hint, None);
        assert_eq!(Tangent::zero(&p).norm_hint, Some(0.0));
        // hints are not part of equality and do not serialize
        assert_eq!(u, Tangent::new(&p, vec![0.0, 3.0, 4.0]));
        let json = serde_json::to_string(&u).unwrap();
        assert!(!json.contains("hint"), "unexpected field in {json}");
    }
}
