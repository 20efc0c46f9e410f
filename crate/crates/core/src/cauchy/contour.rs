//! Circle contours enclosing a conjugate-symmetric point set inside a planar domain.

use num_complex::Complex;
use serde_json::{json, Value};

use crate::clifford::{complex_from_json, complex_to_json};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stem::PlanarDomain;

/// Default fraction of the available gap used as the circle radius.
pub const DEFAULT_RADIUS_FRAC: f64 = 0.5;

/// Positively oriented circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle<T> {
    pub center: Complex<T>,
    pub radius: T,
}

impl<T: Real> Circle<T> {
    /// Signed distance from `z` to the circle, negative inside.
    pub fn offset(&self, z: Complex<T>) -> T {
        (z - self.center).norm() - self.radius
    }
}

/// Union of disjoint positively oriented circles.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour<T> {
    pub circles: Vec<Circle<T>>,
    /// Starting node count per circle for the doubling quadrature.
    pub nodes_per_circle: usize,
}

/// How circles are sized relative to the free space around the enclosed points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPolicy<T> {
    /// Fraction in `(0, 1)` of the gap between a cluster and the nearest obstruction.
    pub radius_frac: T,
    /// Optional hard cap on circle radii.
    pub max_radius: Option<T>,
    pub nodes_per_circle: usize,
}

impl<T: Real> Default for ContourPolicy<T> {
    fn default() -> Self {
        ContourPolicy {
            radius_frac: T::lit(DEFAULT_RADIUS_FRAC),
            max_radius: None,
            nodes_per_circle: super::quadrature::DEFAULT_INITIAL_NODES,
        }
    }
}

impl<T: Real> ContourPolicy<T> {
    pub fn with_radius_frac(radius_frac: T) -> Self {
        ContourPolicy { radius_frac, ..Self::default() }
    }
}

struct Cluster<T> {
    points: Vec<Complex<T>>,
    cap: Option<T>,
}

impl<T: Real> Cluster<T> {
    fn center(&self) -> Complex<T> {
        let sum = self.points.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
        sum / T::from(self.points.len()).expect("cluster size fits in a float")
    }

    fn spread(&self, c: Complex<T>) -> T {
        self.points.iter().map(|&p| (p - c).norm()).fold(T::zero(), T::max)
    }
}

fn gap<T: Real>(z: Complex<T>, domain: &PlanarDomain<T>, excluded: &[Complex<T>]) -> T {
    excluded.iter().map(|&q| (q - z).norm()).fold(domain.inner_distance(z), T::min)
}

fn no_contour<T: Real>(z: Complex<T>, why: &str) -> Error {
    Error::NoContour(format!("{why} near {}{:+}i", z.re.to_f64_lossy(), z.im.to_f64_lossy()))
}

/// Places disjoint circles around `points` (mirrored to a conjugate-symmetric set).
///
/// Each cluster of points gets one circle. A lone point `p` gets radius
/// `frac * B(p)`, where `B` is the distance to the nearest of the domain boundary
/// and the `excluded` singularities. Clusters whose circles would meet are merged
/// around their centroid with radius `R + frac * (B - R)` for spread `R`; when that
/// does not fit, both circles are shrunk to stay disjoint.
pub fn build_contour<T: Real>(
    points: &[Complex<T>],
    domain: &PlanarDomain<T>,
    excluded: &[Complex<T>],
    policy: &ContourPolicy<T>,
) -> Result<Contour<T>> {
    if !(policy.radius_frac > T::zero() && policy.radius_frac < T::one()) {
        return Err(Error::Invalid("radius fraction must lie in (0, 1)".into()));
    }
    if policy.nodes_per_circle < 4 {
        return Err(Error::Invalid("a circle needs at least 4 quadrature nodes".into()));
    }
    let tiny = T::lit(1e-12);
    let mut distinct: Vec<Complex<T>> = Vec::new();
    for p in points.iter().flat_map(|&p| [p, p.conj()]) {
        let scale = T::one() + p.norm();
        if !distinct.iter().any(|&q| (q - p).norm() <= tiny * scale) {
            distinct.push(p);
        }
    }
    if distinct.is_empty() {
        return Err(Error::NoContour("no points to enclose".into()));
    }
    for &p in &distinct {
        if gap(p, domain, excluded) <= T::zero() {
            return Err(no_contour(p, "point on or outside the domain boundary, or on a singularity"));
        }
    }

    let mut clusters: Vec<Cluster<T>> = distinct.into_iter().map(|p| Cluster { points: vec![p], cap: None }).collect();
    loop {
        let circles = clusters
            .iter()
            .map(|c| circle_for(c, domain, excluded, policy))
            .collect::<Result<Vec<_>>>()?;
        let clash = (0..circles.len())
            .flat_map(|i| ((i + 1)..circles.len()).map(move |j| (i, j)))
            .find(|&(i, j)| (circles[i].center - circles[j].center).norm() <= circles[i].radius + circles[j].radius);
        let Some((i, j)) = clash else {
            return Ok(Contour { circles, nodes_per_circle: policy.nodes_per_circle });
        };
        let mut merged_points = clusters[i].points.clone();
        merged_points.extend_from_slice(&clusters[j].points);
        let merged = Cluster { points: merged_points, cap: None };
        if circle_for(&merged, domain, excluded, policy).is_ok() {
            clusters[i] = merged;
            clusters.remove(j);
            continue;
        }
        let d = (circles[i].center - circles[j].center).norm();
        let half = d * T::lit(0.45);
        for k in [i, j] {
            let c = clusters[k].center();
            if half <= clusters[k].spread(c) * T::lit(1.01) {
                return Err(no_contour(c, "spectral clusters too crowded to separate"));
            }
            clusters[k].cap = Some(half);
        }
    }
}

fn circle_for<T: Real>(
    cluster: &Cluster<T>,
    domain: &PlanarDomain<T>,
    excluded: &[Complex<T>],
    policy: &ContourPolicy<T>,
) -> Result<Circle<T>> {
    let center = cluster.center();
    let spread = cluster.spread(center);
    let b = gap(center, domain, excluded);
    if b <= spread {
        return Err(no_contour(center, "cluster does not fit inside the domain"));
    }
    let mut radius = spread + policy.radius_frac * (b - spread);
    if let Some(m) = policy.max_radius {
        radius = radius.min(m.max(spread * T::two()));
    }
    if let Some(cap) = cluster.cap {
        radius = radius.min(cap);
    }
    Ok(Circle { center, radius })
}

impl<T: Real> Contour<T> {
    /// Fails unless every point lies strictly inside some circle, away from the curve.
    pub fn check_encloses(&self, points: &[Complex<T>]) -> Result<()> {
        for &p in points {
            let inside = self.circles.iter().any(|c| c.offset(p) < -c.radius * T::lit(1e-9));
            if !inside {
                return Err(Error::ContourThroughSpectrum { re: p.re.to_f64_lossy(), im: p.im.to_f64_lossy() });
            }
        }
        Ok(())
    }

    /// Fails unless every closed disk lies in `domain` and avoids `excluded`.
    pub fn check_inside(&self, domain: &PlanarDomain<T>, excluded: &[Complex<T>]) -> Result<()> {
        for c in &self.circles {
            if !domain.contains_disk(c.center, c.radius) {
                return Err(no_contour(c.center, "circle leaves the function domain"));
            }
            if let Some(q) = excluded.iter().find(|&&q| c.offset(q) <= T::zero()) {
                return Err(no_contour(*q, "circle encloses a singularity"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let circles: Vec<Value> = self
            .circles
            .iter()
            .map(|c| json!({"c": complex_to_json(c.center), "r": c.radius.to_f64_lossy()}))
            .collect();
        json!({"circles": circles, "nodes": self.nodes_per_circle})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("malformed contour JSON: {what}"));
        let circles = v
            .get("circles")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("circles"))?
            .iter()
            .map(|c| {
                let center = complex_from_json(c.get("c").ok_or_else(|| bad("centre"))?)?;
                let radius = c.get("r").and_then(Value::as_f64).filter(|r| *r > 0.0).ok_or_else(|| bad("radius"))?;
                Ok(Circle { center, radius: T::lit(radius) })
            })
            .collect::<Result<Vec<_>>>()?;
        let nodes = v.get("nodes").and_then(Value::as_u64).unwrap_or(super::quadrature::DEFAULT_INITIAL_NODES as u64) as usize;
        Ok(Contour { circles, nodes_per_circle: nodes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn disk3() -> PlanarDomain<f64> {
        PlanarDomain::disk(cx(0.0, 0.0), 3.0).unwrap()
    }

    #[test]
    fn conjugate_pair_is_enclosed_symmetrically() {
        let c = build_contour(&[cx(0.0, 1.0)], &disk3(), &[], &ContourPolicy::default()).unwrap();
        assert_eq!(c.circles, vec![Circle { center: cx(0.0, 0.0), radius: 2.0 }]);
        let far = build_contour(&[cx(0.0, 1.0)], &PlanarDomain::disk(cx(0.0, 0.0), 1.5).unwrap().union(&PlanarDomain::disk(cx(0.0, 1.0), 0.6).unwrap()), &[], &ContourPolicy::default()).unwrap();
        assert_eq!(far.circles.len(), 2);
        assert_eq!(far.circles[0].center, cx(0.0, 1.0));
        assert_eq!(far.circles[1].center, cx(0.0, -1.0));
        c.check_encloses(&[cx(0.0, 1.0), cx(0.0, -1.0)]).unwrap();
        c.check_inside(&disk3(), &[]).unwrap();
    }

    #[test]
    fn real_point_gets_one_centred_circle() {
        let c = build_contour(&[cx(2.0, 0.0)], &disk3(), &[], &ContourPolicy::default()).unwrap();
        assert_eq!(c.circles, vec![Circle { center: cx(2.0, 0.0), radius: 0.5 }]);
    }

    #[test]
    fn boundary_point_is_rejected() {
        let r = build_contour(&[cx(3.0, 0.0)], &disk3(), &[], &ContourPolicy::default());
        assert!(matches!(r, Err(Error::NoContour(_))));
    }

    #[test]
    fn close_pair_is_merged_onto_the_axis() {
        let c = build_contour(&[cx(0.5, 0.01)], &disk3(), &[], &ContourPolicy::default()).unwrap();
        assert_eq!(c.circles.len(), 1);
        assert!(c.circles[0].center.im.abs() < 1e-15);
        c.check_encloses(&[cx(0.5, 0.01), cx(0.5, -0.01)]).unwrap();
    }

    #[test]
    fn singularities_limit_the_radius() {
        let c = build_contour(&[cx(0.0, 0.0)], &disk3(), &[cx(1.0, 0.0), cx(-1.0, 0.0)], &ContourPolicy::default()).unwrap();
        assert_eq!(c.circles[0].radius, 0.5);
        c.check_inside(&disk3(), &[cx(1.0, 0.0)]).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let c = build_contour(&[cx(0.0, 1.0), cx(2.0, 0.0)], &disk3(), &[], &ContourPolicy::default()).unwrap();
        assert_eq!(Contour::<f64>::from_json(&c.to_json()).unwrap(), c);
    }
}
