use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C;

/// Closed parameter domain in the complex plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum Domain {
    Disk {
        radius: f64,
    },
    Circle {
        radius: f64,
    },
    Annulus {
        inner: f64,
        outer: f64,
    },
    Segment {
        #[serde(with = "point")]
        from: C,
        #[serde(with = "point")]
        to: C,
    },
}

/// Points in spec files: a bare real number or a `[re, im]` pair.
mod point {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Lit {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C, D::Error> {
        Ok(match Lit::deserialize(d)? {
            Lit::Real(re) => C::new(re, 0.0),
            Lit::Pair([re, im]) => C::new(re, im),
        })
    }
}

/// Discretization of one parameter domain.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DomainMesh {
    pub points: Vec<C>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<[usize; 2]>,
}

/// Per-shape resolution. Refinement doubles every count, so refined point
/// sets contain the coarser ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamGrid {
    pub radial: usize,
    pub angular: usize,
    pub circle: usize,
    pub segment: usize,
    pub level: u32,
}

impl Default for ParamGrid {
    fn default() -> Self {
        ParamGrid {
            radial: 8,
            angular: 16,
            circle: 32,
            segment: 16,
            level: 0,
        }
    }
}

impl ParamGrid {
    pub fn new(radial: usize, angular: usize) -> Self {
        ParamGrid {
            radial: radial.max(1),
            angular: angular.max(3),
            circle: (2 * angular).max(3),
            segment: angular.max(1),
            level: 0,
        }
    }

    pub fn refine(&self) -> Self {
        ParamGrid {
            radial: self.radial * 2,
            angular: self.angular * 2,
            circle: self.circle * 2,
            segment: self.segment * 2,
            level: self.level + 1,
        }
    }
}

const RADIAL_TOL: f64 = 1e-12;

impl Domain {
    pub fn unit_disk() -> Self {
        Domain::Disk { radius: 1.0 }
    }

    pub fn point(z: C) -> Self {
        Domain::Segment { from: z, to: z }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        let valid = match *self {
            Domain::Disk { radius } | Domain::Circle { radius } => ok(radius),
            Domain::Annulus { inner, outer } => ok(inner) && ok(outer) && inner <= outer,
            Domain::Segment { from, to } => {
                from.re.is_finite() && from.im.is_finite() && to.re.is_finite() && to.im.is_finite()
            }
        };
        if valid {
            Ok(())
        } else {
            Err(Error::InvalidFamily(format!("malformed domain {self:?}")))
        }
    }

    /// `(inner, outer)` modulus range for domains invariant under rotation.
    pub fn radial_range(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Disk { radius } => Some((0.0, radius)),
            Domain::Circle { radius } => Some((radius, radius)),
            Domain::Annulus { inner, outer } => Some((inner, outer)),
            Domain::Segment { .. } => None,
        }
    }

    pub fn is_rotation_invariant(&self) -> bool {
        self.radial_range().is_some()
    }

    pub fn max_modulus(&self) -> f64 {
        match *self {
            Domain::Disk { radius } | Domain::Circle { radius } => radius,
            Domain::Annulus { outer, .. } => outer,
            Domain::Segment { from, to } => from.norm().max(to.norm()),
        }
    }

    pub fn contains(&self, z: C, tol: f64) -> bool {
        match *self {
            Domain::Disk { radius } => z.norm() <= radius + tol,
            Domain::Circle { radius } => (z.norm() - radius).abs() <= tol,
            Domain::Annulus { inner, outer } => z.norm() >= inner - tol && z.norm() <= outer + tol,
            Domain::Segment { from, to } => distance_to_segment(z, from, to) <= tol,
        }
    }

    /// Points of maximal modulus, where a dilation `P_x` with `|x| < 1` can
    /// no longer be factored out. `None` for rotation-invariant domains, whose
    /// maximal set is the outer circle.
    pub fn extreme_points(&self) -> Option<Vec<C>> {
        match *self {
            Domain::Segment { from, to } => {
                let m = self.max_modulus();
                let mut pts = vec![];
                for p in [from, to] {
                    if (p.norm() - m).abs() <= RADIAL_TOL * m.max(1.0) && !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                Some(pts)
            }
            _ => None,
        }
    }

    /// Discretize the domain. Disks and annuli get a polar triangulation,
    /// circles and segments a polyline.
    pub fn mesh(&self, grid: &ParamGrid) -> DomainMesh {
        match *self {
            Domain::Disk { radius } => polar_mesh(0.0, radius, grid),
            Domain::Annulus { inner, outer } => polar_mesh(inner, outer, grid),
            Domain::Circle { radius } => {
                if radius == 0.0 {
                    return single(C::new(0.0, 0.0));
                }
                let n = grid.circle.max(3);
                let points = (0..n)
                    .map(|j| C::from_polar(radius, 2.0 * PI * j as f64 / n as f64))
                    .collect();
                let edges = (0..n).map(|j| [j, (j + 1) % n]).collect();
                DomainMesh {
                    points,
                    triangles: vec![],
                    edges,
                }
            }
            Domain::Segment { from, to } => {
                if from == to {
                    return single(from);
                }
                let n = grid.segment.max(1);
                let points = (0..=n).map(|j| from + (to - from) * (j as f64 / n as f64)).collect();
                let edges = (0..n).map(|j| [j, j + 1]).collect();
                DomainMesh {
                    points,
                    triangles: vec![],
                    edges,
                }
            }
        }
    }

    /// Largest distance from a domain point to the nearest mesh point.
    pub fn covering_radius(&self, grid: &ParamGrid) -> f64 {
        match *self {
            Domain::Disk { radius } => radius / grid.radial as f64 + PI * radius / grid.angular as f64,
            Domain::Annulus { inner, outer } => {
                (outer - inner) / grid.radial as f64 + PI * outer / grid.angular as f64
            }
            Domain::Circle { radius } => PI * radius / grid.circle as f64,
            Domain::Segment { from, to } => (to - from).norm() / (2.0 * grid.segment as f64),
        }
    }
}

fn single(z: C) -> DomainMesh {
    DomainMesh {
        points: vec![z],
        triangles: vec![],
        edges: vec![],
    }
}

fn polar_mesh(inner: f64, outer: f64, grid: &ParamGrid) -> DomainMesh {
    if outer == 0.0 {
        return single(C::new(0.0, 0.0));
    }
    let a = grid.angular.max(3);
    let rings = grid.radial.max(1);
    let mut points = Vec::new();
    let mut triangles = Vec::new();
    let ring = |rad: f64| (0..a).map(move |j| C::from_polar(rad, 2.0 * PI * j as f64 / a as f64));
    if inner == 0.0 {
        points.push(C::new(0.0, 0.0));
        for i in 1..=rings {
            points.extend(ring(outer * i as f64 / rings as f64));
        }
        let idx = |i: usize, j: usize| 1 + (i - 1) * a + j % a;
        for j in 0..a {
            triangles.push([0, idx(1, j), idx(1, j + 1)]);
        }
        for i in 1..rings {
            for j in 0..a {
                triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
    } else {
        for i in 0..=rings {
            points.extend(ring(inner + (outer - inner) * i as f64 / rings as f64));
        }
        let idx = |i: usize, j: usize| i * a + j % a;
        if outer > inner {
            for i in 0..rings {
                for j in 0..a {
                    triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                    triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
                }
            }
        }
    }
    DomainMesh {
        points,
        triangles,
        edges: vec![],
    }
}

pub(crate) fn distance_to_segment(z: C, a: C, b: C) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * d.conj()).re / len2;
    (z - (a + d * t.clamp(0.0, 1.0))).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_mesh_counts_and_nesting() {
        let d = Domain::Disk { radius: 1.0 };
        let g = ParamGrid::default();
        let m = d.mesh(&g);
        assert_eq!(m.points.len(), 1 + 8 * 16);
        assert_eq!(m.triangles.len(), 16 + 7 * 16 * 2);
        let fine = d.mesh(&g.refine());
        for p in &m.points {
            assert!(fine.points.iter().any(|q| (p - q).norm() < 1e-12));
        }
        assert!(m.points.iter().all(|p| d.contains(*p, 1e-12)));
    }

    #[test]
    fn circle_mesh_four_points() {
        let mut g = ParamGrid::default();
        g.circle = 4;
        let m = Domain::Circle { radius: 1.0 }.mesh(&g);
        let want = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)];
        for (p, w) in m.points.iter().zip(want) {
            assert!((p - w).norm() < 1e-15);
        }
    }

    #[test]
    fn segment_extremes() {
        let s = Domain::Segment {
            from: C::new(-1.0, 0.0),
            to: C::new(1.0, 0.0),
        };
        assert_eq!(s.extreme_points().unwrap().len(), 2);
        let p = Domain::point(C::new(0.5, 0.0));
        assert_eq!(p.mesh(&ParamGrid::default()).points, vec![C::new(0.5, 0.0)]);
        assert_eq!(distance_to_segment(C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(1.0, 0.0)), 1.0);
    }

    #[test]
    fn domain_literals() {
        let d: Domain = serde_json::from_str(r#"{"shape":"segment","from":1,"to":[0.5,-0.5]}"#).unwrap();
        assert_eq!(
            d,
            Domain::Segment {
                from: C::new(1.0, 0.0),
                to: C::new(0.5, -0.5)
            }
        );
        assert!(Domain::Annulus { inner: 2.0, outer: 1.0 }.validate().is_err());
        assert!(Domain::Disk { radius: f64::NAN }.validate().is_err());
    }
}
