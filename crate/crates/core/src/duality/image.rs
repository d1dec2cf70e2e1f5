//! Point clouds for `λ(V)` and for unions of images `(f * g)(D̄)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{apply, Functional};
use crate::config::Config;
use crate::contour::ser_complex;
use crate::error::Result;
use crate::family::{border_elements, Domain, FamilySpec};
use crate::C;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointFlag {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudPoint {
    #[serde(serialize_with = "ser_complex")]
    pub value: C,
    pub error_bound: f64,
    pub member: String,
    /// Where the value was taken: `z = 1` for functional values.
    #[serde(serialize_with = "ser_complex")]
    pub at: C,
    pub flag: PointFlag,
}

/// Certified values plus the image of the parameter cell complex.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RegionCloud {
    pub points: Vec<CloudPoint>,
    #[serde(skip)]
    pub triangles: Vec<[usize; 3]>,
    /// Longest edge of a nondegenerate image triangle, or the largest
    /// nearest-neighbour distance when there are none.
    pub spacing: f64,
}

impl RegionCloud {
    pub fn values(&self) -> impl Iterator<Item = C> + '_ {
        self.points.iter().map(|p| p.value)
    }

    pub fn par_iter_values(&self) -> impl ParallelIterator<Item = C> + '_ {
        self.points.par_iter().map(|p| p.value)
    }

    pub fn boundary(&self) -> impl Iterator<Item = &CloudPoint> {
        self.points.iter().filter(|p| p.flag == PointFlag::Boundary)
    }

    /// Distance from `z` to the nearest cloud value.
    pub fn distance_to(&self, z: C) -> f64 {
        self.values().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_distance(&self, z: C) -> f64 {
        self.boundary().map(|p| (p.value - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Distance from `z` to the filled region: 0 inside an image triangle,
    /// otherwise the distance to the nearest triangle or point.
    pub fn region_distance(&self, z: C) -> f64 {
        let tri = self
            .triangles
            .iter()
            .map(|t| triangle_distance(z, self.corners(t)))
            .fold(f64::INFINITY, f64::min);
        tri.min(self.distance_to(z))
    }

    fn corners(&self, t: &[usize; 3]) -> [C; 3] {
        [self.points[t[0]].value, self.points[t[1]].value, self.points[t[2]].value]
    }

    /// CSV with columns `re,im,tag,flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,tag,flag\n");
        for p in &self.points {
            let flag = match p.flag {
                PointFlag::Interior => "interior",
                PointFlag::Boundary => "boundary",
            };
            let _ = writeln!(out, "{},{},\"{}\",{}", p.value.re, p.value.im, p.member, flag);
        }
        out
    }

    fn finish(mut self) -> Self {
        self.spacing = mesh_spacing(&self);
        let index = Locator::new(&self);
        let flags: Vec<PointFlag> = self
            .points
            .par_iter()
            .map(|p| {
                if index.surrounds(p.value) {
                    PointFlag::Interior
                } else {
                    PointFlag::Boundary
                }
            })
            .collect();
        for (p, f) in self.points.iter_mut().zip(flags) {
            if p.flag != PointFlag::Boundary {
                p.flag = f;
            }
        }
        self
    }
}

/// `{λ(f) : f sampled from V}` with the parameter mesh carried over.
pub fn functional_image(lambda: &Functional, v: &FamilySpec, cfg: &Config) -> Result<RegionCloud> {
    v.validate()?;
    let sample = v.sample_mesh(&cfg.grid, cfg.trunc.max(lambda.kernel.order()));
    let points = sample
        .members
        .par_iter()
        .map(|m| {
            apply(lambda, &m.series).map(|r| CloudPoint {
                value: r.value,
                error_bound: r.error_bound,
                member: m.tag.to_string(),
                at: C::new(1.0, 0.0),
                flag: PointFlag::Interior,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionCloud {
        points,
        triangles: sample.triangles,
        spacing: 0.0,
    }
    .finish())
}

/// `∪ (f * g)(D̄)` over sampled `f ∈ bor(V)`, evaluated on the disk mesh.
/// Images of the unit circle are flagged as boundary candidates.
pub fn image_via_border(lambda: &Functional, v: &FamilySpec, cfg: &Config) -> Result<RegionCloud> {
    let bor = border_elements(v)?;
    let trunc = cfg.trunc.max(lambda.kernel.order());
    let members = bor.sample(&cfg.grid, trunc);
    let disk = Domain::unit_disk().mesh(&cfg.grid);
    let per: Vec<Vec<CloudPoint>> = members
        .par_iter()
        .map(|m| {
            let h = m.series.convolve(&lambda.kernel);
            disk.points
                .iter()
                .map(|&z| {
                    let r = h.eval(z);
                    CloudPoint {
                        value: r.value,
                        error_bound: r.error_bound,
                        member: m.tag.to_string(),
                        at: z,
                        flag: if (z.norm() - 1.0).abs() < 1e-12 {
                            PointFlag::Boundary
                        } else {
                            PointFlag::Interior
                        },
                    }
                })
                .collect()
        })
        .collect();
    let mut cloud = RegionCloud::default();
    for pts in per {
        let offset = cloud.points.len();
        cloud.points.extend(pts);
        cloud
            .triangles
            .extend(disk.triangles.iter().map(|t| [t[0] + offset, t[1] + offset, t[2] + offset]));
    }
    cloud.spacing = mesh_spacing(&cloud);
    Ok(cloud)
}

/// Values `(f * g)(e^{iθ})` over sampled `f ∈ bor(V)` and `n` angles.
pub(crate) fn border_circle_images(lambda: &Functional, v: &FamilySpec, cfg: &Config, n: usize) -> Result<Vec<C>> {
    let bor = border_elements(v)?;
    let members = bor.sample(&cfg.grid, cfg.trunc.max(lambda.kernel.order()));
    Ok(members
        .par_iter()
        .flat_map_iter(|m| {
            let h = m.series.convolve(&lambda.kernel);
            (0..n).map(move |j| h.eval(C::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).value)
        })
        .collect())
}

const DEGENERATE: f64 = 1e-12;

fn mesh_spacing(cloud: &RegionCloud) -> f64 {
    let mut longest: f64 = 0.0;
    for t in &cloud.triangles {
        let [a, b, c] = cloud.corners(t);
        if signed_area(a, b, c).abs() <= DEGENERATE {
            continue;
        }
        longest = longest.max((a - b).norm()).max((b - c).norm()).max((c - a).norm());
    }
    if longest > 0.0 {
        return longest;
    }
    let vals: Vec<C> = cloud.values().collect();
    let mut spacing: f64 = 0.0;
    for (i, &p) in vals.iter().enumerate() {
        let nearest = vals
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && (q - p).norm() > DEGENERATE)
            .map(|(_, q)| (q - p).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest.is_finite() {
            spacing = spacing.max(nearest);
        }
    }
    spacing
}

fn signed_area(a: C, b: C, c: C) -> f64 {
    0.5 * ((b - a).conj() * (c - a)).im
}

fn in_triangle(p: C, [a, b, c]: [C; 3]) -> bool {
    let area = signed_area(a, b, c);
    if area.abs() <= DEGENERATE {
        return false;
    }
    let tol = -1e-12 * area.abs();
    let s = area.signum();
    signed_area(a, b, p) * s >= tol && signed_area(b, c, p) * s >= tol && signed_area(c, a, p) * s >= tol
}

fn segment_distance(p: C, a: C, b: C) -> f64 {
    crate::family::distance_to_segment(p, a, b)
}

fn edge_distance(p: C, [a, b, c]: [C; 3]) -> f64 {
    segment_distance(p, a, b)
        .min(segment_distance(p, b, c))
        .min(segment_distance(p, c, a))
}

fn triangle_distance(p: C, corners: [C; 3]) -> f64 {
    if in_triangle(p, corners) {
        return 0.0;
    }
    edge_distance(p, corners)
}

/// Bucket size: about one triangle per cell, but no triangle spans more than
/// four cells per axis.
fn index_cell(cloud: &RegionCloud) -> f64 {
    if cloud.spacing <= 0.0 {
        return 1.0;
    }
    let (lo, hi) = bounds(cloud.values());
    let area = (hi.re - lo.re).max(cloud.spacing) * (hi.im - lo.im).max(cloud.spacing);
    let density = (area / cloud.triangles.len().max(1) as f64).sqrt();
    density.clamp(cloud.spacing / 4.0, cloud.spacing)
}

fn bounds(values: impl Iterator<Item = C>) -> (C, C) {
    let mut lo = C::new(f64::INFINITY, f64::INFINITY);
    let mut hi = C::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = C::new(lo.re.min(v.re), lo.im.min(v.im));
        hi = C::new(hi.re.max(v.re), hi.im.max(v.im));
    }
    (lo, hi)
}

type Key = (i64, i64);

/// Uniform spatial hash. Items are listed in every cell their bounding box
/// meets, so anything missing from the cells within `r` rings of a query
/// point is at least `r * cell` away.
struct Buckets {
    cell: f64,
    map: HashMap<Key, Vec<usize>>,
    lo: Key,
    hi: Key,
}

const MAX_RINGS: i64 = 1 << 12;

impl Buckets {
    fn new(cell: f64) -> Self {
        Buckets {
            cell,
            map: HashMap::new(),
            lo: (i64::MAX, i64::MAX),
            hi: (i64::MIN, i64::MIN),
        }
    }

    fn key(&self, z: C) -> Key {
        ((z.re / self.cell).floor() as i64, (z.im / self.cell).floor() as i64)
    }

    fn insert(&mut self, item: usize, lo: C, hi: C) {
        let (a, b) = (self.key(lo), self.key(hi));
        self.lo = (self.lo.0.min(a.0), self.lo.1.min(a.1));
        self.hi = (self.hi.0.max(b.0), self.hi.1.max(b.1));
        for i in a.0..=b.0 {
            for j in a.1..=b.1 {
                self.map.entry((i, j)).or_default().push(item);
            }
        }
    }

    fn at(&self, z: C) -> &[usize] {
        self.map.get(&self.key(z)).map_or(&[], Vec::as_slice)
    }

    /// Smallest `dist(item)`, searching rings of cells outward from `z`.
    fn nearest(&self, z: C, dist: impl Fn(usize) -> f64) -> f64 {
        if self.map.is_empty() {
            return f64::INFINITY;
        }
        let (kx, ky) = self.key(z);
        let reach = (kx - self.lo.0)
            .abs()
            .max((self.hi.0 - kx).abs())
            .max((ky - self.lo.1).abs())
            .max((self.hi.1 - ky).abs());
        let mut best = f64::INFINITY;
        if reach > MAX_RINGS {
            for items in self.map.values() {
                for &i in items {
                    best = best.min(dist(i));
                }
            }
            return best;
        }
        for r in 0..=reach {
            let mut visit = |i: i64, j: i64| {
                if let Some(items) = self.map.get(&(i, j)) {
                    for &it in items {
                        best = best.min(dist(it));
                    }
                }
            };
            if r == 0 {
                visit(kx, ky);
            } else {
                for d in -r..=r {
                    visit(kx + d, ky - r);
                    visit(kx + d, ky + r);
                }
                for d in -r + 1..r {
                    visit(kx - r, ky + d);
                    visit(kx + r, ky + d);
                }
            }
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// Spatial index over a cloud for repeated distance queries.
pub struct Locator<'a> {
    cloud: &'a RegionCloud,
    triangles: Buckets,
    points: Buckets,
    boundary: Buckets,
}

const PROBES: usize = 16;

impl<'a> Locator<'a> {
    pub fn new(cloud: &'a RegionCloud) -> Self {
        let cell = index_cell(cloud);
        let mut triangles = Buckets::new(cell);
        for (ti, t) in cloud.triangles.iter().enumerate() {
            let cs = cloud.corners(t);
            if signed_area(cs[0], cs[1], cs[2]).abs() <= DEGENERATE {
                continue;
            }
            let (lo, hi) = bounds(cs.into_iter());
            triangles.insert(ti, lo, hi);
        }
        let mut points = Buckets::new(cell);
        let mut boundary = Buckets::new(cell);
        for (i, p) in cloud.points.iter().enumerate() {
            points.insert(i, p.value, p.value);
            if p.flag == PointFlag::Boundary {
                boundary.insert(i, p.value, p.value);
            }
        }
        Locator {
            cloud,
            triangles,
            points,
            boundary,
        }
    }

    /// `z` lies in some nondegenerate image triangle.
    pub fn covered(&self, z: C) -> bool {
        self.triangles
            .at(z)
            .iter()
            .any(|&t| in_triangle(z, self.cloud.corners(&self.cloud.triangles[t])))
    }

    pub fn distance_to(&self, z: C) -> f64 {
        self.points.nearest(z, |i| (self.cloud.points[i].value - z).norm())
    }

    pub fn boundary_distance(&self, z: C) -> f64 {
        self.boundary.nearest(z, |i| (self.cloud.points[i].value - z).norm())
    }

    /// Same as [`RegionCloud::region_distance`].
    pub fn region_distance(&self, z: C) -> f64 {
        if self.covered(z) {
            return 0.0;
        }
        let tri = self
            .triangles
            .nearest(z, |t| triangle_distance(z, self.cloud.corners(&self.cloud.triangles[t])));
        tri.min(self.distance_to(z))
    }

    /// Every small probe around `p` lies in some image triangle.
    fn surrounds(&self, p: C) -> bool {
        let eps = 1e-7 * self.cloud.spacing.max(p.norm()).max(1e-3);
        let deep = self.triangles.at(p).iter().any(|&t| {
            let cs = self.cloud.corners(&self.cloud.triangles[t]);
            in_triangle(p, cs) && edge_distance(p, cs) > 4.0 * eps
        });
        deep || (0..PROBES).all(|m| {
            let probe = p + C::from_polar(eps, 2.0 * PI * (m as f64 + 0.5) / PROBES as f64);
            self.covered(probe)
        })
    }
}

/// Nearest-point queries on a plain point set.
pub struct PointLocator<'a> {
    points: &'a [C],
    buckets: Buckets,
}

impl<'a> PointLocator<'a> {
    pub fn new(points: &'a [C]) -> Self {
        let (lo, hi) = bounds(points.iter().copied());
        let span = (hi.re - lo.re).max(hi.im - lo.im);
        let cell = if span > 0.0 && span.is_finite() {
            span / (points.len() as f64).sqrt().max(1.0)
        } else {
            1.0
        };
        let mut buckets = Buckets::new(cell);
        for (i, &p) in points.iter().enumerate() {
            buckets.insert(i, p, p);
        }
        PointLocator { points, buckets }
    }

    pub fn distance(&self, z: C) -> f64 {
        self.buckets.nearest(z, |i| (self.points[i] - z).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Generator;
    use crate::series::TruncSeries;

    #[test]
    fn pencil_image_is_the_disk() {
        let v = FamilySpec::new(vec![Generator::disk_pencil(1, 1.0)]);
        let cloud = functional_image(&Functional::coefficient(1), &v, &Config::default()).unwrap();
        for p in &cloud.points {
            let on_rim = (p.value.norm() - 1.0).abs() < 1e-12;
            assert_eq!(p.flag == PointFlag::Boundary, on_rim, "{p:?}");
        }
        assert!(cloud.region_distance(C::new(0.3, 0.2)) == 0.0);
        assert!((cloud.region_distance(C::new(2.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_origin_is_interior() {
        let cloud = functional_image(&Functional::coefficient(1), &FamilySpec::counterexample(), &Config::default()).unwrap();
        let zeros: Vec<&CloudPoint> = cloud.points.iter().filter(|p| p.value.norm() < 1e-15).collect();
        assert!(zeros.len() > 1);
        assert!(zeros.iter().all(|p| p.flag == PointFlag::Interior));
    }

    #[test]
    fn locator_matches_linear_scans() {
        let v = FamilySpec::counterexample();
        let lam = Functional::new(TruncSeries::polynomial(vec![C::new(1.0, 0.0), C::new(0.5, 0.2), C::new(-0.3, 0.7)]).unwrap(), "g");
        let cloud = functional_image(&lam, &v, &Config::default()).unwrap();
        let loc = Locator::new(&cloud);
        let values: Vec<C> = cloud.values().collect();
        let pts = PointLocator::new(&values);
        for j in 0..400 {
            let z = C::from_polar(0.02 * j as f64, 0.37 * j as f64) + C::new(1.0, 0.0);
            assert_eq!(loc.region_distance(z), cloud.region_distance(z), "{z}");
            assert_eq!(loc.distance_to(z), cloud.distance_to(z));
            assert_eq!(loc.boundary_distance(z), cloud.boundary_distance(z));
            assert_eq!(pts.distance(z), cloud.distance_to(z));
        }
    }

    #[test]
    fn identity_family_single_point() {
        let cloud = functional_image(&Functional::point_evaluation(8), &FamilySpec::identity(), &Config::default()).unwrap();
        assert_eq!(cloud.points.len(), 1);
        assert!((cloud.points[0].value - 1.0).norm() < 1e-15);
        assert_eq!(cloud.points[0].flag, PointFlag::Boundary);
    }
}
