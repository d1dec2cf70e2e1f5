//! Compact parameterized classes `V ⊂ A_0`.
//!
//! A [`FamilySpec`] is a finite union of generators (pencils
//! `1 + Σ x_j z^{k_j}`, rational kernels `(1 + xz)/(1 + yz)`, fixed members),
//! optionally closed under all dilations `P_x`, `|x| <= 1` (the complete hull).

mod border;
mod domain;
mod sigma;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncSeries;
use crate::C;

pub use border::{border_decompose, border_decompositions, border_elements, Decomposition};
pub use domain::{Domain, DomainMesh, ParamGrid};
pub(crate) use domain::distance_to_segment;
pub use sigma::sigma_search;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Generator {
    /// `1 + Σ_j x_j z^{k_j}` with `x_j` ranging over `domains[j]`.
    Pencil {
        exponents: Vec<usize>,
        domains: Vec<Domain>,
    },
    /// `(1 + xz) / (1 + yz)`.
    Rational { x: Domain, y: Domain },
    Fixed { series: TruncSeries },
}

impl Generator {
    pub fn pencil(exponents: &[usize], domains: Vec<Domain>) -> Self {
        Generator::Pencil {
            exponents: exponents.to_vec(),
            domains,
        }
    }

    /// Single-parameter pencil `1 + x z^k`, `|x| <= radius`.
    pub fn disk_pencil(k: usize, radius: f64) -> Self {
        Generator::pencil(&[k], vec![Domain::Disk { radius }])
    }

    pub fn fixed(series: TruncSeries) -> Self {
        Generator::Fixed { series }
    }

    pub fn domains(&self) -> Vec<&Domain> {
        match self {
            Generator::Pencil { domains, .. } => domains.iter().collect(),
            Generator::Rational { x, y } => vec![x, y],
            Generator::Fixed { .. } => vec![],
        }
    }

    fn validate(&self, at: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamily(format!("{at}: {msg}")));
        match self {
            Generator::Pencil { exponents, domains } => {
                if exponents.is_empty() {
                    return bad("pencil needs at least one exponent".into());
                }
                if exponents.len() != domains.len() {
                    return bad(format!(
                        "{} exponents but {} domains",
                        exponents.len(),
                        domains.len()
                    ));
                }
                if exponents.iter().any(|&k| k == 0) {
                    return bad("pencil exponents must be >= 1".into());
                }
                if exponents.len() > 64 || exponents.iter().any(|&k| k > 4096) {
                    return bad("pencil exponents out of range (at most 64 exponents, each <= 4096)".into());
                }
                let mut sorted = exponents.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != exponents.len() {
                    return bad("pencil exponents must be distinct".into());
                }
                for (j, d) in domains.iter().enumerate() {
                    d.validate().or_else(|e| bad(format!("domains[{j}]: {e}")))?;
                }
            }
            Generator::Rational { x, y } => {
                x.validate().or_else(|e| bad(format!("x: {e}")))?;
                y.validate().or_else(|e| bad(format!("y: {e}")))?;
                if !(y.max_modulus() < 1.0) {
                    return bad(format!(
                        "rational y-domain must lie strictly inside the unit disk (max |y| = {})",
                        y.max_modulus()
                    ));
                }
            }
            Generator::Fixed { series } => {
                if !series.is_normalized() {
                    return bad(format!("fixed member has a_0 = {}, expected 1", series.coeffs()[0]));
                }
            }
        }
        Ok(())
    }

    /// The member with the given parameters, before any dilation.
    pub fn instantiate(&self, params: &[C], trunc: usize) -> Result<TruncSeries> {
        match self {
            Generator::Pencil { exponents, .. } => {
                if params.len() != exponents.len() {
                    return Err(Error::InvalidFamily("parameter count mismatch".into()));
                }
                let top = exponents.iter().copied().max().unwrap_or(0).max(trunc);
                let mut coeffs = vec![C::new(0.0, 0.0); top + 1];
                coeffs[0] = C::new(1.0, 0.0);
                for (&k, &x) in exponents.iter().zip(params) {
                    coeffs[k] += x;
                }
                TruncSeries::polynomial(coeffs)
            }
            Generator::Rational { .. } => {
                let [x, y] = params else {
                    return Err(Error::InvalidFamily("rational needs (x, y)".into()));
                };
                TruncSeries::from_rational(*x, *y, trunc)
            }
            Generator::Fixed { series } => Ok(series.clone()),
        }
    }

    /// Lipschitz constant of coefficients in the parameters (for membership tolerances).
    fn coeff_lipschitz(&self, trunc: usize) -> f64 {
        match self {
            Generator::Pencil { .. } => 1.0,
            Generator::Rational { y, .. } => {
                let q = y.max_modulus();
                let worst = (2..=trunc.max(2))
                    .map(|k| (k - 1) as f64 * q.powi(k as i32 - 2))
                    .fold(0.0, f64::max);
                1.0 + 2.0 * worst
            }
            Generator::Fixed { .. } => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub generators: Vec<Generator>,
    /// When set the family is `cm(base)`: members are `P_x f`, `x` in the
    /// dilation domain (closed unit disk unless overridden).
    #[serde(default)]
    pub dilation_slot: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation_domain: Option<Domain>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberTag {
    pub generator: usize,
    #[serde(serialize_with = "ser_params")]
    pub params: Vec<C>,
    #[serde(serialize_with = "crate::contour::ser_opt_complex")]
    pub dilation: Option<C>,
}

fn ser_params<S: serde::Serializer>(p: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    p.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

fn fmt_c(z: C) -> String {
    format!("{}{:+}i", z.re, z.im)
}

impl fmt::Display for MemberTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.generator)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|&z| fmt_c(z)).collect();
            write!(f, "({})", ps.join(";"))?;
        }
        if let Some(s) = self.dilation {
            write!(f, "@{}", fmt_c(s))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub series: TruncSeries,
    pub tag: MemberTag,
}

/// Sampled members plus the image of the parameter-grid cell complex.
#[derive(Clone, Debug, Default)]
pub struct SampledFamily {
    pub members: Vec<Member>,
    /// Triangles over member indices (2-cells of the product parameter mesh).
    pub triangles: Vec<[usize; 3]>,
}

impl FamilySpec {
    pub fn new(generators: Vec<Generator>) -> Self {
        FamilySpec {
            generators,
            dilation_slot: false,
            dilation_domain: None,
        }
    }

    /// `{e}`.
    pub fn identity() -> Self {
        FamilySpec::new(vec![Generator::fixed(TruncSeries::identity(0))])
    }

    /// `{1 + xz : |x| <= 1} ∪ {1 + yz^2 : |y| <= 1}`.
    pub fn counterexample() -> Self {
        FamilySpec::new(vec![Generator::disk_pencil(1, 1.0), Generator::disk_pencil(2, 1.0)])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: FamilySpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        let tree: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::InvalidFamily(e.to_string()))?;
        string_tags(&tree, "")?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family specs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidFamily("generators: at least one generator is required".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            g.validate(&format!("generators[{i}]"))?;
        }
        if let Some(d) = &self.dilation_domain {
            d.validate()?;
            if d.max_modulus() > 1.0 {
                return Err(Error::InvalidFamily("dilation_domain must lie in the closed unit disk".into()));
            }
        }
        Ok(())
    }

    /// `true` for `{e}` (every generator is the fixed constant `e`).
    pub fn is_identity_class(&self) -> bool {
        self.generators
            .iter()
            .all(|g| matches!(g, Generator::Fixed { series } if series.is_identity()))
    }

    fn dilation_mesh_domain(&self) -> Option<Domain> {
        self.dilation_slot
            .then(|| self.dilation_domain.clone().unwrap_or_else(Domain::unit_disk))
    }

    pub fn instantiate(&self, tag: &MemberTag, trunc: usize) -> Result<TruncSeries> {
        let gen = self
            .generators
            .get(tag.generator)
            .ok_or_else(|| Error::InvalidFamily(format!("no generator {}", tag.generator)))?;
        let base = gen.instantiate(&tag.params, trunc)?;
        Ok(match tag.dilation {
            Some(s) => base.dilate(s),
            None => base,
        })
    }

    /// Deterministic enumeration of members on the grid.
    pub fn sample(&self, grid: &ParamGrid, trunc: usize) -> Vec<Member> {
        self.sample_mesh(grid, trunc).members
    }

    pub fn sample_mesh(&self, grid: &ParamGrid, trunc: usize) -> SampledFamily {
        let mut out = SampledFamily::default();
        let dil = self.dilation_mesh_domain().map(|d| d.mesh(grid));
        for (gi, gen) in self.generators.iter().enumerate() {
            let mut factors: Vec<DomainMesh> = gen.domains().iter().map(|d| d.mesh(grid)).collect();
            let has_dilation = dil.is_some();
            if let Some(m) = &dil {
                factors.push(m.clone());
            }
            let offset = out.members.len();
            let (tuples, triangles) = product_mesh(&factors);
            for t in tuples {
                let mut params: Vec<C> = t.iter().enumerate().map(|(f, &i)| factors[f].points[i]).collect();
                let dilation = if has_dilation { params.pop() } else { None };
                let tag = MemberTag {
                    generator: gi,
                    params,
                    dilation,
                };
                let series = self
                    .instantiate(&tag, trunc)
                    .expect("validated generators instantiate on their domains");
                out.members.push(Member { series, tag });
            }
            out.triangles
                .extend(triangles.into_iter().map(|[a, b, c]| [a + offset, b + offset, c + offset]));
        }
        out
    }

    /// Coefficient-distance tolerance for membership against a sample on `grid`.
    pub fn membership_tolerance(&self, grid: &ParamGrid, trunc: usize) -> f64 {
        let dil = self.dilation_mesh_domain();
        self.generators
            .iter()
            .map(|g| {
                let mut tol: f64 = g
                    .domains()
                    .iter()
                    .map(|d| g.coeff_lipschitz(trunc) * d.covering_radius(grid))
                    .sum();
                if let Some(d) = &dil {
                    let top = match g {
                        Generator::Pencil { exponents, domains } => exponents
                            .iter()
                            .zip(domains)
                            .map(|(&k, d)| k as f64 * d.max_modulus())
                            .sum(),
                        _ => trunc as f64,
                    };
                    tol += top * d.covering_radius(grid);
                }
                tol
            })
            .fold(1e-12, f64::max)
    }

    /// Nearest sampled member, if within the grid tolerance.
    pub fn nearest_member<'a>(&self, f: &TruncSeries, sample: &'a [Member], tol: f64) -> Option<&'a Member> {
        sample
            .iter()
            .map(|m| (m.series.coeff_distance(f), m))
            .filter(|(d, _)| *d <= tol)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, m)| m)
    }

    pub fn contains_sampled(&self, f: &TruncSeries, grid: &ParamGrid, trunc: usize) -> bool {
        let sample = self.sample(grid, trunc);
        let tol = self.membership_tolerance(grid, trunc);
        self.nearest_member(f, &sample, tol).is_some()
    }

    /// Union, generator-wise. Both sides must agree on the dilation slot.
    pub fn union(&self, other: &FamilySpec) -> Result<FamilySpec> {
        if self.dilation_slot != other.dilation_slot || self.dilation_domain != other.dilation_domain {
            return Err(Error::Unsupported("union of families with different dilation slots".into()));
        }
        let mut out = self.clone();
        out.generators.extend(other.generators.iter().cloned());
        Ok(out)
    }
}

/// Tagged enums also accept a variant index in place of the tag name;
/// spec files must spell tags out.
fn string_tags(v: &serde_json::Value, path: &str) -> Result<()> {
    match v {
        serde_json::Value::Object(map) => {
            for (key, child) in map {
                let at = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                if (key == "kind" || key == "shape") && !child.is_string() {
                    return Err(Error::InvalidFamily(format!("{at}: expected a string tag, got {child}")));
                }
                string_tags(child, &at)?;
            }
        }
        serde_json::Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                string_tags(child, &format!("{path}[{i}]"))?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// `cm(V)`: the family closed under every `P_x`, `|x| <= 1`.
pub fn complete_hull(v: &FamilySpec) -> FamilySpec {
    FamilySpec {
        generators: v.generators.clone(),
        dilation_slot: true,
        dilation_domain: None,
    }
}

/// Mixed-radix product of factor meshes (first factor slowest) with its
/// 2-cells: triangles of 2-D factors times vertices of the others, and
/// edge-by-edge squares of pairs of 1-D factors.
fn product_mesh(factors: &[DomainMesh]) -> (Vec<Vec<usize>>, Vec<[usize; 3]>) {
    let sizes: Vec<usize> = factors.iter().map(|f| f.points.len()).collect();
    let total: usize = sizes.iter().product();
    let mut strides = vec![1usize; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let tuples: Vec<Vec<usize>> = (0..total)
        .map(|mut flat| {
            sizes
                .iter()
                .zip(&strides)
                .map(|(_, &s)| {
                    let i = flat / s;
                    flat %= s;
                    i
                })
                .collect()
        })
        .collect();
    let mut triangles = Vec::new();
    let base_of = |skip: &[usize], flat: usize| -> bool { skip.iter().all(|&f| (flat / strides[f]) % sizes[f] == 0) };
    for (f, mesh) in factors.iter().enumerate() {
        for flat in 0..total {
            if !base_of(&[f], flat) {
                continue;
            }
            for t in &mesh.triangles {
                triangles.push([
                    flat + t[0] * strides[f],
                    flat + t[1] * strides[f],
                    flat + t[2] * strides[f],
                ]);
            }
        }
        for (g, other) in factors.iter().enumerate().skip(f + 1) {
            if mesh.edges.is_empty() || other.edges.is_empty() {
                continue;
            }
            for flat in 0..total {
                if !base_of(&[f, g], flat) {
                    continue;
                }
                for e in &mesh.edges {
                    for o in &other.edges {
                        let at = |a: usize, b: usize| flat + a * strides[f] + b * strides[g];
                        let (p00, p10, p01, p11) = (at(e[0], o[0]), at(e[1], o[0]), at(e[0], o[1]), at(e[1], o[1]));
                        triangles.push([p00, p10, p11]);
                        triangles.push([p00, p11, p01]);
                    }
                }
            }
        }
    }
    (tuples, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn sample_circle_pencil() {
        let v = FamilySpec::new(vec![Generator::pencil(&[1], vec![Domain::Circle { radius: 1.0 }])]);
        let mut grid = ParamGrid::default();
        grid.circle = 4;
        let members = v.sample(&grid, 4);
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        assert_eq!(members.len(), 4);
        for (m, w) in members.iter().zip(want) {
            assert!((m.series.coeffs()[1] - w).norm() < 1e-15);
            assert_eq!(m.series.coeffs()[0], c(1.0, 0.0));
        }
    }

    #[test]
    fn sample_fixed_identity() {
        let members = FamilySpec::identity().sample(&ParamGrid::default(), 8);
        assert_eq!(members.len(), 1);
        assert!(members[0].series.is_identity());
    }

    #[test]
    fn sample_rational_point_domains() {
        let v = FamilySpec::new(vec![Generator::Rational {
            x: Domain::point(c(1.0, 0.0)),
            y: Domain::point(c(-0.5, 0.0)),
        }]);
        let members = v.sample(&ParamGrid::default(), 10);
        assert_eq!(members.len(), 1);
        let s = &members[0].series;
        assert_eq!(s.coeffs()[0], c(1.0, 0.0));
        for k in 1..=10 {
            let want = 1.5 * 0.5f64.powi(k as i32 - 1);
            assert!((s.coeffs()[k] - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn complete_hull_is_idempotent_and_distributes() {
        let u = FamilySpec::new(vec![Generator::disk_pencil(1, 1.0)]);
        let v = FamilySpec::new(vec![Generator::disk_pencil(2, 0.5)]);
        let cm = complete_hull(&u);
        assert!(cm.dilation_slot);
        assert_eq!(complete_hull(&cm), cm);
        let lhs = complete_hull(&u.union(&v).unwrap());
        let rhs = complete_hull(&u).union(&complete_hull(&v)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn complete_pencil_hull_has_same_members() {
        let grid = ParamGrid::new(4, 8);
        let v = FamilySpec::new(vec![Generator::disk_pencil(1, 1.0)]);
        let cm = complete_hull(&v);
        let tol = cm.membership_tolerance(&grid, 4);
        let vs = v.sample(&grid, 4);
        let cms = cm.sample(&grid, 4);
        for m in &cms {
            assert!(v.nearest_member(&m.series, &vs, tol).is_some(), "{}", m.tag);
        }
        for m in &vs {
            assert!(cm.nearest_member(&m.series, &cms, tol).is_some());
        }
    }

    #[test]
    fn complete_hull_of_fixed_member() {
        let f = TruncSeries::from_real(&[1.0, 1.0]).unwrap();
        let cm = complete_hull(&FamilySpec::new(vec![Generator::fixed(f)]));
        for m in cm.sample(&ParamGrid::default(), 1) {
            let s = m.tag.dilation.unwrap();
            assert!((m.series.coeffs()[1] - s).norm() < 1e-15);
        }
    }

    #[test]
    fn spec_json_roundtrip_and_errors() {
        let text = r#"{"generators":[{"kind":"pencil","exponents":[1],"domains":[{"shape":"disk","radius":1.0}]}], "dilation_slot": false}"#;
        let v = FamilySpec::from_json(text).unwrap();
        assert_eq!(v, FamilySpec::new(vec![Generator::disk_pencil(1, 1.0)]));
        assert_eq!(FamilySpec::from_json(&v.to_json()).unwrap(), v);

        let err = FamilySpec::from_json(r#"{"generators":[{"kind":"pencil","exponents":[1,1],"domains":[{"shape":"disk","radius":1},{"shape":"disk","radius":1}]}]}"#);
        assert!(matches!(err, Err(Error::InvalidFamily(_))));
        let err = FamilySpec::from_json(r#"{"generators":[{"kind":"rational","x":{"shape":"disk","radius":1},"y":{"shape":"circle","radius":1}}]}"#);
        assert!(matches!(err, Err(Error::InvalidFamily(_))));
        match FamilySpec::from_json("{\"generators\": [\n {\"kind\": \"pencil\", \"exponents\": \"x\"}]}") {
            Err(Error::Parse { path, line, .. }) => {
                assert!(path.contains("generators[0]"), "{path}");
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(FamilySpec::from_json(r#"{"generators":[]}"#).is_err());
    }

    #[test]
    fn product_mesh_triangles() {
        let grid = ParamGrid::new(2, 4);
        let v = FamilySpec::new(vec![Generator::pencil(
            &[1, 2],
            vec![Domain::Circle { radius: 1.0 }, Domain::Circle { radius: 0.5 }],
        )]);
        let s = v.sample_mesh(&grid, 4);
        assert_eq!(s.members.len(), 64);
        assert_eq!(s.triangles.len(), 2 * 8 * 8);
        let d = complete_hull(&FamilySpec::new(vec![Generator::disk_pencil(1, 1.0)])).sample_mesh(&grid, 2);
        assert_eq!(d.members.len(), 9 * 9);
        assert_eq!(d.triangles.len(), 2 * (4 + 4 * 2) * 9);
    }
}
