//! One verifier per duality result: each reduces the statement to finitely
//! many certificate checks on sampled families and kernels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::image::border_circle_images;
use super::{
    apply, functional_image, image_via_border, in_dual, in_dual_hull_with, in_t, is_complete_t,
    transpose_representatives, Functional, Locator, PointLocator, RegionCloud,
};
use crate::config::Config;
use crate::contour::{Certificate, Status};
use crate::error::{Error, Result};
use crate::family::{border_elements, complete_hull, sigma_search, Domain, FamilySpec, Generator, Member};
use crate::series::TruncSeries;
use crate::C;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    L4,
    C1,
    C2,
    C3,
    CE,
}

impl Theorem {
    pub const ALL: [Theorem; 11] = [
        Theorem::T1,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::T6,
        Theorem::L4,
        Theorem::C1,
        Theorem::C2,
        Theorem::C3,
        Theorem::CE,
    ];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "unknown result '{s}', expected one of T1 T2 T3 T4 T5 T6 L4 C1 C2 C3 CE"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    fn combine(self, other: CheckStatus) -> CheckStatus {
        use CheckStatus::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check_id: String,
    pub status: CheckStatus,
    pub witnesses: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub detail: String,
}

impl Check {
    fn new(id: &str) -> Self {
        Check {
            check_id: id.to_string(),
            status: CheckStatus::Pass,
            witnesses: vec![],
            tolerances: BTreeMap::new(),
            detail: String::new(),
        }
    }

    fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    fn record(&mut self, status: CheckStatus, witness: impl Into<String>) {
        self.status = self.status.combine(status);
        if status != CheckStatus::Pass && self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness.into());
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn inconclusive(id: &str, detail: impl Into<String>) -> Self {
        let mut c = Check::new(id).with_detail(detail);
        c.status = CheckStatus::Inconclusive;
        c
    }
}

const MAX_WITNESSES: usize = 8;
const KERNEL_LIMIT: usize = 128;
const CANDIDATE_LIMIT: usize = 64;
const MESH_FACTOR: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub theorem: Theorem,
    pub checks: Vec<Check>,
    pub summary: CheckStatus,
}

impl Report {
    fn new(theorem: Theorem, checks: Vec<Check>) -> Self {
        let summary = checks.iter().fold(CheckStatus::Pass, |acc, c| acc.combine(c.status));
        Report {
            theorem,
            checks,
            summary,
        }
    }
}

/// Run the verifier for `theorem` on `v`. `kernels` defaults to
/// [`super::default_kernel_family`].
pub fn verify_theorem(theorem: Theorem, v: &FamilySpec, kernels: Option<&FamilySpec>, cfg: &Config) -> Result<Report> {
    v.validate()?;
    let default = super::default_kernel_family();
    let k = kernels.unwrap_or(&default);
    k.validate()?;
    let checks = match theorem {
        Theorem::T1 => dual_is_closure_of_cm_transpose(v, k, cfg),
        Theorem::T2 => images_of_dual_hull(v, k, cfg)?,
        Theorem::T3 => dual_hull_against_double_dual(v, k, cfg)?,
        Theorem::T4 => transpose_dilation_union(v, k, cfg),
        Theorem::T5 => border_images_cover_boundary(v, cfg)?,
        Theorem::T6 => border_of_dual(v, k, cfg),
        Theorem::L4 => images_versus_transposes(v, k, cfg)?,
        Theorem::C1 => dual_hull_as_preimages(v, k, cfg)?,
        Theorem::C2 => equal_hulls_equal_transposes(v, k, cfg)?,
        Theorem::C3 => border_has_same_dual(v, k, cfg),
        Theorem::CE => converse_inclusion_fails(v, cfg)?,
    };
    Ok(Report::new(theorem, checks))
}

fn subsample<T>(items: Vec<T>, limit: usize) -> Vec<T> {
    if items.len() <= limit {
        return items;
    }
    let n = items.len();
    items
        .into_iter()
        .enumerate()
        .filter(|(i, _)| (i * limit) / n != ((i + 1) * limit) / n)
        .map(|(_, x)| x)
        .collect()
}

fn kernel_sample(k: &FamilySpec, cfg: &Config, limit: usize) -> Vec<Member> {
    let all = k
        .sample(&cfg.kernel_grid, cfg.trunc)
        .into_iter()
        .filter(|m| m.series.is_normalized())
        .collect();
    subsample(all, limit)
}

fn status_of(c: &Certificate) -> CheckStatus {
    match c.status {
        Status::Verified => CheckStatus::Pass,
        Status::Falsified => CheckStatus::Fail,
        Status::Inconclusive => CheckStatus::Inconclusive,
    }
}

fn verified(r: Result<Certificate>) -> bool {
    r.map(|c| c.is_verified()).unwrap_or(false)
}

/// Functionals used by the image-based verifiers.
fn standard_functionals(cfg: &Config) -> Vec<Functional> {
    let rational = TruncSeries::from_rational(C::new(1.0, 0.0), C::new(-0.5, 0.0), cfg.trunc)
        .expect("|y| < 1");
    vec![
        Functional::coefficient(1),
        Functional::coefficient(2),
        Functional::point_evaluation(cfg.trunc),
        Functional::new(rational, "(1+z)/(1-z/2)"),
    ]
}

fn cloud_tolerance(cloud: &RegionCloud) -> f64 {
    MESH_FACTOR * cloud.spacing
}

// ---- T1 ----

fn dual_is_closure_of_cm_transpose(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Vec<Check> {
    let hull = complete_hull(v);
    let kernels = kernel_sample(k, cfg, KERNEL_LIMIT);
    let mut forward = Check::new("dual-dilates-into-cm-transpose").with_detail(format!(
        "for g certified in V*, P_r g certified in (cm V)^T for r in {:?}",
        cfg.dilation_radii
    ));
    let mut backward = Check::new("cm-transpose-in-dual").with_detail("g certified in (cm V)^T is certified in V*");
    let results: Vec<(Vec<(CheckStatus, String)>, Vec<(CheckStatus, String)>)> = kernels
        .par_iter()
        .map(|g| {
            let mut fw = vec![];
            let mut bw = vec![];
            if verified(in_dual(&g.series, v, cfg)) {
                for &r in &cfg.dilation_radii {
                    let d = g.series.dilate(C::new(r, 0.0));
                    let st = in_t(&d, &hull, cfg).map(|c| status_of(&c)).unwrap_or(CheckStatus::Inconclusive);
                    fw.push((st, format!("kernel {} at r = {r}", g.tag)));
                }
            }
            if verified(in_t(&g.series, &hull, cfg)) {
                let st = in_dual(&g.series, v, cfg).map(|c| status_of(&c)).unwrap_or(CheckStatus::Inconclusive);
                bw.push((st, format!("kernel {}", g.tag)));
            }
            (fw, bw)
        })
        .collect();
    let (mut nf, mut nb) = (0, 0);
    for (fw, bw) in results {
        nf += fw.len();
        nb += bw.len();
        for (s, w) in fw {
            forward.record(s, w);
        }
        for (s, w) in bw {
            backward.record(s, w);
        }
    }
    forward.detail += &format!(" ({nf} checks)");
    backward.detail += &format!(" ({nb} checks)");
    let witness = cfg.contour.witness_tol;
    let margin = cfg.contour.margin_tol;
    vec![
        forward.tol("witness", witness).tol("margin", margin),
        backward.tol("witness", witness).tol("margin", margin),
    ]
}

// ---- T2 / C1 ----

struct HullSplit {
    members: Vec<(Member, Certificate)>,
    outside: Vec<(Member, Certificate, Option<Member>)>,
}

fn split_by_dual_hull(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<HullSplit> {
    let reps = transpose_representatives(v, k, cfg);
    let candidates = kernel_sample(k, cfg, CANDIDATE_LIMIT);
    let certs: Vec<Result<(Certificate, Option<Member>)>> = candidates
        .par_iter()
        .map(|h| super::dual_hull_core(&h.series, v, k, &reps, cfg))
        .collect();
    let mut split = HullSplit {
        members: vec![],
        outside: vec![],
    };
    for (h, r) in candidates.into_iter().zip(certs) {
        let (cert, kernel) = r?;
        match cert.status {
            Status::Verified => split.members.push((h, cert)),
            Status::Falsified => split.outside.push((h, cert, kernel)),
            Status::Inconclusive => {}
        }
    }
    Ok(split)
}

fn images_of_dual_hull(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    let fine = Config {
        grid: cfg.grid.refine(),
        ..cfg.clone()
    };
    let split = split_by_dual_hull(v, k, cfg)?;
    let hull_sample = subsample(complete_hull(v).sample(&cfg.grid, cfg.trunc), CANDIDATE_LIMIT);
    let mut in_image = Check::new("dual-hull-values-in-image")
        .with_detail("λ(h) lies in the λ(V) cloud for h certified in V** (relative to the kernel family)");
    let mut cm_image = Check::new("cm-values-in-image").with_detail("λ(P_x f) lies in the λ(V) cloud");
    let mut stats = Vec::new();
    let mut worst_tol: f64 = 0.0;
    for lambda in standard_functionals(cfg) {
        let cloud = match functional_image(&lambda, v, &fine) {
            Ok(c) => c,
            Err(e) => {
                in_image.record(CheckStatus::Inconclusive, format!("{}: {e}", lambda.label));
                continue;
            }
        };
        let tol = cloud_tolerance(&cloud);
        worst_tol = worst_tol.max(tol);
        let near = Locator::new(&cloud);
        let mut max_d: f64 = 0.0;
        for (h, _) in &split.members {
            let Ok(val) = apply(&lambda, &h.series) else { continue };
            let d = near.region_distance(val.value);
            max_d = max_d.max(d);
            let st = if d <= tol { CheckStatus::Pass } else { CheckStatus::Inconclusive };
            in_image.record(st, format!("{} on kernel-family member {}: distance {d:.3e}", lambda.label, h.tag));
        }
        for f in &hull_sample {
            let Ok(val) = apply(&lambda, &f.series) else { continue };
            let d = near.region_distance(val.value);
            let st = if d <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
            cm_image.record(st, format!("{} on {}: distance {d:.3e}", lambda.label, f.tag));
        }
        stats.push(format!("{}: max distance {max_d:.3e}, tolerance {tol:.3e}", lambda.label));
    }
    in_image.detail += &format!(" [{} members; {}]", split.members.len(), stats.join("; "));
    let separated = separation_check(v, &split, cfg);
    Ok(vec![
        in_image.tol("mesh", worst_tol),
        cm_image.tol("mesh", worst_tol),
        separated,
    ])
}

/// For `h` outside `V**` with kernel `g ∈ V^T`, `λ_g(h) = 0` while `0 ∉ λ_g(V)`.
fn separation_check(v: &FamilySpec, split: &HullSplit, cfg: &Config) -> Check {
    let mut check = Check::new("non-members-separated")
        .with_detail(format!("{} non-members, each separated by its witness kernel", split.outside.len()))
        .tol("witness", cfg.contour.witness_tol)
        .tol("margin", cfg.contour.margin_tol);
    for (h, _, kernel) in &split.outside {
        let Some(g) = kernel else {
            check.record(CheckStatus::Inconclusive, format!("{}: no witness kernel", h.tag));
            continue;
        };
        let lambda = Functional::new(g.series.clone(), g.tag.to_string());
        let at_h = apply(&lambda, &h.series);
        let gap = in_t(&g.series, v, cfg);
        let st = match (at_h, gap) {
            (Ok(val), Ok(c)) if c.is_verified() && val.value.norm() + val.error_bound < cfg.contour.witness_tol => {
                CheckStatus::Pass
            }
            _ => CheckStatus::Fail,
        };
        check.record(st, format!("h = {} with kernel {}", h.tag, g.tag));
    }
    check
}

fn dual_hull_as_preimages(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    let split = split_by_dual_hull(v, k, cfg)?;
    let mut inside = Check::new("dual-hull-in-preimages")
        .with_detail("h certified in V** has λ(h) ∈ λ(V) for every tested λ (relative to the kernel family)");
    let mut worst: f64 = 0.0;
    for lambda in standard_functionals(cfg) {
        let Ok(cloud) = functional_image(&lambda, v, cfg) else {
            inside.record(CheckStatus::Inconclusive, format!("{}: no finite image", lambda.label));
            continue;
        };
        let tol = cloud_tolerance(&cloud);
        worst = worst.max(tol);
        let near = Locator::new(&cloud);
        for (h, _) in &split.members {
            let Ok(val) = apply(&lambda, &h.series) else { continue };
            let d = near.region_distance(val.value);
            let st = if d <= tol { CheckStatus::Pass } else { CheckStatus::Inconclusive };
            inside.record(st, format!("{} on {}: distance {d:.3e}", lambda.label, h.tag));
        }
    }
    Ok(vec![inside.tol("mesh", worst), separation_check(v, &split, cfg)])
}

// ---- T3 ----

fn dual_hull_against_double_dual(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    const ID: &str = "dual-hull-equals-double-dual";
    let (exp, outer) = match v.generators.as_slice() {
        [Generator::Pencil { exponents, domains }]
            if exponents.len() == 1 && domains[0].is_rotation_invariant() && v.dilation_domain.is_none() =>
        {
            (exponents[0], domains[0].max_modulus())
        }
        _ => {
            return Ok(vec![Check::inconclusive(
                ID,
                "needs a family {1 + x z^k} over one rotation-invariant domain",
            )])
        }
    };
    if outer == 0.0 {
        return Ok(vec![Check::inconclusive(ID, "degenerate pencil")]);
    }
    let reps = transpose_representatives(v, k, cfg);
    let angles = 16;
    let dual_kernels: Vec<Generator> = [0.5, 1.0]
        .iter()
        .flat_map(|&s| {
            (0..angles).map(move |j| {
                let w = C::from_polar(s / outer, 2.0 * std::f64::consts::PI * j as f64 / angles as f64);
                let mut c = vec![C::new(0.0, 0.0); exp + 1];
                c[0] = C::new(1.0, 0.0);
                c[exp] = w;
                Generator::fixed(TruncSeries::polynomial(c).expect("finite"))
            })
        })
        .collect();
    let dual_sample = FamilySpec::new(dual_kernels);
    let band = 1e-3;
    let mut cands = vec![];
    for &s in &[0.0, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0] {
        for j in 0..angles {
            let c = C::from_polar(s * outer, 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / angles as f64);
            let mut coeffs = vec![C::new(0.0, 0.0); exp + 1];
            coeffs[0] = C::new(1.0, 0.0);
            coeffs[exp] = c;
            cands.push((c, TruncSeries::polynomial(coeffs).expect("finite")));
            if s == 0.0 {
                break;
            }
        }
    }
    let rows: Vec<(C, Result<Certificate>, Result<Certificate>)> = cands
        .par_iter()
        .map(|(c, h)| (*c, in_dual_hull_with(h, v, k, &reps, cfg), in_dual(h, &dual_sample, cfg)))
        .collect();
    let mut check = Check::new(ID)
        .tol("band", band)
        .tol("witness", cfg.contour.witness_tol)
        .tol("margin", cfg.contour.margin_tol);
    let mut agree = 0;
    for (c, hull, direct) in rows {
        let expected = c.norm() <= outer;
        if (c.norm() - outer).abs() < band * outer && c.norm() != outer {
            continue;
        }
        let (Ok(hull), Ok(direct)) = (hull, direct) else {
            check.record(CheckStatus::Inconclusive, format!("c = {c}: error"));
            continue;
        };
        let decided = |x: &Certificate| match x.status {
            Status::Verified => Some(true),
            Status::Falsified => Some(false),
            Status::Inconclusive => None,
        };
        match (decided(&hull), decided(&direct)) {
            (Some(a), Some(b)) if a == b && a == expected => agree += 1,
            (Some(a), Some(b)) => check.record(
                CheckStatus::Fail,
                format!("c = {c}: hull {a}, double dual {b}, closed form {expected}"),
            ),
            _ => check.record(CheckStatus::Inconclusive, format!("c = {c}: undecided")),
        }
    }
    check.detail = format!("h = 1 + c z^{exp}: {agree} agreements with the closed form |c| <= {outer}");
    Ok(vec![check])
}

// ---- T4 ----

fn transpose_dilation_union(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Vec<Check> {
    let kernels: Vec<Member> = kernel_sample(k, cfg, usize::MAX)
        .into_par_iter()
        .filter(|g| verified(in_t(&g.series, v, cfg)))
        .collect();
    let kernels = subsample(kernels, 50);
    let found: Vec<(String, Result<Option<f64>>)> = kernels
        .par_iter()
        .map(|g| (g.tag.to_string(), sigma_search(v, &g.series, cfg.sigma_max, cfg)))
        .collect();
    let mut check = Check::new("transpose-kernels-extend")
        .tol("margin", cfg.contour.margin_tol)
        .tol("sigma_max", cfg.sigma_max);
    let mut sigmas = vec![];
    for (tag, r) in found {
        match r {
            Ok(Some(s)) if s >= 1.0 + cfg.contour.margin_tol => {
                sigmas.push(s);
            }
            Ok(Some(s)) => check.record(CheckStatus::Fail, format!("kernel {tag}: σ = {s}")),
            Ok(None) => check.record(CheckStatus::Inconclusive, format!("kernel {tag}: no σ on the schedule")),
            Err(e) => check.record(CheckStatus::Inconclusive, format!("kernel {tag}: {e}")),
        }
    }
    let min = sigmas.iter().copied().fold(f64::INFINITY, f64::min);
    check.detail = format!(
        "P_σ g ∈ V^T with σ > 1 for {} of {} kernels certified in V^T; smallest σ = {min}",
        sigmas.len(),
        kernels.len()
    );
    vec![check]
}

// ---- T5 / CE ----

fn boundary_in_union(v: &FamilySpec, lambda: &Functional, cfg: &Config, check: &mut Check) -> Result<Option<(RegionCloud, Vec<C>)>> {
    let cloud = functional_image(lambda, v, cfg)?;
    let union = match border_circle_images(lambda, v, cfg, cfg.boundary_samples) {
        Ok(u) => u,
        Err(e @ Error::Unsupported(_)) => {
            check.record(CheckStatus::Inconclusive, format!("{}: {e}", lambda.label));
            return Ok(None);
        }
        Err(e) => return Err(e),
    };
    let tol = cloud_tolerance(&cloud);
    let near = PointLocator::new(&union);
    let mut worst: f64 = 0.0;
    for p in cloud.boundary() {
        let d = near.distance(p.value);
        worst = worst.max(d);
        let st = if d <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
        check.record(st, format!("{} boundary value {} from {}: distance {d:.3e}", lambda.label, p.value, p.member));
    }
    check.tolerances.insert(format!("mesh[{}]", lambda.label), tol);
    check.detail += &format!("{}: {} boundary candidates, max distance {worst:.3e}; ", lambda.label, cloud.boundary().count());
    Ok(Some((cloud, union)))
}

fn dilation_closed(v: &FamilySpec) -> bool {
    if v.dilation_slot {
        return v.dilation_domain.is_none() || v.dilation_domain == Some(Domain::unit_disk());
    }
    v.generators.iter().all(|g| match g {
        Generator::Pencil { domains, .. } => domains.iter().all(|d| matches!(d, Domain::Disk { .. })),
        Generator::Fixed { series } => series.is_identity(),
        Generator::Rational { .. } => false,
    })
}

fn border_images_cover_boundary(v: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    let mut cover = Check::new("boundary-in-border-images");
    let mut routes = Check::new("border-route-equals-direct");
    let functionals = [Functional::coefficient(1), Functional::point_evaluation(cfg.trunc)];
    for lambda in &functionals {
        let Some((direct, _)) = boundary_in_union(v, lambda, cfg, &mut cover)? else {
            continue;
        };
        if !dilation_closed(v) {
            routes.record(CheckStatus::Inconclusive, "family not closed under dilation".to_string());
            continue;
        }
        let border = image_via_border(lambda, v, cfg)?;
        let tol = MESH_FACTOR * direct.spacing.max(border.spacing);
        let (to_border, to_direct) = (Locator::new(&border), Locator::new(&direct));
        let a = direct.par_iter_values().map(|z| to_border.region_distance(z)).reduce(|| 0.0, f64::max);
        let b = border.par_iter_values().map(|z| to_direct.region_distance(z)).reduce(|| 0.0, f64::max);
        let st = if a.max(b) <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
        routes.record(st, format!("{}: direct→border {a:.3e}, border→direct {b:.3e}", lambda.label));
        routes.tolerances.insert(format!("mesh[{}]", lambda.label), tol);
        routes.detail += &format!("{}: Hausdorff {:.3e}; ", lambda.label, a.max(b));
    }
    Ok(vec![cover, routes])
}

fn converse_inclusion_fails(v: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    let lambda = Functional::coefficient(1);
    let mut cover = Check::new("boundary-in-border-images");
    let Some((cloud, union)) = boundary_in_union(v, &lambda, cfg, &mut cover)? else {
        return Ok(vec![cover, Check::inconclusive("union-point-off-boundary", "border images unavailable")]);
    };
    let mut converse = Check::new("union-point-off-boundary")
        .tol("mesh", cloud.spacing)
        .tol("witness", cfg.contour.witness_tol);
    let near = Locator::new(&cloud);
    let best = union
        .iter()
        .filter(|&&w| near.region_distance(w) == 0.0)
        .map(|&w| (w, near.boundary_distance(w)))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.norm().total_cmp(&a.0.norm())));
    match best {
        Some((w, d)) if d > cloud.spacing => {
            converse.witnesses.push(format!("w = {w}: inside λ(V), distance {d:.6} from every boundary candidate"));
            converse.detail = format!(
                "border images of the unit circle contain {w}, an interior point of λ(V); the converse inclusion fails"
            );
        }
        Some((w, d)) => {
            converse.record(CheckStatus::Fail, format!("best union point {w} only {d:.3e} from the boundary"));
            converse.detail = "every covered union point is within one mesh spacing of the boundary".into();
        }
        None => {
            converse.record(CheckStatus::Fail, "no border-image point lies inside the cloud".to_string());
        }
    }
    Ok(vec![cover, converse])
}

// ---- T6 ----

fn border_of_dual(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Vec<Check> {
    let hull = complete_hull(v);
    let kernels = kernel_sample(k, cfg, KERNEL_LIMIT);
    let results: Vec<(Option<(CheckStatus, String)>, Option<(CheckStatus, String)>)> = kernels
        .par_iter()
        .map(|g| {
            let mut a = None;
            if verified(in_dual(&g.series, v, cfg)) {
                let split = cfg.dilation_radii.iter().find_map(|&r| {
                    let h = g.series.dilate_outward(C::new(1.0 / r, 0.0)).ok()?;
                    verified(in_dual(&h, v, cfg)).then_some(r)
                });
                if let Some(r) = split {
                    let st = in_t(&g.series, &hull, cfg)
                        .map(|c| status_of(&c))
                        .unwrap_or(CheckStatus::Inconclusive);
                    a = Some((st, format!("kernel {} = P_{r} h", g.tag)));
                }
            }
            let mut b = None;
            if verified(in_t(&g.series, &hull, cfg)) {
                let st = match sigma_search(&hull, &g.series, cfg.sigma_max, cfg) {
                    Ok(Some(s)) => {
                        let lifted = g.series.dilate(C::new(s, 0.0));
                        in_dual(&lifted, v, cfg)
                            .map(|c| status_of(&c))
                            .unwrap_or(CheckStatus::Inconclusive)
                    }
                    _ => CheckStatus::Inconclusive,
                };
                b = Some((st, format!("kernel {}", g.tag)));
            }
            (a, b)
        })
        .collect();
    let mut inner = Check::new("dilated-dual-in-cm-transpose")
        .with_detail("g ∈ V* with g = P_x h, h ∈ V*, |x| < 1, is certified in (cm V)^T");
    let mut lift = Check::new("cm-transpose-not-border")
        .with_detail("g ∈ (cm V)^T has P_σ g ∈ V* for some σ > 1");
    let (mut na, mut nb) = (0, 0);
    for (a, b) in results {
        if let Some((s, w)) = a {
            na += 1;
            inner.record(s, w);
        }
        if let Some((s, w)) = b {
            nb += 1;
            lift.record(s, w);
        }
    }
    inner.detail += &format!(" ({na} kernels)");
    lift.detail += &format!(" ({nb} kernels)");
    vec![inner, lift]
}

// ---- L4 / C2 / C3 ----

fn transpose_agreement(a: &FamilySpec, b: &FamilySpec, kernels: &[Member], cfg: &Config) -> (bool, Vec<String>, bool) {
    let rows: Vec<(Option<bool>, Option<bool>, String)> = kernels
        .par_iter()
        .map(|g| {
            let d = |r: Result<Certificate>| match r.map(|c| c.status) {
                Ok(Status::Verified) => Some(true),
                Ok(Status::Falsified) => Some(false),
                _ => None,
            };
            (d(in_t(&g.series, a, cfg)), d(in_t(&g.series, b, cfg)), g.tag.to_string())
        })
        .collect();
    let mut equal = true;
    let mut undecided = false;
    let mut diffs = vec![];
    for (x, y, tag) in rows {
        match (x, y) {
            (Some(x), Some(y)) if x != y => {
                equal = false;
                diffs.push(format!("kernel {tag}: {x} vs {y}"));
            }
            (Some(_), Some(_)) => {}
            _ => undecided = true,
        }
    }
    (equal, diffs, undecided)
}

fn images_agree(u: &FamilySpec, v: &FamilySpec, functionals: &[Functional], cfg: &Config) -> Result<(bool, Vec<String>)> {
    let mut equal = true;
    let mut diffs = vec![];
    for lambda in functionals {
        let (Ok(cu), Ok(cv)) = (functional_image(lambda, u, cfg), functional_image(lambda, v, cfg)) else {
            continue;
        };
        let tol = MESH_FACTOR * cu.spacing.max(cv.spacing);
        let (near_u, near_v) = (Locator::new(&cu), Locator::new(&cv));
        let gap = cu.par_iter_values().map(|z| near_v.region_distance(z)).reduce(|| 0.0, f64::max);
        let zero_gap = near_v.region_distance(C::new(0.0, 0.0)) > cfg.contour.margin_tol
            && near_u.region_distance(C::new(0.0, 0.0)) <= tol;
        if gap > tol.max(cfg.contour.margin_tol) || zero_gap {
            equal = false;
            diffs.push(format!("{}: λ(U) leaves λ(V) by {gap:.3e}", lambda.label));
        }
    }
    Ok((equal, diffs))
}

fn images_versus_transposes(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    let u = complete_hull(v);
    let kernels = kernel_sample(k, cfg, 32);
    let mut functionals = standard_functionals(cfg);
    functionals.extend(
        kernels
            .iter()
            .filter(|g| g.series.is_closed_disk_regular())
            .map(|g| Functional::new(g.series.clone(), g.tag.to_string())),
    );
    let (images_equal, image_diffs) = images_agree(&u, v, &functionals, cfg)?;
    let (t_equal, t_diffs, undecided) = transpose_agreement(&u, v, &kernels, cfg);
    let mut check = Check::new("images-equal-iff-transposes-equal").tol("margin", cfg.contour.margin_tol);
    check.detail = format!("U = cm(V): images equal {images_equal}, transposes equal {t_equal}");
    if images_equal != t_equal {
        let st = if undecided { CheckStatus::Inconclusive } else { CheckStatus::Fail };
        for w in image_diffs.into_iter().chain(t_diffs) {
            check.record(st, w);
        }
        check.status = check.status.combine(st);
    } else if undecided {
        check.record(CheckStatus::Inconclusive, "some kernels undecided".to_string());
    }
    Ok(vec![check])
}

fn equal_hulls_equal_transposes(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Result<Vec<Check>> {
    const ID: &str = "hulls-transposes-duals-agree";
    let complete = is_complete_t(v, k, cfg)?;
    if !complete.is_verified() {
        return Ok(vec![Check::inconclusive(
            ID,
            format!("V^T not certified complete ({:?}); hypothesis unavailable", complete.status),
        )]);
    }
    let u = complete_hull(v);
    let kernels = kernel_sample(k, cfg, 32);
    let (t_equal, t_diffs, t_undecided) = transpose_agreement(&u, v, &kernels, cfg);
    let duals: Vec<(Status, Status, String)> = kernels
        .par_iter()
        .map(|g| {
            let s = |r: Result<Certificate>| r.map(|c| c.status).unwrap_or(Status::Inconclusive);
            (s(in_dual(&g.series, &u, cfg)), s(in_dual(&g.series, v, cfg)), g.tag.to_string())
        })
        .collect();
    let reps_u = transpose_representatives(&u, k, cfg);
    let reps_v = transpose_representatives(v, k, cfg);
    let hulls: Vec<(Status, Status, String)> = kernels
        .par_iter()
        .map(|h| {
            let s = |r: Result<Certificate>| r.map(|c| c.status).unwrap_or(Status::Inconclusive);
            (
                s(in_dual_hull_with(&h.series, &u, k, &reps_u, cfg)),
                s(in_dual_hull_with(&h.series, v, k, &reps_v, cfg)),
                h.tag.to_string(),
            )
        })
        .collect();
    let differs = |rows: &[(Status, Status, String)]| {
        let mut eq = true;
        let mut undecided = false;
        let mut w = vec![];
        for (a, b, tag) in rows {
            if *a == Status::Inconclusive || *b == Status::Inconclusive {
                undecided = true;
            } else if a != b {
                eq = false;
                w.push(format!("{tag}: {a:?} vs {b:?}"));
            }
        }
        (eq, w, undecided)
    };
    let (d_equal, d_diffs, d_undecided) = differs(&duals);
    let (h_equal, h_diffs, h_undecided) = differs(&hulls);
    let mut check = Check::new(ID).tol("margin", cfg.contour.margin_tol);
    check.detail = format!("U = cm(V): hulls equal {h_equal}, transposes equal {t_equal}, duals equal {d_equal}");
    let undecided = t_undecided || d_undecided || h_undecided;
    if !(h_equal == t_equal && t_equal == d_equal) {
        let st = if undecided { CheckStatus::Inconclusive } else { CheckStatus::Fail };
        for w in h_diffs.into_iter().chain(t_diffs).chain(d_diffs) {
            check.record(st, w);
        }
        check.status = check.status.combine(st);
    } else if undecided {
        check.record(CheckStatus::Inconclusive, "some kernels undecided".to_string());
    }
    Ok(vec![check])
}

fn border_has_same_dual(v: &FamilySpec, k: &FamilySpec, cfg: &Config) -> Vec<Check> {
    const ID: &str = "border-dual-equals-dual";
    let bor = match border_elements(v) {
        Ok(b) => b,
        Err(e) => return vec![Check::inconclusive(ID, e.to_string())],
    };
    let kernels = kernel_sample(k, cfg, KERNEL_LIMIT);
    let rows: Vec<(Status, Status, String)> = kernels
        .par_iter()
        .map(|g| {
            let s = |r: Result<Certificate>| r.map(|c| c.status).unwrap_or(Status::Inconclusive);
            (s(in_dual(&g.series, &bor, cfg)), s(in_dual(&g.series, v, cfg)), g.tag.to_string())
        })
        .collect();
    let mut check = Check::new(ID).tol("margin", cfg.contour.margin_tol);
    let mut agree = 0;
    for (a, b, tag) in rows {
        if a == Status::Inconclusive || b == Status::Inconclusive {
            check.record(CheckStatus::Inconclusive, format!("kernel {tag}: undecided"));
        } else if a != b {
            check.record(CheckStatus::Fail, format!("kernel {tag}: bor(V) {a:?}, V {b:?}"));
        } else {
            agree += 1;
        }
    }
    check.detail = format!("{agree} of {} kernels agree", kernels.len());
    vec![check]
}
