//! Decision procedures for `V^T`, `V*`, `U^⊥` and `V**`, functional images
//! `λ(V)` and the verifier suites built on them.

mod closed_form;
mod image;
mod transpose;
mod verify;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::contour::{nonvanishing_in_disk, Certificate, Scope, Status};
use crate::error::{Error, Result};
use crate::family::{complete_hull, Domain, FamilySpec, Generator, Member, MemberTag};
use crate::series::{EvalResult, TruncSeries};
use crate::C;

pub use closed_form::{annulus_sum, distance_from_one};
pub use image::{functional_image, image_via_border, CloudPoint, Locator, PointFlag, PointLocator, RegionCloud};
pub(crate) use transpose::transpose_scan;
pub use verify::{verify_theorem, Check, CheckStatus, Report, Theorem};

/// A continuous linear functional `λ(f) = (f * kernel)(1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Functional {
    pub kernel: TruncSeries,
    pub label: String,
}

impl Functional {
    pub fn new(kernel: TruncSeries, label: impl Into<String>) -> Self {
        Functional {
            kernel,
            label: label.into(),
        }
    }

    /// `λ(f) = a_k(f)`.
    pub fn coefficient(k: usize) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); k + 1];
        coeffs[k] = C::new(1.0, 0.0);
        Functional::new(
            TruncSeries::polynomial(coeffs).expect("finite coefficients"),
            format!("a_{k}"),
        )
    }

    /// `λ(f) = f(1)` for `f` regular past the unit circle.
    pub fn point_evaluation(order: usize) -> Self {
        Functional::new(TruncSeries::ones(order), "f(1)")
    }
}

/// `(f * kernel)(1)` with its error bound.
pub fn apply(lambda: &Functional, f: &TruncSeries) -> Result<EvalResult> {
    let v = lambda.kernel.convolve(f).eval(C::new(1.0, 0.0));
    if v.is_usable() {
        Ok(v)
    } else {
        Err(Error::TailEstimate(format!(
            "{}: combined tail radius does not exceed 1, evaluation at z = 1 has no finite bound",
            lambda.label
        )))
    }
}

fn require_normalized(what: &str, g: &TruncSeries) -> Result<()> {
    if g.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized(format!("{what} has a_0 = {}, expected 1", g.coeffs()[0])))
    }
}

/// `g ∈ V^T`: `(f * g)(1) != 0` for every member `f`.
pub fn in_t(g: &TruncSeries, v: &FamilySpec, cfg: &Config) -> Result<Certificate> {
    require_normalized("kernel", g)?;
    if !g.is_closed_disk_regular() {
        return Err(Error::Precondition(format!(
            "kernel must be regular on the closed unit disk (tail radius {})",
            g.tail_radius()
        )));
    }
    v.validate()?;
    Ok(transpose_scan(g, v, cfg).certificate(cfg))
}

/// `h ∈ U^⊥`: `(g * h)(1) != 0` for every `g` in `U`.
pub fn in_perp(h: &TruncSeries, u: &FamilySpec, cfg: &Config) -> Result<Certificate> {
    require_normalized("series", h)?;
    u.validate()?;
    for (i, gen) in u.generators.iter().enumerate() {
        if let Generator::Fixed { series } = gen {
            if !series.is_closed_disk_regular() {
                return Err(Error::Precondition(format!(
                    "generators[{i}] is not regular on the closed unit disk"
                )));
            }
        }
    }
    Ok(transpose_scan(h, u, cfg).certificate(cfg))
}

/// `g ∈ V*`: `(f * g)(z) != 0` for `|z| < 1` and every member `f`.
pub fn in_dual(g: &TruncSeries, v: &FamilySpec, cfg: &Config) -> Result<Certificate> {
    require_normalized("kernel", g)?;
    v.validate()?;
    let mut outcome: Option<Certificate> = None;
    for (gi, gen) in v.generators.iter().enumerate() {
        let cert = dual_pencil_closed_form(g, v, gi, gen, cfg).unwrap_or_else(|| dual_sampled(g, v, gi, cfg));
        outcome = Some(match outcome {
            None => cert,
            Some(prev) => worse(prev, cert),
        });
    }
    Ok(outcome.unwrap_or_else(|| Certificate::verified(1.0, cfg.contour.closed_form_params(vec![]))))
}

/// Aggregate two certificates: the worse status wins; verified margins take
/// the minimum.
fn worse(a: Certificate, b: Certificate) -> Certificate {
    let scope = a.params.scope.merge(b.params.scope);
    let mut out = match (a.status, b.status) {
        (Status::Falsified, _) => a,
        (_, Status::Falsified) => b,
        (Status::Inconclusive, _) => a,
        (_, Status::Inconclusive) => b,
        _ => {
            if b.min_modulus < a.min_modulus {
                b
            } else {
                a
            }
        }
    };
    out.params.scope = scope;
    out
}

fn dilation_reach(v: &FamilySpec) -> Option<f64> {
    if !v.dilation_slot {
        return Some(1.0);
    }
    match &v.dilation_domain {
        None => Some(1.0),
        Some(Domain::Disk { radius } | Domain::Circle { radius }) => Some(*radius),
        Some(_) => None,
    }
}

/// Rotation-invariant pencils: the values `(f * g)(z)` over members and
/// `|z| < 1` fill the disk `|w - 1| < Σ_j R_j |a_{k_j}(g)|`.
fn dual_pencil_closed_form(g: &TruncSeries, v: &FamilySpec, gi: usize, gen: &Generator, cfg: &Config) -> Option<Certificate> {
    let Generator::Pencil { exponents, domains } = gen else {
        return None;
    };
    if !domains.iter().all(Domain::is_rotation_invariant) {
        return None;
    }
    let reach = dilation_reach(v)?;
    let betas: Vec<C> = exponents.iter().map(|&k| g.coeff(k)).collect::<Option<_>>()?;
    let outer: Vec<f64> = domains.iter().map(|d| d.max_modulus()).collect();
    let levels: Vec<(f64, usize)> = exponents
        .iter()
        .zip(&betas)
        .zip(&outer)
        .map(|((&k, b), r)| (r * b.norm() * reach.powi(k as i32), k))
        .collect();
    let total: f64 = levels.iter().map(|l| l.0).sum();
    let c = &cfg.contour;
    let r_max = c.outer_radius();
    let params = c.closed_form_params(vec![r_max]);
    if total <= 1.0 + 4.0 * f64::EPSILON {
        let at_r_max: f64 = levels.iter().map(|&(h, k)| h * r_max.powi(k as i32)).sum();
        let mut cert = Certificate::verified(1.0 - at_r_max, params);
        cert.winding = Some(0);
        return Some(cert);
    }
    let r_star = closed_form::unit_level(&levels, 1.0).expect("total exceeds one");
    let (xs, z): (Vec<C>, C) = if let [k] = exponents.as_slice() {
        let x = closed_form::aligned(outer[0], betas[0], 0.0);
        (vec![x], C::from_polar(r_star, closed_form::negative_direction(*k)))
    } else {
        let xs = outer
            .iter()
            .zip(&betas)
            .map(|(&r, &b)| closed_form::aligned(r, b, std::f64::consts::PI))
            .collect();
        (xs, C::new(r_star, 0.0))
    };
    let tag = MemberTag {
        generator: gi,
        params: xs,
        dilation: v.dilation_slot.then_some(C::new(reach, 0.0)),
    };
    let f = v.instantiate(&tag, cfg.trunc.max(g.order())).ok()?;
    let value = f.convolve(g).eval(z);
    let mut cert = if value.is_usable() && value.value.norm() + value.error_bound < c.witness_tol {
        Certificate::falsified(z, params)
    } else {
        Certificate::inconclusive(
            format!(
                "closed form places a zero at |z| = {r_star} but the witness evaluates to {:e}",
                value.value.norm()
            ),
            params,
        )
    };
    cert.member = Some(tag.to_string());
    Some(cert)
}

fn dual_sampled(g: &TruncSeries, v: &FamilySpec, gi: usize, cfg: &Config) -> Certificate {
    let single = FamilySpec {
        generators: vec![v.generators[gi].clone()],
        dilation_slot: v.dilation_slot,
        dilation_domain: v.dilation_domain.clone(),
    };
    let members = single.sample(&cfg.grid, cfg.trunc.max(g.order()));
    let r_max = cfg.contour.outer_radius();
    let certs: Vec<(MemberTag, Certificate)> = members
        .into_par_iter()
        .map(|m| {
            let cert = nonvanishing_in_disk(&m.series.convolve(g), r_max, &cfg.contour);
            (MemberTag { generator: gi, ..m.tag }, cert)
        })
        .collect();
    let samples = certs.iter().map(|(_, c)| c.params.samples).sum();
    let mut out = certs
        .into_iter()
        .map(|(tag, cert)| cert.with_member(tag.to_string()))
        .reduce(worse)
        .unwrap_or_else(|| Certificate::verified(1.0, cfg.contour.sampled_params(0)));
    out.params.scope = Scope::Sampled;
    out.params.samples = samples;
    out
}

/// Members of `kernels` certified in `V^T`.
pub fn transpose_representatives(v: &FamilySpec, kernels: &FamilySpec, cfg: &Config) -> Vec<Member> {
    kernels
        .sample(&cfg.kernel_grid, cfg.trunc)
        .into_par_iter()
        .filter(|m| in_t(&m.series, v, cfg).map(|c| c.is_verified()).unwrap_or(false))
        .collect()
}

/// Kernels of the pencil generators of `kernels` solving `(g * h)(1) = 0`
/// with a single nonzero parameter, `g = 1 - z^k / a_k(h)`.
fn solved_kernels(h: &TruncSeries, kernels: &FamilySpec, cfg: &Config) -> Vec<Member> {
    let mut out = Vec::new();
    for (gi, gen) in kernels.generators.iter().enumerate() {
        let Generator::Pencil { exponents, domains } = gen else {
            continue;
        };
        for (j, &k) in exponents.iter().enumerate() {
            let Some(a) = h.coeff(k).filter(|a| a.norm() > 0.0) else {
                continue;
            };
            let y = -1.0 / a;
            let zero_ok = domains
                .iter()
                .enumerate()
                .all(|(i, d)| i == j || d.contains(C::new(0.0, 0.0), 0.0));
            if !zero_ok || !domains[j].contains(y, 1e-12 * y.norm().max(1.0)) {
                continue;
            }
            let mut params = vec![C::new(0.0, 0.0); exponents.len()];
            params[j] = y;
            let tag = MemberTag {
                generator: gi,
                params,
                dilation: None,
            };
            if let Ok(series) = kernels.instantiate(&tag, cfg.trunc) {
                out.push(Member { series, tag });
            }
        }
    }
    out
}

/// `h ∈ (V^T)^⊥`, the dual hull `V**` when `V^T` is complete, with `V^T`
/// represented by the members of `kernels` certified in it.
///
/// Falsified is conclusive. Verified holds relative to the kernel family and
/// its grid.
pub fn in_dual_hull(h: &TruncSeries, v: &FamilySpec, kernels: &FamilySpec, cfg: &Config) -> Result<Certificate> {
    let reps = transpose_representatives(v, kernels, cfg);
    in_dual_hull_with(h, v, kernels, &reps, cfg)
}

/// [`in_dual_hull`] with precomputed representatives.
pub fn in_dual_hull_with(
    h: &TruncSeries,
    v: &FamilySpec,
    kernels: &FamilySpec,
    reps: &[Member],
    cfg: &Config,
) -> Result<Certificate> {
    dual_hull_core(h, v, kernels, reps, cfg).map(|(c, _)| c)
}

/// The certificate plus, when falsified, the kernel `g ∈ V^T` with
/// `(g * h)(1) = 0`.
pub(crate) fn dual_hull_core(
    h: &TruncSeries,
    v: &FamilySpec,
    kernels: &FamilySpec,
    reps: &[Member],
    cfg: &Config,
) -> Result<(Certificate, Option<Member>)> {
    require_normalized("series", h)?;
    v.validate()?;
    kernels.validate()?;
    let mut all: Vec<Member> = reps.to_vec();
    all.extend(
        solved_kernels(h, kernels, cfg)
            .into_iter()
            .filter(|m| in_t(&m.series, v, cfg).map(|c| c.is_verified()).unwrap_or(false)),
    );
    let usable: Vec<Member> = all.into_iter().filter(|m| m.series.is_closed_disk_regular()).collect();
    if usable.is_empty() {
        let mut cert = Certificate::verified(1.0, cfg.contour.sampled_params(0));
        cert.reason = Some("no kernel of the kernel family is certified in V^T".into());
        return Ok((cert, None));
    }
    let u = FamilySpec::new(usable.iter().map(|m| Generator::fixed(m.series.clone())).collect());
    let scan = transpose_scan(h, &u, cfg);
    let mut cert = scan.certificate(cfg);
    cert.params.scope = Scope::Sampled;
    cert.params.samples = usable.len();
    let kernel = scan.best.as_ref().and_then(|hit| usable.get(hit.tag.generator)).cloned();
    if let Some(m) = &kernel {
        cert.member = Some(format!("kernel {}", m.tag));
    }
    let witness = if cert.is_falsified() { kernel } else { None };
    Ok((cert, witness))
}

/// `V^T = (cm V)^T` on the kernels of `kernels` certified in `V^T`; the first
/// kernel losing membership under some dilation is reported.
pub fn is_complete_t(v: &FamilySpec, kernels: &FamilySpec, cfg: &Config) -> Result<Certificate> {
    v.validate()?;
    kernels.validate()?;
    let hull = complete_hull(v);
    let reps = transpose_representatives(v, kernels, cfg);
    let certs: Vec<Certificate> = reps
        .par_iter()
        .map(|g| {
            let c = in_t(&g.series, &hull, cfg).unwrap_or_else(|e| {
                Certificate::inconclusive(e.to_string(), cfg.contour.sampled_params(0))
            });
            let member = c.member.clone().unwrap_or_default();
            c.with_member(format!("kernel {} against {member}", g.tag))
        })
        .collect();
    let first_bad = certs.iter().position(|c| c.is_falsified());
    if let Some(i) = first_bad {
        let mut c = certs[i].clone();
        c.params.scope = Scope::Sampled;
        return Ok(c);
    }
    let samples = certs.len();
    let mut out = certs
        .into_iter()
        .reduce(worse)
        .unwrap_or_else(|| Certificate::verified(1.0, cfg.contour.sampled_params(0)));
    out.params.scope = Scope::Sampled;
    out.params.samples = samples;
    Ok(out)
}

/// Kernels used when the caller supplies none: polynomials `1 + x z^k`,
/// `k <= 4`, the joint pencil `1 + x z + y z^2`, and `(1 + xz)/(1 + yz)`
/// with `|y| <= 0.8`.
pub fn default_kernel_family() -> FamilySpec {
    let disk = |r: f64| Domain::Disk { radius: r };
    FamilySpec::new(vec![
        Generator::disk_pencil(1, 1.5),
        Generator::disk_pencil(2, 1.5),
        Generator::disk_pencil(3, 1.5),
        Generator::disk_pencil(4, 1.5),
        Generator::pencil(&[1, 2], vec![disk(1.5), disk(1.5)]),
        Generator::Rational {
            x: disk(1.0),
            y: disk(0.8),
        },
    ])
}
