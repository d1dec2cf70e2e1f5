//! `min |(f * g)(1)|` over a family, per generator: closed form where the
//! parameter domains allow it, otherwise on a refining grid.

use rayon::prelude::*;

use super::closed_form::{aligned, annulus_sum, distance_from_one, root, terms_summing_to, unit_level};
use crate::config::Config;
use crate::contour::{localize_zero, min_modulus_on_circle, winding_number, Certificate, Scope};
use crate::family::{distance_to_segment, Domain, FamilySpec, Generator, MemberTag};
use crate::series::{EvalResult, TruncSeries};
use crate::C;

/// Range of the dilation slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Dilation {
    None,
    Disk(f64),
    Circle(f64),
    Other,
}

impl Dilation {
    pub(crate) fn of(v: &FamilySpec) -> Self {
        if !v.dilation_slot {
            return Dilation::None;
        }
        match v.dilation_domain {
            None => Dilation::Disk(1.0),
            Some(Domain::Disk { radius }) => Dilation::Disk(radius),
            Some(Domain::Circle { radius }) => Dilation::Circle(radius),
            Some(_) => Dilation::Other,
        }
    }
}

/// A member with its value `(f * probe)(1)`.
#[derive(Clone, Debug)]
pub(crate) struct Hit {
    pub tag: MemberTag,
    pub value: EvalResult,
}

#[derive(Clone, Debug)]
pub(crate) struct Scan {
    /// Lower bound (closed form) or sampled minimum of `|(f * probe)(1)|`.
    pub lower: f64,
    /// Member attaining (or nearly attaining) the minimum.
    pub best: Option<Hit>,
    pub scope: Scope,
    pub reason: Option<String>,
    pub samples: usize,
}

impl Scan {
    fn empty() -> Self {
        Scan {
            lower: f64::INFINITY,
            best: None,
            scope: Scope::ClosedForm,
            reason: None,
            samples: 0,
        }
    }

    fn merge(mut self, other: Scan, first: bool, witness_tol: f64) -> Scan {
        let take = match (self.zero(witness_tol).is_some(), other.zero(witness_tol).is_some()) {
            (false, true) => true,
            (true, _) => false,
            (false, false) => self.best.is_none() || other.lower < self.lower,
        };
        if take && other.best.is_some() {
            self.best = other.best;
        }
        self.lower = self.lower.min(other.lower);
        self.scope = if first { other.scope } else { self.scope.merge(other.scope) };
        self.reason = self.reason.or(other.reason);
        self.samples += other.samples;
        self
    }

    /// The member value, if it is a certified zero.
    pub(crate) fn zero(&self, witness_tol: f64) -> Option<&Hit> {
        self.best
            .as_ref()
            .filter(|h| h.value.is_usable() && h.value.value.norm() + h.value.error_bound < witness_tol)
    }

    pub(crate) fn certificate(&self, cfg: &Config) -> Certificate {
        let c = &cfg.contour;
        let params = match self.scope {
            Scope::ClosedForm => c.closed_form_params(vec![1.0]),
            scope => {
                let mut p = c.sampled_params(self.samples);
                p.scope = scope;
                p
            }
        };
        if let Some(hit) = self.zero(c.witness_tol) {
            let mut cert = Certificate::falsified(hit.tag.dilation.unwrap_or(C::new(1.0, 0.0)), params);
            cert.reason = Some(format!("|(f * g)(1)| <= {:e}", hit.value.value.norm() + hit.value.error_bound));
            return cert.with_member(hit.tag.to_string());
        }
        if let Some(reason) = &self.reason {
            return Certificate::inconclusive(reason.clone(), params);
        }
        if self.lower > c.margin_tol {
            let mut cert = Certificate::verified(self.lower, params);
            if let Some(hit) = &self.best {
                cert.member = Some(hit.tag.to_string());
            }
            return cert;
        }
        let mut cert = Certificate::inconclusive(
            format!("minimum {:e} is below the margin {:e} with no certified zero", self.lower, c.margin_tol),
            params,
        );
        cert.min_modulus = self.lower.max(0.0);
        if let Some(hit) = &self.best {
            cert.member = Some(hit.tag.to_string());
        }
        cert
    }
}

fn value_at_one(probe: &TruncSeries, f: &TruncSeries) -> EvalResult {
    probe.convolve(f).eval(C::new(1.0, 0.0))
}

fn hit(probe: &TruncSeries, v: &FamilySpec, tag: MemberTag, trunc: usize) -> Option<Hit> {
    let f = v.instantiate(&tag, trunc).ok()?;
    Some(Hit {
        value: value_at_one(probe, &f),
        tag,
    })
}

/// `min_{f in V} |(f * probe)(1)|` with the member attaining it.
pub(crate) fn transpose_scan(probe: &TruncSeries, v: &FamilySpec, cfg: &Config) -> Scan {
    let dil = Dilation::of(v);
    let trunc = cfg.trunc.max(probe.order());
    let mut total = Scan::empty();
    for (gi, gen) in v.generators.iter().enumerate() {
        let closed = match gen {
            Generator::Pencil { exponents, domains } => pencil_closed_form(probe, v, gi, exponents, domains, dil, trunc),
            Generator::Fixed { series } => fixed_closed_form(probe, gi, series, dil, cfg),
            Generator::Rational { .. } => None,
        };
        let scan = match closed {
            Some(s) => s,
            None => sampled(probe, v, gi, cfg, trunc),
        };
        total = total.merge(scan, gi == 0, cfg.contour.witness_tol);
    }
    total
}

fn pencil_closed_form(
    probe: &TruncSeries,
    v: &FamilySpec,
    gi: usize,
    exponents: &[usize],
    domains: &[Domain],
    dil: Dilation,
    trunc: usize,
) -> Option<Scan> {
    let betas: Vec<C> = exponents.iter().map(|&k| probe.coeff(k)).collect::<Option<_>>()?;
    if domains.iter().all(Domain::is_rotation_invariant) {
        let ranges: Vec<(f64, f64)> = domains
            .iter()
            .zip(&betas)
            .map(|(d, b)| {
                let (lo, hi) = d.radial_range().expect("rotation invariant");
                (lo * b.norm(), hi * b.norm())
            })
            .collect();
        return radial_pencil(probe, v, gi, exponents, domains, &betas, &ranges, dil, trunc);
    }
    if let ([k], [Domain::Segment { from, to }], [beta]) = (exponents, domains, betas.as_slice()) {
        return segment_pencil(probe, v, gi, *k, *from, *to, *beta, dil, trunc);
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn radial_pencil(
    probe: &TruncSeries,
    v: &FamilySpec,
    gi: usize,
    exponents: &[usize],
    domains: &[Domain],
    betas: &[C],
    ranges: &[(f64, f64)],
    dil: Dilation,
    trunc: usize,
) -> Option<Scan> {
    let outer_radius = |d: &Domain| d.radial_range().expect("rotation invariant").1;
    let (lower, tag) = match dil {
        Dilation::None | Dilation::Circle(_) => {
            let rho = if let Dilation::Circle(r) = dil { r } else { 1.0 };
            let scaled: Vec<(f64, f64)> = ranges
                .iter()
                .zip(exponents)
                .map(|(&(lo, hi), &k)| (lo * rho.powi(k as i32), hi * rho.powi(k as i32)))
                .collect();
            let (inner, outer) = annulus_sum(&scaled);
            let t = 1.0f64.clamp(inner, outer);
            let terms = terms_summing_to(&scaled, t);
            let params = terms
                .iter()
                .zip(betas)
                .zip(exponents)
                .zip(domains)
                .map(|(((w, b), &k), d)| {
                    let scale = b.norm() * rho.powi(k as i32);
                    if scale > 0.0 {
                        w / (b * rho.powi(k as i32))
                    } else {
                        C::new(outer_radius(d), 0.0)
                    }
                })
                .collect();
            let dilation = matches!(dil, Dilation::Circle(_)).then_some(C::new(rho, 0.0));
            (distance_from_one(inner, outer), MemberTag { generator: gi, params, dilation })
        }
        Dilation::Disk(rho) => {
            let outer: f64 = ranges.iter().zip(exponents).map(|(r, &k)| r.1 * rho.powi(k as i32)).sum();
            let levels: Vec<(f64, usize)> = ranges.iter().zip(exponents).map(|(r, &k)| (r.1, k)).collect();
            let s = unit_level(&levels, rho).unwrap_or(rho);
            let params = domains
                .iter()
                .zip(betas)
                .map(|(d, &b)| aligned(outer_radius(d), b, std::f64::consts::PI))
                .collect();
            (
                (1.0 - outer).max(0.0),
                MemberTag {
                    generator: gi,
                    params,
                    dilation: Some(C::new(s, 0.0)),
                },
            )
        }
        Dilation::Other => return None,
    };
    Some(Scan {
        lower,
        best: hit(probe, v, tag, trunc),
        scope: Scope::ClosedForm,
        reason: None,
        samples: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn segment_pencil(
    probe: &TruncSeries,
    v: &FamilySpec,
    gi: usize,
    k: usize,
    from: C,
    to: C,
    beta: C,
    dil: Dilation,
    trunc: usize,
) -> Option<Scan> {
    let (lower, tag) = match dil {
        Dilation::None => {
            if beta == C::new(0.0, 0.0) {
                (1.0, MemberTag { generator: gi, params: vec![from], dilation: None })
            } else {
                let target = -1.0 / beta;
                let d = to - from;
                let t = if d.norm_sqr() > 0.0 {
                    (((target - from) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let x = from + d * t;
                (
                    beta.norm() * distance_to_segment(target, from, to),
                    MemberTag { generator: gi, params: vec![x], dilation: None },
                )
            }
        }
        Dilation::Disk(rho) => {
            let x = if from.norm() >= to.norm() { from } else { to };
            let reach = x.norm() * beta.norm() * rho.powi(k as i32);
            let s = if reach >= 1.0 { root(-1.0 / (x * beta), k) } else { C::new(rho, 0.0) };
            ((1.0 - reach).max(0.0), MemberTag { generator: gi, params: vec![x], dilation: Some(s) })
        }
        _ => return None,
    };
    Some(Scan {
        lower,
        best: hit(probe, v, tag, trunc),
        scope: Scope::ClosedForm,
        reason: None,
        samples: 0,
    })
}

/// A fixed member, optionally under a disk or circle of dilations: the
/// dilated value is `(f * probe)(s)`.
fn fixed_closed_form(
    probe: &TruncSeries,
    gi: usize,
    series: &TruncSeries,
    dil: Dilation,
    cfg: &Config,
) -> Option<Scan> {
    let h = probe.convolve(series);
    let tag = |s: Option<C>| MemberTag { generator: gi, params: vec![], dilation: s };
    let scan = |lower: f64, best: Option<Hit>, reason: Option<String>, samples: usize| Scan {
        lower,
        best,
        scope: if samples > 0 { Scope::Disk } else { Scope::ClosedForm },
        reason,
        samples,
    };
    let at = |s: C| Hit { value: h.eval(s), tag: tag(Some(s)) };
    match dil {
        Dilation::None => {
            let value = h.eval(C::new(1.0, 0.0));
            let reason = (!value.is_usable()).then(|| "evaluation bound not finite at z = 1".to_string());
            let lower = value.value.norm() - value.error_bound;
            Some(scan(lower, Some(Hit { value, tag: tag(None) }), reason, 0))
        }
        Dilation::Circle(r) | Dilation::Disk(r) => {
            let c = &cfg.contour;
            let circle = match min_modulus_on_circle(&h, r, c) {
                Ok(m) => m,
                Err(e) => return Some(scan(0.0, None, Some(e), 0)),
            };
            if circle.smallest < c.witness_tol || matches!(dil, Dilation::Circle(_)) {
                return Some(scan(circle.lower, Some(at(circle.argmin)), None, circle.samples));
            }
            match winding_number(&h, r, c) {
                Ok(0) => Some(scan(circle.lower, Some(at(circle.argmin)), None, circle.samples)),
                Ok(w) => match localize_zero(&h, r, c) {
                    Some(z) => Some(scan(0.0, Some(at(z)), None, circle.samples)),
                    None => Some(scan(
                        0.0,
                        None,
                        Some(format!("winding number {w} on |s| = {r} but no zero localized")),
                        circle.samples,
                    )),
                },
                Err(fail) => Some(match fail.zero {
                    Some(z) => scan(0.0, Some(at(z)), None, circle.samples),
                    None => scan(0.0, None, Some(fail.reason), circle.samples),
                }),
            }
        }
        Dilation::Other => None,
    }
}

/// Grid minimum for one generator, refined while no decision is reached.
fn sampled(probe: &TruncSeries, v: &FamilySpec, gi: usize, cfg: &Config, trunc: usize) -> Scan {
    let single = FamilySpec {
        generators: vec![v.generators[gi].clone()],
        dilation_slot: v.dilation_slot,
        dilation_domain: v.dilation_domain.clone(),
    };
    let mut grid = cfg.grid.clone();
    let mut samples = 0;
    let mut level = 0;
    loop {
        let members = single.sample(&grid, trunc);
        samples += members.len();
        let hits: Vec<Hit> = members
            .into_par_iter()
            .map(|m| Hit {
                value: value_at_one(probe, &m.series),
                tag: MemberTag { generator: gi, ..m.tag },
            })
            .collect();
        let unusable = hits.iter().any(|h| !h.value.is_usable());
        let best = hits
            .into_iter()
            .min_by(|a, b| {
                (a.value.value.norm() + a.value.error_bound).total_cmp(&(b.value.value.norm() + b.value.error_bound))
            });
        let lower = best.as_ref().map_or(f64::INFINITY, |h| h.value.value.norm() - h.value.error_bound);
        let scan = Scan {
            lower,
            best,
            scope: Scope::Sampled,
            reason: unusable.then(|| "evaluation bound not finite at z = 1 for a sampled member".to_string()),
            samples,
        };
        let decided = scan.reason.is_some() || scan.zero(cfg.contour.witness_tol).is_some() || lower > cfg.contour.margin_tol;
        if decided || level >= cfg.max_refinements {
            let mut scan = scan;
            if !decided && scan.reason.is_none() {
                scan.reason = Some(format!(
                    "sampled minimum {lower:e} after {level} refinements: no margin and no certified zero"
                ));
            }
            return scan;
        }
        grid = grid.refine();
        level += 1;
    }
}
