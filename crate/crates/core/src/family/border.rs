//! Border elements: members that are not a proper dilation `P_x g`, `|x| < 1`,
//! of another member.

use std::f64::consts::PI;

use super::{Domain, FamilySpec, Generator, Member, MemberTag};
use crate::error::{Error, Result};
use crate::series::TruncSeries;
use crate::C;

const REL_TOL: f64 = 1e-12;

/// `f = P_x g` with `g` a border element.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub g: Member,
    pub x: C,
}

/// `bor(V)` for pencil, fixed, and circle-domain rational generators.
///
/// Pencils over rotation-invariant domains keep one parameter on its outer
/// circle (no common radial factor can then be extracted); a single-parameter
/// pencil over a segment keeps the segment's points of maximal modulus. For
/// families with a dilation slot the result is `bor(base)` under rotations.
pub fn border_elements(v: &FamilySpec) -> Result<FamilySpec> {
    if v.is_identity_class() {
        return Ok(FamilySpec::identity());
    }
    let mut generators = Vec::new();
    for (i, gen) in v.generators.iter().enumerate() {
        match gen {
            Generator::Fixed { series } => {
                if !series.is_identity() {
                    generators.push(gen.clone());
                }
            }
            Generator::Pencil { exponents, domains } => {
                generators.extend(pencil_border(i, exponents, domains)?);
            }
            Generator::Rational { x, y } => {
                if matches!(x, Domain::Circle { .. }) && matches!(y, Domain::Circle { .. }) {
                    generators.push(gen.clone());
                } else {
                    return Err(Error::Unsupported(format!(
                        "generators[{i}]: border of a rational generator needs circle parameter domains"
                    )));
                }
            }
        }
    }
    if generators.is_empty() {
        return Ok(FamilySpec::identity());
    }
    Ok(FamilySpec {
        generators,
        dilation_slot: v.dilation_slot,
        dilation_domain: v.dilation_slot.then_some(Domain::Circle { radius: 1.0 }),
    })
}

fn pencil_border(i: usize, exponents: &[usize], domains: &[Domain]) -> Result<Vec<Generator>> {
    if domains.iter().all(Domain::is_rotation_invariant) {
        if domains.iter().any(|d| matches!(d, Domain::Circle { radius } if *radius > 0.0)) {
            return Ok(vec![Generator::pencil(exponents, domains.to_vec())]);
        }
        let mut out = Vec::new();
        for (j, d) in domains.iter().enumerate() {
            let outer = d.max_modulus();
            if outer == 0.0 {
                continue;
            }
            let mut ds = domains.to_vec();
            ds[j] = Domain::Circle { radius: outer };
            out.push(Generator::pencil(exponents, ds));
        }
        return Ok(out);
    }
    if let [d] = domains {
        let extremes = d.extreme_points().unwrap_or_default();
        return Ok(extremes
            .into_iter()
            .filter(|p| p.norm() > 0.0)
            .map(|p| Generator::pencil(exponents, vec![Domain::point(p)]))
            .collect());
    }
    Err(Error::Unsupported(format!(
        "generators[{i}]: border of a multi-parameter pencil needs rotation-invariant domains"
    )))
}

/// Every minimal-radius decomposition `f = P_x g`, `g ∈ bor(V)`, found across
/// generators. For `f ≠ e` these differ only by rotations `P_y`, `|y| = 1`.
pub fn border_decompositions(v: &FamilySpec, f: &TruncSeries) -> Result<Vec<Decomposition>> {
    let scale = f.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
    let tol = REL_TOL * scale;
    let is_e = f.coeffs()[1..].iter().all(|c| c.norm() <= tol);
    let trunc = f.order();
    let mut found: Vec<(f64, Decomposition)> = Vec::new();
    let only_e = v.is_identity_class();
    for (gi, gen) in v.generators.iter().enumerate() {
        let cands = match gen {
            Generator::Fixed { series } if series.is_identity() => {
                if is_e {
                    vec![(0.0, vec![], C::new(0.0, 0.0))]
                } else {
                    vec![]
                }
            }
            Generator::Fixed { series } => fixed_candidates(series, f, is_e, tol),
            Generator::Pencil { exponents, domains } => pencil_candidates(exponents, domains, f, is_e, tol),
            Generator::Rational { x, y } => rational_candidates(x, y, f, is_e, tol),
        };
        for (r, params, x) in cands {
            let tag = MemberTag {
                generator: gi,
                params,
                dilation: None,
            };
            let g = v.generators[gi].instantiate(&tag.params, trunc)?;
            // every candidate must actually reproduce f
            if g.dilate(x).coeff_distance(f) > 1e-10 * scale {
                continue;
            }
            found.push((r, Decomposition { g: Member { series: g, tag }, x }));
        }
    }
    if found.is_empty() {
        return Err(Error::Decomposition("no generator represents the series as a dilation".into()));
    }
    let r0 = found.iter().map(|(r, _)| *r).fold(f64::INFINITY, f64::min);
    let mut out: Vec<Decomposition> = found
        .into_iter()
        .filter(|(r, _)| *r <= r0 * (1.0 + 1e-12) + 1e-15)
        .map(|(_, d)| d)
        .collect();
    // for f = e prefer a non-identity border member when V ≠ {e}
    if is_e && !only_e && out.iter().any(|d| !d.g.series.is_identity()) {
        out.retain(|d| !d.g.series.is_identity());
    }
    Ok(out)
}

/// Canonical `f = P_x g`, `g ∈ bor(V)`, `|x|` minimal. Among rotations of `g`
/// the one whose lowest nonconstant nonzero coefficient has argument closest
/// to 0 is returned (ties: smallest `arg x` in `[0, 2π)`, then generator order).
pub fn border_decompose(v: &FamilySpec, f: &Member) -> Result<Decomposition> {
    let mut all = border_decompositions(v, &f.series)?;
    all.sort_by(|a, b| canonical_key(a).partial_cmp(&canonical_key(b)).expect("finite keys"));
    Ok(all.swap_remove(0))
}

fn canonical_key(d: &Decomposition) -> (f64, f64, usize) {
    let lead = d.g.series.coeffs()[1..]
        .iter()
        .find(|c| c.norm() > REL_TOL)
        .map(|c| {
            let a = c.arg().rem_euclid(2.0 * PI);
            a.min(2.0 * PI - a)
        })
        .unwrap_or(0.0);
    let xa = if d.x.norm() == 0.0 { 0.0 } else { d.x.arg().rem_euclid(2.0 * PI) };
    // snap tiny arguments so that rounding noise cannot flip the order
    let snap = |a: f64| if a < 1e-12 || a > 2.0 * PI - 1e-12 { 0.0 } else { a };
    (snap(lead), snap(xa), d.g.tag.generator)
}

type Candidate = (f64, Vec<C>, C);

fn branches(r: f64, target: C, k: usize) -> Vec<C> {
    // all x with |x| = r and arg(x^k) = arg(target)
    let base = target.arg() / k as f64;
    (0..k)
        .map(|m| C::from_polar(r, base + 2.0 * PI * m as f64 / k as f64))
        .collect()
}

fn pencil_candidates(exponents: &[usize], domains: &[Domain], f: &TruncSeries, is_e: bool, tol: f64) -> Vec<Candidate> {
    // f must be supported on {0} ∪ exponents
    for (k, c) in f.coeffs().iter().enumerate().skip(1) {
        if !exponents.contains(&k) && c.norm() > tol {
            return vec![];
        }
    }
    let p: Vec<C> = exponents.iter().map(|&k| f.coeff(k).unwrap_or_default()).collect();
    if is_e {
        let params = match canonical_border_params(domains) {
            Some(ps) => ps,
            None => return vec![],
        };
        return vec![(0.0, params, C::new(0.0, 0.0))];
    }
    let lead = exponents
        .iter()
        .zip(&p)
        .enumerate()
        .filter(|(_, (_, pj))| pj.norm() > tol)
        .min_by_key(|(_, (k, _))| **k)
        .map(|(j, _)| j)
        .expect("f ≠ e has a nonzero pencil coefficient");

    if domains.iter().all(Domain::is_rotation_invariant) {
        let mut lower: f64 = 0.0;
        let mut upper: f64 = 1.0 + 1e-12;
        for ((&k, pj), d) in exponents.iter().zip(&p).zip(domains) {
            let (inner, outer) = d.radial_range().expect("rotation invariant");
            let m = pj.norm();
            if m <= tol {
                if inner > 0.0 {
                    return vec![];
                }
                continue;
            }
            if outer == 0.0 {
                return vec![];
            }
            lower = lower.max((m / outer).powf(1.0 / k as f64));
            if inner > 0.0 {
                upper = upper.min((m / inner).powf(1.0 / k as f64));
            }
        }
        if lower > upper * (1.0 + 1e-12) {
            return vec![];
        }
        let k = exponents[lead];
        return branches(lower, p[lead], k)
            .into_iter()
            .map(|x| {
                let params = exponents
                    .iter()
                    .zip(&p)
                    .map(|(&kj, pj)| if pj.norm() <= tol { C::new(0.0, 0.0) } else { pj / x.powu(kj as u32) })
                    .collect();
                (lower, params, x)
            })
            .collect();
    }
    if let ([k], [d]) = (exponents, domains) {
        let extremes = d.extreme_points().unwrap_or_default();
        let mut out = Vec::new();
        for y in extremes {
            if y.norm() == 0.0 {
                continue;
            }
            let r = (p[0].norm() / y.norm()).powf(1.0 / *k as f64);
            if r > 1.0 + 1e-12 {
                continue;
            }
            for x in branches(r, p[0] / y, *k) {
                out.push((r, vec![y], x));
            }
        }
        return out;
    }
    vec![]
}

fn canonical_border_params(domains: &[Domain]) -> Option<Vec<C>> {
    if domains.iter().all(Domain::is_rotation_invariant) {
        return Some(domains.iter().map(|d| C::new(d.max_modulus(), 0.0)).collect());
    }
    if let [d] = domains {
        return d.extreme_points().and_then(|e| e.first().copied()).map(|p| vec![p]);
    }
    None
}

fn fixed_candidates(g: &TruncSeries, f: &TruncSeries, is_e: bool, tol: f64) -> Vec<Candidate> {
    if is_e {
        return vec![(0.0, vec![], C::new(0.0, 0.0))];
    }
    let Some((k, gk)) = g.coeffs().iter().enumerate().skip(1).find(|(_, c)| c.norm() > REL_TOL) else {
        return vec![];
    };
    let Some(fk) = f.coeff(k) else { return vec![] };
    if fk.norm() <= tol {
        return vec![];
    }
    let ratio = fk / gk;
    let r = ratio.norm().powf(1.0 / k as f64);
    if r > 1.0 + 1e-12 {
        return vec![];
    }
    branches(r, ratio, k).into_iter().map(|x| (r, vec![], x)).collect()
}

fn rational_candidates(xd: &Domain, yd: &Domain, f: &TruncSeries, is_e: bool, tol: f64) -> Vec<Candidate> {
    let (Domain::Circle { radius: ra }, Domain::Circle { radius: rb }) = (xd, yd) else {
        return vec![];
    };
    if is_e {
        return vec![(0.0, vec![C::new(*ra, 0.0), C::new(*rb, 0.0)], C::new(0.0, 0.0))];
    }
    let (Some(c1), Some(c2)) = (f.coeff(1), f.coeff(2)) else {
        return vec![];
    };
    if c1.norm() <= tol {
        return vec![];
    }
    // f = (1 + αz)/(1 + βz): c1 = α - β, c2 = -β c1
    let beta = -c2 / c1;
    let alpha = c1 + beta;
    let r = if *rb > 0.0 { beta.norm() / rb } else { alpha.norm() / ra };
    if r > 1.0 + 1e-12 || r == 0.0 {
        return vec![];
    }
    let x = C::from_polar(r, c1.arg());
    vec![(r, vec![alpha / x, beta / x], x)]
}
