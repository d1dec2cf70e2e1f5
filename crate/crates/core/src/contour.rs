//! Zero-freeness certificates on disks via the argument principle.

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::series::{EvalResult, Evaluable};
use crate::C;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    Verified,
    Falsified,
    Inconclusive,
}

impl Status {
    /// Worst-first combination: Falsified beats Inconclusive beats Verified.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Falsified, _) | (_, Falsified) => Falsified,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }
}

/// What a certificate speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Closed-form reduction over the full parameter domain.
    ClosedForm,
    /// Only the sampled members of the family (and kernel family, if any).
    Sampled,
    /// A disk `|z| <= r_max` swept by circles.
    Disk,
    /// Mixed closed-form and sampled generators.
    Mixed,
}

impl Scope {
    pub fn merge(self, other: Scope) -> Scope {
        if self == other {
            self
        } else {
            Scope::Mixed
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateParams {
    pub scope: Scope,
    pub radii: Vec<f64>,
    pub samples: usize,
    pub witness_tol: f64,
    pub margin_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: Status,
    #[serde(serialize_with = "ser_opt_complex")]
    pub witness: Option<C>,
    /// Certified lower bound on the modulus over the tested set (Verified only).
    pub min_modulus: f64,
    pub winding: Option<i64>,
    pub member: Option<String>,
    pub reason: Option<String>,
    pub params: CertificateParams,
}

impl Certificate {
    pub fn verified(min_modulus: f64, params: CertificateParams) -> Self {
        Certificate {
            status: Status::Verified,
            witness: None,
            min_modulus,
            winding: None,
            member: None,
            reason: None,
            params,
        }
    }

    pub fn falsified(witness: C, params: CertificateParams) -> Self {
        Certificate {
            status: Status::Falsified,
            witness: Some(witness),
            min_modulus: 0.0,
            winding: None,
            member: None,
            reason: None,
            params,
        }
    }

    pub fn inconclusive(reason: impl Into<String>, params: CertificateParams) -> Self {
        Certificate {
            status: Status::Inconclusive,
            witness: None,
            min_modulus: 0.0,
            winding: None,
            member: None,
            reason: Some(reason.into()),
            params,
        }
    }

    pub fn with_member(mut self, member: impl Into<String>) -> Self {
        self.member = Some(member.into());
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn is_falsified(&self) -> bool {
        self.status == Status::Falsified
    }
}

pub(crate) fn ser_complex<S: Serializer>(z: &C, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub(crate) fn ser_opt_complex<S: Serializer>(z: &Option<C>, s: S) -> Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourConfig {
    /// Radius schedule `r_j = 1 - 2^-j`, `j = 1..=schedule_depth`.
    pub schedule_depth: u32,
    pub initial_samples: usize,
    pub max_samples: usize,
    /// `|f| + error < witness_tol` makes a point a zero witness.
    pub witness_tol: f64,
    /// Certified margins at or below this are inconclusive.
    pub margin_tol: f64,
    /// Circle sampling is refined until the Lipschitz inflation is at most this
    /// fraction of the sampled minimum.
    pub inflation_fraction: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            schedule_depth: 12,
            initial_samples: 256,
            max_samples: 1 << 20,
            witness_tol: 1e-9,
            margin_tol: 1e-7,
            inflation_fraction: 1e-2,
        }
    }
}

impl ContourConfig {
    pub fn schedule(&self) -> Vec<f64> {
        radius_schedule(self.schedule_depth)
    }

    /// The schedule truncated below `r_max`, closed by `r_max` itself.
    pub fn radii_up_to(&self, r_max: f64) -> Vec<f64> {
        let mut radii: Vec<f64> = self.schedule().into_iter().filter(|&r| r < r_max).collect();
        radii.push(r_max);
        radii
    }

    pub fn outer_radius(&self) -> f64 {
        *self.schedule().last().expect("schedule depth >= 1")
    }

    fn params(&self, scope: Scope, radii: Vec<f64>, samples: usize) -> CertificateParams {
        CertificateParams {
            scope,
            radii,
            samples,
            witness_tol: self.witness_tol,
            margin_tol: self.margin_tol,
        }
    }

    pub fn closed_form_params(&self, radii: Vec<f64>) -> CertificateParams {
        self.params(Scope::ClosedForm, radii, 0)
    }

    pub fn sampled_params(&self, samples: usize) -> CertificateParams {
        self.params(Scope::Sampled, vec![1.0], samples)
    }
}

/// `r_j = 1 - 2^-j` for `j = 1..=depth`.
pub fn radius_schedule(depth: u32) -> Vec<f64> {
    (1..=depth.max(1)).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

/// Minimum of `|f|` on a circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMin {
    /// Lower bound for `|f|` on the whole circle: sampled minimum minus error
    /// bounds minus the Lipschitz allowance between samples. May be negative.
    pub lower: f64,
    /// Sample point attaining the sampled minimum.
    pub argmin: C,
    /// Smallest `|f| + error` seen at a sample (a near-zero indicator).
    pub smallest: f64,
    pub samples: usize,
}

/// Sweep `|z| = r`, refining until the between-sample allowance is small.
pub fn min_modulus_on_circle<F: Evaluable + ?Sized>(
    f: &F,
    r: f64,
    cfg: &ContourConfig,
) -> Result<CircleMin, String> {
    if r == 0.0 {
        let v = f.eval_at(C::new(0.0, 0.0));
        if !v.is_usable() {
            return Err("evaluation bound not finite at the origin".into());
        }
        return Ok(CircleMin {
            lower: v.value.norm() - v.error_bound,
            argmin: C::new(0.0, 0.0),
            smallest: v.value.norm() + v.error_bound,
            samples: 1,
        });
    }
    let mut n = cfg.initial_samples.max(8);
    let mut values = sample_circle(f, r, n, 0, 1);
    loop {
        if values.iter().any(|v| !v.is_usable()) {
            return Err(format!("evaluation error bound not finite on |z| = {r}"));
        }
        let (idx, low) = values
            .iter()
            .map(|v| v.value.norm() - v.error_bound)
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, m)| if m < acc.1 { (i, m) } else { acc });
        let smallest = values
            .iter()
            .map(|v| v.value.norm() + v.error_bound)
            .fold(f64::INFINITY, f64::min);
        let half_arc = PI * r / n as f64;
        let lipschitz = f
            .derivative_bound(r)
            .unwrap_or_else(|| 2.0 * empirical_lipschitz(&values, 2.0 * half_arc));
        let inflation = lipschitz * half_arc;
        let done = smallest < cfg.witness_tol
            || low < cfg.margin_tol
            || inflation <= cfg.inflation_fraction * low
            || n >= cfg.max_samples;
        if done {
            return Ok(CircleMin {
                lower: low - inflation,
                argmin: C::from_polar(r, 2.0 * PI * idx as f64 / n as f64),
                smallest,
                samples: n,
            });
        }
        // interleave midpoints so refinement nests
        let mids = sample_circle(f, r, 2 * n, 1, 2);
        let mut merged = Vec::with_capacity(2 * n);
        for (a, b) in values.into_iter().zip(mids) {
            merged.push(a);
            merged.push(b);
        }
        values = merged;
        n *= 2;
    }
}

fn sample_circle<F: Evaluable + ?Sized>(f: &F, r: f64, n: usize, start: usize, stride: usize) -> Vec<EvalResult> {
    (start..n)
        .step_by(stride)
        .map(|j| f.eval_at(C::from_polar(r, 2.0 * PI * j as f64 / n as f64)))
        .collect()
}

fn empirical_lipschitz(values: &[EvalResult], arc: f64) -> f64 {
    let n = values.len();
    (0..n)
        .map(|j| (values[(j + 1) % n].value - values[j].value).norm() / arc)
        .fold(0.0, f64::max)
}

/// Why a winding number could not be computed.
#[derive(Clone, Debug, PartialEq)]
pub struct WindingFailure {
    pub reason: String,
    /// A sample where `|f| + error` fell under the witness tolerance.
    pub zero: Option<C>,
}

/// Number of zeros inside `|z| < r` by phase unwrapping on `|z| = r`.
///
/// Arcs are bisected until every consecutive phase step is below `pi/2`.
pub fn winding_number<F: Evaluable + ?Sized>(
    f: &F,
    r: f64,
    cfg: &ContourConfig,
) -> Result<i64, WindingFailure> {
    let n = cfg.initial_samples.max(8);
    let mut budget = cfg.max_samples;
    let check = |z: C| -> Result<C, WindingFailure> {
        let v = f.eval_at(z);
        if !v.is_usable() {
            return Err(WindingFailure {
                reason: format!("evaluation error bound not finite on |z| = {r}"),
                zero: None,
            });
        }
        let m = v.value.norm();
        if m + v.error_bound < cfg.witness_tol {
            return Err(WindingFailure {
                reason: format!("zero on the circle |z| = {r}"),
                zero: Some(z),
            });
        }
        if m - v.error_bound <= cfg.margin_tol {
            return Err(WindingFailure {
                reason: "error bound exceeds observed modulus".into(),
                zero: None,
            });
        }
        Ok(v.value)
    };
    let point = |t: f64| C::from_polar(r, t);
    let step = 2.0 * PI / n as f64;
    let mut values = Vec::with_capacity(n + 1);
    for j in 0..n {
        values.push(check(point(step * j as f64))?);
    }
    budget = budget.saturating_sub(n);
    values.push(values[0]);

    let mut total = 0.0;
    let mut stack: Vec<(f64, C, f64, C)> = (0..n)
        .map(|j| (step * j as f64, values[j], step * (j + 1) as f64, values[j + 1]))
        .collect();
    while let Some((ta, va, tb, vb)) = stack.pop() {
        let d = (vb / va).arg();
        if d.abs() < PI / 2.0 {
            total += d;
            continue;
        }
        if budget == 0 {
            return Err(WindingFailure {
                reason: format!("phase refinement exceeded the sample budget on |z| = {r}"),
                zero: None,
            });
        }
        budget -= 1;
        let tm = 0.5 * (ta + tb);
        let vm = check(point(tm))?;
        stack.push((ta, va, tm, vm));
        stack.push((tm, vm, tb, vb));
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Certify `f(z) != 0` for `|z| <= r_max` by sweeping the radius schedule.
pub fn nonvanishing_in_disk<F: Evaluable + ?Sized>(f: &F, r_max: f64, cfg: &ContourConfig) -> Certificate {
    let radii = cfg.radii_up_to(r_max);
    let mut samples = 0;
    let mut last = None;
    for (i, &r) in radii.iter().enumerate() {
        let outermost = i + 1 == radii.len();
        let params = cfg.params(Scope::Disk, radii[..=i].to_vec(), samples);
        let circle = match min_modulus_on_circle(f, r, cfg) {
            Ok(c) => c,
            Err(reason) => return Certificate::inconclusive(reason, params),
        };
        samples += circle.samples;
        if circle.smallest < cfg.witness_tol {
            let mut cert = Certificate::falsified(circle.argmin, cfg.params(Scope::Disk, radii[..=i].to_vec(), samples));
            cert.reason = Some(format!("zero on |z| = {r}"));
            return cert;
        }
        match winding_number(f, r, cfg) {
            Ok(0) => {}
            Ok(w) => {
                let params = cfg.params(Scope::Disk, radii[..=i].to_vec(), samples);
                return match localize_zero(f, r, cfg) {
                    Some(z) => {
                        let mut cert = Certificate::falsified(z, params);
                        cert.winding = Some(w);
                        cert
                    }
                    None => {
                        let mut cert = Certificate::inconclusive(
                            format!("winding number {w} on |z| = {r} but no zero localized"),
                            params,
                        );
                        cert.winding = Some(w);
                        cert
                    }
                };
            }
            Err(failure) => {
                if !outermost {
                    continue;
                }
                let params = cfg.params(Scope::Disk, radii.clone(), samples);
                return match failure.zero {
                    Some(z) => Certificate::falsified(z, params),
                    None => Certificate::inconclusive(failure.reason, params),
                };
            }
        }
        last = Some(circle);
    }
    let params = cfg.params(Scope::Disk, radii, samples);
    let circle = last.expect("r_max is always swept");
    if circle.lower > cfg.margin_tol {
        let mut cert = Certificate::verified(circle.lower, params);
        cert.winding = Some(0);
        cert.witness = Some(circle.argmin);
        cert
    } else {
        let mut cert = Certificate::inconclusive(
            format!("certified margin {:e} at |z| = {r_max} is below {:e}", circle.lower, cfg.margin_tol),
            params,
        );
        cert.winding = Some(0);
        cert
    }
}

/// Newton search for a zero inside `|z| < r`, started from the smallest
/// values on a polar grid. Returns a point with `|f| + error < witness_tol`.
pub fn localize_zero<F: Evaluable + ?Sized>(f: &F, r: f64, cfg: &ContourConfig) -> Option<C> {
    let mut starts: Vec<(f64, C)> = Vec::new();
    for i in 0..=16 {
        let rad = r * i as f64 / 16.0;
        let count = if i == 0 { 1 } else { 64 };
        for j in 0..count {
            let z = C::from_polar(rad, 2.0 * PI * j as f64 / count as f64);
            starts.push((f.eval_at(z).value.norm(), z));
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let h = 1e-6 * r.max(1e-3);
    for &(_, z0) in starts.iter().take(12) {
        let mut z = z0;
        for _ in 0..200 {
            let v = f.eval_at(z);
            if v.value.norm() + v.error_bound < cfg.witness_tol {
                break;
            }
            let d = (f.eval_at(z + h).value - f.eval_at(z - h).value) / (2.0 * h);
            if d.norm() == 0.0 || !d.re.is_finite() {
                break;
            }
            z -= v.value / d;
            if !(z.norm() < 2.0 * r + 1.0) {
                break;
            }
        }
        let v = f.eval_at(z);
        if z.norm() < r && v.is_usable() && v.value.norm() + v.error_bound < cfg.witness_tol {
            return Some(z);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TruncSeries;

    fn poly(c: &[f64]) -> TruncSeries {
        TruncSeries::from_real(c).unwrap()
    }

    #[test]
    fn winding_examples() {
        let cfg = ContourConfig::default();
        assert_eq!(winding_number(&poly(&[-0.5, 1.0]), 0.9, &cfg), Ok(1));
        assert_eq!(winding_number(&poly(&[1.0, 0.0, -2.0]), 0.9, &cfg), Ok(2));
        assert_eq!(winding_number(&TruncSeries::identity(4), 0.3, &cfg), Ok(0));
    }

    #[test]
    fn winding_reports_zero_on_circle() {
        let cfg = ContourConfig::default();
        let err = winding_number(&poly(&[-0.5, 1.0]), 0.5, &cfg).unwrap_err();
        assert_eq!(err.zero, Some(C::new(0.5, 0.0)));
    }

    #[test]
    fn nonvanishing_examples() {
        let cfg = ContourConfig::default();
        let cert = nonvanishing_in_disk(&poly(&[1.0, 0.5]), 0.999, &cfg);
        assert!(cert.is_verified());
        assert!(cert.min_modulus >= (1.0 - 0.5 * 0.999) * (1.0 - cfg.inflation_fraction));
        assert!(cert.min_modulus <= 1.0 - 0.5 * 0.999);

        let cert = nonvanishing_in_disk(&poly(&[1.0, -2.0]), 0.9, &cfg);
        assert!(cert.is_falsified());
        assert!((cert.witness.unwrap() - C::new(0.5, 0.0)).norm() < 1e-9);

        let cert = nonvanishing_in_disk(&poly(&[1.0, 1.0]), 0.999, &cfg);
        assert!(cert.is_verified(), "{cert:?}");
    }

    #[test]
    fn nonvanishing_localizes_interior_zero() {
        let cfg = ContourConfig::default();
        // zero at 0.3 + 0.55i, not on any schedule circle
        let root = C::new(0.3, 0.55);
        let f = TruncSeries::polynomial(vec![-root, C::new(1.0, 0.0)]).unwrap();
        let cert = nonvanishing_in_disk(&f, 0.99, &cfg);
        assert!(cert.is_falsified());
        assert!((cert.witness.unwrap() - root).norm() < 1e-8);
        assert_eq!(cert.winding, Some(1));
    }

    #[test]
    fn min_modulus_examples() {
        let cfg = ContourConfig::default();
        let m = min_modulus_on_circle(&poly(&[1.0, 1.0]), 0.5, &cfg).unwrap();
        assert!(m.lower <= 0.5 && m.lower >= 0.5 * (1.0 - cfg.inflation_fraction));
        assert!((m.argmin - C::new(-0.5, 0.0)).norm() < 1e-12);

        let m = min_modulus_on_circle(&TruncSeries::identity(3), 0.77, &cfg).unwrap();
        assert_eq!(m.lower, 1.0);

        let f = TruncSeries::from_rational(C::new(1.0, 0.0), C::new(-0.5, 0.0), 64).unwrap();
        let m = min_modulus_on_circle(&f, 0.5, &cfg).unwrap();
        // dense sweep oracle
        let dense = (0..100_000)
            .map(|j| {
                let z = C::from_polar(0.5, 2.0 * PI * j as f64 / 100_000.0);
                ((1.0 + z) / (1.0 - 0.5 * z)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((dense - 0.4).abs() < 1e-9);
        assert!(m.lower <= 0.4 && m.lower >= 0.4 * (1.0 - cfg.inflation_fraction));
        assert!((m.argmin - C::new(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn min_modulus_unusable_bounds() {
        let cfg = ContourConfig::default();
        assert!(min_modulus_on_circle(&TruncSeries::ones(8), 1.0, &cfg).is_err());
    }

    #[test]
    fn closures_are_evaluable() {
        let cfg = ContourConfig::default();
        let f = |z: C| EvalResult::exact(z * z - C::new(0.25, 0.0));
        assert_eq!(winding_number(&f, 0.9, &cfg), Ok(2));
    }

    #[test]
    fn schedule_shape() {
        let cfg = ContourConfig::default();
        let s = cfg.schedule();
        assert_eq!(s.len(), 12);
        assert_eq!(s[0], 0.5);
        assert!((s[11] - 0.999_755_859_375).abs() < 1e-15);
        assert_eq!(cfg.radii_up_to(0.9), vec![0.5, 0.75, 0.875, 0.9]);
    }
}
