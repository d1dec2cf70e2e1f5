//! Truncated power series with rigorous tail control.
//!
//! A [`TruncSeries`] stores the Taylor coefficients `c_0..c_N` of a function
//! regular near the origin together with a [`Tail`] describing what is known
//! about the coefficients past `N`. Evaluation returns the Horner value plus a
//! bound that covers both the discarded tail and floating-point rounding.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C;

/// Default truncation degree.
pub const DEFAULT_ORDER: usize = 64;

const UNIT_ROUNDOFF: f64 = f64::EPSILON * 0.5;

/// Knowledge about the coefficients beyond the stored order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    /// All coefficients past the stored order vanish.
    Exact,
    /// `|a_k| <= m * rho^(-k)` for every `k` past the stored order.
    Geometric { m: f64, rho: f64 },
    /// Nothing is known; evaluation away from the origin is unusable.
    Unknown,
}

impl Tail {
    /// Radius of the open disk on which the tail is summable.
    pub fn radius(&self) -> f64 {
        match *self {
            Tail::Exact => f64::INFINITY,
            Tail::Geometric { rho, .. } => rho,
            Tail::Unknown => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    #[serde(serialize_with = "crate::contour::ser_complex")]
    pub value: C,
    pub error_bound: f64,
}

impl EvalResult {
    pub fn exact(value: C) -> Self {
        EvalResult {
            value,
            error_bound: 0.0,
        }
    }

    pub fn is_usable(&self) -> bool {
        self.error_bound.is_finite() && self.value.re.is_finite() && self.value.im.is_finite()
    }
}

/// Anything that can be evaluated with an error bound.
pub trait Evaluable: Sync {
    fn eval_at(&self, z: C) -> EvalResult;

    /// Upper bound on `|f'|` over the circle `|z| = r`, when known.
    fn derivative_bound(&self, _r: f64) -> Option<f64> {
        None
    }
}

impl<F> Evaluable for F
where
    F: Fn(C) -> EvalResult + Sync,
{
    fn eval_at(&self, z: C) -> EvalResult {
        self(z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesLiteral", into = "SeriesLiteral")]
pub struct TruncSeries {
    coeffs: Vec<C>,
    tail: Tail,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<C>, tail: Tail) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("at least one coefficient is required".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSeries("coefficients must be finite".into()));
        }
        if let Tail::Geometric { m, rho } = tail {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidSeries(format!("tail M must be finite and >= 0, got {m}")));
            }
            if !(rho > 0.0) || rho.is_nan() {
                return Err(Error::InvalidSeries(format!("tail rho must be > 0, got {rho}")));
            }
        }
        Ok(TruncSeries { coeffs, tail })
    }

    /// Exact polynomial with the given coefficients.
    pub fn polynomial(coeffs: Vec<C>) -> Result<Self> {
        Self::new(coeffs, Tail::Exact)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&c| C::new(c, 0.0)).collect())
    }

    /// The constant `e ≡ 1` padded to `order`.
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); order + 1];
        coeffs[0] = C::new(1.0, 0.0);
        TruncSeries {
            coeffs,
            tail: Tail::Exact,
        }
    }

    /// Truncation of `(1 - z)^{-1}`, the convolution identity.
    pub fn ones(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![C::new(1.0, 0.0); order + 1],
            tail: Tail::Geometric { m: 1.0, rho: 1.0 },
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail == Tail::Exact
    }

    /// `a_0 == 1` exactly, i.e. the series is a candidate member of `A_0`.
    pub fn is_normalized(&self) -> bool {
        self.coeffs[0] == C::new(1.0, 0.0)
    }

    /// Coefficient `a_k`, if it is determined by the stored data.
    pub fn coeff(&self, k: usize) -> Option<C> {
        match self.coeffs.get(k) {
            Some(&c) => Some(c),
            None if self.is_exact() => Some(C::new(0.0, 0.0)),
            None => None,
        }
    }

    /// Upper bound on `|a_k|`, using the tail past the stored order.
    pub fn coeff_bound(&self, k: usize) -> f64 {
        match self.coeffs.get(k) {
            Some(c) => c.norm(),
            None => match self.tail {
                Tail::Exact => 0.0,
                Tail::Geometric { m, rho } => m * rho.powi(-(k as i32)),
                Tail::Unknown => f64::INFINITY,
            },
        }
    }

    /// Largest radius at which the whole series (not just the stored part) is
    /// certified to converge.
    pub fn tail_radius(&self) -> f64 {
        self.tail.radius()
    }

    /// `true` when the series is certified regular on the closed unit disk.
    pub fn is_closed_disk_regular(&self) -> bool {
        self.tail_radius() > 1.0
    }

    /// `true` when every stored coefficient except `a_0` is zero and the tail is exact.
    pub fn is_identity(&self) -> bool {
        self.is_exact()
            && self.is_normalized()
            && self.coeffs[1..].iter().all(|c| *c == C::new(0.0, 0.0))
    }

    /// Evaluate with a bound covering the discarded tail and Horner rounding.
    pub fn eval(&self, z: C) -> EvalResult {
        let mut value = C::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let r = z.norm();
        for c in self.coeffs.iter().rev() {
            value = value * z + c;
            magnitude = magnitude * r + c.norm();
        }
        if r == 0.0 {
            return EvalResult::exact(self.coeffs[0]);
        }
        let n = self.order() as f64;
        let head = self.coeffs[0].norm();
        let rounding = if magnitude > head {
            (4.0 * n + 8.0) * UNIT_ROUNDOFF * magnitude
        } else {
            0.0
        };
        let tail = match self.tail {
            Tail::Exact => 0.0,
            Tail::Geometric { m, rho } => geometric_remainder(m, r / rho, self.order() + 1),
            Tail::Unknown => f64::INFINITY,
        };
        EvalResult {
            value,
            error_bound: rounding + tail,
        }
    }

    /// Hadamard product: `a_k(f * g) = a_k(f) a_k(g)`.
    pub fn convolve(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.order().min(other.order());
        let coeffs = self.coeffs[..=n]
            .iter()
            .zip(&other.coeffs[..=n])
            .map(|(a, b)| a * b)
            .collect();
        let tail = match (self.tail, other.tail) {
            (Tail::Exact, Tail::Exact) => Tail::Exact,
            (Tail::Exact, t) => exact_times(self, n, t),
            (t, Tail::Exact) => exact_times(other, n, t),
            (Tail::Geometric { .. }, Tail::Geometric { .. }) => {
                let (m1, r1) = self.stored_tail_envelope(n);
                let (m2, r2) = other.stored_tail_envelope(n);
                Tail::Geometric {
                    m: m1 * m2,
                    rho: r1 * r2,
                }
            }
            _ => Tail::Unknown,
        };
        TruncSeries { coeffs, tail }
    }

    /// Geometric envelope `(M, rho)` valid for every coefficient past `n`,
    /// including stored ones in `(n, order]`.
    fn stored_tail_envelope(&self, n: usize) -> (f64, f64) {
        let Tail::Geometric { m, rho } = self.tail else {
            unreachable!("envelope is only taken for geometric tails");
        };
        let stored = self.coeffs[n + 1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * rho.powi((n + 1 + i) as i32))
            .fold(0.0, f64::max);
        (m.max(stored), rho)
    }

    /// Dilation `(P_x f)(z) = f(xz)`; `P_0 f = e`.
    pub fn dilate(&self, x: C) -> TruncSeries {
        if x == C::new(0.0, 0.0) {
            return TruncSeries::identity(self.order());
        }
        let mut power = C::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * power;
                power *= x;
                out
            })
            .collect();
        let tail = match self.tail {
            Tail::Geometric { m, rho } => Tail::Geometric {
                m,
                rho: rho / x.norm(),
            },
            t => t,
        };
        TruncSeries { coeffs, tail }
    }

    /// Dilation by `|x| > 1`, refused unless the result stays regular on the
    /// closed unit disk.
    pub fn dilate_outward(&self, x: C) -> Result<TruncSeries> {
        if x.norm() > 1.0 && self.tail_radius() <= x.norm() {
            return Err(Error::Precondition(format!(
                "dilation by |x| = {} leaves the certified radius {}",
                x.norm(),
                self.tail_radius()
            )));
        }
        Ok(self.dilate(x))
    }

    /// Taylor coefficients of `(1 + xz) / (1 + yz)` up to `order`.
    pub fn from_rational(x: C, y: C, order: usize) -> Result<TruncSeries> {
        let ny = y.norm();
        if !(ny < 1.0) {
            return Err(Error::PoleInsideDisk(ny));
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(C::new(1.0, 0.0));
        let d = x - y;
        let mut power = C::new(1.0, 0.0);
        for _ in 1..=order {
            coeffs.push(d * power);
            power *= -y;
        }
        let tail = if d == C::new(0.0, 0.0) || ny == 0.0 {
            Tail::Exact
        } else {
            // |c_k| = |x - y| |y|^(k-1) = (|x - y| / |y|) |y|^k
            Tail::Geometric {
                m: d.norm() / ny,
                rho: 1.0 / ny,
            }
        };
        TruncSeries::new(coeffs, tail)
    }

    /// Coefficientwise distance `max_k |a_k(f) - a_k(g)|` over the common order.
    pub fn coeff_distance(&self, other: &TruncSeries) -> f64 {
        let n = self.order().max(other.order());
        (0..=n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_default();
                let b = other.coeffs.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Extend an exact polynomial with zeros up to `order`.
    pub fn padded(&self, order: usize) -> TruncSeries {
        if order <= self.order() || !self.is_exact() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::new(0.0, 0.0));
        TruncSeries {
            coeffs,
            tail: Tail::Exact,
        }
    }
}

impl Evaluable for TruncSeries {
    fn eval_at(&self, z: C) -> EvalResult {
        self.eval(z)
    }

    fn derivative_bound(&self, r: f64) -> Option<f64> {
        let mut stored = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            stored = stored * r + k as f64 * c.norm();
        }
        let tail = match self.tail {
            Tail::Exact => 0.0,
            Tail::Geometric { m, rho } => {
                let q = r / rho;
                if q >= 1.0 {
                    return None;
                }
                if r == 0.0 {
                    0.0
                } else {
                    // sum_{k>N} k m q^k / r
                    let n = self.order() as f64;
                    m / r * q.powf(n + 1.0) * ((n + 1.0) - n * q) / ((1.0 - q) * (1.0 - q))
                }
            }
            Tail::Unknown => return None,
        };
        Some(stored + tail)
    }
}

fn exact_times(poly: &TruncSeries, n: usize, other: Tail) -> Tail {
    let extra = poly.coeffs[n + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if extra == 0.0 {
        return Tail::Exact;
    }
    match other {
        Tail::Geometric { m, rho } => Tail::Geometric { m: extra * m, rho },
        t => t,
    }
}

/// `m * sum_{k >= start} q^k`, infinite when `q >= 1`.
fn geometric_remainder(m: f64, q: f64, start: usize) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if q >= 1.0 {
        return f64::INFINITY;
    }
    m * q.powi(start as i32) / (1.0 - q)
}

/// Bound on `sup_{|z| <= rho} |(f_n * g_n)(z) - (f * g)(z)|` from the Cauchy
/// estimates `|a_k(f_n)| <= m_f rho_f^-k`, `|a_k(f_n) - a_k(f)| <= eps_f rho_f^-k`
/// and the analogous ones for `g`.
///
/// The geometric factor is `(1 - rho / (rho_f rho_g))^{-1}`.
pub fn convolution_perturbation_bound(
    eps_f: f64,
    eps_g: f64,
    m_f: f64,
    m_g: f64,
    rho: f64,
    rho_f: f64,
    rho_g: f64,
) -> f64 {
    let q = rho / (rho_f * rho_g);
    if q >= 1.0 {
        return f64::INFINITY;
    }
    (eps_g * m_f + eps_f * m_g) / (1.0 - q)
}

/// Cauchy tail `(M, rho1)` from a sampled maximum of `|f|` on `|z| = rho1`.
///
/// The sampled maximum is inflated by the per-point error bounds and by half a
/// mesh step times a derivative bound (the series' own bound when available,
/// otherwise the largest observed difference quotient).
pub fn cauchy_tail_from_samples<F: Evaluable + ?Sized>(
    f: &F,
    rho1: f64,
    num_samples: usize,
    max_error_fraction: f64,
) -> Result<(f64, f64)> {
    if !(rho1 > 0.0) || num_samples < 4 {
        return Err(Error::TailEstimate(format!(
            "need rho1 > 0 and at least 4 samples (rho1 = {rho1}, samples = {num_samples})"
        )));
    }
    let step = 2.0 * PI / num_samples as f64;
    let samples: Vec<EvalResult> = (0..num_samples)
        .map(|j| f.eval_at(C::from_polar(rho1, step * j as f64)))
        .collect();
    if samples.iter().any(|s| !s.is_usable()) {
        return Err(Error::TailEstimate(format!(
            "evaluation bound is not finite on |z| = {rho1}"
        )));
    }
    let max_abs = samples.iter().map(|s| s.value.norm() + s.error_bound).fold(0.0, f64::max);
    let max_err = samples.iter().map(|s| s.error_bound).fold(0.0, f64::max);
    let arc = step * rho1;
    let lipschitz = f.derivative_bound(rho1).unwrap_or_else(|| {
        let mut worst: f64 = 0.0;
        for j in 0..num_samples {
            let a = samples[j].value;
            let b = samples[(j + 1) % num_samples].value;
            worst = worst.max((b - a).norm() / arc);
        }
        worst
    });
    let m = max_abs + 0.5 * lipschitz * arc;
    if max_err > max_error_fraction * m {
        return Err(Error::TailEstimate(format!(
            "error bound {max_err:e} exceeds {max_error_fraction} of M = {m:e}"
        )));
    }
    Ok((m, rho1))
}

// ---- literal form used in config files ----

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffLiteral {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TailLiteral {
    #[serde(rename = "M")]
    m: f64,
    rho: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SeriesLiteral {
    Bare(Vec<CoeffLiteral>),
    Full {
        coeffs: Vec<CoeffLiteral>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<TailLiteral>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        unknown_tail: bool,
    },
}

impl TryFrom<SeriesLiteral> for TruncSeries {
    type Error = Error;

    fn try_from(lit: SeriesLiteral) -> Result<Self> {
        let (coeffs, tail) = match lit {
            SeriesLiteral::Bare(c) => (c, Tail::Exact),
            SeriesLiteral::Full {
                coeffs,
                tail,
                unknown_tail,
            } => {
                let tail = match (tail, unknown_tail) {
                    (Some(_), true) => {
                        return Err(Error::InvalidSeries(
                            "tail and unknown_tail are mutually exclusive".into(),
                        ))
                    }
                    (Some(t), false) => Tail::Geometric { m: t.m, rho: t.rho },
                    (None, true) => Tail::Unknown,
                    (None, false) => Tail::Exact,
                };
                (coeffs, tail)
            }
        };
        let coeffs = coeffs
            .into_iter()
            .map(|c| match c {
                CoeffLiteral::Real(re) => C::new(re, 0.0),
                CoeffLiteral::Pair([re, im]) => C::new(re, im),
            })
            .collect();
        TruncSeries::new(coeffs, tail)
    }
}

impl From<TruncSeries> for SeriesLiteral {
    fn from(s: TruncSeries) -> Self {
        let coeffs = s.coeffs.iter().map(|c| CoeffLiteral::Pair([c.re, c.im])).collect();
        match s.tail {
            Tail::Exact => SeriesLiteral::Full {
                coeffs,
                tail: None,
                unknown_tail: false,
            },
            Tail::Geometric { m, rho } => SeriesLiteral::Full {
                coeffs,
                tail: Some(TailLiteral { m, rho }),
                unknown_tail: false,
            },
            Tail::Unknown => SeriesLiteral::Full {
                coeffs,
                tail: None,
                unknown_tail: true,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn real(s: &TruncSeries) -> Vec<f64> {
        s.coeffs().iter().map(|c| c.re).collect()
    }

    #[test]
    fn convolve_with_identity_kernel() {
        let f = TruncSeries::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let g = TruncSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(real(&f.convolve(&g)), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn convolve_termwise() {
        let f = TruncSeries::from_real(&[1.0, 2.0, 4.0]).unwrap();
        let g = TruncSeries::from_real(&[1.0, 3.0, 5.0]).unwrap();
        assert_eq!(real(&f.convolve(&g)), vec![1.0, 6.0, 20.0]);
    }

    #[test]
    fn convolve_multiplies_tails() {
        let f = TruncSeries::new(vec![c(1.0, 0.0), c(0.5, 0.0)], Tail::Geometric { m: 2.0, rho: 2.0 }).unwrap();
        let g = TruncSeries::new(vec![c(1.0, 0.0), c(0.5, 0.0)], Tail::Geometric { m: 3.0, rho: 1.5 }).unwrap();
        assert_eq!(f.convolve(&g).tail(), Tail::Geometric { m: 6.0, rho: 3.0 });
    }

    #[test]
    fn convolve_with_exact_short_factor_is_exact() {
        let f = TruncSeries::from_real(&[1.0, 0.3]).unwrap();
        let g = TruncSeries::ones(10);
        let h = f.convolve(&g);
        assert!(h.is_exact());
        assert_eq!(real(&h), vec![1.0, 0.3]);
    }

    #[test]
    fn convolve_unknown_tail_stays_unknown() {
        let f = TruncSeries::new(vec![c(1.0, 0.0); 3], Tail::Unknown).unwrap();
        let g = TruncSeries::ones(3);
        assert_eq!(f.convolve(&g).tail(), Tail::Unknown);
    }

    #[test]
    fn eval_geometric_series() {
        let f = TruncSeries::ones(50);
        let r = f.eval(c(0.5, 0.0));
        assert!((r.value.re - 2.0).abs() < 1e-14);
        let direct: f64 = (51..2000).map(|k| 0.5f64.powi(k)).sum();
        assert!(r.error_bound >= direct);
        assert!(r.error_bound <= 0.5f64.powi(51) / 0.5 + 1e-13);
    }

    #[test]
    fn eval_exact_polynomial_has_zero_tail() {
        let f = TruncSeries::from_real(&[1.0, 1.0]).unwrap();
        let r = f.eval(c(0.0, 1.0));
        assert_eq!(r.value, c(1.0, 1.0));
        assert!(r.error_bound < 1e-14);
    }

    #[test]
    fn eval_outside_tail_radius_is_unusable() {
        let f = TruncSeries::ones(10);
        assert!(f.eval(c(1.0, 0.0)).error_bound.is_infinite());
        let g = TruncSeries::new(vec![c(1.0, 0.0)], Tail::Unknown).unwrap();
        assert!(g.eval(c(0.1, 0.0)).error_bound.is_infinite());
        assert_eq!(g.eval(c(0.0, 0.0)).error_bound, 0.0);
    }

    #[test]
    fn dilate_edge_cases() {
        let f = TruncSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(real(&f.dilate(c(0.0, 0.0))), vec![1.0, 0.0]);
        assert_eq!(f.dilate(c(1.0, 0.0)), f);
        let g = TruncSeries::ones(5).dilate(c(0.5, 0.0));
        assert_eq!(real(&g), vec![1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125]);
        assert_eq!(g.tail(), Tail::Geometric { m: 1.0, rho: 2.0 });
    }

    #[test]
    fn dilate_outward_respects_radius() {
        let g = TruncSeries::from_rational(c(0.0, 0.0), c(-0.5, 0.0), 8).unwrap();
        assert!(g.dilate_outward(c(1.5, 0.0)).is_ok());
        assert!(g.dilate_outward(c(2.5, 0.0)).is_err());
    }

    #[test]
    fn rational_kernels() {
        let a = c(0.3, -0.2);
        let f = TruncSeries::from_rational(a, c(0.0, 0.0), 4).unwrap();
        assert_eq!(f.coeffs(), &[c(1.0, 0.0), a, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(f.is_exact());

        let r = 0.7;
        let g = TruncSeries::from_rational(c(0.0, 0.0), c(-r, 0.0), 12).unwrap();
        let h = TruncSeries::ones(12).dilate(c(r, 0.0));
        assert!(g.coeff_distance(&h) < 1e-15);

        let y = c(0.2, 0.4);
        assert!(TruncSeries::from_rational(y, y, 6).unwrap().is_identity());

        assert!(matches!(
            TruncSeries::from_rational(c(0.0, 0.0), c(1.0, 0.0), 4),
            Err(Error::PoleInsideDisk(_))
        ));
    }

    #[test]
    fn cauchy_tail_examples() {
        let f = TruncSeries::from_real(&[1.0, 1.0]).unwrap();
        let (m, rho) = cauchy_tail_from_samples(&f, 2.0, 4096, 0.1).unwrap();
        assert_eq!(rho, 2.0);
        assert!(m >= 3.0 && m < 3.0 * (1.0 + 1e-2), "M = {m}");

        let g = TruncSeries::ones(200);
        let (m, _) = cauchy_tail_from_samples(&g, 0.5, 4096, 0.1).unwrap();
        assert!(m >= 2.0 && m < 2.0 * (1.0 + 1e-2), "M = {m}");

        let e = TruncSeries::identity(8);
        let (m, _) = cauchy_tail_from_samples(&e, 0.7, 64, 0.1).unwrap();
        assert_eq!(m, 1.0);
    }

    #[test]
    fn cauchy_tail_rejects_unusable_bounds() {
        let g = TruncSeries::ones(10);
        assert!(cauchy_tail_from_samples(&g, 1.5, 64, 0.1).is_err());
    }

    #[test]
    fn perturbation_bound_uses_reciprocal_factor() {
        let b = convolution_perturbation_bound(0.1, 0.2, 1.0, 2.0, 0.5, 1.0, 1.0);
        assert!((b - (0.2 * 1.0 + 0.1 * 2.0) / 0.5).abs() < 1e-15);
        assert!(convolution_perturbation_bound(0.1, 0.1, 1.0, 1.0, 1.0, 1.0, 1.0).is_infinite());
    }

    #[test]
    fn literal_forms() {
        let s: TruncSeries = serde_json::from_str("[1, [0.5, -0.5]]").unwrap();
        assert_eq!(s.coeffs(), &[c(1.0, 0.0), c(0.5, -0.5)]);
        assert!(s.is_exact());
        let t: TruncSeries =
            serde_json::from_str(r#"{"coeffs": [[1,0],[1,0]], "tail": {"M": 1.0, "rho": 1.0}}"#).unwrap();
        assert_eq!(t.tail(), Tail::Geometric { m: 1.0, rho: 1.0 });
        assert!(serde_json::from_str::<TruncSeries>("[]").is_err());
        assert!(serde_json::from_str::<TruncSeries>(r#"{"coeffs":[1],"tail":{"M":-1,"rho":1}}"#).is_err());
        let back: TruncSeries = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
