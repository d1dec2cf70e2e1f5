//! Exact reductions for pencils over rotation-invariant parameter domains.
//!
//! A term `x β s^k` with `|x|` in `[lo, hi]` and free argument sweeps an
//! annulus; a sum of such terms sweeps the Minkowski sum of annuli, which is
//! again an annulus.

use std::f64::consts::PI;

use crate::C;

/// Modulus range `(inner, outer)` of the set `{Σ w_j : lo_j <= |w_j| <= hi_j}`.
pub fn annulus_sum(ranges: &[(f64, f64)]) -> (f64, f64) {
    let outer: f64 = ranges.iter().map(|r| r.1).sum();
    let inner = ranges
        .iter()
        .map(|&(lo, hi)| lo - (outer - hi))
        .fold(0.0, f64::max);
    (inner, outer)
}

/// `min |1 + w|` over `inner <= |w| <= outer`.
pub fn distance_from_one(inner: f64, outer: f64) -> f64 {
    if outer < 1.0 {
        1.0 - outer
    } else if inner > 1.0 {
        inner - 1.0
    } else {
        0.0
    }
}

/// Terms `w_j`, `lo_j <= |w_j| <= hi_j`, summing to the negative real `-t`.
/// `t` must lie in the range returned by [`annulus_sum`].
pub fn terms_summing_to(ranges: &[(f64, f64)], t: f64) -> Vec<C> {
    let w = polygon(ranges, t);
    let sum: C = w.iter().sum();
    let turn = if sum.norm() > 0.0 { C::new(-1.0, 0.0) * sum.conj() / sum.norm() } else { C::new(1.0, 0.0) };
    w.into_iter().map(|z| z * turn).collect()
}

/// Vectors with moduli in `ranges` whose sum has modulus `t`.
fn polygon(ranges: &[(f64, f64)], t: f64) -> Vec<C> {
    let (lo, hi) = *ranges.last().expect("nonempty");
    if ranges.len() == 1 {
        return vec![C::new(t.clamp(lo, hi), 0.0)];
    }
    let rest = &ranges[..ranges.len() - 1];
    let (p_lo, p_hi) = annulus_sum(rest);
    let candidates = [p_lo, p_hi, t - lo, t - hi, lo - t, hi - t, lo + t, hi + t, t];
    let (p, m) = candidates
        .iter()
        .map(|&p| p.clamp(p_lo, p_hi))
        .map(|p| {
            let a = (t - p).abs().max(lo);
            let b = (t + p).min(hi);
            (p, a, b)
        })
        .min_by(|x, y| (x.1 - x.2).total_cmp(&(y.1 - y.2)))
        .map(|(p, a, b)| (p, if a <= b { a } else { 0.5 * (a + b) }))
        .expect("candidates nonempty");
    let mut vs = polygon(rest, p);
    let partial: C = vs.iter().sum();
    let phi = if p > 0.0 && m > 0.0 {
        ((t * t - p * p - m * m) / (2.0 * p * m)).clamp(-1.0, 1.0).acos()
    } else {
        0.0
    };
    let base = if partial.norm() > 0.0 { partial.arg() } else { 0.0 };
    vs.push(C::from_polar(m, base + phi));
    vs
}

/// Smallest `t` in `[0, t_max]` with `Σ c_j t^{k_j} = 1`, for nonnegative
/// `c_j`; `None` when the sum stays below one.
pub fn unit_level(terms: &[(f64, usize)], t_max: f64) -> Option<f64> {
    let sum = |t: f64| terms.iter().map(|&(c, k)| c * t.powi(k as i32)).sum::<f64>();
    if sum(t_max) < 1.0 {
        return None;
    }
    let (mut a, mut b) = (0.0, t_max);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if sum(m) < 1.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a <= f64::EPSILON * b {
            break;
        }
    }
    Some(b)
}

/// `x` with `|x| = modulus` and `x β` pointing along `direction`.
pub fn aligned(modulus: f64, beta: C, direction: f64) -> C {
    if beta == C::new(0.0, 0.0) {
        return C::from_polar(modulus, direction);
    }
    C::from_polar(modulus, direction - beta.arg())
}

/// Principal `k`-th root.
pub fn root(w: C, k: usize) -> C {
    if w == C::new(0.0, 0.0) {
        return w;
    }
    C::from_polar(w.norm().powf(1.0 / k as f64), w.arg() / k as f64)
}

/// Argument placing `z^k` on the negative real axis.
pub fn negative_direction(k: usize) -> f64 {
    PI / k as f64
}
