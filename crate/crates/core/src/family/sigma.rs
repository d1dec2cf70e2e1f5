use super::FamilySpec;
use crate::config::Config;
use crate::duality::transpose_scan;
use crate::error::{Error, Result};
use crate::series::TruncSeries;
use crate::C;

const MAX_STEPS: u32 = 40;
const BISECTIONS: u32 = 60;

/// Largest certified `σ` in `(1, sigma_max)` with `(g * f)(σ) != 0` for every
/// member, i.e. `P_σ g` still in `V^T`.
///
/// Walks `σ_j = 1 + (sigma_max - 1) 2^-j` down to the first passing value and
/// then bisects towards the last failing one. `None` when no schedule value
/// passes.
pub fn sigma_search(v: &FamilySpec, g: &TruncSeries, sigma_max: f64, cfg: &Config) -> Result<Option<f64>> {
    v.validate()?;
    if !(sigma_max > 1.0) || !sigma_max.is_finite() {
        return Err(Error::Precondition(format!("sigma_max must exceed 1, got {sigma_max}")));
    }
    let passes = |sigma: f64| transpose_scan(&g.dilate(C::new(sigma, 0.0)), v, cfg).certificate(cfg).is_verified();
    let base = transpose_scan(g, v, cfg).certificate(cfg);
    if !base.is_verified() {
        return Err(Error::Precondition(format!(
            "(g * f)(1) is not certified nonzero on the family: {}",
            base.reason.unwrap_or_else(|| format!("{:?}", base.status))
        )));
    }
    let step = |j: u32| 1.0 + (sigma_max - 1.0) * 0.5f64.powi(j as i32);
    let mut failing = None;
    for j in 1..=MAX_STEPS {
        let s = step(j);
        if !passes(s) {
            failing = Some(s);
            continue;
        }
        let Some(mut hi) = failing else {
            return Ok(Some(s));
        };
        let mut lo = s;
        for _ in 0..BISECTIONS {
            if hi - lo <= 1e-9 * lo {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if passes(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(Some(lo));
    }
    Ok(None)
}
