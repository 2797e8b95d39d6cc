//! Arc length of Archimedean spiral pieces `r(θ) = a + bθ`.

use super::{LayoutConfig, LayoutError};

fn check_args(a: f64, b: f64, theta0: f64, theta1: f64) -> Result<(), LayoutError> {
    if !(a.is_finite() && b.is_finite() && theta0.is_finite() && theta1.is_finite()) {
        return Err(LayoutError::InvalidArgument("non-finite spiral parameter".into()));
    }
    if theta0 > theta1 {
        return Err(LayoutError::InvalidArgument(format!("theta0 {theta0} > theta1 {theta1}")));
    }
    // r is linear in θ, so checking both ends covers the interval.
    for theta in [theta0, theta1] {
        let r = a + b * theta;
        if r < 0.0 {
            return Err(LayoutError::NegativeRadius { radius: r, angle: theta });
        }
    }
    Ok(())
}

/// Arc length by the closed-form antiderivative, rearranged so that no
/// difference of nearly equal terms appears. Reduces to `aΔθ` when `b = 0`.
pub fn spiral_arc_length_closed_form(a: f64, b: f64, theta0: f64, theta1: f64) -> Result<f64, LayoutError> {
    check_args(a, b, theta0, theta1)?;
    Ok(closed_form_unchecked(a, b, theta0, theta1))
}

fn closed_form_unchecked(a: f64, b: f64, theta0: f64, theta1: f64) -> f64 {
    let dt = theta1 - theta0;
    if dt == 0.0 {
        return 0.0;
    }
    let r0 = a + b * theta0;
    let r1 = a + b * theta1;
    let b2 = b * b;
    let s0 = (r0 * r0 + b2).sqrt();
    let s1 = (r1 * r1 + b2).sqrt();
    let first = 0.5 * dt * (r0 + r1) * (r0 * r0 + r1 * r1 + b2) / (r1 * s1 + r0 * s0);
    let second = if b == 0.0 { 0.0 } else { 0.5 * b * (b * dt * (r0 + r1) / (r1 * s0 + r0 * s1)).asinh() };
    first + second
}

/// Arc length by adaptive Simpson quadrature of `sqrt(r² + b²)`.
pub fn spiral_arc_length_quadrature(a: f64, b: f64, theta0: f64, theta1: f64) -> Result<f64, LayoutError> {
    check_args(a, b, theta0, theta1)?;
    Ok(quadrature_unchecked(a, b, theta0, theta1))
}

fn quadrature_unchecked(a: f64, b: f64, theta0: f64, theta1: f64) -> f64 {
    if theta1 == theta0 {
        return 0.0;
    }
    let f = |t: f64| {
        let r = a + b * t;
        (r * r + b * b).sqrt()
    };
    // Seed with a few panels so the tolerance split is not fooled by
    // symmetric integrands.
    let panels = 8;
    let h = (theta1 - theta0) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = theta0 + h * i as f64;
        let hi = if i + 1 == panels { theta1 } else { lo + h };
        let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        let eps = 1e-14 * whole.abs().max(f64::MIN_POSITIVE);
        total += simpson(&f, lo, hi, flo, fmid, fhi, whole, eps, 48);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1)
        + simpson(f, mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1)
}

/// `∫_{θ0}^{θ1} sqrt((a + bθ)² + b²) dθ`.
///
/// Uses the closed form and falls back to quadrature if it is not finite.
pub fn spiral_arc_length(a: f64, b: f64, theta0: f64, theta1: f64) -> Result<f64, LayoutError> {
    check_args(a, b, theta0, theta1)?;
    let v = closed_form_unchecked(a, b, theta0, theta1);
    if v.is_finite() {
        Ok(v)
    } else {
        Ok(quadrature_unchecked(a, b, theta0, theta1))
    }
}

/// Arc length of a segment that starts at radius `d` and rises by `rise`
/// over the central angle `phi`.
pub(crate) fn segment_arc(d: f64, rise: f64, phi: f64) -> f64 {
    if phi <= 0.0 {
        return rise;
    }
    let v = closed_form_unchecked(d, rise / phi, 0.0, phi);
    if v.is_finite() {
        v
    } else {
        quadrature_unchecked(d, rise / phi, 0.0, phi)
    }
}

/// Central angle `φ` at which a segment starting at radius `d` and rising
/// by `rise` has arc length `target`, with pitch `rise / φ`.
///
/// The arc length grows strictly with `φ`, so the root is bracketed by the
/// config's angle bounds and found by bisection. Targets within
/// `arc_tolerance` of a bound resolve to that bound.
pub fn solve_angle_for_arc(d: f64, rise: f64, target: f64, config: &LayoutConfig) -> Result<f64, LayoutError> {
    if !(d > 0.0 && d.is_finite()) || !(rise >= 0.0 && rise.is_finite()) || !(target > 0.0 && target.is_finite()) {
        return Err(LayoutError::InvalidArgument(format!(
            "need d > 0, rise >= 0, target > 0; got {d}, {rise}, {target}"
        )));
    }
    let (lo_bound, hi_bound, tol) = (config.angle_min, config.angle_max, config.arc_tolerance);
    let max_arc = segment_arc(d, rise, hi_bound);
    if max_arc < target * (1.0 - tol) {
        return Err(LayoutError::AngleCapExceeded { target, max_arc });
    }
    let min_arc = segment_arc(d, rise, lo_bound);
    if min_arc > target * (1.0 + tol) {
        return Err(LayoutError::AngleFloorUnmet { target, min_arc });
    }
    if max_arc <= target {
        return Ok(hi_bound);
    }
    if min_arc >= target {
        return Ok(lo_bound);
    }
    if rise == 0.0 {
        return Ok((target / d).clamp(lo_bound, hi_bound));
    }
    let (mut lo, mut hi) = (lo_bound, hi_bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if segment_arc(d, rise, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever bracket end is closer in arc length.
    let (alo, ahi) = (segment_arc(d, rise, lo), segment_arc(d, rise, hi));
    Ok(if (target - alo).abs() <= (ahi - target).abs() { lo } else { hi })
}
