//! Detection of total-reflection windows in transmission spectra.

use crate::error::{Error, Result};
use crate::model::CouplingConfig;
use crate::regime::router_phases;
use crate::scattering::scatter;

/// Minimum number of grid samples accepted by [`find_reflection_windows`].
pub const MIN_RESOLUTION: usize = 1000;

/// Transmission level that defines the window width.
pub const HALF_LEVEL: f64 = 0.5;

const GOLDEN_TOL: f64 = 1e-10;

/// A dip in the left-incidence transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionWindow {
    /// Detuning of the transmission minimum.
    pub center: f64,
    /// Width of the interval around the minimum where `T < 1/2`.
    pub width: f64,
    pub min_t: f64,
    /// `phi12` of the configuration that produced the window.
    pub phase: f64,
}

/// Minimise a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is narrower than `tol`. Returns `(argmin, min)`.
pub fn golden_section_min(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        // bracket stopped shrinking at machine precision
        if c >= d {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Bisect `f(x) = level` between `inside` (below level) and `outside`.
fn bisect_level(f: &impl Fn(f64) -> f64, mut inside: f64, mut outside: f64, level: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if f(mid) < level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Scan `T_left` over `resolution` evenly spaced detunings in `range`, group
/// contiguous runs below `threshold` and refine the minimum of each run.
pub fn find_reflection_windows(
    config: &CouplingConfig,
    range: (f64, f64),
    threshold: f64,
    resolution: usize,
) -> Result<Vec<ReflectionWindow>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::InvalidArgument(format!(
            "empty detuning range [{lo}, {hi}]"
        )));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} outside (0, 1)"
        )));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution {resolution} below {MIN_RESOLUTION}"
        )));
    }

    let t = |d: f64| scatter(config, d).trans_left;
    let step = (hi - lo) / (resolution - 1) as f64;
    let grid = |k: usize| {
        if k + 1 == resolution {
            hi
        } else {
            lo + k as f64 * step
        }
    };
    let samples: Vec<f64> = (0..resolution).map(|k| t(grid(k))).collect();

    let mut windows = Vec::new();
    let mut k = 0;
    while k < resolution {
        if samples[k] >= threshold {
            k += 1;
            continue;
        }
        let start = k;
        while k < resolution && samples[k] < threshold {
            k += 1;
        }
        let end = k - 1;

        let a = grid(start.saturating_sub(1));
        let b = grid((end + 1).min(resolution - 1));
        let (center, min_t) = golden_section_min(t, a, b, GOLDEN_TOL);

        // nearest grid points at or above the half level on either side
        let below = ((center - lo) / step)
            .floor()
            .clamp(0.0, (resolution - 1) as f64) as usize;
        let left_edge = (0..=below)
            .rev()
            .find(|&j| samples[j] >= HALF_LEVEL && grid(j) < center)
            .map(|j| bisect_level(&t, center, grid(j), HALF_LEVEL))
            .unwrap_or(lo);
        let right_edge = (below..resolution)
            .find(|&j| samples[j] >= HALF_LEVEL && grid(j) > center)
            .map(|j| bisect_level(&t, center, grid(j), HALF_LEVEL))
            .unwrap_or(hi);
        let width = if min_t < HALF_LEVEL {
            right_edge - left_edge
        } else {
            0.0
        };

        windows.push(ReflectionWindow {
            center,
            width,
            min_t,
            phase: config.phase().phi12(),
        });
    }
    Ok(windows)
}

/// Windows over the router phases `phi12 = 2 m' pi / N`, `m' = 1..N-1`.
pub fn find_router_windows(
    config: &CouplingConfig,
    range: (f64, f64),
    threshold: f64,
    resolution: usize,
) -> Result<Vec<ReflectionWindow>> {
    let mut out = Vec::new();
    for phi in router_phases(config.len() as u32) {
        let c = config.with_phi12(phi)?;
        out.extend(find_reflection_windows(&c, range, threshold, resolution)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingPoint, PhaseModel};
    use crate::regime::{n2_transmission, N2Phase};
    use std::f64::consts::PI;

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section_min(|x| (x - 1.234).powi(2), -10.0, 10.0, 1e-10);
        assert!((x - 1.234).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn anti_lorentzian_window() {
        let c = CouplingConfig::from_couplings(
            &[1.0, 3.0],
            &[0.5, 2.5],
            0.0,
            PhaseModel::markovian(PI).unwrap(),
        )
        .unwrap();
        let w = find_reflection_windows(&c, (-50.0, 50.0), 0.5, 10_001).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].center.abs() < 1e-9);
        assert!((w[0].width - 8.0).abs() < 1e-9, "{}", w[0].width);
        assert!(w[0].min_t < 1e-18);
        let p = (
            CouplingPoint::new(1.0, 0.5).unwrap(),
            CouplingPoint::new(3.0, 2.5).unwrap(),
        );
        let half = 0.5 * w[0].width;
        assert!((n2_transmission(p.0, p.1, N2Phase::Pi, w[0].center + half) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn transparent_config_has_no_window() {
        let c = CouplingConfig::uniform(4, 1.0, 2.0, 0.0, PhaseModel::markovian(PI / 2.0).unwrap())
            .unwrap();
        assert!(find_reflection_windows(&c, (-50.0, 50.0), 0.1, 2000)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rejects_bad_arguments() {
        let c =
            CouplingConfig::uniform(2, 1.0, 2.0, 0.0, PhaseModel::markovian(0.0).unwrap()).unwrap();
        assert!(find_reflection_windows(&c, (1.0, 1.0), 0.1, 2000).is_err());
        assert!(find_reflection_windows(&c, (0.0, 1.0), 1.5, 2000).is_err());
        assert!(find_reflection_windows(&c, (0.0, 1.0), 0.1, 10).is_err());
    }
}
