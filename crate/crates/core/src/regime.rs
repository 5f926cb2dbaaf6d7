//! Closed-form Lamb shifts, decay rates and transmissions for the special
//! coupling patterns (uniform, bidirectional even, one disordered point) in
//! the Markovian regime, plus the chiral conditions for total reflection and
//! optimal nonreciprocity.
//!
//! These are evaluated without touching [`crate::scattering`], so they double
//! as a regression surface for the general engine.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::model::{normalize_phase, CouplingConfig, CouplingPoint, PhaseModel};
use crate::scattering::{rates, scatter};

/// Distance from a multiple of 2pi below which `S_j` is treated as singular
/// and the combined expressions switch to their `phi -> 0` limits.
pub const SINGULAR_PHASE_TOL: f64 = 1e-8;

/// Tolerance, in units of `m'`, for recognising `phi12 = 2 m' pi / N`.
const SPECIAL_PHASE_TOL: f64 = 1e-12;

/// Phase reduced into `(-pi, pi]`.
fn signed_phase(phi: f64) -> f64 {
    // fmod is exact, so small phases of either sign keep full precision
    let r = phi % TAU;
    if r > PI {
        r - TAU
    } else if r <= -PI {
        r + TAU
    } else {
        r
    }
}

fn near_singular(phi: f64) -> bool {
    signed_phase(phi).abs() < SINGULAR_PHASE_TOL
}

/// `S_j(phi) = sin(j phi) / (1 - cos phi)`.
pub fn interference_s(j: u32, phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    if near_singular(phi) {
        return Err(Error::SingularPhase {
            phase: phi,
            tol: SINGULAR_PHASE_TOL,
        });
    }
    let p = signed_phase(phi);
    let half = (0.5 * p).sin();
    Ok((j as f64 * p).sin() / (2.0 * half * half))
}

/// `C_j(phi) = sin^2(j phi / 2) / sin^2(phi / 2)`, continued to `j^2` at
/// multiples of 2pi.
pub fn interference_c(j: u32, phi: f64) -> f64 {
    if near_singular(phi) {
        return (j as f64).powi(2);
    }
    let p = signed_phase(phi);
    let num = (0.5 * j as f64 * p).sin();
    let den = (0.5 * p).sin();
    (num / den).powi(2)
}

/// `sum_j c_j S_j(phi)` for a combination whose first moment `sum_j c_j j`
/// vanishes, so the result stays finite as `phi -> 0`.
///
/// For small reduced phases the numerator is summed as a Taylor series in
/// `phi`, which avoids the cancellation in `sum_j c_j sin(j phi)`.
fn sine_combination(terms: &[(u32, f64)], phi: f64) -> f64 {
    if near_singular(phi) {
        return 0.0;
    }
    let p = signed_phase(phi);
    let half = (0.5 * p).sin();
    let den = 2.0 * half * half;
    let jmax = terms.iter().map(|t| t.0).max().unwrap_or(0) as f64;
    let num = if jmax * p.abs() < 0.5 {
        let mut num = 0.0;
        let mut fact = 1.0; // (2k+1)!
        let mut pow = p; // p^{2k+1}
        for k in 0..30u32 {
            let m = 2 * k + 1;
            let moment: f64 = terms
                .iter()
                .map(|&(j, c)| c * (j as f64).powi(m as i32))
                .sum();
            let term = moment * pow / fact;
            num += if k % 2 == 0 { term } else { -term };
            if term.abs() <= 1e-18 * num.abs() && k > 0 {
                break;
            }
            pow *= p * p;
            fact *= ((m + 1) * (m + 2)) as f64;
        }
        num
    } else {
        terms.iter().map(|&(j, c)| c * (j as f64 * p).sin()).sum()
    };
    num / den
}

/// Closed-form Lamb shift and decay-rate sum and difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedRates {
    pub lamb_shift: f64,
    /// `Gamma_x + Gamma_y`.
    pub gamma_sum: f64,
    /// `Gamma_x - Gamma_y`.
    pub gamma_diff: f64,
}

impl ClosedRates {
    pub fn gamma_x(&self) -> f64 {
        0.5 * (self.gamma_sum + self.gamma_diff)
    }

    pub fn gamma_y(&self) -> f64 {
        0.5 * (self.gamma_sum - self.gamma_diff)
    }

    /// Transmission `(T_l, T_r)` at `delta` with atomic loss `gamma`.
    pub fn transmissions(&self, gamma: f64, delta: f64) -> (f64, f64) {
        let d = delta - self.lamb_shift;
        let den = d * d + (gamma + self.gamma_sum).powi(2);
        if den == 0.0 {
            return (1.0, 1.0);
        }
        (
            (d * d + (gamma + self.gamma_diff).powi(2)) / den,
            (d * d + (gamma - self.gamma_diff).powi(2)) / den,
        )
    }
}

/// `(N sin phi - sin N phi) / (1 - cos phi)`
fn bec_lamb_factor(n: u32, phi: f64) -> f64 {
    sine_combination(&[(1, n as f64), (n, -1.0)], phi)
}

/// Transmission and reflection probabilities for `n` points with identical
/// couplings `x` in both directions.
pub fn uniform_symmetric_probabilities(
    n: u32,
    x: f64,
    gamma: f64,
    phi12: f64,
    delta: f64,
) -> (f64, f64) {
    let delta_x = 0.5 * x * x * bec_lamb_factor(n, phi12);
    let gamma_x = 0.5 * x * x * interference_c(n, phi12);
    let d = delta - 2.0 * delta_x;
    let den = d * d + (gamma + 2.0 * gamma_x).powi(2);
    if den == 0.0 {
        return (1.0, 0.0);
    }
    ((d * d + gamma * gamma) / den, 4.0 * gamma_x * gamma_x / den)
}

/// Bidirectional even coupling: every point has couplings `(x, y)`.
pub fn bec_closed_forms(n: u32, x: f64, y: f64, phi12: f64) -> ClosedRates {
    let (sum2, diff2) = (x * x + y * y, x * x - y * y);
    if near_singular(phi12) {
        let n2 = (n as f64).powi(2);
        return ClosedRates {
            lamb_shift: 0.0,
            gamma_sum: 0.5 * n2 * sum2,
            gamma_diff: 0.5 * n2 * diff2,
        };
    }
    let c = interference_c(n, phi12);
    ClosedRates {
        lamb_shift: 0.5 * sum2 * bec_lamb_factor(n, phi12),
        gamma_sum: 0.5 * sum2 * c,
        gamma_diff: 0.5 * diff2 * c,
    }
}

/// Phase `mod(phi12, 2pi)` for the two-point closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum N2Phase {
    Zero,
    Pi,
}

/// Transmission of a two-point atom at `phi12 = 0` or `pi`.
pub fn n2_transmission(p1: CouplingPoint, p2: CouplingPoint, phase: N2Phase, delta: f64) -> f64 {
    let (sx, sy) = match phase {
        N2Phase::Zero => (p1.x + p2.x, p1.y + p2.y),
        N2Phase::Pi => (p1.x - p2.x, p1.y - p2.y),
    };
    let (ax, ay) = (sx * sx, sy * sy);
    let d2 = 4.0 * delta * delta;
    let den = d2 + (ax + ay).powi(2);
    if den == 0.0 {
        return 1.0;
    }
    (d2 + (ax - ay).powi(2)) / den
}

/// `n` points with common couplings `(x, y)` except for one disordered
/// point `site` (0-based) with couplings `(xi, yi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderedConfig {
    pub n: u32,
    pub x: f64,
    pub y: f64,
    pub site: u32,
    pub xi: f64,
    pub yi: f64,
    pub gamma: f64,
    pub phi12: f64,
}

impl DisorderedConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need n >= 2, got {}",
                self.n
            )));
        }
        if self.site >= self.n {
            return Err(Error::IndexOutOfRange {
                index: self.site as usize,
                len: self.n as usize,
            });
        }
        Ok(())
    }

    /// Expand to a Markovian [`CouplingConfig`].
    pub fn to_config(&self) -> Result<CouplingConfig> {
        self.validate()?;
        let base = CouplingPoint::new(self.x, self.y)?;
        let mut points = vec![base; self.n as usize];
        points[self.site as usize] = CouplingPoint::new(self.xi, self.yi)?;
        CouplingConfig::new(points, self.gamma, PhaseModel::markovian(self.phi12)?)
    }
}

/// `m'` if `phi = 2 m' pi / n` for some `m' in 1..n`.
pub fn special_phase_index(n: u32, phi: f64) -> Option<u32> {
    let p = normalize_phase(phi).ok()?;
    let m = p * n as f64 / TAU;
    let mr = m.round();
    if (m - mr).abs() < SPECIAL_PHASE_TOL * n as f64 && mr >= 1.0 && mr < n as f64 {
        Some(mr as u32)
    } else {
        None
    }
}

/// Closed-form rates for a configuration with one disordered point.
pub fn disordered_rates(cfg: &DisorderedConfig) -> Result<ClosedRates> {
    cfg.validate()?;
    let n = cfg.n;
    let i = cfg.site + 1;
    let (x, y, xi, yi, phi) = (cfg.x, cfg.y, cfg.xi, cfg.yi, cfg.phi12);
    let (dx, dy) = (x - xi, y - yi);

    if near_singular(phi) {
        let nm1 = (n - 1) as f64;
        let (a, b) = ((nm1 * x + xi).powi(2), (nm1 * y + yi).powi(2));
        return Ok(ClosedRates {
            lamb_shift: 0.0,
            gamma_sum: 0.5 * (a + b),
            gamma_diff: 0.5 * (a - b),
        });
    }

    if special_phase_index(n, phi).is_some() {
        let s = |j: u32| interference_s(j, phi);
        let lamb_shift = n as f64 * s(1)? * 0.5 * (x * x + y * y)
            - (s(1)? + s(i - 1)? - s(i)?) * (x * dx + y * dy);
        return Ok(ClosedRates {
            lamb_shift,
            gamma_sum: 0.5 * (dx * dx + dy * dy),
            gamma_diff: 0.5 * (dx * dx - dy * dy),
        });
    }

    let lamb_shift = 0.5 * (x * x + y * y) * bec_lamb_factor(n, phi)
        - 0.5
            * (x * dx + y * dy)
            * sine_combination(
                &[
                    (1, 2.0),
                    (i - 1, 1.0),
                    (i, -1.0),
                    (n - i, 1.0),
                    (n - i + 1, -1.0),
                ],
                phi,
            );
    let c = |j: u32| interference_c(j, phi);
    let c_n = c(n);
    let c_comb = c(i - 1) - c(i) + c(n - i) - c(n - i + 1);
    Ok(ClosedRates {
        lamb_shift,
        gamma_sum: 0.5 * (x * x + y * y) * c_n
            + 0.5 * (dx * dx + dy * dy)
            + 0.5 * (x * dx + y * dy) * c_comb,
        gamma_diff: 0.5 * (x * x - y * y) * c_n
            + 0.5 * (dx * dx - dy * dy)
            + 0.5 * (x * dx - y * dy) * c_comb,
    })
}

/// Phases `2 m' pi / n` for `m' = 1..n-1`.
pub fn router_phases(n: u32) -> Vec<f64> {
    (1..n).map(|m| TAU * m as f64 / n as f64).collect()
}

/// Lamb shift `(n/2)(x^2 + y^2) cot(m' pi / n)` shared by the even
/// configuration and one disordered end point at `phi12 = 2 m' pi / n`.
pub fn router_lamb_shift(n: u32, x: f64, y: f64, m: u32) -> f64 {
    0.5 * n as f64 * (x * x + y * y) / (PI * m as f64 / n as f64).tan()
}

/// Disordered `y_i` giving total reflection at `delta = 0` for
/// `phi12 = 0`: `(n-1) x + x_i = (n-1) y + y_i`.
pub fn chiral_condition_mod0(n: u32, x: f64, y: f64, xi: f64) -> Result<f64> {
    let yi = (n as f64 - 1.0) * (x - y) + xi;
    if yi < 0.0 {
        return Err(Error::Infeasible(yi));
    }
    Ok(yi)
}

/// One solution branch of a chiral condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub yi: f64,
    pub feasible: bool,
}

/// Both solutions `y_i = y +- |x - x_i|` of `|x - x_i| = |y - y_i|`.
pub fn chiral_condition_special(x: f64, y: f64, xi: f64) -> (Branch, Branch) {
    let d = (x - xi).abs();
    let plus = y + d;
    let minus = y - d;
    (
        Branch {
            yi: plus,
            feasible: plus >= 0.0,
        },
        Branch {
            yi: minus,
            feasible: minus >= 0.0,
        },
    )
}

/// Values of `y_i >= 0` on the optimal-nonreciprocity hyperbolae
/// `gamma = +-((x_i - x)^2 - (y_i - y)^2) / 2` at `phi12 = 2 m' pi / N`,
/// sorted ascending.
pub fn optimal_locus_special(x: f64, y: f64, xi: f64, gamma: f64) -> Vec<f64> {
    let dx2 = (xi - x).powi(2);
    let mut out = Vec::new();
    for s2 in [dx2 + 2.0 * gamma, dx2 - 2.0 * gamma] {
        if s2 < 0.0 {
            continue;
        }
        let s = s2.sqrt();
        for yi in [y + s, y - s] {
            if yi >= 0.0 && !out.contains(&yi) {
                out.push(yi);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `|(N-1)x + x_i)^2 - ((N-1)y + y_i)^2| / 2`, the optimal loss at `phi12 = 0`.
pub fn optimal_gamma_mod0(n: u32, x: f64, y: f64, xi: f64, yi: f64) -> f64 {
    let nm1 = n as f64 - 1.0;
    0.5 * ((nm1 * x + xi).powi(2) - (nm1 * y + yi).powi(2)).abs()
}

/// `|(x_i - x)^2 - (y_i - y)^2| / 2`, the optimal loss at `phi12 = 2 m' pi / N`.
pub fn optimal_gamma_special(x: f64, y: f64, xi: f64, yi: f64) -> f64 {
    0.5 * ((xi - x).powi(2) - (yi - y).powi(2)).abs()
}

/// Operating point of perfect nonreciprocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalNonreciprocity {
    /// Atomic loss `|Gamma_x - Gamma_y|` that gives contrast one.
    pub gamma: f64,
    /// Detuning of the operating point, `Delta_LS`.
    pub delta: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub trans_left: f64,
    pub trans_right: f64,
    pub contrast: f64,
}

/// Loss rate at which the contrast ratio reaches one, with the resulting
/// transmissions at `Delta = Delta_LS`.
///
/// Rates are taken at the atomic transition frequency; for retarded
/// configurations this ignores the frequency dependence of the phases.
pub fn optimal_nonreciprocity_gamma(config: &CouplingConfig) -> Result<OptimalNonreciprocity> {
    let markov = config.with_phase(PhaseModel::markovian(config.phase().phi12())?);
    let r = rates(&markov, 0.0);
    let diff = r.gamma_diff().abs();
    if diff <= 1e-12 * r.gamma_sum() || diff == 0.0 {
        return Err(Error::NoNonreciprocity(r.gamma_x));
    }
    let tuned = markov.with_gamma(diff)?;
    let s = scatter(&tuned, r.lamb_shift);
    Ok(OptimalNonreciprocity {
        gamma: diff,
        delta: r.lamb_shift,
        gamma_x: r.gamma_x,
        gamma_y: r.gamma_y,
        trans_left: s.trans_left,
        trans_right: s.trans_right,
        contrast: s.contrast,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn pt(x: f64, y: f64) -> CouplingPoint {
        CouplingPoint::new(x, y).unwrap()
    }

    #[test]
    fn interference_examples() {
        assert!(interference_c(3, TAU / 3.0).abs() < 1e-15);
        assert!(interference_c(2, PI).abs() < 1e-15);
        assert!(interference_s(2, FRAC_PI_2).unwrap().abs() < 1e-15);
        assert_eq!(interference_c(4, 0.0), 16.0);
        assert_eq!(interference_c(4, TAU), 16.0);
        assert!(interference_s(1, 0.0).is_err());
        assert!(interference_s(1, TAU - 1e-9).is_err());
        assert!(interference_s(1, 1e-6).is_ok());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn sine_combination_small_phase() {
        // reference values from 50-digit arithmetic
        let reference = [
            (1e-3, 0.039999951333360166658),
            (1e-5, 0.00039999999995133333334),
            (1e-7, 3.9999999999999513333e-6),
            (-1e-4, -0.0039999999513333336017),
        ];
        for (phi, expected) in reference {
            let v = bec_lamb_factor(5, phi);
            assert!(
                (v - expected).abs() < 1e-14 * expected.abs(),
                "{phi}: {v} vs {expected}"
            );
        }
        let direct = |phi: f64| (5.0 * phi.sin() - (5.0 * phi).sin()) / (1.0 - phi.cos());
        for &phi in &[0.3, 1.0, 2.5, 4.0] {
            assert!((bec_lamb_factor(5, phi) - direct(phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_symmetric_examples() {
        // resonance at Delta = 2 Delta_x is total reflection
        let phi = 0.9;
        let dx = 0.5 * bec_lamb_factor(3, phi);
        let (t, r) = uniform_symmetric_probabilities(3, 1.0, 0.0, phi, 2.0 * dx);
        assert!(t.abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
        // dark phase 2pi/3 for N=3
        let (t, _) = uniform_symmetric_probabilities(3, 1.0, 0.0, TAU / 3.0, 0.4);
        assert!((t - 1.0).abs() < 1e-12);
        // Gamma_x = 2, Delta_x = 0: T = 4 / (4 + 16)
        let (t, _) = uniform_symmetric_probabilities(2, 1.0, 0.0, 0.0, 2.0);
        assert!((t - 0.2).abs() < 1e-15);
    }

    #[test]
    fn bec_examples() {
        let f = bec_closed_forms(5, 1.0, 2.0, TAU / 5.0);
        assert!(f.gamma_sum.abs() < 1e-12 && f.gamma_diff.abs() < 1e-12);
        let f = bec_closed_forms(2, 1.0, 2.0, 0.0);
        assert_eq!(f.gamma_sum, 10.0);
        let f = bec_closed_forms(4, 1.0, 2.0, FRAC_PI_2);
        assert!((f.lamb_shift - 10.0).abs() < 1e-12);
        assert!((router_lamb_shift(4, 1.0, 2.0, 1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn n2_examples() {
        for d in [-3.0, 0.0, 0.5, 20.0] {
            assert!(
                (n2_transmission(pt(1.0, 0.5), pt(1.0, 2.5), N2Phase::Pi, d) - 1.0).abs() < 1e-15
            );
        }
        let t = n2_transmission(pt(1.0, 0.5), pt(3.0, 2.5), N2Phase::Pi, 4.0);
        assert!((t - 0.5).abs() < 1e-15);
        assert_eq!(
            n2_transmission(pt(1.0, 2.0), pt(3.0, 2.0), N2Phase::Zero, 0.0),
            0.0
        );
    }

    #[test]
    fn disordered_examples() {
        let cfg = DisorderedConfig {
            n: 2,
            x: 1.0,
            y: 2.0,
            site: 1,
            xi: 1.0,
            yi: 2.0,
            gamma: 0.0,
            phi12: 0.0,
        };
        let r = disordered_rates(&cfg).unwrap();
        assert_eq!(r.gamma_sum, 10.0);
        assert_eq!(r.gamma_sum, bec_closed_forms(2, 1.0, 2.0, 0.0).gamma_sum);

        for n in 2..=9 {
            for m in 1..n {
                let cfg = DisorderedConfig {
                    n,
                    x: 1.0,
                    y: 2.0,
                    site: n - 1,
                    xi: 3.7,
                    yi: 0.4,
                    gamma: 0.0,
                    phi12: TAU * m as f64 / n as f64,
                };
                let r = disordered_rates(&cfg).unwrap();
                let expected = router_lamb_shift(n, 1.0, 2.0, m);
                assert!((r.lamb_shift - expected).abs() < 1e-12 * expected.abs().max(1.0));
            }
        }

        // x_i = x at a special phase leaves only one decay channel
        let cfg = DisorderedConfig {
            n: 5,
            x: 1.0,
            y: 2.0,
            site: 2,
            xi: 1.0,
            yi: 3.0,
            gamma: 0.0,
            phi12: TAU * 2.0 / 5.0,
        };
        let r = disordered_rates(&cfg).unwrap();
        assert!(r.gamma_x().abs() < 1e-15);
        for d in [-4.0, 0.0, 9.0] {
            let (tl, tr) = r.transmissions(0.0, d);
            assert!((tl - 1.0).abs() < 1e-15 && (tr - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn chiral_condition_examples() {
        assert_eq!(chiral_condition_mod0(2, 1.0, 2.0, 3.0).unwrap(), 2.0);
        assert_eq!(chiral_condition_mod0(5, 1.5, 1.5, 0.7).unwrap(), 0.7);
        assert_eq!(
            chiral_condition_mod0(5, 1.0, 2.0, 3.0),
            Err(Error::Infeasible(-1.0))
        );

        let (p, m) = chiral_condition_special(1.0, 2.0, 3.0);
        assert_eq!((p.yi, m.yi), (4.0, 0.0));
        assert!(p.feasible && m.feasible);
        let (p, m) = chiral_condition_special(1.0, 2.0, 1.0);
        assert_eq!((p.yi, m.yi), (2.0, 2.0));
        let (p, m) = chiral_condition_special(1.0, 0.5, 0.5);
        assert_eq!((p.yi, m.yi), (1.0, 0.0));
        let (_, m) = chiral_condition_special(1.0, 0.5, 3.0);
        assert!(!m.feasible);
    }

    #[test]
    fn special_phase_detection() {
        assert_eq!(special_phase_index(6, TAU / 6.0), Some(1));
        assert_eq!(special_phase_index(6, PI), Some(3));
        assert_eq!(special_phase_index(6, 0.0), None);
        assert_eq!(special_phase_index(6, 1.0), None);
        assert_eq!(router_phases(4), vec![FRAC_PI_2, PI, 1.5 * PI]);
    }

    #[test]
    fn optimal_nonreciprocity_examples() {
        // Gamma_x = 1, Gamma_y = 0.5
        let c = CouplingConfig::from_couplings(
            &[2f64.sqrt()],
            &[1.0],
            0.0,
            PhaseModel::markovian(0.0).unwrap(),
        )
        .unwrap();
        let o = optimal_nonreciprocity_gamma(&c).unwrap();
        assert!((o.gamma - 0.5).abs() < 1e-12);
        assert!((o.contrast - 1.0).abs() < 1e-12);

        let bec =
            CouplingConfig::uniform(3, 1.0, 1.0, 0.0, PhaseModel::markovian(0.3).unwrap()).unwrap();
        assert!(matches!(
            optimal_nonreciprocity_gamma(&bec),
            Err(Error::NoNonreciprocity(_))
        ));

        // UUEC at a special phase with x_i = x: Gamma_x = 0
        let cfg = DisorderedConfig {
            n: 4,
            x: 1.0,
            y: 2.0,
            site: 3,
            xi: 1.0,
            yi: 3.0,
            gamma: 0.0,
            phi12: FRAC_PI_2,
        };
        let o = optimal_nonreciprocity_gamma(&cfg.to_config().unwrap()).unwrap();
        assert!((o.gamma - 0.5).abs() < 1e-12);
        assert!(o.trans_left < 1e-24);
        assert!((o.trans_right - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_locus_matches_gamma() {
        let (x, y, xi, gamma) = (1.0, 2.0, 2.3, 0.2);
        let locus = optimal_locus_special(x, y, xi, gamma);
        assert!(!locus.is_empty());
        for yi in locus {
            assert!((optimal_gamma_special(x, y, xi, yi) - gamma).abs() < 1e-12);
        }
    }
}
