//! Lamb shift, directional decay rates and single-photon scattering
//! amplitudes of a giant atom.
//!
//! With `theta` the phase step between adjacent points and
//! `S_x = sum_j x_j e^{i j theta}` (likewise `S_y`):
//!
//! ```text
//! Delta_x  = sum_{i<j} x_i x_j sin((j-i) theta)
//! Gamma_x  = |S_x|^2 / 2
//! Gamma_xy = S_x S_y
//! ```
//!
//! and the amplitudes share the denominator `D + i(gamma + Gamma_x + Gamma_y)`
//! with `D = Delta - Delta_LS`. Reflection amplitudes are `-i Gamma_xy / den`
//! from the left and `-i conj(Gamma_xy) / den` from the right, referenced to
//! the first coupling point at `z = 0`; with this choice a symmetric small
//! atom reflects with amplitude -1 on resonance from either side.

use num_complex::Complex64;

use crate::model::CouplingConfig;

/// Above this many points [`rates`] switches the Lamb shift from the literal
/// pairwise sum to the O(N) prefix-sum form.
pub const PAIRWISE_MAX_POINTS: usize = 64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Interference-renormalised atomic parameters at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    /// `Delta_x + Delta_y`.
    pub lamb_shift: f64,
    /// Decay rate into left-going modes.
    pub gamma_x: f64,
    /// Decay rate into right-going modes.
    pub gamma_y: f64,
    /// Cross rate entering the reflection amplitudes.
    pub gamma_xy: Complex64,
}

impl Rates {
    pub fn gamma_sum(&self) -> f64 {
        self.gamma_x + self.gamma_y
    }

    pub fn gamma_diff(&self) -> f64 {
        self.gamma_x - self.gamma_y
    }
}

/// All scattering observables at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub delta: f64,
    /// Transmission amplitude for a photon incident from the left.
    pub t_left: Complex64,
    /// Reflection amplitude for a photon incident from the left.
    pub r_left: Complex64,
    pub t_right: Complex64,
    pub r_right: Complex64,
    pub trans_left: f64,
    pub refl_left: f64,
    pub trans_right: f64,
    pub refl_right: f64,
    /// Probability of loss to non-waveguide modes, `1 - T - R`.
    pub loss_left: f64,
    pub loss_right: f64,
    /// Nonreciprocity contrast `|T_l - T_r| / (T_l + T_r)`.
    pub contrast: f64,
    pub rates: Rates,
}

/// `sum_j w_j e^{i j theta}`, snapped to zero when it is below the rounding
/// error of the summation so that fully destructive interference decouples
/// the atom exactly.
fn coherent_sum(weights: impl Iterator<Item = f64>, theta: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut n = 0usize;
    for (j, w) in weights.enumerate() {
        sum += w * Complex64::from_polar(1.0, j as f64 * theta);
        abs_sum += w.abs();
        n = j + 1;
    }
    if sum.norm() <= 8.0 * n as f64 * f64::EPSILON * abs_sum {
        Complex64::new(0.0, 0.0)
    } else {
        sum
    }
}

fn lamb_pairwise(w: &[f64], theta: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            acc += w[i] * w[j] * ((j - i) as f64 * theta).sin();
        }
    }
    acc
}

/// `sum_{i<j} w_i w_j sin((j-i) theta) = sum_j w_j Im(e^{i j theta} P_j)` with
/// the running prefix `P_j = sum_{i<j} w_i e^{-i i theta}`.
fn lamb_prefix(w: &[f64], theta: f64) -> f64 {
    let mut prefix = Complex64::new(0.0, 0.0);
    let mut acc = 0.0;
    for (j, &wj) in w.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, j as f64 * theta);
        acc += wj * (phase * prefix).im;
        prefix += wj * phase.conj();
    }
    acc
}

fn decay_pairwise(w: &[f64], theta: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..w.len() {
        acc += 0.5 * w[i] * w[i];
        for j in i + 1..w.len() {
            acc += w[i] * w[j] * ((j - i) as f64 * theta).cos();
        }
    }
    acc
}

/// Rates at detuning `delta`.
///
/// Decay rates come from the coherent sums, which keeps
/// `|Gamma_xy|^2 = 4 Gamma_x Gamma_y` exact up to rounding. The Lamb shift is
/// the pairwise sum for up to [`PAIRWISE_MAX_POINTS`] points.
pub fn rates(config: &CouplingConfig, delta: f64) -> Rates {
    let theta = config.phase().step(delta);
    let sx = coherent_sum(config.xs(), theta);
    let sy = coherent_sum(config.ys(), theta);
    let xs: Vec<f64> = config.xs().collect();
    let ys: Vec<f64> = config.ys().collect();
    let lamb_shift = if config.len() <= PAIRWISE_MAX_POINTS {
        lamb_pairwise(&xs, theta) + lamb_pairwise(&ys, theta)
    } else {
        lamb_prefix(&xs, theta) + lamb_prefix(&ys, theta)
    };
    Rates {
        lamb_shift,
        gamma_x: 0.5 * sx.norm_sqr(),
        gamma_y: 0.5 * sy.norm_sqr(),
        gamma_xy: sx * sy,
    }
}

/// Rates from the O(N) coherent and prefix sums only.
pub fn rates_coherent(config: &CouplingConfig, delta: f64) -> Rates {
    let theta = config.phase().step(delta);
    let xs: Vec<f64> = config.xs().collect();
    let ys: Vec<f64> = config.ys().collect();
    let sx = coherent_sum(xs.iter().copied(), theta);
    let sy = coherent_sum(ys.iter().copied(), theta);
    Rates {
        lamb_shift: lamb_prefix(&xs, theta) + lamb_prefix(&ys, theta),
        gamma_x: 0.5 * sx.norm_sqr(),
        gamma_y: 0.5 * sy.norm_sqr(),
        gamma_xy: sx * sy,
    }
}

/// Rates from the literal O(N^2) double sums over point pairs.
pub fn rates_pairwise(config: &CouplingConfig, delta: f64) -> Rates {
    let theta = config.phase().step(delta);
    let xs: Vec<f64> = config.xs().collect();
    let ys: Vec<f64> = config.ys().collect();
    Rates {
        lamb_shift: lamb_pairwise(&xs, theta) + lamb_pairwise(&ys, theta),
        gamma_x: decay_pairwise(&xs, theta),
        gamma_y: decay_pairwise(&ys, theta),
        gamma_xy: coherent_sum(xs.iter().copied(), theta) * coherent_sum(ys.iter().copied(), theta),
    }
}

fn contrast_from(detuning: f64, gamma: f64, r: &Rates) -> f64 {
    let diff = r.gamma_diff();
    let den = detuning * detuning + gamma * gamma + diff * diff;
    if den == 0.0 {
        0.0
    } else {
        2.0 * gamma * diff.abs() / den
    }
}

/// Observables at `delta` from precomputed rates.
pub fn scatter_with_rates(config: &CouplingConfig, delta: f64, rates: Rates) -> SpectralPoint {
    let gamma = config.gamma();
    let detuning = delta - rates.lamb_shift;
    let den = Complex64::new(detuning, gamma + rates.gamma_sum());

    let (t_left, r_left, t_right, r_right, loss_left, loss_right) = if den.norm_sqr() == 0.0 {
        // decoupled, lossless and resonant: every numerator vanishes too
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        (one, zero, one, zero, 0.0, 0.0)
    } else {
        let d2 = den.norm_sqr();
        (
            Complex64::new(detuning, gamma + rates.gamma_x - rates.gamma_y) / den,
            -I * rates.gamma_xy / den,
            Complex64::new(detuning, gamma - rates.gamma_x + rates.gamma_y) / den,
            -I * rates.gamma_xy.conj() / den,
            4.0 * gamma * rates.gamma_y / d2,
            4.0 * gamma * rates.gamma_x / d2,
        )
    };

    SpectralPoint {
        delta,
        t_left,
        r_left,
        t_right,
        r_right,
        trans_left: t_left.norm_sqr(),
        refl_left: r_left.norm_sqr(),
        trans_right: t_right.norm_sqr(),
        refl_right: r_right.norm_sqr(),
        loss_left,
        loss_right,
        contrast: contrast_from(detuning, gamma, &rates),
        rates,
    }
}

/// Scattering amplitudes and probabilities for both incidence directions.
pub fn scatter(config: &CouplingConfig, delta: f64) -> SpectralPoint {
    scatter_with_rates(config, delta, rates(config, delta))
}

/// Contrast ratio `2 gamma |Gamma_x - Gamma_y| / (D^2 + gamma^2 + (Gamma_x - Gamma_y)^2)`.
///
/// Zero where the denominator vanishes (both transmissions zero).
pub fn contrast_ratio(config: &CouplingConfig, delta: f64) -> f64 {
    let r = rates(config, delta);
    contrast_from(delta - r.lamb_shift, config.gamma(), &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingConfig, PhaseModel};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn markov(phi: f64) -> PhaseModel {
        PhaseModel::markovian(phi).unwrap()
    }

    #[test]
    fn small_atom_rates() {
        let c = CouplingConfig::uniform(1, 1.0, 1.0, 0.0, markov(0.0)).unwrap();
        for d in [-3.0, 0.0, 7.0] {
            let r = rates(&c, d);
            assert_eq!(r.lamb_shift, 0.0);
            assert_eq!(r.gamma_x, 0.5);
            assert_eq!(r.gamma_y, 0.5);
        }
    }

    #[test]
    fn bec_superradiant_rates() {
        let c = CouplingConfig::uniform(3, 1.0, 2.0, 0.0, markov(0.0)).unwrap();
        let r = rates(&c, 0.3);
        assert!((r.gamma_sum() - 22.5).abs() < 1e-12);
        assert!(r.lamb_shift.abs() < 1e-12);
    }

    #[test]
    fn bec_dark_phase_rates() {
        // (N/2)(x^2+y^2) cot(pi/4) = 10 with both decay rates cancelled
        let c = CouplingConfig::uniform(4, 1.0, 2.0, 0.0, markov(FRAC_PI_2)).unwrap();
        for r in [
            rates(&c, 0.0),
            rates_pairwise(&c, 0.0),
            rates_coherent(&c, 0.0),
        ] {
            assert!((r.lamb_shift - 10.0).abs() < 1e-12, "{}", r.lamb_shift);
            assert!(r.gamma_x.abs() < 1e-12);
            assert!(r.gamma_y.abs() < 1e-12);
        }
    }

    #[test]
    fn small_atom_resonant_reflection() {
        let c = CouplingConfig::uniform(1, 1.0, 1.0, 0.0, markov(0.0)).unwrap();
        let s = scatter(&c, 0.0);
        assert!(s.trans_left.abs() < 1e-15);
        assert!((s.refl_left - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bec_pi_phase_transparent() {
        let c = CouplingConfig::uniform(2, 1.0, 2.0, 0.0, markov(PI)).unwrap();
        for d in [-5.0, -0.1, 0.0, 0.1, 3.0] {
            let s = scatter(&c, d);
            assert!((s.trans_left - 1.0).abs() < 1e-12);
            assert!((s.trans_right - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bec_resonant_transmission() {
        let c = CouplingConfig::uniform(3, 1.0, 2.0, 0.0, markov(0.0)).unwrap();
        let s = scatter(&c, 0.0);
        assert!((s.trans_left - 0.36).abs() < 1e-12);
        assert!((s.trans_right - 0.36).abs() < 1e-12);
    }

    #[test]
    fn decoupled_resonance_is_transparent() {
        let c = CouplingConfig::uniform(3, 0.0, 0.0, 0.0, markov(0.0)).unwrap();
        let s = scatter(&c, 0.0);
        assert_eq!(s.trans_left, 1.0);
        assert_eq!(s.refl_left, 0.0);
        assert_eq!(s.contrast, 0.0);
    }

    #[test]
    fn lossless_has_no_contrast() {
        let c = CouplingConfig::from_couplings(&[1.0, 0.3], &[0.2, 2.0], 0.0, markov(1.0)).unwrap();
        for d in [-2.0, 0.0, 1.5] {
            assert_eq!(contrast_ratio(&c, d), 0.0);
        }
    }

    #[test]
    fn contrast_direct_evaluation() {
        // independent arithmetic: 2*0.2*0.3 / (1 + 0.04 + 0.09)
        let expected = 0.12 / 1.13;
        let r = Rates {
            lamb_shift: 0.0,
            gamma_x: 0.5,
            gamma_y: 0.2,
            gamma_xy: Complex64::new(0.0, 0.0),
        };
        assert!((contrast_from(1.0, 0.2, &r) - expected).abs() < 1e-15);
        assert!((expected - 0.1061946902654867).abs() < 1e-15);
    }

    #[test]
    fn optimal_contrast_point() {
        // single point with Gamma_x = 1, Gamma_y = 0.5 and gamma = 0.5
        let c = CouplingConfig::from_couplings(&[2f64.sqrt()], &[1.0], 0.5, markov(0.0)).unwrap();
        let s = scatter(&c, 0.0);
        assert!((s.rates.gamma_x - 1.0).abs() < 1e-15);
        assert!((s.contrast - 1.0).abs() < 1e-12);
        assert!((s.trans_left - 0.25).abs() < 1e-12);
        assert!(s.trans_right < 1e-24);
    }

    #[test]
    fn prefix_matches_pairwise_large_n() {
        let xs: Vec<f64> = (0..100).map(|j| 1.0 + 0.01 * j as f64).collect();
        let ys: Vec<f64> = (0..100).map(|j| 2.0 - 0.005 * j as f64).collect();
        let c = CouplingConfig::from_couplings(&xs, &ys, 0.1, markov(0.37)).unwrap();
        let a = rates(&c, 0.0);
        let b = rates_pairwise(&c, 0.0);
        let scale = a.gamma_sum().max(1.0) * 100.0;
        assert!((a.lamb_shift - b.lamb_shift).abs() < 1e-12 * scale);
    }
}
