//! Randomised self-checks comparing the closed-form engine with the linear
//! solve, and the engine with the special-case closed forms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CouplingConfig, CouplingPoint, PhaseModel};
use crate::oracle::solve_oracle_both;
use crate::regime::{
    bec_closed_forms, disordered_rates, n2_transmission, router_phases,
    uniform_symmetric_probabilities, DisorderedConfig, N2Phase,
};
use crate::scattering::{
    rates, rates_coherent, rates_pairwise, scatter, scatter_with_rates, SpectralPoint,
};

/// Absolute tolerance on amplitudes and probabilities.
pub const AMPLITUDE_TOL: f64 = 1e-12;
/// Relative tolerance between the two evaluations of the rates.
pub const RATE_TOL: f64 = 1e-12;
/// Relative tolerance for the special-case closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Negate `Gamma_xy` in the closed-form amplitudes.
    FlipCrossRate,
}

/// Ranges for random configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub max_points: usize,
    pub max_coupling: f64,
    pub max_gamma: f64,
    pub max_tau: f64,
    pub delta_range: f64,
    /// Probability of drawing `gamma = 0` exactly.
    pub lossless_fraction: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            max_points: 8,
            max_coupling: 3.0,
            max_gamma: 1.0,
            max_tau: 3.0,
            delta_range: 50.0,
            lossless_fraction: 0.25,
        }
    }
}

/// A random configuration and detuning. Half are Markovian.
pub fn random_case(rng: &mut impl Rng, spec: &SampleSpec) -> (CouplingConfig, f64) {
    let n = rng.gen_range(1..=spec.max_points);
    let points = (0..n)
        .map(|_| {
            CouplingPoint::new(
                rng.gen_range(0.0..=spec.max_coupling),
                rng.gen_range(0.0..=spec.max_coupling),
            )
            .unwrap()
        })
        .collect();
    let gamma = if rng.gen_bool(spec.lossless_fraction) {
        0.0
    } else {
        rng.gen_range(0.0..=spec.max_gamma)
    };
    let phi = rng.gen_range(0.0..TAU);
    let phase = if rng.gen_bool(0.5) {
        PhaseModel::markovian(phi).unwrap()
    } else {
        PhaseModel::retarded(phi, rng.gen_range(0.0..=spec.max_tau)).unwrap()
    };
    let delta = rng.gen_range(-spec.delta_range..=spec.delta_range);
    (CouplingConfig::new(points, gamma, phase).unwrap(), delta)
}

/// Outcome of one family of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            max_deviation: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.checks += 1;
        if deviation.is_nan() || deviation > self.tolerance {
            self.failures += 1;
        }
        if deviation.is_nan() {
            self.max_deviation = f64::NAN;
        } else if deviation > self.max_deviation {
            self.max_deviation = deviation;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "seed {} trials {}", self.seed, self.trials)?;
        for s in &self.suites {
            writeln!(
                f,
                "{:<6} {:<28} checks {:>8} failures {:>6} max_dev {:.3e} tol {:.0e}",
                if s.passed() { "PASS" } else { "FAIL" },
                s.name,
                s.checks,
                s.failures,
                s.max_deviation,
                s.tolerance
            )?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all suites passed"
            } else {
                "verification FAILED"
            }
        )
    }
}

fn closed_point(config: &CouplingConfig, delta: f64, fault: Fault) -> SpectralPoint {
    let mut r = rates(config, delta);
    if fault == Fault::FlipCrossRate {
        r.gamma_xy = -r.gamma_xy;
    }
    scatter_with_rates(config, delta, r)
}

fn rel_dev(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(scale)
}

/// Natural rate scale `((sum x)^2 + (sum y)^2) / 2` of a configuration.
pub fn rate_scale(config: &CouplingConfig) -> f64 {
    let sx: f64 = config.xs().sum();
    let sy: f64 = config.ys().sum();
    (0.5 * (sx * sx + sy * sy)).max(f64::MIN_POSITIVE)
}

/// Oracle equivalence, unitarity, mirror symmetry and the engine invariants
/// on `trials` random configurations.
pub fn engine_suites(rng: &mut impl Rng, trials: usize, fault: Fault) -> Vec<SuiteReport> {
    let spec = SampleSpec::default();
    let mut oracle_t = SuiteReport::new("oracle-transmission", AMPLITUDE_TOL);
    let mut oracle_r = SuiteReport::new("oracle-reflection", AMPLITUDE_TOL);
    let mut oracle_residual = SuiteReport::new("oracle-residual", 1e-11);
    let mut unitarity = SuiteReport::new("oracle-unitarity", AMPLITUDE_TOL);
    let mut mirror = SuiteReport::new("oracle-mirror", AMPLITUDE_TOL);
    let mut flux = SuiteReport::new("flux-conservation", AMPLITUDE_TOL);
    let mut loss = SuiteReport::new("loss-balance", AMPLITUDE_TOL);
    let mut refl_recip = SuiteReport::new("reflection-reciprocity", AMPLITUDE_TOL);
    let mut trans_recip = SuiteReport::new("lossless-transmission-recip", AMPLITUDE_TOL);
    let mut cross = SuiteReport::new("cross-rate-identity", RATE_TOL);
    let mut sums = SuiteReport::new("pairwise-vs-coherent", RATE_TOL);
    let mut swap = SuiteReport::new("direction-swap", AMPLITUDE_TOL);

    for _ in 0..trials {
        let (config, delta) = random_case(rng, &spec);
        let s = closed_point(&config, delta, fault);
        let (ol, or) = solve_oracle_both(&config, delta);

        oracle_t.record((s.t_left - ol.t).norm());
        oracle_t.record((s.t_right - or.t).norm());
        oracle_r.record((s.r_left - ol.r).norm());
        oracle_r.record((s.r_right - or.r).norm());
        oracle_residual.record(ol.residual.max(or.residual));

        // the mirror image is re-anchored at its own first point, which shifts
        // the reflection phase by 2 k z_N
        let (ml, _) = solve_oracle_both(&config.mirrored(), delta);
        let shift = Complex64::from_polar(
            1.0,
            -2.0 * (config.len() - 1) as f64 * config.phase().step(delta),
        );
        mirror.record((ml.t - or.t).norm().max((ml.r * shift - or.r).norm()));

        if config.gamma() == 0.0 {
            unitarity.record((ol.t.norm_sqr() + ol.r.norm_sqr() - 1.0).abs());
            unitarity.record((or.t.norm_sqr() + or.r.norm_sqr() - 1.0).abs());
            flux.record((s.trans_left + s.refl_left - 1.0).abs());
            flux.record((s.trans_right + s.refl_right - 1.0).abs());
            trans_recip.record((s.trans_left - s.trans_right).abs());
        }
        loss.record((1.0 - s.trans_left - s.refl_left - s.loss_left).abs());
        loss.record((1.0 - s.trans_right - s.refl_right - s.loss_right).abs());
        refl_recip.record((s.refl_left - s.refl_right).abs());

        let r = s.rates;
        let scale = rate_scale(&config);
        cross.record(rel_dev(
            r.gamma_xy.norm_sqr(),
            4.0 * r.gamma_x * r.gamma_y,
            scale * scale,
        ));

        let p = rates_pairwise(&config, delta);
        let c = rates_coherent(&config, delta);
        for (a, b) in [
            (p.lamb_shift, c.lamb_shift),
            (p.gamma_x, c.gamma_x),
            (p.gamma_y, c.gamma_y),
        ] {
            sums.record(rel_dev(a, b, scale));
        }

        let w = scatter(&config.swapped(), delta);
        swap.record(
            (w.trans_left - s.trans_right)
                .abs()
                .max((w.trans_right - s.trans_left).abs())
                .max((w.refl_left - s.refl_left).abs())
                .max((w.contrast - s.contrast).abs()),
        );
    }
    vec![
        oracle_t,
        oracle_r,
        oracle_residual,
        unitarity,
        mirror,
        flux,
        loss,
        refl_recip,
        trans_recip,
        cross,
        sums,
        swap,
    ]
}

fn markov(phi: f64) -> PhaseModel {
    PhaseModel::markovian(phi).unwrap()
}

/// A phase that is either uniform in `[0, 2pi)`, zero, or a router phase.
fn regime_phase(rng: &mut impl Rng, n: u32) -> f64 {
    match rng.gen_range(0..3) {
        0 => rng.gen_range(0.0..TAU),
        1 => 0.0,
        _ => {
            let phases = router_phases(n.max(2));
            phases[rng.gen_range(0..phases.len())]
        }
    }
}

/// Special-case closed forms against the general engine.
pub fn closed_form_suites(rng: &mut impl Rng, trials: usize) -> Vec<SuiteReport> {
    let mut uniform = SuiteReport::new("closed-uniform-symmetric", CLOSED_FORM_TOL);
    let mut bec = SuiteReport::new("closed-bec", CLOSED_FORM_TOL);
    let mut disordered = SuiteReport::new("closed-disordered", CLOSED_FORM_TOL);
    let mut two_point = SuiteReport::new("closed-two-point", CLOSED_FORM_TOL);

    for _ in 0..trials {
        let n = rng.gen_range(2..=12u32);
        let x = rng.gen_range(0.0..3.0);
        let y = rng.gen_range(0.0..3.0);
        let gamma = if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(0.0..1.0)
        };
        let phi = regime_phase(rng, n);
        let delta = rng.gen_range(-50.0..50.0);

        let c = CouplingConfig::uniform(n as usize, x, x, gamma, markov(phi)).unwrap();
        let s = scatter(&c, delta);
        let (t, r) = uniform_symmetric_probabilities(n, x, gamma, phi, delta);
        uniform.record((t - s.trans_left).abs().max((r - s.refl_left).abs()));

        let c = CouplingConfig::uniform(n as usize, x, y, gamma, markov(phi)).unwrap();
        let e = rates(&c, delta);
        let f = bec_closed_forms(n, x, y, phi);
        let scale = rate_scale(&c);
        bec.record(
            rel_dev(f.lamb_shift, e.lamb_shift, scale)
                .max(rel_dev(f.gamma_sum, e.gamma_sum(), scale))
                .max(rel_dev(f.gamma_diff, e.gamma_diff(), scale)),
        );

        let d = DisorderedConfig {
            n,
            x,
            y,
            site: rng.gen_range(0..n),
            xi: rng.gen_range(0.0..3.0),
            yi: rng.gen_range(0.0..3.0),
            gamma,
            phi12: phi,
        };
        let c = d.to_config().unwrap();
        let e = rates(&c, delta);
        let f = disordered_rates(&d).unwrap();
        let scale = rate_scale(&c);
        disordered.record(
            rel_dev(f.lamb_shift, e.lamb_shift, scale)
                .max(rel_dev(f.gamma_sum, e.gamma_sum(), scale))
                .max(rel_dev(f.gamma_diff, e.gamma_diff(), scale)),
        );
        let s = scatter(&c, delta);
        let (tl, tr) = f.transmissions(gamma, delta);
        disordered.record((tl - s.trans_left).abs().max((tr - s.trans_right).abs()));

        let p1 = CouplingPoint::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)).unwrap();
        let p2 = CouplingPoint::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)).unwrap();
        for (phase, phi) in [(N2Phase::Zero, 0.0), (N2Phase::Pi, PI)] {
            let c = CouplingConfig::new(vec![p1, p2], 0.0, markov(phi)).unwrap();
            let s = scatter(&c, delta);
            two_point.record((n2_transmission(p1, p2, phase, delta) - s.trans_left).abs());
        }
    }
    vec![uniform, bec, disordered, two_point]
}

/// Run every suite with a seeded generator.
pub fn run_verification(seed: u64, trials: usize, fault: Fault) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = engine_suites(&mut rng, trials, fault);
    suites.extend(closed_form_suites(&mut rng, trials));
    VerifyReport {
        seed,
        trials,
        suites,
    }
}

/// Largest `|a - b|` over two amplitude lists.
pub fn max_amplitude_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}
