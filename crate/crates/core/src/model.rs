//! Physical configuration of a giant atom chirally coupled to a waveguide.
//!
//! Units: couplings are measured in a reference coupling `x_ref`, rates and
//! detunings in `x_ref^2`, propagation times in `x_ref^-2`. The group velocity
//! is set to one. Coupling points are equally spaced with the first one at
//! the origin, so point `j` (0-based) accumulates the propagation phase
//! `j * (phi12 + delta * tau12)` relative to the first.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default relative tolerance used by [`classify_regime`].
pub const DEFAULT_REGIME_EPS: f64 = 1e-9;

/// Reduce a phase into `[0, 2pi)`.
pub fn normalize_phase(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    let r = phi.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2pi
    Ok(if r >= TAU { 0.0 } else { r })
}

/// Chiral couplings at one connection point.
///
/// `x` couples to left-going modes and `y` to right-going modes, both scaled
/// by `1/sqrt(v_g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPoint {
    pub x: f64,
    pub y: f64,
}

impl CouplingPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        check_coupling("x", x)?;
        check_coupling("y", y)?;
        Ok(Self { x, y })
    }

    pub fn swapped(self) -> Self {
        Self {
            x: self.y,
            y: self.x,
        }
    }
}

fn check_coupling(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if v < 0.0 {
        return Err(Error::Negative { name, value: v });
    }
    Ok(())
}

/// Propagation phase between neighbouring coupling points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseModel {
    phi12: f64,
    tau12: f64,
    markovian: bool,
}

impl PhaseModel {
    pub fn new(phi12: f64, tau12: f64, markovian: bool) -> Result<Self> {
        if !tau12.is_finite() {
            return Err(Error::NonFinite("tau12"));
        }
        if tau12 < 0.0 {
            return Err(Error::Negative {
                name: "tau12",
                value: tau12,
            });
        }
        Ok(Self {
            phi12: normalize_phase(phi12)?,
            tau12,
            markovian,
        })
    }

    pub fn markovian(phi12: f64) -> Result<Self> {
        Self::new(phi12, 0.0, true)
    }

    pub fn retarded(phi12: f64, tau12: f64) -> Result<Self> {
        Self::new(phi12, tau12, false)
    }

    /// Phase at the atomic transition frequency, in `[0, 2pi)`.
    pub fn phi12(&self) -> f64 {
        self.phi12
    }

    pub fn tau12(&self) -> f64 {
        self.tau12
    }

    pub fn is_markovian(&self) -> bool {
        self.markovian
    }

    /// Phase accumulated between adjacent points at detuning `delta`.
    ///
    /// Not reduced modulo 2pi.
    pub fn step(&self, delta: f64) -> f64 {
        if self.markovian {
            self.phi12
        } else {
            self.phi12 + delta * self.tau12
        }
    }
}

/// A complete scattering setup: coupling points, atomic loss and phases.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConfig {
    points: Vec<CouplingPoint>,
    gamma: f64,
    phase: PhaseModel,
}

impl CouplingConfig {
    pub fn new(points: Vec<CouplingPoint>, gamma: f64, phase: PhaseModel) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoPoints);
        }
        for p in &points {
            check_coupling("x", p.x)?;
            check_coupling("y", p.y)?;
        }
        if !gamma.is_finite() {
            return Err(Error::NonFinite("gamma"));
        }
        if gamma < 0.0 {
            return Err(Error::Negative {
                name: "gamma",
                value: gamma,
            });
        }
        Ok(Self {
            points,
            gamma,
            phase,
        })
    }

    /// `n` identical points with couplings `(x, y)`.
    pub fn uniform(n: usize, x: f64, y: f64, gamma: f64, phase: PhaseModel) -> Result<Self> {
        let p = CouplingPoint::new(x, y)?;
        Self::new(vec![p; n], gamma, phase)
    }

    /// Build from parallel slices of left- and right-going couplings.
    pub fn from_couplings(xs: &[f64], ys: &[f64], gamma: f64, phase: PhaseModel) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument(format!(
                "{} x couplings but {} y couplings",
                xs.len(),
                ys.len()
            )));
        }
        let points = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| CouplingPoint::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, gamma, phase)
    }

    pub fn points(&self) -> &[CouplingPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phase(&self) -> &PhaseModel {
        &self.phase
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.x)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.y)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.points.clone(), gamma, self.phase)
    }

    pub fn with_phase(&self, phase: PhaseModel) -> Self {
        Self {
            phase,
            ..self.clone()
        }
    }

    pub fn with_phi12(&self, phi12: f64) -> Result<Self> {
        let phase = PhaseModel::new(phi12, self.phase.tau12, self.phase.markovian)?;
        Ok(self.with_phase(phase))
    }

    /// Replace the couplings of point `index` (0-based).
    pub fn with_point(&self, index: usize, point: CouplingPoint) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        let mut points = self.points.clone();
        points[index] = CouplingPoint::new(point.x, point.y)?;
        Self::new(points, self.gamma, self.phase)
    }

    /// Exchange left- and right-going couplings at every point.
    pub fn swapped(&self) -> Self {
        Self {
            points: self.points.iter().map(|p| p.swapped()).collect(),
            ..self.clone()
        }
    }

    /// Mirror image `z -> -z`: couplings swapped and point order reversed.
    pub fn mirrored(&self) -> Self {
        Self {
            points: self.points.iter().rev().map(|p| p.swapped()).collect(),
            ..self.clone()
        }
    }
}

/// Chirality regime of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    UniformSymmetric,
    /// Bidirectional even coupling.
    Bec,
    /// Unidirectional un-even coupling.
    Uuec,
    /// Bidirectional un-even coupling.
    Buec,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::UniformSymmetric => "uniform-symmetric",
            RegimeLabel::Bec => "BEC",
            RegimeLabel::Uuec => "UUEC",
            RegimeLabel::Buec => "BUEC",
        }
    }
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn rel_eq(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * a.abs().max(b.abs())
}

fn all_equal(mut values: impl Iterator<Item = f64>, eps: f64) -> bool {
    let Some(first) = values.next() else {
        return true;
    };
    values.all(|v| rel_eq(first, v, eps))
}

/// Classify `config` into one of the chirality regimes; `eps` is a relative
/// tolerance for coupling equality.
pub fn classify_regime(config: &CouplingConfig, eps: f64) -> RegimeLabel {
    let x_even = all_equal(config.xs(), eps);
    let y_even = all_equal(config.ys(), eps);
    match (x_even, y_even) {
        (true, true) => {
            let p = config.points()[0];
            if rel_eq(p.x, p.y, eps) {
                RegimeLabel::UniformSymmetric
            } else {
                RegimeLabel::Bec
            }
        }
        (true, false) | (false, true) => RegimeLabel::Uuec,
        (false, false) => RegimeLabel::Buec,
    }
}

/// Propagation phase between points `i` and `j` (0-based) at detuning `delta`.
pub fn phase_between(config: &CouplingConfig, i: usize, j: usize, delta: f64) -> Result<f64> {
    let len = config.len();
    for index in [i, j] {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
    }
    Ok(i.abs_diff(j) as f64 * config.phase().step(delta))
}
