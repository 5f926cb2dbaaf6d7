//! Flat `key = value` configuration format.
//!
//! ```text
//! # N = 6 router, disordered last point
//! n = 6
//! x = 1
//! y = 2
//! i = 6        # 1-based index of the disordered point
//! xi = 3
//! yi = 4
//! gamma = 0
//! phi12 = 0
//! tau12 = 0
//! markovian = true
//! delta = 0    # number, or `lamb` for the Lamb-shifted resonance
//! ```
//!
//! Every point has couplings `(x, y)` except point `i`, which has
//! `(xi, yi)`. Arbitrary couplings can be given instead as comma-separated
//! `xs` and `ys` lists. `markovian` defaults to true when `tau12` is zero
//! and to false otherwise.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{CouplingConfig, CouplingPoint, PhaseModel};
use crate::scattering::rates;

pub const KEYS: &[&str] = &[
    "n",
    "x",
    "y",
    "i",
    "xi",
    "yi",
    "gamma",
    "phi12",
    "tau12",
    "markovian",
    "delta",
    "xs",
    "ys",
];

/// Detuning at which fixed-detuning sweeps are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DeltaSpec {
    Value(f64),
    /// `Delta = Delta_LS` of each evaluated configuration.
    #[default]
    LambShift,
}

impl DeltaSpec {
    pub fn resolve(&self, config: &CouplingConfig) -> f64 {
        match *self {
            DeltaSpec::Value(v) => v,
            DeltaSpec::LambShift => rates(config, 0.0).lamb_shift,
        }
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSpec::Value(v) => write!(f, "{v}"),
            DeltaSpec::LambShift => f.write_str("lamb"),
        }
    }
}

/// Unresolved configuration parameters as read from a file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSpec {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    /// 1-based index of the disordered point.
    pub i: usize,
    pub xi: Option<f64>,
    pub yi: Option<f64>,
    pub gamma: f64,
    pub phi12: f64,
    pub tau12: f64,
    pub markovian: Option<bool>,
    pub delta: DeltaSpec,
    pub xs: Option<Vec<f64>>,
    pub ys: Option<Vec<f64>>,
}

impl Default for ConfigSpec {
    fn default() -> Self {
        Self {
            n: 1,
            x: 1.0,
            y: 1.0,
            i: 0,
            xi: None,
            yi: None,
            gamma: 0.0,
            phi12: 0.0,
            tau12: 0.0,
            markovian: None,
            delta: DeltaSpec::Value(0.0),
            xs: None,
            ys: None,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v = value
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{key}: expected a number, got {value:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{key}: value must be finite")));
    }
    Ok(v)
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

impl ConfigSpec {
    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "n" => {
                self.n = value.parse().map_err(|_| {
                    Error::Parse(format!("n: expected a positive integer, got {value:?}"))
                })?
            }
            "x" => self.x = parse_f64(key, value)?,
            "y" => self.y = parse_f64(key, value)?,
            "i" => {
                self.i = value.parse().map_err(|_| {
                    Error::Parse(format!("i: expected a positive integer, got {value:?}"))
                })?
            }
            "xi" => self.xi = Some(parse_f64(key, value)?),
            "yi" => self.yi = Some(parse_f64(key, value)?),
            "gamma" => self.gamma = parse_f64(key, value)?,
            "phi12" => self.phi12 = parse_f64(key, value)?,
            "tau12" => self.tau12 = parse_f64(key, value)?,
            "markovian" => {
                self.markovian = Some(match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => {
                        return Err(Error::Parse(format!(
                            "markovian: expected true/false, got {value:?}"
                        )))
                    }
                })
            }
            "delta" => {
                self.delta = if value == "lamb" {
                    DeltaSpec::LambShift
                } else {
                    DeltaSpec::Value(parse_f64(key, value)?)
                }
            }
            "xs" => self.xs = Some(parse_list(key, value)?),
            "ys" => self.ys = Some(parse_list(key, value)?),
            other => {
                return Err(Error::Parse(format!(
                    "unknown key {other:?} (expected one of {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Apply a `KEY=VAL` override.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected KEY=VAL, got {assignment:?}")))?;
        self.set(k, v)
    }

    /// Set a numeric key, as done by sweep axes.
    pub fn set_number(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "delta" => self.delta = DeltaSpec::Value(value),
            "x" => self.x = value,
            "y" => self.y = value,
            "xi" => self.xi = Some(value),
            "yi" => self.yi = Some(value),
            "gamma" => self.gamma = value,
            "phi12" => self.phi12 = value,
            "tau12" => self.tau12 = value,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "{other:?} is not a sweepable key"
                )))
            }
        }
        Ok(())
    }

    /// Parse file contents: one assignment per line, `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            spec.set(k, v)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(spec)
    }

    pub fn is_markovian(&self) -> bool {
        self.markovian.unwrap_or(self.tau12 == 0.0)
    }

    pub fn build(&self) -> Result<CouplingConfig> {
        let phase = PhaseModel::new(self.phi12, self.tau12, self.is_markovian())?;
        if self.xs.is_some() || self.ys.is_some() {
            let (Some(xs), Some(ys)) = (&self.xs, &self.ys) else {
                return Err(Error::InvalidArgument(
                    "xs and ys must be given together".into(),
                ));
            };
            return CouplingConfig::from_couplings(xs, ys, self.gamma, phase);
        }
        if self.n == 0 {
            return Err(Error::NoPoints);
        }
        let mut points = vec![CouplingPoint::new(self.x, self.y)?; self.n];
        if self.xi.is_some() || self.yi.is_some() {
            let site = if self.i == 0 { self.n } else { self.i };
            if site > self.n {
                return Err(Error::IndexOutOfRange {
                    index: site,
                    len: self.n,
                });
            }
            points[site - 1] =
                CouplingPoint::new(self.xi.unwrap_or(self.x), self.yi.unwrap_or(self.y))?;
        }
        CouplingConfig::new(points, self.gamma, phase)
    }
}

impl FromStr for ConfigSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_str(s)
    }
}
