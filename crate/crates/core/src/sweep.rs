//! One- and two-dimensional parameter sweeps and their CSV form.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::config_file::ConfigSpec;
use crate::error::{Error, Result};
use crate::scattering::{scatter, SpectralPoint};

/// Keys that may be used as sweep axes.
pub const AXIS_KEYS: &[&str] = &["delta", "phi12", "xi", "yi", "gamma", "x", "y", "tau12"];

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CHIRALWG_THREADS";

/// Evenly spaced values of one configuration key, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize) -> Result<Self> {
        if !AXIS_KEYS.contains(&name) {
            return Err(Error::InvalidArgument(format!(
                "cannot sweep {name:?} (expected one of {})",
                AXIS_KEYS.join(", ")
            )));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::NonFinite("axis bounds"));
        }
        if count < 2 {
            return Err(Error::InvalidArgument(format!(
                "axis {name}: count must be at least 2, got {count}"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            start,
            stop,
            count,
        })
    }

    /// Parse `START:STOP:COUNT` for the axis `name`.
    pub fn parse_range(name: &str, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Parse(format!(
                "expected START:STOP:COUNT, got {text:?}"
            )));
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {s:?} in range {text:?}")))
        };
        let count = c
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad count {c:?} in range {text:?}")))?;
        Self::new(name, num(a)?, num(b)?, count)
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.value(k))
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Parse `KEY=START:STOP:COUNT`.
    fn from_str(s: &str) -> Result<Self> {
        let (k, r) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected KEY=START:STOP:COUNT, got {s:?}")))?;
        Self::parse_range(k.trim(), r)
    }
}

/// A quantity extracted from a [`SpectralPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    TransLeft,
    ReflLeft,
    TransRight,
    ReflRight,
    LossLeft,
    LossRight,
    Contrast,
    LambShift,
    GammaX,
    GammaY,
    GammaXyRe,
    GammaXyIm,
    TLeftRe,
    TLeftIm,
    RLeftRe,
    RLeftIm,
    TRightRe,
    TRightIm,
    RRightRe,
    RRightIm,
}

impl Observable {
    pub const ALL: [Observable; 20] = [
        Observable::TransLeft,
        Observable::ReflLeft,
        Observable::TransRight,
        Observable::ReflRight,
        Observable::LossLeft,
        Observable::LossRight,
        Observable::Contrast,
        Observable::LambShift,
        Observable::GammaX,
        Observable::GammaY,
        Observable::GammaXyRe,
        Observable::GammaXyIm,
        Observable::TLeftRe,
        Observable::TLeftIm,
        Observable::RLeftRe,
        Observable::RLeftIm,
        Observable::TRightRe,
        Observable::TRightIm,
        Observable::RRightRe,
        Observable::RRightIm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::TransLeft => "T_left",
            Observable::ReflLeft => "R_left",
            Observable::TransRight => "T_right",
            Observable::ReflRight => "R_right",
            Observable::LossLeft => "loss_left",
            Observable::LossRight => "loss_right",
            Observable::Contrast => "contrast",
            Observable::LambShift => "lamb_shift",
            Observable::GammaX => "gamma_x",
            Observable::GammaY => "gamma_y",
            Observable::GammaXyRe => "gamma_xy_re",
            Observable::GammaXyIm => "gamma_xy_im",
            Observable::TLeftRe => "t_left_re",
            Observable::TLeftIm => "t_left_im",
            Observable::RLeftRe => "r_left_re",
            Observable::RLeftIm => "r_left_im",
            Observable::TRightRe => "t_right_re",
            Observable::TRightIm => "t_right_im",
            Observable::RRightRe => "r_right_re",
            Observable::RRightIm => "r_right_im",
        }
    }

    pub fn eval(self, p: &SpectralPoint) -> f64 {
        match self {
            Observable::TransLeft => p.trans_left,
            Observable::ReflLeft => p.refl_left,
            Observable::TransRight => p.trans_right,
            Observable::ReflRight => p.refl_right,
            Observable::LossLeft => p.loss_left,
            Observable::LossRight => p.loss_right,
            Observable::Contrast => p.contrast,
            Observable::LambShift => p.rates.lamb_shift,
            Observable::GammaX => p.rates.gamma_x,
            Observable::GammaY => p.rates.gamma_y,
            Observable::GammaXyRe => p.rates.gamma_xy.re,
            Observable::GammaXyIm => p.rates.gamma_xy.im,
            Observable::TLeftRe => p.t_left.re,
            Observable::TLeftIm => p.t_left.im,
            Observable::RLeftRe => p.r_left.re,
            Observable::RLeftIm => p.r_left.im,
            Observable::TRightRe => p.t_right.re,
            Observable::TRightIm => p.t_right.im,
            Observable::RRightRe => p.r_right.re,
            Observable::RRightIm => p.r_right.im,
        }
    }

    /// Parse a comma-separated list of observable names.
    pub fn parse_list(text: &str) -> Result<Vec<Observable>> {
        let list: Vec<Observable> = text
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::Parse("empty observable list".into()));
        }
        Ok(list)
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Observable::ALL.iter().map(|o| o.name()).collect();
                Error::Parse(format!(
                    "unknown observable {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of a sweep. Each row holds the axis values followed by the
/// observables, rows ordered with `axis2` outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn evaluate(
    base: &ConfigSpec,
    assignments: &[(&str, f64)],
    observables: &[Observable],
) -> Result<Vec<f64>> {
    let mut spec = base.clone();
    for &(k, v) in assignments {
        spec.set_number(k, v)?;
    }
    let config = spec.build()?;
    let delta = spec.delta.resolve(&config);
    let point = scatter(&config, delta);
    let mut row: Vec<f64> = assignments.iter().map(|&(_, v)| v).collect();
    row.extend(observables.iter().map(|o| o.eval(&point)));
    Ok(row)
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Evaluate `observables` on the grid spanned by the axes. Points that are
/// not swept keep the values of `base`. Runs on at most `threads` workers
/// (all cores when `None`); the row order does not depend on it.
pub fn run_sweep(
    base: &ConfigSpec,
    axis1: &Axis,
    axis2: Option<&Axis>,
    observables: &[Observable],
    threads: Option<usize>,
) -> Result<SweepGrid> {
    if observables.is_empty() {
        return Err(Error::InvalidArgument("no observables requested".into()));
    }
    if axis2.is_some_and(|a| a.name == axis1.name) {
        return Err(Error::InvalidArgument(format!(
            "axis {} given twice",
            axis1.name
        )));
    }
    // surface configuration errors once instead of per cell
    base.build()?;

    let n2 = axis2.map_or(1, |a| a.count);
    let total = axis1.count * n2;
    let cell = |idx: usize| {
        let k1 = idx % axis1.count;
        let k2 = idx / axis1.count;
        let mut assign = vec![(axis1.name.as_str(), axis1.value(k1))];
        if let Some(a2) = axis2 {
            assign.push((a2.name.as_str(), a2.value(k2)));
        }
        evaluate(base, &assign, observables)
    };

    let run = || {
        (0..total)
            .into_par_iter()
            .map(cell)
            .collect::<Result<Vec<_>>>()
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let mut columns = vec![axis1.name.clone()];
    if let Some(a2) = axis2 {
        columns.push(a2.name.clone());
    }
    columns.extend(observables.iter().map(|o| o.name().to_string()));
    Ok(SweepGrid {
        axis1: axis1.clone(),
        axis2: axis2.cloned(),
        columns,
        rows,
    })
}

/// Shortest-round-trip scientific notation with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a header row and the data rows, comma separated, LF terminated.
pub fn write_csv<W: Write>(columns: &[String], rows: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
    w.write_record(columns).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| format_value(v)))
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
    Ok(())
}

/// Read a CSV written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Parse(format!("csv header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv: {e}")))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("csv: bad number {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

impl SweepGrid {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.columns, &self.rows, out)
    }

    /// Fixed-width text table.
    pub fn write_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let width = 24;
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{c:>width$}"))
            .collect();
        writeln!(out, "{}", header.join(" "))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$.12e}")).collect();
            writeln!(out, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ConfigSpec {
        ConfigSpec::parse_str("n = 2\nx = 1\ny = 0.5\nxi = 0.5\nyi = 1\ntau12 = 1\n").unwrap()
    }

    #[test]
    fn axis_parsing() {
        let a: Axis = "delta=-1:1:5".parse().unwrap();
        assert_eq!(
            a.values().collect::<Vec<_>>(),
            vec![-1.0, -0.5, 0.0, 0.5, 1.0]
        );
        assert!(Axis::parse_range("delta", "0:1:1").is_err());
        assert!(Axis::parse_range("delta", "0:1").is_err());
        assert!(Axis::parse_range("n", "0:1:3").is_err());
        assert!("xi:0:1:3".parse::<Axis>().is_err());
    }

    #[test]
    fn observable_names_round_trip() {
        for o in Observable::ALL {
            assert_eq!(o.name().parse::<Observable>().unwrap(), o);
        }
        assert!(Observable::parse_list("T_left, R_left").unwrap().len() == 2);
        assert!(Observable::parse_list("T_left,bogus").is_err());
    }

    #[test]
    fn grid_order_and_threads() {
        let a1 = Axis::new("delta", -2.0, 2.0, 7).unwrap();
        let a2 = Axis::new("xi", 0.1, 1.0, 3).unwrap();
        let obs = [Observable::TransLeft, Observable::ReflRight];
        let g1 = run_sweep(&base(), &a1, Some(&a2), &obs, Some(1)).unwrap();
        let g4 = run_sweep(&base(), &a1, Some(&a2), &obs, Some(4)).unwrap();
        assert_eq!(g1, g4);
        assert_eq!(g1.columns, vec!["delta", "xi", "T_left", "R_right"]);
        assert_eq!(g1.rows.len(), 21);
        assert_eq!((g1.rows[1][0], g1.rows[1][1]), (a1.value(1), 0.1));
        assert_eq!((g1.rows[7][0], g1.rows[7][1]), (-2.0, a2.value(1)));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let a1 = Axis::new("delta", -3.0, 3.0, 11).unwrap();
        let g = run_sweep(&base(), &a1, None, &Observable::ALL, None).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.starts_with("delta,T_left,"));
        let (header, rows) = read_csv(buf.as_slice()).unwrap();
        assert_eq!(header, g.columns);
        assert_eq!(rows, g.rows);
    }
}
