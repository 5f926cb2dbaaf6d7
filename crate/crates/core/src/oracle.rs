//! Brute-force scattering amplitudes from the stationary Schrödinger equation.
//!
//! Between neighbouring coupling points the field is a plane wave, so the
//! right-mover is `A_j e^{i q z}` and the left-mover `B_j e^{-i q z}` on the
//! segment right of point `j` (`A_0`, `B_0` left of the first point). Each
//! delta-function coupling produces a jump in the amplitudes, and the atom
//! sees the mean of the field on either side:
//!
//! ```text
//! A_j - A_{j-1}  = -i y_j e^{-i k z_j} E
//! B_{j-1} - B_j  = -i x_j e^{+i k z_j} E
//! (Delta + i gamma) E = sum_j [ x_j e^{-i k z_j} (B_{j-1} + B_j) / 2
//!                             + y_j e^{+i k z_j} (A_{j-1} + A_j) / 2 ]
//! ```
//!
//! The `2N + 1` unknowns `A_1..A_N, B_0..B_{N-1}, E` are solved with a dense
//! partially pivoted LU. Nothing here uses the closed-form rates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::CouplingConfig;

/// Incidence side of the photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Incident from the left, travelling right.
    Left,
    /// Incident from the right, travelling left.
    Right,
}

/// Full set of piecewise amplitudes from one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub direction: Direction,
    /// Right-mover amplitudes `A_0..A_N`.
    pub right_amps: Vec<Complex64>,
    /// Left-mover amplitudes `B_0..B_N`.
    pub left_amps: Vec<Complex64>,
    /// Excited-state amplitude scaled by `sqrt(v_g)`.
    pub atom_amp: Complex64,
    pub t: Complex64,
    pub r: Complex64,
    /// Set when the system was singular and the decoupled solution returned.
    pub degenerate: bool,
    /// `max |M u - b|` of the assembled system.
    pub residual: f64,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

struct System {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl System {
    fn idx_a(&self, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&j));
        j - 1
    }

    fn idx_b(&self, j: usize) -> usize {
        debug_assert!(j < self.n);
        self.n + j
    }

    fn idx_e(&self) -> usize {
        2 * self.n
    }

    fn assemble(config: &CouplingConfig, delta: f64) -> (Self, Vec<Complex64>) {
        let n = config.len();
        let dim = 2 * n + 1;
        let mut sys = System {
            n,
            matrix: DMatrix::zeros(dim, dim),
        };
        let theta = config.phase().step(delta);
        // e^{i k z_j} for points j = 1..N, stored 0-based
        let phases: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, j as f64 * theta))
            .collect();
        let e = sys.idx_e();
        let pts = config.points();

        for j in 1..=n {
            let p = pts[j - 1];
            let ph = phases[j - 1];

            // right-mover jump at point j
            let row = j - 1;
            let a_j = sys.idx_a(j);
            sys.matrix[(row, a_j)] += 1.0;
            if j >= 2 {
                let a_prev = sys.idx_a(j - 1);
                sys.matrix[(row, a_prev)] -= 1.0;
            }
            sys.matrix[(row, e)] += I * p.y * ph.conj();

            // left-mover jump at point j
            let row = n + j - 1;
            let b_prev = sys.idx_b(j - 1);
            sys.matrix[(row, b_prev)] += 1.0;
            if j < n {
                let b_j = sys.idx_b(j);
                sys.matrix[(row, b_j)] -= 1.0;
            }
            sys.matrix[(row, e)] += I * p.x * ph;

            // atom equation, mean field at point j
            let cx = 0.5 * p.x * ph.conj();
            let cy = 0.5 * p.y * ph;
            sys.matrix[(e, b_prev)] -= cx;
            if j < n {
                let b_j = sys.idx_b(j);
                sys.matrix[(e, b_j)] -= cx;
            }
            sys.matrix[(e, a_j)] -= cy;
            if j >= 2 {
                let a_prev = sys.idx_a(j - 1);
                sys.matrix[(e, a_prev)] -= cy;
            }
        }
        sys.matrix[(e, e)] += Complex64::new(delta, config.gamma());

        (sys, phases)
    }

    /// Right-hand side for incoming amplitudes `A_0 = a0`, `B_N = b_n`.
    fn rhs(
        &self,
        config: &CouplingConfig,
        phases: &[Complex64],
        a0: f64,
        b_n: f64,
    ) -> DVector<Complex64> {
        let n = self.n;
        let pts = config.points();
        let mut b = DVector::zeros(2 * n + 1);
        // A_1 - A_0 = ...  ->  A_1 + ... = A_0
        b[0] += a0;
        // B_{N-1} - B_N = ...  ->  B_{N-1} + ... = B_N
        b[2 * n - 1] += b_n;
        b[2 * n] += 0.5 * pts[0].y * phases[0] * a0;
        b[2 * n] += 0.5 * pts[n - 1].x * phases[n - 1].conj() * b_n;
        b
    }
}

fn decoupled(direction: Direction, n: usize) -> OracleSolution {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (right_amps, left_amps) = match direction {
        Direction::Left => (vec![one; n + 1], vec![zero; n + 1]),
        Direction::Right => (vec![zero; n + 1], vec![one; n + 1]),
    };
    OracleSolution {
        direction,
        right_amps,
        left_amps,
        atom_amp: zero,
        t: one,
        r: zero,
        degenerate: true,
        residual: 0.0,
    }
}

fn unpack(
    sys: &System,
    direction: Direction,
    u: &DVector<Complex64>,
    residual: f64,
) -> OracleSolution {
    let n = sys.n;
    let (a0, b_n) = match direction {
        Direction::Left => (1.0, 0.0),
        Direction::Right => (0.0, 1.0),
    };
    let mut right_amps = Vec::with_capacity(n + 1);
    right_amps.push(Complex64::new(a0, 0.0));
    right_amps.extend((1..=n).map(|j| u[sys.idx_a(j)]));
    let mut left_amps: Vec<Complex64> = (0..n).map(|j| u[sys.idx_b(j)]).collect();
    left_amps.push(Complex64::new(b_n, 0.0));

    let (t, r) = match direction {
        Direction::Left => (right_amps[n], left_amps[0]),
        Direction::Right => (left_amps[0], right_amps[n]),
    };
    OracleSolution {
        direction,
        right_amps,
        left_amps,
        atom_amp: u[sys.idx_e()],
        t,
        r,
        degenerate: false,
        residual,
    }
}

/// Solve the boundary-matching system for both incidence directions,
/// sharing one LU factorisation. Returns `(left, right)`.
pub fn solve_oracle_both(config: &CouplingConfig, delta: f64) -> (OracleSolution, OracleSolution) {
    let (sys, phases) = System::assemble(config, delta);
    let lu = sys.matrix.clone().lu();
    let mut out = [Direction::Left, Direction::Right]
        .map(|direction| {
            let (a0, b_n) = match direction {
                Direction::Left => (1.0, 0.0),
                Direction::Right => (0.0, 1.0),
            };
            let b = sys.rhs(config, &phases, a0, b_n);
            match lu.solve(&b) {
                Some(u) if u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                    let res = &sys.matrix * &u - &b;
                    let residual = res.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    Some(unpack(&sys, direction, &u, residual))
                }
                _ => None,
            }
        })
        .into_iter();
    let left = out
        .next()
        .flatten()
        .unwrap_or_else(|| decoupled(Direction::Left, sys.n));
    let right = out
        .next()
        .flatten()
        .unwrap_or_else(|| decoupled(Direction::Right, sys.n));
    (left, right)
}

/// Solve the boundary-matching system for one incidence direction.
pub fn solve_oracle(config: &CouplingConfig, delta: f64, direction: Direction) -> OracleSolution {
    let (left, right) = solve_oracle_both(config, delta);
    match direction {
        Direction::Left => left,
        Direction::Right => right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhaseModel;

    fn markov(phi: f64) -> PhaseModel {
        PhaseModel::markovian(phi).unwrap()
    }

    #[test]
    fn small_atom_total_reflection() {
        let c = CouplingConfig::uniform(1, 1.0, 1.0, 0.0, markov(0.0)).unwrap();
        let s = solve_oracle(&c, 0.0, Direction::Left);
        assert!(s.t.norm() < 1e-15);
        assert!((s.r.norm() - 1.0).abs() < 1e-15);
        // E = y / (i (Gamma_x + Gamma_y)) = -i
        assert!((s.atom_amp - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(!s.degenerate);
    }

    #[test]
    fn boundary_values() {
        let c =
            CouplingConfig::from_couplings(&[1.0, 0.4, 2.0], &[0.3, 1.2, 0.7], 0.2, markov(1.1))
                .unwrap();
        let l = solve_oracle(&c, 0.7, Direction::Left);
        assert_eq!(l.right_amps[0], Complex64::new(1.0, 0.0));
        assert_eq!(l.left_amps[3], Complex64::new(0.0, 0.0));
        assert_eq!(l.t, l.right_amps[3]);
        assert_eq!(l.r, l.left_amps[0]);
        let r = solve_oracle(&c, 0.7, Direction::Right);
        assert_eq!(r.right_amps[0], Complex64::new(0.0, 0.0));
        assert_eq!(r.left_amps[3], Complex64::new(1.0, 0.0));
        assert_eq!(r.t, r.left_amps[0]);
        assert_eq!(r.r, r.right_amps[3]);
        assert!(l.residual < 1e-12 && r.residual < 1e-12);
    }

    #[test]
    fn uncoupled_atom() {
        let c = CouplingConfig::uniform(3, 0.0, 0.0, 0.0, markov(0.4)).unwrap();
        for d in [0.0, 1.0] {
            for dir in [Direction::Left, Direction::Right] {
                let s = solve_oracle(&c, d, dir);
                assert_eq!(s.t, Complex64::new(1.0, 0.0));
                assert_eq!(s.r, Complex64::new(0.0, 0.0));
                assert_eq!(s.atom_amp, Complex64::new(0.0, 0.0));
            }
        }
        assert!(solve_oracle(&c, 0.0, Direction::Left).degenerate);
    }
}
