use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigVals, Inverse, OperationNorm, Solve};
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::generator::{trace_row, Generator};
use super::system::Frame;
use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};

/// Above this `||V||_1 ||V^-1||_1` the spectral propagator is not trusted.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Zero-eigenvalue tolerance for the steady-state multiplicity check.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;
const RK_MAX_STEPS: usize = 200_000;

/// Eigendecomposition `G = V diag(L) V^-1`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub eigenvalues: Array1<C64>,
    pub vectors: Array2<C64>,
    pub inverse: Array2<C64>,
    /// `||V||_1 ||V^-1||_1`
    pub condition: f64,
    /// Largest real part among the non-stationary modes; positive values
    /// flag a Redfield positivity violation.
    pub max_real_part: f64,
}

pub fn decompose(g: &Generator) -> Result<Decomposition> {
    let (mut eigenvalues, vectors) = g.matrix.eig()?;
    let inverse = vectors.inv()?;
    let condition = vectors.opnorm_one()? * inverse.opnorm_one()?;
    // The stationary mode is exactly zero in exact arithmetic; rounding noise
    // in its real part would otherwise grow as exp(eps t) over 1e7 time units.
    let zero = argmin_norm(&eigenvalues);
    eigenvalues[zero] = ZERO;
    let mut max_real_part = f64::NEG_INFINITY;
    for (k, z) in eigenvalues.iter_mut().enumerate() {
        if k == zero {
            continue;
        }
        max_real_part = max_real_part.max(z.re);
        if z.re > 0.0 && z.re < 1e-12 {
            z.re = 0.0;
        }
    }
    Ok(Decomposition {
        eigenvalues,
        vectors,
        inverse,
        condition,
        max_real_part,
    })
}

fn argmin_norm(v: &Array1<C64>) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Propagator {
    Spectral,
    RungeKutta,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// States in the generator's frame.
    pub states: Vec<Array2<C64>>,
    pub propagator: Propagator,
    pub condition: f64,
    pub max_real_part: f64,
}

/// `rho(t) = exp(G t) rho0` at every grid instant, from one eigendecomposition
/// of `G`. Falls back to adaptive Runge-Kutta when the eigenvectors are
/// ill-conditioned.
pub fn propagate(g: &Generator, rho0: &Array2<C64>, grid: &[f64]) -> Result<Trajectory> {
    check_dim(g, rho0)?;
    let dec = decompose(g)?;
    if dec.condition <= CONDITION_LIMIT {
        return Ok(propagate_spectral(&dec, g.dim, rho0, grid));
    }
    match propagate_rk45(g, rho0, grid, 1e-10, 1e-13, RK_MAX_STEPS) {
        Ok(mut traj) => {
            traj.condition = dec.condition;
            traj.max_real_part = dec.max_real_part;
            Ok(traj)
        }
        Err(e) => Err(Error::Numerical(format!(
            "eigenvectors of the generator are ill-conditioned (condition estimate {:e}) and the Runge-Kutta fallback failed: {e}",
            dec.condition
        ))),
    }
}

pub fn propagate_spectral(dec: &Decomposition, dim: usize, rho0: &Array2<C64>, grid: &[f64]) -> Trajectory {
    let c = dec.inverse.dot(&linalg::vectorize(&rho0.view()));
    let states = grid
        .iter()
        .map(|&t| {
            let ct: Array1<C64> = dec
                .eigenvalues
                .iter()
                .zip(c.iter())
                .map(|(l, ck)| if ck.norm() == 0.0 { ZERO } else { (l * t).exp() * ck })
                .collect();
            linalg::unvectorize(&dec.vectors.dot(&ct), dim)
        })
        .collect();
    Trajectory {
        times: grid.to_vec(),
        states,
        propagator: Propagator::Spectral,
        condition: dec.condition,
        max_real_part: dec.max_real_part,
    }
}

// Dormand-Prince 5(4) tableau; the generator is time independent, so the
// node offsets are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand-Prince integration of `d vec(rho)/dt = G vec(rho)`,
/// stepping exactly onto each grid instant.
pub fn propagate_rk45(
    g: &Generator,
    rho0: &Array2<C64>,
    grid: &[f64],
    rtol: f64,
    atol: f64,
    max_steps: usize,
) -> Result<Trajectory> {
    check_dim(g, rho0)?;
    let f = |y: &Array1<C64>| g.matrix.dot(y);
    let mut y = linalg::vectorize(&rho0.view());
    let mut t = 0.0;
    let scale = g.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let mut h = if scale > 0.0 { 0.01 / scale } else { 1.0 };
    let mut steps = 0;
    let mut states = Vec::with_capacity(grid.len());
    for &target in grid {
        while t < target {
            if steps >= max_steps {
                return Err(Error::Numerical(format!(
                    "Runge-Kutta step budget of {max_steps} exhausted at t = {t:e}"
                )));
            }
            let step = h.min(target - t);
            let mut k: Vec<Array1<C64>> = Vec::with_capacity(7);
            for i in 0..7 {
                let mut yi = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[i][j] != 0.0 {
                        yi.scaled_add(C64::new(step * A[i][j], 0.0), kj);
                    }
                }
                k.push(f(&yi));
            }
            let mut y5 = y.clone();
            let mut err = Array1::<C64>::zeros(y.len());
            for i in 0..7 {
                y5.scaled_add(C64::new(step * B5[i], 0.0), &k[i]);
                err.scaled_add(C64::new(step * (B5[i] - B4[i]), 0.0), &k[i]);
            }
            let ratio = err
                .iter()
                .zip(y.iter().zip(y5.iter()))
                .map(|(e, (a, b))| e.norm() / (atol + rtol * a.norm().max(b.norm())))
                .fold(0.0_f64, f64::max);
            steps += 1;
            if !ratio.is_finite() {
                return Err(Error::Numerical(format!("Runge-Kutta diverged at t = {t:e}")));
            }
            if ratio <= 1.0 {
                t += step;
                y = y5;
                if step < h {
                    // clipped onto a grid point; keep the unclipped size
                    continue;
                }
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
        }
        states.push(linalg::unvectorize(&y, g.dim));
    }
    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        propagator: Propagator::RungeKutta,
        condition: f64::NAN,
        max_real_part: f64::NAN,
    })
}

fn check_dim(g: &Generator, rho: &Array2<C64>) -> Result<()> {
    if rho.dim() != (g.dim, g.dim) {
        return Err(Error::Dimension {
            expected: g.dim,
            found: rho.nrows(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    /// In the generator's frame.
    pub rho: Array2<C64>,
    /// `||G vec(rho)||_2`
    pub residual: f64,
}

/// Null vector of `G` normalized to unit trace. Fails if the zero eigenvalue
/// is not simple.
pub fn steady_state(g: &Generator) -> Result<SteadyState> {
    let ev = g.matrix.eigvals()?;
    let count = ev.iter().filter(|z| z.norm() < ZERO_EIGENVALUE_TOL).count();
    if count > 1 {
        return Err(Error::MultipleSteadyStates { count });
    }
    if count == 0 {
        let smallest = ev.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        return Err(Error::Numerical(format!(
            "generator has no zero eigenvalue (smallest |eigenvalue| {smallest:e})"
        )));
    }
    let n = g.dim * g.dim;
    let diag = trace_row(g.dim);
    let mut a = g.matrix.clone();
    let mut b = Array1::zeros(n);
    a.row_mut(diag[0]).fill(ZERO);
    for &k in &diag {
        a[(diag[0], k)] = ONE;
    }
    b[diag[0]] = ONE;
    let x = a.solve_into(b)?;
    let rho = linalg::hermitian_part(&linalg::unvectorize(&x, g.dim).view());
    let tr = linalg::trace(&rho.view());
    let rho = rho / tr;
    let r = g.matrix.dot(&linalg::vectorize(&rho.view()));
    let residual = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(SteadyState { rho, residual })
}

/// One row of the trajectory table, site basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableRow {
    pub t: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub re_rho32: f64,
    pub im_rho32: f64,
    /// `|tr rho - 1|` of the full state.
    pub trace_err: f64,
    /// Smallest eigenvalue of the full state.
    pub min_eig: f64,
    /// `max |rho - rho^dag|` of the full state.
    pub hermiticity_err: f64,
    /// (E0, E-, E+) populations, effective model only.
    pub eigen_populations: Option<[f64; 3]>,
}

pub fn observe(t: f64, rho: &Array2<C64>, frame: &Frame) -> Result<ObservableRow> {
    let site = frame.to_site(rho)?;
    Ok(ObservableRow {
        t,
        rho11: site[(0, 0)].re,
        rho22: site[(1, 1)].re,
        rho33: site[(2, 2)].re,
        re_rho32: site[(2, 1)].re,
        im_rho32: site[(2, 1)].im,
        trace_err: (linalg::trace(&rho.view()) - ONE).norm(),
        min_eig: linalg::min_eigenvalue(&rho.view())?,
        hermiticity_err: linalg::hermiticity_error(&rho.view()),
        eigen_populations: match frame {
            Frame::Eigen { .. } => Some([rho[(0, 0)].re, rho[(1, 1)].re, rho[(2, 2)].re]),
            _ => None,
        },
    })
}

pub fn observables(traj: &Trajectory, frame: &Frame) -> Result<Vec<ObservableRow>> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| observe(t, rho, frame))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HermitianMatrix, ModelParams, SpectralDensity};
    use crate::redfield::generator::{build_redfield_generator, build_secular_lindblad_generator};
    use crate::redfield::system::{uniform_state, GeneratorKind};
    use crate::timescales::analyze;
    use ndarray::array;

    fn secular(lambda: f64) -> (Generator, crate::timescales::AnalyticPoint) {
        let p = ModelParams { lambda, ..ModelParams::default() };
        let a = analyze(&p).unwrap();
        (build_secular_lindblad_generator(&a.spectrum, &a.rates), a)
    }

    #[test]
    fn zero_generator_is_identity() {
        let g = Generator {
            dim: 3,
            matrix: Array2::zeros((9, 9)),
            kind: GeneratorKind::Redfield,
        };
        let rho = uniform_state();
        let traj = propagate(&g, &rho, &[0.0, 1.0, 1e7]).unwrap();
        for s in &traj.states {
            assert!((s - &rho).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn spectral_matches_runge_kutta() {
        let (g, _) = secular(2.0);
        let rho = uniform_state();
        let grid = linalg::log_space(1e-2, 50.0, 30);
        let a = propagate(&g, &rho, &grid).unwrap();
        let b = propagate_rk45(&g, &rho, &grid, 1e-11, 1e-14, 1_000_000).unwrap();
        assert_eq!(a.propagator, Propagator::Spectral);
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x - y).iter().all(|z| z.norm() < 1e-8));
        }
    }

    #[test]
    fn rk45_budget_failure_is_reported() {
        let (g, _) = secular(2.0);
        let err = propagate_rk45(&g, &uniform_state(), &[1e7], 1e-10, 1e-13, 100).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn secular_steady_state_is_gibbs() {
        let (g, a) = secular(5.0);
        let ss = steady_state(&g).unwrap();
        assert!(ss.residual < 1e-10);
        let s = &a.spectrum;
        let w = [1.0, (-s.e_minus_0()).exp(), (-s.e_plus_0()).exp()];
        let z: f64 = w.iter().sum();
        for k in 0..3 {
            let got = ss.rho[(k, k)].re;
            assert!((got / (w[k] / z) - 1.0).abs() < 1e-8, "{k}: {got}");
        }
    }

    #[test]
    fn degenerate_zero_mode_rejected() {
        // Two decoupled qubit blocks: H = diag(0, 0, 1), S = 0 leaves every
        // population stationary.
        let h = HermitianMatrix::from_real(Array2::from_diag(&array![0.0, 0.5, 1.0])).unwrap();
        let s = HermitianMatrix::from_real(Array2::zeros((3, 3))).unwrap();
        let g = build_redfield_generator(&h, &s, &SpectralDensity::ohmic(0.1, 1000.0), 1.0).unwrap();
        assert!(matches!(steady_state(&g), Err(Error::MultipleSteadyStates { count: 3 })));
    }

    #[test]
    fn secular_trajectory_stays_physical() {
        let (g, a) = secular(5.0);
        let frame = Frame::Eigen { basis: a.spectrum.basis.clone() };
        let rho0 = frame.lift(&uniform_state(), None).unwrap();
        let traj = propagate(&g, &rho0, &crate::redfield::system::default_time_grid()).unwrap();
        for row in observables(&traj, &frame).unwrap() {
            assert!(row.trace_err < 1e-8, "{row:?}");
            assert!(row.hermiticity_err < 1e-8);
            assert!(row.min_eig >= -1e-9, "{row:?}");
        }
    }

    #[test]
    fn rotated_diagonal_state_has_site_coherence() {
        let (_, a) = secular(3.0);
        let frame = Frame::Eigen { basis: a.spectrum.basis.clone() };
        let rho = Array2::from_diag(&array![C64::new(0.5, 0.0), C64::new(0.3, 0.0), C64::new(0.2, 0.0)]);
        let row = observe(0.0, &rho, &frame).unwrap();
        assert!(row.re_rho32.abs() > 1e-3);
        assert_eq!(row.eigen_populations, Some([0.5, 0.3, 0.2]));
    }
}
