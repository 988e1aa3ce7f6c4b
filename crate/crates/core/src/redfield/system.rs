use ndarray::{array, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};
use crate::model::{bare_hamiltonian, coupling_operator, HermitianMatrix, ModelParams, SpectralDensity};
use crate::rcpt::{diagonalize_effective, EffectiveSpectrum};

/// Level of description fed to the Redfield solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Bare three-level system, Redfield in the full Brownian bath. Fails at
    /// strong coupling; kept as the weak-coupling baseline.
    Uw,
    /// Three-level system plus a truncated reaction-coordinate mode in a
    /// residual Ohmic bath.
    Rc,
    /// Effective three-level model after the polaron transform.
    Effh,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Uw => "uw",
            Method::Rc => "rc",
            Method::Effh => "effh",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uw" => Ok(Method::Uw),
            "rc" => Ok(Method::Rc),
            "effh" => Ok(Method::Effh),
            _ => Err(Error::Parse {
                what: "method",
                detail: format!("`{s}` is not one of uw, rc, effh"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Redfield,
    SecularLindblad,
}

pub const DEFAULT_RC_LEVELS: usize = 10;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub method: Method,
    pub generator: GeneratorKind,
    /// Fock truncation of the RC mode; required for `Method::Rc`.
    pub rc_levels: Option<usize>,
    pub params: ModelParams,
    /// Site-basis initial state.
    pub initial_state: Array2<C64>,
    pub time_grid: Vec<f64>,
}

impl SimulationConfig {
    /// Redfield dynamics with the default RC truncation and the
    /// `[1e-2, 1e7]` 400-point grid.
    pub fn new(method: Method, params: ModelParams, initial_state: Array2<C64>) -> Self {
        SimulationConfig {
            method,
            generator: GeneratorKind::Redfield,
            rc_levels: Some(DEFAULT_RC_LEVELS),
            params,
            initial_state,
            time_grid: default_time_grid(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        check_density(&self.initial_state, 3)?;
        if self.method == Method::Rc {
            match self.rc_levels {
                None => return Err(Error::InvalidInput("rc_levels is required for the RC method".into())),
                Some(n) if n < 2 => {
                    return Err(Error::param("rc_levels", n as f64, "must be >= 2"));
                }
                _ => {}
            }
        }
        if self.generator == GeneratorKind::SecularLindblad && self.method != Method::Effh {
            return Err(Error::InvalidInput(
                "the secular-Lindblad generator exists only for the effective model".into(),
            ));
        }
        for w in self.time_grid.windows(2) {
            if !(w[1] >= w[0]) {
                return Err(Error::InvalidInput("time grid must be nondecreasing".into()));
            }
        }
        if let Some(&t) = self.time_grid.first() {
            if !(t >= 0.0) || !self.time_grid.iter().all(|t| t.is_finite()) {
                return Err(Error::InvalidInput("time grid must be finite and nonnegative".into()));
            }
        }
        Ok(())
    }
}

pub fn default_time_grid() -> Vec<f64> {
    linalg::log_space(1e-2, 1e7, 400)
}

/// Checks a density matrix: Hermitian, unit trace and positive semidefinite,
/// all to 1e-12.
pub fn check_density(rho: &Array2<C64>, dim: usize) -> Result<()> {
    if rho.dim() != (dim, dim) {
        return Err(Error::Dimension {
            expected: dim,
            found: rho.nrows().max(rho.ncols()),
        });
    }
    let dev = linalg::hermiticity_error(&rho.view());
    if !(dev <= 1e-12) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = linalg::trace(&rho.view());
    if !((tr - ONE).norm() <= 1e-12) {
        return Err(Error::InvalidInput(format!("density matrix has trace {tr}")));
    }
    let min = linalg::min_eigenvalue(&rho.view())?;
    if min < -1e-12 {
        return Err(Error::InvalidInput(format!(
            "density matrix is not positive semidefinite (min eigenvalue {min:e})"
        )));
    }
    Ok(())
}

/// `diag(1/3, 1/3, 1/3)`
pub fn uniform_state() -> Array2<C64> {
    Array2::from_diag(&array![ONE, ONE, ONE]) / C64::new(3.0, 0.0)
}

/// `diag(1, 0, 0)`
pub fn ground_state() -> Array2<C64> {
    Array2::from_diag(&array![ONE, ZERO, ZERO])
}

/// Basis in which a model's density matrix lives, and how to get back to the
/// 3x3 site basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Frame {
    Site,
    /// RC-major product basis, index `n * 3 + s`.
    RcProduct { levels: usize },
    /// Effective eigenbasis (E0, E-, E+); columns of `basis` are the
    /// eigenvectors in the site basis.
    Eigen { basis: Array2<f64> },
}

impl Frame {
    pub fn dim(&self) -> usize {
        match self {
            Frame::Site | Frame::Eigen { .. } => 3,
            Frame::RcProduct { levels } => 3 * levels,
        }
    }

    /// Site-basis state into this frame.
    pub fn lift(&self, rho_site: &Array2<C64>, rc_state: Option<&Array2<C64>>) -> Result<Array2<C64>> {
        check_shape(rho_site, 3)?;
        match self {
            Frame::Site => Ok(rho_site.clone()),
            Frame::Eigen { basis } => {
                let p = linalg::to_complex(&basis.view());
                Ok(p.t().dot(rho_site).dot(&p))
            }
            Frame::RcProduct { levels } => {
                let vacuum;
                let rc = match rc_state {
                    Some(r) => r,
                    None => {
                        let mut v = Array2::zeros((*levels, *levels));
                        v[(0, 0)] = ONE;
                        vacuum = v;
                        &vacuum
                    }
                };
                check_shape(rc, *levels)?;
                Ok(linalg::kron(&rc.view(), &rho_site.view()))
            }
        }
    }

    /// State in this frame back to the site basis (partial trace over the RC
    /// mode for the product frame).
    pub fn to_site(&self, rho: &Array2<C64>) -> Result<Array2<C64>> {
        check_shape(rho, self.dim())?;
        match self {
            Frame::Site => Ok(rho.clone()),
            Frame::Eigen { basis } => {
                let p = linalg::to_complex(&basis.view());
                Ok(p.dot(rho).dot(&p.t()))
            }
            Frame::RcProduct { levels } => Ok(partial_trace_rc(rho, *levels)),
        }
    }
}

fn check_shape(rho: &Array2<C64>, dim: usize) -> Result<()> {
    if rho.dim() != (dim, dim) {
        return Err(Error::Dimension {
            expected: dim,
            found: if rho.nrows() != dim { rho.nrows() } else { rho.ncols() },
        });
    }
    Ok(())
}

/// `rho_S[s, s'] = sum_n rho[3n + s, 3n + s']`
pub fn partial_trace_rc(rho: &Array2<C64>, levels: usize) -> Array2<C64> {
    let mut out = Array2::zeros((3, 3));
    for n in 0..levels {
        for s in 0..3 {
            for r in 0..3 {
                out[(s, r)] += rho[(3 * n + s, 3 * n + r)];
            }
        }
    }
    out
}

/// Truncated `a + a^dag`: `sqrt(n + 1)` on the first off-diagonals.
pub fn position_operator(levels: usize) -> Array2<C64> {
    let mut x = Array2::zeros((levels, levels));
    for n in 0..levels.saturating_sub(1) {
        let v = C64::new(((n + 1) as f64).sqrt(), 0.0);
        x[(n, n + 1)] = v;
        x[(n + 1, n)] = v;
    }
    x
}

/// Thermal state `exp(-omega n / T) / Z` of a truncated oscillator.
pub fn thermal_oscillator(levels: usize, omega: f64, temperature: f64) -> Array2<C64> {
    let w: Vec<f64> = (0..levels).map(|n| (-omega * n as f64 / temperature).exp()).collect();
    let z: f64 = w.iter().sum();
    Array2::from_diag(&w.iter().map(|x| C64::new(x / z, 0.0)).collect::<ndarray::Array1<_>>())
}

/// Hamiltonian, system-bath operator and bath density of one configuration.
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub hamiltonian: HermitianMatrix,
    pub coupling: HermitianMatrix,
    pub density: SpectralDensity,
    pub frame: Frame,
    /// Present for the effective model.
    pub spectrum: Option<EffectiveSpectrum>,
}

pub fn build_system(config: &SimulationConfig) -> Result<OpenSystem> {
    config.validate()?;
    let p = &config.params;
    match config.method {
        Method::Uw => Ok(OpenSystem {
            hamiltonian: bare_hamiltonian(p)?,
            coupling: coupling_operator(),
            density: SpectralDensity::brownian(p.lambda, p.omega, p.gamma),
            frame: Frame::Site,
            spectrum: None,
        }),
        Method::Rc => {
            let n = config.rc_levels.expect("validated");
            let hs = bare_hamiltonian(p)?.into_inner();
            let s = coupling_operator().into_inner();
            let x = position_operator(n);
            let mut num = Array2::zeros((n, n));
            for k in 0..n {
                num[(k, k)] = C64::new(p.omega * k as f64, 0.0);
            }
            let i3 = linalg::identity(3);
            let h = linalg::kron(&linalg::identity(n).view(), &hs.view())
                + linalg::kron(&x.view(), &s.view()) * C64::new(p.lambda, 0.0)
                + linalg::kron(&num.view(), &i3.view());
            Ok(OpenSystem {
                hamiltonian: HermitianMatrix::new(h)?,
                coupling: HermitianMatrix::new(linalg::kron(&x.view(), &i3.view()))?,
                density: SpectralDensity::ohmic(p.gamma, p.cutoff),
                frame: Frame::RcProduct { levels: n },
                spectrum: None,
            })
        }
        Method::Effh => {
            let spec = diagonalize_effective(p)?;
            Ok(OpenSystem {
                hamiltonian: spec.hamiltonian_in_eigenbasis(),
                coupling: spec.coupling_in_eigenbasis(),
                density: SpectralDensity::effective_ohmic(p.lambda, p.omega, p.gamma, p.cutoff),
                frame: Frame::Eigen {
                    basis: spec.basis.clone(),
                },
                spectrum: Some(spec),
            })
        }
    }
}

impl OpenSystem {
    /// Initial state in this system's frame. The RC mode starts in its
    /// thermal state at the bath temperature.
    pub fn initial_state(&self, config: &SimulationConfig) -> Result<Array2<C64>> {
        match self.frame {
            Frame::RcProduct { levels } => {
                let rc = thermal_oscillator(levels, config.params.omega, config.params.temperature);
                self.frame.lift(&config.initial_state, Some(&rc))
            }
            _ => self.frame.lift(&config.initial_state, None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::s;

    fn params(lambda: f64) -> ModelParams {
        ModelParams {
            lambda,
            ..ModelParams::default()
        }
    }

    #[test]
    fn rc_blocks() {
        let mut cfg = SimulationConfig::new(Method::Rc, params(1.0), uniform_state());
        cfg.rc_levels = Some(2);
        let sys = build_system(&cfg).unwrap();
        let h = sys.hamiltonian.entries();
        assert_eq!(h.dim(), (6, 6));
        let hs = bare_hamiltonian(&params(1.0)).unwrap();
        let s = coupling_operator();
        assert_eq!(h.slice(s![0..3, 0..3]), hs.entries());
        assert_eq!(h.slice(s![0..3, 3..6]), s.entries());
        let upper = &h.slice(s![3..6, 3..6]) - &hs.entries();
        assert_eq!(upper, Array2::from_diag(&ndarray::Array1::from_elem(3, C64::new(10.0, 0.0))));
    }

    #[test]
    fn position_operator_entries() {
        let x = position_operator(4);
        for n in 0..3 {
            assert_eq!(x[(n, n + 1)].re, ((n + 1) as f64).sqrt());
            assert_eq!(x[(n + 1, n)].re, ((n + 1) as f64).sqrt());
        }
        assert_eq!(x[(0, 0)], ZERO);
        assert_eq!(x[(0, 2)], ZERO);
    }

    #[test]
    fn effh_weak_coupling() {
        let cfg = SimulationConfig::new(Method::Effh, params(0.0), uniform_state());
        let sys = build_system(&cfg).unwrap();
        let h = sys.hamiltonian.entries();
        let p = ModelParams::default();
        for (k, e) in [0.0, p.v - p.delta, p.v].iter().enumerate() {
            assert!((h[(k, k)].re - e).abs() < 1e-15);
        }
        let s = sys.coupling.entries();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s[(0, 1)].re - r).abs() < 1e-15 && (s[(0, 2)].re - r).abs() < 1e-15);
    }

    #[test]
    fn rc_requires_levels() {
        let mut cfg = SimulationConfig::new(Method::Rc, params(1.0), uniform_state());
        cfg.rc_levels = None;
        assert!(build_system(&cfg).is_err());
        cfg.rc_levels = Some(1);
        assert!(build_system(&cfg).is_err());
    }

    #[test]
    fn lift_and_trace_round_trip() {
        let rho = array![
            [C64::new(0.5, 0.0), C64::new(0.1, 0.05), ZERO],
            [C64::new(0.1, -0.05), C64::new(0.3, 0.0), C64::new(0.02, 0.0)],
            [ZERO, C64::new(0.02, 0.0), C64::new(0.2, 0.0)]
        ];
        let rc = thermal_oscillator(5, 1.0, 2.0);
        let frame = Frame::RcProduct { levels: 5 };
        let big = frame.lift(&rho, Some(&rc)).unwrap();
        let back = frame.to_site(&big).unwrap();
        assert!((back - &rho).iter().all(|z| z.norm() < 1e-15));
        let spec = diagonalize_effective(&params(3.0)).unwrap();
        let eig = Frame::Eigen { basis: spec.basis };
        let back = eig.to_site(&eig.lift(&rho, None).unwrap()).unwrap();
        assert!((back - &rho).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn invalid_initial_states() {
        let mut bad = uniform_state();
        bad[(0, 0)] = C64::new(0.5, 0.0);
        assert!(check_density(&bad, 3).is_err());
        let mut nonherm = uniform_state();
        nonherm[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(check_density(&nonherm, 3), Err(Error::NotHermitian { .. })));
        let neg = Array2::from_diag(&array![C64::new(1.2, 0.0), C64::new(-0.2, 0.0), ZERO]);
        assert!(check_density(&neg, 3).is_err());
        assert!(matches!(check_density(&ground_state(), 2), Err(Error::Dimension { .. })));
    }
}
