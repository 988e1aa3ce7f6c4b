//! Redfield and secular-Lindblad dynamics of the three model configurations.

mod bath;
mod generator;
mod propagate;
mod system;

pub use bath::halffourier_rate;
pub use generator::{build_redfield_generator, build_secular_lindblad_generator, trace_defect, Generator};
pub use propagate::{
    decompose, observables, observe, propagate, propagate_rk45, propagate_spectral, steady_state, Decomposition,
    ObservableRow, Propagator, SteadyState, Trajectory, CONDITION_LIMIT, ZERO_EIGENVALUE_TOL,
};
pub use system::{
    build_system, check_density, default_time_grid, ground_state, partial_trace_rc, position_operator,
    thermal_oscillator, uniform_state, Frame, GeneratorKind, Method, OpenSystem, SimulationConfig,
    DEFAULT_RC_LEVELS,
};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::timescales::golden_rates;

/// The generator selected by `config` together with the system it acts on.
pub fn build_generator(config: &SimulationConfig) -> Result<(OpenSystem, Generator)> {
    let system = build_system(config)?;
    let generator = match config.generator {
        GeneratorKind::Redfield => build_redfield_generator(
            &system.hamiltonian,
            &system.coupling,
            &system.density,
            config.params.temperature,
        )?,
        GeneratorKind::SecularLindblad => {
            let spec = system.spectrum.as_ref().expect("validated: effective model");
            build_secular_lindblad_generator(spec, &golden_rates(spec, &config.params)?)
        }
    };
    Ok((system, generator))
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub system: OpenSystem,
    pub trajectory: Trajectory,
    pub rows: Vec<ObservableRow>,
}

pub fn simulate(config: &SimulationConfig) -> Result<Simulation> {
    let (system, generator) = build_generator(config)?;
    let rho0 = system.initial_state(config)?;
    let trajectory = propagate(&generator, &rho0, &config.time_grid)?;
    let rows = observables(&trajectory, &system.frame)?;
    Ok(Simulation {
        system,
        trajectory,
        rows,
    })
}

/// Steady state of a configuration, reported in the site basis.
#[derive(Debug, Clone)]
pub struct SiteSteadyState {
    pub site: Array2<C64>,
    pub full: SteadyState,
    pub row: ObservableRow,
}

pub fn steady(config: &SimulationConfig) -> Result<SiteSteadyState> {
    let (system, generator) = build_generator(config)?;
    let full = steady_state(&generator)?;
    let site = system.frame.to_site(&full.rho)?;
    let row = observe(f64::INFINITY, &full.rho, &system.frame)?;
    Ok(SiteSteadyState { site, full, row })
}
