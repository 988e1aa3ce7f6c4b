//! Bare three-level model: parameters, Hamiltonian, coupling operator and the
//! bath spectral densities.
//!
//! Units: hbar = k_B = 1. Site basis ordering is (|1>, |2>, |3>) = (ground,
//! first excited, second excited).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ndarray::{array, Array2, ArrayView2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Physical parameters of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Splitting between |1> and |3>.
    pub v: f64,
    /// Excited-state splitting; |2> sits at `v - delta`.
    pub delta: f64,
    /// Reaction-coordinate coupling strength.
    pub lambda: f64,
    /// Reaction-coordinate frequency.
    pub omega: f64,
    /// Dimensionless width of the Brownian peak; prefactor of the residual Ohmic bath.
    pub gamma: f64,
    /// Exponential cutoff of the Ohmic baths. `f64::INFINITY` disables it and
    /// is written to JSON as `"inf"`.
    #[serde(serialize_with = "serialize_cutoff", deserialize_with = "deserialize_cutoff")]
    pub cutoff: f64,
    pub temperature: f64,
}

/// Non-fatal parameter diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning {
    /// The RC frequency should dominate every other scale for the vacuum
    /// projection to be accurate.
    OmegaNotDominant { omega: f64, largest_other: f64 },
}

impl std::fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamWarning::OmegaNotDominant {
                omega,
                largest_other,
            } => write!(
                f,
                "omega = {omega} is less than 5 x max(v, lambda) = {}; the RC vacuum projection may be inaccurate",
                5.0 * largest_other
            ),
        }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            v: 1.0,
            delta: 0.01,
            lambda: 1.0,
            omega: 10.0,
            gamma: 0.05,
            cutoff: 1000.0,
            temperature: 1.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CutoffValue {
    Number(f64),
    Text(String),
}

fn serialize_cutoff<S: serde::Serializer>(cutoff: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if cutoff.is_infinite() && *cutoff > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*cutoff)
    }
}

/// A number, or `null` / `"inf"` / `"none"` for no cutoff.
fn cutoff_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match Option::<CutoffValue>::deserialize(d)? {
        None => Ok(f64::INFINITY),
        Some(CutoffValue::Number(x)) => Ok(x),
        Some(CutoffValue::Text(t)) => match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "none" => Ok(f64::INFINITY),
            _ => Err(serde::de::Error::custom(format!("cutoff `{t}` is not a number or \"inf\""))),
        },
    }
}

fn deserialize_cutoff<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    cutoff_from_json(d)
}

fn optional_cutoff<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    cutoff_from_json(d).map(Some)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    v: Option<f64>,
    delta: Option<f64>,
    lambda: Option<f64>,
    omega: Option<f64>,
    gamma: Option<f64>,
    #[serde(default, deserialize_with = "optional_cutoff")]
    cutoff: Option<f64>,
    temperature: Option<f64>,
}

impl ModelParams {
    /// Hard checks. Returns the soft warnings when the parameters are usable.
    pub fn validate(&self) -> Result<Vec<ParamWarning>> {
        let finite_pos = |name, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, x, "must be finite and > 0"))
            }
        };
        finite_pos("v", self.v)?;
        finite_pos("omega", self.omega)?;
        finite_pos("gamma", self.gamma)?;
        finite_pos("temperature", self.temperature)?;
        if !(self.delta > 0.0 && self.delta < self.v) {
            return Err(Error::param("delta", self.delta, "must satisfy 0 < delta < v"));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::param("lambda", self.lambda, "must be finite and >= 0"));
        }
        if self.cutoff.is_nan() || self.cutoff <= 0.0 {
            return Err(Error::param("cutoff", self.cutoff, "must be > 0 (may be infinite)"));
        }
        let largest_other = self.v.max(self.lambda);
        let mut warnings = Vec::new();
        if self.omega < 5.0 * largest_other {
            warnings.push(ParamWarning::OmegaNotDominant {
                omega: self.omega,
                largest_other,
            });
        }
        Ok(warnings)
    }

    /// Reads a JSON parameter object. Keys missing from the file keep the
    /// value in `base`; unknown keys are rejected. The result is validated.
    pub fn from_json_str(text: &str, base: ModelParams) -> Result<ModelParams> {
        let file: ParamFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "parameter file",
            detail: e.to_string(),
        })?;
        let p = ModelParams {
            v: file.v.unwrap_or(base.v),
            delta: file.delta.unwrap_or(base.delta),
            lambda: file.lambda.unwrap_or(base.lambda),
            omega: file.omega.unwrap_or(base.omega),
            gamma: file.gamma.unwrap_or(base.gamma),
            cutoff: file.cutoff.unwrap_or(base.cutoff),
            temperature: file.temperature.unwrap_or(base.temperature),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        ModelParams { lambda, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        ModelParams { delta, ..self }
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        ModelParams {
            temperature,
            ..self
        }
    }
}

/// Dense complex matrix that passed the Hermiticity check
/// `max |M - M^dag| < 1e-12 (1 + max |M|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: Array2<C64>,
}

impl HermitianMatrix {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Dimension {
                expected: r,
                found: c,
            });
        }
        let dev = linalg::hermiticity_error(&entries.view());
        if !(dev < 1e-12 * (1.0 + linalg::max_abs(&entries.view()))) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(HermitianMatrix { entries })
    }

    pub fn from_real(entries: Array2<f64>) -> Result<Self> {
        Self::new(linalg::to_complex(&entries.view()))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> ArrayView2<'_, C64> {
        self.entries.view()
    }

    pub fn into_inner(self) -> Array2<C64> {
        self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralKind {
    Brownian,
    Ohmic,
    EffectiveOhmic,
}

/// Bath spectral density. Only the parameters the kind needs are read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub kind: SpectralKind,
    pub lambda: f64,
    pub omega: f64,
    pub gamma: f64,
    pub cutoff: f64,
}

impl SpectralDensity {
    /// `4 G W^2 l^2 w / ((w^2 - W^2)^2 + (2 pi G W w)^2)`
    pub fn brownian(lambda: f64, omega: f64, gamma: f64) -> Self {
        SpectralDensity {
            kind: SpectralKind::Brownian,
            lambda,
            omega,
            gamma,
            cutoff: f64::INFINITY,
        }
    }

    /// `G w exp(-w / cutoff)`
    pub fn ohmic(gamma: f64, cutoff: f64) -> Self {
        SpectralDensity {
            kind: SpectralKind::Ohmic,
            lambda: 0.0,
            omega: 1.0,
            gamma,
            cutoff,
        }
    }

    /// `(4 l^2 / W^2) G w exp(-w / cutoff)`, the residual bath after the
    /// polaron transform.
    pub fn effective_ohmic(lambda: f64, omega: f64, gamma: f64, cutoff: f64) -> Self {
        SpectralDensity {
            kind: SpectralKind::EffectiveOhmic,
            lambda,
            omega,
            gamma,
            cutoff,
        }
    }

    pub fn value(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "spectral density evaluated at negative frequency {w}"
            )));
        }
        Ok(self.eval_nonneg(w))
    }

    pub(crate) fn eval_nonneg(&self, w: f64) -> f64 {
        match self.kind {
            SpectralKind::Brownian => {
                let (l, o, g) = (self.lambda, self.omega, self.gamma);
                let a = w * w - o * o;
                let b = 2.0 * PI * g * o * w;
                4.0 * g * o * o * l * l * w / (a * a + b * b)
            }
            SpectralKind::Ohmic => self.gamma * w * (-w / self.cutoff).exp(),
            SpectralKind::EffectiveOhmic => {
                self.prefactor() * self.gamma * w * (-w / self.cutoff).exp()
            }
        }
    }

    fn prefactor(&self) -> f64 {
        4.0 * self.lambda * self.lambda / (self.omega * self.omega)
    }

    /// `J'(0)`, which fixes the zero-frequency limit of the bath rates.
    pub fn slope_at_zero(&self) -> f64 {
        match self.kind {
            SpectralKind::Brownian => {
                4.0 * self.gamma * self.lambda * self.lambda / (self.omega * self.omega)
            }
            SpectralKind::Ohmic => self.gamma,
            SpectralKind::EffectiveOhmic => self.prefactor() * self.gamma,
        }
    }
}

pub fn spectral_value(j: &SpectralDensity, w: f64) -> Result<f64> {
    j.value(w)
}

/// `diag(0, v - delta, v)` in the site basis.
pub fn bare_hamiltonian(p: &ModelParams) -> Result<HermitianMatrix> {
    p.validate()?;
    HermitianMatrix::from_real(Array2::from_diag(&array![0.0, p.v - p.delta, p.v]))
}

/// `S = (|1><2| + |1><3|)/sqrt(2) + h.c.`
pub fn coupling_operator() -> HermitianMatrix {
    let s = FRAC_1_SQRT_2;
    HermitianMatrix::from_real(array![[0.0, s, s], [s, 0.0, 0.0], [s, 0.0, 0.0]])
        .expect("coupling operator is symmetric")
}
