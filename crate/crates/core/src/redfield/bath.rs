use std::f64::consts::PI;

use crate::model::SpectralDensity;

/// Symmetric part of the half Fourier transform of the bath correlation
/// function, Lamb shift dropped:
///
/// ```text
/// G(w) = pi J(w) (n(w) + 1)     w > 0
/// G(w) = pi J(|w|) n(|w|)       w < 0
/// G(0) = pi T J'(0)
/// ```
///
/// With `temperature == 0` only emission survives.
pub fn halffourier_rate(j: &SpectralDensity, temperature: f64, w: f64) -> f64 {
    let a = w.abs();
    if a < 1e-12 {
        return if temperature > 0.0 {
            PI * temperature * j.slope_at_zero()
        } else {
            0.0
        };
    }
    let n = if temperature > 0.0 {
        1.0 / (a / temperature).exp_m1()
    } else {
        0.0
    };
    let jw = j.eval_nonneg(a);
    if w > 0.0 {
        PI * jw * (n + 1.0)
    } else {
        PI * jw * n
    }
}
