//! Secular-Lindblad relaxation of the effective model: golden-rule rates, the
//! 2x2 population rate matrix and its two relaxation times.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, SpectralDensity};
use crate::rcpt::EffectiveSpectrum;

/// `n(w) = 1 / (exp(w/T) - 1)`
pub fn bose_einstein(w: f64, temperature: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::param("w", w, "Bose-Einstein factor needs a positive frequency"));
    }
    if !(temperature > 0.0) {
        return Err(Error::param("temperature", temperature, "must be > 0"));
    }
    Ok(1.0 / (w / temperature).exp_m1())
}

/// Golden-rule rates of the effective model. `up` rates absorb from the bath
/// (E0 -> E+/-), `down` rates emit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSet {
    pub gamma_up_plus: f64,
    pub gamma_up_minus: f64,
    pub gamma_down_plus: f64,
    pub gamma_down_minus: f64,
    pub e_plus_0: f64,
    pub e_minus_0: f64,
}

/// `gamma_up = 2 pi J(E) n(E)`, `gamma_down = 2 pi J(E) (n(E) + 1)` with the
/// residual Ohmic density `(4 lambda^2 / omega^2) G w exp(-w / cutoff)`.
pub fn golden_rates(spec: &EffectiveSpectrum, p: &ModelParams) -> Result<RateSet> {
    let (ep, em) = (spec.e_plus_0(), spec.e_minus_0());
    if !(em > 0.0 && ep > 0.0) {
        return Err(Error::OutOfRegime(format!(
            "effective ground state is not the lowest level (E+0 = {ep}, E-0 = {em})"
        )));
    }
    let j = SpectralDensity::effective_ohmic(p.lambda, p.omega, p.gamma, p.cutoff);
    let pair = |e: f64| -> Result<(f64, f64)> {
        let n = bose_einstein(e, p.temperature)?;
        let g = 2.0 * PI * j.value(e)?;
        Ok((g * n, g * (n + 1.0)))
    };
    let (up_plus, down_plus) = pair(ep)?;
    let (up_minus, down_minus) = pair(em)?;
    Ok(RateSet {
        gamma_up_plus: up_plus,
        gamma_up_minus: up_minus,
        gamma_down_plus: down_plus,
        gamma_down_minus: down_minus,
        e_plus_0: ep,
        e_minus_0: em,
    })
}

/// `d/dt (rho_--, rho_++) = m (rho_--, rho_++) + d`, after eliminating the
/// ground population with the trace condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateMatrix {
    pub m: [[f64; 2]; 2],
    pub d: [f64; 2],
}

pub fn rate_matrix(rates: &RateSet, spec: &EffectiveSpectrum) -> RateMatrix {
    let (p2, q2) = (spec.p_sq(), spec.q_sq());
    let r = rates;
    RateMatrix {
        m: [
            [-p2 * (r.gamma_up_minus + r.gamma_down_minus), -p2 * r.gamma_up_minus],
            [-q2 * r.gamma_up_plus, -q2 * (r.gamma_up_plus + r.gamma_down_plus)],
        ],
        d: [p2 * r.gamma_up_minus, q2 * r.gamma_up_plus],
    }
}

impl RateMatrix {
    /// Eigenvalues `(fast, slow)`, both <= 0.
    ///
    /// Computed by one Jacobi rotation of the detailed-balance symmetrization
    /// `[[a, sqrt(bc)], [sqrt(bc), d]]` of `-m`, which keeps full relative
    /// accuracy in the small eigenvalue.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = -self.m[0][0];
        let b = -self.m[0][1];
        let c = -self.m[1][0];
        let d = -self.m[1][1];
        let s = (b * c).max(0.0).sqrt();
        let (x, y) = if s == 0.0 {
            (a, d)
        } else {
            let zeta = (d - a) / (2.0 * s);
            let t = if zeta == 0.0 {
                1.0
            } else {
                zeta.signum() / (zeta.abs() + zeta.hypot(1.0))
            };
            (a - t * s, d + t * s)
        };
        (-x.max(y), -x.min(y))
    }

    /// Solves `m rho + d = 0`.
    pub fn steady_state(&self) -> Result<[f64; 2]> {
        let [[a, b], [c, d]] = self.m;
        let det = a * d - b * c;
        if det == 0.0 {
            return Err(Error::MultipleSteadyStates { count: 2 });
        }
        let (r0, r1) = (-self.d[0], -self.d[1]);
        Ok([(d * r0 - b * r1) / det, (a * r1 - c * r0) / det])
    }

    /// Transition-rate matrix over (E0, E-, E+): entry `[i][j]` is the rate
    /// from `i` to `j`, diagonals make each row sum to zero.
    pub fn transition_rates(rates: &RateSet, spec: &EffectiveSpectrum) -> [[f64; 3]; 3] {
        let (p2, q2) = (spec.p_sq(), spec.q_sq());
        let to_minus = p2 * rates.gamma_up_minus;
        let to_plus = q2 * rates.gamma_up_plus;
        let from_minus = p2 * rates.gamma_down_minus;
        let from_plus = q2 * rates.gamma_down_plus;
        [
            [-(to_minus + to_plus), to_minus, to_plus],
            [from_minus, -from_minus, 0.0],
            [from_plus, 0.0, -from_plus],
        ]
    }
}

/// A relaxation time, or a sector that never relaxes (zero rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    Finite(f64),
    NonRelaxing,
}

impl Lifetime {
    fn from_rate(rate: f64) -> Lifetime {
        if rate > 0.0 {
            Lifetime::Finite(1.0 / rate)
        } else {
            Lifetime::NonRelaxing
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Lifetime::Finite(t) => Some(t),
            Lifetime::NonRelaxing => None,
        }
    }

    /// Finite value, or `f64::INFINITY` for a non-relaxing sector.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl std::fmt::Display for Lifetime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lifetime::Finite(t) => write!(f, "{t:e}"),
            Lifetime::NonRelaxing => f.write_str("inf"),
        }
    }
}

impl Serialize for Lifetime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lifetime::Finite(t) => s.serialize_f64(*t),
            Lifetime::NonRelaxing => s.serialize_str("non-relaxing"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimescalePair {
    /// Fast.
    pub tau1: Lifetime,
    /// Slow.
    pub tau2: Lifetime,
}

/// Closed-form relaxation times
///
/// ```text
/// tau_{1,2} = 2 / ([a + b] +- sqrt([a - b]^2 + 4 p^2 q^2 g_+0 g_-0))
/// a = p^2 (g_-0 + g_0-),  b = q^2 (g_+0 + g_0+)
/// ```
///
/// The slow root is evaluated as `(a + b + sqrt(...)) / (2 det m)`, with
/// `det m = p^2 q^2 (g_-0 g_0+ + g_0- g_+0 + g_0- g_0+)`, which is free of
/// cancellation. The result is cross-checked against `-1 / eig(m)` to 1e-10.
pub fn relaxation_timescales(
    rm: &RateMatrix,
    rates: &RateSet,
    spec: &EffectiveSpectrum,
) -> Result<TimescalePair> {
    let (p2, q2) = (spec.p_sq(), spec.q_sq());
    let r = rates;
    let a = p2 * (r.gamma_up_minus + r.gamma_down_minus);
    let b = q2 * (r.gamma_up_plus + r.gamma_down_plus);
    let cross = 4.0 * p2 * q2 * r.gamma_up_plus * r.gamma_up_minus;
    let root = ((a - b) * (a - b) + cross).sqrt();
    let det = p2
        * q2
        * (r.gamma_up_minus * r.gamma_down_plus
            + r.gamma_down_minus * r.gamma_up_plus
            + r.gamma_down_minus * r.gamma_down_plus);
    let fast_rate = 0.5 * (a + b + root);
    let slow_rate = if fast_rate > 0.0 { det / fast_rate } else { 0.0 };

    let (eig_fast, eig_slow) = rm.eigenvalues();
    for (closed, eig) in [(fast_rate, -eig_fast), (slow_rate, -eig_slow)] {
        let scale = closed.abs().max(eig.abs());
        if scale > 0.0 && (closed - eig).abs() > 1e-10 * scale {
            return Err(Error::Consistency(format!(
                "closed-form rate {closed:e} disagrees with rate-matrix eigenvalue {eig:e}"
            )));
        }
    }
    let (fast_rate, slow_rate) = (fast_rate.max(slow_rate), fast_rate.min(slow_rate));
    Ok(TimescalePair {
        tau1: Lifetime::from_rate(fast_rate),
        tau2: Lifetime::from_rate(slow_rate),
    })
}

/// Everything needed for the analytic timescales at one parameter point.
#[derive(Debug, Clone)]
pub struct AnalyticPoint {
    pub spectrum: EffectiveSpectrum,
    pub rates: RateSet,
    pub rate_matrix: RateMatrix,
    pub timescales: TimescalePair,
}

pub fn analyze(p: &ModelParams) -> Result<AnalyticPoint> {
    let spectrum = crate::rcpt::diagonalize_effective(p)?;
    let rates = golden_rates(&spectrum, p)?;
    let rm = rate_matrix(&rates, &spectrum);
    let timescales = relaxation_timescales(&rm, &rates, &spectrum)?;
    Ok(AnalyticPoint {
        spectrum,
        rates,
        rate_matrix: rm,
        timescales,
    })
}

fn coupling_factor(p: &ModelParams) -> f64 {
    let x = 2.0 * p.lambda / p.omega;
    x * x * p.gamma
}

/// `T -> 0`: `tau1 = 1 / (2 pi q^2 (2 lambda / omega)^2 G E+0)`, likewise
/// `tau2` with `p^2` and `E-0`.
pub fn tau_low_temperature(spec: &EffectiveSpectrum, p: &ModelParams) -> TimescalePair {
    let k = 2.0 * PI * coupling_factor(p);
    TimescalePair {
        tau1: Lifetime::from_rate(k * spec.q_sq() * spec.e_plus_0()),
        tau2: Lifetime::from_rate(k * spec.p_sq() * spec.e_minus_0()),
    }
}

/// High temperature: `tau_{1,2} = 1 / [2 pi G T (2 lambda / omega)^2 (1 +- (q^2 - p^2 / 2))]`.
pub fn tau_high_temperature(spec: &EffectiveSpectrum, p: &ModelParams) -> TimescalePair {
    let k = 2.0 * PI * p.temperature * coupling_factor(p);
    let x = spec.q_sq() - 0.5 * spec.p_sq();
    TimescalePair {
        tau1: Lifetime::from_rate(k * (1.0 + x)),
        tau2: Lifetime::from_rate(k * (1.0 - x)),
    }
}

/// Fits of the strong-coupling, high-temperature scaling of the lifetimes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    /// Slope of `ln tau2` against `lambda^2`; expected `1 / omega^2`.
    pub ln_tau2_vs_lambda_sq_slope: f64,
    /// Exponent of `tau1` in `lambda`; expected `-2`.
    pub ln_tau1_vs_ln_lambda_exponent: f64,
    /// `tau2(2 delta) / tau2(delta)` at each grid point; expected `1/4`.
    pub delta_doubling_ratio: Vec<f64>,
}

pub fn scaling_diagnostics(p: &ModelParams, lambda_grid: &[f64]) -> Result<ScalingReport> {
    if lambda_grid.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "scaling fit needs at least 4 grid points, got {}",
            lambda_grid.len()
        )));
    }
    let doubled = ModelParams {
        delta: 2.0 * p.delta,
        ..*p
    };
    let mut x_sq = Vec::new();
    let mut x_log = Vec::new();
    let mut ln_tau1 = Vec::new();
    let mut ln_tau2 = Vec::new();
    let mut ratio = Vec::new();
    for &lambda in lambda_grid {
        let base = analyze(&p.with_lambda(lambda))?.timescales;
        let dbl = analyze(&doubled.with_lambda(lambda))?.timescales;
        let (t1, t2, t2d) = (base.tau1.value(), base.tau2.value(), dbl.tau2.value());
        if !(t1.is_finite() && t2.is_finite() && t2d.is_finite()) {
            return Err(Error::OutOfRegime(format!(
                "non-relaxing sector at lambda = {lambda}"
            )));
        }
        x_sq.push(lambda * lambda);
        x_log.push(lambda.ln());
        ln_tau1.push(t1.ln());
        ln_tau2.push(t2.ln());
        ratio.push(t2d / t2);
    }
    Ok(ScalingReport {
        ln_tau2_vs_lambda_sq_slope: ls_slope(&x_sq, &ln_tau2),
        ln_tau1_vs_ln_lambda_exponent: ls_slope(&x_log, &ln_tau1),
        delta_doubling_ratio: ratio,
    })
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Smallest Bohr frequency of the effective model divided by its largest
/// channel rate. Large values mean the secular approximation is safe.
pub fn secular_ratio(spec: &EffectiveSpectrum, rates: &RateSet) -> f64 {
    let bohr = spec
        .e_minus_0()
        .min(spec.e_plus_0())
        .min(spec.e_plus - spec.e_minus);
    let fastest = (spec.p_sq() * rates.gamma_down_minus).max(spec.q_sq() * rates.gamma_down_plus);
    if fastest > 0.0 {
        bohr / fastest
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcpt::{diagonalize_effective, spectrum_from_blocks, EffectiveBlocks};
    use approx::assert_relative_eq;

    fn fig(lambda: f64, temperature: f64) -> ModelParams {
        ModelParams {
            v: 1.0,
            delta: 0.01,
            lambda,
            omega: 10.0,
            gamma: 0.05,
            cutoff: f64::INFINITY,
            temperature,
        }
    }

    #[test]
    fn bose_examples() {
        assert_eq!(bose_einstein(1.0, 1e-6).unwrap(), 0.0);
        assert_relative_eq!(bose_einstein(1.0, 1.0).unwrap(), 0.581_976_706_869_326_3, max_relative = 1e-14);
        // series: T/w - 1/2 + w/(12 T)
        let n = bose_einstein(1e-3, 1.0).unwrap();
        assert_relative_eq!(n, 999.5, max_relative = 1e-6);
        assert_relative_eq!(n, 999.500_083_333_332, max_relative = 1e-12);
        assert!(bose_einstein(0.0, 1.0).is_err());
        assert!(bose_einstein(-1.0, 1.0).is_err());
    }

    #[test]
    fn golden_rates_at_strong_coupling() {
        let p = fig(5.0, 1.0);
        let spec = diagonalize_effective(&p).unwrap();
        let r = golden_rates(&spec, &p).unwrap();
        assert_relative_eq!(r.gamma_down_plus, 1.076_215_690_086_908_2, max_relative = 1e-10);
        assert_relative_eq!(r.gamma_up_plus, 0.039_723_777_998_720_504, max_relative = 1e-10);
        assert_relative_eq!(r.gamma_down_minus, 0.418_432_760_368_909_9, max_relative = 1e-10);
        assert_relative_eq!(r.gamma_up_minus, 0.228_840_539_032_577_6, max_relative = 1e-10);
        for (got, want) in [
            (r.gamma_down_plus, 1.077),
            (r.gamma_up_plus, 0.0397),
            (r.gamma_down_minus, 0.418),
            (r.gamma_up_minus, 0.229),
        ] {
            assert!((got / want - 1.0).abs() < 0.01);
        }
        assert_relative_eq!(r.gamma_down_plus / r.gamma_up_plus, r.e_plus_0.exp(), max_relative = 1e-12);
        assert_relative_eq!(r.gamma_down_minus / r.gamma_up_minus, r.e_minus_0.exp(), max_relative = 1e-12);
    }

    #[test]
    fn golden_rates_cold_bath() {
        let p = fig(5.0, 1e-3);
        let spec = diagonalize_effective(&p).unwrap();
        let r = golden_rates(&spec, &p).unwrap();
        assert!(r.gamma_up_plus < 1e-200);
        assert!(r.gamma_up_minus < 1e-100);
        let j = 2.0 * PI * (2.0 * 5.0 / 10.0f64).powi(2) * 0.05;
        assert_relative_eq!(r.gamma_down_plus, j * r.e_plus_0, max_relative = 1e-14);
    }

    #[test]
    fn level_crossing_is_out_of_regime() {
        let b = EffectiveBlocks { e0: 0.0, l: -1.0, w: -0.1, h: -0.1 };
        let spec = spectrum_from_blocks(&b);
        assert!(matches!(golden_rates(&spec, &fig(1.0, 1.0)), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn dark_state_decouples() {
        let b = EffectiveBlocks { e0: -2.0, l: 0.0, w: 0.0, h: -1.0 };
        let spec = spectrum_from_blocks(&b);
        let p = fig(5.0, 1.0);
        let rates = golden_rates(&spec, &p).unwrap();
        let rm = rate_matrix(&rates, &spec);
        assert_eq!(rm.m[0], [0.0, 0.0]);
        assert_eq!(rm.d[0], 0.0);
        assert!(rm.d[1] > 0.0);
        let t = relaxation_timescales(&rm, &rates, &spec).unwrap();
        assert!(t.tau1.finite().is_some());
        assert_eq!(t.tau2, Lifetime::NonRelaxing);
        let low = tau_low_temperature(&spec, &p);
        assert!(low.tau1.finite().is_some());
        assert_eq!(low.tau2, Lifetime::NonRelaxing);
    }

    #[test]
    fn steady_state_is_gibbs() {
        for &(lambda, t) in &[(0.3, 0.5), (1.0, 1.0), (5.0, 1.0), (3.0, 5.0)] {
            let p = fig(lambda, t);
            let a = analyze(&p).unwrap();
            let [rm, rp] = a.rate_matrix.steady_state().unwrap();
            let r0 = 1.0 - rm - rp;
            let s = &a.spectrum;
            assert_relative_eq!(rm / r0, (-s.e_minus_0() / t).exp(), max_relative = 1e-10);
            assert_relative_eq!(rp / r0, (-s.e_plus_0() / t).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn transition_rows_sum_to_zero() {
        let p = fig(2.0, 1.0);
        let a = analyze(&p).unwrap();
        let w = RateMatrix::transition_rates(&a.rates, &a.spectrum);
        for row in w {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn strong_coupling_timescales() {
        let a = analyze(&fig(5.0, 1.0)).unwrap();
        let t1 = a.timescales.tau1.value();
        let t2 = a.timescales.tau2.value();
        // 40-digit mpmath evaluation of the closed form, no cutoff
        assert_relative_eq!(t1, 0.896_108_335_835_060_52, max_relative = 1e-9);
        assert_relative_eq!(t2, 583_995.192_718_629_85, max_relative = 1e-9);
        assert!((t1 / 0.896 - 1.0).abs() < 0.02);
    }

    // Brute-force 2x2 eigenvalues via the characteristic polynomial in f64.
    fn char_poly_eigs(m: [[f64; 2]; 2]) -> (f64, f64) {
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = (tr * tr - 4.0 * det).sqrt();
        ((tr - disc) / 2.0, (tr + disc) / 2.0)
    }

    #[test]
    fn symmetric_limit() {
        // p^2 = q^2 = 1/2, every rate equal to g
        let b = EffectiveBlocks { e0: -1.0, l: 0.0, w: -0.5, h: 0.0 };
        let spec = spectrum_from_blocks(&b);
        let g = 0.3;
        let rates = RateSet {
            gamma_up_plus: g,
            gamma_up_minus: g,
            gamma_down_plus: g,
            gamma_down_minus: g,
            e_plus_0: 1.5,
            e_minus_0: 0.5,
        };
        let rm = rate_matrix(&rates, &spec);
        let t = relaxation_timescales(&rm, &rates, &spec).unwrap();
        assert_relative_eq!(t.tau1.value(), 2.0 / (3.0 * g), max_relative = 1e-14);
        assert_relative_eq!(t.tau2.value(), 2.0 / g, max_relative = 1e-14);
        let (fast, slow) = char_poly_eigs(rm.m);
        assert_relative_eq!(-1.0 / fast, 2.0 / (3.0 * g), max_relative = 1e-14);
        assert_relative_eq!(-1.0 / slow, 2.0 / g, max_relative = 1e-14);
    }

    #[test]
    fn rate_eigenvalues_match_lapack() {
        for lambda in [0.1, 0.5, 1.0, 2.0, 3.0] {
            for delta in [0.01, 0.1, 0.5] {
                let a = analyze(&fig(lambda, 1.0).with_delta(delta)).unwrap();
                let (fast, slow) = a.rate_matrix.eigenvalues();
                let mut ev: Vec<f64> = crate::oracle::eig2(a.rate_matrix.m).iter().map(|z| z.re).collect();
                ev.sort_by(f64::total_cmp);
                assert_relative_eq!(fast, ev[0], max_relative = 1e-12);
                // LAPACK's small eigenvalue carries an absolute error of order eps * |fast|
                assert!((slow - ev[1]).abs() < 1e-13 * fast.abs(), "lambda={lambda} delta={delta}");
            }
        }
    }

    #[test]
    fn weak_coupling_same_order() {
        let p = fig(0.1, 1.0).with_delta(0.5);
        let t = analyze(&p).unwrap().timescales;
        let ratio = t.tau2.value() / t.tau1.value();
        assert!((1.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn low_temperature_limit() {
        let p = fig(3.0, 0.1);
        let a = analyze(&p).unwrap();
        let low = tau_low_temperature(&a.spectrum, &p);
        assert!((low.tau1.value() / a.timescales.tau1.value() - 1.0).abs() < 0.1);
        assert!((low.tau2.value() / a.timescales.tau2.value() - 1.0).abs() < 0.1);
        let s = &a.spectrum;
        assert_relative_eq!(
            low.tau2.value() / low.tau1.value(),
            s.q_sq() * s.e_plus_0() / (s.p_sq() * s.e_minus_0()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn high_temperature_limit() {
        let b = EffectiveBlocks { e0: -1.0, l: 0.0, w: -0.5, h: 0.0 };
        let spec = spectrum_from_blocks(&b);
        let p = fig(1.0, 5.0);
        let t = tau_high_temperature(&spec, &p);
        assert_relative_eq!(t.tau2.value() / t.tau1.value(), 5.0 / 3.0, max_relative = 1e-12);
        let t10 = tau_high_temperature(&spec, &p.with_temperature(10.0));
        assert_relative_eq!(t.tau1.value() / t10.tau1.value(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(t.tau2.value() / t10.tau2.value(), 2.0, max_relative = 1e-14);
        for k in 0..=8 {
            let p = fig(1.0 + 0.5 * k as f64, 5.0);
            let a = analyze(&p).unwrap();
            let h = tau_high_temperature(&a.spectrum, &p);
            assert!((h.tau1.value() / a.timescales.tau1.value() - 1.0).abs() < 0.15);
            assert!((h.tau2.value() / a.timescales.tau2.value() - 1.0).abs() < 0.15);
        }
    }

    #[test]
    fn scaling_fit() {
        // 40-digit mpmath evaluation of the closed form at T = 5, cutoff 1000
        let p = ModelParams { cutoff: 1000.0, ..fig(8.0, 5.0) };
        let grid = [6.0, 7.0, 8.0, 9.0, 10.0];
        let rep = scaling_diagnostics(&p, &grid).unwrap();
        assert_relative_eq!(rep.ln_tau2_vs_lambda_sq_slope, 0.023_407_024_665_630_306, max_relative = 1e-8);
        assert_relative_eq!(rep.ln_tau1_vs_ln_lambda_exponent, -2.446_390_872_774_054, max_relative = 1e-8);
        assert!((rep.delta_doubling_ratio[2] / 0.25 - 1.0).abs() < 0.01, "{rep:?}");
        // the T (omega / lambda)^2 law is reached once T exceeds E+0 on the grid
        let hot = scaling_diagnostics(&p.with_temperature(20.0), &grid).unwrap();
        assert_relative_eq!(hot.ln_tau1_vs_ln_lambda_exponent, -2.024_127_041_268_085_4, max_relative = 1e-8);
        assert!(scaling_diagnostics(&p, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn degenerate_excited_states_separate_timescales() {
        let p = ModelParams { cutoff: 1000.0, ..fig(0.05, 1.0) }.with_delta(1e-4);
        let t = analyze(&p).unwrap().timescales;
        // mpmath oracle: 34.893...
        assert_relative_eq!(t.tau2.value() / t.tau1.value(), 34.893_493_893_348_4, max_relative = 1e-8);
    }
}
