//! Reaction-coordinate + polaron mapping of the three-level model.
//!
//! The RC mode of frequency `omega` is split off the Brownian bath, the
//! polaron unitary `exp[(lambda/omega)(a^dag - a) S]` is applied, and the
//! result is projected onto the RC vacuum. The vacuum expectation values are
//! used in closed form: `<0|cos theta|0> = exp(-lambda^2 / 2 omega^2)` and
//! `<0|cos 2 theta|0> = exp(-2 lambda^2 / omega^2)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ndarray::{array, Array2};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{HermitianMatrix, ModelParams, SpectralDensity, SpectralKind};
use crate::quadrature;

/// Entries of the effective Hamiltonian
/// `[[e0, 0, 0], [0, l + w, h], [0, h, l - w]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveBlocks {
    /// Ground level.
    pub e0: f64,
    /// Midpoint of the excited pair.
    pub l: f64,
    /// Half-splitting of the excited pair, suppressed as `exp(-lambda^2 / 2 omega^2)`.
    pub w: f64,
    /// Bath-induced tunnelling between the excited sites.
    pub h: f64,
}

/// Analytic eigen-decomposition of the effective Hamiltonian.
///
/// `basis` holds the eigenvectors as columns in the order
/// (|E0>, |E->, |E+>) with `e_minus = l - sqrt(w^2 + h^2)` and
/// `e_plus = l + sqrt(w^2 + h^2)`:
///
/// ```text
/// |E0> = (1, 0, 0)
/// |E-> = (0, cos(phi/2), sin(phi/2))
/// |E+> = (0, sin(phi/2), -cos(phi/2))
/// ```
///
/// `p = sin(pi/4 - phi/2)` and `q = sin(pi/4 + phi/2)` are the channel
/// amplitudes of the rate model: `p` dresses the E0<->E- channel, `q` the
/// E0<->E+ channel. For the eigenvectors above, `basis^T S basis` is
/// `[[0, q, -p], [q, 0, 0], [-p, 0, 0]]`, i.e. the geometric overlap of
/// `S|E0>` with |E-> is `q`. The rate model keeps the channel assignment
/// stated first; see `coupling_in_eigenbasis`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSpectrum {
    pub e0: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub phi: f64,
    pub p: f64,
    pub q: f64,
    pub basis: Array2<f64>,
}

impl EffectiveSpectrum {
    pub fn e_plus_0(&self) -> f64 {
        self.e_plus - self.e0
    }

    pub fn e_minus_0(&self) -> f64 {
        self.e_minus - self.e0
    }

    pub fn p_sq(&self) -> f64 {
        self.p * self.p
    }

    pub fn q_sq(&self) -> f64 {
        self.q * self.q
    }

    /// `diag(e0, e_minus, e_plus)`
    pub fn hamiltonian_in_eigenbasis(&self) -> HermitianMatrix {
        HermitianMatrix::from_real(Array2::from_diag(&array![self.e0, self.e_minus, self.e_plus]))
            .expect("diagonal")
    }

    /// System-bath operator of the effective model in the (E0, E-, E+)
    /// ordering: `[[0, p, q], [p, 0, 0], [q, 0, 0]]`.
    pub fn coupling_in_eigenbasis(&self) -> HermitianMatrix {
        let (p, q) = (self.p, self.q);
        HermitianMatrix::from_real(array![[0.0, p, q], [p, 0.0, 0.0], [q, 0.0, 0.0]])
            .expect("symmetric")
    }

    /// `basis diag(e0, e_minus, e_plus) basis^T`
    pub fn reconstruct(&self) -> Array2<f64> {
        let d = Array2::from_diag(&array![self.e0, self.e_minus, self.e_plus]);
        self.basis.dot(&d).dot(&self.basis.t())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcEstimate {
    pub lambda: f64,
    pub omega: f64,
    /// Zero spectral weight; `omega` is then meaningless.
    pub degenerate: bool,
    /// Summed quadrature error estimate of the two moments.
    pub residual: f64,
}

/// Moment estimates `lambda^2 = (1/W) int w J`, `W^2 = int w^3 J / int w J`
/// over `[0, w_max]`.
///
/// Recovers the nominal `(lambda, omega)` only for a narrow Brownian peak; the
/// cubic moment picks up the `1/w^3` tail of finite-width peaks linearly in
/// `w_max`.
pub fn rc_parameters(j: &SpectralDensity, w_max: f64) -> Result<RcEstimate> {
    if j.kind != SpectralKind::Brownian {
        return Err(Error::InvalidInput(format!(
            "RC parameters are defined from a Brownian spectral density, got {:?}",
            j.kind
        )));
    }
    if !(w_max >= 10.0 * j.omega) {
        return Err(Error::param("w_max", w_max, "must be at least 10 x omega"));
    }
    let hw = PI * j.gamma * j.omega;
    let mut breaks = vec![j.omega];
    for k in [1.0, 10.0, 100.0] {
        breaks.push(j.omega - k * hw);
        breaks.push(j.omega + k * hw);
    }
    let moment = |power: i32| {
        quadrature::integrate(
            |w| w.powi(power) * j.eval_nonneg(w),
            0.0,
            w_max,
            &breaks,
            1e-300,
            1e-11,
            20_000,
        )
    };
    let m1 = moment(1);
    let m3 = moment(3);
    let residual = m1.error + m3.error;
    if !(m1.converged && m3.converged) {
        return Err(Error::Numerical(format!(
            "moment quadrature did not converge (residual {residual:e})"
        )));
    }
    if m1.value <= 0.0 {
        return Ok(RcEstimate {
            lambda: 0.0,
            omega: j.omega,
            degenerate: true,
            residual,
        });
    }
    let omega = (m3.value / m1.value).sqrt();
    Ok(RcEstimate {
        lambda: (m1.value / omega).sqrt(),
        omega,
        degenerate: false,
        residual,
    })
}

/// `exp(i theta S)` for a traceless Hermitian 3x3 `S` via the closed-form
/// three-term SU(3) sum. `S` is first normalized to `tr S^2 = 2`; for
/// `det S = 0` the sum collapses to `I - S^2 + cos(theta) S^2 + i sin(theta) S`.
pub fn su3_exponential(s: &HermitianMatrix, theta: f64) -> Result<Array2<C64>> {
    if s.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            found: s.dim(),
        });
    }
    let m = s.entries();
    let scale = 1.0 + linalg::max_abs(&m);
    if linalg::trace(&m).norm() > 1e-12 * scale {
        return Err(Error::InvalidInput("SU(3) exponential needs a traceless generator".into()));
    }
    let sq = m.dot(&m);
    let norm = (linalg::trace(&sq.view()).re / 2.0).sqrt();
    let eye = linalg::identity(3);
    if norm == 0.0 {
        return Ok(eye);
    }
    let sn = m.mapv(|z| z / norm);
    let sn2 = sq.mapv(|z| z / (norm * norm));
    let theta = theta * norm;
    let det = det3(&sn).re;

    if det.abs() <= 1e-10 {
        let (c, si) = (theta.cos(), theta.sin());
        return Ok(&eye - &sn2 + sn2.mapv(|z| z * c) + sn.mapv(|z| z * C64::new(0.0, si)));
    }

    let arg = (1.5 * 3f64.sqrt() * det).clamp(-1.0, 1.0);
    let big_phi = (arg.acos() - FRAC_PI_2) / 3.0;
    let two_over_root3 = 2.0 / 3f64.sqrt();
    let mut out = Array2::<C64>::zeros((3, 3));
    for k in 0..3 {
        let a = big_phi + 2.0 * PI * k as f64 / 3.0;
        let denom = 1.0 - 2.0 * (2.0 * a).cos();
        if denom.abs() < 1e-12 {
            return Err(Error::Numerical(
                "degenerate generator spectrum in SU(3) exponential".into(),
            ));
        }
        let proj = &sn2 + &sn.mapv(|z| z * (two_over_root3 * a.sin()))
            - &eye.mapv(|z| z * ((1.0 + 2.0 * (2.0 * a).cos()) / 3.0));
        let phase = C64::new(0.0, two_over_root3 * theta * a.sin()).exp() / denom;
        out = out + proj.mapv(|z| z * phase);
    }
    Ok(out)
}

fn det3(m: &Array2<C64>) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// `<0| exp(alpha (a^dag - a)) |0> = exp(-alpha^2 / 2)`
pub fn vacuum_displacement_moment(alpha: f64) -> f64 {
    (-0.5 * alpha * alpha).exp()
}

pub fn effective_blocks(p: &ModelParams) -> Result<EffectiveBlocks> {
    p.validate()?;
    let x = p.lambda * p.lambda / (p.omega * p.omega);
    // <0|cos 2theta|0> and 1 - <0|cos 2theta|0>
    let c2 = (-2.0 * x).exp();
    let one_minus_c2 = -(-2.0 * x).exp_m1();
    let shift = p.lambda * p.lambda / p.omega;
    let s = 2.0 * p.v - p.delta;
    Ok(EffectiveBlocks {
        e0: s / 4.0 * one_minus_c2 - shift,
        l: s * (3.0 + c2) / 8.0 - shift / 2.0,
        w: -p.delta * vacuum_displacement_moment(p.lambda / p.omega) / 2.0,
        h: -s * one_minus_c2 / 8.0 - shift / 2.0,
    })
}

pub fn effective_hamiltonian(p: &ModelParams) -> Result<HermitianMatrix> {
    let b = effective_blocks(p)?;
    HermitianMatrix::from_real(array![
        [b.e0, 0.0, 0.0],
        [0.0, b.l + b.w, b.h],
        [0.0, b.h, b.l - b.w]
    ])
}

pub fn diagonalize_effective(p: &ModelParams) -> Result<EffectiveSpectrum> {
    Ok(spectrum_from_blocks(&effective_blocks(p)?))
}

/// Both `h` and `w` are non-positive, so the mixing angle is taken in
/// `[0, pi/2]`: `phi = atan(|h| / |w|)`, with `phi = pi/2` when `w = 0`.
pub fn spectrum_from_blocks(b: &EffectiveBlocks) -> EffectiveSpectrum {
    let r = b.w.hypot(b.h);
    let phi = if b.w == 0.0 {
        FRAC_PI_2
    } else {
        (b.h.abs() / b.w.abs()).atan()
    };
    let (s, c) = (0.5 * phi).sin_cos();
    let basis = array![[1.0, 0.0, 0.0], [0.0, c, s], [0.0, s, -c]];
    let (p, q) = if b.w == 0.0 {
        (0.0, 1.0)
    } else {
        ((FRAC_PI_4 - 0.5 * phi).sin(), (FRAC_PI_4 + 0.5 * phi).sin())
    };
    EffectiveSpectrum {
        e0: b.e0,
        e_minus: b.l - r,
        e_plus: b.l + r,
        phi,
        p,
        q,
        basis,
    }
}

/// Strong-coupling asymptotics
/// `p^2 ~ omega^2 delta^2 exp(-lambda^2/omega^2) / (4 lambda^4)`, `q^2 = 1 - p^2`.
/// Accurate once `h/w` is large (about `lambda > 0.5` for `delta = 0.01`,
/// `omega = 10`).
pub fn pq_asymptotic(p: &ModelParams) -> Result<(f64, f64)> {
    p.validate()?;
    if p.lambda == 0.0 {
        return Err(Error::param("lambda", 0.0, "asymptotic p^2 is singular at lambda = 0"));
    }
    let l2 = p.lambda * p.lambda;
    let p_sq = p.omega * p.omega * p.delta * p.delta * (-l2 / (p.omega * p.omega)).exp()
        / (4.0 * l2 * l2);
    Ok((p_sq, 1.0 - p_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_hamiltonian, coupling_operator};
    use crate::linalg::ONE;
    use approx::assert_relative_eq;

    fn fig_params(lambda: f64) -> ModelParams {
        ModelParams {
            v: 1.0,
            delta: 0.01,
            lambda,
            omega: 10.0,
            gamma: 0.05,
            cutoff: 1000.0,
            temperature: 1.0,
        }
    }

    // Eqs. for E0, h, l, w written out independently of `effective_blocks`.
    fn blocks_oracle(v: f64, d: f64, om: f64, lam: f64) -> (f64, f64, f64, f64) {
        let e2 = (-2.0 * lam * lam / (om * om)).exp();
        let eh = (-lam * lam / (2.0 * om * om)).exp();
        let e0 = (2.0 * v - d) / 4.0 * (1.0 - e2) - lam * lam / om;
        let l = (2.0 * v - d) * (3.0 + e2) / 8.0 - lam * lam / (2.0 * om);
        let w = -d * eh / 2.0;
        let h = (-2.0 * v + d) * (1.0 - e2) / 8.0 - lam * lam / (2.0 * om);
        (e0, l, w, h)
    }

    #[test]
    fn blocks_at_zero_coupling() {
        let b = effective_blocks(&fig_params(0.0)).unwrap();
        assert_eq!(b.e0, 0.0);
        assert_eq!(b.h, 0.0);
        assert_eq!(b.w, -0.005);
        assert_relative_eq!(b.l, 1.0 - 0.005, max_relative = 1e-15);
    }

    #[test]
    fn blocks_at_strong_coupling() {
        let b = effective_blocks(&fig_params(5.0)).unwrap();
        // frozen from an independent float64 evaluation
        assert_relative_eq!(b.e0, -2.304_249_003_207_035, max_relative = 1e-12);
        assert_relative_eq!(b.l, -0.352_875_498_396_482_5, max_relative = 1e-12);
        assert_relative_eq!(b.w, -0.004_412_484_512_922_977, max_relative = 1e-12);
        assert_relative_eq!(b.h, -1.347_875_498_396_482_5, max_relative = 1e-12);
        let (e0, l, w, h) = blocks_oracle(1.0, 0.01, 10.0, 5.0);
        assert_relative_eq!(b.e0, e0, max_relative = 1e-4);
        assert_relative_eq!(b.l, l, max_relative = 1e-4);
        assert_relative_eq!(b.w, w, max_relative = 1e-4);
        assert_relative_eq!(b.h, h, max_relative = 1e-4);
        // h is dominated by -lambda^2 / (2 omega)
        assert!((b.h / -1.25 - 1.0).abs() < 0.08);
    }

    #[test]
    fn h_and_w_nonpositive_on_sweep() {
        for &d in &[1e-4, 0.01, 0.3, 0.9] {
            for k in 0..=200 {
                let b = effective_blocks(&fig_params(0.1 * k as f64).with_delta(d)).unwrap();
                assert!(b.h <= 0.0 && b.w <= 0.0);
            }
        }
    }

    #[test]
    fn effective_hamiltonian_reduces_to_bare() {
        let p = fig_params(0.0);
        let h = effective_hamiltonian(&p).unwrap().into_inner();
        let h0 = bare_hamiltonian(&p).unwrap().into_inner();
        for (a, b) in h.iter().zip(h0.iter()) {
            assert!((a - b).norm() <= 2.0 * f64::EPSILON);
        }
    }

    #[test]
    fn effective_hamiltonian_is_block_diagonal() {
        for k in 0..=20 {
            let h = effective_hamiltonian(&fig_params(0.5 * k as f64)).unwrap().into_inner();
            for j in 1..3 {
                assert_eq!(h[(0, j)], linalg::ZERO);
                assert_eq!(h[(j, 0)], linalg::ZERO);
            }
        }
    }

    #[test]
    fn spectrum_at_zero_coupling() {
        let s = diagonalize_effective(&fig_params(0.0)).unwrap();
        assert_eq!(s.phi, 0.0);
        assert_relative_eq!(s.p, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(s.q, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(s.e_minus, 0.99, max_relative = 1e-14);
        assert_relative_eq!(s.e_plus, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn spectrum_at_strong_coupling() {
        let s = diagonalize_effective(&fig_params(5.0)).unwrap();
        assert_relative_eq!(s.e0, -2.304_249_003_207_035, max_relative = 1e-10);
        assert_relative_eq!(s.e_minus, -1.700_758_219_258_035_3, max_relative = 1e-10);
        assert_relative_eq!(s.e_plus, 0.995_007_222_465_070_5, max_relative = 1e-10);
        // arctan oracle on the blocks
        let (_, _, w, h) = blocks_oracle(1.0, 0.01, 10.0, 5.0);
        let phi = (h / w).atan();
        let p2 = (FRAC_PI_4 - phi / 2.0).sin().powi(2);
        assert_relative_eq!(s.p_sq(), p2, max_relative = 1e-10);
        assert_relative_eq!(s.p_sq(), 2.679_188_982_319_290_5e-6, max_relative = 1e-8);
        assert!((s.p_sq() / 2.7e-6 - 1.0).abs() < 0.05);
        assert_relative_eq!(s.p_sq() + s.q_sq(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn p_decays_monotonically_at_strong_coupling() {
        let mut last = f64::INFINITY;
        for k in 5..=100 {
            let s = diagonalize_effective(&fig_params(0.1 * k as f64)).unwrap();
            assert!(s.p < last);
            last = s.p;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn zero_w_limit() {
        let b = EffectiveBlocks { e0: -1.0, l: 0.0, w: 0.0, h: -0.5 };
        let s = spectrum_from_blocks(&b);
        assert_eq!(s.phi, FRAC_PI_2);
        assert_eq!((s.p, s.q), (0.0, 1.0));
    }

    #[test]
    fn basis_reconstructs_and_transforms_coupling() {
        for k in 0..=20 {
            let p = fig_params(0.5 * k as f64).with_delta(0.1);
            let s = diagonalize_effective(&p).unwrap();
            let h = effective_hamiltonian(&p).unwrap().into_inner().mapv(|z| z.re);
            let rec = s.reconstruct();
            for (a, b) in rec.iter().zip(h.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
            let ptp = s.basis.t().dot(&s.basis);
            for ((i, j), x) in ptp.indexed_iter() {
                assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
            assert!(s.basis[(1, 2)] >= 0.0);
            let st = coupling_operator().into_inner().mapv(|z| z.re);
            let se = s.basis.t().dot(&st).dot(&s.basis);
            let expect = array![[0.0, s.q, -s.p], [s.q, 0.0, 0.0], [-s.p, 0.0, 0.0]];
            for (a, b) in se.iter().zip(expect.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymptotic_pq() {
        let (p2, q2) = pq_asymptotic(&fig_params(5.0)).unwrap();
        assert_relative_eq!(p2, 3.115_203_132_285_619_7e-6, max_relative = 1e-12);
        assert_eq!(p2 + q2, 1.0);
        let exact = diagonalize_effective(&fig_params(5.0)).unwrap().p_sq();
        assert!(((p2 - exact) / exact).abs() < 0.2);
        assert!(pq_asymptotic(&fig_params(0.0)).is_err());
    }

    #[test]
    fn su3_special_angles() {
        let s = coupling_operator();
        let u0 = su3_exponential(&s, 0.0).unwrap();
        for ((i, j), z) in u0.indexed_iter() {
            assert!((z - if i == j { ONE } else { linalg::ZERO }).norm() < 1e-15);
        }
        let upi = su3_exponential(&s, PI).unwrap();
        let m = s.entries();
        let expect = linalg::identity(3) - m.dot(&m).mapv(|z| z * 2.0);
        for (a, b) in upi.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn su3_matches_frozen_expm() {
        // scipy.linalg.expm(1j * 0.7 * S)
        let u = su3_exponential(&coupling_operator(), 0.7).unwrap();
        let c7 = 0.7f64.cos();
        let s7 = 0.7f64.sin() / 2f64.sqrt();
        assert!((u[(0, 0)] - C64::new(0.764_842_187_284_488_5, 0.0)).norm() < 1e-12);
        assert!((u[(0, 0)].re - c7).abs() < 1e-15);
        assert!((u[(0, 1)] - C64::new(0.0, s7)).norm() < 1e-15);
        assert!((u[(1, 1)].re - 0.882_421_093_642_244_2).abs() < 1e-12);
        assert!((u[(1, 2)].re + 0.117_578_906_357_755_8).abs() < 1e-12);
    }

    #[test]
    fn su3_general_branch_agrees_with_special_branch() {
        // A traceless Hermitian generator with det != 0.
        let g = HermitianMatrix::new(array![
            [C64::new(0.3, 0.0), C64::new(0.2, 0.1), C64::new(0.0, 0.0)],
            [C64::new(0.2, -0.1), C64::new(-0.5, 0.0), C64::new(0.4, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.4, 0.0), C64::new(0.2, 0.0)]
        ])
        .unwrap();
        let u = su3_exponential(&g, 1.3).unwrap();
        let uu = u.dot(&linalg::dagger(&u.view()));
        for ((i, j), z) in uu.indexed_iter() {
            assert!((z - if i == j { ONE } else { linalg::ZERO }).norm() < 1e-12);
        }
        let not_traceless = HermitianMatrix::from_real(Array2::eye(3)).unwrap();
        assert!(su3_exponential(&not_traceless, 1.0).is_err());
    }

    #[test]
    fn vacuum_moments() {
        assert_eq!(vacuum_displacement_moment(0.0), 1.0);
        assert_relative_eq!(vacuum_displacement_moment(1.0), 0.606_530_659_712_633_4, max_relative = 1e-14);
        assert_relative_eq!(vacuum_displacement_moment(2.0), 0.135_335_283_236_612_7, max_relative = 1e-14);
    }

    #[test]
    fn rc_parameters_narrow_peak() {
        let j = SpectralDensity::brownian(1.0, 10.0, 0.001);
        let est = rc_parameters(&j, 100.0).unwrap();
        assert!(!est.degenerate);
        // high-resolution quadrature oracle (scipy QUADPACK) on [0, 100]
        assert_relative_eq!(est.lambda, 0.990_144_475_326_439_6, max_relative = 1e-6);
        assert_relative_eq!(est.omega, 10.195_955_731_005_471, max_relative = 1e-6);
        assert!((est.lambda - 1.0).abs() < 0.01);
        // the cubic moment carries the 1/w^3 tail: ~2% high at w_max = 10 omega
        assert!((est.omega - 10.0).abs() < 0.02 * 10.0);
    }

    #[test]
    fn rc_parameters_finite_width_and_errors() {
        let est = rc_parameters(&SpectralDensity::brownian(1.0, 10.0, 0.05), 100.0).unwrap();
        assert_relative_eq!(est.omega, 17.093_607_094_061_56, max_relative = 1e-6);
        let zero = rc_parameters(&SpectralDensity::brownian(0.0, 10.0, 0.05), 100.0).unwrap();
        assert!(zero.degenerate);
        assert_eq!(zero.lambda, 0.0);
        assert!(rc_parameters(&SpectralDensity::ohmic(0.05, 1000.0), 100.0).is_err());
        assert!(rc_parameters(&SpectralDensity::brownian(1.0, 10.0, 0.05), 50.0).is_err());
    }
}
