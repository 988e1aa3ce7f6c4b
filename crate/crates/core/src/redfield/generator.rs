use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use super::bath::halffourier_rate;
use super::system::GeneratorKind;
use crate::error::{Error, Result};
use crate::linalg::{self, dagger, kron};
use crate::model::{HermitianMatrix, SpectralDensity};
use crate::rcpt::EffectiveSpectrum;
use crate::timescales::RateSet;

/// Dense superoperator acting on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Generator {
    pub dim: usize,
    pub matrix: Array2<C64>,
    pub kind: GeneratorKind,
}

impl Generator {
    /// `G vec(rho)` reshaped to a matrix.
    pub fn apply(&self, rho: &Array2<C64>) -> Result<Array2<C64>> {
        if rho.dim() != (self.dim, self.dim) {
            return Err(Error::Dimension {
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let v = self.matrix.dot(&linalg::vectorize(&rho.view()));
        Ok(linalg::unvectorize(&v, self.dim))
    }
}

/// Redfield generator (Lamb shift dropped) for coupling `S (x) B`:
///
/// ```text
/// d rho/dt = -i [H, rho] - [S, X rho - rho X^dag]
/// X_mj = S_mj G(w_j - w_m)      in the eigenbasis of H
/// ```
///
/// `G` is [`halffourier_rate`]. `X` is rotated back so the generator acts in
/// the basis `H` and `S` are given in; its spectrum is that of the eigenbasis
/// form.
pub fn build_redfield_generator(
    h: &HermitianMatrix,
    s: &HermitianMatrix,
    j: &SpectralDensity,
    temperature: f64,
) -> Result<Generator> {
    let d = h.dim();
    if s.dim() != d {
        return Err(Error::Dimension {
            expected: d,
            found: s.dim(),
        });
    }
    let (w, u) = h.entries().to_owned().eigh(UPLO::Lower)?;
    let s_eig = linalg::conjugate_by(&s.entries(), &u.view());
    let mut x_eig = Array2::zeros((d, d));
    for m in 0..d {
        for k in 0..d {
            let sk = s_eig[(m, k)];
            if sk.norm() > 0.0 {
                x_eig[(m, k)] = sk * halffourier_rate(j, temperature, w[k] - w[m]);
            }
        }
    }
    let x = u.dot(&x_eig).dot(&dagger(&u.view()));
    let hm = h.entries();
    let sm = s.entries();
    let sx = sm.dot(&x);
    let id = linalg::identity(d);
    let minus_i = C64::new(0.0, -1.0);
    let conj = |a: &Array2<C64>| a.mapv(|z| z.conj());

    let mut g = (kron(&id.view(), &hm) - kron(&hm.t(), &id.view())) * minus_i;
    g -= &kron(&id.view(), &sx.view());
    g -= &kron(&conj(&sx).view(), &id.view());
    g += &kron(&sm.t(), &x.view());
    g += &kron(&conj(&x).view(), &sm);
    Ok(Generator {
        dim: d,
        matrix: g,
        kind: GeneratorKind::Redfield,
    })
}

/// Fully secular Lindblad generator of the effective model in the
/// (E0, E-, E+) basis, with jumps `q|E+><E0|`, `p|E-><E0|`, `q|E0><E+|`,
/// `p|E0><E-|` at the golden-rule rates.
pub fn build_secular_lindblad_generator(spec: &EffectiveSpectrum, rates: &RateSet) -> Generator {
    let d = 3;
    let mut h = Array2::zeros((d, d));
    for (k, e) in [spec.e0, spec.e_minus, spec.e_plus].into_iter().enumerate() {
        h[(k, k)] = C64::new(e, 0.0);
    }
    let jump = |to: usize, from: usize, amp: f64| {
        let mut l = Array2::zeros((d, d));
        l[(to, from)] = C64::new(amp, 0.0);
        l
    };
    let channels = [
        (jump(2, 0, spec.q), rates.gamma_up_plus),
        (jump(1, 0, spec.p), rates.gamma_up_minus),
        (jump(0, 2, spec.q), rates.gamma_down_plus),
        (jump(0, 1, spec.p), rates.gamma_down_minus),
    ];
    let id = linalg::identity(d);
    let mut g = (kron(&id.view(), &h.view()) - kron(&h.t(), &id.view())) * C64::new(0.0, -1.0);
    for (l, rate) in channels {
        let ldl = dagger(&l.view()).dot(&l);
        let r = C64::new(rate, 0.0);
        let half = C64::new(0.5 * rate, 0.0);
        g += &(kron(&l.mapv(|z| z.conj()).view(), &l.view()) * r);
        g -= &(kron(&id.view(), &ldl.view()) * half);
        g -= &(kron(&ldl.t(), &id.view()) * half);
    }
    Generator {
        dim: d,
        matrix: g,
        kind: GeneratorKind::SecularLindblad,
    }
}

/// Trace functional as a row vector: `sum_k vec(rho)[k + k d]`.
pub(crate) fn trace_row(d: usize) -> Vec<usize> {
    (0..d).map(|k| k + k * d).collect()
}

/// `max_k |sum_i G[i, k]|` over trace rows, i.e. how far `tr(G rho)` can be
/// from zero for unit-norm `rho`.
pub fn trace_defect(g: &Generator) -> f64 {
    let rows = trace_row(g.dim);
    (0..g.matrix.ncols())
        .map(|k| rows.iter().map(|&r| g.matrix[(r, k)]).sum::<C64>().norm())
        .fold(0.0, f64::max)
}
