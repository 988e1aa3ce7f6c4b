//! Brute-force reference implementations used to check the closed forms.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::linalg::{self, ONE, ZERO};

/// `exp(A)` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = a / C64::new(2f64.powi(s), 0.0);
    let mut term = linalg::identity(n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = term.dot(&scaled) / C64::new(k as f64, 0.0);
        sum += &term;
        if linalg::max_abs(&term.view()) < 1e-18 * linalg::max_abs(&sum.view()) {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    sum
}

/// Truncated annihilation operator, `a|n> = sqrt(n)|n-1>`.
pub fn annihilation(levels: usize) -> Array2<C64> {
    let mut a = Array2::zeros((levels, levels));
    for n in 1..levels {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `<0| exp(alpha (a^dag - a)) |0>` in a `levels`-dimensional Fock space.
pub fn vacuum_displacement(alpha: f64, levels: usize) -> f64 {
    let a = annihilation(levels);
    let gen = (linalg::dagger(&a.view()) - &a) * C64::new(alpha, 0.0);
    expm(&gen)[(0, 0)].re
}

/// Both eigenvalues of a real 2x2 matrix from the general LAPACK solver.
pub fn eig2(m: [[f64; 2]; 2]) -> [C64; 2] {
    use ndarray_linalg::EigVals;
    let a = ndarray::array![[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
    let ev = a.eigvals().expect("2x2 eigenvalues");
    [ev[0], ev[1]]
}

/// `exp(-i theta S)` for a Hermitian `S` through the dense exponential.
pub fn unitary(s: &Array2<C64>, theta: f64) -> Array2<C64> {
    expm(&(s * C64::new(0.0, -theta)))
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `diag(x)` as a complex matrix.
pub fn diag(x: &[f64]) -> Array2<C64> {
    let mut m = Array2::from_elem((x.len(), x.len()), ZERO);
    for (k, v) in x.iter().enumerate() {
        m[(k, k)] = ONE * *v;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn expm_of_diagonal_and_rotation() {
        let d = expm(&diag(&[0.0, 1.0, -2.0]));
        assert!((d[(1, 1)].re - 1f64.exp()).abs() < 1e-14);
        assert!((d[(2, 2)].re - (-2f64).exp()).abs() < 1e-15);
        // exp(-i theta sigma_x) = cos theta - i sin theta sigma_x
        let sx = array![[ZERO, ONE], [ONE, ZERO]];
        let u = unitary(&sx, 2.3);
        assert!((u[(0, 0)].re - 2.3f64.cos()).abs() < 1e-14);
        assert!((u[(0, 1)].im + 2.3f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn displacement_converges() {
        for &alpha in &[0.25, 0.5, 1.0, 2.0] {
            let got = vacuum_displacement(alpha, 60);
            assert!((got - (-alpha * alpha / 2.0).exp()).abs() < 1e-12, "{alpha}: {got}");
        }
    }
}
