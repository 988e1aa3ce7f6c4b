//! Small dense linear-algebra helpers shared by the physics modules.
//!
//! Density matrices are vectorized by column stacking throughout the crate:
//! `vec(rho)[m + n * d] = rho[(m, n)]`, so `vec(A rho B) = (B^T kron A) vec(rho)`.

use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::Result;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn dagger(a: &ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub fn to_complex(a: &ArrayView2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(x, 0.0))
}

pub fn identity(d: usize) -> Array2<C64> {
    Array2::eye(d)
}

/// Kronecker product `a kron b`.
pub fn kron(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn max_abs(a: &ArrayView2<C64>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest elementwise deviation from Hermiticity, `max |A - A^dag|`.
pub fn hermiticity_error(a: &ArrayView2<C64>) -> f64 {
    let d = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(a: &ArrayView2<C64>) -> C64 {
    a.diag().sum()
}

/// Column-stacked vectorization.
pub fn vectorize(rho: &ArrayView2<C64>) -> Array1<C64> {
    let d = rho.nrows();
    let mut v = Array1::zeros(d * d);
    for n in 0..d {
        for m in 0..d {
            v[m + n * d] = rho[(m, n)];
        }
    }
    v
}

pub fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    let mut rho = Array2::zeros((d, d));
    for n in 0..d {
        for m in 0..d {
            rho[(m, n)] = v[m + n * d];
        }
    }
    rho
}

/// `(rho + rho^dag) / 2`
pub fn hermitian_part(rho: &ArrayView2<C64>) -> Array2<C64> {
    (rho.to_owned() + dagger(rho)) * C64::new(0.5, 0.0)
}

/// Smallest eigenvalue of the Hermitian part of `rho`.
pub fn min_eigenvalue(rho: &ArrayView2<C64>) -> Result<f64> {
    let h = hermitian_part(rho);
    let (e, _) = h.eigh(UPLO::Lower)?;
    Ok(e.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// `U^dag A U`
pub fn conjugate_by(a: &ArrayView2<C64>, u: &ArrayView2<C64>) -> Array2<C64> {
    dagger(u).dot(a).dot(u)
}

/// `log10`-uniform grid of `n` points from `t_min` to `t_max` inclusive.
pub fn log_space(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => {
            let (a, b) = (t_min.log10(), t_max.log10());
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        t_max
                    } else {
                        10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)
                    }
                })
                .collect()
        }
    }
}

pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn vectorization_is_column_stacked() {
        let rho = array![[ONE, C64::new(2.0, 0.0)], [C64::new(3.0, 0.0), C64::new(4.0, 0.0)]];
        let v = vectorize(&rho.view());
        assert_eq!(v[1], C64::new(3.0, 0.0));
        assert_eq!(v[2], C64::new(2.0, 0.0));
        assert_eq!(unvectorize(&v, 2), rho);
    }

    #[test]
    fn kron_matches_sandwich_identity() {
        // vec(A rho B) = (B^T kron A) vec(rho)
        let a = array![[ONE, C64::new(0.0, 1.0)], [C64::new(2.0, 0.0), ZERO]];
        let b = array![[C64::new(0.5, 0.0), ONE], [C64::new(0.0, -1.0), C64::new(3.0, 0.0)]];
        let rho = array![[C64::new(0.3, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.7, 0.0)]];
        let direct = vectorize(&a.dot(&rho).dot(&b).view());
        let sup = kron(&b.t(), &a.view()).dot(&vectorize(&rho.view()));
        for (x, y) in direct.iter().zip(sup.iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn log_space_endpoints() {
        let g = log_space(1e-2, 1e7, 400);
        assert_eq!(g.len(), 400);
        assert!((g[0] - 1e-2).abs() < 1e-16);
        assert_eq!(g[399], 1e7);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
