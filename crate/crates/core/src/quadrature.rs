//! Globally adaptive 7/15-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        kronrod += wk * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]`, splitting first at the supplied interior
/// `breakpoints` and then bisecting the worst segment until the summed error
/// estimate drops below `max(abs_tol, rel_tol * |I|)` or `max_segments` is hit.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Quadrature {
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    edges.extend(inner);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target || heap.len() >= max_segments {
            return Quadrature {
                value: total,
                error: err,
                evaluations,
                converged: err <= target,
            };
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, lo, hi);
            evaluations += 15;
            heap.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
}
