//! Quadrature building blocks: fixed Gauss-Legendre rules, an adaptive
//! Gauss-Kronrod 15-point integrator, and deterministic pairwise summation.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// 7-15 Gauss-Kronrod abscissae on [-1, 1] (positive half, Kronrod points).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// One 15-point Gauss-Kronrod panel over [a, b].
/// Returns (integral, error estimate, integral of |f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_k = fc * WGK15[7];
    let mut res_g = fc * WG7[3];
    let mut res_abs = res_k.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for (j, &x) in XGK15.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_k += WGK15[j] * (f1 + f2);
        res_abs += WGK15[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG7[j / 2] * (f1 + f2);
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK15[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let err = ((res_k - res_g) * half).abs();
    let res_asc = res_asc * half.abs();
    let scaled_err = if res_asc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / res_asc, 1.5);
        if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        }
    } else {
        err
    };

    (res_k * half, scaled_err, res_abs * half.abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// Bisects until the local error estimate fits within the local share of
/// `tol` (interpreted against the running |integral| as well), or the depth
/// cap is hit. Mild endpoint singularities are handled by the geometric
/// refinement this produces. Returns (value, error estimate).
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (whole, err0, _) = gk15(f, a, b);
    let scale = whole.abs().max(1e-300);
    if err0 <= tol * scale.max(1.0) * 1e-2 {
        return (whole, err0);
    }
    let mut value = 0.0;
    let mut err_total = 0.0;
    // explicit stack: (a, b, estimate, err, depth)
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = Vec::with_capacity(64);
    stack.push((a, b, whole, err0, 0));
    while let Some((lo, hi, est, err, depth)) = stack.pop() {
        let local_tol = tol * ((hi - lo) / (b - a)).abs().max(1e-300);
        let mid = 0.5 * (lo + hi);
        if err <= local_tol.max(tol * est.abs()) || depth >= 100 || mid <= lo || mid >= hi {
            value += est;
            err_total += err;
            continue;
        }
        let (v1, e1, _) = gk15(f, lo, mid);
        let (v2, e2, _) = gk15(f, mid, hi);
        stack.push((lo, mid, v1, e1, depth + 1));
        stack.push((mid, hi, v2, e2, depth + 1));
    }
    (value, err_total)
}

/// Fixed Gauss-Legendre rule of order `n` on [-1, 1].
///
/// Nodes are computed once by Newton iteration on the Legendre recurrence.
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
                }
                pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// The `(node, weight)` pairs on [-1, 1].
    pub fn nodes_weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrate `f` over [a, b] with the fixed rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut terms: Vec<f64> = Vec::with_capacity(self.nodes.len());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            terms.push(w * f(c + h * x));
        }
        h * pairwise_sum(&terms)
    }
}

/// Order-independent pairwise summation (deterministic for a fixed slice).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut s = 0.0;
        for x in xs {
            s += x;
        }
        s
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_exact() {
        let (v, e) = adaptive_gk(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-14, "v = {v}, err = {e}");
    }

    #[test]
    fn gk_sine() {
        let (v, _) = adaptive_gk(&|x: f64| x.sin(), 0.0, core::f64::consts::PI, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gk_endpoint_singularity() {
        // integral of x^{-1/2} over (0, 1] = 2; integrand blows up at 0
        let (v, _) = adaptive_gk(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-9, "v = {v}");
    }

    #[test]
    fn gl_exact_for_polynomials() {
        let gl = GaussLegendre::new(8);
        // degree 15 is integrated exactly by an 8-point rule
        let v = gl.integrate(0.0, 1.0, |x| 16.0 * libm::pow(x, 15.0));
        assert!((v - 1.0).abs() < 1e-13, "v = {v}");
        let v2 = gl.integrate(-2.0, 3.0, |x| x * x * x + 1.0);
        assert!((v2 - (81.0 / 4.0 - 16.0 / 4.0 + 5.0)).abs() < 1e-12);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-10);
    }
}
