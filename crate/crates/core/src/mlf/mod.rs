//! Delayed Mittag-Leffler kernels and the classical Mittag-Leffler function:
//! inverse-Laplace evaluation, decay-rate profiles, and the L1 norm that
//! feeds the stability certificate.

mod classical;
mod kernel;

pub use classical::{eval_classical_ml, eval_classical_ml_derivative, taylor_coeff};
pub use kernel::{
    eval_kernel, eval_kernel_contour, eval_kernel_contour_full, eval_kernel_grid, BetaKind,
    ContourSpec, KernelQuery,
};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::ProblemParams;
use crate::quad::adaptive_gk;

/// One row of a kernel decay profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint {
    pub t: f64,
    pub kernel_abs: f64,
    /// `|E| t^alpha` for `beta = 1`, `|E| t^{alpha+1}` for `beta = alpha`.
    /// Bounded in `t` under the `a <= b < -a` criterion.
    pub compensated: f64,
}

/// Kernel magnitude and compensated decay values over `t_grid`, which must
/// lie in `[1, inf)`. Requires `a <= b < -a` (the regime where the algebraic
/// decay rates hold).
pub fn decay_profile(
    p: &ProblemParams,
    beta: BetaKind,
    t_grid: &[f64],
) -> Result<Vec<DecayPoint>> {
    if !p.satisfies_criterion() {
        return Err(Error::NotInCriterionRegion { a: p.a, b: p.b });
    }
    let rate = match beta {
        BetaKind::One => p.alpha,
        BetaKind::Alpha => p.alpha + 1.0,
    };
    let spec = ContourSpec::auto(p);
    t_grid
        .iter()
        .map(|&t| {
            if t < 1.0 {
                return Err(Error::Domain(alloc::format!(
                    "decay profile is defined for t >= 1, got {t}"
                )));
            }
            let v = eval_kernel(&KernelQuery { params: *p, beta, t }, &spec)?;
            Ok(DecayPoint { t, kernel_abs: v.abs(), compensated: v.abs() * libm::pow(t, rate) })
        })
        .collect()
}

/// Result of the kernel L1-norm computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    /// The full integral: quadrature on `[0, split_point]` plus the tail model.
    pub value: f64,
    /// Accumulated quadrature error plus a share of the modeled tail.
    pub error_estimate: f64,
    pub split_point: f64,
    /// The modeled tail `C_emp / (alpha split^alpha)`.
    pub tail: f64,
    /// Empirical compensated constant used in the tail model.
    pub tail_coefficient: f64,
}

/// `Int_0^inf |E_{alpha,alpha}^{a,b,tau}(s)| ds`, finite under the
/// `a <= b < -a` criterion: adaptive quadrature up to `split_point`, then an
/// algebraic tail `C_emp / s^{alpha+1}` with the constant measured at the
/// split.
///
/// The quadrature splits at the delay multiples (derivative kinks of the
/// kernel) and substitutes `v = w^{1/alpha}` on the first panel to absorb the
/// `v^{alpha-1}` singularity at zero.
pub fn kernel_l1_norm(p: &ProblemParams, split_point: f64, quad_tol: f64) -> Result<L1Norm> {
    if !p.satisfies_criterion() {
        return Err(Error::NotInCriterionRegion { a: p.a, b: p.b });
    }
    if !(split_point > p.tau) {
        return Err(Error::Domain(alloc::format!(
            "split_point = {split_point} must exceed tau = {}",
            p.tau
        )));
    }
    let spec = ContourSpec::auto(p);
    let kernel_abs = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        eval_kernel(&KernelQuery { params: *p, beta: BetaKind::Alpha, t }, &spec)
            .map(|v| v.abs())
            .unwrap_or(f64::NAN)
    };

    let mut value = 0.0;
    let mut err_quad = 0.0;

    // first panel [0, min(tau, split)]: integrate in w = v^alpha
    let c = p.tau.min(split_point);
    let inv_alpha = 1.0 / p.alpha;
    let (v0, e0) = adaptive_gk(
        &|w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            let v = libm::pow(w, inv_alpha);
            kernel_abs(v) * inv_alpha * libm::pow(w, inv_alpha - 1.0)
        },
        0.0,
        libm::pow(c, p.alpha),
        quad_tol,
    );
    value += v0;
    err_quad += e0;

    // remaining panels split at delay multiples
    let mut lo = c;
    while lo < split_point - 1e-12 * split_point {
        let hi = (lo + p.tau).min(split_point);
        let (v, e) = adaptive_gk(&kernel_abs, lo, hi, quad_tol);
        value += v;
        err_quad += e;
        lo = hi;
    }
    if !value.is_finite() {
        return Err(Error::DidNotConverge(alloc::string::String::from(
            "kernel quadrature produced a non-finite value",
        )));
    }

    // tail model |E(t)| <= C_emp / t^{alpha+1} from compensated samples at
    // the split
    let comp = |t: f64| kernel_abs(t) * libm::pow(t, p.alpha + 1.0);
    let c1 = comp(split_point);
    let c2 = comp(0.8 * split_point);
    let c3 = comp(0.9 * split_point);
    let tail_coefficient = c1.max(c2).max(c3);
    if !tail_coefficient.is_finite() || (c2 > 0.0 && c1 > 10.0 * c2.max(c3)) {
        return Err(Error::TailEstimateFailed(alloc::format!(
            "compensated kernel not settled at the split: {c2:e} -> {c3:e} -> {c1:e}"
        )));
    }
    let tail = tail_coefficient / (p.alpha * libm::pow(split_point, p.alpha));
    Ok(L1Norm {
        value: value + tail,
        error_estimate: err_quad + 0.25 * tail,
        split_point,
        tail,
        tail_coefficient,
    })
}
