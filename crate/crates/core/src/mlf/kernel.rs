//! The delayed Mittag-Leffler kernels
//! `E_{alpha,beta}^{a,b,tau}(t) = L^{-1}[ s^{alpha-beta} / Q(s) ](t)` with
//! `Q(s) = s^alpha - a - b e^{-s tau}`, for `beta = 1` (fundamental solution)
//! and `beta = alpha` (impulse response).
//!
//! Two evaluation routes:
//!
//! - `b = 0`: quadrature of the inversion integral over the contour
//!   `gamma(mu, theta)` (arc of radius `mu`, rays at `+-theta`). `Q` then has
//!   no zeros off the principal branch for `a < 0` and a single real zero
//!   `a^{1/alpha}` for `a > 0`, which the arc must enclose.
//!
//! - `b != 0`: the delay term is expanded geometrically,
//!   `1/Q = sum_n b^n e^{-n s tau} / (s^alpha - a)^{n+1}`, and each term is
//!   inverted exactly:
//!
//!   ```text
//!   E(t) = sum_{0 <= n < t/tau} (b u^alpha)^n u^{beta-1} D_n(a u^alpha),
//!   u = t - n tau,  D_n = E^{(n)}_{alpha,beta} / n!
//!   ```
//!
//!   A direct `gamma(mu, theta)` quadrature is kept for cross-checks but is
//!   not the production route here: for `b != 0` the characteristic roots
//!   form chains approaching `|arg s| -> pi/2` from the left, so every such
//!   contour leaves infinitely many poles on its right, and their residues
//!   decay too slowly in height to truncate at small `t` (they resonate at
//!   `t` a multiple of `tau`). The expansion above is the same inverse
//!   Laplace transform with the delay handled exactly instead.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::classical::taylor_coeff;
use crate::charfn::{eval_q, principal_pow};
use crate::error::{Error, Result};
use crate::problem::ProblemParams;
use crate::quad::{pairwise_sum, GaussLegendre};

/// Which kernel parameter `beta` is queried; the pair the solution theory uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaKind {
    One,
    Alpha,
}

impl BetaKind {
    pub fn value(&self, alpha: f64) -> f64 {
        match self {
            BetaKind::One => 1.0,
            BetaKind::Alpha => alpha,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BetaKind::One => "one",
            BetaKind::Alpha => "alpha",
        }
    }
}

/// A single kernel evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub params: ProblemParams,
    pub beta: BetaKind,
    pub t: f64,
}

/// The quadrature contour `gamma(mu, theta)`: a circular arc of radius `mu`
/// spanning `|arg s| <= theta` joined to two rays at `arg s = +-theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Arc radius, > 0.
    pub mu: f64,
    /// Ray angle in (pi/2, pi).
    pub theta: f64,
    /// Hard cap on the ray arc length; the quadrature normally stops earlier,
    /// when the integrand falls below `1e-16` of its running maximum.
    pub ray_truncation: f64,
    /// Gauss-Legendre nodes per ray panel.
    pub n_ray: usize,
    /// Gauss-Legendre nodes on the arc.
    pub n_arc: usize,
    /// Evaluations with `|Q|` below this abort with `ContourDegenerate`.
    pub contour_margin: f64,
}

impl ContourSpec {
    /// Default contour for the given coefficients: `theta = pi/2 + 0.3` and
    /// `mu = max(1, 2 (|a|+|b|)^{1/alpha})`, so every zero of `Q` inside the
    /// sector `|arg s| <= theta` (all of which satisfy
    /// `|s|^alpha <= |a| + |b| e^{-tau Re s}`) with non-negative real part
    /// lies inside the arc.
    pub fn auto(p: &ProblemParams) -> Self {
        let mu = 1.0f64.max(2.0 * libm::pow(p.a.abs() + p.b.abs(), 1.0 / p.alpha));
        ContourSpec {
            mu,
            theta: 0.5 * PI + 0.3,
            ray_truncation: 1e7,
            n_ray: 32,
            n_arc: 96,
            contour_margin: 1e-8,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::Domain(alloc::format!("contour mu = {} must be positive", self.mu)));
        }
        if !(self.theta > 0.5 * PI && self.theta < PI) {
            return Err(Error::Domain(alloc::format!(
                "contour theta = {} must lie in (pi/2, pi)",
                self.theta
            )));
        }
        if self.n_ray < 2 || self.n_arc < 2 {
            return Err(Error::Domain(alloc::string::String::from(
                "contour node counts must be at least 2",
            )));
        }
        Ok(())
    }
}

/// Evaluate the delayed kernel at `t > 0`.
///
/// Dispatches on `b`: the contour quadrature for `b = 0` (where `spec`
/// matters), the exact delay expansion otherwise (where `spec` is not
/// consulted). See the module docs for why.
pub fn eval_kernel(q: &KernelQuery, spec: &ContourSpec) -> Result<f64> {
    check_query(q)?;
    if q.params.b == 0.0 {
        eval_kernel_contour(q, spec)
    } else {
        delay_series(&q.params, q.beta, q.t)
    }
}

/// Evaluate the kernel on a grid of times. Quadrature node layouts are fixed
/// per query, and each value is an independent pure evaluation, so the result
/// is deterministic and the loop is safe to parallelize by chunking.
pub fn eval_kernel_grid(
    p: &ProblemParams,
    beta: BetaKind,
    ts: &[f64],
    spec: &ContourSpec,
) -> Result<Vec<f64>> {
    ts.iter()
        .map(|&t| eval_kernel(&KernelQuery { params: *p, beta, t }, spec))
        .collect()
}

fn check_query(q: &KernelQuery) -> Result<()> {
    let report = crate::problem::validate_params(&q.params);
    if !report.is_valid() {
        return Err(Error::InvalidParams(report.issues.join("; ")));
    }
    if !(q.t > 0.0) || !q.t.is_finite() {
        return Err(Error::Domain(alloc::format!("kernel time t = {} must be positive", q.t)));
    }
    Ok(())
}

/// The exact delay expansion; `b` may be zero (one term) or not.
pub(crate) fn delay_series(p: &ProblemParams, beta: BetaKind, t: f64) -> Result<f64> {
    let beta_v = beta.value(p.alpha);
    let mut terms: Vec<f64> = Vec::new();
    let mut scale = 0.0f64;
    let mut small_streak = 0;
    let mut n: u32 = 0;
    while (n as f64) * p.tau < t {
        let u = t - n as f64 * p.tau;
        let z = p.a * libm::pow(u, p.alpha);
        let d = taylor_coeff(p.alpha, beta_v, n, z)?;
        let term = powi(p.b * libm::pow(u, p.alpha), n) * libm::pow(u, beta_v - 1.0) * d;
        terms.push(term);
        scale = scale.max(term.abs());
        if n > 2 && term.abs() < 1e-17 * scale.max(1e-280) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
        n += 1;
        if n > 100_000 {
            return Err(Error::DidNotConverge(alloc::format!(
                "delay expansion needs more than {n} terms (t = {t}, tau = {})",
                p.tau
            )));
        }
    }
    Ok(pairwise_sum(&terms))
}

fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0f64;
    let mut base = x;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Direct quadrature of `(1/2 pi i) Int_gamma s^{alpha-beta} e^{ts} / Q(s) ds`
/// using conjugate symmetry: only the upper half contour is evaluated and the
/// imaginary part is doubled, so the result is real by construction.
///
/// Exact route for `b = 0`. For `b != 0` it omits the residues of the root
/// chains right of the rays, which decay like `exp(t max_k Re s_k)`; the
/// cross-check tests use it at large `t` only.
pub fn eval_kernel_contour(q: &KernelQuery, spec: &ContourSpec) -> Result<f64> {
    check_query(q)?;
    spec.validate()?;
    let p = &q.params;
    if p.b == 0.0 && p.a > 0.0 {
        let pole = libm::pow(p.a, 1.0 / p.alpha);
        if spec.mu <= pole * 1.000_001 {
            return Err(Error::ContourDegenerate { min_abs_q: eval_q_min_hint(p, spec) });
        }
    }
    let (upper, min_q) = half_contour_sum(p, q.beta.value(p.alpha), q.t, spec, false)?;
    if min_q < spec.contour_margin {
        return Err(Error::ContourDegenerate { min_abs_q: min_q });
    }
    Ok(upper.im / PI)
}

/// Both contour halves evaluated independently (no symmetrization): the raw
/// complex result of `(1/2 pi i) Int_gamma`. Its imaginary part measures the
/// quadrature's conjugate-symmetry error and should be at roundoff level.
pub fn eval_kernel_contour_full(q: &KernelQuery, spec: &ContourSpec) -> Result<Complex64> {
    check_query(q)?;
    spec.validate()?;
    let p = &q.params;
    let beta_v = q.beta.value(p.alpha);
    let (upper, min_up) = half_contour_sum(p, beta_v, q.t, spec, false)?;
    let (lower, min_lo) = half_contour_sum(p, beta_v, q.t, spec, true)?;
    if min_up.min(min_lo) < spec.contour_margin {
        return Err(Error::ContourDegenerate { min_abs_q: min_up.min(min_lo) });
    }
    // gamma runs from infinity e^{-i theta} through the arc to infinity e^{+i theta}
    let total = upper - lower;
    Ok(total / Complex64::new(0.0, 2.0 * PI))
}

fn eval_q_min_hint(p: &ProblemParams, spec: &ContourSpec) -> f64 {
    eval_q(p, Complex64::new(spec.mu, 0.0)).norm()
}

/// Integral of `F(s) ds` over one half of the contour, traversed outward:
/// the arc from `arg s = 0` to `arg s = +-theta`, then the ray to infinity.
/// Returns the complex sum and the minimum `|Q|` seen.
fn half_contour_sum(
    p: &ProblemParams,
    beta_v: f64,
    t: f64,
    spec: &ContourSpec,
    lower: bool,
) -> Result<(Complex64, f64)> {
    let sign = if lower { -1.0 } else { 1.0 };
    let mut min_q = f64::INFINITY;
    let mut integrand = |s: Complex64| -> Complex64 {
        let qv = eval_q(p, s);
        let m = qv.norm();
        if m < min_q {
            min_q = m;
        }
        principal_pow(s, p.alpha - beta_v) * (s * t).exp() / qv
    };

    // arc: s = mu e^{i phi}, phi from 0 to sign*theta
    let gl_arc = GaussLegendre::new(spec.n_arc.min(64).max(8));
    let arc_panels = spec.n_arc.div_ceil(64).max(2);
    let mut arc_terms: Vec<Complex64> = Vec::new();
    for panel in 0..arc_panels {
        let lo = sign * spec.theta * panel as f64 / arc_panels as f64;
        let hi = sign * spec.theta * (panel + 1) as f64 / arc_panels as f64;
        arc_terms.push(gl_complex(&gl_arc, lo, hi, |phi| {
            let s = Complex64::from_polar(spec.mu, phi);
            integrand(s) * Complex64::new(0.0, 1.0) * s
        }));
    }

    // ray: s = r e^{i sign theta}, r from mu outward; geometric panels sized
    // by the local exponential decay scale, stopping on the running-max rule
    let dir = Complex64::from_polar(1.0, sign * spec.theta);
    let decay = (t + if p.b != 0.0 { p.tau } else { 0.0 }) * (-libm::cos(spec.theta));
    let mut panel_len = (2.0 / decay).min(4.0 * spec.mu).max(0.25 * spec.mu);
    let gl_ray = GaussLegendre::new(spec.n_ray.max(8));
    let mut ray_terms: Vec<Complex64> = Vec::new();
    let mut r = spec.mu;
    let mut peak = 0.0f64;
    loop {
        let r_hi = r + panel_len;
        let mut panel_peak = 0.0f64;
        let val = gl_complex(&gl_ray, r, r_hi, |rr| {
            let v = integrand(rr * dir) * dir;
            let m = v.norm();
            if m > panel_peak {
                panel_peak = m;
            }
            v
        });
        ray_terms.push(val);
        peak = peak.max(panel_peak);
        r = r_hi;
        if panel_peak <= 1e-16 * peak || r - spec.mu >= spec.ray_truncation {
            break;
        }
        panel_len *= 1.6;
        if ray_terms.len() > 4000 {
            return Err(Error::DidNotConverge(alloc::string::String::from(
                "contour ray quadrature did not decay within the panel budget",
            )));
        }
    }

    arc_terms.extend(ray_terms);
    let sum_re = pairwise_sum(&arc_terms.iter().map(|c| c.re).collect::<Vec<_>>());
    let sum_im = pairwise_sum(&arc_terms.iter().map(|c| c.im).collect::<Vec<_>>());
    Ok((Complex64::new(sum_re, sum_im), min_q))
}

fn gl_complex<F: FnMut(f64) -> Complex64>(
    gl: &GaussLegendre,
    a: f64,
    b: f64,
    mut f: F,
) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in gl.nodes_weights() {
        sum += f(c + h * x) * w;
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_params() -> ProblemParams {
        ProblemParams { alpha: 0.5, a: -5.0, b: 0.5, tau: 1.0 }
    }

    fn kernel(p: &ProblemParams, beta: BetaKind, t: f64) -> f64 {
        eval_kernel(&KernelQuery { params: *p, beta, t }, &ContourSpec::auto(p)).unwrap()
    }

    #[test]
    fn delay_series_reference_values() {
        // frozen from an independent inversion (de Hoog / Pade acceleration
        // on a Bromwich line, 60 digits) for the worked example coefficients
        let p = example_params();
        let cases_b1 = [
            (0.5, 0.15383860995001259),
            (1.5, 0.10529523987858404),
            (2.5, 0.080972025715432641),
            (3.7, 0.065983653248625247),
            (10.0, 0.039787444498241354),
        ];
        for (t, expect) in cases_b1 {
            let v = kernel(&p, BetaKind::One, t);
            assert!((v - expect).abs() < 1e-11, "beta=1 t={t}: {v} vs {expect}");
        }
        let cases_ba = [
            (0.5, 0.028691511052802396),
            (1.5, 0.011101971543866714),
            (2.5, 0.0046123145926830403),
            (3.7, 0.0022377187814184304),
            (10.0, 0.00045454761696750839),
        ];
        for (t, expect) in cases_ba {
            let v = kernel(&p, BetaKind::Alpha, t);
            assert!((v - expect).abs() < 1e-11, "beta=alpha t={t}: {v} vs {expect}");
        }
    }

    #[test]
    fn early_time_matches_classical_for_any_b() {
        // on (0, tau] the delayed term has not acted yet:
        // E_{alpha,1}(t) = E_alpha(a t^alpha) regardless of b
        let p = example_params();
        for &t in &[0.25, 0.5, 0.99, 1.0] {
            let v = kernel(&p, BetaKind::One, t);
            let classical =
                super::super::classical::eval_classical_ml(0.5, 1.0, -5.0 * libm::sqrt(t))
                    .unwrap();
            assert!((v - classical).abs() < 1e-10, "t={t}: {v} vs {classical}");
        }
    }

    #[test]
    fn contour_matches_classical_for_b_zero() {
        for &alpha in &[0.3, 0.5, 0.8] {
            for &a in &[-1.0, -5.0] {
                let p = ProblemParams { alpha, a, b: 0.0, tau: 1.0 };
                let spec = ContourSpec::auto(&p);
                for &t in &[0.5, 1.0, 2.0, 5.0] {
                    for beta in [BetaKind::One, BetaKind::Alpha] {
                        let v = eval_kernel(&KernelQuery { params: p, beta, t }, &spec).unwrap();
                        let bv = beta.value(alpha);
                        let classical = super::super::classical::eval_classical_ml(
                            alpha,
                            bv,
                            a * libm::pow(t, alpha),
                        )
                        .unwrap()
                            * libm::pow(t, bv - 1.0);
                        assert!(
                            (v - classical).abs() < 1e-9,
                            "alpha={alpha} a={a} beta={bv} t={t}: contour {v:e} vs classical {classical:e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn contour_positive_a_encloses_real_pole() {
        // b = 0, a > 0: kernel = E_alpha(a t^alpha), dominated by the pole at
        // a^{1/alpha}; auto() picks the arc radius beyond it
        let p = ProblemParams { alpha: 0.5, a: 1.0, b: 0.0, tau: 1.0 };
        let spec = ContourSpec::auto(&p);
        let t = 1.0;
        let v = eval_kernel(&KernelQuery { params: p, beta: BetaKind::One, t }, &spec).unwrap();
        let classical = super::super::classical::eval_classical_ml(0.5, 1.0, 1.0).unwrap();
        assert!((v - classical).abs() < 1e-9, "{v} vs {classical}");

        // an arc radius left of the pole is rejected
        let bad = ContourSpec { mu: 0.5, ..spec };
        match eval_kernel(&KernelQuery { params: p, beta: BetaKind::One, t }, &bad) {
            Err(Error::ContourDegenerate { .. }) => {}
            other => panic!("expected ContourDegenerate, got {other:?}"),
        }
    }

    #[test]
    fn contour_agrees_with_delay_series_at_large_t() {
        // with b != 0 the chain residues decay like e^{t max Re s_k}; at
        // t = 10 they are ~1e-11 for these coefficients, so the two
        // independent routes must agree
        let p = example_params();
        let spec = ContourSpec::auto(&p);
        for beta in [BetaKind::One, BetaKind::Alpha] {
            let series = delay_series(&p, beta, 10.0).unwrap();
            let contour =
                eval_kernel_contour(&KernelQuery { params: p, beta, t: 10.0 }, &spec).unwrap();
            assert!(
                (series - contour).abs() < 1e-8,
                "beta={}: series {series:e} vs contour {contour:e}",
                beta.name()
            );
        }
    }

    #[test]
    fn contour_invariance_for_b_zero() {
        let p = ProblemParams { alpha: 0.5, a: -5.0, b: 0.0, tau: 1.0 };
        let base = ContourSpec::auto(&p);
        let q = KernelQuery { params: p, beta: BetaKind::One, t: 1.0 };
        let v0 = eval_kernel(&q, &base).unwrap();
        for spec in [
            ContourSpec { mu: base.mu * 2.0, ..base },
            ContourSpec { theta: base.theta + 0.1, ..base },
            ContourSpec { theta: base.theta - 0.1, ..base },
        ] {
            let v = eval_kernel(&q, &spec).unwrap();
            assert!((v - v0).abs() < 1e-10, "{v} vs {v0}");
        }
    }

    #[test]
    fn full_contour_is_real() {
        let p = ProblemParams { alpha: 0.5, a: -5.0, b: 0.0, tau: 1.0 };
        let spec = ContourSpec::auto(&p);
        let q = KernelQuery { params: p, beta: BetaKind::One, t: 1.0 };
        let full = eval_kernel_contour_full(&q, &spec).unwrap();
        assert!(full.im.abs() <= 1e-10 * full.re.abs().max(1e-12), "im = {:e}", full.im);
        let sym = eval_kernel(&q, &spec).unwrap();
        assert!((full.re - sym).abs() < 1e-12);
    }

    #[test]
    fn initial_value_limit() {
        // lim_{t->0+} E_{alpha,1} = 1 by the Laplace initial value theorem
        let p = example_params();
        let v = kernel(&p, BetaKind::One, 1e-6);
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn rejects_bad_queries() {
        let p = example_params();
        let spec = ContourSpec::auto(&p);
        assert!(matches!(
            eval_kernel(&KernelQuery { params: p, beta: BetaKind::One, t: 0.0 }, &spec),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_kernel(&KernelQuery { params: p, beta: BetaKind::One, t: -1.0 }, &spec),
            Err(Error::Domain(_))
        ));
        let bad = ContourSpec { theta: 0.3, ..spec };
        assert!(eval_kernel_contour(&KernelQuery { params: p, beta: BetaKind::One, t: 1.0 }, &bad)
            .is_err());
    }
}
