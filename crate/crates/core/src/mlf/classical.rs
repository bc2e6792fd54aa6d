//! The classical two-parameter Mittag-Leffler function `E_{alpha,beta}(z)`
//! for real arguments, together with its derivatives in the scaled Taylor
//! form `D_n(z) = E^{(n)}(z) / n!`.
//!
//! Evaluation cascade:
//!
//! - power series with a cancellation monitor (the alternating series for
//!   z < 0 loses digits once terms outgrow the sum);
//! - for 0 < alpha < 1, 0 < beta < 1 + alpha and z != 0, the Hankel contour
//!   collapsed onto the real axis,
//!
//!   ```text
//!   D_n(z) = 1/(alpha pi) Int_0^inf u^{(1-beta)/alpha} e^{-u^{1/alpha}}
//!            Im[ e^{i pi (alpha-beta+1)} (u e^{i pi alpha} - z)^{-(n+1)} ] du
//!   ```
//!
//!   plus, for z > 0, the residue of the enclosed branch of `zeta^alpha = z`:
//!   `(1/alpha) z^{(1-beta)/alpha} exp(z^{1/alpha})` (n = 0 only);
//! - the algebraic asymptotic series `-sum_k z^{-k}/Gamma(beta - alpha k)`
//!   as a fallback for large negative z outside the integral's beta range.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::adaptive_gk;
use crate::special::{ln_gamma, recip_gamma};

const SERIES_MAX_TERMS: usize = 20_000;
/// Series results are kept only while the largest term stays within this
/// factor of the sum (about three decimal digits of cancellation).
const SERIES_CANCEL_LIMIT: f64 = 1e3;

/// `E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)` for real `z`.
///
/// Accurate to ~1e-12 relative for `|z| <= 50` with `beta` in `(0, 1+alpha)`
/// (the kernel workloads use `beta = 1` and `beta = alpha`). `alpha = 1` is
/// accepted and served by the series (`E_{1,1} = exp`).
pub fn eval_classical_ml(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    taylor_coeff(alpha, beta, 0, z)
}

/// The n-th derivative `E^{(n)}_{alpha,beta}(z) = n! D_n(z)`.
///
/// Overflows for n large enough that `n!` does; the scaled coefficient
/// [`taylor_coeff`] stays finite and is what the kernel evaluator consumes.
pub fn eval_classical_ml_derivative(alpha: f64, beta: f64, n: u32, z: f64) -> Result<f64> {
    let d = taylor_coeff(alpha, beta, n, z)?;
    if n == 0 {
        return Ok(d);
    }
    let ln_fact = ln_gamma(n as f64 + 1.0);
    if ln_fact + libm::log(d.abs().max(1e-300)) > 709.0 {
        return Err(Error::DidNotConverge(alloc::format!(
            "E^({n}) overflows; use the scaled Taylor coefficient instead"
        )));
    }
    Ok(libm::exp(ln_fact) * d)
}

/// Scaled derivative `D_n(z) = E^{(n)}_{alpha,beta}(z) / n!`.
pub fn taylor_coeff(alpha: f64, beta: f64, n: u32, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(alloc::format!("alpha = {alpha} out of (0, 1]")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(alloc::format!("beta = {beta} must be positive")));
    }
    if z == 0.0 {
        return Ok(recip_gamma(alpha * n as f64 + beta));
    }
    let integral_ok = alpha < 1.0 && beta < 1.0 + alpha;

    // series first when it cannot lose many digits: always for z > 0
    // (positive terms) and for small |z|
    if z > 0.0 || z >= -2.5 || !integral_ok {
        match series(alpha, beta, n, z) {
            Some((sum, max_term)) => {
                if z > 0.0 || max_term <= SERIES_CANCEL_LIMIT * sum.abs().max(1e-280) {
                    return Ok(sum);
                }
            }
            None => {}
        }
    }

    if integral_ok {
        let mut value = hankel_integral(alpha, beta, n, z);
        if z > 0.0 {
            if n > 0 {
                return Err(Error::DidNotConverge(alloc::format!(
                    "derivative order {n} at large positive z = {z} is not supported"
                )));
            }
            // residue of the enclosed saddle branch
            value += libm::exp(libm::pow(z, 1.0 / alpha)) * libm::pow(z, (1.0 - beta) / alpha)
                / alpha;
        }
        return Ok(value);
    }

    if z < 0.0 && n == 0 {
        if let Some(v) = asymptotic_negative(alpha, beta, z) {
            return Ok(v);
        }
    }
    Err(Error::DidNotConverge(alloc::format!(
        "Mittag-Leffler series unusable at alpha={alpha}, beta={beta}, n={n}, z={z}"
    )))
}

/// Power series for `D_n`; returns `(sum, largest |term|)` or `None` when the
/// term budget or f64 range is exhausted.
fn series(alpha: f64, beta: f64, n: u32, z: f64) -> Option<(f64, f64)> {
    let n = n as f64;
    let mut sum = 0.0f64;
    let mut binom = 1.0f64; // C(k + n, n)
    let mut zpow = 1.0f64; // z^k
    let mut max_term = 0.0f64;
    let mut small_streak = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let term = binom * zpow * recip_gamma(alpha * (kf + n) + beta);
        sum += term;
        let mag = term.abs();
        max_term = max_term.max(mag);
        if k > 4 && mag <= 1e-17 * sum.abs().max(1e-290) {
            small_streak += 1;
            if small_streak >= 3 {
                return Some((sum, max_term));
            }
        } else {
            small_streak = 0;
        }
        zpow *= z;
        binom *= (n + kf + 1.0) / (kf + 1.0);
        if !zpow.is_finite() || !binom.is_finite() {
            return None;
        }
    }
    None
}

/// Collapsed-Hankel integral for `D_n(z)`, z != 0, 0 < alpha < 1,
/// 0 < beta < 1 + alpha. The denominator power is taken in log space so
/// large `n` cannot overflow.
fn hankel_integral(alpha: f64, beta: f64, n: u32, z: f64) -> f64 {
    let sigma = (1.0 - beta) / alpha;
    let phase = PI * (alpha - beta + 1.0);
    let cos_pa = libm::cos(PI * alpha);
    let sin_pa = libm::sin(PI * alpha);
    let np1 = (n + 1) as f64;
    let inv_alpha = 1.0 / alpha;
    let integrand = move |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let w_re = u * cos_pa - z;
        let w_im = u * sin_pa;
        let ln_w = 0.5 * libm::log(w_re * w_re + w_im * w_im);
        let arg_w = libm::atan2(w_im, w_re);
        let ln_mag = sigma * libm::log(u) - libm::pow(u, inv_alpha) - np1 * ln_w;
        if ln_mag < -745.0 {
            return 0.0;
        }
        libm::exp(ln_mag) * libm::sin(phase - np1 * arg_w)
    };
    // e^{-u^{1/alpha}} is below 1e-26 past this point
    let upper = libm::pow(60.0, alpha);
    let (value, _err) = adaptive_gk(&integrand, 0.0, upper, 1e-14);
    value / (alpha * PI)
}

/// Algebraic expansion `-sum_{k>=1} z^{-k} / Gamma(beta - alpha k)` for large
/// negative z, truncated at its smallest term. Returns `None` unless the
/// smallest term is negligible against the sum.
fn asymptotic_negative(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let mut sum = 0.0f64;
    let mut zpow = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..=60 {
        zpow /= z;
        let term = -zpow * recip_gamma(beta - alpha * k as f64);
        let mag = term.abs();
        if mag > last {
            // divergence point; the magnitude of the first omitted term is
            // the error bound
            return if mag <= 1e-12 * sum.abs().max(1e-290) { Some(sum) } else { None };
        }
        sum += term;
        last = mag;
        if mag <= 1e-16 * sum.abs().max(1e-290) {
            return Some(sum);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(value: f64, expect: f64, rel: f64) {
        assert!(
            (value - expect).abs() <= rel * expect.abs(),
            "value {value:e} vs expected {expect:e} (rel err {:.2e})",
            ((value - expect) / expect).abs()
        );
    }

    #[test]
    fn value_at_zero_is_recip_gamma() {
        assert_rel(eval_classical_ml(0.5, 1.0, 0.0).unwrap(), 1.0, 1e-15);
        assert_rel(
            eval_classical_ml(0.7, 0.7, 0.0).unwrap(),
            recip_gamma(0.7),
            1e-15,
        );
    }

    #[test]
    fn exponential_special_case() {
        // E_{1,1}(z) = e^z
        assert_rel(eval_classical_ml(1.0, 1.0, -1.0).unwrap(), 0.367879441171442322, 1e-13);
    }

    #[test]
    fn series_regime_reference_values() {
        assert_rel(eval_classical_ml(0.5, 1.0, -1.0).unwrap(), 0.427583576155807004, 1e-13);
        assert_rel(eval_classical_ml(0.5, 0.5, -1.0).unwrap(), 0.136606007391949283, 1e-13);
        assert_rel(eval_classical_ml(0.3, 1.0, -2.0).unwrap(), 0.290232226167875355, 1e-13);
        assert_rel(eval_classical_ml(0.8, 1.0, -1.0).unwrap(), 0.386948578618976846, 1e-13);
    }

    #[test]
    fn integral_regime_reference_values() {
        assert_rel(eval_classical_ml(0.5, 1.0, -5.0).unwrap(), 0.110704637733068626, 1e-12);
        assert_rel(eval_classical_ml(0.5, 1.0, -50.0).unwrap(), 0.0112815362653237725, 1e-12);
        assert_rel(eval_classical_ml(0.8, 0.8, -3.0).unwrap(), 0.0399156642515970862, 1e-12);
        assert_rel(eval_classical_ml(0.8, 1.0, -30.0).unwrap(), 0.00757586079921920865, 1e-12);
        assert_rel(eval_classical_ml(0.3, 0.3, -20.0).unwrap(), 0.000544624898044652079, 1e-12);
        assert_rel(eval_classical_ml(0.5, 0.5, -10.0).unwrap(), 0.00277965610953042837, 1e-12);
    }

    #[test]
    fn positive_arguments() {
        assert_rel(eval_classical_ml(0.5, 1.0, 2.0).unwrap(), 108.940904389977972, 1e-12);
        assert_rel(eval_classical_ml(0.3, 1.0, 5.0).unwrap(), 2.2491502775548074e93, 1e-11);
    }

    #[test]
    fn derivative_reference_values() {
        assert_rel(
            eval_classical_ml_derivative(0.5, 1.0, 1, -1.0).unwrap(),
            0.273212014783898565,
            1e-12,
        );
        assert_rel(
            eval_classical_ml_derivative(0.5, 1.0, 3, -2.0).unwrap(),
            0.0927638265857460178,
            1e-12,
        );
        assert_rel(
            eval_classical_ml_derivative(0.5, 0.5, 10, -4.0).unwrap(),
            0.109838430709698157,
            1e-11,
        );
        assert_rel(
            eval_classical_ml_derivative(0.3, 1.0, 5, -1.5).unwrap(),
            0.59322630225115805,
            1e-11,
        );
        assert_rel(
            eval_classical_ml_derivative(0.8, 1.0, 8, -10.0).unwrap(),
            2.37466265327470186e-5,
            1e-11,
        );
        assert_rel(
            eval_classical_ml_derivative(0.5, 0.5, 2, -22.360679774997898).unwrap(),
            6.70327471637273498e-6,
            1e-11,
        );
    }

    #[test]
    fn derivative_matches_finite_differences() {
        // central difference of E against the analytic first derivative
        let alpha = 0.6;
        let beta = 1.0;
        let z = -1.3;
        let h = 1e-6;
        let fd = (eval_classical_ml(alpha, beta, z + h).unwrap()
            - eval_classical_ml(alpha, beta, z - h).unwrap())
            / (2.0 * h);
        let d1 = eval_classical_ml_derivative(alpha, beta, 1, z).unwrap();
        assert!((fd - d1).abs() < 1e-8, "fd {fd} vs analytic {d1}");
    }

    #[test]
    fn series_and_integral_agree_in_overlap() {
        // both branches are valid near the switch point; force each and compare
        for &(alpha, beta) in &[(0.4, 1.0), (0.55, 0.55), (0.75, 1.0)] {
            for &z in &[-1.1, -1.9, -2.4] {
                let (s, _) = series(alpha, beta, 0, z).unwrap();
                let i = hankel_integral(alpha, beta, 0, z);
                assert!(
                    (s - i).abs() <= 1e-12 * s.abs().max(1e-6),
                    "alpha={alpha} beta={beta} z={z}: series {s:e} vs integral {i:e}"
                );
            }
        }
    }

    #[test]
    fn scaled_coefficients_survive_large_order() {
        // n! overflows long before the scaled coefficient does
        let d = taylor_coeff(0.5, 0.5, 200, -30.0).unwrap();
        assert!(d.is_finite());
        assert!(eval_classical_ml_derivative(0.5, 0.5, 200, -30.0).is_err());
    }
}
