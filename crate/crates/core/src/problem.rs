//! Shared domain types: problem parameters, the nonlinearity, history
//! functions on [-tau, 0], and sampled trajectories.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Parameters of the scalar fractional delay equation
/// `D^alpha x(t) = a x(t) + b x(t - tau) + f(x(t), x(t - tau))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    /// Order of the Caputo derivative, `0 < alpha < 1`.
    pub alpha: f64,
    /// Coefficient of the instantaneous term.
    pub a: f64,
    /// Coefficient of the delayed term.
    pub b: f64,
    /// The delay, `tau > 0`.
    pub tau: f64,
}

impl ProblemParams {
    pub fn new(alpha: f64, a: f64, b: f64, tau: f64) -> Result<Self> {
        let p = ProblemParams { alpha, a, b, tau };
        let report = validate_params(&p);
        if report.is_valid() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(report.issues.join("; ")))
        }
    }

    /// Whether the coefficients satisfy the `a <= b < -a` criterion.
    pub fn satisfies_criterion(&self) -> bool {
        self.a <= self.b && self.b < -self.a
    }
}

/// How the coefficient pair (a, b) relates to the root geometry of
/// `Q(s) = s^alpha - a - b e^{-s tau}`:
///
/// - `StableCriterion`: `a <= b < -a`; no root has non-negative real part.
/// - `NonnegativeSum`: `a + b >= 0`; at least one non-negative real root exists.
/// - `Inconclusive`: neither regime applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffClass {
    StableCriterion,
    NonnegativeSum,
    Inconclusive,
}

/// Outcome of [`validate_params`]: a list of violated invariants plus the
/// coefficient classification (always computed).
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<String>,
    pub class: CoeffClass,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Check every parameter invariant and classify the coefficient pair.
/// Pure: the same input always yields the same report.
pub fn validate_params(p: &ProblemParams) -> ValidationReport {
    let mut issues = Vec::new();
    if !(p.alpha > 0.0 && p.alpha < 1.0) || !p.alpha.is_finite() {
        issues.push(alloc::format!("alpha = {} out of (0, 1)", p.alpha));
    }
    if !(p.tau > 0.0) || !p.tau.is_finite() {
        issues.push(alloc::format!("tau = {} must be positive", p.tau));
    }
    if !p.a.is_finite() {
        issues.push(alloc::format!("a = {} must be finite", p.a));
    }
    if !p.b.is_finite() {
        issues.push(alloc::format!("b = {} must be finite", p.b));
    }
    let class = if p.a <= p.b && p.b < -p.a {
        CoeffClass::StableCriterion
    } else if p.a + p.b >= 0.0 {
        CoeffClass::NonnegativeSum
    } else {
        CoeffClass::Inconclusive
    };
    ValidationReport { issues, class }
}

/// The nonlinear perturbation `f(x, y)` evaluated as `f(x(t), x(t - tau))`.
///
/// Immutable and shareable across threads; evaluation is pure.
#[derive(Clone)]
pub struct Nonlinearity {
    imp: NonlinImpl,
}

#[derive(Clone)]
enum NonlinImpl {
    Zero,
    /// Sum of monomial terms `c * x^i * y^j`.
    Polynomial(Arc<[(f64, u32, u32)]>),
    Closure(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl Nonlinearity {
    /// The zero function (the linear equation).
    pub fn zero() -> Self {
        Nonlinearity { imp: NonlinImpl::Zero }
    }

    /// Polynomial nonlinearity: terms `(c, i, j)` meaning `c * x^i * y^j`.
    pub fn polynomial(terms: &[(f64, u32, u32)]) -> Self {
        Nonlinearity { imp: NonlinImpl::Polynomial(terms.into()) }
    }

    /// `f(x, y) = x^2 + y^3`.
    pub fn example_cubic() -> Self {
        Self::polynomial(&[(1.0, 2, 0), (1.0, 0, 3)])
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Nonlinearity { imp: NonlinImpl::Closure(Arc::new(f)) }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.imp {
            NonlinImpl::Zero => 0.0,
            NonlinImpl::Polynomial(terms) => {
                let mut s = 0.0;
                for &(c, i, j) in terms.iter() {
                    s += c * libm::pow(x, i as f64) * libm::pow(y, j as f64);
                }
                s
            }
            NonlinImpl::Closure(f) => f(x, y),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.imp, NonlinImpl::Zero)
    }

    /// Verify hypothesis (H1): the origin must be an equilibrium.
    pub fn check_trivial_equilibrium(&self) -> Result<()> {
        let f00 = self.eval(0.0, 0.0);
        if f00.abs() > 1e-12 {
            Err(Error::HypothesisH1Violated { f00 })
        } else {
            Ok(())
        }
    }
}

impl core::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.imp {
            NonlinImpl::Zero => write!(f, "Nonlinearity::zero"),
            NonlinImpl::Polynomial(t) => write!(f, "Nonlinearity::polynomial({t:?})"),
            NonlinImpl::Closure(_) => write!(f, "Nonlinearity::closure"),
        }
    }
}

/// The initial function `phi` on [-tau, 0] together with its zero-extension
/// `phi~` (equal to `phi` on [-tau, 0] and to 0 for t > 0).
///
/// Sampled tables must have node spacing that divides `tau` exactly so a
/// solver grid with `tau = m h` can pass through the table nodes.
#[derive(Clone)]
pub struct HistoryFunction {
    tau: f64,
    imp: HistoryImpl,
}

#[derive(Clone)]
enum HistoryImpl {
    Constant(f64),
    /// `phi(t) = slope * t + intercept`.
    Affine { slope: f64, intercept: f64 },
    /// Piecewise-linear table on the uniform grid `-tau + k h`, k = 0..n-1.
    Table { h: f64, values: Arc<[f64]> },
    Closure(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl HistoryFunction {
    pub fn constant(tau: f64, c: f64) -> Self {
        HistoryFunction { tau, imp: HistoryImpl::Constant(c) }
    }

    /// `phi(t) = slope * t + intercept` on [-tau, 0].
    pub fn affine(tau: f64, slope: f64, intercept: f64) -> Self {
        HistoryFunction { tau, imp: HistoryImpl::Affine { slope, intercept } }
    }

    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(tau: f64, f: F) -> Self {
        HistoryFunction { tau, imp: HistoryImpl::Closure(Arc::new(f)) }
    }

    /// Piecewise-linear table of `values[k] = phi(-tau + k h)`. Requires the
    /// spacing to divide `tau`: `values.len() - 1` panels covering [-tau, 0].
    pub fn from_samples(tau: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParams(String::from(
                "history table needs at least two samples",
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(String::from("history table has non-finite values")));
        }
        let h = tau / (values.len() - 1) as f64;
        Ok(HistoryFunction { tau, imp: HistoryImpl::Table { h, values: values.into() } })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `phi(t)` for t in [-tau, 0]. Same domain restriction as [`Self::extend`].
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t > 0.0 {
            return Err(Error::Domain(alloc::format!("phi evaluated at t = {t} > 0")));
        }
        self.extend(t)
    }

    /// The zero-extension `phi~`: `phi(t)` on [-tau, 0], `0` for t > 0.
    /// Errors for t < -tau.
    pub fn extend(&self, t: f64) -> Result<f64> {
        if t < -self.tau - 1e-12 * self.tau.max(1.0) {
            return Err(Error::Domain(alloc::format!(
                "t = {t} below the history interval start -tau = {}",
                -self.tau
            )));
        }
        if t > 0.0 {
            return Ok(0.0);
        }
        let t = t.max(-self.tau);
        Ok(match &self.imp {
            HistoryImpl::Constant(c) => *c,
            HistoryImpl::Affine { slope, intercept } => slope * t + intercept,
            HistoryImpl::Table { h, values } => {
                let pos = (t + self.tau) / h;
                let idx = (libm::floor(pos) as usize).min(values.len() - 2);
                let frac = pos - idx as f64;
                values[idx] * (1.0 - frac) + values[idx + 1] * frac
            }
            HistoryImpl::Closure(f) => f(t),
        })
    }

    /// `phi(0)`, the junction value of the initial condition.
    pub fn at_zero(&self) -> f64 {
        self.extend(0.0).expect("0 is always inside the history interval")
    }

    /// Supremum norm over [-tau, 0]. Exact for constant/affine/table
    /// histories, a dense-sample estimate for closures.
    pub fn sup_norm(&self) -> f64 {
        match &self.imp {
            HistoryImpl::Constant(c) => c.abs(),
            HistoryImpl::Affine { slope, intercept } => {
                (intercept).abs().max((-slope * self.tau + intercept).abs())
            }
            HistoryImpl::Table { values, .. } => {
                values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }
            HistoryImpl::Closure(f) => {
                let n = 4096;
                let mut m = 0.0f64;
                for k in 0..=n {
                    let t = -self.tau + self.tau * k as f64 / n as f64;
                    m = m.max(f(t).abs());
                }
                m
            }
        }
    }
}

impl core::fmt::Debug for HistoryFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.imp {
            HistoryImpl::Constant(c) => write!(f, "History::constant({c})"),
            HistoryImpl::Affine { slope, intercept } => {
                write!(f, "History::affine({slope} t + {intercept})")
            }
            HistoryImpl::Table { values, .. } => write!(f, "History::table[{}]", values.len()),
            HistoryImpl::Closure(_) => write!(f, "History::closure"),
        }
    }
}

/// Which scheme produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Abm,
    Picard,
    VarConst,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Abm => "abm",
            Scheme::Picard => "picard",
            Scheme::VarConst => "varconst",
        }
    }
}

/// A solution sampled on the uniform grid `t_k = -tau + k h`, k = 0..len-1,
/// with `tau = m h` for integer m, so the first `m + 1` values are history
/// samples and delayed lookups are exact index shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    t0: f64,
    h: f64,
    delay_steps: usize,
    values: Vec<f64>,
    scheme: Scheme,
}

impl Trajectory {
    pub fn new(t0: f64, h: f64, delay_steps: usize, values: Vec<f64>, scheme: Scheme) -> Self {
        assert!(h > 0.0 && delay_steps >= 1 && values.len() > delay_steps);
        Trajectory { t0, h, delay_steps, values, scheme }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Number of grid steps per delay (`m = tau / h`).
    pub fn delay_steps(&self) -> usize {
        self.delay_steps
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.h * k as f64
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterator over `(t_k, x_k)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &x)| (self.time(k), x))
    }

    /// Piecewise-linear interpolation; exact at grid nodes.
    pub fn value_at(&self, t: f64) -> f64 {
        let pos = (t - self.t0) / self.h;
        if pos <= 0.0 {
            return self.values[0];
        }
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return self.values[last];
        }
        let idx = libm::floor(pos) as usize;
        let frac = pos - idx as f64;
        self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
    }

    /// Largest |x(t)| over grid points with `t >= t_from`.
    pub fn sup_abs_from(&self, t_from: f64) -> f64 {
        self.iter().filter(|(t, _)| *t >= t_from).fold(0.0f64, |m, (_, x)| m.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_example_params() {
        // the worked example: stable-criterion coefficients
        let r = validate_params(&ProblemParams { alpha: 0.5, a: -5.0, b: 0.5, tau: 1.0 });
        assert!(r.is_valid());
        assert_eq!(r.class, CoeffClass::StableCriterion);

        let r = validate_params(&ProblemParams { alpha: 0.5, a: 0.0, b: 0.0, tau: 1.0 });
        assert!(r.is_valid());
        assert_eq!(r.class, CoeffClass::NonnegativeSum);

        let r = validate_params(&ProblemParams { alpha: 1.5, a: -1.0, b: 0.0, tau: 1.0 });
        assert!(!r.is_valid());
        assert!(r.issues[0].contains("alpha"));
        // classification looks only at (a, b); (-1, 0) satisfies the criterion
        assert_eq!(r.class, CoeffClass::StableCriterion);
    }

    #[test]
    fn validate_is_pure() {
        let p = ProblemParams { alpha: 0.7, a: -2.0, b: 1.0, tau: 0.5 };
        assert_eq!(validate_params(&p), validate_params(&p));
    }

    #[test]
    fn extend_history_piecewise() {
        let phi = HistoryFunction::constant(1.0, 0.6);
        assert_eq!(phi.extend(-0.5).unwrap(), 0.6);
        assert_eq!(phi.extend(2.0).unwrap(), 0.0);

        let phi = HistoryFunction::affine(1.0, -0.05, 0.2);
        assert!((phi.extend(-1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(phi.extend(-1.5).is_err());
    }

    #[test]
    fn table_history_matches_affine() {
        let tau = 2.0;
        let n = 9;
        let samples: Vec<f64> =
            (0..n).map(|k| -tau + tau * k as f64 / (n - 1) as f64).map(|t| 0.3 * t - 0.1).collect();
        let tab = HistoryFunction::from_samples(tau, samples).unwrap();
        let aff = HistoryFunction::affine(tau, 0.3, -0.1);
        for k in 0..=100 {
            let t = -tau + tau * k as f64 / 100.0;
            assert!((tab.extend(t).unwrap() - aff.extend(t).unwrap()).abs() < 1e-12);
        }
        assert_eq!(tab.extend(5.0).unwrap(), 0.0);
    }

    #[test]
    fn nonlinearity_polynomial() {
        let f = Nonlinearity::example_cubic();
        assert_eq!(f.eval(2.0, 3.0), 4.0 + 27.0);
        f.check_trivial_equilibrium().unwrap();
        let g = Nonlinearity::polynomial(&[(1.0, 0, 0)]);
        assert!(g.check_trivial_equilibrium().is_err());
    }

    #[test]
    fn trajectory_interp() {
        let tr = Trajectory::new(-1.0, 0.5, 2, alloc::vec![1.0, 2.0, 3.0, 4.0], Scheme::Abm);
        assert_eq!(tr.time(0), -1.0);
        assert_eq!(tr.time(3), 0.5);
        assert_eq!(tr.value_at(-0.75), 1.5);
        assert_eq!(tr.value_at(0.5), 4.0);
    }
}
