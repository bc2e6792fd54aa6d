//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Failures reported by kernel evaluation, root finding, and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A problem parameter violates its invariant (`0 < alpha < 1`, `tau > 0`, finiteness).
    InvalidParams(String),
    /// An argument lies outside the domain of the operation (e.g. `t < -tau`, `t <= 0`).
    Domain(String),
    /// A queried region is malformed or touches the branch cut of `s^alpha`.
    InvalidRegion(String),
    /// No sign change of `Q` was found on `[0, search_hi]`.
    BracketingFailed { search_hi: f64, q_at_hi: f64 },
    /// `|Q|` dropped below the boundary margin while walking a region boundary;
    /// a zero lies on or too close to the contour. The caller should perturb the region.
    BoundaryDegenerate { min_abs_q: f64 },
    /// A pole of the integrand lies too close to the quadrature contour.
    ContourDegenerate { min_abs_q: f64 },
    /// A series/quadrature evaluation did not converge within its budget.
    DidNotConverge(String),
    /// The tail model of the kernel L1 norm could not be fit.
    TailEstimateFailed(String),
    /// The solution magnitude exceeded the overflow guard at time `t`.
    SolutionBlowup { t: f64, x: f64 },
    /// Picard iteration did not contract within the iteration budget.
    PicardDiverged { iterations: usize, sup_delta: f64 },
    /// `f(0,0) != 0`: hypothesis (H1) fails, the origin is not an equilibrium.
    HypothesisH1Violated { f00: f64 },
    /// The coefficients do not satisfy `a <= b < -a`, required by this operation.
    NotInCriterionRegion { a: f64, b: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidRegion(msg) => write!(f, "invalid region: {msg}"),
            Error::BracketingFailed { search_hi, q_at_hi } => write!(
                f,
                "no sign change of Q on [0, {search_hi}]: Q(search_hi) = {q_at_hi}; enlarge search_hi"
            ),
            Error::BoundaryDegenerate { min_abs_q } => write!(
                f,
                "|Q| = {min_abs_q:e} on the region boundary; a root is on or near the boundary, perturb the region"
            ),
            Error::ContourDegenerate { min_abs_q } => write!(
                f,
                "pole too close to the quadrature contour: min |Q| = {min_abs_q:e}"
            ),
            Error::DidNotConverge(msg) => write!(f, "did not converge: {msg}"),
            Error::TailEstimateFailed(msg) => write!(f, "tail estimate failed: {msg}"),
            Error::SolutionBlowup { t, x } => {
                write!(f, "solution blowup: |x({t})| = {x:e} exceeds the overflow guard")
            }
            Error::PicardDiverged { iterations, sup_delta } => write!(
                f,
                "Picard iteration not contracting after {iterations} sweeps (sup delta = {sup_delta:e})"
            ),
            Error::HypothesisH1Violated { f00 } => {
                write!(f, "f(0,0) = {f00:e} != 0: the trivial solution is not an equilibrium")
            }
            Error::NotInCriterionRegion { a, b } => {
                write!(f, "coefficients a = {a}, b = {b} do not satisfy a <= b < -a")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
