//! The characteristic function `Q(s) = s^alpha - a - b e^{-s tau}` of the
//! linear delay equation: evaluation on the principal branch, root counting
//! by the argument principle, root location by recursive subdivision with
//! Newton polishing, and the algebraic `a <= b < -a` certificate.
//!
//! `s^alpha` uses the principal branch (argument in (-pi, pi], cut on the
//! negative real axis), with `0^alpha := 0`. Queried regions must not cross
//! the cut; in the supported workflows they lie in the closed right half
//! plane or strictly off the negative real axis.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::problem::ProblemParams;

/// Principal-branch power `s^mu` with `0^mu := 0` (for `mu > 0`).
/// A negative-zero imaginary part is normalized to `+0` so points on the
/// negative real axis evaluate on the upper side of the cut.
pub(crate) fn principal_pow(s: Complex64, mu: f64) -> Complex64 {
    if s.re == 0.0 && s.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let im = if s.im == 0.0 { 0.0 } else { s.im };
    let r = libm::hypot(s.re, im);
    let theta = libm::atan2(im, s.re);
    let mag = libm::exp(mu * libm::log(r));
    Complex64::new(mag * libm::cos(mu * theta), mag * libm::sin(mu * theta))
}

/// `Q(s) = s^alpha - a - b exp(-s tau)` on the principal branch.
pub fn eval_q(p: &ProblemParams, s: Complex64) -> Complex64 {
    principal_pow(s, p.alpha) - p.a - p.b * (-s * p.tau).exp()
}

/// `Q'(s) = alpha s^(alpha-1) + b tau exp(-s tau)`.
pub fn eval_q_prime(p: &ProblemParams, s: Complex64) -> Complex64 {
    p.alpha * principal_pow(s, p.alpha - 1.0) + p.b * p.tau * (-s * p.tau).exp()
}

/// A query region in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexRegion {
    Rectangle { re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64 },
    /// The right half plane truncated to `[0, re_hi] x [-im_bound, im_bound]`.
    RightHalfPlaneTruncated { re_hi: f64, im_bound: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rect {
    fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }
    fn height(&self) -> f64 {
        self.im_hi - self.im_lo
    }
    fn diameter(&self) -> f64 {
        libm::hypot(self.width(), self.height())
    }
    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))
    }
    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_lo - slack
            && z.re <= self.re_hi + slack
            && z.im >= self.im_lo - slack
            && z.im <= self.im_hi + slack
    }
}

impl ComplexRegion {
    pub fn rectangle(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        ComplexRegion::Rectangle { re_lo, re_hi, im_lo, im_hi }
    }

    pub(crate) fn to_rect(&self) -> Result<Rect> {
        let r = match *self {
            ComplexRegion::Rectangle { re_lo, re_hi, im_lo, im_hi } => {
                Rect { re_lo, re_hi, im_lo, im_hi }
            }
            ComplexRegion::RightHalfPlaneTruncated { re_hi, im_bound } => {
                Rect { re_lo: 0.0, re_hi, im_lo: -im_bound, im_hi: im_bound }
            }
        };
        let finite =
            [r.re_lo, r.re_hi, r.im_lo, r.im_hi].iter().all(|v| v.is_finite());
        if !finite || r.re_lo >= r.re_hi || r.im_lo >= r.im_hi {
            return Err(Error::InvalidRegion(alloc::format!(
                "need finite re_lo < re_hi and im_lo < im_hi, got {r:?}"
            )));
        }
        // the branch cut of s^alpha is the open negative real axis
        if r.re_lo < 0.0 && r.im_lo < 0.0 && r.im_hi > 0.0 {
            return Err(Error::InvalidRegion(alloc::format!(
                "region {r:?} crosses the branch cut on the negative real axis"
            )));
        }
        Ok(r)
    }
}

/// One located root of `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootEntry {
    pub location: Complex64,
    /// `|Q(location)|` after polishing.
    pub residual: f64,
    /// Winding count of the isolating cell (1 for simple roots).
    pub multiplicity: usize,
    /// Multiplicity above 3 at a nonzero root: outside the regime the
    /// characteristic function admits, so flagged as suspect.
    pub high_multiplicity_warning: bool,
}

/// Zeros of `Q` in a region, with the winding-number certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub region: ComplexRegion,
    /// Number of zeros inside (with multiplicity) from the argument principle.
    pub winding_count: usize,
    pub roots: Vec<RootEntry>,
    /// False if subdivision gave up before accounting for every zero;
    /// `unresolved` then lists the sub-regions still holding zeros.
    pub complete: bool,
    pub unresolved: Vec<ComplexRegion>,
}

/// Tunables for root counting and location.
#[derive(Debug, Clone, Copy)]
pub struct RootFindConfig {
    /// Accept a polished root when `|Q| <= root_residual_tol`.
    pub root_residual_tol: f64,
    /// Boundary samples with `|Q|` below this abort the winding walk.
    pub boundary_margin: f64,
    /// Initial boundary samples per rectangle side.
    pub nodes_per_side: usize,
    /// Maximum subdivision depth in `locate_roots`.
    pub max_depth: usize,
    /// Cells smaller than this are treated as a single (possibly multiple) root.
    pub cluster_diameter: f64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        RootFindConfig {
            root_residual_tol: 1e-10,
            boundary_margin: 1e-8,
            nodes_per_side: 512,
            max_depth: 48,
            cluster_diameter: 1e-7,
        }
    }
}

/// Number of zeros of `Q` (with multiplicity) inside the region, by the
/// argument principle: the winding number of `Q` along the positively
/// oriented boundary.
///
/// Segments are refined until the argument increment per step is below
/// pi/2 and the chord is short against the distance to the origin, so
/// windings cannot be missed. Fails with [`Error::BoundaryDegenerate`]
/// when `|Q|` drops under the margin on the boundary (a zero on or next
/// to the contour); the caller should perturb the region.
pub fn count_roots(
    p: &ProblemParams,
    region: &ComplexRegion,
    nodes_per_side: usize,
) -> Result<usize> {
    let rect = region.to_rect()?;
    let cfg = RootFindConfig { nodes_per_side: nodes_per_side.max(8), ..Default::default() };
    winding_number(p, &rect, &cfg)
}

fn winding_number(p: &ProblemParams, rect: &Rect, cfg: &RootFindConfig) -> Result<usize> {
    let corners = [
        Complex64::new(rect.re_lo, rect.im_lo),
        Complex64::new(rect.re_hi, rect.im_lo),
        Complex64::new(rect.re_hi, rect.im_hi),
        Complex64::new(rect.re_lo, rect.im_hi),
    ];
    let mut total = 0.0f64;
    for i in 0..4 {
        total += walk_side(p, corners[i], corners[(i + 1) % 4], cfg)?;
    }
    let turns = total / (2.0 * PI);
    let n = libm::round(turns);
    if (turns - n).abs() > 0.25 {
        return Err(Error::DidNotConverge(alloc::format!(
            "winding number did not settle: {turns} turns"
        )));
    }
    if n < -0.5 {
        return Err(Error::DidNotConverge(alloc::format!(
            "negative winding count {n}; Q is not analytic in the region"
        )));
    }
    Ok(n as usize)
}

fn walk_side(p: &ProblemParams, from: Complex64, to: Complex64, cfg: &RootFindConfig) -> Result<f64> {
    let n = cfg.nodes_per_side;
    let mut total = 0.0;
    let mut z0 = from;
    let mut q0 = eval_q(p, z0);
    check_margin(q0, cfg)?;
    for k in 1..=n {
        let t = k as f64 / n as f64;
        let z1 = from + (to - from) * t;
        let q1 = eval_q(p, z1);
        check_margin(q1, cfg)?;
        total += arg_increment(p, z0, q0, z1, q1, 0, cfg)?;
        z0 = z1;
        q0 = q1;
    }
    Ok(total)
}

fn check_margin(q: Complex64, cfg: &RootFindConfig) -> Result<()> {
    let m = q.norm();
    if m < cfg.boundary_margin {
        Err(Error::BoundaryDegenerate { min_abs_q: m })
    } else {
        Ok(())
    }
}

/// Argument increment of Q between two boundary points, bisecting until the
/// step is provably winding-safe.
fn arg_increment(
    p: &ProblemParams,
    z0: Complex64,
    q0: Complex64,
    z1: Complex64,
    q1: Complex64,
    depth: usize,
    cfg: &RootFindConfig,
) -> Result<f64> {
    let d = (q1 / q0).arg();
    let chord = (q1 - q0).norm();
    if d.abs() <= 0.5 * PI && chord <= 0.9 * q0.norm().min(q1.norm()) {
        return Ok(d);
    }
    if depth >= 52 {
        return Err(Error::BoundaryDegenerate { min_abs_q: q0.norm().min(q1.norm()) });
    }
    let zm = 0.5 * (z0 + z1);
    let qm = eval_q(p, zm);
    check_margin(qm, cfg)?;
    Ok(arg_increment(p, z0, q0, zm, qm, depth + 1, cfg)?
        + arg_increment(p, zm, qm, z1, q1, depth + 1, cfg)?)
}

/// The non-negative real root guaranteed by the `a + b >= 0` regime
/// (`Q(0) = -(a+b) <= 0` while `Q(r) -> +inf`), found by bracketing and
/// bisection on `[0, search_hi]`.
///
/// Outside that regime the scan still runs and returns `Ok(None)` when no
/// sign change exists. Returns [`Error::BracketingFailed`] when `a + b >= 0`
/// but `search_hi` is too small to bracket the root.
pub fn find_nonnegative_real_root(p: &ProblemParams, search_hi: f64) -> Result<Option<f64>> {
    let q_real = |r: f64| libm::pow(r, p.alpha) - p.a - p.b * libm::exp(-r * p.tau);
    let q0 = q_real(0.0);
    if q0 == 0.0 {
        return Ok(Some(0.0));
    }
    // scan a mixed linear/log grid for a sign change
    let n = 4096;
    let mut lo = 0.0f64;
    let mut q_lo = q0;
    let mut bracket = None;
    for k in 1..=n {
        let r = search_hi * k as f64 / n as f64;
        let q = q_real(r);
        if q == 0.0 {
            return Ok(Some(r));
        }
        if q_lo.signum() != q.signum() {
            bracket = Some((lo, r));
            break;
        }
        lo = r;
        q_lo = q;
    }
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => {
            if p.a + p.b >= 0.0 {
                return Err(Error::BracketingFailed { search_hi, q_at_hi: q_real(search_hi) });
            }
            return Ok(None);
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let qm = q_real(mid);
        if qm == 0.0 || (hi - lo) < 1e-16 * hi.max(1.0) {
            return Ok(Some(mid));
        }
        if qm.signum() == q_real(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if qm.abs() <= 1e-14 {
            return Ok(Some(mid));
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Locate all zeros of `Q` in the region with the default configuration.
pub fn locate_roots(p: &ProblemParams, region: &ComplexRegion) -> Result<RootReport> {
    locate_roots_with(p, region, &RootFindConfig::default())
}

/// Locate all zeros of `Q` in the region by recursive subdivision on counts
/// from the argument principle, polishing each isolated zero by Newton
/// iteration to `|Q| <= root_residual_tol`.
///
/// When the region is symmetric about the real axis only its closed upper
/// half is searched: real-axis zeros are taken from a sign-change scan of
/// the real segment, and complex zeros are mirrored to their conjugates.
/// The report is incomplete (flagged, with the sub-regions listed) if the
/// subdivision depth is exhausted before the winding count is accounted for.
pub fn locate_roots_with(
    p: &ProblemParams,
    region: &ComplexRegion,
    cfg: &RootFindConfig,
) -> Result<RootReport> {
    let rect = region.to_rect()?;
    let total = winding_number(p, &rect, cfg)?;
    let mut report = RootReport {
        region: *region,
        winding_count: total,
        roots: Vec::new(),
        complete: true,
        unresolved: Vec::new(),
    };
    if total == 0 {
        return Ok(report);
    }

    let span = rect.diameter();
    let symmetric = (rect.im_lo + rect.im_hi).abs() <= 1e-12 * span && rect.im_hi > 0.0;

    let mut roots: Vec<RootEntry> = Vec::new();
    let mut unresolved: Vec<Rect> = Vec::new();

    if symmetric {
        // real-axis roots from a 1-D scan of the real segment
        for r in real_segment_roots(p, rect.re_lo, rect.re_hi, cfg) {
            push_root(&mut roots, r, span, cfg);
        }
        // strictly-upper roots; the lower edge sits just above the axis so
        // real roots stay outside and conjugate pairs stay strictly inside
        let gap = pick_axis_gap(p, &rect, cfg)?;
        let upper = Rect { im_lo: gap, ..rect };
        if upper.im_lo < upper.im_hi {
            subdivide(p, &upper, 0, cfg, &mut roots, &mut unresolved)?;
        }
        // mirror conjugates into the lower half
        let uppers: Vec<RootEntry> = roots
            .iter()
            .filter(|r| r.location.im > 1e-12 * span)
            .cloned()
            .collect();
        for r in uppers {
            push_root(
                &mut roots,
                RootEntry { location: r.location.conj(), ..r },
                span,
                cfg,
            );
        }
    } else {
        subdivide(p, &rect, 0, cfg, &mut roots, &mut unresolved)?;
    }

    let accounted: usize = roots.iter().map(|r| r.multiplicity).sum();
    report.complete = unresolved.is_empty() && accounted == total;
    report.unresolved = unresolved
        .into_iter()
        .map(|r| ComplexRegion::rectangle(r.re_lo, r.re_hi, r.im_lo, r.im_hi))
        .collect();
    roots.sort_by(|x, y| {
        (x.location.im, x.location.re)
            .partial_cmp(&(y.location.im, y.location.re))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    report.roots = roots;
    Ok(report)
}

/// Find a lower edge `im = gap` for the upper-half search that no root sits
/// on: start near the axis and move if the winding walk reports degeneracy.
fn pick_axis_gap(p: &ProblemParams, rect: &Rect, cfg: &RootFindConfig) -> Result<f64> {
    let mut gap = 1e-9 * rect.height().max(1.0);
    for _ in 0..24 {
        let probe = Rect { im_lo: gap, ..*rect };
        match winding_number(p, &probe, cfg) {
            Ok(_) => return Ok(gap),
            Err(Error::BoundaryDegenerate { .. }) => gap *= 3.7,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BoundaryDegenerate { min_abs_q: 0.0 })
}

fn real_segment_roots(p: &ProblemParams, lo: f64, hi: f64, cfg: &RootFindConfig) -> Vec<RootEntry> {
    let q_real = |r: f64| {
        if r >= 0.0 {
            libm::pow(r, p.alpha) - p.a - p.b * libm::exp(-r * p.tau)
        } else {
            // on the upper side of the cut Q is complex for r < 0; the scan
            // only covers the non-negative part of the segment
            f64::NAN
        }
    };
    let lo = lo.max(0.0);
    if lo >= hi {
        return Vec::new();
    }
    let n = 2048;
    let mut out = Vec::new();
    let mut prev_r = lo;
    let mut prev_q = q_real(lo);
    for k in 1..=n {
        let r = lo + (hi - lo) * k as f64 / n as f64;
        let q = q_real(r);
        if prev_q == 0.0 {
            out.push(prev_r);
        } else if prev_q.signum() != q.signum() && prev_q.is_finite() && q.is_finite() {
            let (mut a, mut b) = (prev_r, r);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if q_real(m).signum() == q_real(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
                if (b - a) < 1e-16 * b.max(1.0) {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev_r = r;
        prev_q = q;
    }
    out.into_iter()
        .map(|r| {
            let residual = eval_q(p, Complex64::new(r, 0.0)).norm();
            RootEntry {
                location: Complex64::new(r, 0.0),
                residual,
                multiplicity: 1,
                high_multiplicity_warning: false,
            }
        })
        .filter(|e| e.residual <= cfg.root_residual_tol.max(1e-9))
        .collect()
}

fn push_root(roots: &mut Vec<RootEntry>, entry: RootEntry, span: f64, _cfg: &RootFindConfig) {
    let merge_dist = 1e-8 * span.max(1.0);
    for r in roots.iter() {
        if (r.location - entry.location).norm() < merge_dist {
            return;
        }
    }
    roots.push(entry);
}

fn subdivide(
    p: &ProblemParams,
    rect: &Rect,
    depth: usize,
    cfg: &RootFindConfig,
    roots: &mut Vec<RootEntry>,
    unresolved: &mut Vec<Rect>,
) -> Result<usize> {
    let nodes = if depth == 0 { cfg.nodes_per_side } else { 48 };
    let local = RootFindConfig { nodes_per_side: nodes, ..*cfg };
    let count = match winding_with_jitter(p, rect, &local) {
        Ok(c) => c,
        Err(Error::BoundaryDegenerate { .. }) => {
            unresolved.push(*rect);
            return Ok(0);
        }
        Err(e) => return Err(e),
    };
    if count == 0 {
        return Ok(0);
    }
    let span = rect.diameter();
    if count == 1 || span <= cfg.cluster_diameter {
        if let Some(root) = newton_polish(p, rect, cfg) {
            roots.push(RootEntry {
                location: root,
                residual: eval_q(p, root).norm(),
                multiplicity: count,
                high_multiplicity_warning: count > 3 && root.norm() > 1e-12,
            });
            return Ok(count);
        }
        if span <= cfg.cluster_diameter {
            unresolved.push(*rect);
            return Ok(count);
        }
    }
    if depth >= cfg.max_depth {
        unresolved.push(*rect);
        return Ok(count);
    }
    // split the longer edge; jitter the cut if it lands on a root
    let (r1, r2) = split_rect(rect);
    let c1 = subdivide(p, &r1, depth + 1, cfg, roots, unresolved)?;
    let c2 = subdivide(p, &r2, depth + 1, cfg, roots, unresolved)?;
    if c1 + c2 != count && c1 + c2 == 0 {
        unresolved.push(*rect);
    }
    Ok(count)
}

fn winding_with_jitter(p: &ProblemParams, rect: &Rect, cfg: &RootFindConfig) -> Result<usize> {
    let mut r = *rect;
    let mut last = Err(Error::BoundaryDegenerate { min_abs_q: 0.0 });
    for k in 0..6 {
        last = winding_number(p, &r, cfg);
        match &last {
            Ok(_) => return last,
            Err(Error::BoundaryDegenerate { .. }) => {
                // inflate slightly to move the boundary off the root
                let dw = rect.width() * 0.013 * (k + 1) as f64;
                let dh = rect.height() * 0.017 * (k + 1) as f64;
                r = Rect {
                    re_lo: rect.re_lo - dw,
                    re_hi: rect.re_hi + dw,
                    im_lo: rect.im_lo - dh,
                    im_hi: rect.im_hi + dh,
                };
            }
            Err(_) => return last,
        }
    }
    last
}

fn split_rect(rect: &Rect) -> (Rect, Rect) {
    if rect.width() >= rect.height() {
        let mid = 0.5 * (rect.re_lo + rect.re_hi);
        (Rect { re_hi: mid, ..*rect }, Rect { re_lo: mid, ..*rect })
    } else {
        let mid = 0.5 * (rect.im_lo + rect.im_hi);
        (Rect { im_hi: mid, ..*rect }, Rect { im_lo: mid, ..*rect })
    }
}

fn newton_polish(p: &ProblemParams, rect: &Rect, cfg: &RootFindConfig) -> Option<Complex64> {
    let starts = [
        rect.center(),
        Complex64::new(
            rect.re_lo + 0.25 * rect.width(),
            rect.im_lo + 0.25 * rect.height(),
        ),
        Complex64::new(
            rect.re_lo + 0.75 * rect.width(),
            rect.im_lo + 0.25 * rect.height(),
        ),
        Complex64::new(
            rect.re_lo + 0.25 * rect.width(),
            rect.im_lo + 0.75 * rect.height(),
        ),
        Complex64::new(
            rect.re_lo + 0.75 * rect.width(),
            rect.im_lo + 0.75 * rect.height(),
        ),
    ];
    let slack = 0.75 * rect.diameter();
    for &start in &starts {
        let mut z = start;
        for _ in 0..80 {
            let q = eval_q(p, z);
            if q.norm() <= cfg.root_residual_tol {
                if rect.contains(z, slack) {
                    return Some(z);
                }
                break;
            }
            let dq = eval_q_prime(p, z);
            if dq.norm() < 1e-300 {
                break;
            }
            let step = q / dq;
            z -= step;
            if !z.re.is_finite() || !z.im.is_finite() || !rect.contains(z, 4.0 * slack) {
                break;
            }
        }
    }
    None
}

/// The algebraic stability certificate of the `a <= b < -a` criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    /// `a <= b < -a` holds: the image disk of `a + b e^{-s tau}` misses the
    /// image sector of `s^alpha`, so `Q` has no root with `Re s >= 0`.
    Satisfied(CertificateGeometry),
    /// The coefficient criterion fails; nothing is claimed.
    NotApplicable,
}

/// Witness geometry: the disk `D1 = {|s - a| <= |b|}` (range of the delayed
/// affine part over the closed right half plane) versus the sector
/// `D2 = {|arg s| <= alpha pi / 2}` (range of `s^alpha`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateGeometry {
    pub disk_center: f64,
    pub disk_radius: f64,
    pub sector_half_angle: f64,
    /// Distance between the disk and the sector; zero in the boundary case
    /// `a = b`, where the sets touch only at the origin (and the origin is
    /// still not a root since `Q(0) = -(a+b) != 0`).
    pub separation: f64,
}

/// Purely algebraic check of `a <= b < -a`; no root search is performed.
pub fn stability_certificate(p: &ProblemParams) -> Certificate {
    if p.satisfies_criterion() {
        let disk_radius = p.b.abs();
        let separation = (-p.a - disk_radius).max(0.0);
        Certificate::Satisfied(CertificateGeometry {
            disk_center: p.a,
            disk_radius,
            sector_half_angle: 0.5 * p.alpha * PI,
            separation,
        })
    } else {
        Certificate::NotApplicable
    }
}
