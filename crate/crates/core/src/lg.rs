//! Entropic Leggett-Garg quantities for work fluctuations and their scans
//! over the rotation angle.
//!
//! `C_alpha = H(W20) + H(E1) - H(W21) - H(W10)` is non-positive for every
//! macrorealist model when `alpha >= 1`; a positive value certifies a violation.
//! The rescaled `C~_alpha = C_alpha / ln_alpha(d)` never exceeds one.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{
    conditional_entropy, joint_entropy, max_entropy, tsallis_entropy, Conditioning, EntropicOrder,
};
use crate::error::{Error, Result};
use crate::quantum::{protocol_joints, ProtocolJoints, ProtocolSpec};
use crate::systems::{make_protocol, SystemFamily, SystemKind};

/// Default violation threshold applied to `C_alpha`.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Default number of uniform angle samples on `[0, pi)`.
pub const DEFAULT_THETA_POINTS: usize = 2001;

/// Width, in units of pi, to which domain edges are bisected.
pub const EDGE_RESOLUTION: f64 = 1e-6;

/// Width, in units of pi, to which the maximizing angle is refined.
pub const ARGMAX_RESOLUTION: f64 = 1e-8;

/// Grid values whose relative difference is below this are ties.
const TIE_RELATIVE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LgReport {
    pub alpha: f64,
    pub h_w10: f64,
    pub h_w21: f64,
    pub h_w20: f64,
    pub h_e1: f64,
    pub c_alpha: f64,
    pub c_tilde: f64,
}

/// Evaluates the four entropies from precomputed protocol joints.
pub fn report_from_joints(joints: &ProtocolJoints, order: EntropicOrder) -> LgReport {
    let h_w10 = joint_entropy(&joints.j01, order);
    let h_w21 = joint_entropy(&joints.j12, order);
    let h_w20 = joint_entropy(&joints.j02, order);
    let h_e1 = tsallis_entropy(&joints.p1, order);
    let c_alpha = h_w20 + h_e1 - h_w21 - h_w10;
    LgReport {
        alpha: order.value(),
        h_w10,
        h_w21,
        h_w20,
        h_e1,
        c_alpha,
        c_tilde: c_alpha / max_entropy(joints.p0.len(), order),
    }
}

pub fn lg_report(spec: &ProtocolSpec, order: EntropicOrder) -> Result<LgReport> {
    order.require_at_least_one()?;
    Ok(report_from_joints(&protocol_joints(spec)?, order))
}

/// `H(E2|E0) - H(E2|E1) - H(E1|E0)`, algebraically equal to `C_alpha`.
pub fn lg_conditional_form(spec: &ProtocolSpec, order: EntropicOrder) -> Result<f64> {
    order.require_at_least_one()?;
    let j = protocol_joints(spec)?;
    Ok(conditional_entropy(&j.j02, Conditioning::Rows, order)
        - conditional_entropy(&j.j12, Conditioning::Rows, order)
        - conditional_entropy(&j.j01, Conditioning::Rows, order))
}

/// Report for one member of a system family.
pub fn family_report(
    kind: SystemKind,
    beta: f64,
    order: EntropicOrder,
    theta: f64,
) -> Result<LgReport> {
    lg_report(
        &make_protocol(&SystemFamily::new(kind, theta, beta))?,
        order,
    )
}

/// `points` uniform angles `i pi / points` covering `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaGrid {
    points: usize,
}

impl ThetaGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Parameter(
                "theta grid must contain at least one point".into(),
            ));
        }
        Ok(ThetaGrid { points })
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn step(&self) -> f64 {
        PI / self.points as f64
    }

    #[inline]
    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * PI / self.points as f64
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.theta(i))
    }
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid {
            points: DEFAULT_THETA_POINTS,
        }
    }
}

/// Closed angle interval `[start, end]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }
}

/// Sorted, disjoint angle intervals inside `[0, pi)` on which `C_alpha > epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationDomain {
    pub intervals: Vec<Interval>,
    pub epsilon: f64,
}

impl ViolationDomain {
    /// Total length in radians.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.intervals
            .iter()
            .any(|iv| iv.start <= theta && theta <= iv.end)
    }
}

/// Sorted union of possibly overlapping intervals.
pub fn union_intervals<'a>(intervals: impl IntoIterator<Item = &'a Interval>) -> Vec<Interval> {
    let mut all: Vec<Interval> = intervals.into_iter().copied().collect();
    all.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
    let mut merged: Vec<Interval> = Vec::with_capacity(all.len());
    for iv in all {
        match merged.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => merged.push(iv),
        }
    }
    merged
}

/// Shrinks `[inside, outside]` (either order) around the point where `member` flips.
fn bisect_edge(
    mut inside: f64,
    mut outside: f64,
    member: &impl Fn(f64) -> Result<bool>,
) -> Result<f64> {
    let tol = EDGE_RESOLUTION * PI;
    while (outside - inside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if member(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// Scans `C_alpha` on the grid and bisects every sign change.
pub fn violation_domain(
    kind: SystemKind,
    beta: f64,
    order: EntropicOrder,
    grid: &ThetaGrid,
    epsilon: f64,
) -> Result<ViolationDomain> {
    order.require_at_least_one()?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::Parameter(format!(
            "violation threshold must be finite and non-negative, got {epsilon}"
        )));
    }
    let member = |theta: f64| -> Result<bool> {
        Ok(family_report(kind, beta, order, theta)?.c_alpha > epsilon)
    };
    // One extra closing sample at pi brackets an interval that runs to the end.
    let n = grid.points();
    let flags: Vec<bool> = (0..=n)
        .into_par_iter()
        .map(|i| member(if i == n { PI } else { grid.theta(i) }))
        .collect::<Result<_>>()?;
    let at = |i: usize| if i == n { PI } else { grid.theta(i) };

    let mut intervals = Vec::new();
    let mut start = if flags[0] { Some(0.0) } else { None };
    for i in 1..=n {
        match (flags[i - 1], flags[i]) {
            (false, true) => start = Some(bisect_edge(at(i), at(i - 1), &member)?),
            (true, false) => {
                let end = bisect_edge(at(i - 1), at(i), &member)?;
                let s = start.take().expect("interval opened before it closes");
                intervals.push(Interval { start: s, end });
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push(Interval { start: s, end: PI });
    }
    Ok(ViolationDomain { intervals, epsilon })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainExtension {
    /// Measure of the alpha = 1 domain, radians.
    pub alpha1_measure: f64,
    /// Measure of the union of all per-alpha domains, radians.
    pub union_measure: f64,
    /// `100 (union - alpha1) / alpha1`.
    pub percent: f64,
}

/// Growth of the violation domain when every order in `alphas` is admitted.
pub fn domain_extension(
    kind: SystemKind,
    beta: f64,
    alphas: &[f64],
    grid: &ThetaGrid,
    epsilon: f64,
) -> Result<DomainExtension> {
    if !alphas.contains(&1.0) {
        return Err(Error::Parameter("alpha grid must include 1".into()));
    }
    let orders: Vec<EntropicOrder> = alphas
        .iter()
        .map(|&a| EntropicOrder::at_least_one(a))
        .collect::<Result<_>>()?;
    let domains: Vec<ViolationDomain> = orders
        .par_iter()
        .map(|&o| violation_domain(kind, beta, o, grid, epsilon))
        .collect::<Result<_>>()?;
    let reference = alphas
        .iter()
        .position(|&a| a == 1.0)
        .map(|i| domains[i].measure())
        .expect("alpha = 1 checked above");
    if reference <= 0.0 {
        return Err(Error::UndefinedExtension(format!(
            "no violation for alpha = 1 ({kind}, beta = {beta})"
        )));
    }
    let union = union_intervals(domains.iter().flat_map(|d| d.intervals.iter()));
    let union_measure: f64 = union.iter().map(Interval::length).sum();
    Ok(DomainExtension {
        alpha1_measure: reference,
        union_measure,
        percent: 100.0 * (union_measure - reference) / reference,
    })
}

/// Inclusive `lo..=hi` in steps of `step`, computed by index to avoid drift.
pub fn alpha_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
        return Err(Error::Parameter(format!(
            "invalid alpha range {lo}:{hi}:{step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| {
            // Round to 12 decimals so that 1 + 100 * 0.01 prints as 2.
            let a = lo + i as f64 * step;
            (a * 1e12).round() / 1e12
        })
        .collect())
}

fn is_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RELATIVE * a.abs().max(b.abs())
}

/// Angle maximizing `C~_alpha`, refined by golden-section search.
///
/// Grid values within a relative `1e-9` of each other count as ties and the
/// smallest angle wins, which matters for the mirror-symmetric qubit curves.
pub fn argmax_theta(
    kind: SystemKind,
    beta: f64,
    order: EntropicOrder,
    grid: &ThetaGrid,
) -> Result<(f64, f64)> {
    order.require_at_least_one()?;
    argmax_on_grid(
        |theta| family_report(kind, beta, order, theta).map(|r| r.c_tilde),
        grid,
    )
}

/// Grid argmax of `value` followed by golden-section refinement within one
/// grid step on either side. The refined point is kept only if it strictly
/// improves on the grid maximum.
pub fn argmax_on_grid<F>(value: F, grid: &ThetaGrid) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let values: Vec<f64> = (0..grid.points())
        .into_par_iter()
        .map(|i| value(grid.theta(i)))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] && !is_tie(v, values[best]) {
            best = i;
        }
    }
    let (theta0, v0) = (grid.theta(best), values[best]);

    let step = grid.step();
    let mut lo = (theta0 - step).max(0.0);
    let mut hi = (theta0 + step).min(PI);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = value(x1)?;
    let mut f2 = value(x2)?;
    while hi - lo > ARGMAX_RESOLUTION * PI {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = value(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = value(x2)?;
        }
    }
    let refined = 0.5 * (lo + hi);
    let refined_value = value(refined)?;
    if refined_value > v0 && !is_tie(refined_value, v0) {
        Ok((refined, refined_value))
    } else {
        Ok((theta0, v0))
    }
}
