//! Lossy detectors: every measurement fails to click with probability
//! `1 - eta`, which adds an explicit no-click outcome as the last index.
//!
//! The altered quantity `C^(eta eta)` is available two ways: directly from the
//! distorted tables, and in closed form as `eta^(2 alpha) C_alpha - Delta`.
//! The closed form assumes the three pair tables share their single-time
//! marginals. Quantum protocols break that for the last time step (measuring
//! at t1 changes the t2 statistics), and the gap is reported as
//! [`InefficiencyReport::marginal_mismatch`]:
//! `direct = closed + marginal_mismatch` holds exactly.

use serde::Serialize;

use crate::entropy::{
    binary_entropy, joint_entropy, quaternary_entropy, tsallis_entropy, EntropicOrder, JointTable,
    ProbVector, CLIP_TOL,
};
use crate::error::{Error, Result};
use crate::lg::{report_from_joints, DEFAULT_EPSILON};
use crate::quantum::{protocol_joints, ProtocolJoints, ProtocolSpec};

/// Detector efficiency in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Efficiency(f64);

impl Efficiency {
    pub fn new(eta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&eta) {
            Ok(Efficiency(eta))
        } else {
            Err(Error::Domain(format!(
                "efficiency must lie in [0, 1], got {eta}"
            )))
        }
    }

    pub const PERFECT: Efficiency = Efficiency(1.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

#[inline]
fn pow(x: f64, a: f64) -> f64 {
    // 0^a = 0 for a > 0, and 0^0 never occurs since orders are positive.
    if x == 0.0 {
        0.0
    } else {
        x.powf(a)
    }
}

/// `(eta p(x)..., 1 - eta)`.
pub fn distort_single(p: &ProbVector, eta: Efficiency) -> ProbVector {
    let e = eta.value();
    let mut v: Vec<f64> = p.as_slice().iter().map(|x| e * x).collect();
    v.push(1.0 - e);
    ProbVector::normalized(v).expect("distorting a valid distribution stays valid")
}

/// The `(rows + 1) x (cols + 1)` table of an ordered pair observed through
/// two lossy detectors.
pub fn distort_pair(joint: &JointTable, eta: Efficiency) -> JointTable {
    let e = eta.value();
    let miss = 1.0 - e;
    let (n, m) = (joint.rows(), joint.cols());
    let row_m = joint.row_sums();
    let col_m = joint.col_sums();
    let mut data = Vec::with_capacity((n + 1) * (m + 1));
    for (r, &pr) in row_m.iter().enumerate() {
        data.extend(joint.row(r).iter().map(|q| e * e * q));
        data.push(e * miss * pr);
    }
    data.extend(col_m.iter().map(|pc| e * miss * pc));
    data.push(miss * miss);
    JointTable::normalized(n + 1, m + 1, data).expect("distorting a valid table stays valid")
}

/// `eta^alpha H + h_b(eta)`, the entropy of a single distorted variable.
pub fn entropy_single_closed(h: f64, eta: Efficiency, order: EntropicOrder) -> Result<f64> {
    if h.is_nan() || h < -CLIP_TOL {
        return Err(Error::Domain(format!(
            "entropy must be non-negative, got {h}"
        )));
    }
    let e = eta.value();
    Ok(pow(e, order.value()) * h + binary_entropy(e, order)?)
}

/// `eta^(2a) H(X,Y) + eta^a (1-eta)^a (H(X) + H(Y)) + h_q(eta)`.
pub fn entropy_pair_closed(
    h_joint: f64,
    h_x: f64,
    h_y: f64,
    eta: Efficiency,
    order: EntropicOrder,
) -> Result<f64> {
    if ![h_joint, h_x, h_y].iter().all(|&h| h >= -CLIP_TOL) {
        return Err(Error::Domain("entropies must be non-negative".into()));
    }
    let (e, a) = (eta.value(), order.value());
    Ok(pow(e, 2.0 * a) * h_joint
        + pow(e, a) * pow(1.0 - e, a) * (h_x + h_y)
        + quaternary_entropy(e, order)?)
}

/// The penalty `Delta_alpha(eta)` given the middle-time entropy `H(E1)`.
pub fn delta(h_e1: f64, eta: Efficiency, order: EntropicOrder) -> Result<f64> {
    let (e, a) = (eta.value(), order.value());
    let miss = pow(1.0 - e, a);
    Ok(
        pow(e, a) * (pow(e, a) + 2.0 * miss - 1.0) * h_e1 + quaternary_entropy(e, order)?
            - binary_entropy(e, order)?,
    )
}

/// `C^(eta eta)` evaluated on the distorted tables themselves.
pub fn altered_direct(joints: &ProtocolJoints, eta: Efficiency, order: EntropicOrder) -> f64 {
    joint_entropy(&distort_pair(&joints.j02, eta), order)
        + tsallis_entropy(&distort_single(&joints.p1, eta), order)
        - joint_entropy(&distort_pair(&joints.j12, eta), order)
        - joint_entropy(&distort_pair(&joints.j01, eta), order)
}

/// `eta^a (1-eta)^a` times the amount by which the single-time marginals of
/// the three pair tables disagree; zero when they come from one joint.
pub fn marginal_mismatch(joints: &ProtocolJoints, eta: Efficiency, order: EntropicOrder) -> f64 {
    let (e, a) = (eta.value(), order.value());
    let h = |p: ProbVector| tsallis_entropy(&p, order);
    let spread = h(joints.j02.row_marginal()) + h(joints.j02.column_marginal())
        - h(joints.j12.row_marginal())
        - h(joints.j12.column_marginal())
        - h(joints.j01.row_marginal())
        - h(joints.j01.column_marginal())
        + 2.0 * h(joints.p1.clone());
    pow(e, a) * pow(1.0 - e, a) * spread
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InefficiencyReport {
    pub eta: f64,
    pub alpha: f64,
    /// Ideal-detector `C_alpha`.
    pub c_alpha: f64,
    /// Closed form `eta^(2 alpha) C_alpha - Delta`.
    pub c_eta: f64,
    /// Same quantity from the distorted tables.
    pub c_eta_direct: f64,
    pub delta: f64,
    /// `c_eta_direct - c_eta` predicted from the marginals.
    pub marginal_mismatch: f64,
    /// `Delta / (eta^(2 alpha) C_alpha)`, present only when `C_alpha > 1e-12`.
    pub ratio: Option<f64>,
}

pub fn report_from_joints_inefficient(
    joints: &ProtocolJoints,
    order: EntropicOrder,
    eta: Efficiency,
) -> Result<InefficiencyReport> {
    order.require_at_least_one()?;
    let ideal = report_from_joints(joints, order);
    let (e, a) = (eta.value(), order.value());
    let scale = pow(e, 2.0 * a);
    let penalty = delta(ideal.h_e1, eta, order)?;
    let ratio = (ideal.c_alpha > DEFAULT_EPSILON).then(|| penalty / (scale * ideal.c_alpha));
    Ok(InefficiencyReport {
        eta: e,
        alpha: a,
        c_alpha: ideal.c_alpha,
        c_eta: scale * ideal.c_alpha - penalty,
        c_eta_direct: altered_direct(joints, eta, order),
        delta: penalty,
        marginal_mismatch: marginal_mismatch(joints, eta, order),
        ratio,
    })
}

pub fn lg_inefficient(
    spec: &ProtocolSpec,
    order: EntropicOrder,
    eta: Efficiency,
) -> Result<InefficiencyReport> {
    order.require_at_least_one()?;
    report_from_joints_inefficient(&protocol_joints(spec)?, order, eta)
}

/// `r_alpha(eta) = Delta / (eta^(2 alpha) C_alpha)`, defined only where `C_alpha > 1e-12`.
pub fn ratio(spec: &ProtocolSpec, order: EntropicOrder, eta: Efficiency) -> Result<f64> {
    let report = lg_inefficient(spec, order, eta)?;
    report.ratio.ok_or_else(|| {
        Error::NoViolation(format!(
            "C_alpha = {:e} <= {DEFAULT_EPSILON:e} at alpha = {}",
            report.c_alpha,
            order.value()
        ))
    })
}
