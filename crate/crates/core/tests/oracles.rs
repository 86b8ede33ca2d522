mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use entropic_lg::entropy::{EntropicOrder, JointTable};
use entropic_lg::inefficiency::{lg_inefficient, Efficiency};
use entropic_lg::lg::{argmax_theta, family_report, lg_conditional_form, lg_report, ThetaGrid};
use entropic_lg::quantum::{protocol_joints, ProtocolSpec};
use entropic_lg::systems::{make_protocol, SystemFamily, SystemKind};

fn ord(a: f64) -> EntropicOrder {
    EntropicOrder::new(a).unwrap()
}

fn spec(kind: SystemKind, theta: f64, beta: f64) -> ProtocolSpec {
    make_protocol(&SystemFamily::new(kind, theta, beta)).unwrap()
}

fn assert_table(t: &JointTable, expected: &[[f64; 2]; 2], tol: f64) {
    for r in 0..2 {
        for c in 0..2 {
            assert_abs_diff_eq!(t.get(r, c), expected[r][c], epsilon = tol);
        }
    }
}

// Values pinned by enumerating every outcome path of the qubit protocol.
const J01_QUARTER: [[f64; 2]; 2] = [
    [0.6239975285119401, 0.10706105011806478],
    [0.03938555928866145, 0.22955586208133363],
];
const J12_QUARTER: [[f64; 2]; 2] = [
    [0.5662328838544389, 0.09715020394616268],
    [0.04929640546056356, 0.28732050673883486],
];
const J02_QUARTER: [[f64; 2]; 2] = [
    [0.3655292893150024, 0.3655292893150025],
    [0.13447071068499758, 0.13447071068499752],
];

#[test]
fn qubit_quarter_turn_tables_are_pinned() {
    let j = protocol_joints(&spec(SystemKind::Qubit, 0.25 * PI, 1.0)).unwrap();
    assert_table(&j.j01, &J01_QUARTER, 1e-15);
    assert_table(&j.j12, &J12_QUARTER, 1e-15);
    assert_table(&j.j02, &J02_QUARTER, 1e-15);
    for (a, b) in j.j02.row_sums().iter().zip(j.p0.as_slice()) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }
}

#[test]
fn tables_match_path_enumeration() {
    for kind in [SystemKind::Qubit, SystemKind::Qutrit] {
        let (levels, unitary): (Vec<f64>, fn(f64) -> common::Matrix) = match kind {
            SystemKind::Qubit => (vec![0.0, 1.0], common::qubit),
            SystemKind::Qutrit => (vec![0.0, 0.5, 1.0], common::qutrit),
        };
        for beta in [0.0, 1.0, 5.0] {
            for i in 0..40 {
                let theta = -1.0 + 0.19 * i as f64;
                let u = unitary(theta);
                let reference = common::path_tables(&common::gibbs(&levels, beta), &u, &u);
                let j = protocol_joints(&spec(kind, theta, beta)).unwrap();
                for (lib, want) in [&j.j01, &j.j12, &j.j02].into_iter().zip(&reference) {
                    for (a, b) in lib.as_slice().iter().zip(common::flat(want)) {
                        assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
                    }
                }
                for alpha in [1.0, 1.5, 2.0, 3.0] {
                    let r = lg_report(&spec(kind, theta, beta), ord(alpha)).unwrap();
                    assert_abs_diff_eq!(
                        r.c_alpha,
                        common::lg_from_tables(&reference, alpha),
                        epsilon = 1e-13
                    );
                    let scale = common::ln_alpha(levels.len() as f64, alpha);
                    assert_abs_diff_eq!(r.c_tilde, r.c_alpha / scale, epsilon = 1e-15);
                }
            }
        }
    }
}

#[test]
fn lossy_point_is_pinned() {
    let s = spec(SystemKind::Qubit, 0.15 * PI, 5.0);
    assert_abs_diff_eq!(
        lg_conditional_form(&s, ord(2.0)).unwrap(),
        0.1298737434452324,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(
        lg_report(&s, ord(2.0)).unwrap().c_alpha,
        0.1298737434452324,
        epsilon = 1e-14
    );

    let rep = lg_inefficient(&s, ord(2.0), Efficiency::new(0.97).unwrap()).unwrap();
    assert_abs_diff_eq!(rep.c_eta_direct, 0.06640598656241181, epsilon = 1e-14);
    assert_abs_diff_eq!(rep.c_eta, 0.06628861817803683, epsilon = 1e-14);
    assert_abs_diff_eq!(rep.delta, 0.04868767310181242, epsilon = 1e-14);
}

#[test]
fn lossy_quantity_matches_distorted_tables() {
    for (theta, beta) in [(0.15 * PI, 5.0), (0.1 * PI, 1.0), (0.8 * PI, 0.3)] {
        let u = common::qubit(theta);
        let reference = common::path_tables(&common::gibbs(&[0.0, 1.0], beta), &u, &u);
        for alpha in [1.0, 1.5, 2.0, 2.6, 3.5] {
            for eta in [0.0, 0.5, 0.9, 0.95, 0.99, 1.0] {
                let rep = lg_inefficient(
                    &spec(SystemKind::Qubit, theta, beta),
                    ord(alpha),
                    Efficiency::new(eta).unwrap(),
                )
                .unwrap();
                let direct = common::lossy_lg(&reference, eta, alpha);
                assert_abs_diff_eq!(rep.c_eta_direct, direct, epsilon = 1e-12);
                assert_abs_diff_eq!(rep.c_eta + rep.marginal_mismatch, direct, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn shannon_argmax_is_pinned() {
    // A 10^6-point scan puts the first maximum at theta / pi = 0.12633.
    let (theta, value) = argmax_theta(
        SystemKind::Qubit,
        1.0,
        EntropicOrder::SHANNON,
        &ThetaGrid::default(),
    )
    .unwrap();
    assert_abs_diff_eq!(theta / PI, 0.12633, epsilon = 2e-6);
    assert!(value >= 0.13425437997455936 - 1e-15);
    assert_abs_diff_eq!(value, 0.13425437997455936, epsilon = 1e-11);
}

#[test]
fn large_order_maximum_is_pinned() {
    let (_, value) =
        argmax_theta(SystemKind::Qubit, 1.0, ord(50.0), &ThetaGrid::default()).unwrap();
    assert_abs_diff_eq!(value, 3.5666e-8, epsilon = 1e-11);
}

#[test]
fn shannon_curve_is_mirror_symmetric() {
    for i in 1..100 {
        let t = i as f64 * PI / 100.0;
        let a = family_report(SystemKind::Qubit, 1.0, EntropicOrder::SHANNON, t).unwrap();
        let b = family_report(SystemKind::Qubit, 1.0, EntropicOrder::SHANNON, PI - t).unwrap();
        assert_abs_diff_eq!(a.c_alpha, b.c_alpha, epsilon = 1e-13);
    }
}
