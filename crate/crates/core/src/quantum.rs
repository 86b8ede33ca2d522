//! Two-point-measurement machinery for a three-time protocol.
//!
//! Each interval unitary is supplied directly in the ordered energy
//! eigenbases of the adjacent Hamiltonians, so the projective energy
//! measurements are rank-one projectors onto basis vectors.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::entropy::{JointTable, ProbVector};
use crate::error::{Error, Result};

/// Maximum tolerated `max |U^dagger U - I|` entry.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Maximum tolerated deviation of a stochastic-matrix column sum from one.
pub const STOCHASTIC_TOL: f64 = 1e-10;

/// Dense row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Validation(format!(
                "square matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Validation("matrix rows must form a square".into()));
        }
        Self::new(
            dim,
            rows.iter()
                .flatten()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        ComplexMatrix { dim, data }
    }

    /// Rank-one projector onto basis vector `index`.
    pub fn basis_projector(dim: usize, index: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[index * dim + index] = Complex64::new(1.0, 0.0);
        ComplexMatrix { dim, data }
    }

    /// Diagonal matrix `diag(exp(i phi_k))`.
    pub fn phases(angles: &[f64]) -> Self {
        let dim = angles.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &phi) in angles.iter().enumerate() {
            data[i * dim + i] = Complex64::from_polar(1.0, phi);
        }
        ComplexMatrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self.get(c, r).conj());
            }
        }
        ComplexMatrix { dim: n, data }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Validation(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                for c in 0..n {
                    data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        Ok(ComplexMatrix { dim: n, data })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `max |(M^dagger M - I)_{rc}|`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has matching dimension");
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram.get(r, c) - target).norm());
            }
        }
        worst
    }
}

/// A complex matrix verified to be unitary within [`UNITARITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.unitarity_residual();
        if residual > UNITARITY_TOL {
            return Err(Error::Validation(format!(
                "matrix is not unitary: max |U^dagger U - I| = {residual:e}"
            )));
        }
        Ok(UnitaryMatrix(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix(ComplexMatrix::identity(dim))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Product `self * other`, which is again unitary.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        self.0.matmul(&other.0).map(UnitaryMatrix)
    }

    /// `D_left * U * D_right` for diagonal phase matrices.
    pub fn with_phases(&self, left: &[f64], right: &[f64]) -> Result<UnitaryMatrix> {
        let l = ComplexMatrix::phases(left);
        let r = ComplexMatrix::phases(right);
        UnitaryMatrix::new(l.matmul(&self.0)?.matmul(&r)?)
    }
}

/// Haar-distributed unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> UnitaryMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        let mut degenerate = false;
        for j in 0..dim {
            for i in 0..j {
                let overlap: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (head, tail) = cols.split_at_mut(j);
                for (b, a) in tail[0].iter_mut().zip(&head[i]) {
                    *b -= overlap * a;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        if degenerate {
            continue;
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (c, col) in cols.iter().enumerate() {
            for (r, z) in col.iter().enumerate() {
                data[r * dim + c] = *z;
            }
        }
        if let Ok(u) = UnitaryMatrix::new(ComplexMatrix { dim, data }) {
            return u;
        }
    }
}

/// Non-degenerate spectrum, strictly increasing, in units of the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevels(Vec<f64>);

impl EnergyLevels {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Validation("energy spectrum is empty".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::Validation("energy levels must be finite".into()));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation(
                "energy levels must be strictly increasing (non-degenerate)".into(),
            ));
        }
        Ok(EnergyLevels(levels))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// A three-time experiment: spectra at t0, t1, t2, the initial inverse
/// temperature, and the unitaries for the intervals t0 -> t1 and t1 -> t2.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    levels0: EnergyLevels,
    levels1: EnergyLevels,
    levels2: EnergyLevels,
    beta: f64,
    u10: UnitaryMatrix,
    u21: UnitaryMatrix,
}

impl ProtocolSpec {
    pub fn new(
        levels0: EnergyLevels,
        levels1: EnergyLevels,
        levels2: EnergyLevels,
        beta: f64,
        u10: UnitaryMatrix,
        u21: UnitaryMatrix,
    ) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::Validation(format!(
                "inverse temperature must be finite and non-negative, got {beta}"
            )));
        }
        let d = levels0.len();
        if [levels1.len(), levels2.len(), u10.dim(), u21.dim()]
            .iter()
            .any(|&n| n != d)
        {
            return Err(Error::Validation(format!(
                "protocol dimensions disagree: levels {}/{}/{}, unitaries {}/{}",
                levels0.len(),
                levels1.len(),
                levels2.len(),
                u10.dim(),
                u21.dim()
            )));
        }
        Ok(ProtocolSpec {
            levels0,
            levels1,
            levels2,
            beta,
            u10,
            u21,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.levels0.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn levels0(&self) -> &EnergyLevels {
        &self.levels0
    }

    pub fn levels1(&self) -> &EnergyLevels {
        &self.levels1
    }

    pub fn levels2(&self) -> &EnergyLevels {
        &self.levels2
    }

    pub fn u10(&self) -> &UnitaryMatrix {
        &self.u10
    }

    pub fn u21(&self) -> &UnitaryMatrix {
        &self.u21
    }
}

/// Column-stochastic matrix `T[l][k] = p(l | k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl StochasticMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Validation(format!(
                "stochastic matrix of dimension {dim} needs {} entries",
                dim * dim
            )));
        }
        if data
            .iter()
            .any(|&t| !(0.0..=1.0 + STOCHASTIC_TOL).contains(&t))
        {
            return Err(Error::Validation(
                "stochastic matrix entries must lie in [0, 1]".into(),
            ));
        }
        let m = StochasticMatrix { dim, data };
        for (k, s) in m.column_sums().into_iter().enumerate() {
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Validation(format!(
                    "column {k} of stochastic matrix sums to {s}"
                )));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Validation("stochastic matrix must be square".into()));
        }
        Self::new(dim, rows.concat())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p(to | from)`.
    #[inline]
    pub fn get(&self, to: usize, from: usize) -> f64 {
        self.data[to * self.dim + from]
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|k| (0..self.dim).map(|l| self.get(l, k)).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|l| (0..self.dim).map(|k| self.get(l, k)).sum())
            .collect()
    }
}

/// Thermal populations `exp(-beta e_k) / Z`.
pub fn gibbs_distribution(levels: &EnergyLevels, beta: f64) -> Result<ProbVector> {
    if levels.is_empty() {
        return Err(Error::Validation("energy spectrum is empty".into()));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Validation(format!(
            "inverse temperature must be finite and non-negative, got {beta}"
        )));
    }
    // Shifting by the ground energy keeps the largest weight at exactly one.
    let ground = levels.as_slice()[0];
    let weights: Vec<f64> = levels
        .as_slice()
        .iter()
        .map(|e| (-beta * (e - ground)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    ProbVector::normalized(weights.into_iter().map(|w| w / z).collect())
}

/// `T[l][k] = |U[l][k]|^2`: probability of outcome `l` after preparing `k`.
pub fn transition_matrix(u: &UnitaryMatrix) -> StochasticMatrix {
    let n = u.dim();
    let data = (0..n)
        .flat_map(|l| (0..n).map(move |k| (l, k)))
        .map(|(l, k)| u.matrix().get(l, k).norm_sqr())
        .collect();
    StochasticMatrix::new(n, data).expect("unitary moduli squared are doubly stochastic")
}

/// Joint of two adjacent projective measurements: `J[k][l] = p_in[k] T[l][k]`.
pub fn pair_joint_measured(p_in: &ProbVector, t: &StochasticMatrix) -> Result<JointTable> {
    let n = t.dim();
    if p_in.len() != n {
        return Err(Error::Validation(format!(
            "distribution has {} outcomes but transition matrix is {n}x{n}",
            p_in.len()
        )));
    }
    let data = (0..n)
        .flat_map(|k| (0..n).map(move |l| p_in[k] * t.get(l, k)))
        .collect();
    JointTable::normalized(n, n, data)
}

fn check_skip_dims(p0: &ProbVector, u10: &UnitaryMatrix, u21: &UnitaryMatrix) -> Result<usize> {
    let n = p0.len();
    if u10.dim() != n || u21.dim() != n {
        return Err(Error::Validation(format!(
            "distribution has {n} outcomes but unitaries are {}x{} and {}x{}",
            u10.dim(),
            u10.dim(),
            u21.dim(),
            u21.dim()
        )));
    }
    Ok(n)
}

/// Joint of the t0 and t2 energies with no measurement at t1:
/// `J[k][m] = p0[k] |(U21 U10)[m][k]|^2`.
pub fn skip_joint(p0: &ProbVector, u10: &UnitaryMatrix, u21: &UnitaryMatrix) -> Result<JointTable> {
    let n = check_skip_dims(p0, u10, u21)?;
    let total = u21.compose(u10)?;
    let data = (0..n)
        .flat_map(|k| (0..n).map(move |m| (k, m)))
        .map(|(k, m)| p0[k] * total.matrix().get(m, k).norm_sqr())
        .collect();
    JointTable::normalized(n, n, data)
}

/// Same joint as [`skip_joint`], evaluated as the double sum over
/// intermediate projectors `sum_{l,l'} Tr(P_m U21 P_l U10 P_k U10^dagger P_l' U21^dagger)`.
pub fn skip_joint_literal(
    p0: &ProbVector,
    u10: &UnitaryMatrix,
    u21: &UnitaryMatrix,
) -> Result<JointTable> {
    let n = check_skip_dims(p0, u10, u21)?;
    let a10 = u10.matrix();
    let a21 = u21.matrix();
    let a10_dag = a10.adjoint();
    let a21_dag = a21.adjoint();
    let proj: Vec<ComplexMatrix> = (0..n)
        .map(|i| ComplexMatrix::basis_projector(n, i))
        .collect();

    let mut data = vec![0.0; n * n];
    for k in 0..n {
        // U10 P_k U10^dagger
        let evolved = a10.matmul(&proj[k])?.matmul(&a10_dag)?;
        for m in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..n {
                let left = proj[m].matmul(a21)?.matmul(&proj[l])?;
                for p_lp in &proj {
                    let right = p_lp.matmul(&a21_dag)?;
                    acc += left.matmul(&evolved)?.matmul(&right)?.trace();
                }
            }
            data[k * n + m] = p0[k] * acc.re;
        }
    }
    JointTable::normalized(n, n, data)
}

/// Everything the entropic quantities need from one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolJoints {
    /// (E0, E1) with both energies measured.
    pub j01: JointTable,
    /// (E1, E2) with both energies measured.
    pub j12: JointTable,
    /// (E0, E2) with the t1 measurement skipped.
    pub j02: JointTable,
    pub p0: ProbVector,
    pub p1: ProbVector,
    /// Column marginal of `j12`.
    pub p2: ProbVector,
}

pub fn protocol_joints(spec: &ProtocolSpec) -> Result<ProtocolJoints> {
    let p0 = gibbs_distribution(spec.levels0(), spec.beta())?;
    let t10 = transition_matrix(spec.u10());
    let t21 = transition_matrix(spec.u21());
    let j01 = pair_joint_measured(&p0, &t10)?;
    let p1 = j01.column_marginal();
    let j12 = pair_joint_measured(&p1, &t21)?;
    let p2 = j12.column_marginal();
    let j02 = skip_joint(&p0, spec.u10(), spec.u21())?;
    Ok(ProtocolJoints {
        j01,
        j12,
        j02,
        p0,
        p1,
        p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rotation(theta: f64) -> UnitaryMatrix {
        let (s, c) = (theta / 2.0).sin_cos();
        UnitaryMatrix::new(ComplexMatrix::from_real_rows(&[vec![c, -s], vec![s, c]]).unwrap())
            .unwrap()
    }

    fn levels(v: &[f64]) -> EnergyLevels {
        EnergyLevels::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gibbs_examples() {
        let l = levels(&[0.0, 0.5, 1.0]);
        let p = gibbs_distribution(&l, 0.0).unwrap();
        for &x in p.as_slice() {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
        }
        let q = gibbs_distribution(&levels(&[0.0, 1.0]), 1e3).unwrap();
        assert_abs_diff_eq!(q[0], 1.0, epsilon = 1e-15);
        assert!(q[1] < 1e-300);
        let r = gibbs_distribution(&levels(&[0.0, 1.0]), 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert_abs_diff_eq!(r[0], 1.0 / (1.0 + e), epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], e / (1.0 + e), epsilon = 1e-15);
        assert_abs_diff_eq!(r[0], 0.731_058_578_630_004_9, epsilon = 1e-15);
        assert!(gibbs_distribution(&l, -1.0).is_err());
        assert!(gibbs_distribution(&l, f64::NAN).is_err());
    }

    #[test]
    fn gibbs_survives_large_offsets() {
        let p = gibbs_distribution(&levels(&[1e4, 1e4 + 1.0]), 50.0).unwrap();
        assert!(p.as_slice().iter().all(|x| x.is_finite()));
        assert_abs_diff_eq!(p[1] / p[0], (-50.0f64).exp(), epsilon = 1e-30);
    }

    #[test]
    fn levels_must_be_non_degenerate() {
        assert!(EnergyLevels::new(vec![]).is_err());
        assert!(EnergyLevels::new(vec![0.0, 0.0]).is_err());
        assert!(EnergyLevels::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn transition_examples() {
        let t = transition_matrix(&UnitaryMatrix::identity(3));
        for l in 0..3 {
            for k in 0..3 {
                assert_eq!(t.get(l, k), if l == k { 1.0 } else { 0.0 });
            }
        }
        let t = transition_matrix(&rotation(std::f64::consts::PI));
        assert_abs_diff_eq!(t.get(0, 0), 0.0, epsilon = 1e-30);
        assert_abs_diff_eq!(t.get(0, 1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(1, 0), 1.0, epsilon = 1e-15);
        let t = transition_matrix(&rotation(std::f64::consts::FRAC_PI_2));
        for l in 0..2 {
            for k in 0..2 {
                assert_abs_diff_eq!(t.get(l, k), 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::Validation(_))));
    }

    #[test]
    fn pair_joint_examples() {
        let p = ProbVector::new(vec![0.7, 0.3]).unwrap();
        let t = StochasticMatrix::from_rows(&[vec![0.9, 0.2], vec![0.1, 0.8]]).unwrap();
        let j = pair_joint_measured(&p, &t).unwrap();
        let expected = [0.63, 0.07, 0.06, 0.24];
        for (a, b) in j.as_slice().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let id = transition_matrix(&UnitaryMatrix::identity(2));
        assert_eq!(
            pair_joint_measured(&p, &id).unwrap(),
            JointTable::diagonal(&p)
        );
        let u = ProbVector::uniform(3).unwrap();
        let flat = StochasticMatrix::new(3, vec![1.0 / 3.0; 9]).unwrap();
        for &x in pair_joint_measured(&u, &flat).unwrap().as_slice() {
            assert_abs_diff_eq!(x, 1.0 / 9.0, epsilon = 1e-16);
        }
        let bad = ProbVector::uniform(3).unwrap();
        assert!(pair_joint_measured(&bad, &t).is_err());
    }

    #[test]
    fn skip_joint_examples() {
        let p = ProbVector::new(vec![0.6, 0.4]).unwrap();
        let id = UnitaryMatrix::identity(2);
        assert_eq!(skip_joint(&p, &id, &id).unwrap(), JointTable::diagonal(&p));
        assert_eq!(
            skip_joint_literal(&p, &id, &id).unwrap(),
            JointTable::diagonal(&p)
        );
        let theta = 0.37;
        let j = skip_joint(&p, &rotation(theta), &rotation(theta)).unwrap();
        let double = transition_matrix(&rotation(2.0 * theta));
        for k in 0..2 {
            for m in 0..2 {
                assert_abs_diff_eq!(j.get(k, m), p[k] * double.get(m, k), epsilon = 1e-15);
            }
        }
        assert!(skip_joint(&ProbVector::uniform(3).unwrap(), &id, &id).is_err());
    }

    #[test]
    fn skip_joint_matches_literal_on_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            for _ in 0..50 {
                let u10 = random_unitary(&mut rng, d);
                let u21 = random_unitary(&mut rng, d);
                let p = gibbs_distribution(
                    &EnergyLevels::new((0..d).map(|i| i as f64).collect()).unwrap(),
                    rng.random_range(0.0..3.0),
                )
                .unwrap();
                let a = skip_joint(&p, &u10, &u21).unwrap();
                let b = skip_joint_literal(&p, &u10, &u21).unwrap();
                for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                    assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn random_unitaries_are_unistochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3, 5] {
            for _ in 0..100 {
                let u = random_unitary(&mut rng, d);
                assert!(u.matrix().unitarity_residual() <= 1e-12);
                let t = transition_matrix(&u);
                for s in t.row_sums().into_iter().chain(t.column_sums()) {
                    assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn protocol_shapes_and_marginals() {
        let spec = ProtocolSpec::new(
            levels(&[0.0, 1.0]),
            levels(&[0.0, 1.0]),
            levels(&[0.0, 1.0]),
            1.0,
            rotation(0.8),
            rotation(0.8),
        )
        .unwrap();
        let j = protocol_joints(&spec).unwrap();
        // p1 is the very array J12 was built from; re-summing J12 rows only adds rounding.
        assert_eq!(j.j01.column_marginal(), j.p1);
        for (a, b) in j.j12.row_sums().iter().zip(j.p1.as_slice()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
        for (a, b) in j.j02.row_sums().iter().zip(j.p0.as_slice()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
        let mismatch = ProtocolSpec::new(
            levels(&[0.0, 1.0]),
            levels(&[0.0, 1.0, 2.0]),
            levels(&[0.0, 1.0]),
            1.0,
            rotation(0.8),
            rotation(0.8),
        );
        assert!(mismatch.is_err());
        let negative_beta = ProtocolSpec::new(
            levels(&[0.0, 1.0]),
            levels(&[0.0, 1.0]),
            levels(&[0.0, 1.0]),
            -0.5,
            rotation(0.8),
            rotation(0.8),
        );
        assert!(negative_beta.is_err());
    }
}
