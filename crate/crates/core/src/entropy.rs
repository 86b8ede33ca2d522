//! Tsallis entropy kernels over finite discrete distributions.
//!
//! All kernels share one convention: `0^alpha = 0` for `alpha > 0` and
//! `0 ln 0 = 0`, so zero-probability outcomes never contribute. Orders within
//! [`SHANNON_WINDOW`] of one are evaluated with the Shannon branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the window around `alpha = 1` that uses the Shannon branch.
pub const SHANNON_WINDOW: f64 = 1e-9;

/// Maximum tolerated `|sum - 1|` for a distribution.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Negative entries down to `-CLIP_TOL` are treated as rounding dirt and set to zero.
pub const CLIP_TOL: f64 = 1e-12;

/// The entropic parameter `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EntropicOrder(f64);

impl EntropicOrder {
    pub const SHANNON: EntropicOrder = EntropicOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(EntropicOrder(alpha))
        } else {
            Err(Error::Parameter(format!(
                "entropic order must be finite and positive, got {alpha}"
            )))
        }
    }

    /// Orders that are only meaningful for `alpha >= 1` call this first.
    pub fn at_least_one(alpha: f64) -> Result<Self> {
        let order = Self::new(alpha)?;
        order.require_at_least_one()?;
        Ok(order)
    }

    pub fn require_at_least_one(self) -> Result<()> {
        if self.0 >= 1.0 {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "the entropic Leggett-Garg bound holds only for alpha >= 1, got {}",
                self.0
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < SHANNON_WINDOW
    }
}

impl TryFrom<f64> for EntropicOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        EntropicOrder::new(alpha)
    }
}

impl From<EntropicOrder> for f64 {
    fn from(order: EntropicOrder) -> f64 {
        order.0
    }
}

fn clean_entries(mut values: Vec<f64>, what: &str) -> Result<(Vec<f64>, f64)> {
    if values.is_empty() {
        return Err(Error::Validation(format!(
            "{what} must have at least one entry"
        )));
    }
    for (i, v) in values.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(Error::Validation(format!("{what} entry {i} is not finite")));
        }
        if *v < 0.0 {
            if *v >= -CLIP_TOL {
                *v = 0.0;
            } else {
                return Err(Error::Validation(format!(
                    "{what} entry {i} is negative ({v})"
                )));
            }
        }
        if *v > 1.0 + NORMALIZATION_TOL {
            return Err(Error::Validation(format!(
                "{what} entry {i} exceeds one ({v})"
            )));
        }
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Validation(format!(
            "{what} sums to {total}, not 1 (tolerance {NORMALIZATION_TOL})"
        )));
    }
    Ok((values, total))
}

/// A finite probability distribution over `d >= 1` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates without rescaling.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let (values, _) = clean_entries(values, "distribution")?;
        Ok(ProbVector(values))
    }

    /// Validates, then divides out the (within-tolerance) normalization error.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let (mut values, total) = clean_entries(values, "distribution")?;
        values.iter_mut().for_each(|v| *v /= total);
        Ok(ProbVector(values))
    }

    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation(
                "distribution must have at least one entry".into(),
            ));
        }
        Ok(ProbVector(vec![1.0 / d as f64; d]))
    }

    pub fn point_mass(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return Err(Error::Validation(format!(
                "point mass index {index} out of range for {d} outcomes"
            )));
        }
        let mut v = vec![0.0; d];
        v[index] = 1.0;
        Ok(ProbVector(v))
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

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Joint distribution of an ordered pair; the first variable indexes rows.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Which variable of a [`JointTable`] is the conditioning one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// H(column variable | row variable).
    Rows,
    /// H(row variable | column variable).
    Columns,
}

impl JointTable {
    /// Row-major `rows x cols` data, validated without rescaling.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_shape(rows, cols, &data)?;
        let (data, _) = clean_entries(data, "joint table")?;
        Ok(JointTable { rows, cols, data })
    }

    /// Like [`JointTable::new`] but divides out the normalization error.
    pub fn normalized(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_shape(rows, cols, &data)?;
        let (mut data, total) = clean_entries(data, "joint table")?;
        data.iter_mut().for_each(|v| *v /= total);
        Ok(JointTable { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Validation("ragged joint table rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    fn check_shape(rows: usize, cols: usize, data: &[f64]) -> Result<()> {
        if rows == 0 || cols == 0 {
            return Err(Error::Validation("joint table must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Validation(format!(
                "joint table of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(())
    }

    /// `diag(p)`: perfectly correlated pair with marginal `p`.
    pub fn diagonal(p: &ProbVector) -> Self {
        let d = p.len();
        let mut data = vec![0.0; d * d];
        for (i, &pi) in p.as_slice().iter().enumerate() {
            data[i * d + i] = pi;
        }
        JointTable {
            rows: d,
            cols: d,
            data,
        }
    }

    /// Independent pair `p (x) q`.
    pub fn product(p: &ProbVector, q: &ProbVector) -> Self {
        let data = p
            .as_slice()
            .iter()
            .flat_map(|&a| q.as_slice().iter().map(move |&b| a * b))
            .collect();
        JointTable {
            rows: p.len(),
            cols: q.len(),
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for r in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(r)) {
                *s += v;
            }
        }
        sums
    }

    /// Distribution of the row variable.
    pub fn row_marginal(&self) -> ProbVector {
        ProbVector(self.row_sums())
    }

    /// Distribution of the column variable.
    pub fn column_marginal(&self) -> ProbVector {
        ProbVector(self.col_sums())
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        JointTable {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// The flattened joint as a single distribution.
    pub fn flatten(&self) -> ProbVector {
        ProbVector(self.data.clone())
    }
}

#[inline]
fn pow_alpha(p: f64, alpha: f64) -> f64 {
    (alpha * p.ln()).exp()
}

/// Entropy of raw non-negative weights assumed to sum to one.
pub(crate) fn entropy_of(weights: &[f64], order: EntropicOrder) -> f64 {
    if order.is_shannon() {
        -weights
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    } else {
        let alpha = order.value();
        let s: f64 = weights
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| pow_alpha(p, alpha))
            .sum();
        (s - 1.0) / (1.0 - alpha)
    }
}

/// The deformed logarithm `ln_alpha(xi)`.
pub fn alpha_log(xi: f64, order: EntropicOrder) -> Result<f64> {
    if xi.is_nan() || xi <= 0.0 || xi.is_infinite() {
        return Err(Error::Domain(format!(
            "alpha-logarithm needs a finite positive argument, got {xi}"
        )));
    }
    if order.is_shannon() {
        Ok(xi.ln())
    } else {
        let one_minus = 1.0 - order.value();
        Ok(((one_minus * xi.ln()).exp() - 1.0) / one_minus)
    }
}

/// `ln_alpha(d)`, the maximum entropy over `d` outcomes.
pub fn max_entropy(d: usize, order: EntropicOrder) -> f64 {
    alpha_log(d.max(1) as f64, order).expect("d >= 1 is a valid alpha-log argument")
}

pub fn tsallis_entropy(p: &ProbVector, order: EntropicOrder) -> f64 {
    entropy_of(p.as_slice(), order)
}

pub fn joint_entropy(joint: &JointTable, order: EntropicOrder) -> f64 {
    entropy_of(joint.as_slice(), order)
}

/// `sum_y p(y)^alpha H_alpha(X | Y = y)`, where `Y` is the conditioning variable.
pub fn conditional_entropy(
    joint: &JointTable,
    conditioned_on: Conditioning,
    order: EntropicOrder,
) -> f64 {
    let (outer, inner) = match conditioned_on {
        Conditioning::Rows => (joint.rows, joint.cols),
        Conditioning::Columns => (joint.cols, joint.rows),
    };
    let cell = |y: usize, x: usize| match conditioned_on {
        Conditioning::Rows => joint.get(y, x),
        Conditioning::Columns => joint.get(x, y),
    };
    let mut conditional = vec![0.0; inner];
    let mut total = 0.0;
    for y in 0..outer {
        let p_y: f64 = (0..inner).map(|x| cell(y, x)).sum();
        if p_y <= 0.0 {
            continue;
        }
        for (x, slot) in conditional.iter_mut().enumerate() {
            *slot = cell(y, x) / p_y;
        }
        let weight = if order.is_shannon() {
            p_y
        } else {
            pow_alpha(p_y, order.value())
        };
        total += weight * entropy_of(&conditional, order);
    }
    total
}

fn check_efficiency(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "efficiency must lie in [0, 1], got {eta}"
        )))
    }
}

/// Entropy of the two-point distribution `(eta, 1 - eta)`.
pub fn binary_entropy(eta: f64, order: EntropicOrder) -> Result<f64> {
    check_efficiency(eta)?;
    Ok(entropy_of(&[eta, 1.0 - eta], order))
}

/// Entropy of the four-point distribution `(eta^2, eta(1-eta), eta(1-eta), (1-eta)^2)`.
pub fn quaternary_entropy(eta: f64, order: EntropicOrder) -> Result<f64> {
    check_efficiency(eta)?;
    let miss = 1.0 - eta;
    Ok(entropy_of(
        &[eta * eta, eta * miss, eta * miss, miss * miss],
        order,
    ))
}
