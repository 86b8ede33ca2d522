//! Classical side of the inequality: hidden-variable models, their exact
//! three-time joints, and a fuzzer that checks `C_alpha <= 0` for them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{joint_entropy, tsallis_entropy, EntropicOrder, JointTable, ProbVector};
use crate::error::{Error, Result};

/// Largest `C_alpha` still counted as consistent with the classical bound.
pub const CLASSICAL_TOL: f64 = 1e-12;

/// `rho(lambda)` and, for each of the three times, the rows `P(x_i | lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenVariableModel {
    weights: ProbVector,
    conditionals: [Vec<ProbVector>; 3],
}

impl HiddenVariableModel {
    pub fn new(weights: ProbVector, conditionals: [Vec<ProbVector>; 3]) -> Result<Self> {
        let hidden = weights.len();
        let d = conditionals[0].first().map(ProbVector::len).unwrap_or(0);
        for (t, rows) in conditionals.iter().enumerate() {
            if rows.len() != hidden {
                return Err(Error::Validation(format!(
                    "time {t} has {} conditional rows for {hidden} hidden states",
                    rows.len()
                )));
            }
            if rows.iter().any(|r| r.len() != d) {
                return Err(Error::Validation(format!(
                    "time {t} has rows of differing outcome count"
                )));
            }
        }
        Ok(HiddenVariableModel {
            weights,
            conditionals,
        })
    }

    pub fn weights(&self) -> &ProbVector {
        &self.weights
    }

    /// `P(x_time | lambda)` for every `lambda`.
    pub fn conditionals(&self, time: usize) -> &[ProbVector] {
        &self.conditionals[time]
    }

    pub fn outcomes(&self) -> usize {
        self.conditionals[0][0].len()
    }

    pub fn hidden_states(&self) -> usize {
        self.weights.len()
    }
}

/// `p(x1, x2, x3)` stored with `x3` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleJoint {
    d: usize,
    data: Vec<f64>,
}

impl TripleJoint {
    pub fn new(d: usize, data: Vec<f64>) -> Result<Self> {
        if d == 0 || data.len() != d * d * d {
            return Err(Error::Validation(format!(
                "triple joint over {d} outcomes needs {} entries",
                d * d * d
            )));
        }
        // Reuse distribution validation on the flattened array.
        let data = ProbVector::new(data)?.into_vec();
        Ok(TripleJoint { d, data })
    }

    #[inline]
    pub fn outcomes(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, x1: usize, x2: usize, x3: usize) -> f64 {
        self.data[(x1 * self.d + x2) * self.d + x3]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Joint of times `(first, second)` with `first < second`, rows indexed by `first`.
    pub fn pair(&self, first: usize, second: usize) -> JointTable {
        assert!(
            first < second && second < 3,
            "pair indices must satisfy first < second < 3"
        );
        let d = self.d;
        let mut out = vec![0.0; d * d];
        for x1 in 0..d {
            for x2 in 0..d {
                for x3 in 0..d {
                    let x = [x1, x2, x3];
                    out[x[first] * d + x[second]] += self.get(x1, x2, x3);
                }
            }
        }
        JointTable::normalized(d, d, out).expect("marginal of a valid joint")
    }

    pub fn marginal(&self, time: usize) -> ProbVector {
        let d = self.d;
        let mut out = vec![0.0; d];
        for x1 in 0..d {
            for x2 in 0..d {
                for x3 in 0..d {
                    out[[x1, x2, x3][time]] += self.get(x1, x2, x3);
                }
            }
        }
        ProbVector::normalized(out).expect("marginal of a valid joint")
    }
}

pub fn joint_from_model(model: &HiddenVariableModel) -> TripleJoint {
    let d = model.outcomes();
    let mut data = vec![0.0; d * d * d];
    for (lambda, &w) in model.weights.as_slice().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let [p1, p2, p3] = [0, 1, 2].map(|t| model.conditionals[t][lambda].as_slice());
        for x1 in 0..d {
            let a = w * p1[x1];
            for x2 in 0..d {
                let b = a * p2[x2];
                for x3 in 0..d {
                    data[(x1 * d + x2) * d + x3] += b * p3[x3];
                }
            }
        }
    }
    TripleJoint::new(d, data).expect("convex combination of product distributions")
}

/// `H(X1,X3) + H(X2) - H(X2,X3) - H(X1,X2)` for a three-time joint.
pub fn lg_value(joint: &TripleJoint, order: EntropicOrder) -> f64 {
    joint_entropy(&joint.pair(0, 2), order) + tsallis_entropy(&joint.marginal(1), order)
        - joint_entropy(&joint.pair(1, 2), order)
        - joint_entropy(&joint.pair(0, 1), order)
}

pub fn lg_check(model: &HiddenVariableModel, order: EntropicOrder) -> Result<f64> {
    order.require_at_least_one()?;
    Ok(lg_value(&joint_from_model(model), order))
}

fn simplex_point<R: Rng>(rng: &mut R, n: usize) -> ProbVector {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    ProbVector::normalized(draws.into_iter().map(|x| x / total).collect())
        .expect("normalized exponential draws form a distribution")
}

/// Flat-Dirichlet model with `d` outcomes per time and `hidden` hidden states.
pub fn random_model(seed: u64, d: usize, hidden: usize) -> Result<HiddenVariableModel> {
    if d < 2 || hidden < 1 {
        return Err(Error::Parameter(format!(
            "random models need d >= 2 and at least one hidden state, got d = {d}, L = {hidden}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = simplex_point(&mut rng, hidden);
    let conditionals = [(); 3].map(|_| (0..hidden).map(|_| simplex_point(&mut rng, d)).collect());
    HiddenVariableModel::new(weights, conditionals)
}

/// Seed of the `index`-th task; a splitmix64 step keeps neighbouring streams apart.
pub fn task_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub models: usize,
    pub dims: Vec<usize>,
    pub hidden_states: Vec<usize>,
    pub alphas: Vec<f64>,
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            models: 10_000,
            dims: vec![2, 3],
            hidden_states: vec![1, 2, 4, 8],
            alphas: vec![1.0, 1.5, 2.0, 3.0, 5.0],
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub models: usize,
    /// Largest `C_alpha` seen over all models and orders; `None` for zero models.
    pub max_c_alpha: Option<f64>,
    /// Number of (model, alpha) pairs with `C_alpha > CLASSICAL_TOL`.
    pub violations: usize,
}

/// Model `i` uses `dims[i % |dims|]` outcomes and
/// `hidden_states[(i / |dims|) % |hidden_states|]` hidden states.
pub fn fuzz_classical_bound(config: &FuzzConfig) -> Result<FuzzSummary> {
    if config.dims.is_empty() || config.hidden_states.is_empty() {
        return Err(Error::Parameter(
            "fuzzing needs at least one d and one L".into(),
        ));
    }
    let orders: Vec<EntropicOrder> = config
        .alphas
        .iter()
        .map(|&a| EntropicOrder::at_least_one(a))
        .collect::<Result<_>>()?;
    let nd = config.dims.len();
    let nh = config.hidden_states.len();
    let per_model: Vec<(f64, usize)> = (0..config.models)
        .into_par_iter()
        .map(|i| {
            let d = config.dims[i % nd];
            let hidden = config.hidden_states[(i / nd) % nh];
            let model = random_model(task_seed(config.seed, i as u64), d, hidden)?;
            let joint = joint_from_model(&model);
            let values: Vec<f64> = orders.iter().map(|&o| lg_value(&joint, o)).collect();
            let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let bad = values.iter().filter(|&&c| c > CLASSICAL_TOL).count();
            Ok((worst, bad))
        })
        .collect::<Result<_>>()?;
    let max_c_alpha = per_model
        .iter()
        .map(|&(w, _)| w)
        .reduce(f64::max)
        .filter(|_| !orders.is_empty());
    Ok(FuzzSummary {
        models: config.models,
        max_c_alpha,
        violations: per_model.iter().map(|&(_, b)| b).sum(),
    })
}
