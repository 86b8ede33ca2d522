//! Reference computations written without the library's kernels.
#![allow(dead_code)]

use num_complex::Complex64;

pub fn tsallis(p: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-9 {
        -p.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * x.ln())
            .sum::<f64>()
    } else {
        let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
        (s - 1.0) / (1.0 - alpha)
    }
}

pub fn ln_alpha(x: f64, alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-9 {
        x.ln()
    } else {
        (x.powf(1.0 - alpha) - 1.0) / (1.0 - alpha)
    }
}

pub type Matrix = Vec<Vec<Complex64>>;

pub fn real(rows: &[&[f64]]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect()
}

pub fn qubit(theta: f64) -> Matrix {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    real(&[&[c, -s], &[s, c]])
}

pub fn qutrit(theta: f64) -> Matrix {
    let (s, c) = (theta.sin(), theta.cos());
    let r = 2f64.sqrt() * s;
    real(&[
        &[(1.0 + c) / 2.0, -r / 2.0, (1.0 - c) / 2.0],
        &[r / 2.0, c, -r / 2.0],
        &[(1.0 - c) / 2.0, r / 2.0, (1.0 + c) / 2.0],
    ])
}

pub fn gibbs(levels: &[f64], beta: f64) -> Vec<f64> {
    let w: Vec<f64> = levels
        .iter()
        .map(|&e| (-beta * (e - levels[0])).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Pair tables `(J01, J12, J02)` by enumerating measurement paths.
///
/// `J02[k][m]` sums the amplitudes of every intermediate path
/// `k -> l -> m` before squaring; the measured tables square each step.
pub fn path_tables(p0: &[f64], u10: &Matrix, u21: &Matrix) -> [Vec<Vec<f64>>; 3] {
    let d = p0.len();
    let mut j01 = vec![vec![0.0; d]; d];
    let mut j12 = vec![vec![0.0; d]; d];
    let mut j02 = vec![vec![0.0; d]; d];
    for k in 0..d {
        for l in 0..d {
            for m in 0..d {
                let w = p0[k] * u10[l][k].norm_sqr() * u21[m][l].norm_sqr();
                j01[k][l] += w;
                j12[l][m] += w;
            }
        }
        for m in 0..d {
            let amp: Complex64 = (0..d).map(|l| u21[m][l] * u10[l][k]).sum();
            j02[k][m] = p0[k] * amp.norm_sqr();
        }
    }
    [j01, j12, j02]
}

pub fn flat(t: &[Vec<f64>]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

pub fn rows(t: &[Vec<f64>]) -> Vec<f64> {
    t.iter().map(|r| r.iter().sum()).collect()
}

pub fn cols(t: &[Vec<f64>]) -> Vec<f64> {
    (0..t[0].len())
        .map(|c| t.iter().map(|r| r[c]).sum())
        .collect()
}

/// `C_alpha` straight from the pair tables.
pub fn lg_from_tables(tables: &[Vec<Vec<f64>>; 3], alpha: f64) -> f64 {
    let [j01, j12, j02] = tables;
    tsallis(&flat(j02), alpha) + tsallis(&cols(j01), alpha)
        - tsallis(&flat(j12), alpha)
        - tsallis(&flat(j01), alpha)
}

/// Single variable seen through a detector of efficiency `eta`, no-click last.
pub fn lossy_single(p: &[f64], eta: f64) -> Vec<f64> {
    let mut v: Vec<f64> = p.iter().map(|x| eta * x).collect();
    v.push(1.0 - eta);
    v
}

/// Pair seen through two independent detectors of efficiency `eta`.
pub fn lossy_pair(t: &[Vec<f64>], eta: f64) -> Vec<f64> {
    let (r, c) = (rows(t), cols(t));
    let miss = 1.0 - eta;
    let mut out = Vec::new();
    for (i, row) in t.iter().enumerate() {
        out.extend(row.iter().map(|x| eta * eta * x));
        out.push(eta * miss * r[i]);
    }
    out.extend(c.iter().map(|x| miss * eta * x));
    out.push(miss * miss);
    out
}

/// `C^(eta eta)` from the distorted tables.
pub fn lossy_lg(tables: &[Vec<Vec<f64>>; 3], eta: f64, alpha: f64) -> f64 {
    let [j01, j12, j02] = tables;
    tsallis(&lossy_pair(j02, eta), alpha) + tsallis(&lossy_single(&cols(j01), eta), alpha)
        - tsallis(&lossy_pair(j12, eta), alpha)
        - tsallis(&lossy_pair(j01, eta), alpha)
}

/// Deterministic pseudo-random point of the simplex.
pub fn simplex(state: &mut u64, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -(1.0 - uniform(state)).ln()).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// xorshift64* in `[0, 1)`.
pub fn uniform(state: &mut u64) -> f64 {
    *state ^= *state >> 12;
    *state ^= *state << 25;
    *state ^= *state >> 27;
    let x = state.wrapping_mul(0x2545_F491_4F6C_DD1D);
    (x >> 11) as f64 / (1u64 << 53) as f64
}

pub fn table(p: &[f64], r: usize, c: usize) -> Vec<Vec<f64>> {
    (0..r).map(|i| p[i * c..(i + 1) * c].to_vec()).collect()
}

/// The three pair tables of a joint over `(x0, x1, x2)` stored with `x2` fastest.
pub fn pairs_of_triple(p: &[f64], d: usize) -> [Vec<Vec<f64>>; 3] {
    let mut j01 = vec![vec![0.0; d]; d];
    let mut j12 = vec![vec![0.0; d]; d];
    let mut j02 = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let w = p[(a * d + b) * d + c];
                j01[a][b] += w;
                j12[b][c] += w;
                j02[a][c] += w;
            }
        }
    }
    [j01, j12, j02]
}
