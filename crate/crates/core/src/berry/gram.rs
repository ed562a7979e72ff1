//! Monte-Carlo Gram matrices over a set of nodes with common random numbers.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::GramModel;
use crate::error::BerryError;
use crate::laughlin::CMatrix;

/// Sample count, number of independent batches and the seed. Batch `k`
/// draws from ChaCha stream `k`, so results do not depend on thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub samples: usize,
    pub batches: usize,
    pub seed: u64,
}

impl Budget {
    pub fn new(samples: usize, seed: u64) -> Self {
        Budget {
            samples,
            batches: 20,
            seed,
        }
    }

    fn batch_len(&self, k: usize) -> usize {
        let base = self.samples / self.batches;
        base + usize::from(k < self.samples % self.batches)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramEstimate {
    pub h: CMatrix,
    pub stderr: Vec<Vec<f64>>,
    pub samples: usize,
    pub seed: u64,
    pub w: Complex64,
    /// Largest `|H - H*|` entry before symmetrization.
    pub asymmetry: f64,
}

/// Per-batch sums of `v v*` and `|v_l v_k|²` at every node.
#[derive(Debug, Clone)]
pub struct GramField {
    pub dim: usize,
    pub nodes: Vec<Complex64>,
    pub budget: Budget,
    counts: Vec<usize>,
    sums: Vec<Vec<Complex64>>,
    squares: Vec<Vec<f64>>,
}

pub fn sample_field<M: GramModel>(model: &M, nodes: &[Complex64], budget: Budget) -> Result<GramField, BerryError> {
    if budget.samples < budget.batches || budget.batches < 2 {
        return Err(BerryError::Setup(format!(
            "need at least {} samples and 2 batches",
            budget.batches.max(2)
        )));
    }
    let dim = model.dim();
    let cells = nodes.len() * dim * dim;
    let batches: Vec<(usize, Vec<Complex64>, Vec<f64>)> = (0..budget.batches)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(k as u64);
            let mut z = vec![Complex64::new(0.0, 0.0); model.particles()];
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            let mut sums = vec![Complex64::new(0.0, 0.0); cells];
            let mut squares = vec![0.0; cells];
            let len = budget.batch_len(k);
            for _ in 0..len {
                model.draw(&mut rng, &mut z);
                let cache = model.prepare(&z);
                for (i, &w) in nodes.iter().enumerate() {
                    model.amplitudes(&cache, w, &mut v);
                    let base = i * dim * dim;
                    for l in 0..dim {
                        for k in 0..dim {
                            let x = v[l] * v[k].conj();
                            sums[base + l * dim + k] += x;
                            squares[base + l * dim + k] += x.norm_sqr();
                        }
                    }
                }
            }
            (len, sums, squares)
        })
        .collect();
    let mut field = GramField {
        dim,
        nodes: nodes.to_vec(),
        budget,
        counts: Vec::new(),
        sums: Vec::new(),
        squares: Vec::new(),
    };
    for (n, s, q) in batches {
        field.counts.push(n);
        field.sums.push(s);
        field.squares.push(q);
    }
    Ok(field)
}

impl GramField {
    pub fn batches(&self) -> usize {
        self.counts.len()
    }

    /// Raw mean at `node`, leaving out batch `skip` if given.
    fn raw_mean(&self, node: usize, skip: Option<usize>) -> (CMatrix, usize) {
        let d = self.dim;
        let mut h = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        let mut count = 0;
        for (k, sums) in self.sums.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            count += self.counts[k];
            for l in 0..d {
                for j in 0..d {
                    h[l][j] += sums[node * d * d + l * d + j];
                }
            }
        }
        for row in &mut h {
            for x in row.iter_mut() {
                *x /= count as f64;
            }
        }
        (h, count)
    }

    /// Hermitian-symmetrized mean.
    pub fn mean(&self, node: usize, skip: Option<usize>) -> CMatrix {
        let (h, _) = self.raw_mean(node, skip);
        symmetrize(&h)
    }

    pub fn estimate(&self, node: usize) -> GramEstimate {
        let d = self.dim;
        let (raw, count) = self.raw_mean(node, None);
        let mut stderr = vec![vec![0.0; d]; d];
        let mut asymmetry: f64 = 0.0;
        for l in 0..d {
            for k in 0..d {
                let sq: f64 = self.squares.iter().map(|q| q[node * d * d + l * d + k]).sum();
                let n = count as f64;
                let var = ((sq / n - raw[l][k].norm_sqr()) * n / (n - 1.0)).max(0.0);
                stderr[l][k] = (var / n).sqrt();
                asymmetry = asymmetry.max((raw[l][k] - raw[k][l].conj()).norm());
            }
        }
        GramEstimate {
            h: symmetrize(&raw),
            stderr,
            samples: count,
            seed: self.budget.seed,
            w: self.nodes[node],
            asymmetry,
        }
    }

    pub fn logdet(&self, node: usize, skip: Option<usize>) -> Result<f64, BerryError> {
        let h = self.mean(node, skip);
        logdet_hermitian(&h).map_err(|pivot| {
            let diag = (0..self.dim).map(|i| h[i][i].re).fold(f64::MIN_POSITIVE, f64::max);
            let cond = (diag / pivot.abs().max(f64::MIN_POSITIVE)).min(1e6);
            BerryError::Undersampled {
                w: format_complex(self.nodes[node]),
                pivot,
                suggested: (self.budget.samples as f64 * 4.0 * cond.max(1.0)).ceil() as usize,
            }
        })
    }

    /// `log det H` at every node.
    pub fn logdets(&self, skip: Option<usize>) -> Result<Vec<f64>, BerryError> {
        (0..self.nodes.len()).map(|i| self.logdet(i, skip)).collect()
    }

    /// Jackknife over batches: value with all batches and its standard error.
    pub fn jackknife<F>(&self, f: F) -> Result<(f64, f64), BerryError>
    where
        F: Fn(Option<usize>) -> Result<f64, BerryError>,
    {
        let full = f(None)?;
        let reps: Vec<f64> = (0..self.batches()).map(|k| f(Some(k))).collect::<Result<_, _>>()?;
        let b = reps.len() as f64;
        let mean = reps.iter().sum::<f64>() / b;
        let var = reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() * (b - 1.0) / b;
        Ok((full, var.sqrt()))
    }
}

pub fn format_complex(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

pub fn symmetrize(h: &CMatrix) -> CMatrix {
    let d = h.len();
    (0..d)
        .map(|l| (0..d).map(|k| (h[l][k] + h[k][l].conj()) * 0.5).collect())
        .collect()
}

/// `log det` of a Hermitian matrix by Cholesky; on failure returns the
/// offending pivot.
pub fn logdet_hermitian(h: &CMatrix) -> Result<f64, f64> {
    let d = h.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    let mut acc = 0.0;
    for j in 0..d {
        let mut pivot = h[j][j].re;
        for k in 0..j {
            pivot -= l[j][k].norm_sqr();
        }
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(pivot);
        }
        let ljj = pivot.sqrt();
        l[j][j] = Complex64::new(ljj, 0.0);
        acc += pivot.ln();
        for i in j + 1..d {
            let mut s = h[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / ljj;
        }
    }
    Ok(acc)
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Conjugate transpose, which is the inverse for the unitary shift matrices.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}
