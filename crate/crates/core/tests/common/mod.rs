//! Dense-matrix reference implementations, written without the library's
//! simulator so they can cross-check it.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Row-major `dim × dim` matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub m: Vec<C>,
}

impl Dense {
    pub fn identity(dim: usize) -> Self {
        let mut m = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = c(1.0, 0.0);
        }
        Dense { dim, m }
    }

    pub fn get(&self, r: usize, k: usize) -> C {
        self.m[r * self.dim + k]
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Dense) -> Dense {
        let d = self.dim;
        let mut m = vec![c(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m[r * d + j] += a * rhs.get(k, j);
                }
            }
        }
        Dense { dim: d, m }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim).map(|r| (0..self.dim).map(|k| self.get(r, k) * v[k]).sum()).collect()
    }
}

fn bit(n: usize, q: usize, x: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

/// Full matrix of single-qubit `g` on wire `q`.
pub fn embed(n: usize, q: usize, g: [[C; 2]; 2]) -> Dense {
    let dim = 1 << n;
    let mask = 1 << (n - 1 - q);
    let mut m = vec![c(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            if r & !mask == k & !mask {
                m[r * dim + k] = g[bit(n, q, r)][bit(n, q, k)];
            }
        }
    }
    Dense { dim, m }
}

pub fn cnot(n: usize, control: usize, target: usize) -> Dense {
    let dim = 1 << n;
    let mut m = vec![c(0.0, 0.0); dim * dim];
    for k in 0..dim {
        let r = if bit(n, control, k) == 1 { k ^ (1 << (n - 1 - target)) } else { k };
        m[r * dim + k] = c(1.0, 0.0);
    }
    Dense { dim, m }
}

pub fn rz(t: f64) -> [[C; 2]; 2] {
    [[C::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, t / 2.0)]]
}

pub fn ry(t: f64) -> [[C; 2]; 2] {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// Ansatz unitary: `k + 1` layers of Rz·Ry·Rz per qubit, CNOT(q, q+1)
/// chains between them, parameters layer-major then qubit then position.
pub fn ansatz_unitary(n: usize, k: usize, params: &[f64]) -> Dense {
    assert_eq!(params.len(), 3 * n * (k + 1));
    let mut u = Dense::identity(1 << n);
    for layer in 0..=k {
        for q in 0..n {
            let p = &params[3 * (layer * n + q)..3 * (layer * n + q) + 3];
            for g in [rz(p[0]), ry(p[1]), rz(p[2])] {
                u = embed(n, q, g).mul(&u);
            }
        }
        if layer < k {
            for q in 0..n.saturating_sub(1) {
                u = cnot(n, q, q + 1).mul(&u);
            }
        }
    }
    u
}

/// `{|0⟩, |1⟩, |+⟩, |+i⟩}^⊗n`, pool index digits MSB-first for qubit 0.
pub fn ic_pool(n: usize) -> Vec<Vec<C>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let locals = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)], [c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(0.0, h)]];
    (0..1usize << (2 * n))
        .map(|idx| {
            (0..1usize << n)
                .map(|basis| {
                    (0..n).map(|q| locals[(idx >> (2 * (n - 1 - q))) & 3][bit(n, q, basis)]).product::<C>()
                })
                .collect()
        })
        .collect()
}

pub fn dist(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn re_inner(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// First index of the maximum; ties go to the earliest entry.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Mean distance of each member prediction to the normalized mean.
pub fn qbc_brute(members: &[Dense], probe: &[C]) -> f64 {
    let preds: Vec<Vec<C>> = members.iter().map(|u| u.apply(probe)).collect();
    let dim = probe.len();
    let mut mean = vec![c(0.0, 0.0); dim];
    for p in &preds {
        for i in 0..dim {
            mean[i] += p[i];
        }
    }
    let norm = mean.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return 2.0;
    }
    let mean: Vec<C> = mean.iter().map(|x| x / norm).collect();
    preds.iter().map(|p| dist(p, &mean)).sum::<f64>() / preds.len() as f64
}

/// Norm of the ensemble-averaged single-sample gradient, each component
/// taken literally as `−2 · ½[Ô(θᵢ + π/2) − Ô(θᵢ − π/2)]` from freshly
/// built shifted circuits.
pub fn emcm_brute(n: usize, k: usize, current: &[f64], ensemble: &[Vec<f64>], probe: &[C]) -> f64 {
    let labels: Vec<Vec<C>> = ensemble.iter().map(|m| ansatz_unitary(n, k, m).apply(probe)).collect();
    let mut sq = 0.0;
    for i in 0..current.len() {
        let shifted = |delta: f64| {
            let mut p = current.to_vec();
            p[i] += delta;
            ansatz_unitary(n, k, &p).apply(probe)
        };
        let (plus, minus) = (shifted(std::f64::consts::FRAC_PI_2), shifted(-std::f64::consts::FRAC_PI_2));
        let g: f64 = labels.iter().map(|y| -2.0 * 0.5 * (re_inner(y, &plus) - re_inner(y, &minus))).sum::<f64>()
            / labels.len() as f64;
        sq += g * g;
    }
    sq.sqrt()
}

/// Max–min distance pick over `unlabeled` (ascending).
pub fn gs_brute(pool: &[Vec<C>], labeled: &[usize], unlabeled: &[usize]) -> usize {
    let scores: Vec<f64> = unlabeled
        .iter()
        .map(|&u| labeled.iter().map(|&l| dist(&pool[u], &pool[l])).fold(f64::INFINITY, f64::min))
        .collect();
    unlabeled[argmax(&scores)]
}
