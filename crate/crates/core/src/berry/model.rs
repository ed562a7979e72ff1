//! Integrands for Gram matrices. A model draws particle configurations from
//! its normalized volume form and, for a fixed draw, returns a vector `v(w₁)`
//! whose outer product `v v*` is that draw's contribution to `H(w₁)`.
//! Everything independent of the swept quasihole is cached per draw.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::laughlin::{SphereData, TorusData};

pub trait GramModel: Sync {
    type Cache;

    fn dim(&self) -> usize;
    fn particles(&self) -> usize;
    fn draw(&self, rng: &mut ChaCha8Rng, z: &mut [Complex64]);
    fn prepare(&self, z: &[Complex64]) -> Self::Cache;
    fn amplitudes(&self, cache: &Self::Cache, w1: Complex64, out: &mut [Complex64]);
}

/// Coordinate patch for the swept quasihole on the sphere: `w` near 0 or
/// `u = 1/w` near ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Chart {
    Plane,
    Inverted,
}

#[derive(Debug, Clone)]
pub struct SphereModel {
    pub data: SphereData,
    pub frozen: Vec<Complex64>,
    pub chart: Chart,
}

pub struct SphereCache {
    scale: f64,
    z: Vec<Complex64>,
}

impl GramModel for SphereModel {
    type Cache = SphereCache;

    fn dim(&self) -> usize {
        1
    }

    fn particles(&self) -> usize {
        self.data.n
    }

    /// Fubini-Study measure: `|z|² / (1+|z|²)` is uniform.
    fn draw(&self, rng: &mut ChaCha8Rng, z: &mut [Complex64]) {
        for z in z.iter_mut() {
            let u: f64 = rng.gen();
            let phi: f64 = rng.gen::<f64>() * 2.0 * PI;
            *z = Complex64::from_polar((u / (1.0 - u)).sqrt(), phi);
        }
    }

    fn prepare(&self, z: &[Complex64]) -> SphereCache {
        let b = self.data.b as f64;
        let d = self.data.d() as f64;
        let mut ln = 0.0;
        for (mu, &x) in z.iter().enumerate() {
            for &y in &z[mu + 1..] {
                ln += b * (x - y).norm_sqr().ln();
            }
            for &w in &self.frozen {
                ln += (x - w).norm_sqr().ln();
            }
            ln -= d * (1.0 + x.norm_sqr()).ln();
        }
        SphereCache {
            scale: (0.5 * ln).exp(),
            z: z.to_vec(),
        }
    }

    fn amplitudes(&self, cache: &SphereCache, w1: Complex64, out: &mut [Complex64]) {
        let mut v = Complex64::new(cache.scale, 0.0);
        match self.chart {
            Chart::Plane => {
                for &z in &cache.z {
                    v *= z - w1;
                }
            }
            Chart::Inverted => {
                for &z in &cache.z {
                    v *= w1 * z - 1.0;
                }
            }
        }
        out[0] = v;
    }
}

#[derive(Debug, Clone)]
pub struct TorusModel {
    pub data: TorusData,
    pub frozen: Vec<Complex64>,
}

pub struct TorusCache {
    half_ln: f64,
    centre_base: Complex64,
    z: Vec<Complex64>,
}

impl GramModel for TorusModel {
    type Cache = TorusCache;

    fn dim(&self) -> usize {
        self.data.b as usize
    }

    fn particles(&self) -> usize {
        self.data.n
    }

    /// Uniform on the fundamental parallelogram.
    fn draw(&self, rng: &mut ChaCha8Rng, z: &mut [Complex64]) {
        let tau = self.data.tau.tau();
        for z in z.iter_mut() {
            let s: f64 = rng.gen();
            let t: f64 = rng.gen();
            *z = tau * t + s;
        }
    }

    fn prepare(&self, z: &[Complex64]) -> TorusCache {
        let t1 = self.data.theta1();
        let b = self.data.b as f64;
        let mut ln = self.data.ln_weight(z);
        for (mu, &x) in z.iter().enumerate() {
            for &y in &z[mu + 1..] {
                ln += 2.0 * b * t1.ln_abs(x - y);
            }
            for &w in &self.frozen {
                ln += 2.0 * t1.ln_abs(x - w);
            }
        }
        TorusCache {
            half_ln: 0.5 * ln,
            centre_base: z.iter().sum::<Complex64>() * b + self.frozen.iter().sum::<Complex64>(),
            z: z.to_vec(),
        }
    }

    fn amplitudes(&self, cache: &TorusCache, w1: Complex64, out: &mut [Complex64]) {
        let t1 = self.data.theta1();
        let mut ln = cache.half_ln;
        for &z in &cache.z {
            ln += t1.ln_abs(z - w1);
        }
        let arg = cache.centre_base + w1;
        for (l, o) in out.iter_mut().enumerate() {
            let centre = self.data.centre(l).expect("basis index below b");
            *o = centre.scaled_value(arg, ln);
        }
    }
}

/// A `w`-independent integrand with random amplitudes, so `H` is the same
/// positive definite matrix at every node.
#[derive(Debug, Clone)]
pub struct FrozenModel {
    pub dim: usize,
}

impl GramModel for FrozenModel {
    type Cache = Vec<Complex64>;

    fn dim(&self) -> usize {
        self.dim
    }

    fn particles(&self) -> usize {
        self.dim
    }

    fn draw(&self, rng: &mut ChaCha8Rng, z: &mut [Complex64]) {
        for z in z.iter_mut() {
            *z = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }

    fn prepare(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.to_vec()
    }

    fn amplitudes(&self, cache: &Vec<Complex64>, _w1: Complex64, out: &mut [Complex64]) {
        out.copy_from_slice(cache);
    }
}
