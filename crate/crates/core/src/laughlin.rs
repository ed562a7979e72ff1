//! Laughlin sections with localized quasiholes on the sphere and the torus,
//! completely filled case with unit particle-quasihole interaction.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::ThetaError;
use crate::theta::{Characteristic, Modulus, ThetaKernel};

pub type CMatrix = Vec<Vec<Complex64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub z: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

impl Configuration {
    pub fn new(z: Vec<Complex64>, w: Vec<Complex64>) -> Self {
        Configuration { z, w }
    }
}

fn check_counts(b: u32, n: usize, m: usize) -> Result<(), ThetaError> {
    if b == 0 || n == 0 || m == 0 {
        return Err(ThetaError::InvalidData(format!(
            "b, n and m must be at least 1 (got b={b}, n={n}, m={m})"
        )));
    }
    Ok(())
}

fn check_config(cfg: &Configuration, n: usize, m: usize) -> Result<(), ThetaError> {
    if cfg.z.len() != n || cfg.w.len() != m {
        return Err(ThetaError::InvalidData(format!(
            "expected {n} particles and {m} quasiholes, got {} and {}",
            cfg.z.len(),
            cfg.w.len()
        )));
    }
    Ok(())
}

/// Genus zero: `h(z) = 1/(1+|z|²)` and `d = b(n-1) + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereData {
    pub b: u32,
    pub n: usize,
    pub m: usize,
}

impl SphereData {
    pub fn new(b: u32, n: usize, m: usize) -> Result<Self, ThetaError> {
        check_counts(b, n, m)?;
        Ok(SphereData { b, n, m })
    }

    pub fn d(&self) -> usize {
        self.b as usize * (self.n - 1) + self.m
    }
}

pub fn sphere_section(cfg: &Configuration, data: &SphereData) -> Result<Complex64, ThetaError> {
    check_config(cfg, data.n, data.m)?;
    let mut s = Complex64::new(1.0, 0.0);
    for (mu, &z) in cfg.z.iter().enumerate() {
        for &z2 in &cfg.z[mu + 1..] {
            s *= (z - z2).powu(data.b);
        }
        for &w in &cfg.w {
            s *= z - w;
        }
    }
    Ok(s)
}

pub fn ln_sphere_density(cfg: &Configuration, data: &SphereData) -> Result<f64, ThetaError> {
    check_config(cfg, data.n, data.m)?;
    let b = data.b as f64;
    let d = data.d() as f64;
    let mut acc = 0.0;
    for (mu, &z) in cfg.z.iter().enumerate() {
        for &z2 in &cfg.z[mu + 1..] {
            acc += b * (z - z2).norm_sqr().ln();
        }
        for &w in &cfg.w {
            acc += (z - w).norm_sqr().ln();
        }
        acc -= d * (1.0 + z.norm_sqr()).ln();
    }
    Ok(acc)
}

/// `|s|² ∏ h(z_μ)^d`, evaluated in the log domain.
pub fn sphere_density(cfg: &Configuration, data: &SphereData) -> Result<f64, ThetaError> {
    Ok(ln_sphere_density(cfg, data)?.exp())
}

/// Genus one with modulus `τ`: `d = bn + m`.
#[derive(Debug, Clone)]
pub struct TorusData {
    pub tau: Modulus,
    pub b: u32,
    pub n: usize,
    pub m: usize,
    theta1: ThetaKernel,
    centre: Vec<ThetaKernel>,
}

impl TorusData {
    pub fn new(tau: Modulus, b: u32, n: usize, m: usize) -> Result<Self, ThetaError> {
        check_counts(b, n, m)?;
        let wide = tau.scaled(b as f64);
        let centre = (0..b)
            .map(|l| ThetaKernel::new(Characteristic::new(l as f64 / b as f64, 0.0), &wide))
            .collect();
        Ok(TorusData {
            tau,
            b,
            n,
            m,
            theta1: ThetaKernel::new(Characteristic::ODD, &tau),
            centre,
        })
    }

    pub fn d(&self) -> usize {
        self.b as usize * self.n + self.m
    }

    pub fn theta1(&self) -> &ThetaKernel {
        &self.theta1
    }

    /// `θ[l/b; 0](·, bτ)`.
    pub fn centre(&self, l: usize) -> Result<&ThetaKernel, ThetaError> {
        self.centre.get(l).ok_or(ThetaError::BasisIndex { index: l, b: self.b })
    }

    /// Log of the Gaussian weight `exp(-(2π/Im τ)(bn+m) Σ Im(z_μ)²)`.
    pub fn ln_weight(&self, z: &[Complex64]) -> f64 {
        let s: f64 = z.iter().map(|z| z.im * z.im).sum();
        -2.0 * PI / self.tau.im() * self.d() as f64 * s
    }

    /// Log of `h(w) = exp(-(2π/Im τ)((1/b) Im(Σw)² + n Σ Im(w_γ)²))`.
    pub fn ln_h(&self, w: &[Complex64]) -> f64 {
        let total: f64 = w.iter().map(|w| w.im).sum();
        let squares: f64 = w.iter().map(|w| w.im * w.im).sum();
        -2.0 * PI / self.tau.im() * (total * total / self.b as f64 + self.n as f64 * squares)
    }
}

pub fn ln_torus_section(
    l: usize,
    cfg: &Configuration,
    data: &TorusData,
) -> Result<Complex64, ThetaError> {
    check_config(cfg, data.n, data.m)?;
    let centre = data.centre(l)?;
    let b = data.b as f64;
    let arg = cfg.z.iter().sum::<Complex64>() * b + cfg.w.iter().sum::<Complex64>();
    let mut acc = centre.ln_value(arg);
    for (mu, &z) in cfg.z.iter().enumerate() {
        for &z2 in &cfg.z[mu + 1..] {
            acc += data.theta1.ln_value(z - z2) * b;
        }
        for &w in &cfg.w {
            acc += data.theta1.ln_value(z - w);
        }
    }
    Ok(acc)
}

/// `θ[l/b;0](bΣz + Σw, bτ) ∏ θ₁(z_μ - z_ν)^b ∏ θ₁(z_μ - w_γ)`.
pub fn torus_section(l: usize, cfg: &Configuration, data: &TorusData) -> Result<Complex64, ThetaError> {
    Ok(ln_torus_section(l, cfg, data)?.exp())
}

/// `s_l · conj(s_k) · exp(-(2π/Im τ)(bn+m) Σ Im(z_μ)²)`.
pub fn torus_density_entry(
    l: usize,
    k: usize,
    cfg: &Configuration,
    data: &TorusData,
) -> Result<Complex64, ThetaError> {
    let sl = ln_torus_section(l, cfg, data)?;
    let sk = ln_torus_section(k, cfg, data)?;
    Ok((sl + sk.conj() + data.ln_weight(&cfg.z)).exp())
}

/// `P = diag(1, q, …, q^{b-1})` with `q = e^{2πi/b}`, and the cyclic
/// permutation `Q` with ones on the subdiagonal and in the top-right corner.
pub fn quasihole_shift_factors(b: u32) -> (CMatrix, CMatrix) {
    let b = b.max(1) as usize;
    let zero = Complex64::new(0.0, 0.0);
    let mut p = vec![vec![zero; b]; b];
    let mut q = vec![vec![zero; b]; b];
    for l in 0..b {
        p[l][l] = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / b as f64);
        q[l][(l + b - 1) % b] = Complex64::new(1.0, 0.0);
    }
    (p, q)
}
