//! Jacobi theta functions with characteristics.
//!
//! Evaluation first moves `z` into the strip `|Im z| ≤ Im τ / 2`,
//! `|Re z| ≤ 1/2` using the exact shift law, so the remaining Gaussian sum
//! needs only a handful of terms. Every evaluation carries a rigorous bound
//! on the truncated tail.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::ThetaError;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    tau: Complex64,
}

impl Modulus {
    pub fn new(tau: Complex64) -> Result<Self, ThetaError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ThetaError::Domain(tau.im));
        }
        Ok(Modulus { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn im(&self) -> f64 {
        self.tau.im
    }

    /// `k τ` for the Laughlin centre-of-mass factor.
    pub fn scaled(&self, k: f64) -> Modulus {
        Modulus { tau: self.tau * k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub a: f64,
    pub b: f64,
}

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic { a: 0.0, b: 0.0 };
    /// `[1/2; 1/2]`, whose theta function is odd with a simple zero at 0.
    pub const ODD: Characteristic = Characteristic { a: 0.5, b: 0.5 };

    pub fn new(a: f64, b: f64) -> Self {
        Characteristic { a, b }
    }
}

/// Summation control: an absolute tail tolerance, or a fixed half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub eps: f64,
    pub fixed_n: Option<usize>,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            eps: 1e-17,
            fixed_n: None,
        }
    }
}

impl Truncation {
    pub fn eps(eps: f64) -> Self {
        Truncation { eps, fixed_n: None }
    }

    pub fn fixed(n: usize) -> Self {
        Truncation {
            eps: 0.0,
            fixed_n: Some(n.max(1)),
        }
    }
}

/// A theta value in log form plus the absolute error bound of the
/// evaluation. `ln_value` carries the phase; its real part is `-∞` at a zero.
#[derive(Debug, Clone, Copy)]
pub struct ThetaValue {
    pub ln_value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl ThetaValue {
    pub fn value(&self) -> Complex64 {
        self.ln_value.exp()
    }
}

/// `Σ_{|k|>N} exp(-πT k² + 2π|y||k|)` bounded by a geometric series.
fn tail(n: usize, t: f64, y: f64) -> f64 {
    let k = (n + 1) as f64;
    let first = (-PI * t * k * k + 2.0 * PI * y.abs() * k).exp();
    let ratio = (-PI * t * (2.0 * k + 1.0) + 2.0 * PI * y.abs()).exp();
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        2.0 * first / (1.0 - ratio)
    }
}

/// Sum over `|k| ≤ N` for `z` already in the reduced strip. Returns the sum
/// and the tail bound.
fn reduced_sum(z: Complex64, tau: Complex64, trunc: Truncation) -> (Complex64, f64, usize) {
    let t = tau.im;
    let y = z.im;
    let n = match trunc.fixed_n {
        Some(n) => n,
        None => {
            let mut n = 1;
            while tail(n, t, y) > trunc.eps && n < 10_000 {
                n += 1;
            }
            n
        }
    };
    let q = (I * PI * tau).exp();
    let q2 = q * q;
    let x = (2.0 * PI * I * z).exp();
    let xinv = (-2.0 * PI * I * z).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    let (mut up, mut down) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let mut qodd = q;
    for _ in 0..n {
        up *= qodd * x;
        down *= qodd * xinv;
        sum += up + down;
        qodd *= q2;
    }
    (sum, tail(n, t, y), 2 * n + 1)
}

/// `ln θ(z, τ)` with `θ(z, τ) = Σ_k exp(πik²τ + 2πikz)`.
pub fn ln_theta(z: Complex64, tau: &Modulus, trunc: Truncation) -> ThetaValue {
    let tau = tau.tau;
    let j = (z.im / tau.im).round();
    let z1 = z - tau * j;
    let z0 = z1 - z1.re.round();
    // θ(z0 + jτ) = exp(-iπj²τ - 2πijz0) θ(z0)
    let log_pref = -I * PI * j * j * tau - 2.0 * PI * I * j * z0;
    let (s, tail, terms) = reduced_sum(z0, tau, trunc);
    let ln_value = log_pref + s.ln();
    ThetaValue {
        ln_value,
        tail_bound: log_pref.re.exp() * tail,
        terms,
    }
}

pub fn theta(z: Complex64, tau: &Modulus, trunc: Truncation) -> ThetaValue {
    ln_theta(z, tau, trunc)
}

/// `θ[a;b](z,τ) = exp(πia²τ + 2πia(z+b)) θ(z+aτ+b, τ)`.
pub fn theta_char(ch: Characteristic, z: Complex64, tau: &Modulus, trunc: Truncation) -> ThetaValue {
    let t = tau.tau;
    let log_pref = I * PI * ch.a * ch.a * t + 2.0 * PI * I * ch.a * (z + ch.b);
    let inner = ln_theta(z + t * ch.a + ch.b, tau, trunc);
    ThetaValue {
        ln_value: log_pref + inner.ln_value,
        tail_bound: log_pref.re.exp() * inner.tail_bound,
        terms: inner.terms,
    }
}

/// `θ[a;b]` by its defining series `Σ_k exp(πi(k+a)²τ + 2πi(k+a)(z+b))`,
/// summed around the dominant index without argument reduction.
pub fn theta_char_direct(
    ch: Characteristic,
    z: Complex64,
    tau: &Modulus,
    trunc: Truncation,
) -> Result<ThetaValue, ThetaError> {
    let t = tau.tau;
    let w = z + ch.b;
    // |term(k)| = exp(-πT (k+a-c)² + πT c²) with c = -Im(w)/T
    let c = -w.im / t.im;
    let centre = (c - ch.a).round() as i64;
    let peak = PI * t.im * c * c;
    let mut n = 1usize;
    let bound = |n: usize| {
        let d = n as f64 + 0.5;
        2.0 * (-PI * t.im * d * d + peak).exp() / (1.0 - (-PI * t.im * (2.0 * d + 1.0)).exp())
    };
    let eps = trunc.eps.max(f64::MIN_POSITIVE);
    match trunc.fixed_n {
        Some(f) => n = f,
        None => {
            while bound(n) > eps.max(peak.exp() * 1e-17) && n < 10_000 {
                n += 1;
            }
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in centre - n as i64..=centre + n as i64 {
        let ka = k as f64 + ch.a;
        sum += (I * PI * ka * ka * t + 2.0 * PI * I * ka * w).exp();
    }
    Ok(ThetaValue {
        ln_value: sum.ln(),
        tail_bound: bound(n),
        terms: 2 * n + 1,
    })
}

/// `θ₁ = θ[1/2; 1/2]`.
pub fn theta1(z: Complex64, tau: &Modulus) -> ThetaValue {
    theta_char(Characteristic::ODD, z, tau, Truncation::default())
}

/// `|θ[a;b](z,τ)|² exp(-2π (Im z)² / Im τ)`, a function on the torus.
pub fn invariant_density(ch: Characteristic, z: Complex64, tau: &Modulus) -> f64 {
    ln_invariant_density(ch, z, tau).exp()
}

pub fn ln_invariant_density(ch: Characteristic, z: Complex64, tau: &Modulus) -> f64 {
    let v = theta_char(ch, z, tau, Truncation::default());
    2.0 * v.ln_value.re - 2.0 * PI * z.im * z.im / tau.im()
}

/// Factor in `θ[a;b](z + n + mτ) = factor · θ[a;b](z)`.
pub fn shift_factor(ch: Characteristic, z: Complex64, tau: &Modulus, n: i64, m: i64) -> Complex64 {
    let (n, m) = (n as f64, m as f64);
    (-I * PI * m * m * tau.tau - 2.0 * PI * I * m * z + 2.0 * PI * I * (ch.a * n - ch.b * m)).exp()
}

/// Theta with a fixed characteristic and modulus, tuned for repeated
/// evaluation: the half-width and the powers `q^{2k+1}` are precomputed so
/// one call costs a single complex exponential and logarithm.
#[derive(Debug, Clone)]
pub struct ThetaKernel {
    ch: Characteristic,
    tau: Complex64,
    q_odd: Vec<Complex64>,
    tail: f64,
}

impl ThetaKernel {
    pub fn new(ch: Characteristic, tau: &Modulus) -> Self {
        let t = tau.im();
        let mut n = 1;
        while tail(n, t, t / 2.0) > 1e-18 && n < 10_000 {
            n += 1;
        }
        let q = (I * PI * tau.tau).exp();
        let q2 = q * q;
        let mut q_odd = Vec::with_capacity(n);
        let mut cur = q;
        for _ in 0..n {
            q_odd.push(cur);
            cur *= q2;
        }
        ThetaKernel {
            ch,
            tau: tau.tau,
            q_odd,
            tail: tail(n, t, t / 2.0),
        }
    }

    pub fn terms(&self) -> usize {
        2 * self.q_odd.len() + 1
    }

    /// Tail bound of the reduced sum, relative to the reduction prefactor.
    pub fn relative_tail(&self) -> f64 {
        self.tail
    }

    /// Log prefactor and reduced sum: `θ = exp(prefactor) · sum`.
    fn split(&self, z: Complex64) -> (Complex64, Complex64) {
        let (a, b, tau) = (self.ch.a, self.ch.b, self.tau);
        let pref_char = I * PI * a * a * tau + 2.0 * PI * I * a * (z + b);
        let w = z + tau * a + b;
        let j = (w.im / tau.im).round();
        let w1 = w - tau * j;
        let w0 = w1 - w1.re.round();
        let pref_red = -I * PI * j * j * tau - 2.0 * PI * I * j * w0;
        let x = (2.0 * PI * I * w0).exp();
        let xinv = x.inv();
        let mut sum = Complex64::new(1.0, 0.0);
        let (mut up, mut down) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for q in &self.q_odd {
            up *= q * x;
            down *= q * xinv;
            sum += up + down;
        }
        (pref_char + pref_red, sum)
    }

    pub fn ln_value(&self, z: Complex64) -> Complex64 {
        let (pref, sum) = self.split(z);
        pref + sum.ln()
    }

    /// `ln |θ(z)|`, skipping the phase.
    pub fn ln_abs(&self, z: Complex64) -> f64 {
        let (pref, sum) = self.split(z);
        pref.re + 0.5 * sum.norm_sqr().ln()
    }

    /// `θ(z) · exp(shift)` for a real log-scale `shift`, without overflow in
    /// the intermediate steps.
    pub fn scaled_value(&self, z: Complex64, shift: f64) -> Complex64 {
        let (pref, sum) = self.split(z);
        (pref + shift).exp() * sum
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.ln_value(z).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64, abs: f64) -> bool {
        (a - b).norm() <= abs.max(rel * a.norm().max(b.norm()))
    }

    #[test]
    fn reference_values() {
        let i = Modulus::new(c(0.0, 1.0)).unwrap();
        let v = theta(c(0.0, 0.0), &i, Truncation::default());
        assert!((v.value().re - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(v.tail_bound < 1e-15);
        let t = Modulus::new(c(0.3, 0.8)).unwrap();
        let v = theta(c(0.1, 0.05), &t, Truncation::default()).value();
        assert!(close(v, c(1.105_415_193_961_489_6, 0.093_460_481_338_439_28), 1e-13, 0.0));
    }

    #[test]
    fn fixed_truncation_at_six_terms() {
        let i = Modulus::new(c(0.0, 1.0)).unwrap();
        let v = theta(c(0.0, 0.0), &i, Truncation::fixed(6));
        assert!((v.value().re - 1.086_434_811_213_308).abs() < 1e-12);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert_eq!(Modulus::new(c(0.0, -1.0)), Err(ThetaError::Domain(-1.0)));
        assert!(Modulus::new(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn zero_characteristic_is_plain_theta() {
        let t = Modulus::new(c(0.5, 1.0)).unwrap();
        let z = c(0.2, -0.3);
        let a = theta(z, &t, Truncation::default()).value();
        let b = theta_char(Characteristic::ZERO, z, &t, Truncation::default()).value();
        assert!(close(a, b, 1e-14, 0.0));
    }

    #[test]
    fn odd_theta_vanishes_at_origin() {
        for tau in [c(0.0, 1.0), c(0.5, 1.0), c(0.3, 0.8), c(-0.2, 2.5)] {
            let t = Modulus::new(tau).unwrap();
            let scale = theta1(c(0.25, 0.0), &t).value().norm();
            assert!(theta1(c(0.0, 0.0), &t).value().norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn routes_agree_far_from_origin() {
        let t = Modulus::new(c(0.3, 0.8)).unwrap();
        let ch = Characteristic::new(1.0 / 3.0, 0.0);
        let z = c(2.7, 3.1);
        let a = theta_char(ch, z, &t, Truncation::default());
        let b = theta_char_direct(ch, z, &t, Truncation::default()).unwrap();
        assert!(close(a.value(), b.value(), 1e-10, 0.0));
    }

    #[test]
    fn evenness() {
        let t = Modulus::new(c(0.5, 1.0)).unwrap();
        let z = c(0.31, 0.17);
        let a = theta(z, &t, Truncation::default()).value();
        let b = theta(-z, &t, Truncation::default()).value();
        assert!(close(a, b, 1e-12, 0.0));
    }

    #[test]
    fn kernel_matches_general_route() {
        let t = Modulus::new(c(0.3, 0.8)).unwrap();
        for ch in [Characteristic::ZERO, Characteristic::ODD, Characteristic::new(0.25, -0.4)] {
            let k = ThetaKernel::new(ch, &t);
            for z in [c(0.1, 0.05), c(-2.3, 1.7), c(5.5, -3.2)] {
                let a = theta_char(ch, z, &t, Truncation::default()).value();
                assert!(close(k.value(z), a, 1e-12, 1e-300));
                assert!((k.ln_abs(z) - a.norm().ln()).abs() < 1e-12);
                assert!(close(k.scaled_value(z, -1.5), a * (-1.5f64).exp(), 1e-12, 1e-300));
            }
        }
    }

    #[test]
    fn shift_law_with_nonzero_b() {
        let t = Modulus::new(c(0.5, 1.0)).unwrap();
        let ch = Characteristic::new(0.2, 0.3);
        let z = c(0.13, 0.21);
        let base = theta_char(ch, z, &t, Truncation::default()).value();
        for (n, m) in [(1, 0), (0, 1), (2, -1), (-1, 2)] {
            let shifted = z + n as f64 + t.tau() * m as f64;
            let lhs = theta_char_direct(ch, shifted, &t, Truncation::default()).unwrap().value();
            let rhs = shift_factor(ch, z, &t, n, m) * base;
            assert!(close(lhs, rhs, 1e-10, 0.0), "n={n} m={m}");
        }
    }
}
