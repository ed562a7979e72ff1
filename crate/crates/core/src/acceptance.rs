//! End-to-end acceptance checks shared by `qhc check` and the `acceptance`
//! test target. Each check returns a [`CriterionResult`]; sweeps stop at the
//! first failing point and name it.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::berry::{
    conjugation_check, default_frozen, slice_chern_number, sphere_ratio_check, Budget, SliceSpec, Surface,
};

use crate::chern::{
    self, ch_filled, ch_general_with, ch_multilayer, ch_with_picard, grr_oracle,
    multilayer_grr_oracle, picard_oracle, projective_flatness_check, Coupling, MultilayerConfig,
    OracleLimits, SingleLayerConfig,
};
use crate::chern::linalg;
use crate::ring::rational::{binom, int};
use crate::laughlin::{torus_density_entry, Configuration, SphereData, TorusData};
use crate::ring::{GeneratorTable, RingElement};
use crate::theta::{
    invariant_density, shift_factor, theta, theta1, theta_char, theta_char_direct, Characteristic, Modulus,
    Truncation,
};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<34} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn timed(name: &'static str, body: impl FnOnce() -> Result<String, String>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Runs `check` over `items` in parallel and reports the first failure in
/// input order.
fn first_failure<T: Sync + fmt::Debug>(
    items: &[T],
    check: impl Fn(&T) -> Result<(), String> + Sync,
) -> Result<usize, String> {
    let failures: Vec<Option<String>> = items
        .par_iter()
        .map(|x| check(x).err().map(|e| format!("{x:?}: {e}")))
        .collect();
    match failures.into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(items.len()),
    }
}

pub type BinomFn = fn(i64, i64) -> BigInt;

/// A deliberately wrong binomial that ignores the zero convention for
/// negative lower index; used to exercise the failure path.
pub fn faulty_binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        BigInt::from(1)
    } else {
        binom(n, k)
    }
}

/// `b∈1..4, c∈0..3, g∈0..4, m∈1..4, p∈0..3`, `n = 2g` (smallest `n > 2g-1`).
pub fn single_layer_sweep() -> Vec<SingleLayerConfig> {
    let mut out = Vec::new();
    for b in 1..=4 {
        for c in 0..=3 {
            for g in 0..=4u32 {
                for m in 1..=4 {
                    for p in 0..=3 {
                        let n = 2 * i64::from(g);
                        out.push(SingleLayerConfig::with_p(b, c, g, n, m, p).expect("valid sweep point"));
                    }
                }
            }
        }
    }
    out
}

pub fn oracle_equivalence(binom_fn: BinomFn) -> CriterionResult {
    timed("oracle equivalence (general p)", || {
        let sweep = single_layer_sweep();
        let n = first_failure(&sweep, |cfg| {
            let oracle = grr_oracle(cfg).map_err(|e| e.to_string())?;
            let closed = ch_general_with(cfg, &binom_fn).map_err(|e| e.to_string())?;
            if oracle == closed {
                Ok(())
            } else {
                Err(format!("oracle {oracle} != closed form {closed}"))
            }
        })?;
        Ok(format!("{n} configurations, exact equality"))
    })
}

pub fn filled_identity(binom_fn: BinomFn) -> CriterionResult {
    timed("filled-case identity", || {
        let sweep: Vec<_> = single_layer_sweep().into_iter().filter(|c| c.p() == 0).collect();
        let n = first_failure(&sweep, |cfg| {
            let general = ch_general_with(cfg, &binom_fn).map_err(|e| e.to_string())?;
            let filled = ch_filled(cfg).map_err(|e| e.to_string())?;
            if general != filled {
                return Err(format!("{general} != {filled}"));
            }
            if filled.rank() != crate::ring::rational::pow_int(cfg.b, cfg.g) {
                return Err(format!("rank {} != b^g", filled.rank()));
            }
            Ok(())
        })?;
        let negative: Vec<_> = single_layer_sweep()
            .into_iter()
            .filter(|c| c.p() == 0)
            .flat_map(|c| {
                [-1, -2].map(|p| SingleLayerConfig::with_p(c.b, c.c, c.g, c.n, c.m, p).expect("valid"))
            })
            .collect();
        let k = first_failure(&negative, |cfg| {
            let x = ch_general_with(cfg, &binom_fn).map_err(|e| e.to_string())?;
            if x.is_zero() {
                Ok(())
            } else {
                Err(format!("p < 0 gave {x}"))
            }
        })?;
        Ok(format!("{n} filled configurations, {k} with p < 0 vanish"))
    })
}

/// A deterministic non-negative `C` with entries in `0..=2`.
fn pattern_c(nl: usize, nq: usize, seed: usize) -> Vec<Vec<i64>> {
    (0..nl)
        .map(|i| (0..nq).map(|s| ((i + 2 * s + seed) % 3) as i64).collect())
        .collect()
}

/// Symmetric matrices of size `k` with entries in `lo..=hi`.
pub fn symmetric_matrices(k: usize, lo: i64, hi: i64) -> Vec<Vec<Vec<i64>>> {
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let base = (hi - lo + 1) as usize;
    let total = base.pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut m = vec![vec![0i64; k]; k];
            for &(i, j) in &slots {
                let v = lo + (code % base) as i64;
                code /= base;
                m[i][j] = v;
                m[j][i] = v;
            }
            m
        })
        .collect()
}

fn nonsingular(k: &[Vec<i64>]) -> bool {
    !num_traits::Zero::is_zero(&linalg::det(&linalg::from_ints(k)))
}

/// The finite multilayer sweep:
///
/// * `N_l = 1`: `K ∈ 1..4`, every `C` with entries `0..2` for `N_q ≤ 3`,
///   `g ≤ 3`;
/// * `N_l = 2`: every nonsingular `K` with entries `0..4`, `N_q ≤ 3`, `g ≤ 3`;
/// * `N_l = 3`: every nonsingular `K` with entries `0..4` at `g = 1`, and
///   every 37th one at `g ∈ {0, 2, 3}`;
/// * the Halperin `K = [[3,1],[1,3]]`, `C = (1,1)ᵀ` for `g ≤ 3`.
pub fn multilayer_sweep() -> Vec<MultilayerConfig> {
    let mut out = Vec::new();
    let mut push = |k: Vec<Vec<i64>>, c: Vec<Vec<i64>>, g: u32| {
        let nl = k.len();
        let nq = c[0].len();
        let n: Vec<i64> = (0..nl).map(|i| 1 + i as i64).collect();
        let m: Vec<i64> = (0..nq).map(|s| 1 + (s % 2) as i64).collect();
        out.push(MultilayerConfig::filled(k, c, n, m, g).expect("valid sweep point"));
    };
    for g in 0..=3 {
        push(vec![vec![3, 1], vec![1, 3]], vec![vec![1], vec![1]], g);
    }
    for kv in 1..=4 {
        for nq in 1..=3usize {
            for code in 0..3usize.pow(nq as u32) {
                let row: Vec<i64> = (0..nq).map(|s| ((code / 3usize.pow(s as u32)) % 3) as i64).collect();
                for g in 0..=3 {
                    push(vec![vec![kv]], vec![row.clone()], g);
                }
            }
        }
    }
    for (idx, k) in symmetric_matrices(2, 0, 4).into_iter().filter(|k| nonsingular(k)).enumerate() {
        for nq in 1..=3 {
            for g in 0..=3 {
                push(k.clone(), pattern_c(2, nq, idx + g as usize), g);
            }
        }
    }
    for (idx, k) in symmetric_matrices(3, 0, 4).into_iter().filter(|k| nonsingular(k)).enumerate() {
        let nq = 1 + idx % 3;
        push(k.clone(), pattern_c(3, nq, idx), 1);
        if idx % 37 == 0 {
            for g in [0, 2, 3] {
                push(k.clone(), pattern_c(3, nq, idx + 1), g);
            }
        }
    }
    out
}

pub fn multilayer() -> CriterionResult {
    timed("multilayer oracle", || {
        let sweep = multilayer_sweep();
        let n = first_failure(&sweep, |cfg| {
            let closed = ch_multilayer(cfg).map_err(|e| e.to_string())?;
            let oracle = multilayer_grr_oracle(cfg, OracleLimits::default()).map_err(|e| e.to_string())?;
            if closed != oracle {
                return Err("oracle and closed form differ".into());
            }
            let det = linalg::det(&linalg::from_ints(&cfg.k));
            if closed.rank() != num_traits::pow(det, cfg.g as usize) {
                return Err(format!("rank {} != det(K)^g", closed.rank()));
            }
            Ok(())
        })?;
        Ok(format!("{n} configurations, exact equality"))
    })
}

/// Berezin integral of `exp(ψ̄ᵀKψ - φ̄ᵀCᵀψ - ψ̄ᵀCφ)` against
/// `det(K) exp(-φ̄ᵀCᵀK⁻¹Cφ)`.
pub fn wick_check(k: &[Vec<i64>], c: &[Vec<i64>]) -> Result<(), String> {
    let n = k.len();
    let q = c.first().map_or(0, Vec::len);
    let mut tb = GeneratorTable::builder();
    for i in 0..n {
        tb = tb.odd(format!("ψ̄{i}")).odd(format!("ψ{i}"));
    }
    for s in 0..q {
        tb = tb.odd(format!("φ̄{s}")).odd(format!("φ{s}"));
    }
    let t = tb.build().map_err(|e| e.to_string())?;
    let pair = |t: &Arc<GeneratorTable>, x: String, y: String, v: crate::ring::Rational| {
        RingElement::product(t, &[&x, &y], v).expect("known generators")
    };
    let mut e = RingElement::zero(&t);
    for i in 0..n {
        for j in 0..n {
            e = &e + &pair(&t, format!("ψ̄{i}"), format!("ψ{j}"), int(k[i][j]));
        }
        for s in 0..q {
            e = &e + &pair(&t, format!("φ̄{s}"), format!("ψ{i}"), int(-c[i][s]));
            e = &e + &pair(&t, format!("ψ̄{i}"), format!("φ{s}"), int(-c[i][s]));
        }
    }
    let order: Vec<String> = (0..n).flat_map(|i| [format!("ψ̄{i}"), format!("ψ{i}")]).collect();
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let lhs = e.exp().map_err(|x| x.to_string())?.berezin(&refs).map_err(|x| x.to_string())?;

    let km = linalg::from_ints(k);
    let det = linalg::det(&km);
    let kinv = linalg::inverse(&km).ok_or("singular K")?;
    let cm = linalg::from_ints(c);
    let m = linalg::mul(&linalg::mul(&linalg::transpose(&cm), &kinv), &cm);
    let mut quad = RingElement::zero(&t);
    for s in 0..q {
        for u in 0..q {
            quad = &quad + &pair(&t, format!("φ̄{s}"), format!("φ{u}"), -m[s][u].clone());
        }
    }
    let rhs = quad.exp().map_err(|x| x.to_string())?.scale(&det);
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("Berezin {lhs} != Wick {rhs}"))
    }
}

fn wick_c(n: usize, seed: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..2).map(|s| ((i * 3 + s * 5 + seed) % 5) as i64 - 2).collect())
        .collect()
}

pub fn wick() -> CriterionResult {
    timed("Wick identity", || {
        let mut total = 0;
        for size in 1..=3 {
            let ks: Vec<_> = symmetric_matrices(size, -3, 3)
                .into_iter()
                .filter(|k| nonsingular(k))
                .enumerate()
                .collect();
            total += first_failure(&ks, |(idx, k)| wick_check(k, &wick_c(size, *idx)))?;
        }
        Ok(format!("{total} symmetric K, exact equality"))
    })
}

pub fn picard() -> CriterionResult {
    timed("charge transport (Picard)", || {
        let mut sweep = Vec::new();
        for b in 1..=3 {
            for c in 1..=2 {
                for g in 1..=3u32 {
                    let n = 2 * i64::from(g);
                    sweep.push(SingleLayerConfig::with_p(b, c, g, n, n, 0).expect("valid"));
                }
            }
        }
        let n = first_failure(&sweep, |cfg| {
            let oracle = picard_oracle(cfg, Coupling::Multilayer).map_err(|e| e.to_string())?;
            let closed = ch_with_picard(cfg).map_err(|e| e.to_string())?;
            if oracle != closed {
                return Err(format!("oracle {} != closed form {closed}", oracle.expansion));
            }
            let q = chern::tables::quasihole_table(cfg.g, cfg.xi_order()).map_err(|e| e.to_string())?;
            let restricted = closed.expansion.restrict(&q).map_err(|e| e.to_string())?;
            let filled = ch_filled(cfg).map_err(|e| e.to_string())?;
            if restricted != filled.expansion {
                return Err("restriction to quasihole generators differs from ch_filled".into());
            }
            Ok(())
        })?;
        Ok(format!("{n} configurations, exact equality"))
    })
}

pub fn flatness() -> CriterionResult {
    timed("projective flatness shape", || {
        let sweep: Vec<_> = single_layer_sweep().into_iter().filter(|c| c.p() == 0).collect();
        let n = first_failure(&sweep, |cfg| {
            let x = ch_filled(cfg).map_err(|e| e.to_string())?;
            match projective_flatness_check(&x) {
                Ok(true) => Ok(()),
                Ok(false) => Err("filled class not of the form r·exp(c₁/r)".into()),
                Err(e) => Err(e.to_string()),
            }
        })?;
        let positive: Vec<_> = single_layer_sweep().into_iter().filter(|c| c.p() > 0).collect();
        let non_flat: Vec<bool> = positive
            .par_iter()
            .map(|cfg| {
                let x = chern::ch_general(cfg).expect("closed form evaluates");
                matches!(projective_flatness_check(&x), Ok(false))
            })
            .collect();
        let count = non_flat.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err("no p > 0 class failed the flatness check".into());
        }
        Ok(format!("{n} filled classes flat; {count} of {} p > 0 classes not flat", positive.len()))
    })
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn moduli() -> Vec<Modulus> {
    [cx(0.0, 1.0), cx(0.5, 1.0), cx(0.3, 0.8)]
        .into_iter()
        .map(|t| Modulus::new(t).expect("upper half plane"))
        .collect()
}

/// Relative defect with an absolute floor for values near zero.
fn defect(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}

/// Running maximum of a named defect against its tolerance.
struct Defects(Vec<(&'static str, f64, f64)>);

impl Defects {
    fn record(&mut self, name: &'static str, tol: f64, value: f64) {
        match self.0.iter_mut().find(|d| d.0 == name) {
            Some(d) => d.2 = d.2.max(if value.is_nan() { f64::INFINITY } else { value }),
            None => self.0.push((name, tol, value)),
        }
    }

    fn report(&self, what: String) -> Result<String, String> {
        let summary: Vec<String> = self.0.iter().map(|(n, _, v)| format!("{n} {v:.1e}")).collect();
        match self.0.iter().find(|(_, tol, v)| !(v <= tol)) {
            Some((n, tol, v)) => Err(format!("{n}: defect {v:.3e} > {tol:.0e}")),
            None => Ok(format!("{what}; max {}", summary.join(", "))),
        }
    }
}

/// Quasi-periodicity of theta and its characteristic versions on a 10×10
/// grid per modulus. Shifted values come from the unreduced series, so the
/// identities are not assumed by the evaluation route.
pub fn theta_suite() -> CriterionResult {
    timed("theta suite", || {
        let tr = Truncation::default();
        let chars = [(0.0, 0.0), (0.5, 0.5), (0.5, 0.0), (0.0, 0.5), (1.0 / 3.0, 0.0), (0.2, 0.3)];
        let mut d = Defects(Vec::new());
        let reference = theta(cx(0.0, 0.0), &Modulus::new(cx(0.0, 1.0)).unwrap(), tr).value();
        d.record("theta(0,i)", 1e-12, (reference.re - 1.086_434_811_213_308).abs() + reference.im.abs());
        let mut count = 0;
        for tau in moduli() {
            let t = tau.tau();
            let direct = |ch: (f64, f64), z: Complex64| {
                theta_char_direct(Characteristic::new(ch.0, ch.1), z, &tau, tr).map(|v| v.value())
            };
            let scale = (0..10)
                .map(|k| theta1(cx((k as f64 + 0.5) / 10.0, 0.0), &tau).value().norm())
                .fold(0.0, f64::max);
            d.record("theta1(0)", 1e-10, theta1(cx(0.0, 0.0), &tau).value().norm() / scale);
            let zero = invariant_density(Characteristic::ODD, cx(0.0, 0.0), &tau);
            d.record("density zero", 1e-20, zero);
            for i in 0..10 {
                for j in 0..10 {
                    let z = t * ((j as f64 + 0.5) / 10.0) + (i as f64 + 0.5) / 10.0 - 0.5;
                    let th = theta(z, &tau, tr).value();
                    let one = direct((0.0, 0.0), z + 1.0).map_err(|e| e.to_string())?;
                    d.record("z+1", 1e-10, defect(one, th, 1e-300));
                    let shifted = direct((0.0, 0.0), z + t).map_err(|e| e.to_string())?;
                    let factor = (Complex64::i() * std::f64::consts::PI * (-t - 2.0 * z)).exp();
                    d.record("z+tau", 1e-12, defect(shifted, factor * th, 1e-300));
                    d.record("evenness", 1e-12, defect(theta(-z, &tau, tr).value(), th, 1e-300));
                    for &ch in &chars {
                        let c = Characteristic::new(ch.0, ch.1);
                        let base = theta_char(c, z, &tau, tr).value();
                        let floor = 1e-12;
                        d.record("routes", 1e-10, defect(base, direct(ch, z).map_err(|e| e.to_string())?, floor));
                        for (n, m) in [(1, 0), (0, 1), (-1, 2), (2, -1), (3, 1)] {
                            let moved = z + n as f64 + t * m as f64;
                            let lhs = direct(ch, moved).map_err(|e| e.to_string())?;
                            let rhs = shift_factor(c, z, &tau, n, m) * base;
                            d.record("shift law", 1e-10, defect(lhs, rhs, floor));
                        }
                        let dens = invariant_density(c, z, &tau);
                        let gauss = |w: Complex64| (-2.0 * std::f64::consts::PI * w.im * w.im / tau.im()).exp();
                        let at = |w: Complex64| direct(ch, w).map(|v| v.norm_sqr() * gauss(w));
                        let one = at(z + 1.0).map_err(|e| e.to_string())?;
                        let up = at(z + t).map_err(|e| e.to_string())?;
                        let floor = 1e-24;
                        d.record("density +1", 1e-12, (one - dens).abs() / dens.max(one).max(floor));
                        d.record("density +tau", 1e-10, (up - dens).abs() / dens.max(up).max(floor));
                        if dens < 0.0 {
                            return Err(format!("negative density at z={z}"));
                        }
                        count += 1;
                    }
                }
            }
        }
        d.report(format!("{count} (tau, char, z) points"))
    })
}

/// Descent of the torus density to the symmetric product: every entry is
/// doubly periodic in each particle.
pub fn torus_descent() -> CriterionResult {
    timed("torus density descent", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let taus = moduli();
        let mut d = Defects(Vec::new());
        let shapes: Vec<(u32, usize, usize)> = (1..=2)
            .flat_map(|b| (1..=3).flat_map(move |n| (1..=2).map(move |m| (b, n, m))))
            .collect();
        for k in 0..100 {
            let (b, n, m) = shapes[k % shapes.len()];
            let tau = taus[k % taus.len()];
            let data = TorusData::new(tau, b, n, m).map_err(|e| e.to_string())?;
            let t = tau.tau();
            let mut point = || t * rng.gen::<f64>() + rng.gen::<f64>();
            let z: Vec<Complex64> = (0..n).map(|_| point()).collect();
            let w: Vec<Complex64> = (0..m).map(|_| point()).collect();
            let cfg = Configuration::new(z.clone(), w.clone());
            let entry = |l, k, c: &Configuration| torus_density_entry(l, k, c, &data).map_err(|e| e.to_string());
            for l in 0..b as usize {
                for kk in 0..b as usize {
                    let base = entry(l, kk, &cfg)?;
                    let scale = (entry(l, l, &cfg)?.re * entry(kk, kk, &cfg)?.re).sqrt();
                    if l == kk && (base.re < 0.0 || base.im.abs() > 1e-12 * base.re.max(1e-300)) {
                        return Err(format!("diagonal entry {base} not real non-negative"));
                    }
                    for mu in 0..n {
                        for (label, shift) in [("z+1", cx(1.0, 0.0)), ("z+tau", t), ("z-tau", -t)] {
                            let mut moved = z.clone();
                            moved[mu] += shift;
                            let v = entry(l, kk, &Configuration::new(moved, w.clone()))?;
                            d.record(label, 1e-9, (v - base).norm() / scale.max(base.norm()).max(1e-300));
                        }
                    }
                }
            }
        }
        d.report("100 configurations, b<=2, n<=3, m<=2".to_string())
    })
}

/// Monte-Carlo budget for the numerical criteria.
#[derive(Debug, Clone, Copy)]
pub struct McBudget {
    pub samples: usize,
    pub grid: usize,
    pub conjugation_samples: usize,
    pub seed: u64,
}

impl Default for McBudget {
    fn default() -> Self {
        McBudget {
            samples: 200_000,
            grid: 24,
            conjugation_samples: 100_000,
            seed: 7,
        }
    }
}

pub fn conjugation(budget: McBudget) -> CriterionResult {
    timed("conjugation laws", || {
        let tau = Modulus::new(cx(0.3, 0.8)).unwrap();
        let data = TorusData::new(tau, 2, 2, 1).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0xc0);
        let ws: Vec<Complex64> = (0..10).map(|_| tau.tau() * rng.gen::<f64>() + rng.gen::<f64>()).collect();
        let report = conjugation_check(&data, &[], &ws, Budget::new(budget.conjugation_samples, budget.seed))
            .map_err(|e| e.to_string())?;
        let worst = report
            .points
            .iter()
            .map(|p| p.sigmas_one.max(p.sigmas_tau))
            .fold(0.0, f64::max);
        if report.passed() {
            Ok(format!("10 w, {} samples; worst {worst:.2e} sigma", report.samples))
        } else {
            Err(report.violations.join("; "))
        }
    })
}

pub fn slice_numbers(budget: McBudget) -> CriterionResult {
    timed("slice Chern numbers", || {
        let spec = SliceSpec {
            grid: budget.grid,
            step: 0.05,
            budget: Budget::new(budget.samples, budget.seed),
        };
        let tau = Modulus::new(cx(0.0, 1.0)).unwrap();
        let cases = [
            ("sphere 1,2,1", Surface::Sphere(SphereData::new(1, 2, 1).map_err(|e| e.to_string())?), 1),
            ("torus 1,2,2", Surface::Torus(TorusData::new(tau, 1, 2, 2).map_err(|e| e.to_string())?), 2),
            ("torus 2,2,1", Surface::Torus(TorusData::new(tau, 2, 2, 1).map_err(|e| e.to_string())?), 1),
        ];
        let mut parts = Vec::new();
        let mut ok = true;
        for (label, surface, m) in cases {
            let r = slice_chern_number(&surface, &default_frozen(m), &spec).map_err(|e| format!("{label}: {e}"))?;
            ok &= r.passed;
            let flux = r
                .periodic_flux
                .map(|f| format!(" periodic {:.1e}", f.value))
                .unwrap_or_default();
            parts.push(format!(
                "{label}: {:.4} vs {} (±{:.1e}{flux})",
                r.measured, r.predicted, r.combined_error
            ));
        }
        let detail = parts.join("; ");
        if ok {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

pub fn sphere_ratio(budget: McBudget) -> CriterionResult {
    timed("sphere analytic cross-check", || {
        let points: Vec<Complex64> = [-1.5, -0.5, 0.5, 1.5]
            .iter()
            .flat_map(|&x| [-1.0, -0.5, 0.0, 0.5, 1.0].map(|y| cx(x, y)))
            .collect();
        let results = sphere_ratio_check(&points, Budget::new(budget.samples, budget.seed))
            .map_err(|e| e.to_string())?;
        let worst = results
            .iter()
            .map(|r| (r.ratio - r.expected).abs() / r.stderr)
            .fold(0.0, f64::max);
        match results.iter().find(|r| !r.within(3.0)) {
            Some(r) => Err(format!(
                "w=({},{}): ratio {:.5} vs {:.5} (stderr {:.1e})",
                r.w[0], r.w[1], r.ratio, r.expected, r.stderr
            )),
            None => Ok(format!("{} points within 3 sigma; worst {worst:.2} sigma", results.len())),
        }
    })
}

pub type Criterion = Box<dyn Fn() -> CriterionResult + Send + Sync>;

/// Every criterion by name, in reporting order. The exact and deterministic
/// ones come first; the Monte-Carlo ones are included when `mc` is given.
/// `binom_fn` replaces the binomial used by the closed form (fault
/// injection).
pub fn criteria(binom_fn: BinomFn, mc: Option<McBudget>) -> Vec<(&'static str, Criterion)> {
    let mut out: Vec<(&'static str, Criterion)> = vec![
        ("oracle equivalence (general p)", Box::new(move || oracle_equivalence(binom_fn))),
        ("filled-case identity", Box::new(move || filled_identity(binom_fn))),
        ("multilayer oracle", Box::new(multilayer)),
        ("Wick identity", Box::new(wick)),
        ("charge transport (Picard)", Box::new(picard)),
        ("projective flatness shape", Box::new(flatness)),
        ("theta suite", Box::new(theta_suite)),
        ("torus density descent", Box::new(torus_descent)),
    ];
    if let Some(b) = mc {
        out.push(("conjugation laws", Box::new(move || conjugation(b))));
        out.push(("slice Chern numbers", Box::new(move || slice_numbers(b))));
        out.push(("sphere analytic cross-check", Box::new(move || sphere_ratio(b))));
    }
    out
}

/// Runs the criteria whose name contains one of `filters` (all if empty),
/// calling `report` as each finishes.
pub fn run_criteria(
    list: Vec<(&'static str, Criterion)>,
    filters: &[String],
    mut report: impl FnMut(&CriterionResult),
) -> Vec<CriterionResult> {
    list.into_iter()
        .filter(|(name, _)| {
            filters.is_empty() || filters.iter().any(|f| name.to_lowercase().contains(&f.to_lowercase()))
        })
        .map(|(_, run)| {
            let r = run();
            report(&r);
            r
        })
        .collect()
}
