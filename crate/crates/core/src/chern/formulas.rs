//! Closed-form Chern characters.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::class::{ChernClass, Collected};
use super::config::{MultilayerConfig, SingleLayerConfig};
use super::linalg;
use super::symbolic::{SymMonomial, SymPoly, Symbol};
use super::tables;
use crate::error::ChernError;
use crate::ring::rational::{binom, factorial, int, pow_int, ratio};
use crate::ring::Rational;

pub use super::config::p_of;

fn single_caps(g: u32, xi_order: u32) -> impl Fn(Symbol) -> u32 {
    move |s| match s {
        Symbol::XiM | Symbol::XiType(_) => xi_order - 1,
        _ => g,
    }
}

/// `e^{-cnξ_m} Σ_{j≤k≤g} C(n-g+p, k-g+p) C(g-j, k-j) b^{k-j} (-c²θ_m)^j / j!`.
pub fn ch_general(cfg: &SingleLayerConfig) -> Result<ChernClass, ChernError> {
    ch_general_with(cfg, &binom)
}

/// [`ch_general`] with the binomial coefficient supplied by the caller.
pub fn ch_general_with(
    cfg: &SingleLayerConfig,
    binom_fn: &dyn Fn(i64, i64) -> BigInt,
) -> Result<ChernClass, ChernError> {
    cfg.validate()?;
    let (b, c, n, p) = (cfg.b, cfg.c, cfg.n, cfg.p());
    let g = i64::from(cfg.g);
    let mut sum = SymPoly::zero();
    for j in 0..=g {
        let theta_coeff = pow_int(-c * c, j as u32) / Rational::from_integer(factorial(j as u32));
        let mut inner = Rational::zero();
        for k in j..=g {
            let w = binom_fn(n - g + p, k - g + p) * binom_fn(g - j, k - j);
            inner += Rational::from_integer(w) * pow_int(b, (k - j) as u32);
        }
        sum.add_term(SymMonomial::of(Symbol::ThetaM, j as u32), inner * theta_coeff);
    }
    let caps = single_caps(cfg.g, cfg.xi_order());
    let xi = SymPoly::linear(&[(Symbol::XiM, int(-c * n))]).exp_linear(&caps)?;
    let poly = sum.mul_capped(&xi, &caps);
    finish_single(cfg, poly)
}

fn finish_single(cfg: &SingleLayerConfig, poly: SymPoly) -> Result<ChernClass, ChernError> {
    let table = tables::quasihole_table(cfg.g, cfg.xi_order())?;
    let expansion = poly.expand(&table, cfg.g)?;
    Ok(ChernClass {
        expansion,
        collected: Some(Collected::Polynomial(poly)),
        g: cfg.g,
        warnings: cfg.validity_warnings(),
    })
}

/// `b^g exp(-(c²/b)θ_m - cnξ_m)`; requires `p = 0`.
pub fn ch_filled(cfg: &SingleLayerConfig) -> Result<ChernClass, ChernError> {
    cfg.validate()?;
    require_filled(cfg)?;
    let caps = single_caps(cfg.g, cfg.xi_order());
    let exponent = SymPoly::linear(&[
        (Symbol::ThetaM, ratio(-cfg.c * cfg.c, cfg.b)),
        (Symbol::XiM, int(-cfg.c * cfg.n)),
    ]);
    let poly = exponent.exp_linear(&caps)?.scale(&pow_int(cfg.b, cfg.g));
    finish_single(cfg, poly)
}

fn require_filled(cfg: &SingleLayerConfig) -> Result<(), ChernError> {
    let p = cfg.p();
    if p != 0 {
        return Err(ChernError::Precondition(format!(
            "filled case needs p = d - bn - cm - b(g-1) = 0, got p = {p}"
        )));
    }
    Ok(())
}

/// `b^g exp(-(c²/b)θ_m - ncξ_m - (1/b)θ_d - (c/b)η_{m,d})` over the
/// quasihole and Picard generators; requires `p = 0`.
pub fn ch_with_picard(cfg: &SingleLayerConfig) -> Result<ChernClass, ChernError> {
    cfg.validate()?;
    require_filled(cfg)?;
    let (b, c) = (cfg.b, cfg.c);
    let mut lin = vec![(Symbol::XiM, int(-c * cfg.n))];
    if cfg.g > 0 {
        lin.extend([
            (Symbol::ThetaM, ratio(-c * c, b)),
            (Symbol::ThetaD, ratio(-1, b)),
            (Symbol::EtaMD, ratio(-c, b)),
        ]);
    }
    let exponent = SymPoly::linear(&lin);
    let prefactor = pow_int(b, cfg.g);
    let table = tables::picard_table(cfg.g, cfg.xi_order())?;
    let expansion = exponent.expand(&table, cfg.g)?.exp()?.scale(&prefactor);
    Ok(ChernClass {
        expansion,
        collected: Some(Collected::Exponential { prefactor, exponent }),
        g: cfg.g,
        warnings: cfg.validity_warnings(),
    })
}

/// Data shared by the multilayer closed form and oracle checks.
pub struct MultilayerData {
    pub det_k: Rational,
    /// `-Cᵀ K⁻¹ C`.
    pub coupling: linalg::Matrix,
    pub k_minus_identity_psd: bool,
}

pub fn multilayer_data(cfg: &MultilayerConfig) -> Result<MultilayerData, ChernError> {
    cfg.check_shapes()?;
    let k = linalg::from_ints(&cfg.k);
    let det_k = linalg::det(&k);
    if det_k.is_zero() {
        return Err(ChernError::SingularK);
    }
    let kinv = linalg::inverse(&k).ok_or(ChernError::SingularK)?;
    let c = linalg::from_ints(&cfg.c);
    let ct = linalg::transpose(&c);
    let coupling: linalg::Matrix = linalg::mul(&linalg::mul(&ct, &kinv), &c)
        .into_iter()
        .map(|row| row.into_iter().map(|v| -v).collect())
        .collect();
    let mut kmi = k.clone();
    for (i, row) in kmi.iter_mut().enumerate() {
        row[i] -= Rational::one();
    }
    Ok(MultilayerData {
        det_k,
        coupling,
        k_minus_identity_psd: linalg::is_psd(&kmi),
    })
}

/// `det(K)^g exp(|(-CᵀK⁻¹C)∘Θ_m| - nᵀC ξ_m)`.
pub fn ch_multilayer(cfg: &MultilayerConfig) -> Result<ChernClass, ChernError> {
    cfg.check_filled()?;
    let data = multilayer_data(cfg)?;
    let nq = cfg.quasihole_types();
    let mut lin = Vec::new();
    if cfg.g > 0 {
        for s in 0..nq {
            for t in 0..nq {
                lin.push((Symbol::BigTheta(s, t), data.coupling[s][t].clone()));
            }
        }
    }
    for (s, v) in cfg.n_t_c().into_iter().enumerate() {
        lin.push((Symbol::XiType(s), int(-v)));
    }
    let exponent = SymPoly::linear(&lin);
    let prefactor = num_traits::pow(data.det_k.clone(), cfg.g as usize);
    let table = tables::multilayer_quasihole_table(cfg.g, &cfg.xi_orders())?;
    let expansion = exponent.expand(&table, cfg.g)?.exp()?.scale(&prefactor);
    let mut warnings = Vec::new();
    if !data.k_minus_identity_psd {
        warnings.push("K - I is not positive semidefinite".to_string());
    }
    Ok(ChernClass {
        expansion,
        collected: Some(Collected::Exponential { prefactor, exponent }),
        g: cfg.g,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::class::projective_flatness_check;

    fn cfg(b: i64, c: i64, g: u32, n: i64, m: i64, p: i64) -> SingleLayerConfig {
        SingleLayerConfig::with_p(b, c, g, n, m, p).unwrap()
    }

    #[test]
    fn negative_p_is_zero() {
        for (b, c, g) in [(1, 1, 0), (2, 1, 1), (3, 2, 2)] {
            assert!(ch_general(&cfg(b, c, g, 2 * g as i64 + 1, 2, -1)).unwrap().is_zero());
        }
    }

    #[test]
    fn genus_zero_is_binomial_times_exp() {
        let c = cfg(2, 3, 0, 4, 2, 2);
        let got = ch_general(&c).unwrap();
        let table = tables::quasihole_table(0, 3).unwrap();
        let xi = crate::ring::RingElement::generator(&table, tables::XI_M).unwrap();
        let want = xi.scale(&int(-12)).exp().unwrap().scale(&int(15));
        assert_eq!(got.expansion, want);
    }

    #[test]
    fn filled_examples() {
        let sphere = ch_filled(&cfg(1, 1, 0, 3, 2, 0)).unwrap();
        assert_eq!(sphere.to_string(), "1 - 3·ξ_m + 9/2·ξ_m^2");
        let torus = ch_filled(&cfg(1, 1, 1, 2, 1, 0)).unwrap();
        assert_eq!(torus.to_string(), "1 - θ_m - 2·ξ_m + 2·θ_m·ξ_m");
        let b2 = ch_filled(&cfg(2, 1, 1, 3, 1, 0)).unwrap();
        assert_eq!(b2.to_string(), "2 - θ_m - 6·ξ_m + 3·θ_m·ξ_m");
        assert_eq!(b2.rank(), int(2));
    }

    #[test]
    fn filled_rejects_nonzero_p() {
        assert!(matches!(ch_filled(&cfg(1, 1, 1, 2, 2, 1)), Err(ChernError::Precondition(_))));
    }

    #[test]
    fn general_matches_filled_at_p0() {
        for b in 1..=3 {
            for c in 0..=2 {
                for g in 0..=3 {
                    let x = cfg(b, c, g, 2 * i64::from(g), 3, 0);
                    assert_eq!(ch_general(&x).unwrap(), ch_filled(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn c_zero_decouples() {
        let x = ch_filled(&cfg(3, 0, 2, 4, 4, 0)).unwrap();
        assert_eq!(x.to_string(), "9");
    }

    #[test]
    fn flatness() {
        let filled = ch_filled(&cfg(2, 1, 2, 4, 4, 0)).unwrap();
        assert!(projective_flatness_check(&filled).unwrap());
        let general = ch_general(&cfg(2, 1, 2, 6, 4, 1)).unwrap();
        assert!(!projective_flatness_check(&general).unwrap());
        // θ_m² vanishes at g = 1, so the p > 0 class is still of flat shape
        let g1 = ch_general(&cfg(2, 1, 1, 6, 4, 1)).unwrap();
        assert!(projective_flatness_check(&g1).unwrap());
        let zero = ch_general(&cfg(1, 1, 1, 2, 2, -1)).unwrap();
        assert!(matches!(projective_flatness_check(&zero), Err(ChernError::BadRank(_))));
    }

    #[test]
    fn constant_class_is_flat() {
        let x = ch_filled(&cfg(2, 0, 1, 2, 2, 0)).unwrap();
        assert!(projective_flatness_check(&x).unwrap());
    }

    #[test]
    fn collected_round_trips() {
        for x in [cfg(2, 3, 3, 6, 6, 2), cfg(4, 1, 2, 4, 4, 0)] {
            let class = ch_general(&x).unwrap();
            assert_eq!(class.expand_collected().unwrap().unwrap(), class.expansion);
        }
    }

    #[test]
    fn multilayer_scalar_reduces_to_filled() {
        for (b, c, g) in [(1, 1, 1), (3, 2, 2), (2, 1, 3)] {
            let n = 2 * i64::from(g);
            let m = 3;
            let ml = MultilayerConfig::filled(vec![vec![b]], vec![vec![c]], vec![n], vec![m], g).unwrap();
            let single = ch_filled(&cfg(b, c, g, n, m, 0)).unwrap();
            let multi = ch_multilayer(&ml).unwrap();
            let table = single.expansion.table().clone();
            let pairs = relabel_single(g);
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let moved = multi.expansion.relabel(&table, &refs).unwrap();
            assert_eq!(moved, single.expansion);
            assert_eq!(multi.rank(), pow_int(b, g));
        }
    }

    fn relabel_single(g: u32) -> Vec<(String, String)> {
        let mut out = vec![("ξ_{m_1}".to_string(), "ξ_m".to_string())];
        for r in 1..=g {
            out.push((tables::alpha("{m_1}", r), tables::alpha("m", r)));
            out.push((tables::beta("{m_1}", r), tables::beta("m", r)));
        }
        out
    }

    #[test]
    fn multilayer_identity_k() {
        let ml = MultilayerConfig::filled(
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![1, 1]],
            vec![2, 1],
            vec![2, 2],
            1,
        )
        .unwrap();
        let x = ch_multilayer(&ml).unwrap();
        assert_eq!(x.rank(), int(1));
    }

    #[test]
    fn multilayer_singular_k() {
        let ml = MultilayerConfig::filled(vec![vec![1, 1], vec![1, 1]], vec![vec![1], vec![1]], vec![1, 1], vec![1], 1)
            .unwrap();
        assert_eq!(ch_multilayer(&ml).unwrap_err(), ChernError::SingularK);
    }

    #[test]
    fn picard_examples() {
        let g0 = ch_with_picard(&cfg(2, 1, 0, 3, 2, 0)).unwrap();
        assert_eq!(g0.expansion.to_string(), "1 - 3·ξ_m + 9/2·ξ_m^2");
        let x = cfg(2, 1, 1, 2, 2, 0);
        let pic = ch_with_picard(&x).unwrap();
        let t = pic.expansion.table().clone();
        let vol_d = crate::ring::Monomial::parse(&t, &["α_d^1", "β_d^1"]).unwrap();
        assert_eq!(pic.expansion.coefficient(&vol_d), int(-1));
        let restricted = pic.expansion.restrict(&tables::quasihole_table(1, x.xi_order()).unwrap()).unwrap();
        assert_eq!(restricted, ch_filled(&x).unwrap().expansion);
    }
}
