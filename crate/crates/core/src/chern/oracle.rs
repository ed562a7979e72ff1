//! Pushforward oracles: the fibre integral over the particle factor is done
//! by Berezin integration over the particle-side symplectic generators.

use std::sync::Arc;

use num_traits::Zero;

use super::class::ChernClass;
use super::config::{MultilayerConfig, SingleLayerConfig};
use super::tables::{self, alpha, beta, XI_M};
use crate::error::ChernError;
use crate::ring::rational::{binom, factorial, int};
use crate::ring::{GeneratorTable, Rational, RingElement};

fn odd_table(names: &[String]) -> Result<Arc<GeneratorTable>, ChernError> {
    tables::check_odd_budget(names.len())?;
    let mut b = GeneratorTable::builder();
    for n in names {
        b = b.odd(n.clone());
    }
    Ok(b.build()?)
}

fn term(t: &Arc<GeneratorTable>, x: &str, y: &str, coeff: i64) -> Result<RingElement, ChernError> {
    Ok(RingElement::product(t, &[x, y], int(coeff))?)
}

fn exp_xi(table: &Arc<GeneratorTable>, xi: &str, coeff: i64) -> Result<RingElement, ChernError> {
    Ok(RingElement::generator(table, xi)?.scale(&int(coeff)).exp()?)
}

/// `π₂*(f(θ_n) e^{bθ_n + cη_{n,m}}) e^{-cnξ_m}` with
/// `f(x) = Σ_a C(n-g+p, p-a) x^a / a!`.
pub fn grr_oracle(cfg: &SingleLayerConfig) -> Result<ChernClass, ChernError> {
    cfg.validate()?;
    let g = cfg.g;
    let (b, c, n, p) = (cfg.b, cfg.c, cfg.n, cfg.p());
    let names: Vec<String> = (1..=g)
        .flat_map(|r| [alpha("n", r), beta("n", r), alpha("m", r), beta("m", r)])
        .collect();
    let t = odd_table(&names)?;

    let mut exponent = RingElement::zero(&t);
    for r in 1..=g {
        let (an, bn, am, bm) = (alpha("n", r), beta("n", r), alpha("m", r), beta("m", r));
        exponent = exponent.try_add(&term(&t, &an, &bn, b)?)?;
        exponent = exponent.try_add(&term(&t, &an, &bm, c)?)?;
        exponent = exponent.try_add(&term(&t, &am, &bn, c)?)?;
    }
    let theta_n = tables::theta_class(&t, "n", g)?;
    let mut f = RingElement::zero(&t);
    let mut power = RingElement::one(&t);
    for a in 0..=g {
        let w = Rational::from_integer(binom(n - i64::from(g) + p, p - i64::from(a)))
            / Rational::from_integer(factorial(a));
        if !w.is_zero() {
            f = f.try_add(&power.scale(&w))?;
        }
        power = power.try_mul(&theta_n)?;
    }
    let integrand = f.try_mul(&exponent.exp()?)?;
    let order: Vec<String> = (1..=g).flat_map(|r| [alpha("n", r), beta("n", r)]).collect();
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let pushed = integrand.berezin(&refs)?;

    let q = tables::quasihole_table(g, cfg.xi_order())?;
    let out = pushed.restrict(&q)?.try_mul(&exp_xi(&q, XI_M, -c * n)?)?;
    let mut class = ChernClass::from_expansion(out, g);
    class.warnings = cfg.validity_warnings();
    Ok(class)
}

/// Sign of the particle-quasihole coupling in the Picard oracle exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// `bθ_n - c η_{n,m} - η_{n,d}`, the convention of the multilayer
    /// exponent; reproduces the closed form with `-(c/b)η_{m,d}`.
    Multilayer,
    /// `bθ_n + c η_{n,m} - η_{n,d}`; differs by `α_d, β_d ↦ -α_d, -β_d`.
    Proposition,
}

/// Pushforward of `e^{c₁(U)}` over `S^nC × S^mC × Pic^d`, returned over the
/// quasihole and Picard generators. Requires `p = 0`.
pub fn picard_oracle(cfg: &SingleLayerConfig, coupling: Coupling) -> Result<ChernClass, ChernError> {
    cfg.validate()?;
    if cfg.p() != 0 {
        return Err(ChernError::Precondition(format!(
            "Picard pushforward needs p = 0, got p = {}",
            cfg.p()
        )));
    }
    let g = cfg.g;
    let (b, c, n) = (cfg.b, cfg.c, cfg.n);
    let cc = match coupling {
        Coupling::Multilayer => -c,
        Coupling::Proposition => c,
    };
    let names: Vec<String> = (1..=g)
        .flat_map(|r| {
            [
                alpha("n", r),
                beta("n", r),
                alpha("m", r),
                beta("m", r),
                alpha("d", r),
                beta("d", r),
            ]
        })
        .collect();
    let t = odd_table(&names)?;
    let mut exponent = RingElement::zero(&t);
    for r in 1..=g {
        let (an, bn) = (alpha("n", r), beta("n", r));
        let (am, bm) = (alpha("m", r), beta("m", r));
        let (ad, bd) = (alpha("d", r), beta("d", r));
        for (x, y, k) in [
            (&an, &bn, b),
            (&an, &bm, cc),
            (&am, &bn, cc),
            (&an, &bd, -1),
            (&ad, &bn, -1),
        ] {
            exponent = exponent.try_add(&term(&t, x, y, k)?)?;
        }
    }
    let order: Vec<String> = (1..=g).flat_map(|r| [alpha("n", r), beta("n", r)]).collect();
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let pushed = exponent.exp()?.berezin(&refs)?;
    let q = tables::picard_table(g, cfg.xi_order())?;
    let out = pushed.restrict(&q)?.try_mul(&exp_xi(&q, XI_M, -c * n)?)?;
    Ok(ChernClass {
        expansion: out,
        collected: None,
        g,
        warnings: cfg.validity_warnings(),
    })
}

/// Size limits for the multilayer oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_layers: usize,
    pub max_genus: u32,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_layers: 3,
            max_genus: 3,
        }
    }
}

/// Berezin integral of `exp(Σ_l ψ̄ᵀKψ - φ̄ᵀCᵀψ - ψ̄ᵀCφ) e^{-nᵀCξ}` over every
/// particle generator. The exponent splits over `l` into commuting even
/// pieces on disjoint generators, so each `l` is integrated on its own and
/// the results multiplied.
pub fn multilayer_grr_oracle(
    cfg: &MultilayerConfig,
    limits: OracleLimits,
) -> Result<ChernClass, ChernError> {
    cfg.check_filled()?;
    let (nl, nq, g) = (cfg.layers(), cfg.quasihole_types(), cfg.g);
    if nl > limits.max_layers || g > limits.max_genus {
        return Err(ChernError::ResourceLimit(format!(
            "multilayer oracle limited to N_l ≤ {} and g ≤ {}, got N_l = {nl}, g = {g}",
            limits.max_layers, limits.max_genus
        )));
    }
    let mut names = Vec::new();
    for l in 1..=g {
        for i in 0..nl {
            names.push(alpha(&tables::n_side(i), l));
            names.push(beta(&tables::n_side(i), l));
        }
        for s in 0..nq {
            names.push(alpha(&tables::m_side(s), l));
            names.push(beta(&tables::m_side(s), l));
        }
    }
    let t = odd_table(&names)?;
    let mut total = RingElement::one(&t);
    for l in 1..=g {
        let psibar = |i: usize| alpha(&tables::n_side(i), l);
        let psi = |i: usize| beta(&tables::n_side(i), l);
        let phibar = |s: usize| alpha(&tables::m_side(s), l);
        let phi = |s: usize| beta(&tables::m_side(s), l);
        let mut e = RingElement::zero(&t);
        for i in 0..nl {
            for j in 0..nl {
                e = e.try_add(&term(&t, &psibar(i), &psi(j), cfg.k[i][j])?)?;
            }
            for s in 0..nq {
                e = e.try_add(&term(&t, &phibar(s), &psi(i), -cfg.c[i][s])?)?;
                e = e.try_add(&term(&t, &psibar(i), &phi(s), -cfg.c[i][s])?)?;
            }
        }
        let order: Vec<String> = (0..nl).flat_map(|i| [psibar(i), psi(i)]).collect();
        let refs: Vec<&str> = order.iter().map(String::as_str).collect();
        let piece = e.exp()?.berezin(&refs)?;
        total = total.try_mul(&piece)?;
    }
    let q = tables::multilayer_quasihole_table(g, &cfg.xi_orders())?;
    let mut out = total.restrict(&q)?;
    for (s, v) in cfg.n_t_c().into_iter().enumerate() {
        out = out.try_mul(&exp_xi(&q, &tables::xi_side(s), -v)?)?;
    }
    Ok(ChernClass {
        expansion: out,
        collected: None,
        g,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::formulas::{ch_filled, ch_general, ch_multilayer, ch_with_picard};

    #[test]
    fn genus_one_factor() {
        // per-index coefficient b - c²α_mβ_m at p = 0
        let cfg = SingleLayerConfig::with_p(3, 2, 1, 2, 2, 0).unwrap();
        let x = grr_oracle(&cfg).unwrap();
        let q = x.expansion.table().clone();
        let vol = crate::ring::Monomial::parse(&q, &["α_m^1", "β_m^1"]).unwrap();
        assert_eq!(x.expansion.constant_term(), int(3));
        assert_eq!(x.expansion.coefficient(&vol), int(-4));
    }

    #[test]
    fn oracle_matches_general_small() {
        for (b, c, g, m, p) in [(1, 1, 1, 2, 0), (2, 1, 2, 3, 1), (3, 2, 2, 1, 3), (2, 0, 1, 2, 2)] {
            let cfg = SingleLayerConfig::with_p(b, c, g, 2 * i64::from(g), m, p).unwrap();
            assert_eq!(grr_oracle(&cfg).unwrap(), ch_general(&cfg).unwrap(), "{cfg:?}");
        }
    }

    #[test]
    fn oracle_at_p0_is_filled() {
        let cfg = SingleLayerConfig::with_p(2, 3, 2, 4, 4, 0).unwrap();
        assert_eq!(grr_oracle(&cfg).unwrap(), ch_filled(&cfg).unwrap());
    }

    #[test]
    fn picard_matches_closed_form() {
        let cfg = SingleLayerConfig::with_p(2, 1, 2, 4, 4, 0).unwrap();
        let oracle = picard_oracle(&cfg, Coupling::Multilayer).unwrap();
        assert_eq!(oracle, ch_with_picard(&cfg).unwrap());
    }

    #[test]
    fn picard_sign_conventions_differ_by_d_inversion() {
        let cfg = SingleLayerConfig::with_p(3, 2, 2, 4, 4, 0).unwrap();
        let lit = picard_oracle(&cfg, Coupling::Proposition).unwrap();
        let closed = ch_with_picard(&cfg).unwrap();
        assert_ne!(lit, closed);
        let names: Vec<String> = (1..=2).flat_map(|r| [alpha("d", r), beta("d", r)]).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert_eq!(lit.expansion.negate_odd(&refs).unwrap(), closed.expansion);
    }

    #[test]
    fn multilayer_two_identity() {
        // K = 2I, C = (1, 1)ᵀ, g = 1: 4(1 - (1/2)·φ̄φ - …)
        let cfg = MultilayerConfig::filled(vec![vec![2, 0], vec![0, 2]], vec![vec![1], vec![1]], vec![1, 1], vec![2], 1)
            .unwrap();
        let o = multilayer_grr_oracle(&cfg, OracleLimits::default()).unwrap();
        let q = o.expansion.table().clone();
        let vol = crate::ring::Monomial::parse(&q, &["α_{m_1}^1", "β_{m_1}^1"]).unwrap();
        assert_eq!(o.rank(), int(4));
        assert_eq!(o.expansion.coefficient(&vol), int(-4));
        assert_eq!(o, ch_multilayer(&cfg).unwrap());
    }

    #[test]
    fn multilayer_halperin() {
        let cfg = MultilayerConfig::filled(vec![vec![3, 1], vec![1, 3]], vec![vec![1], vec![1]], vec![2, 2], vec![2], 2)
            .unwrap();
        assert_eq!(
            multilayer_grr_oracle(&cfg, OracleLimits::default()).unwrap(),
            ch_multilayer(&cfg).unwrap()
        );
    }

    #[test]
    fn multilayer_limits() {
        let cfg = MultilayerConfig::filled(vec![vec![1]], vec![vec![1]], vec![1], vec![1], 4).unwrap();
        assert!(matches!(
            multilayer_grr_oracle(&cfg, OracleLimits::default()),
            Err(ChernError::ResourceLimit(_))
        ));
    }
}
