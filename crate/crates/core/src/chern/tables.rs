//! Generator tables and the standard classes built from them.

use std::sync::Arc;

use crate::error::ChernError;
use crate::ring::{rational::int, GeneratorTable, RingElement, MAX_ODD};

pub const XI_M: &str = "ξ_m";

pub fn alpha(side: &str, r: u32) -> String {
    format!("α_{side}^{r}")
}

pub fn beta(side: &str, r: u32) -> String {
    format!("β_{side}^{r}")
}

/// Per-type quasihole side label used by the multilayer tables.
pub fn m_side(s: usize) -> String {
    format!("{{m_{}}}", s + 1)
}

/// Per-layer particle side label.
pub fn n_side(i: usize) -> String {
    format!("{{n_{}}}", i + 1)
}

pub fn xi_side(s: usize) -> String {
    format!("ξ_{{m_{}}}", s + 1)
}

pub(crate) fn check_odd_budget(count: usize) -> Result<(), ChernError> {
    if count > MAX_ODD {
        return Err(ChernError::ResourceLimit(format!(
            "{count} odd generators requested, at most {MAX_ODD} supported"
        )));
    }
    Ok(())
}

/// `{α_m^r, β_m^r}` in pair order plus `ξ_m`.
pub fn quasihole_table(g: u32, xi_order: u32) -> Result<Arc<GeneratorTable>, ChernError> {
    check_odd_budget(2 * g as usize)?;
    let mut b = GeneratorTable::builder();
    for r in 1..=g {
        b = b.odd(alpha("m", r)).odd(beta("m", r));
    }
    Ok(b.even(XI_M, xi_order).build()?)
}

/// Quasihole table extended by the Picard generators `{α_d^r, β_d^r}`.
pub fn picard_table(g: u32, xi_order: u32) -> Result<Arc<GeneratorTable>, ChernError> {
    check_odd_budget(4 * g as usize)?;
    let mut b = GeneratorTable::builder();
    for r in 1..=g {
        b = b.odd(alpha("m", r)).odd(beta("m", r));
    }
    for r in 1..=g {
        b = b.odd(alpha("d", r)).odd(beta("d", r));
    }
    Ok(b.even(XI_M, xi_order).build()?)
}

/// `{α^r_{m_s}, β^r_{m_s}}` ordered by `r`, then by type; one `ξ_{m_s}` per
/// type.
pub fn multilayer_quasihole_table(
    g: u32,
    xi_orders: &[u32],
) -> Result<Arc<GeneratorTable>, ChernError> {
    check_odd_budget(2 * g as usize * xi_orders.len())?;
    let mut b = GeneratorTable::builder();
    for r in 1..=g {
        for s in 0..xi_orders.len() {
            b = b.odd(alpha(&m_side(s), r)).odd(beta(&m_side(s), r));
        }
    }
    for (s, &k) in xi_orders.iter().enumerate() {
        b = b.even(xi_side(s), k);
    }
    Ok(b.build()?)
}

/// `Σ_r coeff·x^r y^r` for names produced by `x(r)`, `y(r)`.
pub fn pair_sum(
    table: &Arc<GeneratorTable>,
    g: u32,
    x: impl Fn(u32) -> String,
    y: impl Fn(u32) -> String,
) -> Result<RingElement, ChernError> {
    let mut acc = RingElement::zero(table);
    for r in 1..=g {
        let (a, b) = (x(r), y(r));
        acc = acc.try_add(&RingElement::product(table, &[&a, &b], int(1))?)?;
    }
    Ok(acc)
}

/// `θ_side = Σ_r α_side^r β_side^r`.
pub fn theta_class(table: &Arc<GeneratorTable>, side: &str, g: u32) -> Result<RingElement, ChernError> {
    pair_sum(table, g, |r| alpha(side, r), |r| beta(side, r))
}

/// `η_{s,t} = Σ_r (α_s^r β_t^r + α_t^r β_s^r)`.
pub fn eta_class(
    table: &Arc<GeneratorTable>,
    s: &str,
    t: &str,
    g: u32,
) -> Result<RingElement, ChernError> {
    let a = pair_sum(table, g, |r| alpha(s, r), |r| beta(t, r))?;
    let b = pair_sum(table, g, |r| alpha(t, r), |r| beta(s, r))?;
    Ok(a.try_add(&b)?)
}
