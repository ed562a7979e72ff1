//! Polynomials in the named degree-two classes θ, ξ, η, Θ.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::tables::{self, XI_M};
use crate::error::ChernError;
use crate::ring::rational::{display, int};
use crate::ring::{GeneratorTable, Rational, RingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    ThetaM,
    XiM,
    ThetaD,
    EtaMD,
    /// `Θ_{s,t} = Σ_l α^l_{m_s} β^l_{m_t}` (0-based internally).
    BigTheta(usize, usize),
    /// `ξ_{m_s}`.
    XiType(usize),
}

impl Symbol {
    pub fn name(&self) -> String {
        match self {
            Symbol::ThetaM => "θ_m".into(),
            Symbol::XiM => "ξ_m".into(),
            Symbol::ThetaD => "θ_d".into(),
            Symbol::EtaMD => "η_{m,d}".into(),
            Symbol::BigTheta(s, t) => format!("Θ_{{{},{}}}", s + 1, t + 1),
            Symbol::XiType(s) => tables::xi_side(*s),
        }
    }

    /// The class this symbol stands for, over `table` with genus `g`.
    pub fn expand(&self, table: &Arc<GeneratorTable>, g: u32) -> Result<RingElement, ChernError> {
        match self {
            Symbol::ThetaM => tables::theta_class(table, "m", g),
            Symbol::ThetaD => tables::theta_class(table, "d", g),
            Symbol::EtaMD => tables::eta_class(table, "m", "d", g),
            Symbol::XiM => Ok(RingElement::generator(table, XI_M)?),
            Symbol::XiType(s) => Ok(RingElement::generator(table, &tables::xi_side(*s))?),
            Symbol::BigTheta(s, t) => {
                let (ms, mt) = (tables::m_side(*s), tables::m_side(*t));
                tables::pair_sum(table, g, |r| tables::alpha(&ms, r), |r| tables::beta(&mt, r))
            }
        }
    }
}

/// A monomial `Π s_i^{e_i}`, ordered by total degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMonomial(Vec<(Symbol, u32)>);

impl SymMonomial {
    pub fn one() -> Self {
        SymMonomial(Vec::new())
    }

    pub fn of(sym: Symbol, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            SymMonomial(vec![(sym, e)])
        }
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0.iter().find(|(s, _)| *s == sym).map_or(0, |(_, e)| *e)
    }

    pub(crate) fn times(&self, other: &Self) -> Self {
        let mut map: BTreeMap<Symbol, u32> = self.0.iter().copied().collect();
        for (s, e) in &other.0 {
            *map.entry(*s).or_insert(0) += e;
        }
        SymMonomial(map.into_iter().collect())
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(s, e)| if *e == 1 { s.name() } else { format!("{}^{e}", s.name()) })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl PartialOrd for SymMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SymMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial over ℚ in commuting degree-two symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<SymMonomial, Rational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(SymMonomial::one(), c);
        p
    }

    pub fn linear(terms: &[(Symbol, Rational)]) -> Self {
        let mut p = Self::zero();
        for (s, c) in terms {
            p.add_term(SymMonomial::of(*s, 1), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, mono: SymMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&SymMonomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, mono: &SymMonomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * r);
        }
        out
    }

    /// Product, dropping monomials that exceed `cap(sym)` in some symbol.
    pub fn mul_capped(&self, other: &Self, cap: &dyn Fn(Symbol) -> u32) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.times(mb);
                if m.0.iter().any(|(s, e)| *e > cap(*s)) {
                    continue;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// `exp` of a polynomial with zero constant term and only linear terms,
    /// truncated per symbol by `cap`.
    pub fn exp_linear(&self, cap: &dyn Fn(Symbol) -> u32) -> Result<Self, ChernError> {
        let mut acc = Self::constant(Rational::one());
        for (m, c) in &self.terms {
            let [(sym, 1)] = m.0.as_slice() else {
                return Err(ChernError::InvalidConfig(format!(
                    "exp_linear needs a linear exponent, found {}",
                    m.render()
                )));
            };
            let mut factor = Self::constant(Rational::one());
            let mut coeff = Rational::one();
            for k in 1..=cap(*sym) {
                coeff = coeff * c / int(i64::from(k));
                factor.add_term(SymMonomial::of(*sym, k), coeff.clone());
            }
            acc = acc.mul_capped(&factor, cap);
        }
        Ok(acc)
    }

    /// Substitutes each symbol by its class over `table`.
    pub fn expand(&self, table: &Arc<GeneratorTable>, g: u32) -> Result<RingElement, ChernError> {
        let mut cache: BTreeMap<Symbol, Vec<RingElement>> = BTreeMap::new();
        let mut out = RingElement::zero(table);
        for (m, c) in &self.terms {
            let mut term = RingElement::scalar(table, c.clone());
            for (s, e) in &m.0 {
                if !cache.contains_key(s) {
                    cache.insert(*s, vec![RingElement::one(table), s.expand(table, g)?]);
                }
                let powers = cache.get_mut(s).expect("inserted above");
                while powers.len() <= *e as usize {
                    let next = powers.last().expect("non-empty").try_mul(&powers[1])?;
                    powers.push(next);
                }
                term = term.try_mul(&powers[*e as usize])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter())
    }
}

pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a SymMonomial, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let abs = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        first = false;
        if m.0.is_empty() {
            write!(f, "{}", display(&abs))?;
        } else if abs.is_one() {
            write!(f, "{}", m.render())?;
        } else {
            write!(f, "{}·{}", display(&abs), m.render())?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::ratio;

    #[test]
    fn exp_linear_truncates() {
        let p = SymPoly::linear(&[(Symbol::XiM, int(-2))]);
        let e = p.exp_linear(&|_| 2).unwrap();
        assert_eq!(e.to_string(), "1 - 2·ξ_m + 2·ξ_m^2");
    }

    #[test]
    fn display_orders_by_degree() {
        let mut p = SymPoly::zero();
        p.add_term(SymMonomial::of(Symbol::ThetaM, 1).times(&SymMonomial::of(Symbol::XiM, 1)), int(3));
        p.add_term(SymMonomial::of(Symbol::XiM, 1), int(-6));
        p.add_term(SymMonomial::one(), int(2));
        p.add_term(SymMonomial::of(Symbol::ThetaM, 1), ratio(-1, 2));
        assert_eq!(p.to_string(), "2 - 1/2·θ_m - 6·ξ_m + 3·θ_m·ξ_m");
    }

    #[test]
    fn expand_theta_square() {
        let t = tables::quasihole_table(2, 3).unwrap();
        let p = SymPoly::linear(&[(Symbol::ThetaM, int(1))]).mul_capped(
            &SymPoly::linear(&[(Symbol::ThetaM, int(1))]),
            &|_| 5,
        );
        let e = p.expand(&t, 2).unwrap();
        let want = RingElement::product(&t, &["α_m^1", "β_m^1", "α_m^2", "β_m^2"], int(2)).unwrap();
        assert_eq!(e, want);
    }
}
