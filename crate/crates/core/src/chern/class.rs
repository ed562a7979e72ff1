use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::symbolic::{write_terms, SymMonomial, SymPoly, Symbol};
use super::tables::{alpha, beta, XI_M};
use crate::error::ChernError;
use crate::ring::rational::{factorial, is_positive_integer, to_fraction_string};
use crate::ring::{Rational, RingElement};

/// Presentation of a class in the named θ/ξ/η/Θ symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collected {
    Polynomial(SymPoly),
    /// `prefactor · exp(exponent)` with a linear exponent.
    Exponential { prefactor: Rational, exponent: SymPoly },
}

impl fmt::Display for Collected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collected::Polynomial(p) => write!(f, "{p}"),
            Collected::Exponential { prefactor, exponent } => {
                write!(f, "{}·exp(", crate::ring::rational::display(prefactor))?;
                write_terms(f, exponent.terms())?;
                write!(f, ")")
            }
        }
    }
}

/// A Chern character: the exact expansion over quasihole-side generators and,
/// when available, a collected presentation that expands to it.
#[derive(Debug, Clone)]
pub struct ChernClass {
    pub expansion: RingElement,
    pub collected: Option<Collected>,
    /// Genus of the symplectic generators, needed to expand symbols.
    pub g: u32,
    pub warnings: Vec<String>,
}

impl PartialEq for ChernClass {
    fn eq(&self, other: &Self) -> bool {
        self.expansion == other.expansion
    }
}

impl ChernClass {
    /// Wraps an expansion, collecting it when it lies in the θ_m/ξ_m
    /// subring.
    pub fn from_expansion(expansion: RingElement, g: u32) -> Self {
        let collected = collect(&expansion).ok().map(Collected::Polynomial);
        ChernClass {
            expansion,
            collected,
            g,
            warnings: Vec::new(),
        }
    }

    pub fn rank(&self) -> Rational {
        self.expansion.constant_term()
    }

    pub fn is_zero(&self) -> bool {
        self.expansion.is_zero()
    }

    /// `sha256` over the generator table and the canonical term list.
    pub fn expansion_hash(&self) -> String {
        let table = self.expansion.table();
        let mut h = Sha256::new();
        h.update(table.odd_names().join(",").as_bytes());
        h.update(b"\n");
        for e in table.even_generators() {
            h.update(format!("{}:{};", e.name, e.nilpotency).as_bytes());
        }
        h.update(b"\n");
        h.update(self.expansion.canonical_text().as_bytes());
        hex::encode(h.finalize())
    }

    /// Expands the collected presentation; must equal `expansion`.
    pub fn expand_collected(&self) -> Result<Option<RingElement>, ChernError> {
        let table = self.expansion.table();
        Ok(match &self.collected {
            None => None,
            Some(Collected::Polynomial(p)) => Some(p.expand(table, self.g)?),
            Some(Collected::Exponential { prefactor, exponent }) => {
                let e = exponent.expand(table, self.g)?.exp()?;
                Some(e.scale(prefactor))
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let rank = self.rank();
        let rank_value = if rank.is_integer() {
            rank.numer()
                .to_string()
                .parse::<i64>()
                .map(Value::from)
                .unwrap_or_else(|_| Value::from(to_fraction_string(&rank)))
        } else {
            Value::from(to_fraction_string(&rank))
        };
        let term = |mono: String, c: &Rational| json!({"monomial": mono, "coefficient": to_fraction_string(c)});
        let mut obj = serde_json::Map::new();
        obj.insert("rank".into(), rank_value);
        match &self.collected {
            Some(Collected::Polynomial(p)) => {
                obj.insert("form".into(), "polynomial".into());
                obj.insert(
                    "terms".into(),
                    p.terms().map(|(m, c)| term(m.render(), c)).collect(),
                );
            }
            Some(Collected::Exponential { prefactor, exponent }) => {
                obj.insert("form".into(), "exponential".into());
                obj.insert("prefactor".into(), to_fraction_string(prefactor).into());
                obj.insert(
                    "terms".into(),
                    exponent.terms().map(|(m, c)| term(m.render(), c)).collect(),
                );
            }
            None => {
                obj.insert("form".into(), "expansion".into());
                let table = self.expansion.table();
                obj.insert(
                    "terms".into(),
                    self.expansion
                        .terms()
                        .map(|(m, c)| term(m.render(table), c))
                        .collect(),
                );
            }
        }
        obj.insert("expansion_terms".into(), self.expansion.len().into());
        obj.insert("expansion_hash".into(), self.expansion_hash().into());
        if !self.warnings.is_empty() {
            obj.insert("warnings".into(), self.warnings.clone().into());
        }
        Value::Object(obj)
    }
}

impl fmt::Display for ChernClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.collected {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "{}", self.expansion),
        }
    }
}

/// Rewrites an element of the single-layer quasihole ring as a polynomial in
/// `θ_m` and `ξ_m`, using `θ_m^j = j! Σ_{|F|=j} (α_m β_m)^F`.
pub fn collect(x: &RingElement) -> Result<SymPoly, ChernError> {
    let table = x.table();
    let odd = table.odd_names();
    if odd.len() % 2 != 0 {
        return Err(ChernError::NotCollectible("odd generator count is not even".into()));
    }
    let g = (odd.len() / 2) as u32;
    for r in 1..=g {
        let i = 2 * (r as usize - 1);
        if odd[i] != alpha("m", r) || odd[i + 1] != beta("m", r) {
            return Err(ChernError::NotCollectible(format!(
                "table is not a θ_m/ξ_m table (found `{}`, `{}`)",
                odd[i],
                odd[i + 1]
            )));
        }
    }
    let xi = match table.even_generators() {
        [] => None,
        [e] if e.name == XI_M => Some(()),
        _ => {
            return Err(ChernError::NotCollectible(
                "table has even generators other than ξ_m".into(),
            ))
        }
    };
    // (j, ξ exponent) -> (common coefficient, number of pair subsets seen)
    let mut groups: BTreeMap<(u32, u32), (Rational, u64)> = BTreeMap::new();
    for (m, c) in x.terms() {
        let mask = m.odd_mask();
        let alphas = mask & 0x5555_5555_5555_5555_5555_5555_5555_5555u128;
        let betas = (mask >> 1) & 0x5555_5555_5555_5555_5555_5555_5555_5555u128;
        if alphas != betas {
            return Err(ChernError::NotCollectible(m.render(table)));
        }
        let j = alphas.count_ones();
        let k = if xi.is_some() { m.even_exponents()[0] } else { 0 };
        match groups.get_mut(&(j, k)) {
            None => {
                groups.insert((j, k), (c.clone(), 1));
            }
            Some((c0, seen)) => {
                if c0 != c {
                    return Err(ChernError::NotCollectible(m.render(table)));
                }
                *seen += 1;
            }
        }
    }
    let mut out = SymPoly::zero();
    for ((j, k), (c, seen)) in groups {
        let needed = crate::ring::rational::binom(i64::from(g), i64::from(j));
        if num_bigint::BigInt::from(seen) != needed {
            return Err(ChernError::NotCollectible(format!(
                "only {seen} of {needed} pair products of size {j} present (ξ_m^{k})"
            )));
        }
        let mono = SymMonomial::of(Symbol::ThetaM, j).times(&SymMonomial::of(Symbol::XiM, k));
        out.add_term(mono, c / Rational::from_integer(factorial(j)));
    }
    Ok(out)
}

/// `class = r·exp(ch₁/r)` with `r` the degree-0 part and `ch₁` the
/// degree-2 part.
pub fn projective_flatness_check(class: &ChernClass) -> Result<bool, ChernError> {
    let x = &class.expansion;
    let r = x.constant_term();
    if !is_positive_integer(&r) {
        return Err(ChernError::BadRank(crate::ring::rational::display(&r)));
    }
    let ch1 = x.homogeneous(2);
    let flat = ch1.scale(&(Rational::one() / &r)).exp()?.scale(&r);
    Ok(&flat == x)
}
