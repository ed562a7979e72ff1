use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::{smallvec, SmallVec};

use super::rational::{display, Rational};
use super::table::{Generator, GeneratorTable};
use crate::error::RingError;

type Exponents = SmallVec<[u32; 4]>;

/// A basis monomial: a set of odd generators (bit `i` is the `i`-th odd
/// generator of the table, read in increasing order) times a product of
/// even generators with exponents below their nilpotency orders.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    odd: u128,
    even: Exponents,
}

impl Monomial {
    pub fn one(table: &GeneratorTable) -> Self {
        Monomial {
            odd: 0,
            even: smallvec![0; table.n_even()],
        }
    }

    /// `odd` must be strictly increasing, `even` has one exponent per even
    /// generator of the table.
    pub fn new(table: &GeneratorTable, odd: &[usize], even: &[u32]) -> Result<Self, RingError> {
        let mut mask = 0u128;
        let mut last: Option<usize> = None;
        for &i in odd {
            if i >= table.n_odd() {
                return Err(RingError::InvalidMonomial(format!("odd index {i} out of range")));
            }
            if let Some(l) = last {
                if i <= l {
                    return Err(RingError::InvalidMonomial(format!(
                        "odd indices must be strictly increasing (saw {l} then {i})"
                    )));
                }
            }
            last = Some(i);
            mask |= 1u128 << i;
        }
        if even.len() != table.n_even() {
            return Err(RingError::InvalidMonomial(format!(
                "expected {} even exponents, got {}",
                table.n_even(),
                even.len()
            )));
        }
        for (k, &e) in even.iter().enumerate() {
            if e >= table.nilpotency(k) {
                return Err(RingError::InvalidMonomial(format!(
                    "exponent {e} of `{}` reaches its nilpotency order {}",
                    table.even_generators()[k].name,
                    table.nilpotency(k)
                )));
            }
        }
        Ok(Monomial {
            odd: mask,
            even: Exponents::from_slice(even),
        })
    }

    /// Parses a monomial from generator names, e.g. `["α_m^1", "β_m^1"]`
    /// with even names optionally suffixed by `^k`. Odd names must already be
    /// in table order.
    pub fn parse(table: &GeneratorTable, names: &[&str]) -> Result<Self, RingError> {
        let mut odd = Vec::new();
        let mut even = vec![0u32; table.n_even()];
        for raw in names {
            match table.lookup(raw) {
                Some(Generator::Odd(i)) => odd.push(i),
                Some(Generator::Even(i)) => even[i] += 1,
                None => {
                    let (base, exp) = raw
                        .rsplit_once('^')
                        .and_then(|(b, e)| e.parse::<u32>().ok().map(|e| (b, e)))
                        .ok_or_else(|| RingError::UnknownGenerator(raw.to_string()))?;
                    let k = table.even_index(base)?;
                    even[k] += exp;
                }
            }
        }
        Monomial::new(table, &odd, &even)
    }

    pub fn odd_mask(&self) -> u128 {
        self.odd
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..128).filter(|i| self.odd >> i & 1 == 1).collect()
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    /// Cohomological degree; even generators count twice.
    pub fn degree(&self) -> u32 {
        self.odd.count_ones() + 2 * self.even.iter().sum::<u32>()
    }

    pub fn contains_odd(&self, i: usize) -> bool {
        self.odd >> i & 1 == 1
    }

    pub fn render(&self, table: &GeneratorTable) -> String {
        let mut parts: Vec<String> = self
            .odd_indices()
            .into_iter()
            .map(|i| table.odd_names()[i].clone())
            .collect();
        for (k, &e) in self.even.iter().enumerate() {
            let name = &table.even_generators()[k].name;
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }
}

/// Sorts, combines equal monomials and drops zero sums.
fn merge_sorted(mut items: Vec<(Monomial, Rational)>) -> BTreeMap<Monomial, Rational> {
    items.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(items.len());
    for (m, c) in items {
        match merged.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => merged.push((m, c)),
        }
    }
    merged.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Parity of the number of transpositions needed to merge two disjoint
/// ordered odd sets `a` (left) and `b` (right) into increasing order.
fn merge_is_negative(a: u128, b: u128) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += a.checked_shr(j + 1).unwrap_or(0).count_ones();
    }
    swaps % 2 == 1
}

fn permutation_is_odd(seq: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// An element of the graded-commutative algebra over a [`GeneratorTable`],
/// stored canonically: no zero coefficients, one entry per basis monomial.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Monomial, Rational>,
}

fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl RingElement {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        RingElement {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(table: &Arc<GeneratorTable>, value: Rational) -> Self {
        let mut e = Self::zero(table);
        if !value.is_zero() {
            e.terms.insert(Monomial::one(table), value);
        }
        e
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::scalar(table, Rational::one())
    }

    pub fn generator(table: &Arc<GeneratorTable>, name: &str) -> Result<Self, RingError> {
        Self::product(table, &[name], Rational::one())
    }

    /// `coeff · g_1 · g_2 ⋯` in the order given, with graded signs applied.
    pub fn product(
        table: &Arc<GeneratorTable>,
        names: &[&str],
        coeff: Rational,
    ) -> Result<Self, RingError> {
        let mut acc = Self::scalar(table, coeff);
        for name in names {
            let g = match table.lookup(name) {
                Some(g) => g,
                None => return Err(RingError::UnknownGenerator(name.to_string())),
            };
            let mut mono = Monomial::one(table);
            match g {
                Generator::Odd(i) => mono.odd = 1u128 << i,
                Generator::Even(i) => {
                    if table.nilpotency(i) <= 1 {
                        return Ok(Self::zero(table));
                    }
                    mono.even[i] = 1;
                }
            }
            let mut single = Self::zero(table);
            single.terms.insert(mono, Rational::one());
            acc = acc.try_mul(&single)?;
        }
        Ok(acc)
    }

    /// Canonicalizing constructor: merges duplicate monomials and drops zeros.
    pub fn make(
        table: &Arc<GeneratorTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self, RingError> {
        let mut out = Self::zero(table);
        for (mono, c) in terms {
            let odd: Vec<usize> = mono.odd_indices();
            // re-validate against this table
            let mono = Monomial::new(table, &odd, &mono.even)?;
            out.add_term(mono, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(&self.table))
    }

    /// Part of cohomological degree `deg`.
    pub fn homogeneous(&self, deg: u32) -> Self {
        RingElement {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.table);
        }
        RingElement {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        if !same_table(&self.table, &other.table) {
            return Err(RingError::TableMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        RingElement {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Graded-commutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        if !same_table(&self.table, &other.table) {
            return Err(RingError::TableMismatch);
        }
        let table = &self.table;
        let mut products: Vec<(Monomial, Rational)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            'inner: for (mb, cb) in &other.terms {
                if ma.odd & mb.odd != 0 {
                    continue;
                }
                let mut even = Exponents::with_capacity(ma.even.len());
                for (k, (x, y)) in ma.even.iter().zip(&mb.even).enumerate() {
                    let e = x + y;
                    if e >= table.nilpotency(k) {
                        continue 'inner;
                    }
                    even.push(e);
                }
                let mut c = ca * cb;
                if merge_is_negative(ma.odd, mb.odd) {
                    c = -c;
                }
                let mono = Monomial {
                    odd: ma.odd | mb.odd,
                    even,
                };
                products.push((mono, c));
            }
        }
        Ok(RingElement {
            table: Arc::clone(table),
            terms: merge_sorted(products),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_nilpotent(&self) -> Result<(), RingError> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(RingError::NotNilpotent(display(&c0)));
        }
        Ok(())
    }

    /// `Σ_k a^k / k!`, summed until the power vanishes.
    pub fn exp_series(&self) -> Result<Self, RingError> {
        self.check_nilpotent()?;
        let mut sum = Self::one(&self.table);
        let mut power = Self::one(&self.table);
        let mut k = 0u32;
        loop {
            k += 1;
            power = (&power * self).scale(&Rational::new(1.into(), k.into()));
            if power.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &power;
        }
    }

    /// Exponential of a nilpotent element. Elements whose terms all have
    /// even degree are exponentiated term by term (those terms commute);
    /// anything else falls back to [`RingElement::exp_series`].
    pub fn exp(&self) -> Result<Self, RingError> {
        self.check_nilpotent()?;
        if self.terms.keys().any(|m| m.odd_count() % 2 == 1) {
            return self.exp_series();
        }
        let mut acc = Self::one(&self.table);
        for (m, c) in &self.terms {
            acc = if m.odd != 0 {
                // m² = 0, so the factor is 1 + c·m
                acc.plus_times_monomial(m, c)
            } else {
                &acc * &self.exp_of_term(m, c)
            };
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// `self · (1 + c·m)` for a single monomial `m`.
    fn plus_times_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        let table = &self.table;
        let mut out = self.clone();
        'terms: for (ma, ca) in &self.terms {
            if ma.odd & m.odd != 0 {
                continue;
            }
            let mut even = Exponents::with_capacity(ma.even.len());
            for (k, (x, y)) in ma.even.iter().zip(&m.even).enumerate() {
                let e = x + y;
                if e >= table.nilpotency(k) {
                    continue 'terms;
                }
                even.push(e);
            }
            let mut v = ca * c;
            if merge_is_negative(ma.odd, m.odd) {
                v = -v;
            }
            out.add_term(Monomial { odd: ma.odd | m.odd, even }, v);
        }
        out
    }

    fn exp_of_term(&self, m: &Monomial, c: &Rational) -> Self {
        let table = &self.table;
        let mut out = Self::one(table);
        if m.odd != 0 {
            // m·m shares an odd generator, so the series stops at first order
            out.add_term(m.clone(), c.clone());
            return out;
        }
        let mut coeff = Rational::one();
        let mut k = 1u32;
        loop {
            let even: Exponents = m.even.iter().map(|e| e * k).collect();
            if even
                .iter()
                .enumerate()
                .any(|(i, &e)| e >= table.nilpotency(i))
            {
                return out;
            }
            coeff = coeff * c / Rational::from_integer(k.into());
            out.add_term(Monomial { odd: 0, even }, coeff.clone());
            k += 1;
        }
    }

    /// Iterated Berezin integral; the leftmost generator is integrated first.
    /// One step removes `χ` from every monomial containing it with sign
    /// `(-1)^{δ-1}`, `δ` being the position of `χ` in the increasing
    /// ordering, and kills monomials without `χ`.
    pub fn berezin(&self, generators: &[&str]) -> Result<Self, RingError> {
        let idx: Vec<usize> = generators
            .iter()
            .map(|g| self.table.odd_index(g))
            .collect::<Result<_, _>>()?;
        let mut cur = self.clone();
        for a in idx {
            let below = (1u128 << a) - 1;
            let mut next = Self::zero(&self.table);
            for (m, c) in cur.terms {
                if !m.contains_odd(a) {
                    continue;
                }
                let sign_neg = (m.odd & below).count_ones() % 2 == 1;
                let mono = Monomial {
                    odd: m.odd & !(1u128 << a),
                    even: m.even,
                };
                next.add_term(mono, if sign_neg { -c } else { c });
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Renames generators into `target`. Generators not listed in `mapping`
    /// keep their name. Parity and nilpotency order must be preserved and the
    /// map must be injective; odd reorderings contribute their sign.
    pub fn relabel(
        &self,
        target: &Arc<GeneratorTable>,
        mapping: &[(&str, &str)],
    ) -> Result<Self, RingError> {
        let explicit: HashMap<&str, &str> = mapping.iter().copied().collect();
        let src = &self.table;
        let resolve = |from: &str| -> Result<Option<Generator>, RingError> {
            let to = explicit.get(from).copied().unwrap_or(from);
            let g_src = src.lookup(from).ok_or_else(|| RingError::UnknownGenerator(from.into()))?;
            let g_dst = match target.lookup(to) {
                Some(g) => g,
                None if explicit.contains_key(from) => {
                    return Err(RingError::BadRelabel {
                        from: from.into(),
                        to: to.into(),
                        reason: "target generator does not exist".into(),
                    })
                }
                None => return Ok(None),
            };
            match (g_src, g_dst) {
                (Generator::Odd(_), Generator::Odd(_)) => Ok(Some(g_dst)),
                (Generator::Even(i), Generator::Even(j)) => {
                    if src.nilpotency(i) != target.nilpotency(j) {
                        Err(RingError::BadRelabel {
                            from: from.into(),
                            to: to.into(),
                            reason: format!(
                                "nilpotency {} != {}",
                                src.nilpotency(i),
                                target.nilpotency(j)
                            ),
                        })
                    } else {
                        Ok(Some(g_dst))
                    }
                }
                _ => Err(RingError::BadRelabel {
                    from: from.into(),
                    to: to.into(),
                    reason: "parity mismatch".into(),
                }),
            }
        };
        let odd_map: Vec<Option<usize>> = src
            .odd_names()
            .iter()
            .map(|n| {
                resolve(n).map(|g| match g {
                    Some(Generator::Odd(j)) => Some(j),
                    _ => None,
                })
            })
            .collect::<Result<_, _>>()?;
        let even_map: Vec<Option<usize>> = src
            .even_generators()
            .iter()
            .map(|e| {
                resolve(&e.name).map(|g| match g {
                    Some(Generator::Even(j)) => Some(j),
                    _ => None,
                })
            })
            .collect::<Result<_, _>>()?;
        check_injective(src, &odd_map, &even_map)?;
        self.transport(target, &odd_map, &even_map, false)
    }

    /// Sets every generator absent from `target` to zero and carries the rest
    /// over by name. Exponents at or beyond the target nilpotency vanish.
    pub fn restrict(&self, target: &Arc<GeneratorTable>) -> Result<Self, RingError> {
        let src = &self.table;
        let odd_map: Vec<Option<usize>> = src
            .odd_names()
            .iter()
            .map(|n| match target.lookup(n) {
                Some(Generator::Odd(j)) => Ok(Some(j)),
                Some(Generator::Even(_)) => Err(RingError::BadRelabel {
                    from: n.clone(),
                    to: n.clone(),
                    reason: "parity mismatch".into(),
                }),
                None => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        let even_map: Vec<Option<usize>> = src
            .even_generators()
            .iter()
            .map(|e| match target.lookup(&e.name) {
                Some(Generator::Even(j)) => Ok(Some(j)),
                Some(Generator::Odd(_)) => Err(RingError::BadRelabel {
                    from: e.name.clone(),
                    to: e.name.clone(),
                    reason: "parity mismatch".into(),
                }),
                None => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        self.transport(target, &odd_map, &even_map, true)
    }

    fn transport(
        &self,
        target: &Arc<GeneratorTable>,
        odd_map: &[Option<usize>],
        even_map: &[Option<usize>],
        drop_missing: bool,
    ) -> Result<Self, RingError> {
        let mut out = Self::zero(target);
        'terms: for (m, c) in &self.terms {
            let mut seq = Vec::with_capacity(m.odd_count() as usize);
            for i in m.odd_indices() {
                match odd_map[i] {
                    Some(j) => seq.push(j),
                    None if drop_missing => continue 'terms,
                    None => {
                        return Err(RingError::BadRelabel {
                            from: self.table.odd_names()[i].clone(),
                            to: "?".into(),
                            reason: "no target generator".into(),
                        })
                    }
                }
            }
            let mut even: Exponents = smallvec![0u32; target.n_even()];
            for (k, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match even_map[k] {
                    Some(j) => {
                        even[j] += e;
                        if even[j] >= target.nilpotency(j) {
                            continue 'terms;
                        }
                    }
                    None if drop_missing => continue 'terms,
                    None => {
                        return Err(RingError::BadRelabel {
                            from: self.table.even_generators()[k].name.clone(),
                            to: "?".into(),
                            reason: "no target generator".into(),
                        })
                    }
                }
            }
            let negative = permutation_is_odd(&seq);
            let mut mask = 0u128;
            for j in seq {
                mask |= 1u128 << j;
            }
            out.add_term(Monomial { odd: mask, even }, if negative { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Substitutes `χ ↦ -χ` for each listed odd generator.
    pub fn negate_odd(&self, names: &[&str]) -> Result<Self, RingError> {
        let mut mask = 0u128;
        for n in names {
            mask |= 1u128 << self.table.odd_index(n)?;
        }
        Ok(RingElement {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if (m.odd & mask).count_ones() % 2 == 1 {
                        (m.clone(), -c)
                    } else {
                        (m.clone(), c.clone())
                    }
                })
                .collect(),
        })
    }

    /// Re-runs canonicalization; a no-op on well-formed elements.
    pub fn canonicalize(&self) -> Self {
        Self::make(&self.table, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
            .expect("stored monomials are valid")
    }

    /// Stable text serialization, one term per line.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            s.push_str(&m.render(&self.table));
            s.push('\t');
            s.push_str(&super::rational::to_fraction_string(c));
            s.push('\n');
        }
        s
    }
}

fn check_injective(
    src: &GeneratorTable,
    odd_map: &[Option<usize>],
    even_map: &[Option<usize>],
) -> Result<(), RingError> {
    let mut seen = HashMap::new();
    for (i, j) in odd_map.iter().enumerate() {
        if let Some(j) = j {
            if let Some(prev) = seen.insert(*j, i) {
                return Err(RingError::BadRelabel {
                    from: src.odd_names()[i].clone(),
                    to: src.odd_names()[prev].clone(),
                    reason: "mapping is not injective".into(),
                });
            }
        }
    }
    let mut seen = HashMap::new();
    for (i, j) in even_map.iter().enumerate() {
        if let Some(j) = j {
            if let Some(prev) = seen.insert(*j, i) {
                return Err(RingError::BadRelabel {
                    from: src.even_generators()[i].name.clone(),
                    to: src.even_generators()[prev].name.clone(),
                    reason: "mapping is not injective".into(),
                });
            }
        }
    }
    Ok(())
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| m.degree());
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", display(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m.render(&self.table))?;
            } else {
                write!(f, "{}·{}", display(&abs), m.render(&self.table))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("ring addition across tables")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs).expect("ring subtraction across tables")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring product across tables")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}
