use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::RingError;

pub const MAX_ODD: usize = 128;

/// Where a generator name lives in a [`GeneratorTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Odd(usize),
    Even(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenGenerator {
    pub name: String,
    /// `x^order = 0`.
    pub nilpotency: u32,
}

/// The generators of a finite graded-commutative algebra. Odd generators
/// anticommute and square to zero; their total order is the order of
/// insertion and is frozen once built. Even generators are central,
/// carry cohomological degree two and are truncated at their nilpotency
/// order.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    odd: Vec<String>,
    even: Vec<EvenGenerator>,
    index: HashMap<String, Generator>,
}

impl GeneratorTable {
    pub fn builder() -> TableBuilder {
        TableBuilder::default()
    }

    pub fn new(odd: Vec<String>, even: Vec<(String, u32)>) -> Result<Arc<Self>, RingError> {
        let mut b = Self::builder();
        for o in odd {
            b = b.odd(o);
        }
        for (e, k) in even {
            b = b.even(e, k);
        }
        b.build()
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    pub fn even_generators(&self) -> &[EvenGenerator] {
        &self.even
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn lookup(&self, name: &str) -> Option<Generator> {
        self.index.get(name).copied()
    }

    pub fn odd_index(&self, name: &str) -> Result<usize, RingError> {
        match self.lookup(name) {
            Some(Generator::Odd(i)) => Ok(i),
            Some(Generator::Even(_)) => Err(RingError::NotOdd(name.to_string())),
            None => Err(RingError::UnknownGenerator(name.to_string())),
        }
    }

    pub fn even_index(&self, name: &str) -> Result<usize, RingError> {
        match self.lookup(name) {
            Some(Generator::Even(i)) => Ok(i),
            Some(Generator::Odd(_)) => Err(RingError::InvalidMonomial(format!(
                "`{name}` is odd, expected an even generator"
            ))),
            None => Err(RingError::UnknownGenerator(name.to_string())),
        }
    }

    pub fn nilpotency(&self, even: usize) -> u32 {
        self.even[even].nilpotency
    }

    pub fn name_of(&self, g: Generator) -> &str {
        match g {
            Generator::Odd(i) => &self.odd[i],
            Generator::Even(i) => &self.even[i].name,
        }
    }
}

impl fmt::Debug for GeneratorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorTable")
            .field("odd", &self.odd)
            .field("even", &self.even)
            .finish()
    }
}

#[derive(Debug, Default)]
pub struct TableBuilder {
    odd: Vec<String>,
    even: Vec<(String, u32)>,
}

impl TableBuilder {
    pub fn odd(mut self, name: impl Into<String>) -> Self {
        self.odd.push(name.into());
        self
    }

    pub fn even(mut self, name: impl Into<String>, nilpotency: u32) -> Self {
        self.even.push((name.into(), nilpotency));
        self
    }

    pub fn build(self) -> Result<Arc<GeneratorTable>, RingError> {
        if self.odd.len() > MAX_ODD {
            return Err(RingError::TooManyOdd(self.odd.len()));
        }
        let mut index = HashMap::new();
        for (i, name) in self.odd.iter().enumerate() {
            if index.insert(name.clone(), Generator::Odd(i)).is_some() {
                return Err(RingError::DuplicateGenerator(name.clone()));
            }
        }
        let mut even = Vec::with_capacity(self.even.len());
        for (i, (name, order)) in self.even.into_iter().enumerate() {
            if order < 1 {
                return Err(RingError::BadNilpotency { name, order });
            }
            if index.insert(name.clone(), Generator::Even(i)).is_some() {
                return Err(RingError::DuplicateGenerator(name));
            }
            even.push(EvenGenerator {
                name,
                nilpotency: order,
            });
        }
        Ok(Arc::new(GeneratorTable {
            odd: self.odd,
            even,
            index,
        }))
    }
}
