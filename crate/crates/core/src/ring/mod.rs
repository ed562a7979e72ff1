//! Exact arithmetic in finite graded-commutative algebras: anticommuting
//! odd generators, nilpotent central even generators, exact rational
//! coefficients, exponentials of nilpotent elements and Berezin integrals.

mod element;
pub mod rational;
mod table;

#[cfg(test)]
mod tests;

pub use element::{Monomial, RingElement};
pub use rational::Rational;
pub use table::{EvenGenerator, Generator, GeneratorTable, TableBuilder, MAX_ODD};
