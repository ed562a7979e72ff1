//! Expected integrals over the one-quasihole slice `w₁ ↦ {w₁, w₂, …}`.

use super::class::{collect, ChernClass, Collected};
use super::symbolic::{SymPoly, Symbol};
use crate::error::ChernError;
use crate::ring::Rational;

/// Integral of `c₁` (the degree-two part of `ch`) over the slice, where
/// `θ_m` and `ξ_m` each pull back to one unit of area.
pub fn slice_pullback(class: &ChernClass) -> Result<Rational, ChernError> {
    let poly = match &class.collected {
        Some(Collected::Polynomial(p)) => p.clone(),
        _ => collect(&class.expansion).map_err(|e| ChernError::UnsupportedSlice(e.to_string()))?,
    };
    slice_pullback_poly(&poly)
}

pub fn slice_pullback_poly(poly: &SymPoly) -> Result<Rational, ChernError> {
    let mut acc = Rational::from_integer(0.into());
    for (m, c) in poly.terms() {
        if m.total_degree() != 1 {
            continue;
        }
        match m.factors()[0].0 {
            Symbol::ThetaM | Symbol::XiM => acc += c,
            other => {
                return Err(ChernError::UnsupportedSlice(format!(
                    "{} has no one-quasihole slice pullback",
                    other.name()
                )))
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::config::SingleLayerConfig;
    use crate::chern::formulas::{ch_filled, ch_with_picard};
    use crate::ring::rational::int;

    #[test]
    fn pullback_examples() {
        assert_eq!(slice_pullback_poly(&SymPoly::linear(&[(Symbol::XiM, int(-2))])).unwrap(), int(-2));
        let p = SymPoly::linear(&[(Symbol::ThetaM, int(-1)), (Symbol::XiM, int(-2))]);
        assert_eq!(slice_pullback_poly(&p).unwrap(), int(-3));
        let sphere = ch_filled(&SingleLayerConfig::with_p(1, 1, 0, 2, 1, 0).unwrap()).unwrap();
        assert_eq!(slice_pullback(&sphere).unwrap(), int(-2));
        let torus = ch_filled(&SingleLayerConfig::with_p(2, 1, 1, 2, 1, 0).unwrap()).unwrap();
        assert_eq!(slice_pullback(&torus).unwrap(), int(-5));
        let c2 = ch_filled(&SingleLayerConfig::with_p(2, 3, 1, 2, 1, 0).unwrap()).unwrap();
        assert_eq!(slice_pullback(&c2).unwrap(), int(-(9 + 3 * 2 * 2)));
    }

    #[test]
    fn picard_class_is_unsupported() {
        let x = ch_with_picard(&SingleLayerConfig::with_p(1, 1, 1, 2, 2, 0).unwrap()).unwrap();
        assert!(matches!(slice_pullback(&x), Err(ChernError::UnsupportedSlice(_))));
    }
}
