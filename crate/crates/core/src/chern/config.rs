use serde::{Deserialize, Serialize};

use crate::error::ChernError;

/// Discrete data of a single-layer Laughlin bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingleLayerConfig {
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub g: u32,
    pub n: i64,
    pub m: i64,
    /// Optional cap on the ξ_m degree; the nilpotency order used is
    /// `min(m, truncation) + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
}

impl SingleLayerConfig {
    pub fn new(b: i64, c: i64, d: i64, g: u32, n: i64, m: i64) -> Result<Self, ChernError> {
        let cfg = SingleLayerConfig {
            b,
            c,
            d,
            g,
            n,
            m,
            truncation: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config with `d` chosen so that `p` takes the requested value.
    pub fn with_p(b: i64, c: i64, g: u32, n: i64, m: i64, p: i64) -> Result<Self, ChernError> {
        let d = p + b * n + c * m + b * (i64::from(g) - 1);
        Self::new(b, c, d, g, n, m)
    }

    pub fn validate(&self) -> Result<(), ChernError> {
        if self.b < 1 {
            return Err(ChernError::InvalidConfig(format!("b = {} must be at least 1", self.b)));
        }
        if self.c < 0 {
            return Err(ChernError::InvalidConfig(format!("c = {} must be non-negative", self.c)));
        }
        if self.n < 0 {
            return Err(ChernError::InvalidConfig(format!("n = {} must be non-negative", self.n)));
        }
        if self.m < 1 {
            return Err(ChernError::InvalidConfig(format!("m = {} must be at least 1", self.m)));
        }
        Ok(())
    }

    pub fn p(&self) -> i64 {
        p_of(self)
    }

    pub fn xi_order(&self) -> u32 {
        xi_order(self.m, self.truncation)
    }

    /// Warnings for parameters outside `n > 2g-1`, `m > 2g-1`.
    pub fn validity_warnings(&self) -> Vec<String> {
        let bound = 2 * i64::from(self.g) - 1;
        let mut out = Vec::new();
        if self.n <= bound {
            out.push(format!("n = {} is not above 2g-1 = {bound}", self.n));
        }
        if self.m <= bound {
            out.push(format!("m = {} is not above 2g-1 = {bound}", self.m));
        }
        out
    }
}

pub fn p_of(cfg: &SingleLayerConfig) -> i64 {
    cfg.d - cfg.b * cfg.n - cfg.c * cfg.m - cfg.b * (i64::from(cfg.g) - 1)
}

pub fn xi_order(m: i64, truncation: Option<u32>) -> u32 {
    let m = u32::try_from(m.max(0)).unwrap_or(u32::MAX);
    match truncation {
        Some(t) => m.min(t) + 1,
        None => m.saturating_add(1),
    }
}

/// Discrete data of a multilayer (K, C) state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultilayerConfig {
    #[serde(rename = "K")]
    pub k: Vec<Vec<i64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<i64>>,
    pub n: Vec<i64>,
    pub m: Vec<i64>,
    pub d: Vec<i64>,
    pub g: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
}

impl MultilayerConfig {
    /// Builds a config whose `d` satisfies the filled condition.
    pub fn filled(
        k: Vec<Vec<i64>>,
        c: Vec<Vec<i64>>,
        n: Vec<i64>,
        m: Vec<i64>,
        g: u32,
    ) -> Result<Self, ChernError> {
        let mut cfg = MultilayerConfig {
            k,
            c,
            n,
            m,
            d: Vec::new(),
            g,
            truncation: None,
        };
        cfg.check_shapes()?;
        cfg.d = cfg.filled_degrees();
        Ok(cfg)
    }

    pub fn layers(&self) -> usize {
        self.k.len()
    }

    pub fn quasihole_types(&self) -> usize {
        self.m.len()
    }

    pub fn check_shapes(&self) -> Result<(), ChernError> {
        let nl = self.k.len();
        let nq = self.m.len();
        let bad = |msg: String| Err(ChernError::InvalidConfig(msg));
        if nl == 0 {
            return bad("K must be non-empty".into());
        }
        if self.k.iter().any(|row| row.len() != nl) {
            return bad("K must be square".into());
        }
        for i in 0..nl {
            for j in 0..nl {
                if self.k[i][j] != self.k[j][i] {
                    return bad(format!("K is not symmetric at ({i}, {j})"));
                }
                if self.k[i][j] < 0 {
                    return bad("K entries must be non-negative".into());
                }
            }
        }
        if self.c.len() != nl || self.c.iter().any(|row| row.len() != nq) {
            return bad(format!("C must be {nl}×{nq}"));
        }
        if self.c.iter().flatten().any(|&v| v < 0) {
            return bad("C entries must be non-negative".into());
        }
        if self.n.len() != nl {
            return bad(format!("n must have {nl} entries"));
        }
        if self.n.iter().any(|&v| v < 0) {
            return bad("n entries must be non-negative".into());
        }
        if nq == 0 || self.m.iter().any(|&v| v < 1) {
            return bad("m needs at least one entry, each at least 1".into());
        }
        Ok(())
    }

    /// `K n + C m + diag(K) (g - 1)`.
    pub fn filled_degrees(&self) -> Vec<i64> {
        let g1 = i64::from(self.g) - 1;
        (0..self.layers())
            .map(|i| {
                let kn: i64 = (0..self.layers()).map(|j| self.k[i][j] * self.n[j]).sum();
                let cm: i64 = (0..self.quasihole_types()).map(|s| self.c[i][s] * self.m[s]).sum();
                kn + cm + self.k[i][i] * g1
            })
            .collect()
    }

    pub fn check_filled(&self) -> Result<(), ChernError> {
        self.check_shapes()?;
        let want = self.filled_degrees();
        if self.d != want {
            return Err(ChernError::Precondition(format!(
                "filled condition d = Kn + Cm + diag(K)(g-1) requires d = {want:?}, got {:?}",
                self.d
            )));
        }
        Ok(())
    }

    /// `(nᵀC)_s`, the ξ coefficient magnitudes per quasihole type.
    pub fn n_t_c(&self) -> Vec<i64> {
        (0..self.quasihole_types())
            .map(|s| (0..self.layers()).map(|i| self.n[i] * self.c[i][s]).sum())
            .collect()
    }

    pub fn xi_orders(&self) -> Vec<u32> {
        self.m.iter().map(|&m| xi_order(m, self.truncation)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_examples() {
        assert_eq!(SingleLayerConfig::new(1, 1, 2, 0, 2, 1).unwrap().p(), 0);
        assert_eq!(SingleLayerConfig::new(2, 1, 7, 1, 3, 1).unwrap().p(), 0);
        assert_eq!(SingleLayerConfig::new(1, 1, 0, 0, 2, 1).unwrap().p(), -2);
    }

    #[test]
    fn with_p_round_trips() {
        let cfg = SingleLayerConfig::with_p(3, 2, 2, 4, 3, 1).unwrap();
        assert_eq!(cfg.p(), 1);
    }

    #[test]
    fn validity_flags() {
        let cfg = SingleLayerConfig::with_p(1, 1, 2, 3, 4, 0).unwrap();
        assert_eq!(cfg.validity_warnings().len(), 1);
        let ok = SingleLayerConfig::with_p(1, 1, 2, 4, 4, 0).unwrap();
        assert!(ok.validity_warnings().is_empty());
    }

    #[test]
    fn multilayer_json_keys() {
        let text = r#"{"K": [[3,1],[1,3]], "C": [[1],[1]], "n": [2,2], "m": [1], "d": [9,9], "g": 1}"#;
        let cfg: MultilayerConfig = serde_json::from_str(text).unwrap();
        assert!(cfg.check_filled().is_ok());
        assert_eq!(cfg.n_t_c(), vec![4]);
    }
}
