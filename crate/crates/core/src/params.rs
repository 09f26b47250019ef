//! Model parameters: torus dimension and covariance regularity.
//!
//! The Gaussian base measure has spectral weights `(1 + |l|^2)^{-alpha}`
//! per component over frequencies `l` in `Z^d`, on the unit-volume torus
//! with characters `e_l(x) = exp(2 pi i l.x)`.

use crate::error::{GibbsError, Result};
use crate::multi_index::MultiIndex;
use crate::rational::{rat, rat_int, Rat};
use num_traits::Signed;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    d: u32,
    alpha: Rat,
}

impl ModelParams {
    pub fn new(d: u32, alpha: Rat) -> Result<Self> {
        if d == 0 {
            return Err(GibbsError::InvalidParams("dimension must be >= 1".into()));
        }
        if !alpha.is_positive() {
            return Err(GibbsError::InvalidParams(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        let half_d = rat(d as i64, 2);
        if alpha > half_d {
            return Err(GibbsError::InvalidParams(format!(
                "alpha must satisfy alpha <= d/2, got alpha = {alpha}, d = {d}"
            )));
        }
        Ok(ModelParams { d, alpha })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        crate::rational::to_f64(&self.alpha)
    }

    /// Whether `alpha = d/2` (logarithmic covariance growth).
    pub fn is_critical(&self) -> bool {
        self.alpha == rat(self.d as i64, 2)
    }

    /// `d - 2 alpha`, zero exactly in the critical case.
    pub fn d_minus_2alpha(&self) -> Rat {
        rat_int(self.d as i64) - rat_int(2) * &self.alpha
    }

    /// Renormalizability window for a degree-`k` interaction:
    /// `(k - 1) d / (2 k) < alpha`.
    pub fn wick_ok(&self, k: u32) -> bool {
        if k == 0 {
            return true;
        }
        let lower = rat((k as i64 - 1) * self.d as i64, 2 * k as i64);
        self.alpha > lower
    }

    pub fn require_wick(&self, k: u32) -> Result<()> {
        if self.wick_ok(k) {
            Ok(())
        } else {
            Err(GibbsError::InvalidParams(format!(
                "degree {k} is not renormalizable at d = {}, alpha = {}: needs alpha > (k-1)d/(2k)",
                self.d, self.alpha
            )))
        }
    }
}

/// Integrability-exponent assignment `q` on multi-indices: a positive
/// default with optional per-index overrides.
#[derive(Debug, Clone)]
pub struct QMap {
    default: Rat,
    overrides: BTreeMap<MultiIndex, Rat>,
}

impl QMap {
    pub fn constant(q: Rat) -> Result<Self> {
        if !q.is_positive() {
            return Err(GibbsError::InvalidConfig(format!(
                "exponent map values must be positive, got {q}"
            )));
        }
        Ok(QMap {
            default: q,
            overrides: BTreeMap::new(),
        })
    }

    pub fn with_overrides(default: Rat, overrides: Vec<(MultiIndex, Rat)>) -> Result<Self> {
        let mut map = QMap::constant(default)?;
        for (beta, q) in overrides {
            if !q.is_positive() {
                return Err(GibbsError::InvalidConfig(format!(
                    "exponent map values must be positive, got {q} at {beta}"
                )));
            }
            map.overrides.insert(beta, q);
        }
        Ok(map)
    }

    pub fn get(&self, beta: &MultiIndex) -> &Rat {
        self.overrides.get(beta).unwrap_or(&self.default)
    }

    pub fn default_value(&self) -> &Rat {
        &self.default
    }

    pub fn overrides(&self) -> &BTreeMap<MultiIndex, Rat> {
        &self.overrides
    }
}
