//! Polynomial interactions `F(x) = sum_beta c_beta x^beta` in `n` field
//! components, with exact rational coefficients.

use crate::error::{GibbsError, Result};
use crate::multi_index::{strict_lower_set, MultiIndex};
use crate::rational::{format_rational, to_f64, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    n: usize,
    terms: BTreeMap<MultiIndex, Rat>,
}

impl Interaction {
    /// Builds from coefficient pairs; zero coefficients are dropped,
    /// repeated exponents accumulate.
    pub fn new(n: usize, pairs: Vec<(MultiIndex, Rat)>) -> Result<Self> {
        if n == 0 {
            return Err(GibbsError::InvalidInteraction(
                "component count must be >= 1".into(),
            ));
        }
        let mut terms: BTreeMap<MultiIndex, Rat> = BTreeMap::new();
        for (beta, c) in pairs {
            if beta.dim() != n {
                return Err(GibbsError::InvalidInteraction(format!(
                    "exponent {beta} has arity {}, expected {n}",
                    beta.dim()
                )));
            }
            let slot = terms.entry(beta).or_insert_with(Rat::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Interaction { n, terms })
    }

    /// Single-component convenience: `sum_k c_k x^k`.
    pub fn univariate(pairs: Vec<(u32, Rat)>) -> Result<Self> {
        Interaction::new(
            1,
            pairs
                .into_iter()
                .map(|(k, c)| (MultiIndex::new(vec![k]), c))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `k = max |beta|`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|b| b.order()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, beta: &MultiIndex) -> Rat {
        self.terms.get(beta).cloned().unwrap_or_else(Rat::zero)
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    /// Exponents of maximal order.
    pub fn top_terms(&self) -> Vec<(MultiIndex, Rat)> {
        let k = self.degree();
        self.terms
            .iter()
            .filter(|(b, _)| b.order() == k)
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect()
    }

    /// Strict lower closure of the support.
    pub fn strict_lower_closure(&self) -> Vec<MultiIndex> {
        strict_lower_set(&self.support())
    }

    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.n);
        let mut acc = Rat::zero();
        for (beta, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..self.n {
                for _ in 0..beta.get(i) {
                    term *= &x[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for (beta, c) in &self.terms {
            let mut term = to_f64(c);
            for i in 0..self.n {
                term *= x[i].powi(beta.get(i) as i32);
            }
            acc += term;
        }
        acc
    }

    /// Coefficients as f64 for the sampling layer.
    pub fn terms_f64(&self) -> Vec<(MultiIndex, f64)> {
        self.terms
            .iter()
            .map(|(b, c)| (b.clone(), to_f64(c)))
            .collect()
    }

    /// Rejects constants: classification requires a nonconstant interaction.
    pub fn require_nonconstant(&self) -> Result<()> {
        if self.degree() == 0 {
            Err(GibbsError::InvalidInteraction(
                "interaction must have degree >= 1".into(),
            ))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (beta, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} x^{}", format_rational(c), beta)?;
        }
        Ok(())
    }
}
