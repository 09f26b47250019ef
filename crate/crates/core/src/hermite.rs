//! Hermite polynomials with a variance parameter: `H_0 = 1`, `H_1(x;s) = x`,
//! `H_{l+1}(x;s) = x H_l(x;s) - l s H_{l-1}(x;s)`.

use crate::multi_index::MultiIndex;
use num_traits::ToPrimitive;

pub fn hermite(l: u32, x: f64, sigma: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for j in 1..l {
                let next = x * cur - j as f64 * sigma * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `H_beta(x;s) = prod_i H_{beta_i}(x_i;s)`.
pub fn hermite_multi(beta: &MultiIndex, x: &[f64], sigma: f64) -> f64 {
    assert_eq!(beta.dim(), x.len());
    beta.parts()
        .iter()
        .zip(x)
        .map(|(&bi, &xi)| hermite(bi, xi, sigma))
        .product()
}

/// Right-hand side of the addition identity
/// `H_alpha(x+y;c) = sum_{beta <= alpha} binom(alpha,beta) H_beta(x;c) y^{alpha-beta}`,
/// evaluated term by term.
pub fn hermite_addition(alpha: &MultiIndex, x: &[f64], y: &[f64], c: f64) -> f64 {
    assert_eq!(alpha.dim(), x.len());
    assert_eq!(alpha.dim(), y.len());
    let mut acc = 0.0;
    for beta in alpha.box_below() {
        let gamma = alpha.sub(&beta);
        let mut term = alpha.binomial(&beta).to_f64().expect("binomial fits f64");
        term *= hermite_multi(&beta, x, c);
        for (i, &gi) in gamma.parts().iter().enumerate() {
            term *= y[i].powi(gi as i32);
        }
        acc += term;
    }
    acc
}
