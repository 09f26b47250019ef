//! Renormalized interaction `R_N^F` by exact trigonometric quadrature, and
//! the Wick-ordered L2 taming quantity.

use crate::error::{GibbsError, Result};
use crate::field::SpectralField;
use crate::grid::next_smooth;
use crate::hermite::hermite;
use crate::params::ModelParams;
use crate::polynomial::Interaction;
use crate::sigma::sigma_alpha_n;
use crate::MultiIndex;

#[derive(Debug, Clone)]
pub struct WickReport {
    pub value: f64,
    pub per_term: Vec<(MultiIndex, f64)>,
    pub wick_l2: f64,
    pub sigma: f64,
    pub grid_points: usize,
}

/// Grid mean of `sum_beta c_beta H_beta(field; sigma)` on `m^d` points; the
/// quadrature is exact once `m >= 2 k N + 1`.
pub fn hermite_grid_mean(
    f: &Interaction,
    field: &SpectralField,
    m: usize,
    sigma: f64,
) -> Result<(f64, Vec<(MultiIndex, f64)>)> {
    if f.n() != field.components() {
        return Err(GibbsError::InvalidInteraction(format!(
            "interaction has {} components, field has {}",
            f.n(),
            field.components()
        )));
    }
    let d = field.d();
    let values: Vec<Vec<f64>> = (0..field.components())
        .map(|comp| field.grid_values(comp, m))
        .collect::<Result<_>>()?;
    let points = m.pow(d);
    let terms = f.terms_f64();
    let mut sums = vec![0.0f64; terms.len()];
    for p in 0..points {
        for (slot, (beta, _)) in terms.iter().enumerate() {
            let mut h = 1.0;
            for (i, vals) in values.iter().enumerate() {
                let bi = beta.get(i);
                if bi > 0 {
                    h *= hermite(bi, vals[p], sigma);
                }
            }
            sums[slot] += h;
        }
    }
    let mut per_term = Vec::with_capacity(terms.len());
    let mut total = 0.0;
    for (slot, (beta, c)) in terms.into_iter().enumerate() {
        let contrib = c * sums[slot] / points as f64;
        total += contrib;
        per_term.push((beta, contrib));
    }
    Ok((total, per_term))
}

pub fn wick_interaction(
    f: &Interaction,
    params: &ModelParams,
    field: &SpectralField,
) -> Result<WickReport> {
    let k = f.degree().max(1) as usize;
    let need = 2 * k * field.cutoff() as usize + 1;
    wick_interaction_with_grid(f, params, field, next_smooth(need))
}

pub fn wick_interaction_with_grid(
    f: &Interaction,
    params: &ModelParams,
    field: &SpectralField,
    m: usize,
) -> Result<WickReport> {
    let k = f.degree().max(1) as usize;
    let need = 2 * k * field.cutoff() as usize + 1;
    if m < need {
        return Err(GibbsError::InvalidConfig(format!(
            "{m} grid points cannot integrate degree {k} at cutoff {} (need {need})",
            field.cutoff()
        )));
    }
    let sigma = sigma_alpha_n(params, field.cutoff());
    let (value, per_term) = hermite_grid_mean(f, field, m, sigma)?;
    Ok(WickReport {
        value,
        per_term,
        wick_l2: wick_l2(params, field),
        sigma,
        grid_points: m,
    })
}

/// `int :|Phi|^2: dx = sum_i (sum_{|l|<=N} |c_i(l)|^2 - sigma_{alpha,N})`,
/// computed in Fourier space.
pub fn wick_l2(params: &ModelParams, field: &SpectralField) -> f64 {
    let sigma = sigma_alpha_n(params, field.cutoff());
    (0..field.components())
        .map(|comp| field.l2_sq(comp) - sigma)
        .sum()
}

/// Exponent of the grand-canonical factor `exp(-K |int :|Phi|^2:|^b)`.
pub fn taming_exponent(wick_l2_value: f64, k_const: f64, b: f64) -> f64 {
    -k_const * wick_l2_value.abs().powf(b)
}
