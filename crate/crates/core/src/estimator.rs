//! Monte Carlo diagnostics: truncated partition-function estimates over a
//! cutoff schedule, the drifted objective under three conditioning levels,
//! and the brute-force variance oracle for integrated Wick powers.

use crate::drift::{kinetic_closed_form, DriftWitnessSpec};
use crate::error::{GibbsError, Result};
use crate::field::{sample_coupled, sample_field, SpectralField};
use crate::grid::next_smooth;
use crate::params::ModelParams;
use crate::polynomial::Interaction;
use crate::sigma::sigma_alpha_n;
use crate::wick::{hermite_grid_mean, taming_exponent};
use crate::MultiIndex;
use num_traits::ToPrimitive;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct Taming {
    pub k: f64,
    pub b: f64,
}

#[derive(Debug, Clone)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Truncation level L in `e^{R wedge L}`.
    pub truncation: f64,
    pub taming: Option<Taming>,
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(GibbsError::InvalidConfig(
                "need at least 2 samples".into(),
            ));
        }
        if !self.truncation.is_finite() {
            return Err(GibbsError::InvalidConfig(
                "truncation level must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EstimateRow {
    pub n_cut: u32,
    pub samples: usize,
    pub mean: f64,
    pub se: f64,
    pub truncation_hits: usize,
    pub max_r: f64,
}

/// Mean and a batch-means standard error (32 batches when the sample count
/// allows it).
pub fn batch_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n >= 64 {
        let batches = 32;
        let bs = n / batches;
        let mut bm = Vec::with_capacity(batches);
        for b in 0..batches {
            let chunk = &values[b * bs..(b + 1) * bs];
            bm.push(chunk.iter().sum::<f64>() / bs as f64);
        }
        let bmean = bm.iter().sum::<f64>() / batches as f64;
        let var = bm.iter().map(|v| (v - bmean) * (v - bmean)).sum::<f64>()
            / (batches - 1) as f64;
        (mean, (var / batches as f64).sqrt())
    } else {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (n - 1) as f64;
        (mean, (var / n as f64).sqrt())
    }
}

/// Per-cutoff estimates of `E[e^{R_N wedge L}]`, optionally times the
/// grand-canonical factor.
pub fn estimate_log_z(
    f: &Interaction,
    params: &ModelParams,
    schedule: &[u32],
    cfg: &McConfig,
) -> Result<Vec<EstimateRow>> {
    cfg.validate()?;
    if f.degree() >= 1 {
        params.require_wick(f.degree())?;
    }
    let mut rows = Vec::with_capacity(schedule.len());
    for &n_cut in schedule {
        let sigma = sigma_alpha_n(params, n_cut);
        let k = f.degree().max(1) as usize;
        let m = next_smooth(2 * k * n_cut as usize + 1);
        let per_rep: Vec<(f64, f64)> = (0..cfg.samples)
            .into_par_iter()
            .map(|rep| {
                let field = sample_field(params, f.n(), n_cut, cfg.seed, rep as u64);
                let (r, _) = hermite_grid_mean(f, &field, m, sigma)
                    .expect("arity checked before the replica loop");
                let wl2: f64 = (0..f.n()).map(|c| field.l2_sq(c) - sigma).sum();
                (r, wl2)
            })
            .collect();
        let values: Vec<f64> = per_rep
            .iter()
            .map(|&(r, wl2)| {
                let mut expo = r.min(cfg.truncation);
                if let Some(t) = &cfg.taming {
                    expo += taming_exponent(wl2, t.k, t.b);
                }
                expo.exp()
            })
            .collect();
        let (mean, se) = batch_stats(&values);
        rows.push(EstimateRow {
            n_cut,
            samples: cfg.samples,
            mean,
            se,
            truncation_hits: per_rep.iter().filter(|&&(r, _)| r > cfg.truncation).count(),
            max_r: per_rep.iter().map(|&(r, _)| r).fold(f64::NEG_INFINITY, f64::max),
        });
    }
    Ok(rows)
}

/// How much of the field is integrated out analytically before averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// Sample the full cutoff-N field.
    Raw,
    /// Integrate out the modes above the drift support.
    AboveCutoff,
    /// Also integrate out the late-time part, so only the kinetic cost stays
    /// random.
    EtaField,
}

#[derive(Debug, Clone)]
pub struct BdObjectiveReport {
    pub n_cut: u32,
    pub m_cut: u32,
    /// Cutoff of the field that is still sampled after conditioning.
    pub eval_cut: u32,
    pub samples: usize,
    pub mean: f64,
    pub se: f64,
    /// Mean of `-F` over the integrated drift alone.
    pub drift_term: f64,
    /// Remainder of the reduced interaction beyond the drift term.
    pub cross_term: f64,
    pub kinetic_term: f64,
    pub taming_term: f64,
    pub truncation_hits: usize,
}

struct BdRow {
    value: f64,
    r: f64,
    a1: f64,
    kin: f64,
    tame: f64,
}

/// Estimates `E[-R wedge L + taming + kinetic]` for a drifted field. The
/// conditioning level trades sampled modes for exact partial averages of the
/// reduced interaction; the estimate stays unbiased up to truncation and the
/// taming penalty, which only shrink under conditioning.
pub fn bd_objective(
    f: &Interaction,
    params: &ModelParams,
    drift: &DriftWitnessSpec,
    n_cut: u32,
    conditioning: Conditioning,
    cfg: &McConfig,
) -> Result<BdObjectiveReport> {
    cfg.validate()?;
    if f.degree() >= 1 {
        params.require_wick(f.degree())?;
    }
    let ts = drift.total_shift();
    let nc = f.n();
    if ts.components() != nc {
        return Err(GibbsError::InvalidInteraction(format!(
            "interaction has {} components, drift has {}",
            nc,
            ts.components()
        )));
    }
    let shape_cut = drift.shift_cutoff();
    let has_eta = drift.has_eta_piece();
    let m_cut = drift.m_cut();
    if n_cut < shape_cut || (has_eta && n_cut < m_cut) {
        return Err(GibbsError::InvalidConfig(format!(
            "cutoff {n_cut} does not cover the drift (shift cutoff {shape_cut}, block cutoff {m_cut})"
        )));
    }
    let eta = drift.eta();
    let eval_cut = match conditioning {
        Conditioning::Raw => n_cut,
        Conditioning::AboveCutoff => shape_cut.max(if has_eta { m_cut } else { 0 }),
        Conditioning::EtaField => shape_cut,
    };
    let sigma_red = match conditioning {
        Conditioning::EtaField => {
            if has_eta {
                eta * sigma_alpha_n(params, m_cut)
            } else {
                0.0
            }
        }
        _ => sigma_alpha_n(params, eval_cut),
    };
    let k = f.degree().max(1) as usize;
    let m_grid = next_smooth(2 * k * eval_cut as usize + 1);
    let i_cut = shape_cut.max(if has_eta { m_cut } else { 0 });
    let m_i = next_smooth(2 * k * i_cut as usize + 1);
    let frozen = match conditioning {
        Conditioning::EtaField => {
            let (r, _) = hermite_grid_mean(f, ts, m_grid, sigma_red)?;
            let tame = (0..nc).map(|c| ts.l2_sq(c)).sum::<f64>() - nc as f64 * sigma_red;
            Some((r, tame))
        }
        _ => None,
    };
    let rows: Vec<BdRow> = (0..cfg.samples)
        .into_par_iter()
        .map(|rep| -> Result<BdRow> {
            let rep = rep as u64;
            let coupled = if has_eta {
                let full_cut = match conditioning {
                    Conditioning::EtaField => m_cut,
                    _ => eval_cut,
                };
                Some(sample_coupled(params, nc, full_cut, m_cut, eta, cfg.seed, rep)?)
            } else {
                None
            };
            let mut i_field = SpectralField::zero(params, nc, i_cut)?;
            i_field.accumulate(ts, 1.0)?;
            if let Some(cs) = &coupled {
                i_field.accumulate(&cs.eta_part, -1.0)?;
            }
            let mut grids = Vec::with_capacity(nc);
            for c in 0..nc {
                grids.push(i_field.grid_values(c, m_i)?);
            }
            let pts = grids[0].len();
            let mut acc = 0.0;
            let mut x = vec![0.0; nc];
            for j in 0..pts {
                for c in 0..nc {
                    x[c] = grids[c][j];
                }
                acc += f.eval_f64(&x);
            }
            let a1 = -(acc / pts as f64);
            let (r, tame_arg) = match frozen {
                Some(rt) => rt,
                None => {
                    let mut phi = match &coupled {
                        Some(cs) => cs.full.clone(),
                        None => sample_field(params, nc, eval_cut, cfg.seed, rep),
                    };
                    if let Some(cs) = &coupled {
                        phi.accumulate(&cs.eta_part, -1.0)?;
                    }
                    phi.accumulate(ts, 1.0)?;
                    let (r, _) = hermite_grid_mean(f, &phi, m_grid, sigma_red)?;
                    let tame =
                        (0..nc).map(|c| phi.l2_sq(c)).sum::<f64>() - nc as f64 * sigma_red;
                    (r, tame)
                }
            };
            let kin =
                kinetic_closed_form(drift, params, coupled.as_ref().map(|cs| &cs.eta_part))?;
            let tame = match &cfg.taming {
                Some(t) => -taming_exponent(tame_arg, t.k, t.b),
                None => 0.0,
            };
            let value = -r.min(cfg.truncation) + tame + kin;
            Ok(BdRow {
                value,
                r,
                a1,
                kin,
                tame,
            })
        })
        .collect::<Result<Vec<BdRow>>>()?;
    let values: Vec<f64> = rows.iter().map(|row| row.value).collect();
    let (mean, se) = batch_stats(&values);
    let inv = 1.0 / rows.len() as f64;
    Ok(BdObjectiveReport {
        n_cut,
        m_cut,
        eval_cut,
        samples: cfg.samples,
        mean,
        se,
        drift_term: rows.iter().map(|row| row.a1).sum::<f64>() * inv,
        cross_term: rows
            .iter()
            .map(|row| -row.r.min(cfg.truncation) - row.a1)
            .sum::<f64>()
            * inv,
        kinetic_term: rows.iter().map(|row| row.kin).sum::<f64>() * inv,
        taming_term: rows.iter().map(|row| row.tame).sum::<f64>() * inv,
        truncation_hits: rows.iter().filter(|row| row.r > cfg.truncation).count(),
    })
}

/// `gamma! sum over (l_1..l_q), sum l_j = 0, |l_j| <= N, of prod
/// (1+l_j^2)^{-alpha}` in one spatial dimension.
pub fn wick_variance_sum(alpha: f64, gamma: &MultiIndex, n_cut: u32) -> f64 {
    let q = gamma.order() as usize;
    assert!(q >= 1);
    let n = n_cut as i64;
    let weight: Vec<f64> = (-n..=n)
        .map(|l| (1.0 + (l * l) as f64).powf(-alpha))
        .collect();
    let w = |l: i64| weight[(l + n) as usize];
    let mut total = 0.0;
    let mut idx = vec![-n; q - 1];
    loop {
        let sum: i64 = idx.iter().sum();
        let last = -sum;
        if last.abs() <= n {
            let mut prod = w(last);
            for &l in &idx {
                prod *= w(l);
            }
            total += prod;
        }
        let mut axis = q - 1;
        loop {
            if axis == 0 {
                let fact = gamma.factorial().to_f64().expect("small factorial");
                return fact * total;
            }
            axis -= 1;
            if idx[axis] < n {
                idx[axis] += 1;
                for t in idx.iter_mut().skip(axis + 1) {
                    *t = -n;
                }
                break;
            }
        }
    }
}

/// Brute-force `Var[int :Y_N^gamma: dx]` with the feasibility guards of the
/// enumeration (d = 1, |gamma| <= 4, N <= 12).
pub fn wick_variance_oracle(
    params: &ModelParams,
    gamma: &MultiIndex,
    n_cut: u32,
) -> Result<f64> {
    if params.d() != 1 {
        return Err(GibbsError::Unsupported(
            "variance enumeration only runs in dimension 1".into(),
        ));
    }
    let q = gamma.order();
    if q == 0 || q > 4 {
        return Err(GibbsError::Unsupported(format!(
            "variance enumeration needs 1 <= |gamma| <= 4, got {q}"
        )));
    }
    if n_cut > 12 {
        return Err(GibbsError::Unsupported(format!(
            "variance enumeration needs N <= 12, got {n_cut}"
        )));
    }
    Ok(wick_variance_sum(params.alpha_f64(), gamma, n_cut))
}
