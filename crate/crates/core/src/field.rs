//! Spectral representation of the cutoff Gaussian field and its nested
//! coupling across cutoffs and times.

use crate::error::{GibbsError, Result};
use crate::grid::{box_index, box_len, box_side, spectral_to_grid};
use crate::params::ModelParams;
use crate::rng::{mode_rng, normal_pair};
use num_complex::Complex64;

const MAX_BOX: usize = 1 << 28;

/// `n` component arrays of Fourier coefficients on the box `{-N..N}^d`,
/// zero outside the Euclidean ball `|l| <= N`, Hermitian-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    d: u32,
    n_cut: u32,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zero(params: &ModelParams, n_comps: usize, n_cut: u32) -> Result<Self> {
        Self::zero_with(params.d(), n_comps, n_cut)
    }

    pub fn zero_with(d: u32, n_comps: usize, n_cut: u32) -> Result<Self> {
        let len = box_len(d, n_cut);
        if n_comps == 0 {
            return Err(GibbsError::InvalidConfig("component count must be >= 1".into()));
        }
        if len > MAX_BOX {
            return Err(GibbsError::Unsupported(format!(
                "coefficient box of {len} modes exceeds the design envelope"
            )));
        }
        Ok(SpectralField {
            d,
            n_cut,
            comps: vec![vec![Complex64::default(); len]; n_comps],
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn cutoff(&self) -> u32 {
        self.n_cut
    }

    pub fn side(&self) -> usize {
        box_side(self.n_cut)
    }

    pub fn get(&self, comp: usize, l: &[i64]) -> Complex64 {
        self.comps[comp][box_index(self.d, self.n_cut, l)]
    }

    /// Coefficient at `l`, zero outside the stored box.
    pub fn get_or_zero(&self, comp: usize, l: &[i64]) -> Complex64 {
        let n = self.n_cut as i64;
        if l.iter().any(|&x| x.abs() > n) {
            return Complex64::default();
        }
        self.get(comp, l)
    }

    /// Adds `scale` times another field's coefficients into this one; the
    /// other box must fit inside this one.
    pub fn accumulate(&mut self, other: &SpectralField, scale: f64) -> Result<()> {
        if other.d != self.d || other.comps.len() != self.comps.len() {
            return Err(GibbsError::InvalidConfig(
                "accumulating fields of mismatched shape".into(),
            ));
        }
        if other.n_cut > self.n_cut {
            return Err(GibbsError::InvalidConfig(format!(
                "cannot accumulate a cutoff-{} field into a cutoff-{} box",
                other.n_cut, self.n_cut
            )));
        }
        let n = other.n_cut as i64;
        let dd = self.d as usize;
        let mut l = vec![-n; dd];
        loop {
            let src = box_index(other.d, other.n_cut, &l);
            let dst = box_index(self.d, self.n_cut, &l);
            for comp in 0..self.comps.len() {
                let v = other.comps[comp][src];
                self.comps[comp][dst] += scale * v;
            }
            let mut axis = dd;
            loop {
                if axis == 0 {
                    return Ok(());
                }
                axis -= 1;
                if l[axis] < n {
                    l[axis] += 1;
                    for t in l.iter_mut().skip(axis + 1) {
                        *t = -n;
                    }
                    break;
                }
            }
        }
    }

    /// Adds `scale` times one component of another field into component
    /// `comp`; the other box must fit inside this one.
    pub fn accumulate_component(
        &mut self,
        comp: usize,
        other: &SpectralField,
        other_comp: usize,
        scale: f64,
    ) -> Result<()> {
        if other.d != self.d {
            return Err(GibbsError::InvalidConfig(
                "accumulating fields of mismatched dimension".into(),
            ));
        }
        if other.n_cut > self.n_cut {
            return Err(GibbsError::InvalidConfig(format!(
                "cannot accumulate a cutoff-{} field into a cutoff-{} box",
                other.n_cut, self.n_cut
            )));
        }
        let n = other.n_cut as i64;
        let dd = self.d as usize;
        let mut l = vec![-n; dd];
        loop {
            let src = box_index(other.d, other.n_cut, &l);
            let dst = box_index(self.d, self.n_cut, &l);
            let v = other.comps[other_comp][src];
            self.comps[comp][dst] += scale * v;
            let mut axis = dd;
            loop {
                if axis == 0 {
                    return Ok(());
                }
                axis -= 1;
                if l[axis] < n {
                    l[axis] += 1;
                    for t in l.iter_mut().skip(axis + 1) {
                        *t = -n;
                    }
                    break;
                }
            }
        }
    }

    /// Writes one coefficient with no symmetry bookkeeping.
    pub fn set_raw(&mut self, comp: usize, l: &[i64], v: Complex64) {
        self.comps[comp][box_index(self.d, self.n_cut, l)] = v;
    }

    /// Writes `l` and its mirror `-l` as a Hermitian pair; the zero mode is
    /// forced real.
    pub fn set_pair(&mut self, comp: usize, l: &[i64], v: Complex64) {
        if l.iter().all(|&li| li == 0) {
            self.set_raw(comp, l, Complex64::new(v.re, 0.0));
            return;
        }
        let neg: Vec<i64> = l.iter().map(|&li| -li).collect();
        self.set_raw(comp, l, v);
        self.set_raw(comp, &neg, v.conj());
    }

    pub fn coeffs(&self, comp: usize) -> &[Complex64] {
        &self.comps[comp]
    }

    /// `sum_{|l| <= N} |c(l)|^2` for one component.
    pub fn l2_sq(&self, comp: usize) -> f64 {
        self.comps[comp].iter().map(|c| c.norm_sqr()).sum()
    }

    /// Real grid values on `m^d` points; errors when the inverse transform
    /// leaves an imaginary residue above tolerance.
    pub fn grid_values(&self, comp: usize, m: usize) -> Result<Vec<f64>> {
        let data = spectral_to_grid(self.d, self.n_cut, &self.comps[comp], m);
        let sup_re = data.iter().map(|v| v.re.abs()).fold(0.0f64, f64::max);
        let sup_im = data.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
        if sup_im > 1e-10 * sup_re.max(1.0) {
            return Err(GibbsError::Numerics(format!(
                "imaginary residue {sup_im:.3e} after inverse transform (field not Hermitian?)"
            )));
        }
        Ok(data.into_iter().map(|v| v.re).collect())
    }

    /// Lexicographically ordered modes of the Euclidean ball with the first
    /// nonzero coordinate positive, plus the zero mode: one representative
    /// per Hermitian pair.
    fn canonical_modes(&self) -> Vec<Vec<i64>> {
        canonical_ball_modes(self.d, self.n_cut)
    }
}

pub fn canonical_ball_modes(d: u32, n_cut: u32) -> Vec<Vec<i64>> {
    let n = n_cut as i64;
    let r2 = n * n;
    let mut out = Vec::new();
    let mut l = vec![-n; d as usize];
    loop {
        let norm: i64 = l.iter().map(|&x| x * x).sum();
        if norm <= r2 {
            let lead = l.iter().find(|&&x| x != 0);
            if lead.map_or(true, |&x| x > 0) {
                out.push(l.clone());
            }
        }
        let mut axis = d as usize;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if l[axis] < n {
                l[axis] += 1;
                for t in l.iter_mut().skip(axis + 1) {
                    *t = -n;
                }
                break;
            }
        }
    }
}

fn mode_weight_sqrt(params: &ModelParams, l: &[i64]) -> f64 {
    let norm: i64 = l.iter().map(|&x| x * x).sum();
    (1.0 + norm as f64).powf(-params.alpha_f64() / 2.0)
}

/// Draws the cutoff field at time 1: mode `l` carries total variance
/// `(1+|l|^2)^{-alpha}`, split over real and imaginary parts away from zero.
pub fn sample_field(params: &ModelParams, n_comps: usize, n_cut: u32, seed: u64, replica: u64) -> SpectralField {
    let mut field = SpectralField::zero(params, n_comps, n_cut).expect("box within envelope");
    let modes = field.canonical_modes();
    for comp in 0..n_comps {
        for l in &modes {
            let mut rng = mode_rng(seed, replica, comp as u16, l, 0);
            let (g1, g2) = normal_pair(&mut rng);
            let w = mode_weight_sqrt(params, l);
            if l.iter().all(|&x| x == 0) {
                field.set_raw(comp, l, Complex64::new(w * g1, 0.0));
            } else {
                let half = w / 2.0f64.sqrt();
                field.set_pair(comp, l, Complex64::new(half * g1, half * g2));
            }
        }
    }
    field
}

/// The field at time 1 under cutoff `N` together with the time-`eta` field
/// under cutoff `M`, driven by shared Brownian increments per mode.
#[derive(Debug, Clone)]
pub struct CoupledSample {
    pub full: SpectralField,
    pub eta_part: SpectralField,
    pub eta: f64,
}

pub fn sample_coupled(
    params: &ModelParams,
    n_comps: usize,
    n_cut: u32,
    m_cut: u32,
    eta: f64,
    seed: u64,
    replica: u64,
) -> Result<CoupledSample> {
    if m_cut > n_cut {
        return Err(GibbsError::InvalidConfig(format!(
            "coupled cutoffs need M <= N, got M = {m_cut}, N = {n_cut}"
        )));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(GibbsError::InvalidConfig(format!(
            "eta must lie in (0,1), got {eta}"
        )));
    }
    let mut full = SpectralField::zero(params, n_comps, n_cut)?;
    let mut eta_part = SpectralField::zero(params, n_comps, m_cut)?;
    let m2 = (m_cut as i64) * (m_cut as i64);
    for comp in 0..n_comps {
        for l in full.canonical_modes() {
            let w = mode_weight_sqrt(params, &l);
            let mut rng0 = mode_rng(seed, replica, comp as u16, &l, 0);
            let mut rng1 = mode_rng(seed, replica, comp as u16, &l, 1);
            let (a1, a2) = normal_pair(&mut rng0);
            let (b1, b2) = normal_pair(&mut rng1);
            let in_m = l.iter().map(|&x| x * x).sum::<i64>() <= m2;
            if l.iter().all(|&x| x == 0) {
                let early = eta.sqrt() * a1;
                let late = (1.0 - eta).sqrt() * b1;
                full.set_raw(comp, &l, Complex64::new(w * (early + late), 0.0));
                if in_m {
                    eta_part.set_raw(comp, &l, Complex64::new(w * early, 0.0));
                }
            } else {
                let half = w / 2.0f64.sqrt();
                let early = Complex64::new(a1, a2) * eta.sqrt();
                let late = Complex64::new(b1, b2) * (1.0 - eta).sqrt();
                full.set_pair(comp, &l, (early + late) * half);
                if in_m {
                    eta_part.set_pair(comp, &l, early * half);
                }
            }
        }
    }
    Ok(CoupledSample {
        full,
        eta_part,
        eta,
    })
}
