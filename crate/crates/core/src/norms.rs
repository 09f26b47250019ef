//! Sobolev norms through the Fourier multiplier `(1+|l|^2)^{s/2}`: the exact
//! H^s norm and a grid-sup proxy for the L-infinity scale.

use crate::field::SpectralField;
use crate::grid::{bin_norm_sq, grid_to_spectral, spectral_to_grid, box_len};
use num_complex::Complex64;

/// `(sum_l (1+|l|^2)^s |c(l)|^2)^{1/2}` over the coefficient box.
pub fn h_s_norm_spectral(field: &SpectralField, comp: usize, s: f64) -> f64 {
    let d = field.d();
    let n_cut = field.cutoff();
    let side = field.side();
    let mut acc = 0.0;
    for (flat, c) in field.coeffs(comp).iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let mut rem = flat;
        let mut norm = 0i64;
        for axis in 0..d as usize {
            let stride = side.pow((d as usize - 1 - axis) as u32);
            let off = rem / stride;
            rem %= stride;
            let l = off as i64 - n_cut as i64;
            norm += l * l;
        }
        acc += (1.0 + norm as f64).powf(s) * c.norm_sqr();
    }
    debug_assert_eq!(box_len(d, n_cut), field.coeffs(comp).len());
    acc.sqrt()
}

/// H^s norm of an `m^d` grid function (exact for trigonometric polynomials
/// resolved by the grid).
pub fn h_s_norm_grid(d: u32, m: usize, values: &[Complex64], s: f64) -> f64 {
    let coeffs = grid_to_spectral(d, m, values);
    let mut acc = 0.0;
    for (flat, c) in coeffs.iter().enumerate() {
        let nsq = bin_norm_sq(d, m, flat);
        acc += (1.0 + nsq as f64).powf(s) * c.norm_sqr();
    }
    acc.sqrt()
}

/// Grid sup of `<grad>^s f`: multiplier in Fourier, sup of the real part on
/// the same grid.
pub fn sup_norm_grid(d: u32, m: usize, values: &[Complex64], s: f64) -> f64 {
    let mut coeffs = grid_to_spectral(d, m, values);
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let nsq = bin_norm_sq(d, m, flat);
        *c *= (1.0 + nsq as f64).powf(s / 2.0);
    }
    crate::grid::dft_passes(&mut coeffs, d, m, true);
    coeffs.iter().map(|v| v.re.abs()).fold(0.0, f64::max)
}

/// Convenience: H^s norm of a spectral field's component measured through
/// the grid route (used by tests as a cross-check).
pub fn h_s_norm_via_grid(field: &SpectralField, comp: usize, m: usize, s: f64) -> f64 {
    let vals = spectral_to_grid(field.d(), field.cutoff(), field.coeffs(comp), m);
    h_s_norm_grid(field.d(), m, &vals, s)
}
