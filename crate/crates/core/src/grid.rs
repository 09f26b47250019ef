//! FFT-friendly grid sizes and transforms between spectral boxes and
//! value grids on the unit torus, dimensions 1 through 3.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest 5-smooth integer >= `n`.
pub fn next_smooth(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2usize, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Signed frequency of DFT bin `idx` on an `m`-point grid.
pub fn frequency(idx: usize, m: usize) -> i64 {
    if idx <= m / 2 {
        idx as i64
    } else {
        idx as i64 - m as i64
    }
}

pub fn box_side(n_cut: u32) -> usize {
    2 * n_cut as usize + 1
}

pub fn box_len(d: u32, n_cut: u32) -> usize {
    box_side(n_cut).pow(d)
}

/// Row-major index of mode `l` in the `(2N+1)^d` coefficient box.
pub fn box_index(d: u32, n_cut: u32, l: &[i64]) -> usize {
    debug_assert_eq!(l.len(), d as usize);
    let side = box_side(n_cut);
    let n = n_cut as i64;
    let mut idx = 0usize;
    for &li in l {
        debug_assert!(li.abs() <= n);
        idx = idx * side + (li + n) as usize;
    }
    idx
}

/// In-place unnormalized DFT along every axis of a row-major `m^d` array.
pub fn dft_passes(data: &mut [Complex64], d: u32, m: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    let total = data.len();
    let mut scratch = vec![Complex64::default(); m];
    for axis in 0..d as usize {
        let stride = m.pow((d as usize - 1 - axis) as u32);
        let block = stride * m;
        let mut blk = 0;
        while blk < total {
            for off in 0..stride {
                let start = blk + off;
                for (j, s) in scratch.iter_mut().enumerate() {
                    *s = data[start + j * stride];
                }
                fft.process(&mut scratch);
                for (j, s) in scratch.iter().enumerate() {
                    data[start + j * stride] = *s;
                }
            }
            blk += block;
        }
    }
}

/// Evaluates `f(x_j) = sum_l c_l e^{2 pi i l . x_j}` on the `m^d` grid
/// `x_j = j/m` from a `(2N+1)^d` coefficient box.
pub fn spectral_to_grid(
    d: u32,
    n_cut: u32,
    box_coeffs: &[Complex64],
    m: usize,
) -> Vec<Complex64> {
    let side = box_side(n_cut);
    assert_eq!(box_coeffs.len(), box_len(d, n_cut));
    assert!(m >= side, "grid of {m} points cannot hold {side} modes");
    let mut data = vec![Complex64::default(); m.pow(d)];
    let n = n_cut as i64;
    for (flat, &c) in box_coeffs.iter().enumerate() {
        if c == Complex64::default() {
            continue;
        }
        let mut rem = flat;
        let mut idx = 0usize;
        for axis in 0..d as usize {
            let off = rem / side.pow((d as usize - 1 - axis) as u32);
            rem %= side.pow((d as usize - 1 - axis) as u32);
            let l = off as i64 - n;
            let wrapped = l.rem_euclid(m as i64) as usize;
            idx = idx * m + wrapped;
        }
        data[idx] = c;
    }
    dft_passes(&mut data, d, m, true);
    data
}

/// Fourier coefficients of an `m^d` grid function, normalized so that a pure
/// character `e^{2 pi i l . x}` yields a unit coefficient in bin `l`.
pub fn grid_to_spectral(d: u32, m: usize, values: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(values.len(), m.pow(d));
    let mut data = values.to_vec();
    dft_passes(&mut data, d, m, false);
    let scale = 1.0 / m.pow(d) as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// Squared Euclidean frequency of a flat bin index on the `m^d` grid.
pub fn bin_norm_sq(d: u32, m: usize, flat: usize) -> u64 {
    let mut rem = flat;
    let mut acc = 0u64;
    for axis in 0..d as usize {
        let stride = m.pow((d as usize - 1 - axis) as u32);
        let idx = rem / stride;
        rem %= stride;
        let f = frequency(idx, m);
        acc += (f * f) as u64;
    }
    acc
}
