//! Axis intercepts of the convex hull of nonnegative generator points.
//!
//! For generators `p_1, ..., p_k >= 0` and the origin, the largest `t` with
//! `t e_j` in the hull is attained by pure axis-`j` generators alone: any
//! convex combination with zero off-axis coordinates must put zero weight on
//! every generator with an off-axis coordinate. This reduces the LP to a
//! maximum over axis points, kept exact in rationals. The LP itself is
//! retained as a test oracle.

use crate::rational::Rat;
use num_traits::{Signed, Zero};

/// `kappa_j = max{t >= 0 : t e_j in Conv(points u {0} [u {kappa e_i}])}`
/// per axis. `extra_axis_kappa` switches to the variant whose generator set
/// additionally contains that multiple of every axis unit vector.
pub fn hull_intercepts(points: &[Vec<Rat>], n: usize, extra_axis_kappa: Option<&Rat>) -> Vec<Rat> {
    let mut kappa = vec![Rat::zero(); n];
    for p in points {
        assert_eq!(p.len(), n, "generator arity mismatch");
        let mut axis = None;
        let mut pure = true;
        for (j, x) in p.iter().enumerate() {
            assert!(!x.is_negative(), "generators must be nonnegative");
            if x.is_positive() {
                if axis.is_some() {
                    pure = false;
                    break;
                }
                axis = Some(j);
            }
        }
        if let (true, Some(j)) = (pure, axis) {
            if p[j] > kappa[j] {
                kappa[j] = p[j].clone();
            }
        }
    }
    if let Some(k) = extra_axis_kappa {
        assert!(!k.is_negative(), "axis generator must be nonnegative");
        for kj in kappa.iter_mut() {
            if k > kj {
                *kj = k.clone();
            }
        }
    }
    kappa
}
