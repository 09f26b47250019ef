//! Renormalization constant `sigma_{alpha,N} = sum_{|l| <= N} (1+|l|^2)^{-alpha}`
//! over the Euclidean lattice ball in `Z^d`.

use crate::params::ModelParams;

/// Neumaier compensated accumulator.
#[derive(Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// `(1 + |l|^2)^{-alpha}` for a single mode.
pub fn mode_weight(params: &ModelParams, norm_sq: u64) -> f64 {
    (1.0 + norm_sq as f64).powf(-params.alpha_f64())
}

pub fn sigma_alpha_n(params: &ModelParams, n_cut: u32) -> f64 {
    sigma_sum(params.d(), params.alpha_f64(), n_cut)
}

/// The raw ball sum, usable outside the renormalizable-regime gate.
pub fn sigma_sum(d: u32, alpha: f64, n_cut: u32) -> f64 {
    assert!((1..=3).contains(&d), "dimension {d} outside 1..=3");
    let w = |s: i64| (1.0 + s as f64).powf(-alpha);
    let n = n_cut as i64;
    let r2 = n * n;
    let mut acc = Kahan::default();
    match d {
        1 => {
            for l in -n..=n {
                acc.add(w(l * l));
            }
        }
        2 => {
            for l1 in -n..=n {
                for l2 in -n..=n {
                    let s = l1 * l1 + l2 * l2;
                    if s <= r2 {
                        acc.add(w(s));
                    }
                }
            }
        }
        _ => {
            for l1 in -n..=n {
                for l2 in -n..=n {
                    let s12 = l1 * l1 + l2 * l2;
                    if s12 > r2 {
                        continue;
                    }
                    let rest = ((r2 - s12) as f64).sqrt() as i64;
                    for l3 in -rest..=rest {
                        let s = s12 + l3 * l3;
                        if s <= r2 {
                            acc.add(w(s));
                        }
                    }
                }
            }
        }
    }
    acc.value()
}
