//! Growth-exponent maps over the lower set: admissible constraint pairs,
//! the `b` map, and the `p` map that the normalizability criteria compare
//! against candidate exponent assignments `q`.

use crate::error::Result;
use crate::hull::hull_intercepts;
use crate::multi_index::MultiIndex;
use crate::params::{ModelParams, QMap};
use crate::polynomial::Interaction;
use crate::rational::{rat, rat_int, ExtRational, Rat};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintPair {
    pub eps: MultiIndex,
    pub eps_tilde: MultiIndex,
}

/// Per-axis constraint data: axes `i` with `beta_i = 0` carry the singleton
/// `{0}`; the rest enumerate admissible `(eps, eps~)` splittings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxisPairs {
    ZeroSingleton,
    Pairs(Vec<ConstraintPair>),
}

/// Admissible splittings per axis: for `i` with `beta_i != 0`, all
/// `(eps, eps~) >= 0` with `eps_j + eps~_j = beta_j` (`beta_i - 1` on the
/// pivot axis) satisfying
/// `((d-2a)/(2d)) sum eps_j + sum eps~_j / kappa_j <= 1/2`,
/// where a term with `kappa_j = 0` forces `eps~_j = 0`.
pub fn constraint_sets(beta: &MultiIndex, params: &ModelParams, kappa: &[Rat]) -> Vec<AxisPairs> {
    let n = beta.dim();
    assert_eq!(kappa.len(), n, "kappa arity mismatch");
    let weight = params.d_minus_2alpha() / rat_int(2 * params.d() as i64);
    let half = rat(1, 2);
    (0..n)
        .map(|i| {
            if beta.get(i) == 0 {
                return AxisPairs::ZeroSingleton;
            }
            let mut target = beta.parts().to_vec();
            target[i] -= 1;
            let target = MultiIndex::new(target);
            let mut pairs = Vec::new();
            'eps: for eps in target.box_below() {
                let tilde = target.sub(&eps);
                let mut lhs = Rat::zero();
                for j in 0..n {
                    if eps.get(j) > 0 {
                        lhs += &weight * rat_int(eps.get(j) as i64);
                    }
                    if tilde.get(j) > 0 {
                        if kappa[j].is_zero() {
                            continue 'eps;
                        }
                        lhs += rat_int(tilde.get(j) as i64) / &kappa[j];
                    }
                }
                if lhs <= half {
                    pairs.push(ConstraintPair {
                        eps,
                        eps_tilde: tilde,
                    });
                }
            }
            AxisPairs::Pairs(pairs)
        })
        .collect()
}

/// `(1 + sum eps_j)/2 + sum eps~_j / kappa_j` for an admissible pair.
pub fn pair_value(pair: &ConstraintPair, kappa: &[Rat]) -> Rat {
    let mut value = rat(1, 2);
    for j in 0..pair.eps.dim() {
        value += rat(pair.eps.get(j) as i64, 2);
        if pair.eps_tilde.get(j) > 0 {
            value += rat_int(pair.eps_tilde.get(j) as i64) / &kappa[j];
        }
    }
    value
}

/// `b(beta) = max_i min over the axis-i admissible pairs of the pair value`;
/// an axis with an empty admissible set contributes the +infinity sentinel.
/// The literal formula ranges over every axis; `support_axes_only` restricts
/// to axes with `beta_i != 0` (both variants collapse to the literal one on
/// all published examples).
pub fn b_of_beta(
    beta: &MultiIndex,
    params: &ModelParams,
    kappa: &[Rat],
    support_axes_only: bool,
) -> ExtRational {
    let sets = constraint_sets(beta, params, kappa);
    let mut best: Option<ExtRational> = None;
    for (i, axis) in sets.iter().enumerate() {
        if support_axes_only && beta.get(i) == 0 {
            continue;
        }
        let inner = match axis {
            AxisPairs::ZeroSingleton => ExtRational::finite(rat(1, 2)),
            AxisPairs::Pairs(pairs) => pairs
                .iter()
                .map(|p| ExtRational::finite(pair_value(p, kappa)))
                .min()
                .unwrap_or(ExtRational::PosInfinity),
        };
        best = Some(match best {
            None => inner,
            Some(b) => b.max(inner),
        });
    }
    best.unwrap_or(ExtRational::finite(rat(1, 2)))
}

/// Hull generators `{q(beta) beta : beta in A-}` as rational vectors.
pub fn scaled_lower_points(f: &Interaction, q: &QMap) -> Vec<Vec<Rat>> {
    let n = f.n();
    f.strict_lower_closure()
        .iter()
        .map(|beta| {
            let w = q.get(beta);
            (0..n)
                .map(|j| rat_int(beta.get(j) as i64) * w)
                .collect()
        })
        .collect()
}

/// Axis intercepts for `F, q`, optionally in the tilde variant with the
/// grand-canonical power `kappa` adjoined on every axis.
pub fn intercepts_for(f: &Interaction, q: &QMap, grand_kappa: Option<&Rat>) -> Vec<Rat> {
    hull_intercepts(&scaled_lower_points(f, q), f.n(), grand_kappa)
}

/// The map `p(beta) = 1 v max_{xi in A, xi > beta}
/// [2a - (d-2a)|xi-beta|] / [2a - (d-2a)|xi-beta| b(beta)]` over the lower
/// set, with the +infinity sentinel when a denominator is nonpositive. At
/// `alpha = d/2` the ratio is exactly 1 for every entry.
pub fn p_map(
    f: &Interaction,
    params: &ModelParams,
    q: &QMap,
    grand_kappa: Option<&Rat>,
) -> Result<BTreeMap<MultiIndex, ExtRational>> {
    let kappa = intercepts_for(f, q, grand_kappa);
    let lower = f.strict_lower_closure();
    let support = f.support();
    let dm2a = params.d_minus_2alpha();
    let two_alpha = rat_int(2) * params.alpha();
    let one = ExtRational::finite(rat_int(1));

    let mut out = BTreeMap::new();
    for beta in lower {
        let b = b_of_beta(&beta, params, &kappa, false);
        let mut p = one.clone();
        for xi in &support {
            if !beta.lt(xi) {
                continue;
            }
            if dm2a.is_zero() {
                p = p.max(one.clone());
                continue;
            }
            let dist = rat_int((xi.order() - beta.order()) as i64);
            let num = &two_alpha - &dm2a * &dist;
            let ratio = match b.as_finite() {
                None => ExtRational::PosInfinity,
                Some(bv) => {
                    let den = &two_alpha - &dm2a * &dist * bv;
                    if den.is_positive() {
                        ExtRational::finite(num / den)
                    } else {
                        ExtRational::PosInfinity
                    }
                }
            };
            p = p.max(ratio);
        }
        out.insert(beta, p);
    }
    Ok(out)
}
