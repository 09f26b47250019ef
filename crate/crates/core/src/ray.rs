//! Exact leading-order analysis along monomial rays
//! `a_r(x) = (a_1 x^{r_1}, ..., a_n x^{r_n})`, `x -> +infinity`.
//!
//! The analyzed expression is `F(a_r(x))` plus optional penalty, mass, and
//! taming-power terms, substituted exactly: an F term contributes
//! `c_beta a^beta` at exponent `beta.r`, the mass term `-m a_i^2` at `2 r_i`
//! per support axis, a linear penalty `C |a^beta|` at `beta.r`. Weights that
//! are irrational powers of the amplitude are replaced by rational one-sided
//! bounds, understating positive contributions and overstating negative
//! ones: a q-power penalty enters with `min(|a^beta|^floor(q),
//! |a^beta|^ceil(q))` at `q(beta)(beta.r)`, the taming power with
//! `-C max(S^floor(kappa/2), S^ceil(kappa/2))` at `kappa max r_i`, where
//! `S = sum a_i^2`. A positive leading coefficient therefore always
//! witnesses true divergence. Coefficients at equal exponents aggregate
//! exactly.

use crate::error::{GibbsError, Result};
use crate::multi_index::MultiIndex;
use crate::params::QMap;
use crate::polynomial::Interaction;
use crate::rational::{rat, rat_int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySpec {
    a: Vec<Rat>,
    r: Vec<u32>,
}

impl RaySpec {
    pub fn new(a: Vec<Rat>, r: Vec<u32>) -> Result<Self> {
        if a.len() != r.len() {
            return Err(GibbsError::InvalidConfig(
                "ray amplitude and power vectors must have equal arity".into(),
            ));
        }
        if a.iter().all(|x| x.is_zero()) {
            return Err(GibbsError::InvalidConfig("ray amplitude is zero".into()));
        }
        if a.iter().zip(&r).all(|(ai, &ri)| ai.is_zero() || ri == 0) {
            return Err(GibbsError::InvalidConfig(
                "ray powers vanish on the amplitude support".into(),
            ));
        }
        Ok(RaySpec { a, r })
    }

    pub fn a(&self) -> &[Rat] {
        &self.a
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `a^beta`, zero when the exponent touches a zero amplitude.
    pub fn amplitude_power(&self, beta: &MultiIndex) -> Rat {
        let mut acc = rat_int(1);
        for i in 0..self.a.len() {
            for _ in 0..beta.get(i) {
                if self.a[i].is_zero() {
                    return Rat::zero();
                }
                acc *= &self.a[i];
            }
        }
        acc
    }

    /// `max r_i` over the support of `a` (positive by construction).
    pub fn max_power_on_support(&self) -> u32 {
        self.a
            .iter()
            .zip(&self.r)
            .filter(|(ai, _)| !ai.is_zero())
            .map(|(_, &ri)| ri)
            .max()
            .unwrap_or(0)
    }
}

/// Penalty family adjoined to `F` along the ray, indexed by the lower set.
#[derive(Debug, Clone)]
pub enum Penalties<'a> {
    None,
    /// `sum_{beta in A-} |x^beta|^{q(beta)}`.
    QPowers(&'a QMap),
    /// `C sum_{beta in A-} |x^beta|`.
    Linear { c: Rat },
}

#[derive(Debug, Clone)]
pub struct RayExpr<'a> {
    pub f: &'a Interaction,
    pub penalties: Penalties<'a>,
    /// `m` of the `-m|x|^2` term.
    pub mass: Option<Rat>,
    /// `(kappa, C)` of the `-C|x|^kappa` term.
    pub power: Option<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayAnalysis {
    pub leading_exponent: Rat,
    pub leading_coefficient: Rat,
    /// Largest penalty exponent contributing along the ray, when penalties
    /// are present.
    pub penalty_exponent: Option<Rat>,
    pub diverges: bool,
}

pub fn ray_leading(expr: &RayExpr, ray: &RaySpec) -> Result<RayAnalysis> {
    if ray.dim() != expr.f.n() {
        return Err(GibbsError::InvalidConfig(format!(
            "ray arity {} does not match interaction arity {}",
            ray.dim(),
            expr.f.n()
        )));
    }
    let mut agg: BTreeMap<Rat, Rat> = BTreeMap::new();
    let mut add = |exponent: Rat, weight: Rat| {
        let slot = agg.entry(exponent).or_insert_with(Rat::zero);
        *slot += weight;
    };

    for (beta, c) in expr.f.terms() {
        let w = ray.amplitude_power(beta);
        if w.is_zero() {
            continue;
        }
        add(Rat::from(num_bigint::BigInt::from(beta.dot_u32(ray.r()))), c * w);
    }

    let mut penalty_exponent: Option<Rat> = None;
    let penalty = |exponent: Rat, weight: Rat, tracker: &mut Option<Rat>| {
        *tracker = Some(match tracker.take() {
            None => exponent.clone(),
            Some(prev) => prev.max(exponent.clone()),
        });
        (exponent, weight)
    };
    match &expr.penalties {
        Penalties::None => {}
        Penalties::QPowers(q) => {
            for beta in expr.f.strict_lower_closure() {
                let base = ray.amplitude_power(&beta).abs();
                if base.is_zero() {
                    continue;
                }
                let qb = q.get(&beta);
                let exp = qb * rat_int(beta.dot_u32(ray.r()) as i64);
                let (lo, _) = int_pow_bracket(&base, qb);
                let (e, w) = penalty(exp, lo, &mut penalty_exponent);
                add(e, w);
            }
        }
        Penalties::Linear { c } => {
            for beta in expr.f.strict_lower_closure() {
                let base = ray.amplitude_power(&beta).abs();
                if base.is_zero() {
                    continue;
                }
                let exp = rat_int(beta.dot_u32(ray.r()) as i64);
                let (e, w) = penalty(exp, c * base, &mut penalty_exponent);
                add(e, w);
            }
        }
    }

    if let Some(m) = &expr.mass {
        for i in 0..ray.dim() {
            if !ray.a[i].is_zero() {
                add(rat_int(2 * ray.r[i] as i64), -(m * &ray.a[i] * &ray.a[i]));
            }
        }
    }
    if let Some((kappa, c)) = &expr.power {
        let top = rat_int(ray.max_power_on_support() as i64);
        let s: Rat = ray
            .a
            .iter()
            .filter(|ai| !ai.is_zero())
            .map(|ai| ai.clone() * ai)
            .sum();
        let (_, hi) = int_pow_bracket(&s, &(kappa / rat_int(2)));
        add(kappa * &top, -(c * hi));
    }

    let leading = agg
        .into_iter()
        .rev()
        .find(|(_, w)| !w.is_zero());
    let (leading_exponent, leading_coefficient) = match leading {
        Some((e, w)) => (e, w),
        None => (Rat::zero(), Rat::zero()),
    };
    let diverges = leading_exponent.is_positive() && leading_coefficient.is_positive();
    Ok(RayAnalysis {
        leading_exponent,
        leading_coefficient,
        penalty_exponent,
        diverges,
    })
}

/// `(min, max)` of `base^floor(e)` and `base^ceil(e)`, bracketing `base^e`
/// for positive `base` and nonnegative `e`.
fn int_pow_bracket(base: &Rat, e: &Rat) -> (Rat, Rat) {
    fn pow_u(base: &Rat, k: &BigInt) -> Rat {
        let k = k.to_u32().expect("bracket exponent out of range");
        let mut acc = Rat::one();
        for _ in 0..k {
            acc *= base;
        }
        acc
    }
    let lo = pow_u(base, &e.floor().to_integer());
    let hi = pow_u(base, &e.ceil().to_integer());
    if lo <= hi {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// Finite family of rays scanned by the divergence checks: every sign
/// pattern scaled by each magnitude, with powers ranging over a box.
#[derive(Debug, Clone)]
pub struct SearchBox {
    magnitudes: Vec<Rat>,
    r_max: u32,
}

impl SearchBox {
    pub fn new(magnitudes: Vec<Rat>, r_max: u32) -> Result<Self> {
        if magnitudes.is_empty() || magnitudes.iter().any(|m| !m.is_positive()) {
            return Err(GibbsError::InvalidConfig(
                "search magnitudes must be positive and nonempty".into(),
            ));
        }
        if r_max == 0 {
            return Err(GibbsError::InvalidConfig("search r_max must be positive".into()));
        }
        Ok(SearchBox { magnitudes, r_max })
    }

    pub fn default_box() -> Self {
        SearchBox {
            magnitudes: vec![rat(1, 2), rat_int(1), rat_int(2)],
            r_max: 4,
        }
    }

    /// All rays of the box in dimension `n`: `a = mu * s` for sign vectors
    /// `s != 0` and magnitudes `mu`, `r` ranging over `{0..r_max}` on the
    /// support of `a` (zero elsewhere), skipping rays whose powers vanish
    /// on the whole support.
    pub fn rays(&self, n: usize) -> Vec<RaySpec> {
        assert!(n >= 1, "dimension must be positive");
        let mut out = Vec::new();
        let mut sign = vec![0i32; n];
        loop {
            if sign.iter().any(|&s| s != 0) {
                let support: Vec<usize> =
                    (0..n).filter(|&i| sign[i] != 0).collect();
                for mu in &self.magnitudes {
                    let a: Vec<Rat> = sign
                        .iter()
                        .map(|&s| mu.clone() * rat_int(s as i64))
                        .collect();
                    let mut rs = vec![0u32; support.len()];
                    loop {
                        if rs.iter().any(|&ri| ri > 0) {
                            let mut r = vec![0u32; n];
                            for (k, &i) in support.iter().enumerate() {
                                r[i] = rs[k];
                            }
                            out.push(RaySpec::new(a.clone(), r).unwrap());
                        }
                        let mut k = 0;
                        loop {
                            if k == rs.len() {
                                break;
                            }
                            if rs[k] < self.r_max {
                                rs[k] += 1;
                                break;
                            }
                            rs[k] = 0;
                            k += 1;
                        }
                        if k == rs.len() {
                            break;
                        }
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if sign[i] == 0 {
                    sign[i] = 1;
                    break;
                }
                if sign[i] == 1 {
                    sign[i] = -1;
                    break;
                }
                sign[i] = 0;
                i += 1;
            }
        }
    }
}
