//! Two-phase primal simplex over exact rationals.
//!
//! Sized for the small certificate programs this crate generates (tens of
//! variables); dense tableau, Bland's anti-cycling rule throughout.

use crate::error::{GibbsError, Result};
use crate::rational::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Minimum (or maximum, for [`LpBuilder::maximize`]) with one attaining
    /// point; `solution` covers the original variables only.
    Optimal { value: Rat, solution: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Incremental construction of `min/max c.x` over `x >= 0` with equality
/// and `<=` rows.
pub struct LpBuilder {
    objective: Vec<Rat>,
    maximize: bool,
    eqs: Vec<(Vec<Rat>, Rat)>,
    les: Vec<(Vec<Rat>, Rat)>,
}

impl LpBuilder {
    pub fn minimize(objective: Vec<Rat>) -> Self {
        LpBuilder {
            objective,
            maximize: false,
            eqs: Vec::new(),
            les: Vec::new(),
        }
    }

    pub fn maximize(objective: Vec<Rat>) -> Self {
        LpBuilder {
            objective,
            maximize: true,
            eqs: Vec::new(),
            les: Vec::new(),
        }
    }

    pub fn eq(mut self, row: Vec<Rat>, rhs: Rat) -> Self {
        assert_eq!(row.len(), self.objective.len(), "row arity mismatch");
        self.eqs.push((row, rhs));
        self
    }

    pub fn le(mut self, row: Vec<Rat>, rhs: Rat) -> Self {
        assert_eq!(row.len(), self.objective.len(), "row arity mismatch");
        self.les.push((row, rhs));
        self
    }

    pub fn solve(self) -> Result<LpOutcome> {
        let n_orig = self.objective.len();
        let n_slack = self.les.len();
        let n = n_orig + n_slack;

        let mut cost: Vec<Rat> = Vec::with_capacity(n);
        for c in &self.objective {
            cost.push(if self.maximize { -c.clone() } else { c.clone() });
        }
        cost.resize(n, Rat::zero());

        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for (row, b) in &self.eqs {
            let mut r = row.clone();
            r.resize(n, Rat::zero());
            rows.push(r);
            rhs.push(b.clone());
        }
        for (k, (row, b)) in self.les.iter().enumerate() {
            let mut r = row.clone();
            r.resize(n, Rat::zero());
            r[n_orig + k] = Rat::one();
            rows.push(r);
            rhs.push(b.clone());
        }

        match solve_standard(cost, rows, rhs)? {
            LpOutcome::Optimal { value, mut solution } => {
                solution.truncate(n_orig);
                let value = if self.maximize { -value } else { value };
                Ok(LpOutcome::Optimal { value, solution })
            }
            other => Ok(other),
        }
    }
}

/// `min c.x  s.t.  A x = b, x >= 0` by the two-phase method.
pub fn solve_standard(cost: Vec<Rat>, mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Result<LpOutcome> {
    let m = rows.len();
    let n = cost.len();
    for r in &rows {
        if r.len() != n {
            return Err(GibbsError::InvalidConfig("ragged constraint matrix".into()));
        }
    }
    for i in 0..m {
        if rhs[i].is_negative() {
            for a in rows[i].iter_mut() {
                *a = -a.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
    }

    // Phase 1 tableau: columns = original vars, then one artificial per row.
    let total = n + m;
    let mut t = Tableau::new(m, total);
    for i in 0..m {
        for j in 0..n {
            t.a[i][j] = rows[i][j].clone();
        }
        t.a[i][n + i] = Rat::one();
        t.b[i] = rhs[i].clone();
        t.basis[i] = n + i;
    }
    let mut phase1_cost = vec![Rat::zero(); total];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = Rat::one();
    }
    let status = t.optimize(&phase1_cost, n);
    debug_assert!(matches!(status, PivotStatus::Optimal), "phase 1 is bounded");
    if !t.objective_value(&phase1_cost).is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    t.evict_artificials(n);

    let mut phase2_cost = cost;
    phase2_cost.resize(total, Rat::zero());
    match t.optimize(&phase2_cost, n) {
        PivotStatus::Unbounded => Ok(LpOutcome::Unbounded),
        PivotStatus::Optimal => {
            let mut solution = vec![Rat::zero(); n];
            for i in 0..m {
                if t.basis[i] < n {
                    solution[t.basis[i]] = t.b[i].clone();
                }
            }
            Ok(LpOutcome::Optimal {
                value: t.objective_value(&phase2_cost),
                solution,
            })
        }
    }
}

enum PivotStatus {
    Optimal,
    Unbounded,
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(m: usize, cols: usize) -> Self {
        Tableau {
            a: vec![vec![Rat::zero(); cols]; m],
            b: vec![Rat::zero(); m],
            basis: vec![0; m],
        }
    }

    fn objective_value(&self, cost: &[Rat]) -> Rat {
        self.basis
            .iter()
            .zip(&self.b)
            .map(|(&j, bi)| &cost[j] * bi)
            .sum()
    }

    fn reduced_cost(&self, cost: &[Rat], j: usize) -> Rat {
        let mut r = cost[j].clone();
        for (i, &bj) in self.basis.iter().enumerate() {
            if !cost[bj].is_zero() {
                r -= &cost[bj] * &self.a[i][j];
            }
        }
        r
    }

    /// Bland pivots until optimal or unbounded. Columns `>= usable` are only
    /// allowed to leave the basis, never to enter (phase-2 artificials).
    fn optimize(&mut self, cost: &[Rat], usable_hint: usize) -> PivotStatus {
        let usable = if cost.iter().skip(usable_hint).any(|c| !c.is_zero()) {
            cost.len()
        } else {
            usable_hint
        };
        loop {
            let mut entering = None;
            for j in 0..usable {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(cost, j).is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return PivotStatus::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if self.a[i][j].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = leave else {
                return PivotStatus::Unbounded;
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for x in self.a[row].iter_mut() {
            *x /= &p;
        }
        self.b[row] /= &p;
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.a[i].len() {
                let delta = &f * &self.a[row][j];
                self.a[i][j] -= delta;
            }
            let delta = &f * &self.b[row];
            self.b[i] -= delta;
        }
        self.basis[row] = col;
    }

    /// After phase 1: pivot artificials out of the basis where possible;
    /// rows that stay artificial are redundant (all-zero) and harmless since
    /// their rhs is zero and artificials cannot re-enter.
    fn evict_artificials(&mut self, n: usize) {
        for i in 0..self.a.len() {
            if self.basis[i] < n {
                continue;
            }
            if let Some(j) = (0..n).find(|&j| !self.a[i][j].is_zero()) {
                self.pivot(i, j);
            }
        }
    }
}
