//! Hand-solved linear programs pinning the exact simplex solver.

use gibbs_core::rational::{rat, rat_int, Rat};
use gibbs_core::simplex::{LpBuilder, LpOutcome};

fn assert_optimal(out: LpOutcome, value: Rat) -> Vec<Rat> {
    match out {
        LpOutcome::Optimal { value: v, solution } => {
            assert_eq!(v, value, "wrong optimum");
            solution
        }
        other => panic!("expected optimal, got {other:?}"),
    }
}

#[test]
fn equality_minimum_at_vertex() {
    // min x + y  s.t.  x + 2y = 2  ->  (0, 1), value 1
    let out = LpBuilder::minimize(vec![rat_int(1), rat_int(1)])
        .eq(vec![rat_int(1), rat_int(2)], rat_int(2))
        .solve()
        .unwrap();
    let sol = assert_optimal(out, rat_int(1));
    assert_eq!(sol, vec![rat_int(0), rat_int(1)]);
}

#[test]
fn bounded_maximum_over_box() {
    // max 3x + 2y  s.t.  x + y <= 4, x <= 2, y <= 3  ->  (2, 2), value 10
    let out = LpBuilder::maximize(vec![rat_int(3), rat_int(2)])
        .le(vec![rat_int(1), rat_int(1)], rat_int(4))
        .le(vec![rat_int(1), rat_int(0)], rat_int(2))
        .le(vec![rat_int(0), rat_int(1)], rat_int(3))
        .solve()
        .unwrap();
    let sol = assert_optimal(out, rat_int(10));
    assert_eq!(&sol[..2], &[rat_int(2), rat_int(2)]);
}

#[test]
fn detects_infeasible() {
    // x + y = -1 with x, y >= 0
    let out = LpBuilder::minimize(vec![rat_int(1), rat_int(1)])
        .eq(vec![rat_int(1), rat_int(1)], rat_int(-1))
        .solve()
        .unwrap();
    assert!(matches!(out, LpOutcome::Infeasible));
}

#[test]
fn detects_unbounded() {
    // min -x  s.t.  y <= 1
    let out = LpBuilder::minimize(vec![rat_int(-1), rat_int(0)])
        .le(vec![rat_int(0), rat_int(1)], rat_int(1))
        .solve()
        .unwrap();
    assert!(matches!(out, LpOutcome::Unbounded));
}

#[test]
fn survives_degenerate_pivoting() {
    // Beale's cycling example; the anti-cycling rule must reach -1/20.
    let out = LpBuilder::minimize(vec![rat(-3, 4), rat_int(150), rat(-1, 50), rat_int(6)])
        .le(
            vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
            rat_int(0),
        )
        .le(
            vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
            rat_int(0),
        )
        .le(vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)], rat_int(1))
        .solve()
        .unwrap();
    assert_optimal(out, rat(-1, 20));
}

#[test]
fn zero_objective_reports_feasibility() {
    let out = LpBuilder::minimize(vec![rat_int(0)])
        .eq(vec![rat_int(2)], rat_int(3))
        .solve()
        .unwrap();
    let sol = assert_optimal(out, rat_int(0));
    assert_eq!(sol[0], rat(3, 2));
}

#[test]
fn redundant_equalities_are_tolerated() {
    // Same hyperplane twice.
    let out = LpBuilder::minimize(vec![rat_int(1), rat_int(1)])
        .eq(vec![rat_int(1), rat_int(1)], rat_int(2))
        .eq(vec![rat_int(2), rat_int(2)], rat_int(4))
        .solve()
        .unwrap();
    assert_optimal(out, rat_int(2));
}
