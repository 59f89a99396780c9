//! Two-phase primal simplex over exact rationals.
//!
//! Problems here are tiny (tens of variables), so we keep a dense tableau
//! and use Bland's rule, which guarantees termination without any
//! numerical tolerance.

use crate::rat::{rat_int, Rat};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { objective: Rat, solution: Vec<Rat> },
}

/// Maximize `objective . x` subject to `a_i . x = b_i` for each constraint
/// and `x >= 0` componentwise.
pub fn maximize(num_vars: usize, constraints: &[(Vec<Rat>, Rat)], objective: &[Rat]) -> LpOutcome {
    assert_eq!(objective.len(), num_vars);
    let m = constraints.len();
    let total = num_vars + m; // original variables + one artificial per row

    // tableau[i] = [coefficients ..., rhs], with rhs normalized nonnegative
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, (row, b)) in constraints.iter().enumerate() {
        assert_eq!(row.len(), num_vars);
        let flip = b.is_negative();
        let mut r: Vec<Rat> = Vec::with_capacity(total + 1);
        for c in row {
            r.push(if flip { -c.clone() } else { c.clone() });
        }
        for j in 0..m {
            r.push(if j == i { Rat::one() } else { Rat::zero() });
        }
        r.push(if flip { -b.clone() } else { b.clone() });
        tab.push(r);
    }
    let mut basis: Vec<usize> = (num_vars..total).collect();

    // Phase 1: maximize minus the sum of artificials.
    let mut cost1 = vec![Rat::zero(); total];
    for c in cost1.iter_mut().skip(num_vars) {
        *c = -Rat::one();
    }
    let obj1 = run(&mut tab, &mut basis, &cost1, total);
    if obj1 != Rat::zero() {
        return LpOutcome::Infeasible;
    }

    // Pivot remaining artificial variables out of the basis (or drop
    // redundant rows).
    let mut row = 0;
    while row < tab.len() {
        if basis[row] >= num_vars {
            match (0..num_vars).find(|&j| !tab[row][j].is_zero()) {
                Some(j) => pivot(&mut tab, &mut basis, row, j),
                None => {
                    tab.remove(row);
                    basis.remove(row);
                    continue;
                }
            }
        }
        row += 1;
    }

    // Phase 2 on the original objective (artificial columns stay but are
    // never eligible: their cost is pushed far negative).
    let mut cost2 = vec![Rat::zero(); total];
    cost2[..num_vars].clone_from_slice(objective);
    // Forbid artificials from re-entering.
    let penalty = {
        let mut p = rat_int(1);
        for c in objective {
            p += c.abs();
        }
        -(p * rat_int(1000))
    };
    for c in cost2.iter_mut().skip(num_vars) {
        *c = penalty.clone();
    }
    let mut feasible_basis = basis.clone();
    let objective_value = run(&mut tab, &mut feasible_basis, &cost2, total);
    if objective_value == unbounded_marker() {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rat::zero(); num_vars];
    for (i, &bv) in feasible_basis.iter().enumerate() {
        if bv < num_vars {
            solution[bv] = tab[i][total].clone();
        }
    }
    LpOutcome::Optimal {
        objective: objective_value,
        solution,
    }
}

fn unbounded_marker() -> Rat {
    // Sentinel distinguishable from any real optimum of our problems; every
    // LP we pose has |objective| < 10^9.
    rat_int(1_000_000_007) * rat_int(1_000_000_007)
}

/// Bland-rule simplex on an already-feasible basis. Returns the optimal
/// objective value (or the unbounded sentinel).
fn run(tab: &mut Vec<Vec<Rat>>, basis: &mut [usize], cost: &[Rat], total: usize) -> Rat {
    loop {
        // Reduced costs: cost[j] - sum_i cost[basis[i]] * tab[i][j].
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !tab[i][j].is_zero() && !cost[bv].is_zero() {
                    red -= cost[bv].clone() * tab[i][j].clone();
                }
            }
            if red.is_positive() {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let Some(j) = entering else {
            let mut obj = Rat::zero();
            for (i, &bv) in basis.iter().enumerate() {
                if !cost[bv].is_zero() {
                    obj += cost[bv].clone() * tab[i][total].clone();
                }
            }
            return obj;
        };

        // Ratio test, ties broken by smallest basis variable (Bland).
        let mut leaving: Option<(usize, Rat)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = tab[i][total].clone() / tab[i][j].clone();
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return unbounded_marker();
        };
        pivot(tab, basis, row, j);
    }
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= p.clone();
    }
    for i in 0..tab.len() {
        if i != row && !tab[i][col].is_zero() {
            let f = tab[i][col].clone();
            for j in 0..tab[i].len() {
                let sub = f.clone() * tab[row][j].clone();
                tab[i][j] -= sub;
            }
        }
    }
    basis[row] = col;
}
