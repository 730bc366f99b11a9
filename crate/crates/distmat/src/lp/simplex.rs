//! Dense two-phase primal simplex over arbitrary-precision rationals.
//!
//! Bland's pivoting rule is used throughout, so the method terminates on
//! every input without perturbation. The solver returns a basic optimal
//! solution, i.e. a vertex of the feasible polyhedron. Problem sizes here
//! are desk-scale (tens of variables), so no sparsity or factorization
//! machinery is warranted.

use num_traits::Zero;

use crate::rational::Rat;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// Sparse constraint row: coefficients, relation, right-hand side.
pub type SimplexRow = (Vec<(usize, Rat)>, Relation, Rat);

/// `maximize c.x  s.t.  rows, x >= 0`; every row needs `rhs >= 0`.
#[derive(Debug, Clone)]
pub struct SimplexProblem {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub rows: Vec<SimplexRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
}

struct Tableau {
    /// rows x cols coefficient matrix kept in canonical (basis = identity) form
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
    num_vars: usize,
    artificial_start: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col].clone();
        debug_assert!(!factor.is_zero());
        for v in self.rows[row].iter_mut() {
            *v /= factor.clone();
        }
        self.rhs[row] /= factor;
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let scale = self.rows[r][col].clone();
            for c in 0..self.cols {
                let delta = scale.clone() * self.rows[row][c].clone();
                self.rows[r][c] -= delta;
            }
            let delta = scale * self.rhs[row].clone();
            self.rhs[r] -= delta;
        }
        self.basis[row] = col;
    }

    /// Maximizes `obj` (a full-length cost vector) from the current basis.
    /// Artificial columns never enter. Returns `Err` when unbounded.
    fn run(&mut self, obj: &[Rat]) -> Result<()> {
        // reduced costs consistent with the current basis
        let mut z: Vec<Rat> = obj.to_vec();
        z.resize(self.cols, Rat::zero());
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if z[b].is_zero() {
                continue;
            }
            let scale = z[b].clone();
            for (zc, rc) in z.iter_mut().zip(&self.rows[r]) {
                *zc -= scale.clone() * rc.clone();
            }
        }
        loop {
            // Bland: the lowest-index improving column enters
            let entering = (0..self.artificial_start).find(|&c| z[c] > Rat::zero());
            let Some(col) = entering else { return Ok(()) };
            // lowest basic index among the minimum ratios leaves
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col] <= Rat::zero() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / self.rows[r][col].clone();
                let replace = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if replace {
                    leave = Some((r, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::InvalidInput("linear program is unbounded".into()));
            };
            self.pivot(row, col);
            // refresh the reduced-cost row for the entering column
            let scale = z[col].clone();
            if !scale.is_zero() {
                for (zc, rc) in z.iter_mut().zip(&self.rows[row]) {
                    *zc -= scale.clone() * rc.clone();
                }
            }
        }
    }

    fn extract(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rhs[r].clone();
            }
        }
        x
    }
}

/// Solves the problem; the optimum, when it exists, is a vertex.
pub fn solve(problem: &SimplexProblem) -> Result<SimplexOutcome> {
    let m = problem.rows.len();
    let nv = problem.num_vars;
    let slacks = problem.rows.iter().filter(|r| r.1 == Relation::Le).count();
    let artificials = m - slacks;
    let cols = nv + slacks + artificials;
    let artificial_start = nv + slacks;

    let mut rows = vec![vec![Rat::zero(); cols]; m];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let mut next_slack = nv;
    let mut next_artificial = artificial_start;
    for (r, (coeffs, relation, b)) in problem.rows.iter().enumerate() {
        if *b < Rat::zero() {
            return Err(Error::InvalidInput(
                "rows must have nonnegative right-hand sides".into(),
            ));
        }
        for (var, coeff) in coeffs {
            debug_assert!(*var < nv);
            rows[r][*var] = coeff.clone();
        }
        match relation {
            Relation::Le => {
                rows[r][next_slack] = Rat::from_integer(1.into());
                basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Eq => {
                rows[r][next_artificial] = Rat::from_integer(1.into());
                basis[r] = next_artificial;
                next_artificial += 1;
            }
        }
        rhs.push(b.clone());
    }

    let mut tableau = Tableau {
        rows,
        rhs,
        basis,
        cols,
        num_vars: nv,
        artificial_start,
    };

    if artificials > 0 {
        // phase 1: maximize minus the artificial sum; allow artificials to
        // leave but never re-enter
        let mut phase1 = vec![Rat::zero(); cols];
        for slot in phase1.iter_mut().skip(artificial_start) {
            *slot = -Rat::from_integer(1.into());
        }
        // artificial columns start basic and may leave, but never re-enter
        tableau.run(&phase1)?;
        let infeasibility: Rat = tableau
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= artificial_start)
            .map(|(r, _)| tableau.rhs[r].clone())
            .fold(Rat::zero(), |acc, v| acc + v);
        if !infeasibility.is_zero() {
            return Ok(SimplexOutcome::Infeasible);
        }
    }

    let mut obj = problem.objective.clone();
    obj.resize(cols, Rat::zero());
    tableau.run(&obj)?;

    let x = tableau.extract();
    let value = problem
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c.clone() * v.clone())
        .fold(Rat::zero(), |acc, v| acc + v);
    Ok(SimplexOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn le(coeffs: &[(usize, i64)], b: i64) -> (Vec<(usize, Rat)>, Relation, Rat) {
        (
            coeffs.iter().map(|&(v, c)| (v, rat(c))).collect(),
            Relation::Le,
            rat(b),
        )
    }

    fn eq(coeffs: &[(usize, i64)], b: i64) -> (Vec<(usize, Rat)>, Relation, Rat) {
        (
            coeffs.iter().map(|&(v, c)| (v, rat(c))).collect(),
            Relation::Eq,
            rat(b),
        )
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18
        let p = SimplexProblem {
            num_vars: 2,
            objective: vec![rat(3), rat(5)],
            rows: vec![
                le(&[(0, 1)], 4),
                le(&[(1, 2)], 12),
                le(&[(0, 3), (1, 2)], 18),
            ],
        };
        match solve(&p).unwrap() {
            SimplexOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(36));
                assert_eq!(x, vec![rat(2), rat(6)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_rows_need_phase_one() {
        // max x + y st x + y = 1, x <= 1/2
        let p = SimplexProblem {
            num_vars: 2,
            objective: vec![rat(1), rat(1)],
            rows: vec![eq(&[(0, 1), (1, 1)], 1), le(&[(0, 1)], 0)],
        };
        match solve(&p).unwrap() {
            SimplexOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(1));
                assert_eq!(x, vec![rat(0), rat(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x = 1 and x = 0 cannot both hold
        let p = SimplexProblem {
            num_vars: 1,
            objective: vec![rat(1)],
            rows: vec![eq(&[(0, 1)], 1), le(&[(0, 1)], 0)],
        };
        assert_eq!(solve(&p).unwrap(), SimplexOutcome::Infeasible);
        // an equality row with empty support and rhs 1
        let p = SimplexProblem {
            num_vars: 1,
            objective: vec![rat(1)],
            rows: vec![eq(&[], 1)],
        };
        assert_eq!(solve(&p).unwrap(), SimplexOutcome::Infeasible);
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // max x + y st 2x + y <= 1, x + 2y <= 1 -> x = y = 1/3
        let p = SimplexProblem {
            num_vars: 2,
            objective: vec![rat(1), rat(1)],
            rows: vec![le(&[(0, 2), (1, 1)], 1), le(&[(0, 1), (1, 2)], 1)],
        };
        match solve(&p).unwrap() {
            SimplexOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(2, 3));
                assert_eq!(x, vec![ratio(1, 3), ratio(1, 3)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_is_an_error() {
        let p = SimplexProblem {
            num_vars: 1,
            objective: vec![rat(1)],
            rows: vec![],
        };
        assert!(solve(&p).is_err());
    }
}
