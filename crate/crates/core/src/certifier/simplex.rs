//! Dense two-phase simplex with Bland's rule, generic over the scalar ring.
//!
//! Solves min c.x subject to A x = b, x >= 0. Problems here are tiny (at
//! most a few dozen rows and columns) but often degenerate, so Bland's
//! pivoting rule is used throughout to rule out cycling. Instantiated with
//! `f64` for fast verdicts and with `Rational` for exact certificates.

use crate::error::{QprError, Result};
use crate::scalar::LpScalar;

#[derive(Debug, Clone)]
pub enum LpResult<T> {
    Optimal {
        x: Vec<T>,
        objective: T,
    },
    /// Dual vector y with y.A <= 0 and y.b > 0, refuting A x = b, x >= 0.
    Infeasible {
        farkas: Vec<T>,
    },
    Unbounded,
}

struct Tableau<T> {
    /// rows[i][j] for j < n_cols, RHS at column n_cols; the objective row is
    /// stored separately.
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    /// Basic variable per row.
    basis: Vec<usize>,
    n_cols: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot_val = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / pivot_val.clone();
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            if factor.is_zero_val() && factor == T::lp_zero() {
                continue;
            }
            for (v, p) in r.iter_mut().zip(pivot_row.iter()) {
                *v = v.clone() - factor.clone() * p.clone();
            }
        }
        let factor = self.obj[col].clone();
        for (v, p) in self.obj.iter_mut().zip(pivot_row.iter()) {
            *v = v.clone() - factor.clone() * p.clone();
        }
        self.basis[row] = col;
    }

    /// Bland: entering column = lowest index with a strictly negative reduced
    /// cost; leaving row = lexicographic ratio test, ties broken by the
    /// lowest basic-variable index. Returns Ok(true) when optimal.
    fn run(&mut self, active_cols: usize, max_iters: usize) -> Result<bool> {
        for _ in 0..max_iters {
            let entering = (0..active_cols).find(|&j| self.obj[j].is_negative_val());
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive_val() {
                    continue;
                }
                let ratio = self.rows[i][self.n_cols].clone() / self.rows[i][col].clone();
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < best
                            || (!(ratio.clone() - best.clone()).is_positive_val()
                                && !(best.clone() - ratio.clone()).is_positive_val()
                                && self.basis[i] < self.basis[best_i])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best_i, best))
                        }
                    }
                };
            }
            let Some((row, _)) = leaving else {
                return Ok(false); // unbounded direction
            };
            self.pivot(row, col);
        }
        Err(QprError::Numerical(
            "simplex iteration limit exceeded".into(),
        ))
    }
}

/// Solves min c.x s.t. A x = b, x >= 0.
pub fn solve_lp<T: LpScalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<LpResult<T>> {
    let m = a.len();
    if b.len() != m {
        return Err(QprError::DimensionMismatch("rows of A vs b".into()));
    }
    let n = c.len();
    for row in a {
        if row.len() != n {
            return Err(QprError::DimensionMismatch("columns of A vs c".into()));
        }
    }

    // Normalize b >= 0, remembering flipped rows for the Farkas vector.
    let mut flipped = vec![false; m];
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative_val() || b[i] < T::lp_zero();
        flipped[i] = flip;
        let mut row: Vec<T> = a[i]
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        // Artificial columns n..n+m.
        for k in 0..m {
            row.push(if k == i { T::lp_one() } else { T::lp_zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let n_cols = n + m;

    // Phase 1: minimize the artificial sum. Reduced costs with the
    // artificial basis: obj_j = -sum_i A_ij, objective value sum_i b_i.
    let mut obj = vec![T::lp_zero(); n_cols + 1];
    for j in 0..n {
        let mut s = T::lp_zero();
        for row in rows.iter() {
            s = s + row[j].clone();
        }
        obj[j] = -s;
    }
    let mut z = T::lp_zero();
    for row in rows.iter() {
        z = z + row[n_cols].clone();
    }
    obj[n_cols] = -z;

    let mut tab = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        n_cols,
    };
    let max_iters = 2000 * (n_cols + 1);
    if !tab.run(n_cols, max_iters)? {
        return Err(QprError::Numerical(
            "phase-1 objective unbounded (cannot happen for a valid tableau)".into(),
        ));
    }

    let phase1_value = -tab.obj[n_cols].clone();
    if phase1_value.is_positive_val() {
        // Infeasible: read y_i = 1 - reduced cost of artificial i, undoing
        // the row flips.
        let farkas: Vec<T> = (0..m)
            .map(|i| {
                let y = T::lp_one() - tab.obj[n + i].clone();
                if flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return Ok(LpResult::Infeasible { farkas });
    }

    // Drive basic artificials out; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            let pivot_col = (0..n)
                .find(|&j| tab.rows[i][j].is_positive_val() || tab.rows[i][j].is_negative_val());
            match pivot_col {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase 2 on the original columns with the real objective.
    let mut obj = vec![T::lp_zero(); n_cols + 1];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = cj.clone();
    }
    let mut z = T::lp_zero();
    for (i, &bi) in tab.basis.iter().enumerate() {
        let cb = if bi < n { c[bi].clone() } else { T::lp_zero() };
        z = z + cb.clone() * tab.rows[i][n_cols].clone();
        for (oj, row_j) in obj.iter_mut().zip(tab.rows[i].iter()).take(n) {
            *oj = oj.clone() - cb.clone() * row_j.clone();
        }
    }
    obj[n_cols] = -z;
    tab.obj = obj;

    if !tab.run(n, max_iters)? {
        return Ok(LpResult::Unbounded);
    }

    let mut x = vec![T::lp_zero(); n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            x[bi] = tab.rows[i][n_cols].clone();
        }
    }
    let objective = -tab.obj[n_cols].clone();
    Ok(LpResult::Optimal { x, objective })
}

/// Feasibility of A x = b, x >= 0 (phase 1 only, zero objective).
pub fn solve_feasibility<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Result<LpResult<T>> {
    let c = vec![T::lp_zero(); a.first().map_or(0, Vec::len)];
    solve_lp(a, b, &c)
}

/// Residual checks for a claimed witness: max |A x - b| for feasible,
/// (max y.A component, y.b) for a Farkas vector.
pub fn feasible_residual<T: LpScalar>(a: &[Vec<T>], b: &[T], x: &[T]) -> T {
    let mut worst = T::lp_zero();
    for (row, bi) in a.iter().zip(b.iter()) {
        let mut acc = -bi.clone();
        for (v, xi) in row.iter().zip(x.iter()) {
            acc = acc + v.clone() * xi.clone();
        }
        if worst < acc.abs_val() {
            worst = acc.abs_val();
        }
    }
    worst
}

pub fn farkas_products<T: LpScalar>(a: &[Vec<T>], b: &[T], y: &[T]) -> (T, T) {
    let n = a.first().map_or(0, Vec::len);
    let mut max_col = -T::lp_one();
    for j in 0..n {
        let mut acc = T::lp_zero();
        for (row, yi) in a.iter().zip(y.iter()) {
            acc = acc + row[j].clone() * yi.clone();
        }
        if max_col < acc {
            max_col = acc;
        }
    }
    let mut yb = T::lp_zero();
    for (bi, yi) in b.iter().zip(y.iter()) {
        yb = yb + bi.clone() * yi.clone();
    }
    (max_col, yb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use num_traits::Zero;

    #[test]
    fn solves_a_small_feasible_system() {
        // x1 + x2 = 1, x1 - x2 = 0 -> x = (1/2, 1/2).
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = vec![1.0, 0.0];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Optimal { x, .. } => {
                assert!((x[0] - 0.5).abs() < 1e-12);
                assert!((x[1] - 0.5).abs() < 1e-12);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility_with_valid_farkas() {
        // x1 + x2 = 1, x1 + x2 = 2 is contradictory.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = vec![1.0, 2.0];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Infeasible { farkas } => {
                let (max_col, yb) = farkas_products(&a, &b, &farkas);
                assert!(max_col <= 1e-9, "y.A = {max_col}");
                assert!(yb > 1e-9, "y.b = {yb}");
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn exact_farkas_verifies_exactly() {
        // x1 = 1, x1 = 2 in rationals; also negative-rhs handling: -x1 = 1.
        let a = vec![vec![ratio(1, 1)], vec![ratio(1, 1)]];
        let b = vec![ratio(1, 1), ratio(2, 1)];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Infeasible { farkas } => {
                let (max_col, yb) = farkas_products(&a, &b, &farkas);
                assert!(max_col <= Rational::zero());
                assert!(yb > Rational::zero());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }

        let a = vec![vec![ratio(-1, 1)]];
        let b = vec![ratio(1, 1)];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Infeasible { farkas } => {
                let (max_col, yb) = farkas_products(&a, &b, &farkas);
                assert!(max_col <= Rational::zero());
                assert!(yb > Rational::zero());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn optimizes_with_phase_two() {
        // min -x1 s.t. x1 + x2 = 1: optimum x1 = 1.
        let a = vec![vec![1.0, 1.0]];
        let b = vec![1.0];
        let c = vec![-1.0, 0.0];
        match solve_lp(&a, &b, &c).unwrap() {
            LpResult::Optimal { x, objective } => {
                assert!((x[0] - 1.0).abs() < 1e-12);
                assert!((objective + 1.0).abs() < 1e-12);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn reports_unbounded_objectives() {
        // min -x1 s.t. x1 - x2 = 0: ray x1 = x2 -> infinity.
        let a = vec![vec![1.0, -1.0]];
        let b = vec![0.0];
        let c = vec![-1.0, 0.0];
        assert!(matches!(solve_lp(&a, &b, &c).unwrap(), LpResult::Unbounded));
    }

    #[test]
    fn handles_redundant_rows() {
        // Duplicate consistent rows must not confuse the basis.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 0.0]];
        let b = vec![1.0, 1.0, 0.25];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Optimal { x, .. } => {
                assert!((x[0] - 0.25).abs() < 1e-12);
                assert!((x[1] - 0.75).abs() < 1e-12);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_degenerate_system_terminates() {
        // Highly degenerate: many redundant equalities around a single point.
        let a = vec![
            vec![ratio(1, 1), ratio(1, 1), ratio(0, 1)],
            vec![ratio(1, 1), ratio(1, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(1, 1)],
            vec![ratio(1, 1), ratio(0, 1), ratio(-1, 1)],
        ];
        let b = vec![ratio(1, 1), ratio(1, 1), ratio(1, 1), ratio(0, 1)];
        match solve_feasibility(&a, &b).unwrap() {
            LpResult::Optimal { x, .. } => {
                let res = feasible_residual(&a, &b, &x);
                assert!(res.is_zero(), "residual {res}");
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
