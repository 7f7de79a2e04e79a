use num::{Signed, Zero};

use super::{int, RVector, Rational};
use crate::Error;

/// Decides whether `p` is a convex combination of `points`.
///
/// Solves the phase-one problem of the system `sum mu_i q_i = p`,
/// `sum mu_i = 1`, `mu >= 0` with an exact tableau simplex and Bland's
/// smallest-index rule, so it terminates on degenerate input.
pub fn point_in_hull(p: &RVector, points: &[RVector]) -> Result<bool, Error> {
    if points.is_empty() {
        return Ok(false);
    }
    let d = p.dim();
    if let Some(q) = points.iter().find(|q| q.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: q.dim(),
        });
    }
    let mut lp = PhaseOne::new(p, points);
    lp.solve();
    Ok(lp.objective().is_zero())
}

struct PhaseOne {
    /// `m` constraint rows of width `n + m + 1`; the last column is the rhs.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, same width as a row; last entry is minus the objective.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl PhaseOne {
    fn new(p: &RVector, points: &[RVector]) -> Self {
        let n = points.len();
        let d = p.dim();
        let m = d + 1;
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for r in 0..m {
            let mut row = vec![Rational::zero(); width];
            for (j, q) in points.iter().enumerate() {
                row[j] = if r < d { q[r].clone() } else { int(1) };
            }
            row[width - 1] = if r < d { p[r].clone() } else { int(1) };
            if row[width - 1].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n + r] = int(1);
            rows.push(row);
        }
        // Phase-one cost: minimise the sum of artificials, priced out
        // against the starting basis.
        let mut cost = vec![Rational::zero(); width];
        for row in &rows {
            for j in 0..n {
                cost[j] -= &row[j];
            }
            cost[width - 1] -= &row[width - 1];
        }
        Self {
            rows,
            cost,
            basis: (n..n + m).collect(),
            width,
        }
    }

    fn objective(&self) -> Rational {
        -self.cost[self.width - 1].clone()
    }

    fn solve(&mut self) {
        let rhs = self.width - 1;
        // Bland: lowest-index improving column.
        while let Some(enter) = (0..rhs).find(|&j| self.cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            // The phase-one objective is bounded below by zero, so some row
            // always limits the step.
            let (pivot, _) = leave.expect("phase-one problem is bounded");
            self.pivot(pivot, enter);
        }
    }

    fn pivot(&mut self, pivot: usize, enter: usize) {
        let inv = self.rows[pivot][enter].recip();
        for x in self.rows[pivot].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[pivot].clone();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pivot {
                reduce(row, &pivot_row, enter);
            }
        }
        reduce(&mut self.cost, &pivot_row, enter);
        self.basis[pivot] = enter;
    }
}

fn reduce(row: &mut [Rational], pivot_row: &[Rational], col: usize) {
    if row[col].is_zero() {
        return;
    }
    let factor = row[col].clone();
    for (x, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *x -= &factor * p;
        }
    }
}
