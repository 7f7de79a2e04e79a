use num::{One, Zero};

use super::{RVector, Rational};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Sparse row used during elimination: `(column, value)` sorted by column,
/// no explicit zeros.
type SparseRow = Vec<(usize, Rational)>;

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[RVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.dim(), cols, "row {i} has the wrong length");
            m.entries[i * cols..(i + 1) * cols].clone_from_slice(row.coords());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> RVector {
        RVector::new(self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn mul_vec(&self, v: &RVector) -> RVector {
        assert_eq!(v.dim(), self.cols);
        (0..self.rows).map(|r| self.row(r).dot(v)).collect::<Vec<_>>().into()
    }

    pub fn rank(&self) -> usize {
        self.reduced().0.len()
    }

    /// Rank and a basis of the right kernel `{x : M x = 0}`.
    ///
    /// The basis has exactly `cols - rank` vectors. Each free column `j`
    /// contributes the vector with `x_j = 1` and zeros on the other free
    /// columns, so the basis is in reduced form and deterministic.
    pub fn rank_and_kernel(&self) -> (usize, Vec<RVector>) {
        let (pivots, reduced) = self.reduced();
        let rank = pivots.len();
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        let mut kernel = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                if let Ok(pos) = reduced[i].binary_search_by_key(&free, |(c, _)| *c) {
                    v[pc] = -reduced[i][pos].1.clone();
                }
            }
            kernel.push(RVector::new(v));
        }
        (rank, kernel)
    }

    /// Reduced row echelon form as sparse rows. Returns the pivot column of
    /// each surviving row, in increasing order, alongside the rows.
    fn reduced(&self) -> (Vec<usize>, Vec<SparseRow>) {
        let mut pending: Vec<SparseRow> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter_map(|c| {
                        let x = self.get(r, c);
                        (!x.is_zero()).then(|| (c, x.clone()))
                    })
                    .collect::<SparseRow>()
            })
            .filter(|row| !row.is_empty())
            .collect();
        let mut done: Vec<(usize, SparseRow)> = Vec::new();

        for col in 0..self.cols {
            // Pick the sparsest pending row with an entry in this column.
            let Some(best) = pending
                .iter()
                .enumerate()
                .filter(|(_, row)| row.first().is_some_and(|(c, _)| *c == col))
                .min_by_key(|(_, row)| row.len())
                .map(|(i, _)| i)
            else {
                continue;
            };
            let mut pivot_row = pending.swap_remove(best);
            let inv = pivot_row[0].1.recip();
            for (_, x) in pivot_row.iter_mut() {
                *x *= &inv;
            }
            for row in pending.iter_mut() {
                eliminate(row, &pivot_row, col);
            }
            pending.retain(|row| !row.is_empty());
            for (_, row) in done.iter_mut() {
                eliminate(row, &pivot_row, col);
            }
            done.push((col, pivot_row));
        }
        debug_assert!(pending.is_empty());
        done.into_iter().unzip()
    }
}

/// `row -= row[col] * pivot`, where `pivot[col] == 1`.
fn eliminate(row: &mut SparseRow, pivot: &[(usize, Rational)], col: usize) {
    let Ok(pos) = row.binary_search_by_key(&col, |(c, _)| *c) else {
        return;
    };
    let factor = row[pos].1.clone();
    let mut merged = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ca, a)), Some((cb, b))) if ca == cb => {
                let v = a - &factor * b;
                if !v.is_zero() {
                    merged.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, a)), Some((cb, _))) if ca < cb => {
                merged.push((*ca, a.clone()));
                i += 1;
            }
            (Some((ca, a)), None) => {
                merged.push((*ca, a.clone()));
                i += 1;
            }
            (_, Some((cb, b))) => {
                merged.push((*cb, -(&factor * b)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *row = merged;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn m(cols: usize, rows: &[&[i64]]) -> RMatrix {
        let rows: Vec<RVector> = rows.iter().map(|r| RVector::from_ints(r)).collect();
        RMatrix::from_rows(cols, &rows)
    }

    fn assert_kernel(mat: &RMatrix) {
        let (rank, kernel) = mat.rank_and_kernel();
        assert_eq!(rank + kernel.len(), mat.cols());
        for b in &kernel {
            assert!(mat.mul_vec(b).is_zero());
        }
        let basis = RMatrix::from_rows(mat.cols(), &kernel);
        assert_eq!(basis.rank(), kernel.len());
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let id = m(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(id.rank_and_kernel(), (2, vec![]));
    }

    #[test]
    fn single_row_kernel() {
        let row = m(3, &[&[1, 1, 1]]);
        let (rank, kernel) = row.rank_and_kernel();
        assert_eq!(rank, 1);
        assert_eq!(kernel.len(), 2);
        assert_kernel(&row);
    }

    #[test]
    fn empty_matrix() {
        let empty = RMatrix::zeros(0, 3);
        let (rank, kernel) = empty.rank_and_kernel();
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 3);
    }

    /// Decomposing system of the unit square (0,0),(1,0),(1,1),(0,1) with the
    /// four boundary edges. Unknown order: f(a), f(b), f(c), f(d) as (x, y)
    /// pairs, then one scalar per edge. Row-reducing by hand: each edge gives
    /// one equation pinning a coordinate pair and one defining its scalar, so
    /// the 8 rows are independent and the kernel has 12 - 8 = 4 dimensions.
    #[test]
    fn unit_square_decomposing_system() {
        // edge ab: f(a) - f(b) - l1 (a - b) = 0, a - b = (-1, 0)
        // edge bc: b - c = (0, -1); edge cd: c - d = (1, 0); edge da: d - a = (0, 1)
        let sq = m(
            12,
            &[
                &[1, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0],
                &[0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0],
                &[0, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0],
                &[0, 0, 0, 1, 0, -1, 0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0],
                &[0, 0, 0, 0, 0, 1, 0, -1, 0, 0, 0, 0],
                &[-1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
                &[0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1],
            ],
        );
        let (rank, kernel) = sq.rank_and_kernel();
        assert_eq!(rank, 8);
        assert_eq!(kernel.len(), 4);
        assert_kernel(&sq);
    }

    #[test]
    fn rational_entries() {
        let mut mat = RMatrix::zeros(2, 2);
        mat.set(0, 0, int(1).recip());
        mat.set(0, 1, int(3).recip());
        mat.set(1, 0, int(3));
        mat.set(1, 1, int(1));
        assert_eq!(mat.rank(), 1);
        assert_kernel(&mat);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_nullity(rows in 0usize..6, cols in 1usize..7, seed in proptest::collection::vec(-3i64..4, 42)) {
                let mut mat = RMatrix::zeros(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        mat.set(r, c, int(seed[r * cols + c]));
                    }
                }
                assert_kernel(&mat);
            }
        }
    }
}
