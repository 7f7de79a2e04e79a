use std::collections::BTreeSet;

use num::{One, Zero};

use crate::linalg::{self, normalize_leading, RVector, Rational};
use crate::Error;

/// Upper bound on `C(n, d)` for brute-force facet enumeration.
pub const FACET_GUARD: u128 = 10_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Enumerates the facets of `conv(vertices)` by brute force over
/// `d`-subsets.
///
/// A subset whose affine hull is a hyperplane with every vertex on one
/// closed side contributes the full set of vertices on that hyperplane.
/// Subsets are grown depth-first with an incrementally reduced basis of
/// difference vectors, so affinely dependent prefixes are pruned early.
/// Output: each facet sorted, facets sorted lexicographically.
pub fn enumerate_facets(dim: usize, vertices: &[RVector]) -> Result<Vec<Vec<usize>>, Error> {
    let n = vertices.len();
    if dim == 0 {
        return Err(Error::Degenerate("dimension 0".into()));
    }
    if let Some(bad) = vertices.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if vertices[i] == vertices[j] {
                return Err(Error::Degenerate(format!("vertices {i} and {j} coincide")));
            }
        }
    }
    if n <= dim || linalg::affine_rank(vertices)? != Some(dim) {
        return Err(Error::Degenerate(format!(
            "{n} points do not span dimension {dim}"
        )));
    }
    let subsets = binomial(n, dim);
    if subsets > FACET_GUARD {
        return Err(Error::GuardExceeded(format!(
            "C({n}, {dim}) = {subsets} exceeds {FACET_GUARD}"
        )));
    }

    let mut search = Search {
        vertices,
        dim,
        found: BTreeSet::new(),
        membership: Vec::new(),
        chosen: Vec::with_capacity(dim),
    };
    for first in 0..n {
        search.chosen.push(first);
        search.grow(first + 1, &Echelon::default());
        search.chosen.pop();
    }
    Ok(search.found.into_iter().collect())
}

struct Search<'a> {
    vertices: &'a [RVector],
    dim: usize,
    found: BTreeSet<Vec<usize>>,
    membership: Vec<Vec<bool>>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn grow(&mut self, next: usize, basis: &Echelon) {
        if self.chosen.len() == self.dim {
            self.leaf(basis);
            return;
        }
        let n = self.vertices.len();
        let remaining = self.dim - self.chosen.len();
        for i in next..=n - remaining {
            let diff = &self.vertices[i] - &self.vertices[self.chosen[0]];
            let Some(extended) = basis.with(diff) else {
                continue;
            };
            self.chosen.push(i);
            self.grow(i + 1, &extended);
            self.chosen.pop();
        }
    }

    fn leaf(&mut self, basis: &Echelon) {
        if self
            .membership
            .iter()
            .any(|m| self.chosen.iter().all(|&i| m[i]))
        {
            return;
        }
        let normal = normalize_leading(basis.normal(self.dim));
        let offset = normal.dot(&self.vertices[self.chosen[0]]);
        let mut above = false;
        let mut below = false;
        let mut on = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            match linalg::sign(&(normal.dot(v) - &offset)) {
                0 => on.push(i),
                1 => above = true,
                _ => below = true,
            }
            if above && below {
                return;
            }
        }
        let mut member = vec![false; self.vertices.len()];
        for &i in &on {
            member[i] = true;
        }
        self.membership.push(member);
        self.found.insert(on);
    }
}

/// Row-reduced basis of difference vectors: `rows[k]` has a leading one in
/// column `pivots[k]` and zeros in every other pivot column.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<RVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// The basis extended by `v`, or `None` if `v` is already in its span.
    fn with(&self, v: RVector) -> Option<Echelon> {
        let mut v = v.into_coords();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let k = v[p].clone();
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    *x -= &k * r;
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].recip();
        let v: Vec<Rational> = v.iter().map(|x| x * &inv).collect();
        let mut out = self.clone();
        for row in out.rows.iter_mut() {
            if !row[p].is_zero() {
                let k = row[p].clone();
                let reduced: Vec<Rational> = row.iter().zip(&v).map(|(r, x)| r - &k * x).collect();
                *row = RVector::new(reduced);
            }
        }
        out.rows.push(RVector::new(v));
        out.pivots.push(p);
        Some(out)
    }

    /// Spanning vector of the orthogonal complement when the basis has
    /// `dim - 1` rows.
    fn normal(&self, dim: usize) -> RVector {
        debug_assert_eq!(self.rows.len() + 1, dim);
        let free = (0..dim)
            .find(|c| !self.pivots.contains(c))
            .expect("one free column");
        let mut x = vec![Rational::zero(); dim];
        x[free] = Rational::one();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            x[p] = -row[free].clone();
        }
        RVector::new(x)
    }
}
