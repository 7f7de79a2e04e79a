//! Exact rational linear algebra: vectors, matrices, kernels, affine
//! independence, supporting hyperplanes and point-in-hull feasibility.
//!
//! Everything here works over arbitrary-precision rationals. Nothing in a
//! verdict path ever touches floating point.

mod matrix;
mod simplex;
mod vector;

pub use matrix::RMatrix;
pub use simplex::point_in_hull;
pub use vector::RVector;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::Error;

/// Exact rational scalar. Always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds a rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Renders a rational as `"p"` when integral, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn check_dims(points: &[RVector]) -> Result<usize, Error> {
    let Some(first) = points.first() else {
        return Ok(0);
    };
    let d = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    Ok(d)
}

/// Rank of the affine hull of `points` (its dimension). Empty input has
/// affine rank -1 by convention; this returns `None` in that case.
pub fn affine_rank(points: &[RVector]) -> Result<Option<usize>, Error> {
    check_dims(points)?;
    let Some((base, rest)) = points.split_first() else {
        return Ok(None);
    };
    let rows: Vec<RVector> = rest.iter().map(|p| p - base).collect();
    Ok(Some(RMatrix::from_rows(base.dim(), &rows).rank()))
}

/// True iff `p_2 - p_1, ..., p_k - p_1` are linearly independent.
pub fn affinely_independent(points: &[RVector]) -> Result<bool, Error> {
    let d = check_dims(points)?;
    if points.len() > d + 1 {
        return Ok(false);
    }
    Ok(match affine_rank(points)? {
        None => true,
        Some(r) => r + 1 == points.len(),
    })
}

/// Hyperplane `a·x = b` through exactly `d` points in dimension `d`.
///
/// Returns `None` when the points do not affinely span a hyperplane. The
/// normal is scaled so its first nonzero coordinate is `+1`, so the result
/// does not depend on the order of the input points.
pub fn hyperplane_through(points: &[RVector]) -> Result<Option<(RVector, Rational)>, Error> {
    let d = check_dims(points)?;
    if points.is_empty() || points.len() != d {
        return Err(Error::Precondition(format!(
            "hyperplane_through needs exactly d points, got {} in dimension {}",
            points.len(),
            d
        )));
    }
    let base = &points[0];
    let rows: Vec<RVector> = points[1..].iter().map(|p| p - base).collect();
    let (_, kernel) = RMatrix::from_rows(d, &rows).rank_and_kernel();
    if kernel.len() != 1 {
        return Ok(None);
    }
    let normal = normalize_leading(kernel.into_iter().next().expect("one kernel vector"));
    let offset = normal.dot(base);
    Ok(Some((normal, offset)))
}

/// Fits a hyperplane through any number of points that affinely span one.
/// Used for facets with more than `d` vertices.
pub fn fit_hyperplane(points: &[RVector]) -> Result<Option<(RVector, Rational)>, Error> {
    let d = check_dims(points)?;
    if points.len() < d || d == 0 {
        return Ok(None);
    }
    let base = &points[0];
    let rows: Vec<RVector> = points[1..].iter().map(|p| p - base).collect();
    let (_, kernel) = RMatrix::from_rows(d, &rows).rank_and_kernel();
    if kernel.len() != 1 {
        return Ok(None);
    }
    let normal = normalize_leading(kernel.into_iter().next().expect("one kernel vector"));
    let offset = normal.dot(base);
    Ok(Some((normal, offset)))
}

/// Scales `v` so that its first nonzero entry is `+1`. Zero stays zero.
pub fn normalize_leading(v: RVector) -> RVector {
    match v.iter().find(|x| !x.is_zero()).cloned() {
        Some(lead) => v.scale(&lead.recip()),
        None => v,
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
