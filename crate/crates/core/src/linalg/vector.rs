use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use num::Zero;

use super::{format_rational, int, Rational};

/// A point or direction with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RVector(Vec<Rational>);

impl RVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    /// The `i`-th standard basis vector of dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = int(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: &Rational) -> RVector {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    /// Appends coordinates, e.g. to lift a point into a higher dimension.
    pub fn extended(&self, extra: &[Rational]) -> RVector {
        let mut coords = self.0.clone();
        coords.extend_from_slice(extra);
        Self(coords)
    }

    /// Drops coordinate `k`.
    pub fn without(&self, k: usize) -> RVector {
        let mut coords = self.0.clone();
        coords.remove(k);
        Self(coords)
    }

    /// Arithmetic mean of a non-empty set of points.
    pub fn centroid(points: &[RVector]) -> RVector {
        assert!(!points.is_empty(), "centroid of an empty point set");
        let sum = points[1..].iter().fold(points[0].clone(), |acc, p| &acc + p);
        sum.scale(&int(points.len() as i64).recip())
    }

    /// If `self = k * other` for some scalar `k`, returns `k`.
    ///
    /// `other` must be nonzero.
    pub fn multiple_of(&self, other: &RVector) -> Option<Rational> {
        let pivot = other.0.iter().position(|x| !x.is_zero())?;
        let k = &self.0[pivot] / &other.0[pivot];
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| *a == &k * b)
            .then_some(k)
    }
}

impl Deref for RVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for RVector {
    fn from(coords: Vec<Rational>) -> Self {
        Self(coords)
    }
}

impl<'a> Add<&'a RVector> for &'a RVector {
    type Output = RVector;

    fn add(self, rhs: &'a RVector) -> RVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RVector> for &'a RVector {
    type Output = RVector;

    fn sub(self, rhs: &'a RVector) -> RVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RVector {
    type Output = RVector;

    fn neg(self) -> RVector {
        RVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    #[test]
    fn arithmetic() {
        let a = RVector::from_ints(&[1, 2, 3]);
        let b = RVector::from_ints(&[0, 1, -1]);
        assert_eq!(&a + &b, RVector::from_ints(&[1, 3, 2]));
        assert_eq!(&a - &b, RVector::from_ints(&[1, 1, 4]));
        assert_eq!(a.dot(&b), int(-1));
        assert_eq!(a.scale(&frac(1, 2)).to_string(), "(1/2, 1, 3/2)");
        assert_eq!(a.without(1), RVector::from_ints(&[1, 3]));
    }

    #[test]
    fn multiples() {
        let a = RVector::from_ints(&[2, -4]);
        let b = RVector::from_ints(&[-1, 2]);
        assert_eq!(a.multiple_of(&b), Some(int(-2)));
        assert_eq!(RVector::from_ints(&[1, 1]).multiple_of(&b), None);
        assert_eq!(RVector::zeros(2).multiple_of(&b), Some(int(0)));
    }

    #[test]
    fn centroid_of_triangle() {
        let tri = [
            RVector::from_ints(&[0, 0]),
            RVector::from_ints(&[1, 0]),
            RVector::from_ints(&[0, 1]),
        ];
        assert_eq!(
            RVector::centroid(&tri),
            RVector::new(vec![frac(1, 3), frac(1, 3)])
        );
    }
}
