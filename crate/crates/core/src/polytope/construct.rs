use crate::linalg::{int, RVector};
use crate::Error;

use super::{canonical_facets, stack_pyramid, truncate_vertex, Polytope};

/// Named polytope families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `conv{0, e_1, ..., e_d}`.
    Simplex(usize),
    /// Sum of an `m`-simplex and an `n`-simplex in complementary coordinates.
    Delta(usize, usize),
    /// `[0, 1]^d`.
    Cube(usize),
    /// `n` points `(t, t^2, ..., t^d)` on the moment curve, `t = 1..n`.
    Cyclic { n: usize, d: usize },
    /// Two apices over a triangle.
    Bipyramid3,
    /// `conv{±e_1, ±e_2, ±e_3}`.
    Octahedron,
    /// Tetrahedron glued onto one triangular end of a triangular prism.
    CappedPrism,
    /// Capped prism with a second tetrahedron glued onto a face of the cap.
    Bd182,
    /// Triangular prism with tetrahedra glued onto both triangular ends.
    Bd198,
    /// Simplicial `d`-prism with one vertex cut off.
    Wedge(usize),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Builds a member of one of the named families, with exact coordinates.
pub fn construct_basic(kind: &Kind) -> Result<Polytope, Error> {
    match *kind {
        Kind::Simplex(d) => simplex(d),
        Kind::Delta(m, n) => delta(m, n),
        Kind::Cube(d) => cube(d),
        Kind::Cyclic { n, d } => cyclic(n, d),
        Kind::Bipyramid3 => {
            let v = [[0, 0, 0], [3, 0, 0], [0, 3, 0], [1, 1, 1], [1, 1, -1]];
            Polytope::from_vertices(v.iter().map(|p| RVector::from_ints(p)).collect(), None)
                .map(|p| p.with_name("triangular-bipyramid"))
        }
        Kind::Octahedron => {
            let mut v = Vec::new();
            for i in 0..3 {
                v.push(RVector::unit(3, i));
                v.push(-&RVector::unit(3, i));
            }
            Ok(Polytope::from_vertices(v, None)?.with_name("octahedron"))
        }
        Kind::CappedPrism => {
            let prism = delta(1, 2)?;
            let first_triangle = triangular_facets(&prism)[0];
            Ok(stack_pyramid(&prism, first_triangle)?.with_name("capped-prism"))
        }
        Kind::Bd182 => {
            let capped = construct_basic(&Kind::CappedPrism)?;
            let apex = capped.num_vertices() - 1;
            let on_cap = capped
                .facets_of(apex)
                .into_iter()
                .find(|&f| capped.facets()[f].len() == 3)
                .expect("the cap has triangular faces");
            Ok(stack_pyramid(&capped, on_cap)?.with_name("bd182"))
        }
        Kind::Bd198 => {
            let capped = construct_basic(&Kind::CappedPrism)?;
            let apex = capped.num_vertices() - 1;
            let far_end = triangular_facets(&capped)
                .into_iter()
                .find(|&f| !capped.facets()[f].contains(&apex))
                .expect("the uncapped end is a triangle");
            Ok(stack_pyramid(&capped, far_end)?.with_name("bd198"))
        }
        Kind::Wedge(d) => {
            if d < 2 {
                return Err(invalid("wedge needs d >= 2"));
            }
            let prism = delta(1, d - 1)?;
            Ok(truncate_vertex(&prism, 0)?.with_name(format!("wedge-{d}")))
        }
    }
}

fn triangular_facets(p: &Polytope) -> Vec<usize> {
    (0..p.facets().len()).filter(|&f| p.facets()[f].len() == 3).collect()
}

fn simplex_vertices(d: usize) -> Vec<RVector> {
    std::iter::once(RVector::zeros(d))
        .chain((0..d).map(|i| RVector::unit(d, i)))
        .collect()
}

fn simplex(d: usize) -> Result<Polytope, Error> {
    if d == 0 {
        return Err(invalid("simplex needs d >= 1"));
    }
    let facets = (0..=d).map(|skip| (0..=d).filter(|&i| i != skip).collect()).collect();
    Polytope::new(d, simplex_vertices(d), facets, Some(format!("simplex-{d}")))
}

/// Vertex `(i, j)` is the sum of vertex `i` of the `m`-simplex and vertex
/// `j` of the `n`-simplex, stored at index `i * (n + 1) + j`. Facets are the
/// products of one simplex with a facet of the other.
fn delta(m: usize, n: usize) -> Result<Polytope, Error> {
    if m + n == 0 {
        return Err(invalid("delta(0, 0) is a point"));
    }
    let left = simplex_vertices(m);
    let right = simplex_vertices(n);
    let mut vertices = Vec::with_capacity((m + 1) * (n + 1));
    for a in &left {
        for b in &right {
            vertices.push(a.extended(b.coords()));
        }
    }
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut facets = Vec::new();
    if m > 0 {
        for skip in 0..=m {
            facets.push(
                (0..=m)
                    .filter(|&i| i != skip)
                    .flat_map(|i| (0..=n).map(move |j| idx(i, j)))
                    .collect(),
            );
        }
    }
    if n > 0 {
        for skip in 0..=n {
            facets.push(
                (0..=m)
                    .flat_map(|i| (0..=n).filter(move |&j| j != skip).map(move |j| idx(i, j)))
                    .collect(),
            );
        }
    }
    Polytope::new(m + n, vertices, canonical_facets(facets), Some(format!("delta-{m}-{n}")))
}

fn cube(d: usize) -> Result<Polytope, Error> {
    if d == 0 || d > 16 {
        return Err(invalid("cube needs 1 <= d <= 16"));
    }
    let vertices: Vec<RVector> = (0..1usize << d)
        .map(|bits| RVector::from_ints(&(0..d).map(|k| ((bits >> k) & 1) as i64).collect::<Vec<_>>()))
        .collect();
    let mut facets = Vec::new();
    for k in 0..d {
        for side in 0..2 {
            facets.push((0..1usize << d).filter(|b| (b >> k) & 1 == side).collect());
        }
    }
    Polytope::new(d, vertices, facets, Some(format!("cube-{d}")))
}

fn cyclic(n: usize, d: usize) -> Result<Polytope, Error> {
    if d < 2 || n < d + 1 {
        return Err(invalid("cyclic needs d >= 2 and n >= d + 1"));
    }
    let vertices = (1..=n)
        .map(|t| {
            let t = int(t as i64);
            let mut coords = Vec::with_capacity(d);
            let mut power = t.clone();
            for _ in 0..d {
                coords.push(power.clone());
                power *= &t;
            }
            RVector::new(coords)
        })
        .collect();
    Ok(Polytope::from_vertices(vertices, None)?.with_name(format!("cyclic-{n}-{d}")))
}

/// The two endpoints of a segment, as a summand for [`minkowski_hull`].
/// A segment in dimension above one is not full-dimensional, so it is kept
/// as a bare point list rather than a [`Polytope`].
pub fn segment(from: RVector, to: RVector) -> Result<Vec<RVector>, Error> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: to.dim(),
        });
    }
    if from == to {
        return Err(invalid("segment endpoints coincide"));
    }
    Ok(vec![from, to])
}

/// A convex pentagon with small integer coordinates.
pub fn pentagon() -> Polytope {
    let v = [[0, 0], [2, 0], [3, 2], [1, 3], [-1, 2]];
    Polytope::from_vertices(v.iter().map(|p| RVector::from_ints(p)).collect(), None)
        .expect("pentagon is convex")
        .with_name("pentagon")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{enumerate_facets, minkowski_hull, FVector};

    fn fv(p: &Polytope) -> (usize, usize, usize) {
        let FVector { vertices, edges, facets } = p.fvector();
        (vertices, edges, facets)
    }

    #[test]
    fn simplex_counts() {
        for d in 1..=6 {
            let s = construct_basic(&Kind::Simplex(d)).unwrap();
            assert_eq!(fv(&s), (d + 1, d * (d + 1) / 2, d + 1));
        }
    }

    #[test]
    fn prisms_have_2d_vertices_d2_edges() {
        for d in 2..=6 {
            let p = construct_basic(&Kind::Delta(1, d - 1)).unwrap();
            assert_eq!(fv(&p), (2 * d, d * d, d + 2), "d={d}");
        }
    }

    #[test]
    fn wedge_counts() {
        for d in 3..=6 {
            let w = construct_basic(&Kind::Wedge(d)).unwrap();
            assert_eq!(fv(&w), (3 * d - 1, d * (3 * d - 1) / 2, d + 3), "d={d}");
            assert!(w.is_simple());
        }
    }

    #[test]
    fn stacked_prisms() {
        let capped = construct_basic(&Kind::CappedPrism).unwrap();
        assert_eq!(fv(&capped), (7, 12, 7));
        for kind in [Kind::Bd182, Kind::Bd198] {
            assert_eq!(fv(&construct_basic(&kind).unwrap()), (8, 15, 9));
        }
    }

    #[test]
    fn small_solids() {
        assert_eq!(fv(&construct_basic(&Kind::Octahedron).unwrap()), (6, 12, 8));
        assert_eq!(fv(&construct_basic(&Kind::Bipyramid3).unwrap()), (5, 9, 6));
        assert_eq!(fv(&construct_basic(&Kind::Cube(3)).unwrap()), (8, 12, 6));
        assert_eq!(fv(&pentagon()), (5, 5, 5));
    }

    #[test]
    fn cyclic_6_4() {
        let c = construct_basic(&Kind::Cyclic { n: 6, d: 4 }).unwrap();
        assert_eq!(fv(&c), (6, 15, 9));
    }

    #[test]
    fn explicit_facets_agree_with_enumeration() {
        for kind in [
            Kind::Simplex(3),
            Kind::Delta(1, 2),
            Kind::Delta(2, 2),
            Kind::Delta(1, 3),
            Kind::Cube(3),
            Kind::Cube(4),
            Kind::Wedge(3),
            Kind::Wedge(4),
        ] {
            let p = construct_basic(&kind).unwrap();
            assert_eq!(
                enumerate_facets(p.dim(), p.vertices()).unwrap(),
                p.facets(),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn delta_equals_minkowski_sum_of_simplices() {
        for (m, n) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
            let d = m + n;
            let lift = |pts: Vec<RVector>, offset: usize, k: usize| -> Vec<RVector> {
                pts.into_iter()
                    .map(|p| {
                        let mut c = vec![int(0); d];
                        for i in 0..k {
                            c[offset + i] = p[i].clone();
                        }
                        RVector::new(c)
                    })
                    .collect()
            };
            let a = lift(simplex_vertices(m), 0, m);
            let b = lift(simplex_vertices(n), m, n);
            let sum = minkowski_hull(&a, &b).unwrap();
            assert_eq!(sum.fvector(), construct_basic(&Kind::Delta(m, n)).unwrap().fvector());
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(construct_basic(&Kind::Simplex(0)).is_err());
        assert!(construct_basic(&Kind::Delta(0, 0)).is_err());
        assert!(construct_basic(&Kind::Cyclic { n: 4, d: 4 }).is_err());
        assert!(construct_basic(&Kind::Wedge(1)).is_err());
        assert!(segment(RVector::from_ints(&[1, 2]), RVector::from_ints(&[1, 2])).is_err());
    }
}
