use std::collections::BTreeSet;

use num::Signed;

use crate::linalg::{frac, int, point_in_hull, RVector, Rational};
use crate::Error;

use super::hull::{binomial, FACET_GUARD};
use super::Polytope;

/// Minkowski sum of two polytopes of the same ambient dimension.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope, Error> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let name = match (p.name(), q.name()) {
        (Some(a), Some(b)) => Some(format!("{a}+{b}")),
        _ => None,
    };
    let sum = minkowski_hull(p.vertices(), q.vertices())?;
    Ok(match name {
        Some(n) => sum.with_name(n),
        None => sum,
    })
}

/// Hull of all pairwise sums of two point sets. The summands need not be
/// full-dimensional, but the sum must be.
///
/// Sums lying in the hull of the remaining candidates are discarded before
/// the facets are enumerated.
pub fn minkowski_hull(a: &[RVector], b: &[RVector]) -> Result<Polytope, Error> {
    let dim = a
        .first()
        .or(b.first())
        .map(RVector::dim)
        .ok_or_else(|| Error::Degenerate("empty summand".into()))?;
    if let Some(bad) = a.iter().chain(b).find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let product = a.len() * b.len();
    if binomial(product, dim) > FACET_GUARD {
        return Err(Error::GuardExceeded(format!(
            "C({product}, {dim}) exceeds {FACET_GUARD}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut candidates = Vec::with_capacity(product);
    for p in a {
        for q in b {
            let s = p + q;
            if seen.insert(s.clone()) {
                candidates.push(s);
            }
        }
    }
    let mut keep = vec![true; candidates.len()];
    for i in 0..candidates.len() {
        let others: Vec<RVector> = (0..candidates.len())
            .filter(|&j| j != i && keep[j])
            .map(|j| candidates[j].clone())
            .collect();
        if point_in_hull(&candidates[i], &others)? {
            keep[i] = false;
        }
    }
    let vertices = candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();
    Polytope::from_vertices(vertices, None)
}

/// `P × [0, 1]`: `P` at height zero plus the segment `[0, e_{d+1}]`.
/// The result has `2V` vertices and `2E + V` edges.
pub fn prism_over(p: &Polytope) -> Result<Polytope, Error> {
    let d = p.dim();
    let base: Vec<RVector> = p.vertices().iter().map(|v| v.extended(&[int(0)])).collect();
    let seg = [RVector::zeros(d + 1), RVector::unit(d + 1, d)];
    let prism = minkowski_hull(&base, &seg)?;
    Ok(match p.name() {
        Some(n) => prism.with_name(format!("prism-{n}")),
        None => prism,
    })
}

/// Glues a pyramid onto facet `facet`.
///
/// The apex starts at the facet centroid plus the outward normal and is
/// pulled halfway back until it lies strictly beneath every other facet.
pub fn stack_pyramid(p: &Polytope, facet: usize) -> Result<Polytope, Error> {
    if facet >= p.facets().len() {
        return Err(Error::InvalidIndex {
            what: "facet",
            index: facet,
            len: p.facets().len(),
        });
    }
    let chosen = &p.facets()[facet];
    let pts: Vec<RVector> = chosen.iter().map(|&i| p.vertex(i).clone()).collect();
    let centroid = RVector::centroid(&pts);
    let (normal, _) = p.facet_inequality(facet);
    let others: Vec<_> = (0..p.facets().len())
        .filter(|&g| g != facet)
        .map(|g| p.facet_inequality(g))
        .collect();

    let mut step = int(1);
    let mut apex = None;
    for _ in 0..=64 {
        let candidate = &centroid + &normal.scale(&step);
        if others
            .iter()
            .all(|(a, b)| (a.dot(&candidate) - b).is_negative())
        {
            apex = Some(candidate);
            break;
        }
        step *= frac(1, 2);
    }
    let apex = apex.ok_or(Error::ApexPlacement(facet))?;

    let apex_index = p.num_vertices();
    let mut vertices = p.vertices().to_vec();
    vertices.push(apex);
    let mut facets: Vec<Vec<usize>> = (0..p.facets().len())
        .filter(|&g| g != facet)
        .map(|g| p.facets()[g].clone())
        .collect();
    for ridge in ridges_of(p, facet) {
        let mut f = ridge;
        f.push(apex_index);
        facets.push(f);
    }
    Polytope::new(p.dim(), vertices, facets, p.name().map(|n| format!("stacked-{n}")))
}

/// Inclusion-maximal intersections of facet `facet` with the other facets,
/// as sorted vertex lists.
fn ridges_of(p: &Polytope, facet: usize) -> Vec<Vec<usize>> {
    let chosen = &p.facets()[facet];
    let mut cuts: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (g, other) in p.facets().iter().enumerate() {
        if g == facet {
            continue;
        }
        let common: Vec<usize> = chosen.iter().copied().filter(|i| other.contains(i)).collect();
        if common.len() + 1 >= p.dim() {
            cuts.insert(common);
        }
    }
    let cuts: Vec<Vec<usize>> = cuts.into_iter().collect();
    cuts.iter()
        .filter(|c| {
            !cuts
                .iter()
                .any(|o| o.len() > c.len() && c.iter().all(|i| o.contains(i)))
        })
        .cloned()
        .collect()
}

/// Cuts vertex `v` off, replacing it by one new vertex on each incident
/// edge.
///
/// At a simple vertex the cut is a third of the way along every edge. At a
/// non-simple vertex those points need not be coplanar, so the cut is the
/// hyperplane normal to the sum of the facet normals at `v`, placed so the
/// deepest cut is again a third of an edge.
///
/// New vertices are appended after the surviving old ones, in order of the
/// neighbour they lie towards.
pub fn truncate_vertex(p: &Polytope, v: usize) -> Result<Polytope, Error> {
    if v >= p.num_vertices() {
        return Err(Error::InvalidIndex {
            what: "vertex",
            index: v,
            len: p.num_vertices(),
        });
    }
    let nbrs = p.neighbors(v);
    let old_index = |i: usize| if i < v { i } else { i - 1 };
    let first_new = p.num_vertices() - 1;
    let third = frac(1, 3);
    let mut vertices: Vec<RVector> = (0..p.num_vertices())
        .filter(|&i| i != v)
        .map(|i| p.vertex(i).clone())
        .collect();
    let fractions: Vec<Rational> = if nbrs.len() == p.dim() {
        vec![third; nbrs.len()]
    } else {
        let h = p
            .facets_of(v)
            .into_iter()
            .map(|f| p.facet_inequality(f).0)
            .fold(RVector::zeros(p.dim()), |acc, a| &acc + &a);
        let gaps: Vec<Rational> = nbrs.iter().map(|&w| h.dot(p.vertex(v)) - h.dot(p.vertex(w))).collect();
        let smallest = gaps.iter().min().expect("a vertex has neighbours").clone();
        gaps.iter().map(|g| &smallest * &third / g).collect()
    };
    for (&w, t) in nbrs.iter().zip(&fractions) {
        let step = (p.vertex(w) - p.vertex(v)).scale(t);
        vertices.push(p.vertex(v) + &step);
    }
    let mut facets: Vec<Vec<usize>> = p
        .facets()
        .iter()
        .map(|f| {
            let mut g: Vec<usize> = f.iter().filter(|&&i| i != v).map(|&i| old_index(i)).collect();
            if f.contains(&v) {
                g.extend(
                    nbrs.iter()
                        .enumerate()
                        .filter(|(_, w)| f.contains(w))
                        .map(|(k, _)| first_new + k),
                );
            }
            g
        })
        .collect();
    facets.push((first_new..first_new + nbrs.len()).collect());
    Polytope::new(p.dim(), vertices, facets, p.name().map(|n| format!("truncated-{n}")))
        .map_err(|e| Error::Degenerate(format!("truncating vertex {v}: {e}")))
}

/// Facet `facet` as a polytope in its own `d - 1` affine coordinates.
///
/// The coordinate at the first nonzero entry of the facet normal is dropped,
/// which is an affine isomorphism on the facet hyperplane. Vertex `k` of the
/// result is the `k`-th smallest vertex index of the facet.
pub fn facet_as_polytope(p: &Polytope, facet: usize) -> Result<Polytope, Error> {
    if facet >= p.facets().len() {
        return Err(Error::InvalidIndex {
            what: "facet",
            index: facet,
            len: p.facets().len(),
        });
    }
    if p.dim() < 2 {
        return Err(Error::Precondition("facets of a segment are points".into()));
    }
    let chosen = &p.facets()[facet];
    let (normal, _) = p.facet_inequality(facet);
    let drop = normal
        .iter()
        .position(|x| !num::Zero::is_zero(x))
        .expect("normal is nonzero");
    let vertices: Vec<RVector> = chosen.iter().map(|&i| p.vertex(i).without(drop)).collect();
    let local = |i: usize| chosen.binary_search(&i).expect("ridge vertex lies in the facet");
    let facets = ridges_of(p, facet)
        .into_iter()
        .map(|r| r.into_iter().map(local).collect())
        .collect();
    Polytope::new(
        p.dim() - 1,
        vertices,
        facets,
        Some(format!("facet-{facet}")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{construct_basic, pentagon, Kind};

    #[test]
    fn triangle_plus_segment_is_a_prism() {
        let tri: Vec<RVector> = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
            .iter()
            .map(|p| RVector::from_ints(p))
            .collect();
        let seg = [RVector::zeros(3), RVector::from_ints(&[1, 1, 1])];
        let prism = minkowski_hull(&tri, &seg).unwrap();
        assert_eq!(prism.fvector().edges, 9);
        assert_eq!(prism.num_vertices(), 6);
    }

    #[test]
    fn adding_a_point_translates() {
        let oct = construct_basic(&Kind::Octahedron).unwrap();
        let moved = minkowski_hull(oct.vertices(), &[RVector::from_ints(&[5, -2, 7])]).unwrap();
        assert_eq!(moved.fvector(), oct.fvector());
    }

    #[test]
    fn orthogonal_triangles_give_18_edges() {
        let a: Vec<RVector> = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]]
            .iter()
            .map(|p| RVector::from_ints(p))
            .collect();
        let b: Vec<RVector> = [[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
            .iter()
            .map(|p| RVector::from_ints(p))
            .collect();
        assert_eq!(minkowski_hull(&a, &b).unwrap().fvector().edges, 18);
    }

    #[test]
    fn sum_is_commutative_in_counts() {
        let a = construct_basic(&Kind::Simplex(3)).unwrap();
        let b = construct_basic(&Kind::Octahedron).unwrap();
        assert_eq!(
            minkowski_sum(&a, &b).unwrap().fvector(),
            minkowski_sum(&b, &a).unwrap().fvector()
        );
        assert!(minkowski_sum(&a, &pentagon()).is_err());
    }

    #[test]
    fn prism_edge_formula() {
        let tet = construct_basic(&Kind::Simplex(3)).unwrap();
        assert_eq!(prism_over(&tet).unwrap().fvector().edges, 16);
        let tri = construct_basic(&Kind::Simplex(2)).unwrap();
        assert_eq!(prism_over(&tri).unwrap().fvector().edges, 9);
        let pent = prism_over(&pentagon()).unwrap();
        assert_eq!(pent.fvector().edges, 2 * 5 + 5);
        assert_eq!(pent.num_vertices(), 10);
    }

    #[test]
    fn stacking_on_a_simplex_gives_a_bipyramid() {
        for d in 2..=4 {
            let s = construct_basic(&Kind::Simplex(d)).unwrap();
            let b = stack_pyramid(&s, 0).unwrap();
            assert_eq!(b.num_vertices(), d + 2);
            assert_eq!(b.facets().len(), 2 * d);
        }
        let s = construct_basic(&Kind::Simplex(3)).unwrap();
        assert!(matches!(stack_pyramid(&s, 9), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn stacking_keeps_other_facets() {
        let prism = construct_basic(&Kind::Delta(1, 2)).unwrap();
        let capped = stack_pyramid(&prism, 0).unwrap();
        for (g, f) in prism.facets().iter().enumerate().skip(1) {
            assert!(capped.facets().contains(f), "facet {g} lost");
        }
        assert_eq!(capped.fvector().vertices, 7);
        assert_eq!(capped.fvector().facets, 7);
        assert_eq!(capped.fvector().edges, 12);
    }

    #[test]
    fn truncation_counts() {
        let tri = construct_basic(&Kind::Simplex(2)).unwrap();
        let quad = truncate_vertex(&tri, 1).unwrap();
        assert_eq!(quad.fvector().vertices, 4);
        let tet = construct_basic(&Kind::Simplex(3)).unwrap();
        let cut = truncate_vertex(&tet, 2).unwrap();
        let f = cut.fvector();
        assert_eq!((f.vertices, f.facets, f.edges), (6, 5, 9));
        assert_eq!(f.edges, f.vertices + f.facets - 2);
        assert!(truncate_vertex(&tet, 4).is_err());
    }

    #[test]
    fn truncation_vertex_and_facet_growth() {
        let cube = construct_basic(&Kind::Cube(3)).unwrap();
        let cut = truncate_vertex(&cube, 5).unwrap();
        assert_eq!(cut.num_vertices(), 8 - 1 + cube.degree(5));
        assert_eq!(cut.facets().len(), 7);
    }

    #[test]
    fn facets_as_polytopes() {
        let cube = construct_basic(&Kind::Cube(3)).unwrap();
        let sq = facet_as_polytope(&cube, 0).unwrap();
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.facets().len(), 4);
        let s = construct_basic(&Kind::Simplex(4)).unwrap();
        let f = facet_as_polytope(&s, 2).unwrap();
        assert_eq!(f.fvector(), construct_basic(&Kind::Simplex(3)).unwrap().fvector());
    }
}
