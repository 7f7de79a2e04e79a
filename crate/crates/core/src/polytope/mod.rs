//! Polytopes as exact vertex coordinates plus vertex–facet incidences.
//!
//! Only vertices, edges and facets are represented; edges are derived from
//! the facets with the combinatorial rule "the facets containing both ends
//! meet in exactly that pair".

mod construct;
mod counts;
mod equivalence;
mod hull;
mod ops;

pub use construct::{construct_basic, pentagon, segment, Kind};
pub use counts::{count_rules, simple_vertex_spectrum_below_3d, Claim, CountConclusion};
pub use equivalence::combinatorially_equivalent;
pub use hull::{binomial, enumerate_facets, FACET_GUARD};
pub use ops::{facet_as_polytope, minkowski_hull, minkowski_sum, prism_over, stack_pyramid, truncate_vertex};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num::Signed;
use serde::Serialize;

use crate::linalg::{self, point_in_hull, RVector, Rational};
use crate::Error;

/// Unordered vertex pair, stored with the smaller index first.
pub type Edge = (usize, usize);

pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Vertex, edge and facet counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FVector {
    pub vertices: usize,
    pub edges: usize,
    pub facets: usize,
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(V={}, E={}, F={})", self.vertices, self.edges, self.facets)
    }
}

/// A full-dimensional convex polytope.
///
/// Facets are kept in canonical form: each facet's vertex indices sorted,
/// and the facet list sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RVector>,
    facets: Vec<Vec<usize>>,
    name: Option<String>,
    edges: OnceLock<Vec<Edge>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Polytope {
    /// Builds a polytope from explicit incidences, validating every
    /// invariant geometrically.
    pub fn new(
        dim: usize,
        vertices: Vec<RVector>,
        facets: Vec<Vec<usize>>,
        name: Option<String>,
    ) -> Result<Self, Error> {
        let facets = canonical_facets(facets);
        let report = validate_parts(dim, &vertices, &facets, false);
        if !report.is_valid() {
            return Err(Error::InvalidPolytope(report.to_string()));
        }
        Ok(Self::from_parts_unchecked(dim, vertices, facets, name))
    }

    /// Convex hull of `vertices`, which must all be extreme points.
    pub fn from_vertices(vertices: Vec<RVector>, name: Option<String>) -> Result<Self, Error> {
        let dim = vertices
            .first()
            .map(RVector::dim)
            .ok_or_else(|| Error::Degenerate("no vertices".into()))?;
        let facets = enumerate_facets(dim, &vertices)?;
        Self::new(dim, vertices, facets, name)
    }

    pub(crate) fn from_parts_unchecked(
        dim: usize,
        vertices: Vec<RVector>,
        facets: Vec<Vec<usize>>,
        name: Option<String>,
    ) -> Self {
        Self {
            dim,
            vertices,
            facets,
            name,
            edges: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &RVector {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Skeleton edges, sorted.
    pub fn edges(&self) -> &[Edge] {
        self.edges.get_or_init(|| combinatorial_edges(self.vertices.len(), &self.facets))
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges().binary_search(&edge(u, v)).is_ok()
    }

    /// Skeleton neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges().iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn fvector(&self) -> FVector {
        FVector {
            vertices: self.vertices.len(),
            edges: self.edges().len(),
            facets: self.facets.len(),
        }
    }

    /// True iff every vertex has exactly `d` neighbours.
    pub fn is_simple(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.degree(v) == self.dim)
    }

    /// Outward facet inequality `a·x <= b`, tight exactly on the facet.
    pub fn facet_inequality(&self, f: usize) -> (RVector, Rational) {
        let pts: Vec<RVector> = self.facets[f].iter().map(|&i| self.vertices[i].clone()).collect();
        let (a, b) = linalg::fit_hyperplane(&pts)
            .expect("dimensions agree")
            .expect("facet spans a hyperplane");
        let outside = (0..self.vertices.len())
            .find(|i| self.facets[f].binary_search(i).is_err())
            .expect("some vertex lies off every facet");
        if (a.dot(&self.vertices[outside]) - &b).is_positive() {
            (-&a, -b)
        } else {
            (a, b)
        }
    }

    /// Indices of the facets containing vertex `v`.
    pub fn facets_of(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.facets[f].binary_search(&v).is_ok())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_parts(self.dim, &self.vertices, &self.facets, true)
    }

    /// Applies `x -> scale * x + shift` to every vertex. Incidences are
    /// unchanged for positive `scale`.
    pub fn transformed(&self, scale: &Rational, shift: &RVector) -> Polytope {
        assert!(scale.is_positive());
        let vertices = self.vertices.iter().map(|v| &v.scale(scale) + shift).collect();
        Self::from_parts_unchecked(self.dim, vertices, self.facets.clone(), self.name.clone())
    }

    /// Relabels vertices: vertex `i` of `self` becomes vertex `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Polytope {
        assert_eq!(perm.len(), self.vertices.len());
        let mut vertices = vec![RVector::zeros(self.dim); self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[perm[i]] = v.clone();
        }
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&i| perm[i]).collect())
            .collect();
        Self::from_parts_unchecked(self.dim, vertices, canonical_facets(facets), self.name.clone())
    }
}

pub(crate) fn canonical_facets(facets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = facets
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f.dedup();
            f
        })
        .collect();
    set.into_iter().collect()
}

fn combinatorial_edges(n: usize, facets: &[Vec<usize>]) -> Vec<Edge> {
    let mut member = vec![vec![false; facets.len()]; n];
    for (f, facet) in facets.iter().enumerate() {
        for &v in facet {
            member[v][f] = true;
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let shared: Vec<usize> = (0..facets.len())
                .filter(|&f| member[u][f] && member[v][f])
                .collect();
            // With no shared facet the intersection is the whole polytope,
            // which is the pair only for a segment.
            let only_pair = (0..n).all(|w| w == u || w == v || shared.iter().any(|&f| !member[w][f]));
            if only_pair {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Geometric edge test: `[u, v]` is an edge iff, after projecting along
/// `v - u`, the common image of `u` and `v` is not in the hull of the images
/// of the other vertices (a strictly separating functional then supports
/// exactly the segment).
pub fn is_geometric_edge(vertices: &[RVector], u: usize, v: usize) -> Result<bool, Error> {
    let dir = &vertices[v] - &vertices[u];
    let Some(k) = dir.iter().position(|x| !num::Zero::is_zero(x)) else {
        return Err(Error::Degenerate(format!("vertices {u} and {v} coincide")));
    };
    let project = |p: &RVector| -> RVector {
        let t = &p[k] / &dir[k];
        (p - &dir.scale(&t)).without(k)
    };
    let others: Vec<RVector> = (0..vertices.len())
        .filter(|&w| w != u && w != v)
        .map(|w| project(&vertices[w]))
        .collect();
    Ok(!point_in_hull(&project(&vertices[u]), &others)?)
}

/// One invariant violation found by [`validate_parts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongCoordinateCount { vertex: usize },
    DuplicateVertex { first: usize, second: usize },
    NotFullDimensional,
    IndexOutOfRange { facet: usize, index: usize },
    FacetTooSmall { facet: usize },
    FacetNotFlat { facet: usize },
    FacetNotSupporting { facet: usize },
    FacetNotMaximal { facet: usize, vertex: usize },
    NestedFacets { inner: usize, outer: usize },
    VertexInTooFewFacets { vertex: usize },
    NotAVertex { vertex: usize },
    EdgeMismatch { pair: Edge, combinatorial: bool },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongCoordinateCount { vertex } => {
                write!(f, "vertex {vertex} has the wrong number of coordinates")
            }
            Violation::DuplicateVertex { first, second } => {
                write!(f, "vertices {first} and {second} coincide")
            }
            Violation::NotFullDimensional => write!(f, "vertices do not span the ambient space"),
            Violation::IndexOutOfRange { facet, index } => {
                write!(f, "facet {facet} refers to missing vertex {index}")
            }
            Violation::FacetTooSmall { facet } => write!(f, "facet {facet} has fewer than d vertices"),
            Violation::FacetNotFlat { facet } => {
                write!(f, "facet {facet} vertices do not lie on one hyperplane")
            }
            Violation::FacetNotSupporting { facet } => {
                write!(f, "facet {facet} hyperplane has vertices on both sides")
            }
            Violation::FacetNotMaximal { facet, vertex } => {
                write!(f, "vertex {vertex} lies on facet {facet}'s hyperplane but is not listed")
            }
            Violation::NestedFacets { inner, outer } => {
                write!(f, "facet {inner} is contained in facet {outer}")
            }
            Violation::VertexInTooFewFacets { vertex } => {
                write!(f, "vertex {vertex} lies in fewer than d facets")
            }
            Violation::NotAVertex { vertex } => {
                write!(f, "point {vertex} is not an extreme point")
            }
            Violation::EdgeMismatch { pair, combinatorial } => write!(
                f,
                "pair {:?}: combinatorial edge rule says {combinatorial}, geometric test disagrees",
                pair
            ),
        }
    }
}

/// Every violated invariant, not just the first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks all polytope invariants on raw data.
///
/// With `cross_check_edges`, additionally compares the combinatorial edge
/// rule against the geometric supporting-hyperplane test on every pair.
pub fn validate_parts(
    dim: usize,
    vertices: &[RVector],
    facets: &[Vec<usize>],
    cross_check_edges: bool,
) -> ValidationReport {
    let mut out = Vec::new();
    let n = vertices.len();
    for (i, v) in vertices.iter().enumerate() {
        if v.dim() != dim {
            out.push(Violation::WrongCoordinateCount { vertex: i });
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }
    for i in 0..n {
        for j in i + 1..n {
            if vertices[i] == vertices[j] {
                out.push(Violation::DuplicateVertex { first: i, second: j });
            }
        }
    }
    let spans = n > dim
        && linalg::affine_rank(vertices)
            .ok()
            .flatten()
            .is_some_and(|r| r == dim);
    if !spans {
        out.push(Violation::NotFullDimensional);
    }

    let mut usable = vec![true; facets.len()];
    for (f, facet) in facets.iter().enumerate() {
        if let Some(&bad) = facet.iter().find(|&&i| i >= n) {
            out.push(Violation::IndexOutOfRange { facet: f, index: bad });
            usable[f] = false;
            continue;
        }
        if facet.len() < dim {
            out.push(Violation::FacetTooSmall { facet: f });
            usable[f] = false;
            continue;
        }
        let pts: Vec<RVector> = facet.iter().map(|&i| vertices[i].clone()).collect();
        let Some((a, b)) = linalg::fit_hyperplane(&pts).ok().flatten() else {
            out.push(Violation::FacetNotFlat { facet: f });
            usable[f] = false;
            continue;
        };
        let mut signs = BTreeSet::new();
        for (i, v) in vertices.iter().enumerate() {
            let s = linalg::sign(&(a.dot(v) - &b));
            if s == 0 && !facet.contains(&i) {
                out.push(Violation::FacetNotMaximal { facet: f, vertex: i });
            }
            if s != 0 {
                signs.insert(s);
            }
        }
        if signs.len() > 1 {
            out.push(Violation::FacetNotSupporting { facet: f });
        }
    }
    for (f, outer) in facets.iter().enumerate() {
        for (g, inner) in facets.iter().enumerate() {
            if f != g && inner.iter().all(|i| outer.contains(i)) && (inner.len() < outer.len() || g > f)
            {
                out.push(Violation::NestedFacets { inner: g, outer: f });
            }
        }
    }
    for v in 0..n {
        let containing: Vec<&Vec<usize>> = facets
            .iter()
            .zip(&usable)
            .filter(|(facet, ok)| **ok && facet.contains(&v))
            .map(|(facet, _)| facet)
            .collect();
        if containing.len() < dim {
            out.push(Violation::VertexInTooFewFacets { vertex: v });
        }
        if !containing.is_empty()
            && (0..n).any(|w| w != v && containing.iter().all(|facet| facet.contains(&w)))
        {
            out.push(Violation::NotAVertex { vertex: v });
        }
    }
    if cross_check_edges && out.is_empty() {
        let canonical = canonical_facets(facets.to_vec());
        let edges = combinatorial_edges(n, &canonical);
        for u in 0..n {
            for v in u + 1..n {
                let comb = edges.binary_search(&(u, v)).is_ok();
                if is_geometric_edge(vertices, u, v).ok() != Some(comb) {
                    out.push(Violation::EdgeMismatch {
                        pair: (u, v),
                        combinatorial: comb,
                    });
                }
            }
        }
    }
    ValidationReport { violations: out }
}
