//! Geometric graphs, decomposing functions and the linear-algebra oracle.
//!
//! A decomposing function on a geometric graph maps each vertex `v` to a
//! point `f(v)` such that `f(u) - f(v)` is a (signed) multiple of `u - v`
//! along every edge. Homotheties `x -> a x + b` always qualify; a connected
//! graph spanning its ambient space is indecomposable when nothing else
//! does, and a polytope is indecomposable exactly when its skeleton is.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::Zero;

use crate::linalg::{affine_rank, format_rational, RMatrix, RVector, Rational};
use crate::polytope::{edge, Edge, Polytope};
use crate::{Error, Status};

/// Vertices with coordinates, keyed by id, and straight edges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricGraph {
    dim: usize,
    vertices: BTreeMap<usize, RVector>,
    edges: BTreeSet<Edge>,
}

impl GeometricGraph {
    pub fn new(
        dim: usize,
        vertices: BTreeMap<usize, RVector>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, Error> {
        if let Some(bad) = vertices.values().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if !vertices.contains_key(&w) {
                    return Err(Error::Precondition(format!("edge endpoint {w} is not a vertex")));
                }
            }
            if vertices[&u] == vertices[&v] {
                return Err(Error::Precondition(format!(
                    "edge [{u}, {v}] joins coincident points"
                )));
            }
            set.insert(edge(u, v));
        }
        Ok(Self {
            dim,
            vertices,
            edges: set,
        })
    }

    /// The subgraph of the skeleton of `p` spanned by `edges`, on the given
    /// vertices (which must include every endpoint).
    pub fn from_polytope(
        p: &Polytope,
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for v in vertices {
            if v >= p.num_vertices() {
                return Err(Error::InvalidIndex {
                    what: "vertex",
                    index: v,
                    len: p.num_vertices(),
                });
            }
            map.insert(v, p.vertex(v).clone());
        }
        Self::new(p.dim(), map, edges)
    }

    /// The subgraph of the skeleton of `p` induced on `vertices`.
    pub fn induced(p: &Polytope, vertices: &BTreeSet<usize>) -> Result<Self, Error> {
        let edges: Vec<Edge> = p
            .edges()
            .iter()
            .copied()
            .filter(|(u, v)| vertices.contains(u) && vertices.contains(v))
            .collect();
        Self::from_polytope(p, vertices.iter().copied(), edges)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &BTreeMap<usize, RVector> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    /// The same graph with `e` removed, keeping all vertices.
    pub fn without_edge(&self, e: Edge) -> Self {
        let mut g = self.clone();
        g.edges.remove(&edge(e.0, e.1));
        g
    }

    /// The same graph with `e` added. Endpoints must be vertices.
    pub fn with_edge(&self, e: Edge) -> Result<Self, Error> {
        Self::new(self.dim, self.vertices.clone(), self.edges.iter().copied().chain([e]))
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.keys().next() else {
            return true;
        };
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in adj.get(&u).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Whether the vertices affinely span the ambient space.
    pub fn is_spanning(&self) -> bool {
        let pts: Vec<RVector> = self.vertices.values().cloned().collect();
        matches!(affine_rank(&pts), Ok(Some(r)) if r == self.dim)
    }
}

/// Images of the vertices together with the scalar on each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposingFunction {
    pub images: BTreeMap<usize, RVector>,
    pub edge_scalars: BTreeMap<Edge, Rational>,
}

impl DecomposingFunction {
    /// The identity on `g`, with every edge scalar one.
    pub fn identity(g: &GeometricGraph) -> Self {
        Self {
            images: g.vertices.clone(),
            edge_scalars: g.edges.iter().map(|&e| (e, Rational::from_integer(1.into()))).collect(),
        }
    }

    /// Checks `f(u) - f(v) = lambda_e (u - v)` on every edge of `g`.
    pub fn check(&self, g: &GeometricGraph) -> Result<(), String> {
        for &(u, v) in &g.edges {
            let (Some(fu), Some(fv)) = (self.images.get(&u), self.images.get(&v)) else {
                return Err(format!("no image for an endpoint of [{u}, {v}]"));
            };
            let Some(lambda) = self.edge_scalars.get(&(u, v)) else {
                return Err(format!("no scalar for edge [{u}, {v}]"));
            };
            let lhs = fu - fv;
            let rhs = (&g.vertices[&u] - &g.vertices[&v]).scale(lambda);
            if lhs != rhs {
                return Err(format!(
                    "f({u}) - f({v}) = {lhs} is not {} * (v{u} - v{v})",
                    format_rational(lambda)
                ));
            }
        }
        Ok(())
    }

    /// Pointwise sum, for two functions on the same graph.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            images: self
                .images
                .iter()
                .map(|(k, v)| (*k, v + &other.images[k]))
                .collect(),
            edge_scalars: self
                .edge_scalars
                .iter()
                .map(|(e, l)| (*e, l + &other.edge_scalars[e]))
                .collect(),
        }
    }

    /// Residue after subtracting the least-squares homothety fit
    /// `v -> alpha v + x`. Zero exactly when `self` is a homothety.
    pub fn homothety_residue(&self, g: &GeometricGraph) -> BTreeMap<usize, RVector> {
        let (alpha, shift) = fit_homothety(g, &self.images);
        self.images
            .iter()
            .map(|(k, fv)| (*k, &(fv - &g.vertices[k].scale(&alpha)) - &shift))
            .collect()
    }

    pub fn is_homothety(&self, g: &GeometricGraph) -> bool {
        self.homothety_residue(g).values().all(RVector::is_zero)
    }
}

/// Least-squares `(alpha, x)` minimising `sum |f(v) - alpha v - x|^2`,
/// solved exactly from the normal equations.
///
/// With `n` points, centroid `c` and image centroid `fc`:
/// `alpha = sum (v - c)·(f(v) - fc) / sum |v - c|^2` and `x = fc - alpha c`.
/// If all points coincide, `alpha` is taken to be zero.
fn fit_homothety(g: &GeometricGraph, images: &BTreeMap<usize, RVector>) -> (Rational, RVector) {
    let pts: Vec<RVector> = g.vertices.values().cloned().collect();
    let imgs: Vec<RVector> = g.vertices.keys().map(|k| images[k].clone()).collect();
    if pts.is_empty() {
        return (Rational::zero(), RVector::zeros(g.dim));
    }
    let c = RVector::centroid(&pts);
    let fc = RVector::centroid(&imgs);
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for (p, q) in pts.iter().zip(&imgs) {
        let dp = p - &c;
        num += dp.dot(&(q - &fc));
        den += dp.dot(&dp);
    }
    let alpha = if den.is_zero() { Rational::zero() } else { num / den };
    let shift = &fc - &c.scale(&alpha);
    (alpha, shift)
}

/// Dimension and a basis of the space of decomposing functions on `g`.
///
/// Unknowns are one scalar per edge followed by `d` coordinates per vertex;
/// each edge contributes the `d` equations `f(u) - f(v) - lambda (u - v) = 0`.
/// Since the endpoints of an edge differ, the scalars are determined by `f`
/// and the kernel dimension is the dimension of the function space.
///
/// Homotheties always give `d + 1` dimensions when the vertices affinely
/// span the space. For a graph inside a proper affine subspace the
/// restricted homotheties can give fewer, so the `d + 1` threshold used by
/// [`is_indecomposable_graph`] only means something for spanning graphs.
pub fn decomposing_space(g: &GeometricGraph) -> Result<(usize, Vec<DecomposingFunction>), Error> {
    if g.edges.is_empty() {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    let d = g.dim;
    let m = g.edges.len();
    let slot: BTreeMap<usize, usize> = g.vertices.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let cols = m + d * slot.len();
    let mut a = RMatrix::zeros(m * d, cols);
    for (k, &(u, v)) in g.edges.iter().enumerate() {
        let diff = &g.vertices[&u] - &g.vertices[&v];
        for i in 0..d {
            let r = k * d + i;
            a.set(r, k, -diff[i].clone());
            a.set(r, m + slot[&u] * d + i, Rational::from_integer(1.into()));
            a.set(r, m + slot[&v] * d + i, Rational::from_integer((-1).into()));
        }
    }
    let (_, kernel) = a.rank_and_kernel();
    let basis = kernel
        .iter()
        .map(|x| DecomposingFunction {
            edge_scalars: g.edges.iter().enumerate().map(|(k, &e)| (e, x[k].clone())).collect(),
            images: slot
                .iter()
                .map(|(&key, &i)| (key, RVector::new(x[m + i * d..m + (i + 1) * d].to_vec())))
                .collect(),
        })
        .collect();
    Ok((kernel.len(), basis))
}

/// Whether the connected, spanning graph `g` is indecomposable: its
/// decomposing functions are exactly the `d + 1` dimensional homotheties.
pub fn is_indecomposable_graph(g: &GeometricGraph) -> Result<bool, Error> {
    if !g.is_connected() {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    if !g.is_spanning() {
        return Err(Error::Precondition(format!(
            "vertices do not affinely span dimension {}",
            g.dim
        )));
    }
    Ok(decomposing_space(g)?.0 == g.dim + 1)
}

/// The vertices and edges of `p`.
pub fn skeleton(p: &Polytope) -> GeometricGraph {
    GeometricGraph::from_polytope(p, 0..p.num_vertices(), p.edges().iter().copied())
        .expect("polytope edges join distinct vertices")
}

/// Result of the linear-algebra decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub status: Status,
    /// Dimension of the decomposing-function space of the skeleton.
    pub dimension: usize,
    /// For decomposable polytopes, a basis function that is not a homothety.
    pub witness: Option<DecomposingFunction>,
}

impl OracleVerdict {
    /// Witness images rendered as text, for reports.
    pub fn witness_text(&self) -> Option<BTreeMap<usize, String>> {
        self.witness
            .as_ref()
            .map(|w| w.images.iter().map(|(k, v)| (*k, v.to_string())).collect())
    }
}

/// Decides decomposability of `p` from the rank of its skeleton's system.
pub fn oracle_verdict(p: &Polytope) -> Result<OracleVerdict, Error> {
    let g = skeleton(p);
    let (dimension, basis) = decomposing_space(&g)?;
    if dimension == p.dim() + 1 {
        return Ok(OracleVerdict {
            status: Status::Indecomposable,
            dimension,
            witness: None,
        });
    }
    let witness = basis.into_iter().find(|f| !f.is_homothety(&g));
    Ok(OracleVerdict {
        status: Status::Decomposable,
        dimension,
        witness,
    })
}

/// Whether `vertices` meets every facet of `p`.
pub fn touches_every_facet(vertices: &BTreeSet<usize>, p: &Polytope) -> bool {
    p.facets().iter().all(|f| f.iter().any(|v| vertices.contains(v)))
}
