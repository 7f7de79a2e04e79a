use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::graph::{skeleton, touches_every_facet, DecomposingFunction};
use crate::linalg::{affine_rank, affinely_independent, fit_hyperplane, sign, RVector};
use crate::polytope::{edge, facet_as_polytope, Edge, Polytope};
use crate::{Error, Status};

use super::analyze::certify;
use super::{CertificateTrace, CertifiedGraph, Conclusion, Derivation, GraphRef, TraceBuilder};

/// Upper bound on search nodes visited while enumerating cycles.
pub(crate) const CYCLE_BUDGET: usize = 200_000;

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::RuleNotApplicable(msg.into())
}

/// Grows `base` by simple extensions until no vertex outside it has two
/// neighbours inside. The smallest such vertex is absorbed first, joined to
/// its two smallest neighbours inside.
pub(crate) fn extend_closure(p: &Polytope, b: &mut TraceBuilder, base: GraphRef) -> GraphRef {
    let (mut vertices, mut edges) = b.graph(base);
    let neighbors: Vec<Vec<usize>> = (0..p.num_vertices()).map(|v| p.neighbors(v)).collect();
    let mut current = base;
    loop {
        let next = (0..p.num_vertices()).find_map(|w| {
            if vertices.contains(&w) {
                return None;
            }
            let mut inside = neighbors[w].iter().filter(|u| vertices.contains(u));
            match (inside.next(), inside.next()) {
                (Some(&a), Some(&c)) => Some((w, a, c)),
                _ => None,
            }
        });
        let Some((w, a, c)) = next else {
            return current;
        };
        vertices.insert(w);
        edges.insert(edge(a, w));
        edges.insert(edge(c, w));
        let k = b.push(
            Derivation::SimpleExtension {
                base: current,
                vertex: w,
                anchors: (a, c),
            },
            Conclusion::Graph {
                vertices: vertices.clone(),
                edges: edges.clone(),
            },
        );
        current = GraphRef::Step(k);
    }
}

/// Certifies the simple-extension closure of a skeleton edge.
pub fn simple_extension_closure(p: &Polytope, seed: Edge) -> Result<CertifiedGraph, Error> {
    let (u, v) = edge(seed.0, seed.1);
    if !p.is_edge(u, v) {
        return Err(Error::Precondition(format!("{u}-{v} is not an edge")));
    }
    let mut b = TraceBuilder::default();
    let last = match extend_closure(p, &mut b, GraphRef::Edge(u, v)) {
        GraphRef::Step(k) => k,
        GraphRef::Edge(u, v) => b.push(
            Derivation::UnionSharedPair {
                first: GraphRef::Edge(u, v),
                second: GraphRef::Edge(u, v),
            },
            Conclusion::edge_graph(u, v),
        ),
    };
    Ok(b.into_graph(last))
}

/// Greedy chain of triangular facets from `start`: repeatedly adds the
/// lowest-indexed triangle sharing an edge with the union so far. Returns
/// the facet indices in order.
fn greedy_chain(p: &Polytope, triangles: &[usize], start: usize) -> Vec<usize> {
    let tri_edges = |f: usize| {
        let t = &p.facets()[f];
        [edge(t[0], t[1]), edge(t[0], t[2]), edge(t[1], t[2])]
    };
    let mut chain = vec![start];
    let mut union: BTreeSet<Edge> = tri_edges(start).into_iter().collect();
    loop {
        let next = triangles
            .iter()
            .copied()
            .find(|t| !chain.contains(t) && tri_edges(*t).iter().any(|e| union.contains(e)));
        let Some(t) = next else {
            return chain;
        };
        union.extend(tri_edges(t));
        chain.push(t);
    }
}

/// Certifies the union vertex set of a longest chain of triangular facets
/// (three-dimensional polytopes only). Each triangle adding a new vertex
/// contributes one simple extension across its shared edge.
pub fn chain_of_triangles(p: &Polytope) -> Result<Option<CertifiedGraph>, Error> {
    if p.dim() != 3 {
        return Ok(None);
    }
    let triangles: Vec<usize> = (0..p.facets().len())
        .filter(|&f| p.facets()[f].len() == 3)
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for &t in &triangles {
        let chain = greedy_chain(p, &triangles, t);
        if best.as_ref().is_none_or(|b| chain.len() > b.len()) {
            best = Some(chain);
        }
    }
    let Some(chain) = best else {
        return Ok(None);
    };
    let mut b = TraceBuilder::default();
    let first = &p.facets()[chain[0]];
    let mut union: BTreeSet<Edge> = BTreeSet::new();
    let mut current = GraphRef::Edge(first[0], first[1]);
    let (mut vertices, mut edges) = b.graph(current);
    for &t in &chain {
        let tri = &p.facets()[t];
        let pairs = [(tri[0], tri[1], tri[2]), (tri[0], tri[2], tri[1]), (tri[1], tri[2], tri[0])];
        let shared = if union.is_empty() {
            Some(pairs[0])
        } else {
            pairs.into_iter().find(|&(x, y, _)| union.contains(&edge(x, y)))
        };
        let (x, y, z) = shared.expect("chain triangles share an edge");
        union.extend([edge(x, y), edge(x, z), edge(y, z)]);
        if vertices.contains(&z) {
            continue;
        }
        vertices.insert(z);
        edges.insert(edge(x, z));
        edges.insert(edge(y, z));
        let k = b.push(
            Derivation::SimpleExtension {
                base: current,
                vertex: z,
                anchors: (x, y),
            },
            Conclusion::Graph {
                vertices: vertices.clone(),
                edges: edges.clone(),
            },
        );
        current = GraphRef::Step(k);
    }
    match current {
        GraphRef::Step(k) => Ok(Some(b.into_graph(k))),
        GraphRef::Edge(..) => Ok(None),
    }
}

/// Calls `visit` on skeleton cycles of length `3..=max_len` whose vertices
/// are affinely independent, in lexicographic order of their vertex
/// sequence (smallest vertex first, second vertex below the last). Stops
/// when `visit` returns true or after `budget` search nodes. Returns whether
/// the search was cut short by the budget.
pub(crate) fn for_each_independent_cycle(
    p: &Polytope,
    max_len: usize,
    budget: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    let neighbors: Vec<Vec<usize>> = (0..p.num_vertices()).map(|v| p.neighbors(v)).collect();
    let mut nodes = 0usize;
    let mut stopped = false;

    #[allow(clippy::too_many_arguments)]
    fn grow(
        p: &Polytope,
        neighbors: &[Vec<usize>],
        path: &mut Vec<usize>,
        max_len: usize,
        nodes: &mut usize,
        budget: usize,
        stopped: &mut bool,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let start = path[0];
        let last = *path.last().expect("nonempty path");
        if path.len() >= 3 && p.is_edge(last, start) && path[1] < last && visit(path) {
            return true;
        }
        if path.len() == max_len {
            return false;
        }
        for &w in &neighbors[last] {
            if w <= start || path.contains(&w) {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                *stopped = true;
                return true;
            }
            path.push(w);
            let pts: Vec<RVector> = path.iter().map(|&i| p.vertex(i).clone()).collect();
            let independent = affinely_independent(&pts).unwrap_or(false);
            if independent
                && grow(p, neighbors, path, max_len, nodes, budget, stopped, visit)
            {
                path.pop();
                return true;
            }
            path.pop();
        }
        false
    }

    for s in 0..p.num_vertices() {
        let mut path = vec![s];
        if grow(p, &neighbors, &mut path, max_len, &mut nodes, budget, &mut stopped, &mut visit) {
            break;
        }
    }
    stopped
}

pub(crate) fn cycle_conclusion(cycle: &[usize]) -> Conclusion {
    let n = cycle.len();
    Conclusion::Graph {
        vertices: cycle.iter().copied().collect(),
        edges: (0..n).map(|i| edge(cycle[i], cycle[(i + 1) % n])).collect(),
    }
}

/// Finds a skeleton cycle of length at most `max_len` through affinely
/// independent vertices that meets every facet.
pub fn independent_cycle_search(
    p: &Polytope,
    max_len: usize,
) -> Result<Option<CertificateTrace>, Error> {
    if max_len < 3 || max_len > p.dim() + 1 {
        return Err(Error::Precondition(format!(
            "cycle length bound {max_len} is outside 3..={}",
            p.dim() + 1
        )));
    }
    let mut found = None;
    for_each_independent_cycle(p, max_len, CYCLE_BUDGET, |c| {
        if touches_every_facet(&c.iter().copied().collect(), p) {
            found = Some(c.to_vec());
            true
        } else {
            false
        }
    });
    Ok(found.map(|cycle| {
        let mut b = TraceBuilder::default();
        let k = b.push(
            Derivation::IndependentCycle {
                cycle: cycle.clone(),
            },
            cycle_conclusion(&cycle),
        );
        close_by_coverage(&mut b, GraphRef::Step(k));
        b.finish(coverage_note(cycle.len(), p))
    }))
}

pub(crate) fn coverage_note(vertices: usize, p: &Polytope) -> String {
    format!(
        "certified subgraph on {vertices} vertices meets all {} facets",
        p.facets().len()
    )
}

pub(crate) fn close_by_coverage(b: &mut TraceBuilder, graph: GraphRef) {
    b.push(
        Derivation::FacetCoverage { graph },
        Conclusion::Polytope(Status::Indecomposable),
    );
}

fn union_conclusion(a: &(BTreeSet<usize>, BTreeSet<Edge>), c: &(BTreeSet<usize>, BTreeSet<Edge>)) -> Conclusion {
    Conclusion::Graph {
        vertices: a.0.union(&c.0).copied().collect(),
        edges: a.1.union(&c.1).copied().collect(),
    }
}

/// Pushes the union of two certified graphs sharing two vertices.
pub(crate) fn push_union(b: &mut TraceBuilder, first: GraphRef, second: GraphRef) -> Result<usize, Error> {
    let g1 = b.graph(first);
    let g2 = b.graph(second);
    let shared = g1.0.intersection(&g2.0).count();
    if shared < 2 {
        return Err(not_applicable(format!(
            "graphs share {shared} vertices, need at least 2"
        )));
    }
    Ok(b.push(
        Derivation::UnionSharedPair { first, second },
        union_conclusion(&g1, &g2),
    ))
}

/// Union of two certified graphs with at least two common vertices.
pub fn union_shared_pair(c1: &CertifiedGraph, c2: &CertifiedGraph) -> Result<CertifiedGraph, Error> {
    let mut b = TraceBuilder::default();
    let a = b.import(c1);
    let c = b.import(c2);
    let k = push_union(&mut b, GraphRef::Step(a), GraphRef::Step(c))?;
    Ok(b.into_graph(k))
}

/// Replaces edge `e` of `h` by the graph `g`, which must contain both of
/// its endpoints.
pub fn edge_replacement(h: &CertifiedGraph, e: Edge, g: &CertifiedGraph) -> Result<CertifiedGraph, Error> {
    let e = edge(e.0, e.1);
    if !h.edges().contains(&e) {
        return Err(not_applicable(format!("{}-{} is not an edge of the host", e.0, e.1)));
    }
    if !(g.vertices().contains(&e.0) && g.vertices().contains(&e.1)) {
        return Err(not_applicable("replacement graph misses an endpoint"));
    }
    let mut b = TraceBuilder::default();
    let host = GraphRef::Step(b.import(h));
    let with = GraphRef::Step(b.import(g));
    let (hv, mut he) = b.graph(host);
    let (gv, ge) = b.graph(with);
    he.remove(&e);
    let k = b.push(
        Derivation::EdgeReplacement { host, edge: e, with },
        Conclusion::Graph {
            vertices: hv.union(&gv).copied().collect(),
            edges: he.union(&ge).copied().collect(),
        },
    );
    Ok(b.into_graph(k))
}

/// Pushes an independent cycle on `connectors` and the union of `parts`
/// glued along it.
pub(crate) fn push_gluing(
    p: &Polytope,
    b: &mut TraceBuilder,
    parts: &[GraphRef],
    connectors: &[usize],
) -> Result<usize, Error> {
    let n = connectors.len();
    if n != parts.len() {
        return Err(not_applicable("one connector per part is needed"));
    }
    if n == 2 {
        if connectors[0] == connectors[1] {
            return Err(not_applicable("connectors coincide"));
        }
        let both = |r: GraphRef| {
            let v = b.graph(r).0;
            connectors.iter().all(|c| v.contains(c))
        };
        if !(both(parts[0]) && both(parts[1])) {
            return Err(not_applicable("connectors are not shared"));
        }
        return push_union(b, parts[0], parts[1]);
    }
    if n < 2 {
        return Err(not_applicable("gluing needs at least two parts"));
    }
    let pts: Vec<RVector> = connectors.iter().map(|&v| p.vertex(v).clone()).collect();
    if !affinely_independent(&pts)? {
        return Err(not_applicable("connectors are affinely dependent"));
    }
    for (i, &part) in parts.iter().enumerate() {
        let v = b.graph(part).0;
        if !v.contains(&connectors[i]) || !v.contains(&connectors[(i + 1) % n]) {
            return Err(not_applicable(format!(
                "part {i} misses connector {} or {}",
                connectors[i],
                connectors[(i + 1) % n]
            )));
        }
    }
    let cycle = b.push(
        Derivation::IndependentCycle {
            cycle: connectors.to_vec(),
        },
        cycle_conclusion(connectors),
    );
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &part in parts {
        let (v, e) = b.graph(part);
        vertices.extend(v);
        edges.extend(e);
    }
    Ok(b.push(
        Derivation::CycleGluing {
            cycle,
            parts: parts.to_vec(),
        },
        Conclusion::Graph { vertices, edges },
    ))
}

/// Glues certified graphs around a cycle of affinely independent
/// connectors: part `i` must contain connectors `i` and `i + 1`
/// (cyclically). Two parts fall back to a shared-pair union.
pub fn cycle_gluing(
    p: &Polytope,
    parts: &[CertifiedGraph],
    connectors: &[usize],
) -> Result<CertifiedGraph, Error> {
    let mut b = TraceBuilder::default();
    let refs: Vec<GraphRef> = parts.iter().map(|g| GraphRef::Step(b.import(g))).collect();
    let k = push_gluing(p, &mut b, &refs, connectors)?;
    Ok(b.into_graph(k))
}

/// Whether two certified skeleton subgraphs close the argument by covering
/// all but `d - 2` vertices. Returns the connecting edge needed when they
/// share only one vertex.
pub(crate) fn two_cover_link(
    p: &Polytope,
    v1: &BTreeSet<usize>,
    v2: &BTreeSet<usize>,
) -> Result<Option<Edge>, Error> {
    let common: Vec<usize> = v1.intersection(v2).copied().collect();
    if common.is_empty() {
        return Err(not_applicable("graphs have no common vertex"));
    }
    let covered = v1.union(v2).count();
    let missing = p.num_vertices() - covered;
    if missing + 2 > p.dim() {
        return Err(not_applicable(format!(
            "{missing} vertices missed, at most d - 2 = {} allowed",
            p.dim().saturating_sub(2)
        )));
    }
    if common.len() >= 2 {
        return Ok(None);
    }
    let c = common[0];
    for &a in v1.iter().filter(|&&a| a != c) {
        for &z in v2.iter().filter(|&&z| z != c) {
            if p.is_edge(a, z) {
                let pts = [p.vertex(a).clone(), p.vertex(c).clone(), p.vertex(z).clone()];
                if affinely_independent(&pts)? {
                    return Ok(Some((a, z)));
                }
            }
        }
    }
    Err(not_applicable("no edge joins the two graphs"))
}

/// Two certified skeleton subgraphs sharing a vertex and covering all but
/// at most `d - 2` vertices certify the polytope indecomposable.
pub fn two_graph_cover(
    p: &Polytope,
    c1: &CertifiedGraph,
    c2: &CertifiedGraph,
) -> Result<CertificateTrace, Error> {
    for g in [c1, c2] {
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !p.is_edge(u, v)) {
            return Err(not_applicable(format!("{u}-{v} is not a skeleton edge")));
        }
    }
    let link = two_cover_link(p, c1.vertices(), c2.vertices())?;
    let mut b = TraceBuilder::default();
    let first = GraphRef::Step(b.import(c1));
    let second = GraphRef::Step(b.import(c2));
    b.push(
        Derivation::TwoGraphCover {
            first,
            second,
            link,
        },
        Conclusion::Polytope(Status::Indecomposable),
    );
    Ok(b.finish(two_cover_note(p, c1.vertices(), c2.vertices())))
}

pub(crate) fn two_cover_note(p: &Polytope, v1: &BTreeSet<usize>, v2: &BTreeSet<usize>) -> String {
    let missing = p.num_vertices() - v1.union(v2).count();
    format!(
        "two certified subgraphs with a common vertex miss {missing} vertices, at most d - 2 = {}",
        p.dim() - 2
    )
}

/// For each vertex of `facet`, its unique neighbour outside the facet, if
/// every vertex has exactly one and at least two vertices lie outside.
pub(crate) fn shephard_partners(p: &Polytope, facet: usize) -> Option<Vec<(usize, usize)>> {
    let f = &p.facets()[facet];
    if p.num_vertices() - f.len() < 2 {
        return None;
    }
    f.iter()
        .map(|&v| {
            let outside: Vec<usize> = p.neighbors(v).into_iter().filter(|w| !f.contains(w)).collect();
            (outside.len() == 1).then(|| (v, outside[0]))
        })
        .collect()
}

/// The decomposing function built from a qualifying facet: each facet
/// vertex slides along its outside edge to the level of the highest outside
/// neighbour, measured by the facet's support functional; all other
/// vertices stay fixed.
pub fn shephard_witness(p: &Polytope, facet: usize) -> Option<DecomposingFunction> {
    let partners = shephard_partners(p, facet)?;
    let (y, top) = p.facet_inequality(facet);
    let alpha = partners
        .iter()
        .map(|&(_, w)| y.dot(p.vertex(w)))
        .max()
        .expect("facet is nonempty");
    let mut images: BTreeMap<usize, RVector> =
        (0..p.num_vertices()).map(|v| (v, p.vertex(v).clone())).collect();
    for &(v, w) in &partners {
        let yw = y.dot(p.vertex(w));
        let t = (&top - &alpha) / (&top - &yw);
        let step = (p.vertex(w) - p.vertex(v)).scale(&t);
        images.insert(v, p.vertex(v) + &step);
    }
    let edge_scalars = p
        .edges()
        .iter()
        .map(|&(u, v)| {
            let du = p.vertex(u) - p.vertex(v);
            let df = &images[&u] - &images[&v];
            let k = du.iter().position(|x| !x.is_zero()).expect("distinct endpoints");
            ((u, v), &df[k] / &du[k])
        })
        .collect();
    Some(DecomposingFunction {
        images,
        edge_scalars,
    })
}

/// The first facet satisfying the unique-outside-neighbour condition,
/// with the exact witness it yields.
pub fn shephard_facet(p: &Polytope) -> Result<Option<(CertificateTrace, DecomposingFunction)>, Error> {
    for facet in 0..p.facets().len() {
        let Some(f) = shephard_witness(p, facet) else {
            continue;
        };
        let g = skeleton(p);
        if let Err(e) = f.check(&g) {
            return Err(Error::Inconsistent(format!("witness on facet {facet}: {e}")));
        }
        if f.is_homothety(&g) {
            return Err(Error::Inconsistent(format!("witness on facet {facet} is a homothety")));
        }
        let mut b = TraceBuilder::default();
        b.push(
            Derivation::ShephardFacet { facet },
            Conclusion::Polytope(Status::Decomposable),
        );
        return Ok(Some((b.finish(shephard_note(p, facet)), f)));
    }
    Ok(None)
}

pub(crate) fn shephard_note(p: &Polytope, facet: usize) -> String {
    format!(
        "each vertex of facet {facet} has one neighbour outside it, and {} vertices lie outside",
        p.num_vertices() - p.facets()[facet].len()
    )
}

/// A vertex whose complement is a facet, as `(apex, base)`.
pub(crate) fn find_apex(p: &Polytope) -> Option<(usize, usize)> {
    let n = p.num_vertices();
    p.facets().iter().enumerate().find_map(|(f, vs)| {
        (vs.len() + 1 == n).then(|| {
            let apex = (0..n).find(|v| !vs.contains(v)).expect("one vertex off the base");
            (apex, f)
        })
    })
}

/// Certifies a pyramid indecomposable.
pub fn pyramid_apex(p: &Polytope) -> Option<CertificateTrace> {
    let (apex, base) = find_apex(p)?;
    let mut b = TraceBuilder::default();
    b.push(
        Derivation::PyramidApex { apex, base },
        Conclusion::Polytope(Status::Indecomposable),
    );
    Some(b.finish(apex_note(apex, base)))
}

pub(crate) fn apex_note(apex: usize, base: usize) -> String {
    format!("pyramid with apex {apex} over facet {base}")
}

/// A stacked vertex and the polytope left after removing it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub vertex: usize,
    /// The polytope without `vertex`; later indices refer to it.
    pub polytope: Polytope,
    /// Index in `polytope` of the facet the pyramid sits on.
    pub facet: usize,
    /// Certificate that this facet is indecomposable.
    pub facet_trace: CertificateTrace,
}

/// If `u` is the apex of a pyramid stacked on a facet of the polytope
/// spanned by the other vertices, returns that polytope and the facet.
pub(crate) fn unstack(p: &Polytope, u: usize) -> Result<Option<(Polytope, usize)>, Error> {
    let nbrs = p.neighbors(u);
    if nbrs.len() < p.dim() {
        return Ok(None);
    }
    let pts: Vec<RVector> = nbrs.iter().map(|&v| p.vertex(v).clone()).collect();
    let Some((a, b)) = fit_hyperplane(&pts)? else {
        return Ok(None);
    };
    let side = sign(&(a.dot(p.vertex(u)) - &b));
    if side == 0 {
        return Ok(None);
    }
    for w in 0..p.num_vertices() {
        if w != u && !nbrs.contains(&w) && sign(&(a.dot(p.vertex(w)) - &b)) != -side {
            return Ok(None);
        }
    }
    let rest: Vec<RVector> = (0..p.num_vertices())
        .filter(|&v| v != u)
        .map(|v| p.vertex(v).clone())
        .collect();
    if affine_rank(&rest)? != Some(p.dim()) {
        // Removing u leaves a lower-dimensional set: p is a pyramid with apex u.
        return Ok(None);
    }
    let reduced = Polytope::from_vertices(rest, p.name().map(|n| format!("{n}-reduced")))?;
    let base: Vec<usize> = nbrs.iter().map(|&v| if v > u { v - 1 } else { v }).collect();
    let Ok(facet) = reduced.facets().binary_search(&base) else {
        return Ok(None);
    };
    for g in 0..reduced.facets().len() {
        if g == facet {
            continue;
        }
        let (ag, bg) = reduced.facet_inequality(g);
        if !(ag.dot(p.vertex(u)) - bg).is_negative() {
            return Ok(None);
        }
    }
    Ok(Some((reduced, facet)))
}

/// Finds the first vertex that is a stacked apex over a facet the
/// certificate engine can prove indecomposable.
pub fn pyramid_reduction(p: &Polytope) -> Result<Option<Reduction>, Error> {
    if p.dim() < 3 {
        return Ok(None);
    }
    for u in 0..p.num_vertices() {
        let Some((reduced, facet)) = unstack(p, u)? else {
            continue;
        };
        let base = facet_as_polytope(&reduced, facet)?;
        match certify(&base)? {
            Some(t) if t.verdict == Status::Indecomposable => {
                return Ok(Some(Reduction {
                    vertex: u,
                    polytope: reduced,
                    facet,
                    facet_trace: t,
                }))
            }
            _ => continue,
        }
    }
    Ok(None)
}
