use std::collections::BTreeSet;
use std::fmt;

use num::{Signed, Zero};

use crate::graph::{skeleton, touches_every_facet};
use crate::linalg::{affinely_independent, fit_hyperplane, sign, RVector};
use crate::polytope::{edge, facet_as_polytope, Edge, Polytope};
use crate::Status;

use super::{shephard_witness, CertificateTrace, CertifiedGraph, CertificateStep, Conclusion, Derivation, GraphRef};

/// The first step that failed to check, numbered from 1 (0 for problems
/// with the trace as a whole).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step_{}: {}", self.step, self.reason)
    }
}

impl std::error::Error for ReplayError {}

type Graph = (BTreeSet<usize>, BTreeSet<Edge>);

/// Re-checks every step of `trace` against `p` from scratch.
pub fn replay(trace: &CertificateTrace, p: &Polytope) -> Result<(), ReplayError> {
    let whole = |reason: &str| ReplayError {
        step: 0,
        reason: reason.to_string(),
    };
    let last = trace.steps.last().ok_or_else(|| whole("empty trace"))?;
    match last.conclusion {
        Conclusion::Polytope(s) if s == trace.verdict => {}
        Conclusion::Polytope(s) => {
            return Err(whole(&format!("last step concludes {s}, verdict is {}", trace.verdict)))
        }
        _ => return Err(whole("last step does not conclude a status")),
    }
    let mut r = Replayer::new(p.clone());
    for (k, step) in trace.steps.iter().enumerate() {
        let fail = |reason: String| ReplayError { step: k + 1, reason };
        if k + 1 < trace.steps.len() && matches!(step.conclusion, Conclusion::Polytope(_)) {
            return Err(fail("a status is concluded before the last step".into()));
        }
        r.check(step).map_err(fail)?;
    }
    Ok(())
}

/// Re-checks a graph derivation against `p`.
pub fn replay_graph(g: &CertifiedGraph, p: &Polytope) -> Result<(), ReplayError> {
    if g.steps.is_empty() {
        return Err(ReplayError {
            step: 0,
            reason: "empty derivation".into(),
        });
    }
    let mut r = Replayer::new(p.clone());
    for (k, step) in g.steps.iter().enumerate() {
        let fail = |reason: String| ReplayError { step: k + 1, reason };
        if !matches!(step.conclusion, Conclusion::Graph { .. }) {
            return Err(fail("graph derivations only conclude graphs".into()));
        }
        r.check(step).map_err(fail)?;
    }
    Ok(())
}

struct Replayer {
    p: Polytope,
    /// Graph concluded by each step so far; `None` for other conclusions
    /// and for steps about a polytope since reduced.
    graphs: Vec<Option<Graph>>,
    /// Vertex order of each step that is an independent cycle.
    cycles: Vec<Option<Vec<usize>>>,
}

impl Replayer {
    fn new(p: Polytope) -> Self {
        Self {
            p,
            graphs: Vec::new(),
            cycles: Vec::new(),
        }
    }

    fn vertex(&self, v: usize) -> Result<(), String> {
        if v < self.p.num_vertices() {
            Ok(())
        } else {
            Err(format!("vertex {v} out of range"))
        }
    }

    fn skeletal(&self, (u, v): Edge) -> Result<(), String> {
        self.vertex(u)?;
        self.vertex(v)?;
        if self.p.is_edge(u, v) {
            Ok(())
        } else {
            Err(format!("{u}-{v} is not an edge of the polytope"))
        }
    }

    fn graph(&self, r: GraphRef) -> Result<Graph, String> {
        match r {
            GraphRef::Edge(u, v) => {
                self.skeletal((u, v))?;
                Ok((BTreeSet::from([u, v]), BTreeSet::from([edge(u, v)])))
            }
            GraphRef::Step(k) => self
                .graphs
                .get(k)
                .cloned()
                .flatten()
                .ok_or_else(|| format!("{r} is not an earlier certified graph")),
        }
    }

    fn check(&mut self, step: &CertificateStep) -> Result<(), String> {
        let (derived, graph) = self.derive(&step.derivation)?;
        if derived != step.conclusion {
            return Err(format!("derivation gives {derived}, step claims {}", step.conclusion));
        }
        self.graphs.push(graph);
        self.cycles.push(match &step.derivation {
            Derivation::IndependentCycle { cycle } => Some(cycle.clone()),
            _ => None,
        });
        if let (Derivation::PyramidReduction { vertex, .. }, Conclusion::SameStatus { .. }) =
            (&step.derivation, &step.conclusion)
        {
            let (reduced, _) = unstacked(&self.p, *vertex)?;
            self.p = reduced;
            // Earlier graphs use the old vertex numbering.
            self.graphs.iter_mut().for_each(|g| *g = None);
            self.cycles.iter_mut().for_each(|c| *c = None);
        }
        Ok(())
    }

    fn derive(&self, d: &Derivation) -> Result<(Conclusion, Option<Graph>), String> {
        let graph = |g: Graph| Ok((Conclusion::Graph { vertices: g.0.clone(), edges: g.1.clone() }, Some(g)));
        let status = |s| Ok((Conclusion::Polytope(s), None));
        match d {
            Derivation::SimpleExtension {
                base,
                vertex,
                anchors,
            } => {
                let (mut vs, mut es) = self.graph(*base)?;
                let (a, c) = *anchors;
                if vs.contains(vertex) {
                    return Err(format!("vertex {vertex} is already in the graph"));
                }
                if a == c || !vs.contains(&a) || !vs.contains(&c) {
                    return Err(format!("anchors {a}, {c} are not two vertices of the graph"));
                }
                self.skeletal((*vertex, a))?;
                self.skeletal((*vertex, c))?;
                let pts = [self.p.vertex(*vertex).clone(), self.p.vertex(a).clone(), self.p.vertex(c).clone()];
                if !affinely_independent(&pts).map_err(|e| e.to_string())? {
                    return Err("the new vertex is collinear with its anchors".into());
                }
                vs.insert(*vertex);
                es.insert(edge(*vertex, a));
                es.insert(edge(*vertex, c));
                graph((vs, es))
            }
            Derivation::UnionSharedPair { first, second } => {
                let (v1, e1) = self.graph(*first)?;
                let (v2, e2) = self.graph(*second)?;
                if v1.intersection(&v2).count() < 2 {
                    return Err("graphs share fewer than two vertices".into());
                }
                graph((&v1 | &v2, &e1 | &e2))
            }
            Derivation::EdgeReplacement { host, edge: e, with } => {
                let (hv, mut he) = self.graph(*host)?;
                let (gv, ge) = self.graph(*with)?;
                let e = edge(e.0, e.1);
                if !he.remove(&e) {
                    return Err(format!("{}-{} is not an edge of the host", e.0, e.1));
                }
                if !(gv.contains(&e.0) && gv.contains(&e.1)) {
                    return Err("replacement graph misses an endpoint".into());
                }
                graph((&hv | &gv, &he | &ge))
            }
            Derivation::IndependentCycle { cycle } => {
                let n = cycle.len();
                if n < 3 {
                    return Err("a cycle needs at least three vertices".into());
                }
                for &v in cycle {
                    self.vertex(v)?;
                }
                let vs: BTreeSet<usize> = cycle.iter().copied().collect();
                if vs.len() != n {
                    return Err("cycle repeats a vertex".into());
                }
                let pts: Vec<RVector> = cycle.iter().map(|&v| self.p.vertex(v).clone()).collect();
                if !affinely_independent(&pts).map_err(|e| e.to_string())? {
                    return Err("cycle vertices are affinely dependent".into());
                }
                let es = (0..n).map(|i| edge(cycle[i], cycle[(i + 1) % n])).collect();
                graph((vs, es))
            }
            Derivation::CycleGluing { cycle, parts } => {
                // The referenced step must itself be checked; its graph is
                // then an independent cycle.
                self.graph(GraphRef::Step(*cycle))?;
                let connectors = self.cycle_order(*cycle)?;
                let n = connectors.len();
                if parts.len() != n {
                    return Err(format!("{} parts for a cycle of length {n}", parts.len()));
                }
                let mut vs = BTreeSet::new();
                let mut es = BTreeSet::new();
                for (i, part) in parts.iter().enumerate() {
                    let (pv, pe) = self.graph(*part)?;
                    let (a, b) = (connectors[i], connectors[(i + 1) % n]);
                    if !(pv.contains(&a) && pv.contains(&b)) {
                        return Err(format!("part {} misses connector {a} or {b}", i + 1));
                    }
                    vs.extend(pv);
                    es.extend(pe);
                }
                graph((vs, es))
            }
            Derivation::TwoGraphCover {
                first,
                second,
                link,
            } => {
                let (v1, e1) = self.graph(*first)?;
                let (v2, e2) = self.graph(*second)?;
                for &e in e1.iter().chain(&e2) {
                    self.skeletal(e)?;
                }
                let common: Vec<usize> = v1.intersection(&v2).copied().collect();
                if common.is_empty() {
                    return Err("graphs have no common vertex".into());
                }
                let missing = self.p.num_vertices() - v1.union(&v2).count();
                if missing + 2 > self.p.dim() {
                    return Err(format!("{missing} vertices missed, more than d - 2"));
                }
                match (common.len(), link) {
                    (n, None) if n >= 2 => {}
                    (1, Some((a, z))) => {
                        let c = common[0];
                        if !(v1.contains(a) && *a != c && v2.contains(z) && *z != c) {
                            return Err("link does not join the two graphs away from the common vertex".into());
                        }
                        self.skeletal((*a, *z))?;
                        let pts = [self.p.vertex(*a).clone(), self.p.vertex(c).clone(), self.p.vertex(*z).clone()];
                        if !affinely_independent(&pts).map_err(|e| e.to_string())? {
                            return Err("link and common vertex are collinear".into());
                        }
                    }
                    _ => return Err("link must be given exactly when one vertex is shared".into()),
                }
                status(Status::Indecomposable)
            }
            Derivation::FacetCoverage { graph: g } => {
                let (vs, es) = self.graph(*g)?;
                for &e in &es {
                    self.skeletal(e)?;
                }
                if !touches_every_facet(&vs, &self.p) {
                    return Err("graph misses a facet".into());
                }
                status(Status::Indecomposable)
            }
            Derivation::ShephardFacet { facet } => {
                self.check_shephard(*facet)?;
                status(Status::Decomposable)
            }
            Derivation::PyramidApex { apex, base } => {
                self.vertex(*apex)?;
                let f = self
                    .p
                    .facets()
                    .get(*base)
                    .ok_or_else(|| format!("facet {base} out of range"))?;
                if f.contains(apex) || f.len() + 1 != self.p.num_vertices() {
                    return Err(format!("facet {base} does not contain every vertex but {apex}"));
                }
                status(Status::Indecomposable)
            }
            Derivation::PyramidReduction {
                vertex,
                facet_trace,
            } => {
                let (reduced, facet) = unstacked(&self.p, *vertex)?;
                if facet_trace.verdict != Status::Indecomposable {
                    return Err("facet certificate does not conclude indecomposable".into());
                }
                let base = facet_as_polytope(&reduced, facet).map_err(|e| e.to_string())?;
                replay(facet_trace, &base).map_err(|e| format!("facet certificate: {e}"))?;
                Ok((Conclusion::SameStatus { removed: *vertex }, None))
            }
            Derivation::SmilanskyCount { vertices, facets } => {
                let fv = self.p.fvector();
                if self.p.dim() != 3 || (fv.vertices, fv.facets) != (*vertices, *facets) {
                    return Err("counts do not match the polyhedron".into());
                }
                if vertices > facets {
                    status(Status::Decomposable)
                } else if facets + 6 >= 2 * vertices {
                    status(Status::Indecomposable)
                } else {
                    Err("neither count test applies".into())
                }
            }
            Derivation::LowVertexCount { vertices, dim } => {
                if (self.p.num_vertices(), self.p.dim()) != (*vertices, *dim) {
                    return Err("counts do not match the polytope".into());
                }
                if vertices >= &(2 * dim) {
                    return Err(format!("{vertices} vertices is not below 2d = {}", 2 * dim));
                }
                status(Status::Indecomposable)
            }
        }
    }

    /// Vertex order of the independent cycle concluded at step `k`.
    fn cycle_order(&self, k: usize) -> Result<Vec<usize>, String> {
        self.cycles
            .get(k)
            .cloned()
            .flatten()
            .ok_or_else(|| format!("step_{} is not an independent cycle", k + 1))
    }

    fn check_shephard(&self, facet: usize) -> Result<(), String> {
        let p = &self.p;
        let f = p
            .facets()
            .get(facet)
            .ok_or_else(|| format!("facet {facet} out of range"))?;
        if p.num_vertices() - f.len() < 2 {
            return Err("fewer than two vertices outside the facet".into());
        }
        for &v in f {
            let outside = p.neighbors(v).into_iter().filter(|w| !f.contains(w)).count();
            if outside != 1 {
                return Err(format!("vertex {v} has {outside} neighbours outside the facet"));
            }
        }
        let w = shephard_witness(p, facet).ok_or("no witness")?;
        let g = skeleton(p);
        w.check(&g)?;
        for v in 0..p.num_vertices() {
            if !f.contains(&v) && &w.images[&v] != p.vertex(v) {
                return Err(format!("witness moves vertex {v} outside the facet"));
            }
        }
        if w.is_homothety(&g) {
            return Err("witness is a homothety".into());
        }
        Ok(())
    }
}

/// Checks that `u` is a pyramid apex stacked on a facet of the hull of the
/// other vertices; returns that hull and the facet index.
fn unstacked(p: &Polytope, u: usize) -> Result<(Polytope, usize), String> {
    if u >= p.num_vertices() {
        return Err(format!("vertex {u} out of range"));
    }
    if p.dim() < 3 {
        return Err("reductions need dimension at least 3".into());
    }
    let nbrs = p.neighbors(u);
    let pts: Vec<RVector> = nbrs.iter().map(|&v| p.vertex(v).clone()).collect();
    let (a, b) = fit_hyperplane(&pts)
        .map_err(|e| e.to_string())?
        .ok_or("neighbours of the vertex do not span a hyperplane")?;
    let side = sign(&(a.dot(p.vertex(u)) - &b));
    if side == 0 {
        return Err("vertex lies on its neighbours' hyperplane".into());
    }
    if (0..p.num_vertices())
        .any(|w| w != u && !nbrs.contains(&w) && sign(&(a.dot(p.vertex(w)) - &b)) != -side)
    {
        return Err("neighbours' hyperplane does not separate the vertex".into());
    }
    let rest: Vec<RVector> = (0..p.num_vertices())
        .filter(|&v| v != u)
        .map(|v| p.vertex(v).clone())
        .collect();
    let reduced = Polytope::from_vertices(rest, None).map_err(|e| e.to_string())?;
    let base: Vec<usize> = nbrs.iter().map(|&v| if v > u { v - 1 } else { v }).collect();
    let facet = reduced
        .facets()
        .iter()
        .position(|f| *f == base)
        .ok_or("neighbours do not form a facet of the rest")?;
    for g in 0..reduced.facets().len() {
        if g != facet {
            let (ag, bg) = reduced.facet_inequality(g);
            let gap = ag.dot(p.vertex(u)) - bg;
            if !gap.is_negative() {
                let what = if gap.is_zero() { "on" } else { "beyond" };
                return Err(format!("vertex lies {what} facet {g} of the rest"));
            }
        }
    }
    Ok((reduced, facet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{certify, simple_extension_closure};
    use crate::polytope::{construct_basic, Kind};

    fn traced(kind: Kind) -> (Polytope, CertificateTrace) {
        let p = construct_basic(&kind).unwrap();
        let t = certify(&p).unwrap().expect("certified");
        (p, t)
    }

    #[test]
    fn engine_traces_replay() {
        for kind in [
            Kind::Octahedron,
            Kind::Delta(1, 2),
            Kind::Delta(2, 2),
            Kind::CappedPrism,
            Kind::Bd182,
            Kind::Bd198,
            Kind::Simplex(4),
            Kind::Bipyramid3,
            Kind::Wedge(4),
            Kind::Cube(3),
        ] {
            let (p, t) = traced(kind.clone());
            assert_eq!(replay(&t, &p), Ok(()), "{kind:?}\n{t}");
        }
    }

    #[test]
    fn flipped_verdict_fails() {
        let (p, mut t) = traced(Kind::Octahedron);
        t.verdict = Status::Decomposable;
        assert_eq!(replay(&t, &p).unwrap_err().step, 0);
        let last = t.steps.last_mut().unwrap();
        last.conclusion = Conclusion::Polytope(Status::Decomposable);
        assert!(replay(&t, &p).is_err());
    }

    #[test]
    fn altered_graph_fails() {
        let (p, mut t) = traced(Kind::Octahedron);
        let Conclusion::Graph { vertices, .. } = &mut t.steps[0].conclusion else {
            panic!("first step is a graph");
        };
        vertices.insert(99);
        assert_eq!(replay(&t, &p).unwrap_err().step, 1);
    }

    #[test]
    fn forward_reference_fails() {
        let (p, mut t) = traced(Kind::Octahedron);
        let n = t.steps.len();
        if let Derivation::FacetCoverage { graph } = &mut t.steps[n - 1].derivation {
            *graph = GraphRef::Step(n + 3);
        }
        assert_eq!(replay(&t, &p).unwrap_err().step, n);
    }

    #[test]
    fn trace_checked_against_the_wrong_polytope_fails() {
        let (_, t) = traced(Kind::Delta(1, 2));
        let octahedron = construct_basic(&Kind::Octahedron).unwrap();
        assert!(replay(&t, &octahedron).is_err());
    }

    #[test]
    fn graph_derivations_replay() {
        let p = construct_basic(&Kind::Octahedron).unwrap();
        let g = simple_extension_closure(&p, (0, 2)).unwrap();
        assert_eq!(replay_graph(&g, &p), Ok(()));
        let square = construct_basic(&Kind::Cube(2)).unwrap();
        assert!(replay_graph(&g, &square).is_err());
    }
}
