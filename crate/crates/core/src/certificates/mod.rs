//! Combinatorial certificates of (in)decomposability.
//!
//! A certificate is a sequence of steps. Graph steps certify that some
//! geometric graph on the polytope's vertices is indecomposable; closing
//! steps turn that into a verdict about the polytope. Every step names the
//! rule it applies and the data it applies it to, so [`replay`] can re-check
//! it against the polytope without trusting the engine that produced it.
//!
//! After a [`Derivation::PyramidReduction`] step, vertex indices in later
//! steps refer to the reduced polytope (the removed vertex dropped and the
//! remaining vertices renumbered in order).

mod analyze;
mod replay;
mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::polytope::{edge, Edge};
use crate::Status;

pub use analyze::{analyze, certify, AnalysisReport, Method, Mode};
pub use replay::{replay, replay_graph, ReplayError};
pub use rules::{
    chain_of_triangles, cycle_gluing, edge_replacement, independent_cycle_search, pyramid_apex,
    pyramid_reduction, shephard_facet, shephard_witness, simple_extension_closure,
    two_graph_cover, union_shared_pair, Reduction,
};

/// Rule names, as printed in traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    SimpleExtension,
    UnionSharedPair,
    EdgeReplacement,
    IndependentCycle,
    CycleGluing,
    TwoGraphCover,
    FacetCoverage,
    ShephardFacet,
    PyramidApex,
    PyramidReduction,
    SmilanskyCount,
    LowVertexCount,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A certified graph: the conclusion of an earlier step, or a single edge
/// of the skeleton (every edge is indecomposable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GraphRef {
    Step(usize),
    Edge(usize, usize),
}

impl fmt::Display for GraphRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphRef::Step(k) => write!(f, "step_{}", k + 1),
            GraphRef::Edge(u, v) => write!(f, "edge {u}-{v}"),
        }
    }
}

/// The rule applied by a step together with its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Derivation {
    /// Adds `vertex` to `base` with the skeleton edges to both `anchors`.
    SimpleExtension {
        base: GraphRef,
        vertex: usize,
        anchors: (usize, usize),
    },
    /// Union of two certified graphs with at least two common vertices.
    UnionSharedPair { first: GraphRef, second: GraphRef },
    /// `host` with `edge` removed and `with` (containing both endpoints)
    /// added.
    EdgeReplacement {
        host: GraphRef,
        edge: Edge,
        with: GraphRef,
    },
    /// A cycle through affinely independent vertices, in cyclic order.
    IndependentCycle { cycle: Vec<usize> },
    /// Union of `parts`, where part `i` contains connectors `i` and `i + 1`
    /// (cyclically) of the independent cycle concluded at step `cycle`.
    CycleGluing { cycle: usize, parts: Vec<GraphRef> },
    /// Two certified skeleton subgraphs with a common vertex that together
    /// miss at most `d - 2` vertices. With a single common vertex, `link`
    /// is a skeleton edge from the first graph to the second.
    TwoGraphCover {
        first: GraphRef,
        second: GraphRef,
        link: Option<Edge>,
    },
    /// A certified skeleton subgraph meeting every facet.
    FacetCoverage { graph: GraphRef },
    /// Facet whose vertices each have exactly one neighbour outside it,
    /// with at least two vertices outside.
    ShephardFacet { facet: usize },
    /// The polytope is a pyramid over facet `base`.
    PyramidApex { apex: usize, base: usize },
    /// `vertex` is the apex of a pyramid stacked on a facet of the rest;
    /// `facet_trace` certifies that facet indecomposable.
    PyramidReduction {
        vertex: usize,
        facet_trace: Box<CertificateTrace>,
    },
    /// Three-dimensional vertex/facet count test.
    SmilanskyCount { vertices: usize, facets: usize },
    /// Fewer than `2d` vertices.
    LowVertexCount { vertices: usize, dim: usize },
}

impl Derivation {
    pub fn rule(&self) -> Rule {
        match self {
            Derivation::SimpleExtension { .. } => Rule::SimpleExtension,
            Derivation::UnionSharedPair { .. } => Rule::UnionSharedPair,
            Derivation::EdgeReplacement { .. } => Rule::EdgeReplacement,
            Derivation::IndependentCycle { .. } => Rule::IndependentCycle,
            Derivation::CycleGluing { .. } => Rule::CycleGluing,
            Derivation::TwoGraphCover { .. } => Rule::TwoGraphCover,
            Derivation::FacetCoverage { .. } => Rule::FacetCoverage,
            Derivation::ShephardFacet { .. } => Rule::ShephardFacet,
            Derivation::PyramidApex { .. } => Rule::PyramidApex,
            Derivation::PyramidReduction { .. } => Rule::PyramidReduction,
            Derivation::SmilanskyCount { .. } => Rule::SmilanskyCount,
            Derivation::LowVertexCount { .. } => Rule::LowVertexCount,
        }
    }

    /// Earlier steps this one depends on.
    fn step_refs(&self) -> Vec<usize> {
        let graph_refs: Vec<GraphRef> = match self {
            Derivation::SimpleExtension { base, .. } => vec![*base],
            Derivation::UnionSharedPair { first, second }
            | Derivation::TwoGraphCover { first, second, .. } => vec![*first, *second],
            Derivation::EdgeReplacement { host, with, .. } => vec![*host, *with],
            Derivation::CycleGluing { cycle, parts } => {
                let mut r = parts.clone();
                r.push(GraphRef::Step(*cycle));
                r
            }
            Derivation::FacetCoverage { graph } => vec![*graph],
            _ => Vec::new(),
        };
        graph_refs
            .into_iter()
            .filter_map(|r| match r {
                GraphRef::Step(k) => Some(k),
                GraphRef::Edge(..) => None,
            })
            .collect()
    }

    fn remap(&mut self, map: &BTreeMap<usize, usize>) {
        let fix = |r: &mut GraphRef| {
            if let GraphRef::Step(k) = r {
                *k = map[k];
            }
        };
        match self {
            Derivation::SimpleExtension { base, .. } => fix(base),
            Derivation::UnionSharedPair { first, second }
            | Derivation::TwoGraphCover { first, second, .. } => {
                fix(first);
                fix(second);
            }
            Derivation::EdgeReplacement { host, with, .. } => {
                fix(host);
                fix(with);
            }
            Derivation::CycleGluing { cycle, parts } => {
                *cycle = map[cycle];
                parts.iter_mut().for_each(fix);
            }
            Derivation::FacetCoverage { graph } => fix(graph),
            _ => {}
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.rule())?;
        match self {
            Derivation::SimpleExtension {
                base,
                vertex,
                anchors,
            } => write!(f, "{base}, vertex {vertex} via {} {}", anchors.0, anchors.1)?,
            Derivation::UnionSharedPair { first, second } => write!(f, "{first}, {second}")?,
            Derivation::EdgeReplacement { host, edge, with } => {
                write!(f, "{host}, edge {}-{}, {with}", edge.0, edge.1)?
            }
            Derivation::IndependentCycle { cycle } => write!(f, "cycle {}", join(cycle, "-"))?,
            Derivation::CycleGluing { cycle, parts } => {
                write!(f, "step_{}, parts {}", cycle + 1, join(parts, " "))?
            }
            Derivation::TwoGraphCover {
                first,
                second,
                link,
            } => {
                write!(f, "{first}, {second}")?;
                if let Some((a, b)) = link {
                    write!(f, ", link {a}-{b}")?;
                }
            }
            Derivation::FacetCoverage { graph } => write!(f, "{graph}")?,
            Derivation::ShephardFacet { facet } => write!(f, "facet {facet}")?,
            Derivation::PyramidApex { apex, base } => write!(f, "apex {apex}, base facet {base}")?,
            Derivation::PyramidReduction {
                vertex,
                facet_trace,
            } => write!(
                f,
                "vertex {vertex}, facet certificate of {} steps",
                facet_trace.steps.len()
            )?,
            Derivation::SmilanskyCount { vertices, facets } => write!(f, "V={vertices}, F={facets}")?,
            Derivation::LowVertexCount { vertices, dim } => write!(f, "V={vertices}, d={dim}")?,
        }
        write!(f, ")")
    }
}

/// What a step establishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    /// This geometric graph is indecomposable.
    Graph {
        vertices: BTreeSet<usize>,
        edges: BTreeSet<Edge>,
    },
    /// Status of the (current) polytope.
    Polytope(Status),
    /// The polytope has the same status as the one with `removed` deleted.
    SameStatus { removed: usize },
}

impl Conclusion {
    fn edge_graph(u: usize, v: usize) -> Self {
        Conclusion::Graph {
            vertices: BTreeSet::from([u, v]),
            edges: BTreeSet::from([edge(u, v)]),
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Graph { vertices, edges } => write!(
                f,
                "graph-indecomposable({{{}}}; {})",
                join(vertices, ","),
                join(edges.iter().map(|(u, v)| format!("{u}-{v}")), " ")
            ),
            Conclusion::Polytope(Status::Indecomposable) => write!(f, "polytope-indecomposable"),
            Conclusion::Polytope(Status::Decomposable) => write!(f, "polytope-decomposable"),
            Conclusion::SameStatus { removed } => write!(f, "same-status(without vertex {removed})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateStep {
    pub derivation: Derivation,
    pub conclusion: Conclusion,
}

impl CertificateStep {
    pub fn rule(&self) -> Rule {
        self.derivation.rule()
    }
}

/// A complete derivation of a polytope's status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTrace {
    pub steps: Vec<CertificateStep>,
    pub verdict: Status,
    /// The condition that closed the argument.
    pub coverage_note: String,
}

impl CertificateTrace {
    /// The rule of the closing step.
    pub fn closing_rule(&self) -> Option<Rule> {
        self.steps.last().map(CertificateStep::rule)
    }

    /// One line per step, `step_k: RULE(inputs) => conclusion`. Steps of a
    /// nested facet certificate follow their reduction step, numbered
    /// `step_k.j`.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.push_lines("step_", &mut out);
        out
    }

    fn push_lines(&self, prefix: &str, out: &mut Vec<String>) {
        for (k, step) in self.steps.iter().enumerate() {
            let label = format!("{prefix}{}", k + 1);
            out.push(format!("{label}: {} => {}", step.derivation, step.conclusion));
            if let Derivation::PyramidReduction { facet_trace, .. } = &step.derivation {
                facet_trace.push_lines(&format!("{label}."), out);
            }
        }
    }
}

impl fmt::Display for CertificateTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        write!(f, "verdict: {} ({})", self.verdict, self.coverage_note)
    }
}

/// A derivation whose last step concludes an indecomposable graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedGraph {
    pub steps: Vec<CertificateStep>,
}

impl CertifiedGraph {
    fn conclusion(&self) -> (&BTreeSet<usize>, &BTreeSet<Edge>) {
        match &self.steps.last().expect("nonempty derivation").conclusion {
            Conclusion::Graph { vertices, edges } => (vertices, edges),
            other => panic!("certified graph ends in {other}"),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        self.conclusion().0
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        self.conclusion().1
    }
}

/// Accumulates steps and prunes the ones the final conclusion does not use.
#[derive(Default)]
pub(crate) struct TraceBuilder {
    steps: Vec<CertificateStep>,
}

impl TraceBuilder {
    pub fn push(&mut self, derivation: Derivation, conclusion: Conclusion) -> usize {
        self.steps.push(CertificateStep {
            derivation,
            conclusion,
        });
        self.steps.len() - 1
    }

    /// Vertices and edges of a certified graph.
    pub fn graph(&self, r: GraphRef) -> (BTreeSet<usize>, BTreeSet<Edge>) {
        let c = match r {
            GraphRef::Step(k) => self.steps[k].conclusion.clone(),
            GraphRef::Edge(u, v) => Conclusion::edge_graph(u, v),
        };
        match c {
            Conclusion::Graph { vertices, edges } => (vertices, edges),
            other => panic!("{r} concludes {other}, not a graph"),
        }
    }

    /// Appends another derivation, shifting its step references. Returns
    /// the index of its last step.
    pub fn import(&mut self, g: &CertifiedGraph) -> usize {
        let offset = self.steps.len();
        let map: BTreeMap<usize, usize> = (0..g.steps.len()).map(|k| (k, k + offset)).collect();
        for step in &g.steps {
            let mut step = step.clone();
            step.derivation.remap(&map);
            self.steps.push(step);
        }
        self.steps.len() - 1
    }

    /// Keeps only the steps reachable from `roots`, renumbered in order.
    fn pruned(self, roots: impl IntoIterator<Item = usize>) -> Vec<CertificateStep> {
        let mut keep = vec![false; self.steps.len()];
        let mut stack: Vec<usize> = roots.into_iter().collect();
        while let Some(k) = stack.pop() {
            if !keep[k] {
                keep[k] = true;
                stack.extend(self.steps[k].derivation.step_refs());
            }
        }
        let map: BTreeMap<usize, usize> = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .enumerate()
            .map(|(new, (old, _))| (old, new))
            .collect();
        self.steps
            .into_iter()
            .zip(keep)
            .filter_map(|(mut s, k)| {
                k.then(|| {
                    s.derivation.remap(&map);
                    s
                })
            })
            .collect()
    }

    /// Closes the trace at its last step, which must conclude a status.
    pub fn finish(self, note: String) -> CertificateTrace {
        let last = self.steps.len() - 1;
        let verdict = match self.steps[last].conclusion {
            Conclusion::Polytope(s) => s,
            ref other => panic!("trace ends in {other}"),
        };
        let reductions: Vec<usize> = (0..last)
            .filter(|&k| self.steps[k].rule() == Rule::PyramidReduction)
            .collect();
        CertificateTrace {
            steps: self.pruned(reductions.into_iter().chain([last])),
            verdict,
            coverage_note: note,
        }
    }

    /// The derivation of the graph concluded at step `k`.
    pub fn into_graph(self, k: usize) -> CertifiedGraph {
        CertifiedGraph {
            steps: self.pruned([k]),
        }
    }
}
