use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{oracle_verdict, touches_every_facet};
use crate::polytope::{count_rules, Claim, CountConclusion, Edge, Polytope};
use crate::{Error, FVector, Status};

use super::rules::{
    apex_note, close_by_coverage, coverage_note, extend_closure, find_apex, for_each_independent_cycle,
    push_union, pyramid_reduction, shephard_partners, shephard_note, two_cover_link, two_cover_note,
    CYCLE_BUDGET,
};
use super::rules::cycle_conclusion;
use super::{CertificateTrace, Conclusion, Derivation, GraphRef, Rule, TraceBuilder};

/// Most fragments kept for pairwise combination.
const MAX_FRAGMENTS: usize = 200;
/// Most independent cycles kept as fragments.
const MAX_CYCLE_FRAGMENTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Run the certificate engine and cross-check it with the oracle.
    CertificatesFirst,
    /// Only compute the decomposing-function dimension.
    OracleOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Certificate,
    Oracle,
    CountRule,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Certificate => "certificate",
            Method::Oracle => "oracle",
            Method::CountRule => "count-rule",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub dim: usize,
    pub verdict: Status,
    pub method: Method,
    pub trace: Option<CertificateTrace>,
    pub oracle_dimension: Option<usize>,
    /// Images of a non-homothetic decomposing function found by the oracle.
    pub oracle_witness: Option<std::collections::BTreeMap<usize, String>>,
    pub fvector: FVector,
    pub rule_notes: Vec<CountConclusion>,
}

impl AnalysisReport {
    /// The rule that closed the certificate, if any.
    pub fn closing_rule(&self) -> Option<Rule> {
        self.trace.as_ref().and_then(CertificateTrace::closing_rule)
    }
}

/// Decides the status of `p`. In certificate mode the oracle always runs
/// as well, and a disagreement is reported as [`Error::Inconsistent`].
pub fn analyze(p: &Polytope, mode: Mode) -> Result<AnalysisReport, Error> {
    let fvector = p.fvector();
    let rule_notes = count_rules(p.dim(), Some(fvector.vertices), Some(fvector.edges), Some(fvector.facets));
    let oracle = oracle_verdict(p)?;
    let trace = match mode {
        Mode::OracleOnly => None,
        Mode::CertificatesFirst => certify(p)?,
    };
    if let Some(t) = &trace {
        if t.verdict != oracle.status {
            return Err(Error::Inconsistent(format!(
                "certificate says {} but the oracle says {} (dimension {})",
                t.verdict, oracle.status, oracle.dimension
            )));
        }
    }
    let method = match trace.as_ref().and_then(CertificateTrace::closing_rule) {
        None => Method::Oracle,
        Some(Rule::SmilanskyCount | Rule::LowVertexCount) => Method::CountRule,
        Some(_) => Method::Certificate,
    };
    Ok(AnalysisReport {
        name: p.name().map(str::to_string),
        dim: p.dim(),
        verdict: oracle.status,
        method,
        trace,
        oracle_dimension: Some(oracle.dimension),
        oracle_witness: oracle.witness_text(),
        fvector,
        rule_notes,
    })
}

/// A fragment of the skeleton certified indecomposable.
struct Fragment {
    graph: GraphRef,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

/// Runs the certificate rules alone. Returns `None` when no rule settles
/// the status.
///
/// Order: pyramid apex; Shephard facet; pyramid reduction (restarting on the
/// reduced polytope); simple-extension closure from every edge; chains of
/// triangles; independent cycles; pairs of certified fragments; count rules.
pub fn certify(p: &Polytope) -> Result<Option<CertificateTrace>, Error> {
    let mut b = TraceBuilder::default();
    let mut current = p.clone();
    loop {
        if let Some((apex, base)) = find_apex(&current) {
            b.push(
                Derivation::PyramidApex { apex, base },
                Conclusion::Polytope(Status::Indecomposable),
            );
            return Ok(Some(b.finish(apex_note(apex, base))));
        }
        if let Some(facet) = (0..current.facets().len()).find(|&f| shephard_partners(&current, f).is_some()) {
            b.push(
                Derivation::ShephardFacet { facet },
                Conclusion::Polytope(Status::Decomposable),
            );
            return Ok(Some(b.finish(shephard_note(&current, facet))));
        }
        if let Some(r) = pyramid_reduction(&current)? {
            b.push(
                Derivation::PyramidReduction {
                    vertex: r.vertex,
                    facet_trace: Box::new(r.facet_trace),
                },
                Conclusion::SameStatus { removed: r.vertex },
            );
            current = r.polytope;
            continue;
        }
        return Ok(certify_graphs(&current, b));
    }
}

fn fragment(b: &TraceBuilder, graph: GraphRef) -> Fragment {
    let (vertices, edges) = b.graph(graph);
    Fragment {
        graph,
        vertices,
        edges,
    }
}

/// The graph-building and count stages of [`certify`].
fn certify_graphs(p: &Polytope, mut b: TraceBuilder) -> Option<CertificateTrace> {
    let covered = |f: &Fragment| touches_every_facet(&f.vertices, p);
    let mut fragments: Vec<Fragment> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let keep = |fragments: &mut Vec<Fragment>, seen: &mut BTreeSet<BTreeSet<usize>>, f: Fragment| {
        if fragments.len() < MAX_FRAGMENTS && seen.insert(f.vertices.clone()) {
            fragments.push(f);
        }
    };

    for &(u, v) in p.edges() {
        if seen.iter().any(|s| s.contains(&u) && s.contains(&v)) {
            // The closure of an edge inside a known closure adds nothing.
            continue;
        }
        let end = extend_closure(p, &mut b, GraphRef::Edge(u, v));
        let f = fragment(&b, end);
        if covered(&f) {
            let n = f.vertices.len();
            close_by_coverage(&mut b, f.graph);
            return Some(b.finish(coverage_note(n, p)));
        }
        keep(&mut fragments, &mut seen, f);
    }

    if p.dim() == 3 {
        if let Ok(Some(chain)) = super::rules::chain_of_triangles(p) {
            let k = b.import(&chain);
            let f = fragment(&b, GraphRef::Step(k));
            if covered(&f) {
                let n = f.vertices.len();
                close_by_coverage(&mut b, f.graph);
                return Some(b.finish(coverage_note(n, p)));
            }
            keep(&mut fragments, &mut seen, f);
        }
    }

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut closing: Option<Vec<usize>> = None;
    if p.dim() >= 2 {
        for_each_independent_cycle(p, p.dim() + 1, CYCLE_BUDGET, |c| {
            if touches_every_facet(&c.iter().copied().collect(), p) {
                closing = Some(c.to_vec());
                return true;
            }
            if cycles.len() < MAX_CYCLE_FRAGMENTS {
                cycles.push(c.to_vec());
            }
            false
        });
    }
    if let Some(c) = closing {
        let k = b.push(Derivation::IndependentCycle { cycle: c.clone() }, cycle_conclusion(&c));
        close_by_coverage(&mut b, GraphRef::Step(k));
        return Some(b.finish(coverage_note(c.len(), p)));
    }
    for c in cycles {
        let k = b.push(Derivation::IndependentCycle { cycle: c.clone() }, cycle_conclusion(&c));
        let f = fragment(&b, GraphRef::Step(k));
        keep(&mut fragments, &mut seen, f);
    }

    for i in 0..fragments.len() {
        for j in i..fragments.len() {
            let (f1, f2) = (&fragments[i], &fragments[j]);
            let skeletal = |f: &Fragment| f.edges.iter().all(|&(u, v)| p.is_edge(u, v));
            if skeletal(f1) && skeletal(f2) {
                if let Ok(link) = two_cover_link(p, &f1.vertices, &f2.vertices) {
                    b.push(
                        Derivation::TwoGraphCover {
                            first: f1.graph,
                            second: f2.graph,
                            link,
                        },
                        Conclusion::Polytope(Status::Indecomposable),
                    );
                    return Some(b.finish(two_cover_note(p, &f1.vertices, &f2.vertices)));
                }
            }
            if i == j
                || f1.vertices.is_subset(&f2.vertices)
                || f2.vertices.is_subset(&f1.vertices)
            {
                continue;
            }
            let Ok(k) = push_union(&mut b, f1.graph, f2.graph) else {
                continue;
            };
            let end = extend_closure(p, &mut b, GraphRef::Step(k));
            let f = fragment(&b, end);
            if covered(&f) && skeletal(&f) {
                let n = f.vertices.len();
                close_by_coverage(&mut b, f.graph);
                return Some(b.finish(coverage_note(n, p)));
            }
        }
    }

    let fv = p.fvector();
    for c in count_rules(p.dim(), Some(fv.vertices), Some(fv.edges), Some(fv.facets)) {
        let status = match c.claim {
            Claim::Decomposable => Status::Decomposable,
            Claim::Indecomposable => Status::Indecomposable,
            _ => continue,
        };
        let derivation = if p.dim() == 3 && c.tag.starts_with("Smilansky") {
            Derivation::SmilanskyCount {
                vertices: fv.vertices,
                facets: fv.facets,
            }
        } else if c.tag == "V < 2d" {
            Derivation::LowVertexCount {
                vertices: fv.vertices,
                dim: p.dim(),
            }
        } else {
            continue;
        };
        b.push(derivation, Conclusion::Polytope(status));
        return Some(b.finish(c.to_string()));
    }
    None
}
