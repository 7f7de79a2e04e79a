//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the lines; the test fails if any criterion fails other than those
//! listed in `KNOWN_UNATTAINABLE`.

use std::collections::BTreeSet;
use std::process::Command;

use polydecomp::catalogue::{catalogue_list, CatalogueEntry};
use polydecomp::certificates::{
    analyze, certify, pyramid_reduction, replay, shephard_facet, CertificateTrace, Conclusion, Derivation,
    GraphRef, Mode,
};
use polydecomp::graph::{decomposing_space, oracle_verdict, skeleton, DecomposingFunction, GeometricGraph};
use polydecomp::linalg::{frac, RVector};
use polydecomp::polytope::{
    combinatorially_equivalent, construct_basic, prism_over, simple_vertex_spectrum_below_3d, Edge, Kind,
};
use polydecomp::{Polytope, Status};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot hold as written, with the reason.
const KNOWN_UNATTAINABLE: &[(usize, &str)] = &[(
    3,
    "delta(0,n) is the n-simplex with n + 1 facets, not m + n + 2; delta(0,0) is a point",
)];

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    problems: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            problems: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }
}

fn entries() -> Vec<(CatalogueEntry, Polytope)> {
    catalogue_list()
        .into_iter()
        .map(|e| {
            let p = e.polytope().unwrap();
            (e, p)
        })
        .collect()
}

fn verdict_suite(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let required = [
        "delta-1-2", "parallelogram", "square", "capped-prism", "bd182", "bd198", "pentagonal-prism", "delta-1-3",
        "delta-2-2", "delta-3-4", "wedge-3", "wedge-6", "sum-18-orthogonal-triangles", "sum-19-simplex-segment",
        "sum-20-simplex-segment", "sum-22-segment", "sum-25-cyclic-segment", "sum-27-simplex-triangle", "triangle",
        "tetrahedron", "octahedron", "triangular-bipyramid", "simplex-4", "simplex-5", "square-pyramid",
        "pentagonal-pyramid", "pyramid-over-prism",
    ];
    let names: BTreeSet<&str> = all.iter().map(|(e, _)| e.name).collect();
    for r in required {
        o.check(names.contains(r), || format!("missing entry {r}"));
    }
    for (e, p) in all {
        match analyze(p, Mode::CertificatesFirst) {
            Ok(a) => o.check(a.verdict == e.expected_status, || {
                format!("{}: got {}, expected {}", e.name, a.verdict, e.expected_status)
            }),
            Err(err) => o.problems.push(format!("{}: {err}", e.name)),
        }
    }
    o.detail = format!("{} entries", all.len());
    o
}

fn edge_counts(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let mut found = Vec::new();
    for (e, p) in all.iter().filter(|(e, _)| e.name.starts_with("sum-")) {
        found.push(p.fvector().edges);
        o.check(p.dim() == 4, || format!("{} has dimension {}", e.name, p.dim()));
    }
    found.sort();
    o.check(found == [18, 19, 20, 22, 25, 27], || format!("edge counts {found:?}"));
    let prism = prism_over(&construct_basic(&Kind::Simplex(3)).unwrap()).unwrap();
    o.check(prism.fvector().edges == 16, || format!("prism over tetrahedron has {} edges", prism.fvector().edges));
    o.detail = format!("sums {found:?}, prism over tetrahedron {}", prism.fvector().edges);
    o
}

fn count_formulas(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    for m in 0..=4 {
        for n in m..=4 {
            let want = ((m + 1) * (n + 1), (m + n) * (m + 1) * (n + 1) / 2, m + n + 2);
            match construct_basic(&Kind::Delta(m, n)) {
                Ok(p) => {
                    let fv = p.fvector();
                    let got = (fv.vertices, fv.edges, fv.facets);
                    o.check(got == want, || format!("delta({m},{n}): {got:?}, formula {want:?}"));
                }
                Err(err) => o.problems.push(format!("delta({m},{n}): {err}")),
            }
        }
    }
    for d in 3..=6 {
        let fv = construct_basic(&Kind::Wedge(d)).unwrap().fvector();
        let want = (3 * d - 1, d * (3 * d - 1) / 2, d + 3);
        let got = (fv.vertices, fv.edges, fv.facets);
        o.check(got == want, || format!("wedge({d}): {got:?}, formula {want:?}"));
    }
    for (e, p) in all.iter().filter(|(_, p)| p.dim() == 3) {
        let (a, b) = (p.fvector(), prism_over(p).unwrap().fvector());
        o.check(b.edges == 2 * a.edges + a.vertices, || format!("prism over {}: {} edges", e.name, b.edges));
    }
    o
}

fn consistency(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let mut certified = 0;
    for (e, p) in all {
        let oracle = oracle_verdict(p).unwrap();
        if let Some(t) = certify(p).unwrap() {
            certified += 1;
            o.check(t.verdict == oracle.status, || format!("{}: certificate {} vs oracle {}", e.name, t.verdict, oracle.status));
        }
        let d1 = p.dim() + 1;
        let ok = match oracle.status {
            Status::Indecomposable => oracle.dimension == d1,
            Status::Decomposable => oracle.dimension > d1,
        };
        o.check(ok, || format!("{}: {} with oracle dimension {}", e.name, oracle.status, oracle.dimension));
    }
    o.detail = format!("{certified} of {} entries certified", all.len());
    o
}

fn few_vertices(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let mut seen = 0;
    for d in 3..=6 {
        let prism = construct_basic(&Kind::Delta(1, d - 1)).unwrap();
        for (e, p) in all.iter().filter(|(_, p)| p.dim() == d && p.num_vertices() <= 2 * d) {
            seen += 1;
            let status = oracle_verdict(p).unwrap().status;
            let want = if combinatorially_equivalent(p, &prism) {
                Status::Decomposable
            } else {
                Status::Indecomposable
            };
            o.check(status == want, || format!("{}: {status}, expected {want}", e.name));
        }
    }
    o.detail = format!("{seen} entries with at most 2d vertices");
    o
}

fn count_command() -> Outcome {
    let mut o = Outcome::new();
    let run = |args: &[String]| {
        let out = Command::new(env!("CARGO_BIN_EXE_polydecomp")).arg("counts").args(args).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    for d in 4..=8usize {
        let args: Vec<String> = ["--d", &d.to_string(), "--v", &(2 * d).to_string(), "--e", &(d * d + 1).to_string()]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let text = run(&args);
        o.check(text.lines().any(|l| l.starts_with("no such polytope")), || format!("d={d}: {text:?}"));
    }
    let text = run(&["--d".into(), "4".into(), "--e".into(), "17".into()]);
    o.check(text.lines().any(|l| l.starts_with("indecomposable [")), || format!("E=17: {text:?}"));
    o
}

fn shephard_witnesses(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let mut fired = 0;
    for (e, p) in all {
        let status = oracle_verdict(p).unwrap().status;
        let Some((_, f)) = shephard_facet(p).unwrap() else {
            continue;
        };
        fired += 1;
        o.check(status == Status::Decomposable, || format!("{}: fired on an indecomposable polytope", e.name));
        let g = skeleton(p);
        o.check(f.check(&g).is_ok(), || format!("{}: witness breaks an edge", e.name));
        o.check(!f.is_homothety(&g), || format!("{}: witness is a homothety", e.name));
        let sum = DecomposingFunction::identity(&g).plus(&f);
        o.check(sum.check(&g).is_ok() && !sum.is_homothety(&g), || format!("{}: identity + witness", e.name));
    }
    o.detail = format!("fired on {fired} entries");
    o
}

fn reduction_preserves_status(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    for name in ["capped-prism", "bd198"] {
        let p = &all.iter().find(|(e, _)| e.name == name).unwrap().1;
        match pyramid_reduction(p).unwrap() {
            Some(r) => {
                let (a, b) = (oracle_verdict(p).unwrap().status, oracle_verdict(&r.polytope).unwrap().status);
                o.check(a == b, || format!("{name}: {a} before, {b} after"));
            }
            None => o.problems.push(format!("{name}: no reduction found")),
        }
    }
    o
}

fn random_image(p: &Polytope, rng: &mut ChaCha8Rng) -> Polytope {
    let scale = frac(rng.gen_range(1..20), rng.gen_range(1..20));
    let shift = RVector::new((0..p.dim()).map(|_| frac(rng.gen_range(-50..50), rng.gen_range(1..9))).collect());
    let mut perm: Vec<usize> = (0..p.num_vertices()).collect();
    perm.shuffle(rng);
    p.transformed(&scale, &shift).relabeled(&perm)
}

fn step_ref(d: &mut Derivation) -> Option<&mut GraphRef> {
    match d {
        Derivation::SimpleExtension { base, .. } => Some(base),
        Derivation::UnionSharedPair { first, .. } => Some(first),
        Derivation::EdgeReplacement { host, .. } => Some(host),
        Derivation::CycleGluing { parts, .. } => parts.first_mut(),
        Derivation::TwoGraphCover { first, .. } => Some(first),
        Derivation::FacetCoverage { graph } => Some(graph),
        _ => None,
    }
}

fn alter_conclusion(c: &mut Conclusion) {
    match c {
        Conclusion::Graph { vertices, .. } => {
            vertices.insert(10_000);
        }
        Conclusion::Polytope(s) => {
            *s = match s {
                Status::Decomposable => Status::Indecomposable,
                Status::Indecomposable => Status::Decomposable,
            }
        }
        Conclusion::SameStatus { removed } => *removed += 1,
    }
}

/// A copy of `t` that is invalid by construction.
fn tamper(t: &CertificateTrace, rng: &mut ChaCha8Rng) -> CertificateTrace {
    let mut t = t.clone();
    let k = rng.gen_range(0..t.steps.len());
    match rng.gen_range(0..4) {
        0 => {
            t.verdict = match t.verdict {
                Status::Decomposable => Status::Indecomposable,
                Status::Indecomposable => Status::Decomposable,
            }
        }
        1 => {
            t.steps.pop();
        }
        2 => {
            if let Some(r) = step_ref(&mut t.steps[k].derivation) {
                // Only earlier steps may be referenced.
                *r = GraphRef::Step(k);
            } else {
                alter_conclusion(&mut t.steps[k].conclusion);
            }
        }
        _ => alter_conclusion(&mut t.steps[k].conclusion),
    }
    t
}

fn properties(all: &[(CatalogueEntry, Polytope)]) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut images = 0;
    for (e, p) in all {
        let status = oracle_verdict(p).unwrap().status;
        for _ in 0..50 {
            let q = random_image(p, &mut rng);
            images += 1;
            let got = oracle_verdict(&q).unwrap().status;
            o.check(got == status, || format!("{}: image gives {got}", e.name));
        }
    }

    let mut subgraphs = 0;
    while subgraphs < 100 {
        let p = &all[rng.gen_range(0..all.len())].1;
        let kept: Vec<Edge> = p.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let Some(&extra) = p.edges().iter().find(|e| !kept.contains(e)) else { continue };
        if kept.is_empty() {
            continue;
        }
        subgraphs += 1;
        let g = GeometricGraph::from_polytope(p, 0..p.num_vertices(), kept).unwrap();
        let (small, _) = decomposing_space(&g).unwrap();
        let (more, _) = decomposing_space(&g.with_edge(extra).unwrap()).unwrap();
        let (full, _) = decomposing_space(&skeleton(p)).unwrap();
        o.check(small >= more && more >= full, || format!("{:?}: {small}, {more}, {full}", p.name()));
    }

    let traces: Vec<(CertificateTrace, &Polytope)> = all
        .iter()
        .filter_map(|(_, p)| certify(p).unwrap().map(|t| (t, p)))
        .collect();
    for (t, p) in &traces {
        o.check(replay(t, p).is_ok(), || format!("{:?}: emitted trace rejected", p.name()));
    }
    let mut rejected = 0;
    for _ in 0..100 {
        let (t, p) = &traces[rng.gen_range(0..traces.len())];
        if replay(&tamper(t, &mut rng), p).is_err() {
            rejected += 1;
        }
    }
    o.check(rejected == 100, || format!("only {rejected} of 100 tampered traces rejected"));
    o.detail = format!(
        "{images} images, {subgraphs} subgraphs, {} traces accepted, {rejected}/100 tampered rejected",
        traces.len()
    );
    o
}

fn spectrum() -> Outcome {
    let mut o = Outcome::new();
    for d in 3..=7usize {
        let mut kinds = vec![Kind::Simplex(d), Kind::Delta(1, d - 1), Kind::Delta(2, d - 2), Kind::Wedge(d)];
        kinds.extend([Kind::Delta(3, 3), Kind::Delta(3, 4), Kind::Cube(3)]);
        let built: Vec<Polytope> = kinds
            .iter()
            .filter_map(|k| construct_basic(k).ok())
            .filter(|p| p.dim() == d && p.is_simple())
            .collect();
        for v in simple_vertex_spectrum_below_3d(d).unwrap() {
            o.check(built.iter().any(|p| p.num_vertices() == v), || format!("d={d}: no simple polytope with {v} vertices"));
        }
    }
    o
}

#[test]
fn acceptance() {
    let all = entries();
    let criteria: Vec<(usize, &str, Outcome)> = vec![
        (1, "catalogue verdicts", verdict_suite(&all)),
        (2, "edge counts of the 4-dimensional sums", edge_counts(&all)),
        (3, "delta, wedge and prism count formulas", count_formulas(&all)),
        (4, "certificate and oracle agree", consistency(&all)),
        (5, "at most 2d vertices: only the prism decomposes", few_vertices(&all)),
        (6, "counts command", count_command()),
        (7, "Shephard witnesses", shephard_witnesses(&all)),
        (8, "pyramid reduction keeps the status", reduction_preserves_status(&all)),
        (9, "invariance, monotonicity and replay properties", properties(&all)),
        (10, "simple vertex spectrum below 3d", spectrum()),
    ];
    let mut unexpected = Vec::new();
    for (n, name, o) in &criteria {
        let status = if o.problems.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {n}: {status} {name}");
        if !o.detail.is_empty() {
            line += &format!(" ({})", o.detail);
        }
        println!("{line}");
        for p in &o.problems {
            println!("    {p}");
        }
        if !o.problems.is_empty() {
            match KNOWN_UNATTAINABLE.iter().find(|(k, _)| k == n) {
                Some((_, why)) => println!("    known: {why}"),
                None => unexpected.push(*n),
            }
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
