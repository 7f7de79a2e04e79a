use std::collections::BTreeSet;

use polydecomp::catalogue::catalogue_list;
use polydecomp::certificates::{
    certify, pyramid_reduction, replay, shephard_facet, simple_extension_closure, Conclusion,
};
use polydecomp::graph::{decomposing_space, oracle_verdict, skeleton, DecomposingFunction, GeometricGraph};
use polydecomp::linalg::{frac, RVector};
use polydecomp::polytope::{
    edge, enumerate_facets, is_geometric_edge, minkowski_sum, prism_over, truncate_vertex,
};
use polydecomp::{Polytope, Status};

fn all() -> Vec<Polytope> {
    catalogue_list().iter().map(|e| e.polytope().unwrap()).collect()
}

#[test]
fn euler_relation_in_dimension_three() {
    for p in all().iter().filter(|p| p.dim() == 3) {
        let fv = p.fvector();
        assert_eq!(fv.edges + 2, fv.vertices + fv.facets, "{:?}", p.name());
    }
}

#[test]
fn facet_enumeration_reproduces_facets() {
    for p in all() {
        let facets = enumerate_facets(p.dim(), p.vertices()).unwrap();
        assert_eq!(facets, p.facets(), "{:?}", p.name());
    }
}

#[test]
fn combinatorial_edges_match_geometric_edges() {
    for p in all().iter().filter(|p| p.num_vertices() <= 12) {
        for u in 0..p.num_vertices() {
            for v in u + 1..p.num_vertices() {
                assert_eq!(
                    p.is_edge(u, v),
                    is_geometric_edge(p.vertices(), u, v).unwrap(),
                    "{:?} {u}-{v}",
                    p.name()
                );
            }
        }
    }
}

#[test]
fn prism_counts() {
    for p in all().iter().filter(|p| p.num_vertices() <= 12 && p.dim() <= 5) {
        let q = prism_over(p).unwrap();
        let (a, b) = (p.fvector(), q.fvector());
        assert_eq!(b.vertices, 2 * a.vertices, "{:?}", p.name());
        assert_eq!(b.edges, 2 * a.edges + a.vertices, "{:?}", p.name());
        assert_eq!(b.facets, a.facets + 2, "{:?}", p.name());
    }
}

#[test]
fn truncation_counts() {
    for p in all().iter().filter(|p| p.num_vertices() <= 10) {
        for v in 0..p.num_vertices() {
            let q = truncate_vertex(p, v).unwrap();
            assert_eq!(q.num_vertices(), p.num_vertices() - 1 + p.degree(v));
            assert_eq!(q.facets().len(), p.facets().len() + 1);
        }
    }
}

#[test]
fn minkowski_sum_is_translation_invariant_and_commutative() {
    let ps: Vec<Polytope> = all().into_iter().filter(|p| p.dim() == 3 && p.num_vertices() <= 6).collect();
    let shift = RVector::new(vec![frac(1, 2), frac(-3, 1), frac(7, 5)]);
    for a in &ps {
        for b in &ps {
            let s = minkowski_sum(a, b).unwrap();
            assert_eq!(s.fvector(), minkowski_sum(b, a).unwrap().fvector());
            let moved = b.transformed(&frac(1, 1), &shift);
            assert_eq!(s.fvector(), minkowski_sum(a, &moved).unwrap().fvector());
        }
    }
}

#[test]
fn certificates_agree_with_the_oracle_and_replay() {
    for p in all() {
        let oracle = oracle_verdict(&p).unwrap();
        let expected = p.dim() + 1;
        match oracle.status {
            Status::Indecomposable => assert_eq!(oracle.dimension, expected),
            Status::Decomposable => assert!(oracle.dimension > expected),
        }
        if let Some(t) = certify(&p).unwrap() {
            assert_eq!(t.verdict, oracle.status, "{:?}", p.name());
            assert_eq!(replay(&t, &p), Ok(()), "{:?}", p.name());
        }
    }
}

#[test]
fn shephard_witnesses_are_exact() {
    for p in all() {
        let oracle = oracle_verdict(&p).unwrap();
        let Some((trace, f)) = shephard_facet(&p).unwrap() else {
            continue;
        };
        assert_eq!(oracle.status, Status::Decomposable, "{:?}", p.name());
        let g = skeleton(&p);
        f.check(&g).unwrap();
        assert!(!f.is_homothety(&g));
        let sum = DecomposingFunction::identity(&g).plus(&f);
        sum.check(&g).unwrap();
        assert!(!sum.is_homothety(&g));
        assert!(p.vertices().iter().enumerate().any(|(v, x)| &f.images[&v] != x));
        // Translating the polytope keeps the same facet valid.
        let moved = p.transformed(&frac(1, 1), &RVector::new(vec![frac(3, 7); p.dim()]));
        assert_eq!(replay(&trace, &moved), Ok(()), "{:?}", p.name());
    }
}

#[test]
fn pyramid_reduction_preserves_the_oracle() {
    for p in all().iter().filter(|p| p.dim() >= 3) {
        if let Some(r) = pyramid_reduction(p).unwrap() {
            assert_eq!(
                oracle_verdict(p).unwrap().status,
                oracle_verdict(&r.polytope).unwrap().status,
                "{:?}",
                p.name()
            );
        }
    }
}

#[test]
fn closures_are_deterministic_and_stay_certified_under_extra_edges() {
    for p in all().iter().filter(|p| p.num_vertices() <= 12) {
        for &(u, v) in p.edges() {
            let c = simple_extension_closure(p, (u, v)).unwrap();
            assert_eq!(c.vertices(), simple_extension_closure(p, (v, u)).unwrap().vertices());
            let Some(last) = c.steps.last() else { continue };
            let Conclusion::Graph { vertices, edges } = &last.conclusion else {
                panic!("closure concludes a graph");
            };
            let g = GeometricGraph::from_polytope(p, vertices.iter().copied(), edges.iter().copied()).unwrap();
            let base = decomposing_space(&g).unwrap().0;
            let extra: Vec<_> = p
                .edges()
                .iter()
                .filter(|(a, b)| vertices.contains(a) && vertices.contains(b) && !edges.contains(&edge(*a, *b)))
                .collect();
            for &&e in extra.iter().take(3) {
                let more = g.with_edge(e).unwrap();
                assert_eq!(decomposing_space(&more).unwrap().0, base);
            }
        }
    }
}

#[test]
fn skeleton_vertex_sets_are_complete() {
    for p in all() {
        let g = skeleton(&p);
        let vs: BTreeSet<usize> = g.vertices().keys().copied().collect();
        assert_eq!(vs.len(), p.num_vertices());
        assert!(g.is_connected() && g.is_spanning());
    }
}
