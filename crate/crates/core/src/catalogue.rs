//! Named polytopes with known status and counts, used as a regression corpus.

use serde::Serialize;

use crate::certificates::{analyze, replay, Method, Mode, Rule};
use crate::linalg::{int, RVector};
use crate::polytope::{
    construct_basic, minkowski_hull, minkowski_sum, pentagon, prism_over, segment, Kind,
};
use crate::{Error, FVector, Polytope, Status};

/// Counts an entry is expected to have; `None` where the source gives none.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExpectedCounts {
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub facets: Option<usize>,
}

impl ExpectedCounts {
    const fn full(v: usize, e: usize, f: usize) -> Self {
        Self {
            vertices: Some(v),
            edges: Some(e),
            facets: Some(f),
        }
    }

    const fn edges(e: usize) -> Self {
        Self {
            vertices: None,
            edges: Some(e),
            facets: None,
        }
    }

    /// Mismatches against `fv`, one message per count.
    pub fn mismatches(&self, fv: &FVector) -> Vec<String> {
        [
            ("vertices", self.vertices, fv.vertices),
            ("edges", self.edges, fv.edges),
            ("facets", self.facets, fv.facets),
        ]
        .into_iter()
        .filter_map(|(what, want, got)| match want {
            Some(w) if w != got => Some(format!("expected {w} {what}, found {got}")),
            _ => None,
        })
        .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub dim: usize,
    /// How the entry is built from the construction operations.
    pub recipe: &'static str,
    /// Where the example comes from and what it illustrates.
    pub origin: &'static str,
    pub build: Build,
    pub expected: ExpectedCounts,
    pub expected_status: Status,
}

impl CatalogueEntry {
    /// Builds the polytope and names it after the entry.
    pub fn polytope(&self) -> Result<Polytope, Error> {
        (self.build)().map(|p| p.with_name(self.name))
    }
}

type Build = fn() -> Result<Polytope, Error>;

fn basic(kind: Kind) -> Result<Polytope, Error> {
    construct_basic(&kind)
}

fn points(rows: &[&[i64]]) -> Vec<RVector> {
    rows.iter().map(|r| RVector::from_ints(r)).collect()
}

/// Pyramid over a full-dimensional base, apex at the base centroid lifted by one.
fn pyramid_over(base: &Polytope) -> Result<Polytope, Error> {
    let mut v: Vec<RVector> = base.vertices().iter().map(|x| x.extended(&[int(0)])).collect();
    v.push(RVector::centroid(base.vertices()).extended(&[int(1)]));
    Polytope::from_vertices(v, None)
}

fn simplex4() -> Vec<RVector> {
    points(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])
}

fn orthogonal_triangles() -> Result<Polytope, Error> {
    let a = points(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let b = points(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    minkowski_hull(&a, &b)
}

fn simplex_face_parallel_segment() -> Result<Polytope, Error> {
    let s = segment(RVector::zeros(4), RVector::from_ints(&[1, 1, 0, 0]))?;
    minkowski_hull(&simplex4(), &s)
}

fn simplex_generic_segment() -> Result<Polytope, Error> {
    let s = segment(RVector::zeros(4), RVector::from_ints(&[1, 2, 4, 8]))?;
    minkowski_hull(&simplex4(), &s)
}

fn six_point_plus_segment() -> Result<Polytope, Error> {
    let p = points(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
        &[0, 0, 1, 1],
    ]);
    let s = segment(RVector::zeros(4), RVector::unit(4, 0))?;
    minkowski_hull(&p, &s)
}

fn cyclic_plus_edge_segment() -> Result<Polytope, Error> {
    let c = basic(Kind::Cyclic { n: 6, d: 4 })?;
    // Only edges joining moment-curve points two apart give 25 edges.
    let dir = c.vertex(2) - c.vertex(0);
    let s = segment(RVector::zeros(4), dir)?;
    minkowski_hull(c.vertices(), &s)
}

fn simplex_plus_reversed_triangle() -> Result<Polytope, Error> {
    let t = points(&[&[0, 0, 0, 0], &[-1, 0, 0, 0], &[0, -1, 0, 0]]);
    minkowski_hull(&simplex4(), &t)
}

fn delta_counts(m: usize, n: usize) -> ExpectedCounts {
    ExpectedCounts::full((m + 1) * (n + 1), (m + n) * (m + 1) * (n + 1) / 2, m + n + 2)
}

fn wedge_counts(d: usize) -> ExpectedCounts {
    ExpectedCounts::full(3 * d - 1, d * (3 * d - 1) / 2, d + 3)
}

macro_rules! entry {
    ($name:expr, $dim:expr, $recipe:expr, $origin:expr, $build:expr, $counts:expr, $status:ident) => {
        CatalogueEntry {
            name: $name,
            dim: $dim,
            recipe: $recipe,
            origin: $origin,
            build: $build,
            expected: $counts,
            expected_status: Status::$status,
        }
    };
}

/// Every catalogue entry, in a fixed order.
pub fn catalogue_list() -> Vec<CatalogueEntry> {
    use ExpectedCounts as C;
    let mut out = vec![
        entry!("triangle", 2, "simplex(2)", "every polygon other than a triangle is decomposable", || basic(Kind::Simplex(2)), C::full(3, 3, 3), Indecomposable),
        entry!("square", 2, "cube(2)", "sum of two segments", || basic(Kind::Cube(2)), C::full(4, 4, 4), Decomposable),
        entry!("parallelogram", 2, "hull of (0,0) (2,0) (3,1) (1,1)", "sum of two non-parallel segments", || Polytope::from_vertices(points(&[&[0, 0], &[2, 0], &[3, 1], &[1, 1]]), None), C::full(4, 4, 4), Decomposable),
        entry!("pentagon", 2, "hull of five integer points", "polygon with more than three sides", || Ok(pentagon()), C::full(5, 5, 5), Decomposable),
        entry!("tetrahedron", 3, "simplex(3)", "simplices are indecomposable", || basic(Kind::Simplex(3)), C::full(4, 6, 4), Indecomposable),
        entry!("octahedron", 3, "hull of ±e_i", "simplicial polytopes are indecomposable", || basic(Kind::Octahedron), C::full(6, 12, 8), Indecomposable),
        entry!("triangular-bipyramid", 3, "two apices over a triangle", "obviously indecomposable bipyramid", || basic(Kind::Bipyramid3), C::full(5, 9, 6), Indecomposable),
        entry!("square-pyramid", 3, "pyramid over cube(2)", "pyramids are indecomposable", || pyramid_over(&basic(Kind::Cube(2))?), C::full(5, 8, 5), Indecomposable),
        entry!("pentagonal-pyramid", 3, "pyramid over a pentagon", "pyramids are indecomposable", || pyramid_over(&pentagon()), C::full(6, 10, 6), Indecomposable),
        entry!("simplex-4", 4, "simplex(4)", "simplices are indecomposable", || basic(Kind::Simplex(4)), C::full(5, 10, 5), Indecomposable),
        entry!("simplex-5", 5, "simplex(5)", "simplices are indecomposable", || basic(Kind::Simplex(5)), C::full(6, 15, 6), Indecomposable),
        entry!("pyramid-over-prism", 4, "pyramid over delta(1,2)", "pyramids are indecomposable", || pyramid_over(&basic(Kind::Delta(1, 2))?), C::full(7, 15, 6), Indecomposable),
        entry!("capped-prism", 3, "tetrahedron stacked on one end of a triangular prism", "decomposable polyhedron with a triangle-free facet pattern", || basic(Kind::CappedPrism), C::full(7, 12, 7), Decomposable),
        entry!("bd182", 3, "capped prism with a tetrahedron on a cap face", "decomposable polyhedron with eight vertices and nine faces", || basic(Kind::Bd182), C::full(8, 15, 9), Decomposable),
        entry!("bd198", 3, "triangular prism capped at both ends", "decomposable polyhedron with eight vertices and nine faces", || basic(Kind::Bd198), C::full(8, 15, 9), Decomposable),
        entry!("cube-3", 3, "cube(3)", "simple polytopes other than simplices are decomposable", || basic(Kind::Cube(3)), C::full(8, 12, 6), Decomposable),
        entry!("pentagonal-prism", 3, "prism over a pentagon", "prism with a Shephard facet", || prism_over(&pentagon()), C::full(10, 15, 7), Decomposable),
        entry!("cyclic-6-4", 4, "cyclic(6,4)", "simplicial, hence indecomposable", || basic(Kind::Cyclic { n: 6, d: 4 }), C::full(6, 15, 9), Indecomposable),
        entry!("sum-18-orthogonal-triangles", 4, "triangle + triangle in orthogonal planes", "decomposable 4-polytope with 18 edges", orthogonal_triangles, C::edges(18), Decomposable),
        entry!("sum-19-simplex-segment", 4, "simplex(4) + [0, e1+e2]", "segment parallel to a 2-face but to no edge; 19 edges", simplex_face_parallel_segment, C::edges(19), Decomposable),
        entry!("sum-20-simplex-segment", 4, "simplex(4) + [0, (1,2,4,8)]", "segment parallel to no proper face; 20 edges", simplex_generic_segment, C::edges(20), Decomposable),
        entry!("sum-22-segment", 4, "hull{0, e1, e2, e3, e4, e3+e4} + [0, e1]", "decomposable 4-polytope with 22 edges", six_point_plus_segment, C::edges(22), Decomposable),
        entry!("sum-25-cyclic-segment", 4, "cyclic(6,4) + [0, p(3) - p(1)]", "decomposable 4-polytope with 25 edges", cyclic_plus_edge_segment, C::edges(25), Decomposable),
        entry!("sum-27-simplex-triangle", 4, "simplex(4) + hull{0, -e1, -e2}", "triangle opposite to a 2-face; 27 edges", simplex_plus_reversed_triangle, C::edges(27), Decomposable),
    ];
    let deltas: [(&'static str, usize, usize, Build); 9] = [
        ("delta-1-2", 1, 2, || basic(Kind::Delta(1, 2))),
        ("delta-1-3", 1, 3, || basic(Kind::Delta(1, 3))),
        ("delta-1-4", 1, 4, || basic(Kind::Delta(1, 4))),
        ("delta-1-5", 1, 5, || basic(Kind::Delta(1, 5))),
        ("delta-2-2", 2, 2, || basic(Kind::Delta(2, 2))),
        ("delta-2-3", 2, 3, || basic(Kind::Delta(2, 3))),
        ("delta-2-4", 2, 4, || basic(Kind::Delta(2, 4))),
        ("delta-3-3", 3, 3, || basic(Kind::Delta(3, 3))),
        ("delta-3-4", 3, 4, || basic(Kind::Delta(3, 4))),
    ];
    for (name, m, n, build) in deltas {
        let recipe = if m == 1 { "prism over a simplex" } else { "sum of two simplices in complementary subspaces" };
        out.push(entry!(name, m + n, recipe, "simple, not a simplex, hence decomposable", build, delta_counts(m, n), Decomposable));
    }
    let wedges: [(&'static str, usize, Build); 4] = [
        ("wedge-3", 3, || basic(Kind::Wedge(3))),
        ("wedge-4", 4, || basic(Kind::Wedge(4))),
        ("wedge-5", 5, || basic(Kind::Wedge(5))),
        ("wedge-6", 6, || basic(Kind::Wedge(6))),
    ];
    for (name, d, build) in wedges {
        out.push(entry!(name, d, "prism over a simplex with one vertex truncated", "simple polytope with 3d - 1 vertices", build, wedge_counts(d), Decomposable));
    }
    out
}

/// Looks an entry up by name.
pub fn catalogue_entry(name: &str) -> Option<CatalogueEntry> {
    catalogue_list().into_iter().find(|e| e.name == name)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub name: &'static str,
    pub dim: usize,
    pub expected_status: Status,
    pub fvector: Option<FVector>,
    pub verdict: Option<Status>,
    pub method: Option<Method>,
    pub rule: Option<Rule>,
    pub oracle_dimension: Option<usize>,
    /// Empty when the entry passed.
    pub problems: Vec<String>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

impl std::fmt::Display for EntryResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{mark} {} (d={})", self.name, self.dim)?;
        if let Some(v) = self.verdict {
            write!(f, " {v}")?;
        }
        if let Some(m) = self.method {
            write!(f, " via {m}")?;
        }
        if let Some(r) = self.rule {
            write!(f, " ({r})")?;
        }
        for p in &self.problems {
            write!(f, "; {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub results: Vec<EntryResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }
}

/// Builds, validates, counts and analyzes one entry.
pub fn verify_entry(e: &CatalogueEntry) -> EntryResult {
    let mut r = EntryResult {
        name: e.name,
        dim: e.dim,
        expected_status: e.expected_status,
        fvector: None,
        verdict: None,
        method: None,
        rule: None,
        oracle_dimension: None,
        problems: Vec::new(),
    };
    let p = match e.polytope() {
        Ok(p) => p,
        Err(err) => {
            r.problems.push(format!("construction failed: {err}"));
            return r;
        }
    };
    if p.dim() != e.dim {
        r.problems.push(format!("built in dimension {}", p.dim()));
    }
    let v = p.validate();
    if !v.is_valid() {
        r.problems.push(format!("invalid: {v:?}"));
    }
    let fv = p.fvector();
    r.problems.extend(e.expected.mismatches(&fv));
    r.fvector = Some(fv);
    match analyze(&p, Mode::CertificatesFirst) {
        Ok(a) => {
            r.verdict = Some(a.verdict);
            r.method = Some(a.method);
            r.rule = a.closing_rule();
            r.oracle_dimension = a.oracle_dimension;
            if a.verdict != e.expected_status {
                r.problems.push(format!("expected {}", e.expected_status));
            }
            if let Some(t) = &a.trace {
                if let Err(err) = replay(t, &p) {
                    r.problems.push(format!("trace does not replay: {err}"));
                }
            }
        }
        Err(err) => r.problems.push(format!("analysis failed: {err}")),
    }
    r
}

/// Verifies the given entries.
pub fn verify_entries(entries: &[CatalogueEntry]) -> VerifyReport {
    VerifyReport {
        results: entries.iter().map(verify_entry).collect(),
    }
}

/// Verifies the whole catalogue.
pub fn catalogue_verify() -> VerifyReport {
    verify_entries(&catalogue_list())
}

/// Minkowski sum of two entries, for tests and the command line.
pub fn sum_of(a: &str, b: &str) -> Result<Polytope, Error> {
    let get = |n: &str| {
        catalogue_entry(n)
            .ok_or_else(|| Error::InvalidParameter(format!("no catalogue entry {n}")))?
            .polytope()
    };
    minkowski_sum(&get(a)?, &get(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::combinatorially_equivalent;
    use std::collections::BTreeSet;

    #[test]
    fn names_are_unique() {
        let all = catalogue_list();
        let names: BTreeSet<_> = all.iter().map(|e| e.name).collect();
        assert_eq!(names.len(), all.len());
        assert!(catalogue_entry("delta-1-2").is_some());
        assert!(catalogue_entry("nonsense").is_none());
    }

    #[test]
    fn every_entry_verifies() {
        let report = catalogue_verify();
        let failed: Vec<String> = report.results.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
        assert!(failed.is_empty(), "{}", failed.join("\n"));
    }

    #[test]
    fn flipped_status_fails_exactly_once() {
        let mut entries = catalogue_list();
        let bd = entries.iter_mut().find(|e| e.name == "bd198").unwrap();
        bd.expected_status = Status::Indecomposable;
        let report = verify_entries(&entries);
        assert_eq!(report.failures(), 1);
        assert!(!report.results.iter().find(|r| r.name == "bd198").unwrap().passed());
    }

    #[test]
    fn four_dimensional_entries() {
        let entries: Vec<_> = catalogue_list().into_iter().filter(|e| e.dim == 4).collect();
        let names: BTreeSet<_> = entries.iter().map(|e| e.name).collect();
        assert_eq!(names.iter().filter(|n| n.starts_with("sum-")).count(), 6);
        assert!(names.contains("delta-2-2") && names.contains("delta-1-3"));
        assert!(verify_entries(&entries).all_passed());
    }

    #[test]
    fn bd182_and_bd198_differ_in_degree_five() {
        let degrees = |name| {
            let p = catalogue_entry(name).unwrap().polytope().unwrap();
            let mut d: Vec<usize> = (0..p.num_vertices()).map(|v| p.degree(v)).collect();
            d.sort();
            d
        };
        let (a, b) = (degrees("bd182"), degrees("bd198"));
        assert_ne!(a, b);
        assert_ne!(a.contains(&5), b.contains(&5));
        let pa = catalogue_entry("bd182").unwrap().polytope().unwrap();
        let pb = catalogue_entry("bd198").unwrap().polytope().unwrap();
        assert!(!combinatorially_equivalent(&pa, &pb));
    }

    #[test]
    fn sums_of_entries() {
        // Edge normals of the summands: three plus four, sharing two.
        let p = sum_of("triangle", "square").unwrap();
        assert_eq!(p.num_vertices(), 5);
        assert!(sum_of("triangle", "tetrahedron").is_err());
    }
}
