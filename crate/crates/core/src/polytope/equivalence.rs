use super::Polytope;

/// Whether the vertex–facet incidences of `p` and `q` are isomorphic, which
/// for polytopes is the same as isomorphic face lattices.
///
/// Backtracks over vertex bijections, pruned by per-vertex signatures (facet
/// count and sorted sizes of the containing facets) and by requiring every
/// facet of `p` whose vertices are all mapped to have an image facet in `q`.
/// Exponential in the worst case; intended for small instances.
pub fn combinatorially_equivalent(p: &Polytope, q: &Polytope) -> bool {
    if p.dim() != q.dim()
        || p.num_vertices() != q.num_vertices()
        || p.facets().len() != q.facets().len()
    {
        return false;
    }
    let sig = |x: &Polytope, v: usize| {
        let mut sizes: Vec<usize> = x.facets_of(v).iter().map(|&f| x.facets()[f].len()).collect();
        sizes.sort_unstable();
        (x.degree(v), sizes)
    };
    let sp: Vec<_> = (0..p.num_vertices()).map(|v| sig(p, v)).collect();
    let sq: Vec<_> = (0..q.num_vertices()).map(|v| sig(q, v)).collect();
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort();
    b.sort();
    if a != b {
        return false;
    }
    let mut fa: Vec<usize> = p.facets().iter().map(Vec::len).collect();
    let mut fb: Vec<usize> = q.facets().iter().map(Vec::len).collect();
    fa.sort_unstable();
    fb.sort_unstable();
    if fa != fb {
        return false;
    }
    let mut search = Matcher {
        p,
        q,
        sp,
        sq,
        map: vec![usize::MAX; p.num_vertices()],
        used: vec![false; q.num_vertices()],
        p_facets_of: (0..p.num_vertices()).map(|v| p.facets_of(v)).collect(),
    };
    search.extend(0)
}

struct Matcher<'a> {
    p: &'a Polytope,
    q: &'a Polytope,
    sp: Vec<(usize, Vec<usize>)>,
    sq: Vec<(usize, Vec<usize>)>,
    map: Vec<usize>,
    used: Vec<bool>,
    p_facets_of: Vec<Vec<usize>>,
}

impl Matcher<'_> {
    fn extend(&mut self, v: usize) -> bool {
        if v == self.map.len() {
            return true;
        }
        for w in 0..self.used.len() {
            if self.used[w] || self.sp[v] != self.sq[w] {
                continue;
            }
            if (0..v).any(|u| self.p.is_edge(u, v) != self.q.is_edge(self.map[u], w)) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.completed_facets_match(v) && self.extend(v + 1) {
                return true;
            }
            self.used[w] = false;
            self.map[v] = usize::MAX;
        }
        false
    }

    /// Every facet of `p` through `v` with all vertices now mapped must map
    /// onto a facet of `q`.
    fn completed_facets_match(&self, v: usize) -> bool {
        self.p_facets_of[v].iter().all(|&f| {
            let facet = &self.p.facets()[f];
            if facet.iter().any(|&u| u > v) {
                return true;
            }
            let mut image: Vec<usize> = facet.iter().map(|&u| self.map[u]).collect();
            image.sort_unstable();
            self.q.facets().binary_search(&image).is_ok()
        })
    }
}
