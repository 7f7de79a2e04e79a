use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::Error;

/// What a count rule asserts about every polytope with the given counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Claim {
    Decomposable,
    Indecomposable,
    /// No `d`-polytope has these counts.
    NoSuchPolytope,
    /// Combinatorially a prism over a simplex, or indecomposable.
    PrismOrIndecomposable,
    /// A prism over a simplex, `delta(2, 2)`, or indecomposable.
    PrismDelta22OrIndecomposable,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Decomposable => "decomposable",
            Claim::Indecomposable => "indecomposable",
            Claim::NoSuchPolytope => "no such polytope",
            Claim::PrismOrIndecomposable => "prism or indecomposable",
            Claim::PrismDelta22OrIndecomposable => "prism, delta(2,2) or indecomposable",
        })
    }
}

/// One applicable rule: its claim and the condition that triggered it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountConclusion {
    pub claim: Claim,
    pub tag: String,
}

impl CountConclusion {
    /// Whether the claim settles the status on its own.
    pub fn is_verdict(&self) -> bool {
        matches!(self.claim, Claim::Decomposable | Claim::Indecomposable)
    }
}

impl fmt::Display for CountConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.claim, self.tag)
    }
}

/// Conclusions that follow from the counts alone. Unknown counts are `None`
/// and rules needing them are skipped.
pub fn count_rules(
    d: usize,
    v: Option<usize>,
    e: Option<usize>,
    f: Option<usize>,
) -> Vec<CountConclusion> {
    let mut out = Vec::new();
    let mut push = |claim, tag: &str| {
        out.push(CountConclusion {
            claim,
            tag: tag.to_string(),
        })
    };
    if let (Some(v), Some(e)) = (v, e) {
        if d >= 4 && v == 2 * d && e == d * d + 1 {
            push(Claim::NoSuchPolytope, "V = 2d, E = d^2 + 1, d >= 4; Grünbaum for d = 4");
        }
    }
    if d == 3 {
        if let (Some(v), Some(f)) = (v, f) {
            if v > f {
                push(Claim::Decomposable, "Smilansky: V > F");
            }
            if f + 6 >= 2 * v {
                push(Claim::Indecomposable, "Smilansky: F >= 2V - 6");
            }
        }
    }
    if let Some(v) = v {
        if v < 2 * d {
            push(Claim::Indecomposable, "V < 2d");
        }
        if v <= 2 * d {
            push(Claim::PrismOrIndecomposable, "V <= 2d");
        }
    }
    if let Some(e) = e {
        if d == 4 && (e <= 15 || e == 17) {
            push(Claim::Indecomposable, "d = 4, E <= 15 or E = 17");
        }
        if d >= 3 && 2 * e <= 2 * d * d + d {
            push(Claim::PrismDelta22OrIndecomposable, "E <= d^2 + d/2");
        }
    }
    out
}

/// The vertex counts below `3d` attained by simple `d`-polytopes.
pub fn simple_vertex_spectrum_below_3d(d: usize) -> Result<BTreeSet<usize>, Error> {
    if d < 3 {
        return Err(Error::InvalidParameter("spectrum needs d >= 3".into()));
    }
    let mut s: BTreeSet<usize> = [d + 1, 2 * d, 3 * d - 3, 3 * d - 1].into_iter().collect();
    if d == 6 {
        s.insert(3 * d - 2);
    }
    Ok(s)
}
