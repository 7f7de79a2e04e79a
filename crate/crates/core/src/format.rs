//! Plain-text polytope files.
//!
//! ```text
//! # comments run to the end of a line
//! format_version 1
//! name prism
//! dimension 3
//! vertices 6
//! 0 0 0
//! 1/2 0 0
//! ...
//! facets 5
//! 0 1 2
//! ...
//! ```
//!
//! `name` and the `facets` block are optional. Without facets the hull is
//! recomputed, subject to the enumeration size guard. Coordinates are
//! integers or `p/q` rationals.

use crate::linalg::{format_rational, parse_rational, RVector};
use crate::{Error, Polytope};

pub const FORMAT_VERSION: &str = "1";

/// Renders `p` with its facets; reading the result back and writing it
/// again gives identical bytes.
pub fn write_polytope(p: &Polytope) -> String {
    let mut out = format!("format_version {FORMAT_VERSION}\n");
    if let Some(name) = p.name() {
        out += &format!("name {name}\n");
    }
    out += &format!("dimension {}\nvertices {}\n", p.dim(), p.num_vertices());
    for v in p.vertices() {
        let coords: Vec<String> = v.coords().iter().map(format_rational).collect();
        out += &coords.join(" ");
        out.push('\n');
    }
    out += &format!("facets {}\n", p.facets().len());
    for f in p.facets() {
        let idx: Vec<String> = f.iter().map(usize::to_string).collect();
        out += &idx.join(" ");
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self { inner: it.peekable() }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), Error> {
        self.inner
            .next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of file, expected {what}")))
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| l.split_whitespace().next().unwrap_or(""))
    }

    /// Reads `key value` and returns the value.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str), Error> {
        let (n, line) = self.next(key)?;
        match line.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ => Err(Error::Parse(format!("line {n}: expected `{key} ...`, found {line:?}"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize, Error> {
        let (n, v) = self.keyed(key)?;
        v.parse()
            .map_err(|_| Error::Parse(format!("line {n}: {key} needs a count, found {v:?}")))
    }
}

/// Parses a polytope file. Errors are [`Error::Parse`] for malformed text
/// and the construction errors for geometrically invalid content.
pub fn read_polytope(text: &str) -> Result<Polytope, Error> {
    let mut lines = Lines::new(text);
    let (n, version) = lines.keyed("format_version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("line {n}: unsupported format_version {version}")));
    }
    let name = match lines.peek_key() {
        Some("name") => Some(lines.keyed("name")?.1.to_string()),
        _ => None,
    };
    let dim = lines.count("dimension")?;
    if dim == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let nv = lines.count("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, line) = lines.next("a vertex")?;
        let coords = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
        if coords.len() != dim {
            return Err(Error::Parse(format!(
                "line {n}: vertex has {} coordinates, dimension is {dim}",
                coords.len()
            )));
        }
        vertices.push(RVector::new(coords));
    }
    let facets = match lines.peek_key() {
        Some("facets") => {
            let nf = lines.count("facets")?;
            let mut facets = Vec::with_capacity(nf);
            for _ in 0..nf {
                let (n, line) = lines.next("a facet")?;
                let idx = line
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("line {n}: not a vertex index: {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
                    return Err(Error::InvalidIndex {
                        what: "vertex",
                        index: bad,
                        len: nv,
                    });
                }
                facets.push(idx);
            }
            Some(facets)
        }
        _ => None,
    };
    if let Some((n, line)) = lines.inner.next() {
        return Err(Error::Parse(format!("line {n}: unexpected content {line:?}")));
    }
    match facets {
        Some(f) => Polytope::new(dim, vertices, f, name),
        None if vertices.is_empty() => Err(Error::Parse("no vertices".into())),
        None => Polytope::from_vertices(vertices, name),
    }
}
