//! Rendering of analysis reports as text and JSON.

use serde_json::{json, Value};

use crate::certificates::{AnalysisReport, Method};

/// The one-line verdict, e.g.
/// `Decomposable (method: certificate, rule: ShephardFacet)`.
pub fn summary(r: &AnalysisReport) -> String {
    let how = match (r.method, r.closing_rule(), r.oracle_dimension) {
        (Method::Oracle, _, Some(k)) => {
            let rel = if k == r.dim + 1 { "=" } else { ">" };
            format!("oracle dimension {k} {rel} d+1")
        }
        (m, Some(rule), _) => format!("method: {m}, rule: {rule}"),
        (m, None, _) => format!("method: {m}"),
    };
    format!("{} ({how})", r.verdict)
}

/// Human-readable report; `with_trace` appends the certificate steps.
pub fn render_text(r: &AnalysisReport, with_trace: bool) -> String {
    let mut out = String::new();
    if let Some(name) = &r.name {
        out += &format!("polytope: {name}\n");
    }
    out += &format!("dimension: {}\n", r.dim);
    out += &format!("verdict: {}\n", summary(r));
    out += &format!("f-vector: {}\n", r.fvector);
    if let Some(k) = r.oracle_dimension {
        out += &format!("oracle dimension: {k} (d+1 = {})\n", r.dim + 1);
    }
    if r.rule_notes.is_empty() {
        out += "count rules: none apply\n";
    } else {
        out += "count rules:\n";
        for c in &r.rule_notes {
            out += &format!("  {c}\n");
        }
    }
    if with_trace {
        match &r.trace {
            Some(t) => {
                out += "trace:\n";
                for line in t.lines() {
                    out += &format!("  {line}\n");
                }
                out += &format!("  verdict: {} ({})\n", t.verdict, t.coverage_note);
            }
            None => out += "trace: none\n",
        }
    }
    out
}

/// JSON mirror of the report, with the summary line and rendered trace
/// lines added so nothing in the text form is lost.
pub fn render_json(r: &AnalysisReport) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    let extra = json!({
        "summary": summary(r),
        "closing_rule": r.closing_rule().map(|x| x.to_string()),
        "trace_lines": r.trace.as_ref().map(|t| t.lines()),
        "rule_notes_text": r.rule_notes.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{analyze, Mode};
    use crate::polytope::{construct_basic, Kind};

    #[test]
    fn summaries() {
        let prism = construct_basic(&Kind::Delta(1, 2)).unwrap();
        let r = analyze(&prism, Mode::CertificatesFirst).unwrap();
        assert_eq!(summary(&r), "Decomposable (method: certificate, rule: ShephardFacet)");
        let oct = construct_basic(&Kind::Octahedron).unwrap();
        let r = analyze(&oct, Mode::OracleOnly).unwrap();
        assert_eq!(summary(&r), "Indecomposable (oracle dimension 4 = d+1)");
    }

    #[test]
    fn json_carries_text_fields() {
        let p = construct_basic(&Kind::Bd198).unwrap().with_name("bd198");
        let r = analyze(&p, Mode::CertificatesFirst).unwrap();
        let text = render_text(&r, true);
        let j = render_json(&r);
        assert_eq!(j["summary"], summary(&r));
        assert_eq!(j["name"], "bd198");
        assert_eq!(j["method"], "certificate");
        for line in j["trace_lines"].as_array().unwrap() {
            assert!(text.contains(line.as_str().unwrap()));
        }
        assert_eq!(j["fvector"]["edges"], 15);
        assert!(text.contains("PyramidReduction") && text.contains("ShephardFacet"));
    }
}
