//! Graph description files: a line-oriented text format plus a JSON mirror.
//!
//! Text format, one declaration per line:
//!
//! ```text
//! landaukit-graph v1
//! # photon lines are endpoint pairs; anchors are v1|v2|v3 or s<side>.<pos>
//! photon s1.0 s2.0
//! photon v1 s2.1
//! route 2 v2            # optional: 1-based photon loop must cross v2
//! ```
//!
//! The JSON mirror is the serde encoding of `GraphSpec`; files starting
//! with `{` are parsed as JSON.

use crate::graphs::{
    Anchor, DressedGraph, ExtVertex, GraphError, GraphSpec, PosRef, PhotonSpec, RouteHint, Side,
};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum GraphFileError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json mirror: {0}")]
    Json(#[from] serde_json::Error),
}

pub const HEADER: &str = "landaukit-graph v1";

fn parse_anchor(tok: &str, line: usize) -> Result<Anchor, GraphFileError> {
    match tok {
        "v1" => return Ok(Anchor::Vertex(ExtVertex::V1)),
        "v2" => return Ok(Anchor::Vertex(ExtVertex::V2)),
        "v3" => return Ok(Anchor::Vertex(ExtVertex::V3)),
        _ => {}
    }
    let bad = || GraphFileError::Parse {
        line,
        msg: format!("bad anchor '{tok}': expected v1|v2|v3 or s<side>.<pos>"),
    };
    let rest = tok.strip_prefix('s').ok_or_else(bad)?;
    let (side_str, pos_str) = rest.split_once('.').ok_or_else(bad)?;
    let side = match side_str {
        "1" => Side::S1,
        "2" => Side::S2,
        "3" => Side::S3,
        _ => return Err(bad()),
    };
    let pos: usize = pos_str.parse().map_err(|_| bad())?;
    Ok(Anchor::Side(PosRef { side, pos }))
}

pub fn anchor_token(a: &Anchor) -> String {
    match a {
        Anchor::Vertex(ExtVertex::V1) => "v1".into(),
        Anchor::Vertex(ExtVertex::V2) => "v2".into(),
        Anchor::Vertex(ExtVertex::V3) => "v3".into(),
        Anchor::Side(p) => format!("s{}.{}", p.side.number(), p.pos),
    }
}

/// Parse the line-oriented format into a graph spec.
pub fn parse_graph_text(text: &str) -> Result<GraphSpec, GraphFileError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((i, l)) => {
                let t = l.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                break (i + 1, t);
            }
            None => {
                return Err(GraphFileError::Parse {
                    line: 1,
                    msg: format!("empty file: expected header '{HEADER}'"),
                })
            }
        }
    };
    if header.1 != HEADER {
        return Err(GraphFileError::Parse {
            line: header.0,
            msg: format!("bad header '{}': expected '{HEADER}'", header.1),
        });
    }
    let mut photons = Vec::new();
    let mut routes: BTreeMap<usize, RouteHint> = BTreeMap::new();
    for (i, raw) in lines {
        let line = i + 1;
        let t = raw.split('#').next().unwrap().trim();
        if t.is_empty() {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        match toks[0] {
            "photon" => {
                if toks.len() != 3 {
                    return Err(GraphFileError::Validation(format!(
                        "photon endpoints: line {line} declares {} endpoint(s), need exactly 2",
                        toks.len() - 1
                    )));
                }
                let a = parse_anchor(toks[1], line)?;
                let b = parse_anchor(toks[2], line)?;
                photons.push(PhotonSpec { ends: [a, b] });
            }
            "route" => {
                if toks.len() < 3 {
                    return Err(GraphFileError::Parse {
                        line,
                        msg: "route needs a photon number and at least one vertex".into(),
                    });
                }
                let idx: usize = toks[1].parse().map_err(|_| GraphFileError::Parse {
                    line,
                    msg: format!("bad photon number '{}'", toks[1]),
                })?;
                if idx == 0 {
                    return Err(GraphFileError::Parse {
                        line,
                        msg: "photon numbers are 1-based".into(),
                    });
                }
                let mut hint = RouteHint::default();
                for tok in &toks[2..] {
                    match parse_anchor(tok, line)? {
                        Anchor::Vertex(v) => {
                            hint.0.insert(v);
                        }
                        Anchor::Side(_) => {
                            return Err(GraphFileError::Parse {
                                line,
                                msg: "route hints name external vertices only".into(),
                            })
                        }
                    }
                }
                routes.insert(idx - 1, hint);
            }
            other => {
                return Err(GraphFileError::Parse {
                    line,
                    msg: format!("unknown declaration '{other}'"),
                })
            }
        }
    }
    Ok(GraphSpec { photons, routes })
}

/// Render a spec in the line-oriented format.
pub fn render_graph_text(spec: &GraphSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    for p in &spec.photons {
        let _ = writeln!(out, "photon {} {}", anchor_token(&p.ends[0]), anchor_token(&p.ends[1]));
    }
    for (idx, hint) in &spec.routes {
        let verts: Vec<String> = hint
            .0
            .iter()
            .map(|v| anchor_token(&Anchor::Vertex(*v)))
            .collect();
        let _ = writeln!(out, "route {} {}", idx + 1, verts.join(" "));
    }
    out
}

pub fn spec_to_json(spec: &GraphSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// Parse either format (JSON mirrors start with `{`) and build the graph.
pub fn parse_graph_str(text: &str) -> Result<DressedGraph, GraphFileError> {
    let spec = if text.trim_start().starts_with('{') {
        serde_json::from_str::<GraphSpec>(text)?
    } else {
        parse_graph_text(text)?
    };
    Ok(DressedGraph::build(&spec)?)
}

pub fn parse_graph_file(path: &Path) -> Result<DressedGraph, GraphFileError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_through_text_format() {
        for spec in [
            fixtures::fig2_spec(),
            fixtures::fig6_spec(),
            fixtures::fig11_spec(),
        ] {
            let text = render_graph_text(&spec);
            let g = parse_graph_str(&text).unwrap();
            let direct = DressedGraph::build(&spec).unwrap();
            assert_eq!(g.n, direct.n);
            assert_eq!(g.coupling_count, direct.coupling_count);
            for (a, b) in g.loops.iter().zip(direct.loops.iter()) {
                assert_eq!(a.segments, b.segments);
                assert_eq!(a.entry, b.entry);
                assert_eq!(a.exit, b.exit);
            }
        }
    }

    #[test]
    fn json_mirror_is_accepted() {
        let spec = fixtures::fig11_spec();
        let json = spec_to_json(&spec);
        let g = parse_graph_str(&json).unwrap();
        assert_eq!(g.n, 2);
    }

    #[test]
    fn fig2_file_has_expected_segment_counts() {
        let text = "landaukit-graph v1\nphoton s1.0 s2.0\n";
        let g = parse_graph_str(text).unwrap();
        assert_eq!(g.coupling_count, [1, 1, 0]);
        let segs = [2usize, 2, 1];
        for (side, want) in crate::graphs::SIDES.into_iter().zip(segs) {
            assert_eq!(g.coupling_count[side.idx()] + 1, want);
        }
        assert_eq!(crate::graphs::enumerate_star_graphs(&g).len(), 4);
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(
            parse_graph_text(""),
            Err(GraphFileError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph_text("# only a comment\n"),
            Err(GraphFileError::Parse { .. })
        ));
    }

    #[test]
    fn single_endpoint_is_a_validation_error() {
        let text = "landaukit-graph v1\nphoton v1\n";
        match parse_graph_text(text) {
            Err(GraphFileError::Validation(msg)) => assert!(msg.contains("photon endpoints")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn bad_tokens_are_parse_errors_with_line_numbers() {
        let text = "landaukit-graph v1\n\nphoton s4.0 v1\n";
        match parse_graph_text(text) {
            Err(GraphFileError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "landaukit-graph v1\nwibble 1 2\n";
        assert!(matches!(
            parse_graph_text(text),
            Err(GraphFileError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn route_hints_parse_and_render() {
        let text = "landaukit-graph v1\nphoton s1.0 s2.0\nroute 1 v2\n";
        let spec = parse_graph_text(text).unwrap();
        assert_eq!(spec.routes.len(), 1);
        let rendered = render_graph_text(&spec);
        assert!(rendered.contains("route 1 v2"));
        let again = parse_graph_text(&rendered).unwrap();
        assert_eq!(again.routes, spec.routes);
    }
}
