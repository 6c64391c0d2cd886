//! Graph and weight documents.
//!
//! A graph is `{"vertices": n, "edges": [[i, j], ...]}` with 1-based
//! vertices, or one of the names `C<n>` (cycle) and `K<n>` (complete).
//! Weights are `{"i-j": r, ...}` in a file or inline as `1-2=0.5,1-3=0.5`.

use std::collections::BTreeMap;
use std::path::Path;

use mzi_coherence::eventgraph::{Edge, EdgeWeights, EventGraph};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

fn parse_error(source: &str, e: &serde_json::Error) -> CliError {
    CliError::Parse {
        origin: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn field_error(source: &str, field: String, message: String) -> CliError {
    CliError::Field {
        origin: source.to_string(),
        field,
        message,
    }
}

fn named_graph(name: &str) -> Option<Result<EventGraph, CliError>> {
    let mut chars = name.chars();
    let kind = chars.next()?;
    let n: usize = chars.as_str().parse().ok()?;
    let graph = match kind {
        'C' | 'c' => EventGraph::cycle(n),
        'K' | 'k' => EventGraph::complete(n),
        _ => return None,
    };
    Some(graph.map_err(CliError::from))
}

pub fn parse_graph(text: &str, source: &str) -> Result<EventGraph, CliError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| parse_error(source, &e))?;
    if doc.vertices == 0 {
        return Err(field_error(
            source,
            "vertices".into(),
            "must be at least 1".into(),
        ));
    }
    for (k, [a, b]) in doc.edges.iter().enumerate() {
        for v in [a, b] {
            if *v == 0 || *v > doc.vertices {
                return Err(field_error(
                    source,
                    format!("edges[{k}]"),
                    format!("vertex {v} outside 1..={}", doc.vertices),
                ));
            }
        }
        if a == b {
            return Err(field_error(
                source,
                format!("edges[{k}]"),
                format!("loop at vertex {a}"),
            ));
        }
        if let Some(j) = doc.edges[..k]
            .iter()
            .position(|[c, d]| (c, d) == (a, b) || (c, d) == (b, a))
        {
            return Err(field_error(
                source,
                format!("edges[{k}]"),
                format!("duplicates edges[{j}]"),
            ));
        }
    }
    EventGraph::new(doc.vertices, doc.edges.iter().map(|[a, b]| (*a, *b)))
        .map_err(|e| field_error(source, "edges".into(), e.to_string()))
}

/// A graph document path, or a `C<n>` / `K<n>` name when no such file
/// exists.
pub fn load_graph(arg: &str) -> Result<EventGraph, CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(graph) = named_graph(arg) {
            return graph;
        }
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read graph {arg:?}: {e}")))?;
    parse_graph(&text, arg)
}

pub fn parse_inline_weights(text: &str) -> Result<BTreeMap<Edge, f64>, CliError> {
    let mut out = BTreeMap::new();
    for (k, item) in text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
    {
        let field = || format!("item {} ({item:?})", k + 1);
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| field_error("--weights", field(), "expected i-j=value".into()))?;
        let edge: Edge = key
            .trim()
            .parse()
            .map_err(|e: mzi_coherence::Error| field_error("--weights", field(), e.to_string()))?;
        let r: f64 = value
            .trim()
            .parse()
            .map_err(|_| field_error("--weights", field(), format!("{value:?} is not a number")))?;
        if out.insert(edge, r).is_some() {
            return Err(field_error(
                "--weights",
                field(),
                format!("edge {edge} given twice"),
            ));
        }
    }
    Ok(out)
}

pub fn parse_weight_doc(text: &str, source: &str) -> Result<BTreeMap<Edge, f64>, CliError> {
    let raw: BTreeMap<String, f64> =
        serde_json::from_str(text).map_err(|e| parse_error(source, &e))?;
    let mut out = BTreeMap::new();
    for (key, r) in raw {
        let edge: Edge = key.parse().map_err(|e: mzi_coherence::Error| {
            field_error(source, format!("{key:?}"), e.to_string())
        })?;
        if out.insert(edge, r).is_some() {
            return Err(field_error(
                source,
                format!("{key:?}"),
                format!("edge {edge} given twice"),
            ));
        }
    }
    Ok(out)
}

/// Inline weights when the argument contains `=`, otherwise a file.
pub fn load_weights(arg: &str, graph: &EventGraph) -> Result<EdgeWeights, CliError> {
    let map = if arg.contains('=') {
        parse_inline_weights(arg)?
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| CliError::Usage(format!("cannot read weights {arg:?}: {e}")))?;
        parse_weight_doc(&text, arg)?
    };
    let weights =
        EdgeWeights::new(map).map_err(|e| field_error(arg, "weights".into(), e.to_string()))?;
    weights
        .check_covers(graph)
        .map_err(|e| field_error(arg, "weights".into(), e.to_string()))?;
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documents() {
        let g = parse_graph(r#"{"vertices": 3, "edges": [[1,2],[2,3],[3,1]]}"#, "g").unwrap();
        assert_eq!(g, EventGraph::cycle(3).unwrap());
        assert_eq!(
            named_graph("K5").unwrap().unwrap(),
            EventGraph::complete(5).unwrap()
        );
        assert!(named_graph("X5").is_none());
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err = parse_graph(
            "{\n  \"vertices\": 3,\n  \"edges\": [[1,2],\n [2,x]]\n}",
            "g.json",
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err}");
        let err = parse_graph(r#"{"vertices": 3, "edges": [[1,2],[2,4]]}"#, "g.json").unwrap_err();
        assert!(err.to_string().contains("edges[1]"), "{err}");
        let err = parse_graph(r#"{"vertices": 3, "edges": [[1,2],[2,1]]}"#, "g.json").unwrap_err();
        assert!(err.to_string().contains("duplicates edges[0]"), "{err}");
        let err = parse_graph(r#"{"vertices": 3, "edge": []}"#, "g.json").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
        let err = parse_inline_weights("1-2=0.5,1-3=abc").unwrap_err();
        assert!(err.to_string().contains("item 2"), "{err}");
    }

    #[test]
    fn weights_must_cover_graph() {
        let g = EventGraph::cycle(3).unwrap();
        assert!(load_weights("1-2=1,1-3=1,2-3=0", &g).is_ok());
        assert!(load_weights("1-2=1,1-3=1", &g).is_err());
        assert!(load_weights("1-2=1,1-3=1,2-3=1.5", &g).is_err());
        let w = parse_weight_doc(r#"{"2-1": 0.5, "1-3": 0.25}"#, "w").unwrap();
        assert_eq!(w.len(), 2);
    }
}
