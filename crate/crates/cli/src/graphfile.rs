//! Graph files: the plain-text format and its JSON twin.
//!
//! ```text
//! vertices: -1 -2 -3 -7        {"vertices": [-1, -2, -3, -7],
//! edges:                        "edges": [[1, 2], [1, 3], [1, 4]]}
//! 1 2
//! 1 3
//! 1 4
//! ```

use plumbhf_core::{Error, PlumbingGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<i64>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&PlumbingGraph> for GraphJson {
    fn from(g: &PlumbingGraph) -> Self {
        Self {
            vertices: g.weights().to_vec(),
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_graph(text: &str) -> Result<PlumbingGraph, Error> {
    if text.trim_start().starts_with('{') {
        let json: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        PlumbingGraph::new(json.vertices, json.edges.into_iter().map(|[a, b]| (a, b)))
    } else {
        text.parse()
    }
}

pub fn to_json(g: &PlumbingGraph) -> String {
    let mut out = serde_json::to_string(&GraphJson::from(g)).expect("graph serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use plumbhf_core::families::sigma_2_3;

    #[test]
    fn both_formats_agree() {
        let g = sigma_2_3(3).unwrap().graph;
        assert_eq!(parse_graph(&g.to_string()).unwrap(), g);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
        assert_eq!(
            to_json(&sigma_2_3(1).unwrap().graph),
            "{\"vertices\":[-1,-2,-3,-7],\"edges\":[[1,2],[1,3],[1,4]]}\n"
        );
    }

    #[test]
    fn json_errors() {
        assert!(matches!(parse_graph("{\"vertices\": [-2], \"edges\": 5}"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_graph("{\"vertices\": [-2, -2], \"edges\": [[1, 2], [2, 1]]}"),
            Err(Error::MalformedInput(_))
        ));
    }
}
