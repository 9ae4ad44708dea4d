//! Plain-text graph format.
//!
//! ```text
//! # optional comment lines
//! p 3 2
//! 0 1
//! 1 2
//! ```
//!
//! The header gives the order and the edge count; each edge line lists
//! `u v` with `u < v`. Lines starting with `#` are ignored by the parser
//! except for `# role <name> <id>` annotations, which [`parse_roles`] reads.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a non-negative integer, got {s:?}")))
        };
        match header {
            None => {
                if fields.len() != 3 || fields[0] != "p" {
                    return Err(parse_err(line_no, "expected header \"p <n> <m>\""));
                }
                header = Some((number(fields[1])?, number(fields[2])?));
            }
            Some((n, _)) => {
                if fields.len() != 2 {
                    return Err(parse_err(line_no, "expected an edge \"<u> <v>\""));
                }
                let (u, v) = (number(fields[0])?, number(fields[1])?);
                if u >= v {
                    return Err(parse_err(line_no, format!("edge {u} {v} must satisfy u < v")));
                }
                if v >= n {
                    return Err(parse_err(line_no, format!("vertex {v} out of range for order {n}")));
                }
                edges.push((u, v));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing header line"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} edges but {} were given", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

pub fn read_graph(path: impl AsRef<std::path::Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p {} {}", g.order(), g.size()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Graph text followed by one `# role <name> <id>` line per annotation.
pub fn write_graph_with_roles(g: &Graph, roles: &[(String, usize)]) -> String {
    let mut out = write_graph(g);
    for (name, id) in roles {
        writeln!(out, "# role {name} {id}").unwrap();
    }
    out
}

/// Reads back `# role <name> <id>` annotations.
pub fn parse_roles(text: &str) -> Result<Vec<(String, usize)>> {
    let mut roles = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let Some(rest) = raw.trim().strip_prefix('#') else {
            continue;
        };
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.first() != Some(&"role") {
            continue;
        }
        if fields.len() != 3 {
            return Err(parse_err(idx + 1, "expected \"# role <name> <id>\""));
        }
        let id = fields[2]
            .parse()
            .map_err(|_| parse_err(idx + 1, format!("bad vertex id {:?}", fields[2])))?;
        roles.push((fields[1].to_string(), id));
    }
    Ok(roles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::new(4, [(2, 3), (0, 1), (1, 2)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "p 4 3\n0 1\n1 2\n2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_roles() {
        let g = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let roles = vec![("u1".to_string(), 0), ("cut".to_string(), 2)];
        let text = format!("# a triangle\n{}", write_graph_with_roles(&g, &roles));
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(parse_roles(&text).unwrap(), roles);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("p 3 1\n1 0\n").is_err());
        assert!(parse_graph("p 3 1\n0 3\n").is_err());
        assert!(parse_graph("p 3 2\n0 1\n").is_err());
        assert!(parse_graph("p 3 2\n0 1\n0 1\n").is_err());
        assert!(parse_graph("q 3 0\n").is_err());
        assert!(parse_graph("p 3 1\n0 x\n").is_err());
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph("p 0 0\n").unwrap();
        assert_eq!(g.order(), 0);
    }
}
