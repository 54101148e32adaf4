//! DIMACS `.col` reader and writer.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt::Write;

use super::{Graph, Vertex};
use crate::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number(tok: Option<&str>, what: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_error(line, format!("{what} `{tok}` is not a non-negative integer")))
}

impl Graph {
    /// Parses `c` comment lines, one `p edge <n> <m>` line and `e <u> <v>`
    /// lines. Blank lines are skipped. The edge count on the `p` line is not
    /// checked against the edges, since repeated edges are allowed and
    /// collapse. Errors carry the 1-based line number.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let mut toks = raw.split_whitespace();
            match toks.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if graph.is_some() {
                        return Err(parse_error(line, "duplicate `p` line"));
                    }
                    match toks.next() {
                        Some("edge" | "col") => {}
                        other => {
                            return Err(parse_error(line, format!("expected `p edge`, found `p {}`", other.unwrap_or(""))));
                        }
                    }
                    let n = number(toks.next(), "vertex count", line)?;
                    number(toks.next(), "edge count", line)?;
                    if toks.next().is_some() {
                        return Err(parse_error(line, "trailing tokens after `p edge <n> <m>`"));
                    }
                    graph = Some(Graph::empty(n));
                }
                Some("e") => {
                    let g = graph.as_mut().ok_or_else(|| parse_error(line, "edge before the `p` line"))?;
                    let u: Vertex = number(toks.next(), "endpoint", line)?;
                    let v: Vertex = number(toks.next(), "endpoint", line)?;
                    if toks.next().is_some() {
                        return Err(parse_error(line, "trailing tokens after `e <u> <v>`"));
                    }
                    g.insert_edge(u, v).map_err(|e| parse_error(line, e.to_string()))?;
                }
                Some(other) => return Err(parse_error(line, format!("unknown line type `{other}`"))),
            }
        }
        graph.ok_or_else(|| parse_error(text.lines().count().max(1), "missing `p edge <n> <m>` line"))
    }

    /// DIMACS text with edges in lexicographic order, `u < v`.
    pub fn to_dimacs(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            for l in c.lines() {
                let _ = writeln!(out, "c {l}");
            }
        }
        let _ = writeln!(out, "p edge {} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cycle() {
        let g = Graph::parse_dimacs("c pentagon\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n").unwrap();
        assert_eq!(g, Graph::cycle(5));
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("e 1 2\np edge 2 1\n", 1),
            ("p edge 2 1\np edge 2 1\n", 2),
            ("p edge 2 1\n\ne 1 3\n", 3),
            ("c x\np edge 2 1\ne 2 2\n", 3),
            ("c only comments\n", 1),
            ("p edge 2 x\n", 1),
            ("p edge 3 1\nq 1 2\n", 2),
        ];
        for (text, line) in cases {
            match Graph::parse_dimacs(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn writer_round_trips() {
        let g = Graph::complete_bipartite(3, 3);
        let text = g.to_dimacs(Some("k33"));
        assert!(text.starts_with("c k33\np edge 6 9\ne 1 4\n"));
        assert_eq!(Graph::parse_dimacs(&text).unwrap(), g);
    }
}
