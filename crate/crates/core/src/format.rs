//! Plain-text formats for graphs, matrices, witnesses and split specs, plus
//! DOT export.
//!
//! All formats are line based, UTF-8, with `#` starting a comment. Parse
//! errors carry the 1-based line number; callers attach the file name with
//! [`Error::with_source`].
//!
//! ```text
//! graph G_A
//! vertex w
//! vertex v
//! edge e w w
//! ```
//!
//! ```text
//! matrix 2 2
//! 1 1
//! 2 0
//! ```
//!
//! A witness file holds `R`, then `S`, then an optional `roles` line such as
//! `roles B=RS,A=SR`. A split spec starts with `insplit` or `outsplit` and
//! then either lists `newvertex <id> over <vertex>` and `psi <edge> <id>`
//! lines or a single `partition <vertex> { <edges> } { <edges> }` line;
//! `allow-empty` permits empty out-split classes.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{check_id, DirectedGraph};
use crate::moves::{in_split_from_partition, out_split_from_partition, InSplitSpec, OutSplitSpec};
use crate::sse::{Roles, SseWitness};
use crate::{Int, IntMatrix};

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    let mut name = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(String, usize, usize)> = Vec::new();
    let mut edge_ids = HashSet::new();
    let mut last = 0;
    for (line, rec) in records(text) {
        last = line;
        let mut tok = rec.split_whitespace();
        let keyword = tok.next().unwrap_or_default();
        let args: Vec<&str> = tok.collect();
        match keyword {
            "graph" => {
                if name.is_some() {
                    return Err(Error::parse(line, "second `graph` header"));
                }
                name = Some(args.join(" "));
            }
            _ if name.is_none() => return Err(Error::parse(line, "expected `graph <name>` first")),
            "vertex" => {
                let [id] = args[..] else {
                    return Err(Error::parse(line, "expected `vertex <id>`"));
                };
                check_id(id).map_err(|e| Error::parse(line, e.to_string()))?;
                if index.insert(id.to_string(), vertices.len()).is_some() {
                    return Err(Error::parse(line, format!("duplicate vertex `{id}`")));
                }
                vertices.push(id.to_string());
            }
            "edge" => {
                let [id, s, r] = args[..] else {
                    return Err(Error::parse(line, "expected `edge <id> <source> <range>`"));
                };
                check_id(id).map_err(|e| Error::parse(line, e.to_string()))?;
                if !edge_ids.insert(id.to_string()) {
                    return Err(Error::parse(line, format!("duplicate edge `{id}`")));
                }
                let lookup = |v: &str| {
                    index
                        .get(v)
                        .copied()
                        .ok_or_else(|| Error::parse(line, format!("unknown vertex `{v}`")))
                };
                edges.push((id.to_string(), lookup(s)?, lookup(r)?));
            }
            other => return Err(Error::parse(line, format!("unknown record `{other}`"))),
        }
    }
    let Some(name) = name else {
        return Err(Error::parse(last.max(1), "missing `graph <name>` header"));
    };
    DirectedGraph::from_indexed(name, vertices, edges).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn write_graph(g: &DirectedGraph) -> String {
    let mut out = format!("graph {}\n", g.name());
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.id, g.vertex_id(e.source), g.vertex_id(e.range));
    }
    out
}

/// Records outside any matrix, with their line numbers.
type Leftovers = Vec<(usize, String)>;

/// Matrices in order of appearance, plus the records that are not part of a
/// matrix.
fn parse_matrices(text: &str) -> Result<(Vec<IntMatrix>, Leftovers)> {
    let mut matrices = Vec::new();
    let mut others = Vec::new();
    let mut pending: Option<(usize, usize, usize, Vec<Int>)> = None;
    for (line, rec) in records(text) {
        if let Some((header, rows, cols, entries)) = pending.as_mut() {
            for tok in rec.split_whitespace() {
                if entries.len() == *rows * *cols {
                    return Err(Error::parse(line, format!("matrix from line {header} has too many entries")));
                }
                let v: Int = tok
                    .parse()
                    .map_err(|_| Error::parse(line, format!("`{tok}` is not an integer")))?;
                entries.push(v);
            }
            if entries.len() == *rows * *cols {
                let (_, rows, cols, entries) = pending.take().expect("pending matrix");
                matrices.push(IntMatrix::new(rows, cols, entries)?);
            }
            continue;
        }
        let tokens: Vec<&str> = rec.split_whitespace().collect();
        if tokens[0] == "matrix" {
            let [_, r, c] = tokens[..] else {
                return Err(Error::parse(line, "expected `matrix <rows> <cols>`"));
            };
            let dim = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(line, format!("`{t}` is not a dimension")))
            };
            let (rows, cols) = (dim(r)?, dim(c)?);
            if rows * cols == 0 {
                matrices.push(IntMatrix::zeros(rows, cols));
            } else {
                pending = Some((line, rows, cols, Vec::new()));
            }
        } else {
            others.push((line, rec.to_string()));
        }
    }
    if let Some((header, rows, cols, entries)) = pending {
        return Err(Error::parse(
            header,
            format!("matrix needs {} entries, found {}", rows * cols, entries.len()),
        ));
    }
    Ok((matrices, others))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let (mut matrices, others) = parse_matrices(text)?;
    if let Some((line, rec)) = others.first() {
        return Err(Error::parse(*line, format!("unexpected `{rec}`")));
    }
    match matrices.len() {
        1 => Ok(matrices.remove(0)),
        n => Err(Error::parse(1, format!("expected one matrix, found {n}"))),
    }
}

pub fn write_matrix(m: &IntMatrix) -> String {
    let mut out = format!("matrix {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// A witness file: `R`, `S` and the role convention if one is recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFile {
    pub witness: SseWitness,
    pub roles: Option<Roles>,
}

pub fn parse_witness(text: &str) -> Result<WitnessFile> {
    let (mut matrices, others) = parse_matrices(text)?;
    let mut roles = None;
    for (line, rec) in others {
        let Some(rest) = rec.strip_prefix("roles") else {
            return Err(Error::parse(line, format!("unexpected `{rec}`")));
        };
        if roles.is_some() {
            return Err(Error::parse(line, "second `roles` line"));
        }
        roles = Some(Roles::parse(rest).ok_or_else(|| {
            Error::parse(line, format!("unknown roles `{}`, expected A=RS,B=SR or B=RS,A=SR", rest.trim()))
        })?);
    }
    if matrices.len() != 2 {
        return Err(Error::parse(1, format!("expected matrices R and S, found {}", matrices.len())));
    }
    let s = matrices.pop().expect("two matrices");
    let r = matrices.pop().expect("two matrices");
    Ok(WitnessFile { witness: SseWitness::new(r, s).map_err(|e| Error::parse(1, e.to_string()))?, roles })
}

pub fn write_witness(w: &WitnessFile) -> String {
    let mut out = String::from("# R\n");
    out.push_str(&write_matrix(w.witness.r()));
    out.push_str("# S\n");
    out.push_str(&write_matrix(w.witness.s()));
    if let Some(roles) = w.roles {
        let _ = writeln!(out, "roles {roles}");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitSpec {
    In(InSplitSpec),
    Out(OutSplitSpec),
}

/// `{ a b } { c }` into classes, with braces allowed to touch the ids.
fn parse_classes(line: usize, text: &str) -> Result<Vec<Vec<String>>> {
    let spaced = text.replace('{', " { ").replace('}', " } ");
    let mut classes = Vec::new();
    let mut current: Option<Vec<String>> = None;
    for tok in spaced.split_whitespace() {
        match (tok, current.as_mut()) {
            ("{", None) => current = Some(Vec::new()),
            ("}", Some(_)) => classes.push(current.take().expect("open class")),
            ("{", Some(_)) => return Err(Error::parse(line, "nested `{`")),
            ("}", None) => return Err(Error::parse(line, "unmatched `}`")),
            (id, Some(class)) => class.push(id.to_string()),
            (id, None) => return Err(Error::parse(line, format!("`{id}` outside braces"))),
        }
    }
    if current.is_some() {
        return Err(Error::parse(line, "unclosed `{`"));
    }
    Ok(classes)
}

/// Parse a split spec against the graph it splits.
pub fn parse_split(text: &str, g: &DirectedGraph) -> Result<SplitSpec> {
    let mut recs = records(text);
    let Some((hline, header)) = recs.next() else {
        return Err(Error::parse(1, "empty split spec"));
    };
    let out = match header {
        "insplit" => false,
        "outsplit" => true,
        other => return Err(Error::parse(hline, format!("expected `insplit` or `outsplit`, found `{other}`"))),
    };
    let mut allow_empty = false;
    let mut partition: Option<(usize, String, Vec<Vec<String>>)> = None;
    let mut new_vertices: Vec<String> = Vec::new();
    let mut alpha = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut psi: Vec<Option<usize>> = vec![None; g.edge_count()];
    let mut general_line = None;
    let mut last = hline;
    for (line, rec) in recs {
        last = line;
        let (keyword, rest) = rec.split_once(char::is_whitespace).unwrap_or((rec, ""));
        let args: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "allow-empty" if out && args.is_empty() => allow_empty = true,
            "allow-empty" => return Err(Error::parse(line, "`allow-empty` applies to out-splits only")),
            "partition" => {
                if partition.is_some() {
                    return Err(Error::parse(line, "only one `partition` line is supported"));
                }
                let (w, classes) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
                if w.is_empty() {
                    return Err(Error::parse(line, "expected `partition <vertex> { ... } ...`"));
                }
                partition = Some((line, w.to_string(), parse_classes(line, classes)?));
            }
            "newvertex" => {
                general_line.get_or_insert(line);
                let [id, "over", v] = args[..] else {
                    return Err(Error::parse(line, "expected `newvertex <id> over <vertex>`"));
                };
                check_id(id).map_err(|e| Error::parse(line, e.to_string()))?;
                let v = g.vertex(v).map_err(|e| Error::parse(line, e.to_string()))?;
                if index.insert(id.to_string(), new_vertices.len()).is_some() {
                    return Err(Error::parse(line, format!("duplicate new vertex `{id}`")));
                }
                new_vertices.push(id.to_string());
                alpha.push(v);
            }
            "psi" => {
                general_line.get_or_insert(line);
                let [e, id] = args[..] else {
                    return Err(Error::parse(line, "expected `psi <edge> <new-vertex>`"));
                };
                let e = g.edge(e).map_err(|err| Error::parse(line, err.to_string()))?;
                let Some(&u) = index.get(id) else {
                    return Err(Error::parse(line, format!("new vertex `{id}` not declared yet")));
                };
                if psi[e].replace(u).is_some() {
                    return Err(Error::parse(line, format!("second `psi` line for `{}`", g.edge_id(e))));
                }
            }
            other => return Err(Error::parse(line, format!("unknown record `{other}`"))),
        }
    }
    if let Some((line, w, classes)) = partition {
        if let Some(general) = general_line {
            return Err(Error::parse(general, "`partition` cannot be mixed with `newvertex`/`psi`"));
        }
        let at = |e: Error| Error::parse(line, e.to_string());
        return if out {
            out_split_from_partition(g, &w, &classes, allow_empty).map(SplitSpec::Out).map_err(at)
        } else {
            in_split_from_partition(g, &w, &classes).map(SplitSpec::In).map_err(at)
        };
    }
    if let Some(e) = psi.iter().position(Option::is_none) {
        return Err(Error::parse(last, format!("no `psi` line for edge `{}`", g.edge_id(e))));
    }
    let psi: Vec<usize> = psi.into_iter().map(|u| u.expect("checked above")).collect();
    Ok(if out {
        SplitSpec::Out(OutSplitSpec { new_vertices, alpha, psi, allow_empty })
    } else {
        SplitSpec::In(InSplitSpec { new_vertices, alpha, psi })
    })
}

fn write_general(out: &mut String, g: &DirectedGraph, new_vertices: &[String], alpha: &[usize], psi: &[usize]) {
    for (u, &v) in new_vertices.iter().zip(alpha) {
        let _ = writeln!(out, "newvertex {u} over {}", g.vertex_id(v));
    }
    for (e, &u) in psi.iter().enumerate() {
        let _ = writeln!(out, "psi {} {}", g.edge_id(e), new_vertices[u]);
    }
}

/// Always written in the general `newvertex`/`psi` form.
pub fn write_split(spec: &SplitSpec, g: &DirectedGraph) -> String {
    let mut out = String::new();
    match spec {
        SplitSpec::In(s) => {
            out.push_str("insplit\n");
            write_general(&mut out, g, &s.new_vertices, &s.alpha, &s.psi);
        }
        SplitSpec::Out(s) => {
            out.push_str("outsplit\n");
            if s.allow_empty {
                out.push_str("allow-empty\n");
            }
            write_general(&mut out, g, &s.new_vertices, &s.alpha, &s.psi);
        }
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_dot(g: &DirectedGraph) -> String {
    let mut out = format!("digraph {} {{\n", quote(g.name()));
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.vertex_id(e.source)),
            quote(g.vertex_id(e.range)),
            quote(&e.id)
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{dual_graph, fixtures::*};
    use crate::moves::{apply_in_split, complete_in_split};
    use proptest::prelude::*;

    const G_A: &str = "# the running example\ngraph G_A\nvertex w\nvertex v\n\nedge e w w\nedge f w v  # to v\nedge g v w\nedge h v w\n";

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn graph_round_trip() {
        let g = parse_graph(G_A).unwrap();
        assert_eq!(g, g_a());
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let split = apply_in_split(&g, &complete_in_split(&g).unwrap()).unwrap();
        assert_eq!(parse_graph(&write_graph(&split)).unwrap(), split);
        let dual = dual_graph(&g);
        assert_eq!(parse_graph(&write_graph(&dual)).unwrap(), dual);
    }

    #[test]
    fn graph_errors_name_the_line() {
        assert_eq!(line_of(parse_graph("graph x\nvertex a\nedge e a b\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_graph("vertex a\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_graph("graph x\nvertex a\nvertex a\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_graph("graph x\nvertex a\nedge e a\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_graph("graph x\nnode a\n").unwrap_err()), 2);
        let e = parse_graph("graph x\nvertex a\nedge e a b\n").unwrap_err().with_source("x.graph");
        assert_eq!(e.to_string(), "x.graph:3: unknown vertex `b`");
    }

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, 0, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        // entries may wrap across lines
        assert_eq!(parse_matrix("matrix 2 2\n1 1 2\n0\n").unwrap(), IntMatrix::from_i64(&[&[1, 1], &[2, 0]]));
        assert_eq!(parse_matrix("matrix 0 0\n").unwrap(), IntMatrix::zeros(0, 0));
        let big = "matrix 1 1\n123456789012345678901234567890\n";
        assert_eq!(write_matrix(&parse_matrix(big).unwrap()), big);
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(line_of(parse_matrix("matrix 2 2\n1 1\n2 x\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_matrix("matrix 2 2\n1 1\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_matrix("matrix 1 1\n1 2\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_matrix("matrix 1\n").unwrap_err()), 1);
    }

    #[test]
    fn witness_round_trip() {
        let r = IntMatrix::from_i64(&[&[1, 0], &[1, 0], &[0, 1]]);
        let s = IntMatrix::from_i64(&[&[1, 0, 1], &[1, 1, 0]]);
        let w = WitnessFile { witness: SseWitness::new(r, s).unwrap(), roles: Some(Roles::BRsASr) };
        let text = write_witness(&w);
        assert!(text.ends_with("roles B=RS,A=SR\n"));
        assert_eq!(parse_witness(&text).unwrap(), w);
        let bare = WitnessFile { roles: None, ..w };
        assert_eq!(parse_witness(&write_witness(&bare)).unwrap(), bare);
        assert!(parse_witness("matrix 1 1\n1\nroles sideways\n").is_err());
    }

    #[test]
    fn split_specs() {
        let g = g_a();
        let short = "insplit\npartition w { e h } { g }\n";
        let SplitSpec::In(spec) = parse_split(short, &g).unwrap() else {
            panic!("expected an in-split");
        };
        assert_eq!(spec.new_vertices, ["w@1", "w@2", "v@1"]);
        let text = write_split(&SplitSpec::In(spec.clone()), &g);
        assert_eq!(parse_split(&text, &g).unwrap(), SplitSpec::In(spec));
        let tight = parse_split("outsplit\npartition w {e} {f}\n", &g).unwrap();
        let spaced = parse_split("outsplit\npartition w { e } { f }\n", &g).unwrap();
        assert_eq!(tight, spaced);
        let empty = parse_split("outsplit\nallow-empty\npartition w { e f } { }\n", &g).unwrap();
        let SplitSpec::Out(ref o) = empty else { panic!("expected an out-split") };
        assert!(o.allow_empty);
        assert_eq!(parse_split(&write_split(&empty, &g), &g).unwrap(), empty);
    }

    #[test]
    fn split_errors() {
        let g = g_a();
        assert_eq!(line_of(parse_split("sideways\n", &g).unwrap_err()), 1);
        assert_eq!(line_of(parse_split("insplit\n\npartition q { e }\n", &g).unwrap_err()), 3);
        let missing = "insplit\nnewvertex w1 over w\nnewvertex v1 over v\npsi e w1\n";
        assert_eq!(line_of(parse_split(missing, &g).unwrap_err()), 4);
        assert_eq!(line_of(parse_split("insplit\npsi e w1\n", &g).unwrap_err()), 2);
        assert_eq!(line_of(parse_split("insplit\nallow-empty\n", &g).unwrap_err()), 2);
        assert_eq!(line_of(parse_split("insplit\npartition w { e h } { g\n", &g).unwrap_err()), 2);
    }

    #[test]
    fn dot_output() {
        let dot = export_dot(&g_a());
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with("\";")).count(), 2);
        let empty = DirectedGraph::new::<&str>("empty", &[], &[]).unwrap();
        assert_eq!(export_dot(&empty), "digraph \"empty\" {\n}\n");
    }

    proptest! {
        #[test]
        fn random_graphs_round_trip(n in 1usize..6, raw in proptest::collection::vec((0usize..6, 0usize..6), 0..12)) {
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, usize, usize)> = raw
                .iter()
                .enumerate()
                .map(|(i, &(s, r))| (format!("e{i}"), s % n, r % n))
                .collect();
            let g = DirectedGraph::from_indexed("random", vertices, edges).unwrap();
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }

        #[test]
        fn random_matrices_round_trip(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-50i64..50, 16)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| Int::from(seed[i * 4 + j]));
            prop_assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        }
    }
}
