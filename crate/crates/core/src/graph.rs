//! Finite directed graphs with explicit vertex and edge order.
//!
//! A graph is the quadruple `(E⁰, E¹, r, s)`. The order of both lists is part
//! of the value: it fixes how adjacency matrices are indexed and how derived
//! graphs are enumerated. Paths follow the range-first convention, so
//! `e₁e₂…eₙ` is composable when `s(eᵢ) = r(eᵢ₊₁)`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

#[derive(Clone, Debug)]
pub struct DirectedGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DirectedGraph {}

pub(crate) fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace() || matches!(c, '#' | '{' | '}')) {
        return Err(Error::InvalidId(id.to_string()));
    }
    Ok(())
}

impl DirectedGraph {
    /// Build a graph from ids. Edges are `(id, source, range)` triples.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        vertices: &[S],
        edges: &[(S, S, S)],
    ) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            check_id(v)?;
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    kind: "vertex",
                    id: v.clone(),
                });
            }
        }
        let lookup = |v: &str| index.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.into()));
        let edges = edges
            .iter()
            .map(|(id, s, r)| Ok((id.as_ref().to_string(), lookup(s.as_ref())?, lookup(r.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(name, vertices, edges)
    }

    /// Build from vertex ids and `(edge id, source index, range index)`.
    pub fn from_indexed(
        name: impl Into<String>,
        vertices: Vec<String>,
        edges: Vec<(String, usize, usize)>,
    ) -> Result<Self> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            check_id(v)?;
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    kind: "vertex",
                    id: v.clone(),
                });
            }
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for (i, (id, source, range)) in edges.into_iter().enumerate() {
            check_id(&id)?;
            for endpoint in [source, range] {
                if endpoint >= vertices.len() {
                    return Err(Error::UnknownVertex(format!("#{endpoint}")));
                }
            }
            if edge_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId { kind: "edge", id });
            }
            out.push(Edge { id, source, range });
        }
        Ok(DirectedGraph {
            name: name.into(),
            vertices,
            edges: out,
            vertex_index,
            edge_index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].source
    }

    pub fn range(&self, e: usize) -> usize {
        self.edges[e].range
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// `s⁻¹(v)` in edge order.
    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].source == v).collect()
    }

    /// `r⁻¹(v)` in edge order.
    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].range == v).collect()
    }

    /// The graph with source and range swapped; ids are unchanged.
    pub fn reversed(&self) -> DirectedGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.id.clone(), e.range, e.source))
            .collect();
        DirectedGraph::from_indexed(format!("{}^T", self.name), self.vertices.clone(), edges)
            .expect("reversal preserves validity")
    }
}

/// A composable edge sequence `e₁…eₙ` with `s(eᵢ) = r(eᵢ₊₁)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    edges: Vec<usize>,
}

impl Path {
    pub fn new(g: &DirectedGraph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyPath);
        }
        if let Some(&bad) = edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(Error::UnknownEdge(format!("#{bad}")));
        }
        if let Some(position) = edges.windows(2).position(|w| g.source(w[0]) != g.range(w[1])) {
            return Err(Error::NotComposable { position });
        }
        Ok(Path { edges })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `r(e₁)`.
    pub fn range(&self, g: &DirectedGraph) -> usize {
        g.range(self.edges[0])
    }

    /// `s(eₙ)`.
    pub fn source(&self, g: &DirectedGraph) -> usize {
        g.source(*self.edges.last().expect("paths are non-empty"))
    }

    pub fn label(&self, g: &DirectedGraph) -> String {
        let ids: Vec<&str> = self.edges.iter().map(|&e| g.edge_id(e)).collect();
        ids.join(" ")
    }
}

/// `A[i][j] = #{e : s(e) = vᵢ, r(e) = vⱼ}` over the graph's vertex order.
pub fn adjacency_matrix(g: &DirectedGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut counts = vec![0u64; n * n];
    for e in g.edges() {
        counts[e.source * n + e.range] += 1;
    }
    IntMatrix::from_fn(n, n, |i, j| BigInt::from(counts[i * n + j]))
}

/// All paths of length `n`, lexicographic in edge order. `n = 0` yields none.
pub fn paths(g: &DirectedGraph, n: usize) -> Vec<Path> {
    if n == 0 {
        return vec![];
    }
    // edges grouped by range so the extension step is a lookup
    let mut by_range: Vec<Vec<usize>> = vec![vec![]; g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        by_range[e.range].push(i);
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    fn extend(
        g: &DirectedGraph,
        by_range: &[Vec<usize>],
        n: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Path>,
    ) {
        if stack.len() == n {
            out.push(Path { edges: stack.clone() });
            return;
        }
        let candidates: &[usize] = match stack.last() {
            None => return,
            Some(&last) => &by_range[g.source(last)],
        };
        for &e in candidates {
            stack.push(e);
            extend(g, by_range, n, stack, out);
            stack.pop();
        }
    }
    for e in 0..g.edge_count() {
        stack.push(e);
        extend(g, &by_range, n, &mut stack, &mut out);
        stack.pop();
    }
    out
}

/// Separator used when naming power-graph edges after their paths.
pub const PATH_SEPARATOR: char = '.';

/// `(E⁰, Eⁿ, r, s)` with `r(e₁…eₙ) = r(e₁)` and `s(e₁…eₙ) = s(eₙ)`.
pub fn power_graph(g: &DirectedGraph, n: usize) -> Result<DirectedGraph> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    if n == 1 {
        return Ok(g.clone());
    }
    let edges = paths(g, n)
        .into_iter()
        .map(|p| {
            let ids: Vec<&str> = p.edges.iter().map(|&e| g.edge_id(e)).collect();
            (ids.join(&PATH_SEPARATOR.to_string()), p.source(g), p.range(g))
        })
        .collect();
    DirectedGraph::from_indexed(format!("{}^{n}", g.name()), g.vertices().to_vec(), edges)
}

/// Vertices `E¹`, edges the composable pairs `(e′, e)` with `r̂ = e′`, `ŝ = e`.
pub fn dual_graph(g: &DirectedGraph) -> DirectedGraph {
    let edges = paths(g, 2)
        .into_iter()
        .map(|p| {
            let (first, second) = (p.edges[0], p.edges[1]);
            (format!("({},{})", g.edge_id(first), g.edge_id(second)), second, first)
        })
        .collect();
    let vertices = g.edges().iter().map(|e| e.id.clone()).collect();
    DirectedGraph::from_indexed(format!("{}^", g.name()), vertices, edges)
        .expect("edge ids are valid vertex ids")
}

/// `E⁰ \ r(E¹)`: vertices that receive no edge.
pub fn singular_vertices(g: &DirectedGraph) -> Vec<usize> {
    let mut receives = vec![false; g.vertex_count()];
    for e in g.edges() {
        receives[e.range] = true;
    }
    (0..g.vertex_count()).filter(|&v| !receives[v]).collect()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn adjacency_of_g_a() {
        assert_eq!(adjacency_matrix(&g_a()), IntMatrix::from_i64(&[&[1, 1], &[2, 0]]));
    }

    #[test]
    fn adjacency_of_isolated_vertex() {
        let g = DirectedGraph::new::<&str>("pt", &["x"], &[]).unwrap();
        assert_eq!(adjacency_matrix(&g), IntMatrix::from_i64(&[&[0]]));
    }

    #[test]
    fn powers_of_g_a() {
        let g = g_a();
        assert_eq!(power_graph(&g, 1).unwrap(), g);
        let p2 = power_graph(&g, 2).unwrap();
        assert_eq!(adjacency_matrix(&p2), IntMatrix::from_i64(&[&[3, 1], &[2, 2]]));
        assert!(matches!(power_graph(&g, 0), Err(Error::ZeroPower)));
        let l = single_loop();
        let l3 = power_graph(&l, 3).unwrap();
        assert_eq!(l3.edge_count(), 1);
        assert_eq!(l3.edge_id(0), "l.l.l");
    }

    #[test]
    fn path_counts() {
        let g = g_a();
        assert_eq!(paths(&g, 1).len(), 4);
        assert_eq!(paths(&g, 2).len(), 8);
        let edgeless = DirectedGraph::new::<&str>("pts", &["x", "y"], &[]).unwrap();
        assert!(paths(&edgeless, 1).is_empty());
    }

    #[test]
    fn paths_are_lexicographic() {
        let g = g_a();
        let labels: Vec<String> = paths(&g, 2).iter().map(|p| p.label(&g)).collect();
        assert_eq!(labels, ["e e", "e g", "e h", "f e", "f g", "f h", "g f", "h f"]);
    }

    #[test]
    fn dual_graph_sizes() {
        let d = dual_graph(&g_a());
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.edge_count(), 8);
        let l = single_loop();
        let dl = dual_graph(&l);
        assert_eq!((dl.vertex_count(), dl.edge_count()), (1, 1));
        let chain = DirectedGraph::new("chain", &["a", "b", "c"], &[("x", "a", "b"), ("y", "a", "c")])
            .unwrap();
        assert_eq!(dual_graph(&chain).edge_count(), 0);
        assert_eq!(dual_graph(&d).vertex_count(), 8);
    }

    #[test]
    fn dual_adjacency_row_sums_are_out_degrees() {
        // row e of the dual counts the edges e′ with s(e′) = r(e)
        let g = g_a();
        let a = adjacency_matrix(&dual_graph(&g));
        for e in 0..g.edge_count() {
            let row: BigInt = a.row(e).iter().sum();
            assert_eq!(row, BigInt::from(g.out_edges(g.range(e)).len()));
        }
    }

    #[test]
    fn singular_vertex_sets() {
        assert!(singular_vertices(&g_a()).is_empty());
        let g = DirectedGraph::new("wv", &["w", "v"], &[("x", "w", "v")]).unwrap();
        assert_eq!(singular_vertices(&g), vec![0]);
        assert!(singular_vertices(&single_loop()).is_empty());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            DirectedGraph::new("bad", &["a", "a"], &[]),
            Err(Error::DuplicateId { kind: "vertex", .. })
        ));
        assert!(matches!(
            DirectedGraph::new("bad", &["a"], &[("x", "a", "b")]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            DirectedGraph::new("bad", &["a"], &[("x", "a", "a"), ("x", "a", "a")]),
            Err(Error::DuplicateId { kind: "edge", .. })
        ));
        assert!(matches!(DirectedGraph::new::<&str>("bad", &["a b"], &[]), Err(Error::InvalidId(_))));
    }

    #[test]
    fn path_composability() {
        let g = g_a();
        let e = g.edge("e").unwrap();
        let f = g.edge("f").unwrap();
        let gg = g.edge("g").unwrap();
        assert!(Path::new(&g, vec![e, gg]).is_ok());
        assert!(matches!(Path::new(&g, vec![e, f]), Err(Error::NotComposable { position: 0 })));
        assert!(matches!(Path::new(&g, vec![]), Err(Error::EmptyPath)));
    }
}
