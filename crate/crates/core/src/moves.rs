//! In-splits and out-splits.
//!
//! The general form of an in-split of `E` is a triple `(α, E⁰_I, ψ)` with
//! `r = α∘ψ`; the split graph has edges `E¹ ×_{s,α} E⁰_I`. Out-splits factor
//! the source map instead and take edges `E⁰_O ×_{α,r} E¹`. The classical
//! single-vertex partition moves compile to these triples.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{check_id, paths, singular_vertices, DirectedGraph};

/// `(α, E⁰_I, ψ)` with `α: E⁰_I → E⁰` and `ψ: E¹ → E⁰_I`, all by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InSplitSpec {
    pub new_vertices: Vec<String>,
    pub alpha: Vec<usize>,
    pub psi: Vec<usize>,
}

/// `(α, E⁰_O, ψ)` with `α: E⁰_O → E⁰` and `ψ: E¹ → E⁰_O`, so `s = α∘ψ`.
///
/// `allow_empty` relaxes surjectivity of `ψ`, which is what a partition with
/// empty classes produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutSplitSpec {
    pub new_vertices: Vec<String>,
    pub alpha: Vec<usize>,
    pub psi: Vec<usize>,
    pub allow_empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Lengths or indices do not fit the graph.
    Shape(String),
    /// A new vertex id is invalid or repeated.
    VertexId(String),
    /// No new vertex lies over this original vertex.
    AlphaNotSurjective { vertex: String },
    /// `α(ψ(e))` differs from `r(e)` (in-split) or `s(e)` (out-split).
    AlphaPsi {
        edge: String,
        expected: String,
        got: String,
    },
    /// A new vertex outside `ψ(E¹)` lies over a vertex that receives edges.
    UnreachedOverRegular { new_vertex: String, vertex: String },
    /// A source of `E` has more than one preimage outside `ψ(E¹)`.
    SingularNotInjective { vertex: String, count: usize },
    /// Out-split `ψ` misses a new vertex.
    PsiNotSurjective { new_vertex: String },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Shape(_) => "shape",
            Violation::VertexId(_) => "vertex-id",
            Violation::AlphaNotSurjective { .. } => "alpha-surjective",
            Violation::AlphaPsi { .. } => "alpha-psi",
            Violation::UnreachedOverRegular { .. } | Violation::SingularNotInjective { .. } => {
                "singular-bijection"
            }
            Violation::PsiNotSurjective { .. } => "psi-surjective",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Violation::Shape(m) => write!(f, "{m}"),
            Violation::VertexId(m) => write!(f, "{m}"),
            Violation::AlphaNotSurjective { vertex } => write!(f, "no new vertex over `{vertex}`"),
            Violation::AlphaPsi { edge, expected, got } => {
                write!(f, "edge `{edge}` maps to `{got}`, expected `{expected}`")
            }
            Violation::UnreachedOverRegular { new_vertex, vertex } => write!(
                f,
                "`{new_vertex}` is not in the image of psi but `{vertex}` receives edges"
            ),
            Violation::SingularNotInjective { vertex, count } => {
                write!(f, "source `{vertex}` has {count} preimages outside the image of psi")
            }
            Violation::PsiNotSurjective { new_vertex } => {
                write!(f, "`{new_vertex}` is not in the image of psi")
            }
        }
    }
}

/// Every violated condition of a split spec. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks shared by both split kinds; returns false if later checks would
/// index out of bounds.
fn check_shape(
    g: &DirectedGraph,
    new_vertices: &[String],
    alpha: &[usize],
    psi: &[usize],
    out: &mut Vec<Violation>,
) -> bool {
    let mut seen = HashSet::new();
    for v in new_vertices {
        if check_id(v).is_err() {
            out.push(Violation::VertexId(format!("invalid id `{v}`")));
        } else if !seen.insert(v) {
            out.push(Violation::VertexId(format!("duplicate id `{v}`")));
        }
    }
    let before = out.len();
    if alpha.len() != new_vertices.len() {
        out.push(Violation::Shape(format!(
            "alpha has {} entries for {} new vertices",
            alpha.len(),
            new_vertices.len()
        )));
    }
    if psi.len() != g.edge_count() {
        out.push(Violation::Shape(format!(
            "psi has {} entries for {} edges",
            psi.len(),
            g.edge_count()
        )));
    }
    if let Some(&a) = alpha.iter().find(|&&a| a >= g.vertex_count()) {
        out.push(Violation::Shape(format!("alpha value #{a} is not a vertex")));
    }
    if let Some(&p) = psi.iter().find(|&&p| p >= new_vertices.len()) {
        out.push(Violation::Shape(format!("psi value #{p} is not a new vertex")));
    }
    if out.len() > before {
        return false;
    }
    let mut hit = vec![false; g.vertex_count()];
    for &a in alpha {
        hit[a] = true;
    }
    for (v, _) in hit.iter().enumerate().filter(|(_, &h)| !h) {
        out.push(Violation::AlphaNotSurjective {
            vertex: g.vertex_id(v).to_string(),
        });
    }
    true
}

pub fn validate_in_split(g: &DirectedGraph, spec: &InSplitSpec) -> ValidationReport {
    let mut violations = Vec::new();
    if !check_shape(g, &spec.new_vertices, &spec.alpha, &spec.psi, &mut violations) {
        return ValidationReport { violations };
    }
    for e in 0..g.edge_count() {
        let got = spec.alpha[spec.psi[e]];
        if got != g.range(e) {
            violations.push(Violation::AlphaPsi {
                edge: g.edge_id(e).to_string(),
                expected: g.vertex_id(g.range(e)).to_string(),
                got: g.vertex_id(got).to_string(),
            });
        }
    }
    let mut reached = vec![false; spec.new_vertices.len()];
    for &p in &spec.psi {
        reached[p] = true;
    }
    let singular = singular_vertices(g);
    let mut unreached_over = vec![0usize; g.vertex_count()];
    for (x, _) in reached.iter().enumerate().filter(|(_, &r)| !r) {
        let v = spec.alpha[x];
        unreached_over[v] += 1;
        if !singular.contains(&v) {
            violations.push(Violation::UnreachedOverRegular {
                new_vertex: spec.new_vertices[x].clone(),
                vertex: g.vertex_id(v).to_string(),
            });
        }
    }
    for &v in &singular {
        // surjectivity of α already covers the zero case
        if unreached_over[v] > 1 {
            violations.push(Violation::SingularNotInjective {
                vertex: g.vertex_id(v).to_string(),
                count: unreached_over[v],
            });
        }
    }
    ValidationReport { violations }
}

pub fn validate_out_split(g: &DirectedGraph, spec: &OutSplitSpec) -> ValidationReport {
    let mut violations = Vec::new();
    if !check_shape(g, &spec.new_vertices, &spec.alpha, &spec.psi, &mut violations) {
        return ValidationReport { violations };
    }
    for e in 0..g.edge_count() {
        let got = spec.alpha[spec.psi[e]];
        if got != g.source(e) {
            violations.push(Violation::AlphaPsi {
                edge: g.edge_id(e).to_string(),
                expected: g.vertex_id(g.source(e)).to_string(),
                got: g.vertex_id(got).to_string(),
            });
        }
    }
    if !spec.allow_empty {
        let mut reached = vec![false; spec.new_vertices.len()];
        for &p in &spec.psi {
            reached[p] = true;
        }
        for (x, _) in reached.iter().enumerate().filter(|(_, &r)| !r) {
            violations.push(Violation::PsiNotSurjective {
                new_vertex: spec.new_vertices[x].clone(),
            });
        }
    }
    ValidationReport { violations }
}

/// Resolve a partition of `edges` given by ids; `allow_empty` admits empty
/// classes. Returns the class index of every edge of the graph in `edges`.
fn resolve_partition<S: AsRef<str>>(
    g: &DirectedGraph,
    edges: &[usize],
    partition: &[Vec<S>],
    allow_empty: bool,
) -> Result<Vec<Option<usize>>> {
    if partition.is_empty() {
        return Err(Error::InvalidPartition("no classes given".into()));
    }
    let mut class = vec![None; g.edge_count()];
    for (j, block) in partition.iter().enumerate() {
        if block.is_empty() && !allow_empty {
            return Err(Error::InvalidPartition(format!("class {} is empty", j + 1)));
        }
        for id in block {
            let e = g.edge(id.as_ref())?;
            if !edges.contains(&e) {
                return Err(Error::InvalidPartition(format!(
                    "edge `{}` does not belong to the split vertex",
                    id.as_ref()
                )));
            }
            if class[e].replace(j).is_some() {
                return Err(Error::InvalidPartition(format!(
                    "edge `{}` appears twice",
                    id.as_ref()
                )));
            }
        }
    }
    if let Some(&e) = edges.iter().find(|&&e| class[e].is_none()) {
        return Err(Error::InvalidPartition(format!(
            "edge `{}` is not covered",
            g.edge_id(e)
        )));
    }
    Ok(class)
}

/// New vertices `v@1` for each `v ≠ w` and `w@1 … w@n`, in vertex order.
fn split_vertices(g: &DirectedGraph, w: usize, n: usize) -> (Vec<String>, Vec<usize>, Vec<usize>) {
    let mut names = Vec::new();
    let mut alpha = Vec::new();
    let mut first = Vec::new();
    for v in 0..g.vertex_count() {
        first.push(names.len());
        let copies = if v == w { n } else { 1 };
        for i in 1..=copies {
            names.push(format!("{}@{i}", g.vertex_id(v)));
            alpha.push(v);
        }
    }
    (names, alpha, first)
}

/// Classical in-split at `w`: the edges into `w` are partitioned and each
/// class gets its own copy of `w`.
pub fn in_split_from_partition<S: AsRef<str>>(
    g: &DirectedGraph,
    w: &str,
    partition: &[Vec<S>],
) -> Result<InSplitSpec> {
    let w = g.vertex(w)?;
    let incoming = g.in_edges(w);
    if incoming.is_empty() {
        return Err(Error::SourceVertex(g.vertex_id(w).to_string()));
    }
    let class = resolve_partition(g, &incoming, partition, false)?;
    let (new_vertices, alpha, first) = split_vertices(g, w, partition.len());
    let psi = (0..g.edge_count())
        .map(|e| first[g.range(e)] + class[e].unwrap_or(0))
        .collect();
    let spec = InSplitSpec {
        new_vertices,
        alpha,
        psi,
    };
    validate_in_split(g, &spec).into_result()?;
    Ok(spec)
}

/// `(Id, E⁰, r)`.
pub fn identity_in_split(g: &DirectedGraph) -> InSplitSpec {
    InSplitSpec {
        new_vertices: g.vertices().to_vec(),
        alpha: (0..g.vertex_count()).collect(),
        psi: g.edges().iter().map(|e| e.range).collect(),
    }
}

fn require_regular(g: &DirectedGraph) -> Result<()> {
    let singular = singular_vertices(g);
    if singular.is_empty() {
        Ok(())
    } else {
        Err(Error::NotRegular(
            singular.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
        ))
    }
}

/// `(r, E¹, Id)`; the split graph is the dual graph. Needs a graph without
/// sources.
pub fn complete_in_split(g: &DirectedGraph) -> Result<InSplitSpec> {
    require_regular(g)?;
    Ok(InSplitSpec {
        new_vertices: g.edges().iter().map(|e| e.id.clone()).collect(),
        alpha: g.edges().iter().map(|e| e.range).collect(),
        psi: (0..g.edge_count()).collect(),
    })
}

/// The graph `(E⁰_I, E¹ ×_{s,α} E⁰_I, r_I, s_I)` with `r_I(e,v) = ψ(e)`,
/// `s_I(e,v) = v`. Edges are ordered by `e`, then by `v`.
pub fn apply_in_split(g: &DirectedGraph, spec: &InSplitSpec) -> Result<DirectedGraph> {
    validate_in_split(g, spec).into_result()?;
    in_split_graph(g, spec)
}

/// The fibred product behind [`apply_in_split`], without validation.
pub(crate) fn in_split_graph(g: &DirectedGraph, spec: &InSplitSpec) -> Result<DirectedGraph> {
    let mut edges = Vec::new();
    for e in 0..g.edge_count() {
        for (v, &a) in spec.alpha.iter().enumerate() {
            if a == g.source(e) {
                edges.push((format!("({},{})", g.edge_id(e), spec.new_vertices[v]), v, spec.psi[e]));
            }
        }
    }
    DirectedGraph::from_indexed(format!("{}_I", g.name()), spec.new_vertices.clone(), edges)
}

/// For a regular graph, the in-split `(ψ, E¹, α₁)` of `E_I` with
/// `α₁(e,v) = e`. Splitting twice this way lands on the dual graph.
pub fn diamond_spec(g: &DirectedGraph, spec: &InSplitSpec) -> Result<InSplitSpec> {
    require_regular(g)?;
    validate_in_split(g, spec).into_result()?;
    // same enumeration as apply_in_split, recording the E¹ coordinate
    let psi = (0..g.edge_count())
        .flat_map(|e| {
            let count = spec.alpha.iter().filter(|&&a| a == g.source(e)).count();
            std::iter::repeat_n(e, count)
        })
        .collect();
    Ok(InSplitSpec {
        new_vertices: g.edges().iter().map(|e| e.id.clone()).collect(),
        alpha: spec.psi.clone(),
        psi,
    })
}

/// Path map `e₁…e_p ↦ (e₁,ψ(e₂))…(e_{p−1},ψ(e_p))` from `E^p` to `E_I^{p−1}`,
/// on edge-index sequences. `split` must be `apply_in_split(g, spec)`.
pub fn split_path(
    g: &DirectedGraph,
    spec: &InSplitSpec,
    split: &DirectedGraph,
    path: &[usize],
) -> Result<Vec<usize>> {
    path.windows(2)
        .map(|w| {
            let id = format!("({},{})", g.edge_id(w[0]), spec.new_vertices[spec.psi[w[1]]]);
            split.edge(&id)
        })
        .collect()
}

/// Combine in-splits `I₁, …, Iₙ` (each of the previous stage) into a single
/// in-split `(α₁∘…∘αₙ, E⁰_{Iₙ}, ψ)` of the power graph `E⁽ⁿ⁾`. The result is
/// indexed against `power_graph(g, n)`.
pub fn compose_in_splits(g: &DirectedGraph, specs: &[InSplitSpec]) -> Result<(usize, InSplitSpec)> {
    if specs.is_empty() {
        return Err(Error::StageMismatch {
            stage: 0,
            message: "no in-splits given".into(),
        });
    }
    require_regular(g)?;
    let mut stages = vec![g.clone()];
    for (k, spec) in specs.iter().enumerate() {
        let prev = &stages[k];
        let report = validate_in_split(prev, spec);
        if !report.is_valid() {
            return Err(Error::StageMismatch {
                stage: k + 1,
                message: report.to_string().trim_end().replace('\n', "; "),
            });
        }
        let next = apply_in_split(prev, spec)?;
        stages.push(next);
    }
    let n = specs.len();
    let last = specs.last().expect("non-empty");
    let alpha = (0..last.new_vertices.len())
        .map(|x| specs.iter().rev().fold(x, |acc, s| s.alpha[acc]))
        .collect();
    // paths(g, n) enumerates the edges of power_graph(g, n) in order
    let psi = paths(g, n)
        .into_iter()
        .map(|p| {
            let mut current = p.edges().to_vec();
            for k in 0..n - 1 {
                current = split_path(&stages[k], &specs[k], &stages[k + 1], &current)?;
            }
            Ok(specs[n - 1].psi[current[0]])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        n,
        InSplitSpec {
            new_vertices: last.new_vertices.clone(),
            alpha,
            psi,
        },
    ))
}

/// Classical out-split at `w`: the edges leaving `w` are partitioned and each
/// class gets its own copy of `w`.
pub fn out_split_from_partition<S: AsRef<str>>(
    g: &DirectedGraph,
    w: &str,
    partition: &[Vec<S>],
    allow_empty: bool,
) -> Result<OutSplitSpec> {
    let w = g.vertex(w)?;
    let outgoing = g.out_edges(w);
    if outgoing.is_empty() {
        return Err(Error::NoOutgoingEdges(g.vertex_id(w).to_string()));
    }
    let class = resolve_partition(g, &outgoing, partition, allow_empty)?;
    let (new_vertices, alpha, first) = split_vertices(g, w, partition.len());
    let psi = (0..g.edge_count())
        .map(|e| first[g.source(e)] + class[e].unwrap_or(0))
        .collect();
    let spec = OutSplitSpec {
        new_vertices,
        alpha,
        psi,
        allow_empty,
    };
    validate_out_split(g, &spec).into_result()?;
    Ok(spec)
}

/// `(Id, E⁰, s)`.
pub fn identity_out_split(g: &DirectedGraph) -> OutSplitSpec {
    OutSplitSpec {
        new_vertices: g.vertices().to_vec(),
        alpha: (0..g.vertex_count()).collect(),
        psi: g.edges().iter().map(|e| e.source).collect(),
        allow_empty: false,
    }
}

/// `(s, E¹, Id)`; needs every vertex to emit an edge.
pub fn complete_out_split(g: &DirectedGraph) -> Result<OutSplitSpec> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.out_edges(v).is_empty()) {
        return Err(Error::NoOutgoingEdges(g.vertex_id(v).to_string()));
    }
    Ok(OutSplitSpec {
        new_vertices: g.edges().iter().map(|e| e.id.clone()).collect(),
        alpha: g.edges().iter().map(|e| e.source).collect(),
        psi: (0..g.edge_count()).collect(),
        allow_empty: false,
    })
}

/// The graph `(E⁰_O, E⁰_O ×_{α,r} E¹, r_O, s_O)` with `r_O(v,e) = v`,
/// `s_O(v,e) = ψ(e)`. Edges are ordered by `e`, then by `v`.
pub fn apply_out_split(g: &DirectedGraph, spec: &OutSplitSpec) -> Result<DirectedGraph> {
    validate_out_split(g, spec).into_result()?;
    let mut edges = Vec::new();
    for e in 0..g.edge_count() {
        for (v, &a) in spec.alpha.iter().enumerate() {
            if a == g.range(e) {
                edges.push((format!("({},{})", spec.new_vertices[v], g.edge_id(e)), spec.psi[e], v));
            }
        }
    }
    DirectedGraph::from_indexed(format!("{}_O", g.name()), spec.new_vertices.clone(), edges)
}
