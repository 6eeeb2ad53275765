//! Test corpus and independent oracles shared by the integration tests.
#![allow(dead_code)]

use statesplit::{
    complete_in_split, complete_out_split, identity_in_split, identity_out_split, in_split_from_partition,
    out_split_from_partition, parse_graph, DirectedGraph, InSplitSpec, IntMatrix, OutSplitSpec,
};

/// Essential graphs (every vertex emits and receives an edge) with at most
/// eight vertices.
pub const CORPUS: &[&str] = &[
    "graph G_A\nvertex w\nvertex v\nedge e w w\nedge f w v\nedge g v w\nedge h v w\n",
    "graph loop\nvertex v\nedge e v v\n",
    "graph full2\nvertex v\nedge a v v\nedge b v v\n",
    "graph golden\nvertex a\nvertex b\nedge x a a\nedge y a b\nedge z b a\n",
    "graph cycle3\nvertex p\nvertex q\nvertex r\nedge pq p q\nedge qr q r\nedge rp r p\n",
    "graph chord3\nvertex p\nvertex q\nvertex r\nedge pq p q\nedge qr q r\nedge rp r p\nedge pr p r\nedge qq q q\n",
    "graph double\nvertex a\nvertex b\nedge ab1 a b\nedge ab2 a b\nedge ba1 b a\nedge ba2 b a\n",
    "graph k3\nvertex a\nvertex b\nvertex c\nedge aa a a\nedge ab a b\nedge ac a c\nedge ba b a\nedge bb b b\nedge bc b c\nedge ca c a\nedge cb c b\nedge cc c c\n",
    "graph square\nvertex a\nvertex b\nvertex c\nvertex d\nedge ab a b\nedge bc b c\nedge cd c d\nedge da d a\nedge da2 d a\nedge bb b b\n",
    "graph pentagon\nvertex v0\nvertex v1\nvertex v2\nvertex v3\nvertex v4\nedge e0 v0 v1\nedge e1 v1 v2\nedge e2 v2 v3\nedge e3 v3 v4\nedge e4 v4 v0\nedge l2 v2 v2\nedge c31 v3 v1\n",
    "graph triangles\nvertex a\nvertex b\nvertex c\nvertex x\nvertex y\nvertex z\nedge ab a b\nedge bc b c\nedge ca c a\nedge xy x y\nedge yz y z\nedge zx z x\nedge ax a x\nedge xa x a\n",
    "graph octagon\nvertex o0\nvertex o1\nvertex o2\nvertex o3\nvertex o4\nvertex o5\nvertex o6\nvertex o7\nedge s0 o0 o1\nedge s1 o1 o2\nedge s2 o2 o3\nedge s3 o3 o4\nedge s4 o4 o5\nedge s5 o5 o6\nedge s6 o6 o7\nedge s7 o7 o0\nedge c04 o0 o4\nedge c62 o6 o2\nedge l5 o5 o5\n",
];

pub fn corpus() -> Vec<DirectedGraph> {
    CORPUS.iter().map(|t| parse_graph(t).expect("corpus graph parses")).collect()
}

/// Identity, complete, one two-class partition at every vertex with at
/// least two incoming edges, and all of those at once.
pub fn in_splits(g: &DirectedGraph) -> Vec<InSplitSpec> {
    let mut specs = vec![identity_in_split(g), complete_in_split(g).expect("corpus graphs are regular")];
    let mut multi = InSplitSpec { new_vertices: vec![], alpha: vec![], psi: vec![0; g.edge_count()] };
    for v in 0..g.vertex_count() {
        let incoming = g.in_edges(v);
        let id = g.vertex_id(v);
        if incoming.len() >= 2 {
            let first = vec![g.edge_id(incoming[0]).to_string()];
            let rest: Vec<String> = incoming[1..].iter().map(|&e| g.edge_id(e).to_string()).collect();
            specs.push(in_split_from_partition(g, id, &[first, rest]).expect("valid partition"));
        }
        let base = multi.new_vertices.len();
        let copies = if incoming.len() >= 2 { 2 } else { 1 };
        for i in 1..=copies {
            multi.new_vertices.push(format!("{id}@{i}"));
            multi.alpha.push(v);
        }
        for (k, &e) in incoming.iter().enumerate() {
            multi.psi[e] = base + usize::from(k > 0 && copies == 2);
        }
    }
    if multi.new_vertices.len() > g.vertex_count() + 1 {
        specs.push(multi);
    }
    specs
}

/// The out-split analogue of [`in_splits`].
pub fn out_splits(g: &DirectedGraph) -> Vec<OutSplitSpec> {
    let mut specs = vec![identity_out_split(g), complete_out_split(g).expect("corpus graphs are regular")];
    for v in 0..g.vertex_count() {
        let outgoing = g.out_edges(v);
        if outgoing.len() >= 2 {
            let first = vec![g.edge_id(outgoing[0]).to_string()];
            let rest: Vec<String> = outgoing[1..].iter().map(|&e| g.edge_id(e).to_string()).collect();
            specs.push(out_split_from_partition(g, g.vertex_id(v), &[first, rest], false).expect("valid partition"));
        }
    }
    specs
}

/// Number of paths of length `n`, as the entry sum of `Aⁿ`.
pub fn path_count(a: &IntMatrix, n: u32) -> usize {
    let sum = a.pow(n).expect("square").sum();
    usize::try_from(sum).expect("small count")
}

/// Components of `{k₁θ₁ = k₂θ₂ + c}` counted as cycles of the monodromy:
/// over a point `θ₂` the fibre is `θ₁ = (k₂θ₂ + c + j)/k₁` for
/// `j ∈ ℤ/|k₁|`, and one turn of `θ₂` sends `j` to `j + k₂`.
pub fn monodromy_cycles(k1: i64, k2: i64) -> usize {
    let n = k1.unsigned_abs() as usize;
    let step = k2.rem_euclid(n as i64) as usize;
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = (j + step) % n;
        }
    }
    cycles
}

/// `det(I − uA)` at an integer `u`, by direct determinant.
pub fn char_poly_at(a: &IntMatrix, u: i64) -> statesplit::Int {
    let n = a.rows();
    let m = IntMatrix::from_fn(n, n, |i, j| {
        let id = statesplit::Int::from(i64::from(i == j));
        id - statesplit::Int::from(u) * a.get(i, j)
    });
    m.determinant().expect("square")
}

/// Evaluate a polynomial given by ascending coefficients.
pub fn eval(coeffs: &[statesplit::Int], u: i64) -> statesplit::Int {
    coeffs.iter().rev().fold(statesplit::Int::from(0), |acc, c| acc * u + c)
}
