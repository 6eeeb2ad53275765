//! Isomorphism of small directed multigraphs by vertex backtracking.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Default bound on `|E⁰| + |E¹|` accepted by [`are_isomorphic`].
pub const DEFAULT_SIZE_LIMIT: usize = 256;

/// A pair of bijections `μ: E⁰ → F⁰`, `ν: E¹ → F¹` with `μ∘s_E = s_F∘ν` and
/// `μ∘r_E = r_F∘ν`. Both maps are stored as index vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphIsomorphism {
    /// Check both bijections and both intertwining conditions edge by edge.
    pub fn verify(&self, g: &DirectedGraph, h: &DirectedGraph) -> bool {
        is_bijection(&self.vertex_map, h.vertex_count())
            && self.vertex_map.len() == g.vertex_count()
            && is_bijection(&self.edge_map, h.edge_count())
            && self.edge_map.len() == g.edge_count()
            && (0..g.edge_count()).all(|e| {
                let f = self.edge_map[e];
                self.vertex_map[g.source(e)] == h.source(f) && self.vertex_map[g.range(e)] == h.range(f)
            })
    }

    pub fn inverse(&self) -> GraphIsomorphism {
        GraphIsomorphism {
            vertex_map: invert(&self.vertex_map),
            edge_map: invert(&self.edge_map),
        }
    }
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n
        && map.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut out = vec![0; map.len()];
    for (i, &x) in map.iter().enumerate() {
        out[x] = i;
    }
    out
}

struct Profile {
    /// `mult[u][v]` = number of edges from `u` to `v`.
    mult: Vec<Vec<usize>>,
    /// Per-vertex label that any isomorphism must preserve.
    signature: Vec<Vec<usize>>,
}

fn profile(g: &DirectedGraph) -> Profile {
    let n = g.vertex_count();
    let mut mult = vec![vec![0usize; n]; n];
    for e in g.edges() {
        mult[e.source][e.range] += 1;
    }
    let out_deg: Vec<usize> = (0..n).map(|u| mult[u].iter().sum()).collect();
    let in_deg: Vec<usize> = (0..n).map(|v| (0..n).map(|u| mult[u][v]).sum()).collect();
    let signature = (0..n)
        .map(|u| {
            let mut succ: Vec<usize> = (0..n)
                .flat_map(|v| std::iter::repeat_n(out_deg[v] * (n + 1) + in_deg[v], mult[u][v]))
                .collect();
            succ.sort_unstable();
            let mut sig = vec![out_deg[u], in_deg[u], mult[u][u]];
            sig.extend(succ);
            sig
        })
        .collect();
    Profile { mult, signature }
}

/// Search for an isomorphism with the default size guard.
pub fn are_isomorphic(g: &DirectedGraph, h: &DirectedGraph) -> Result<Option<GraphIsomorphism>> {
    are_isomorphic_with_limit(g, h, DEFAULT_SIZE_LIMIT)
}

/// Search for an isomorphism. Graphs with `|E⁰| + |E¹| > limit` are refused
/// with [`Error::TooLarge`] rather than searched.
pub fn are_isomorphic_with_limit(
    g: &DirectedGraph,
    h: &DirectedGraph,
    limit: usize,
) -> Result<Option<GraphIsomorphism>> {
    for x in [g, h] {
        let size = x.vertex_count() + x.edge_count();
        if size > limit {
            return Err(Error::TooLarge { size, limit });
        }
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (pg, ph) = (profile(g), profile(h));
    let mut gs = pg.signature.clone();
    let mut hs = ph.signature.clone();
    gs.sort();
    hs.sort();
    if gs != hs {
        return Ok(None);
    }

    let n = g.vertex_count();
    // assign the most constrained vertices first
    let mut order: Vec<usize> = (0..n).collect();
    let class_size = |u: usize| pg.signature.iter().filter(|s| **s == pg.signature[u]).count();
    order.sort_by_key(|&u| (class_size(u), u));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !assign(0, &order, &pg, &ph, &mut map, &mut used) {
        return Ok(None);
    }

    // edges between each ordered vertex pair are matched in edge order
    let mut buckets: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (f, e) in h.edges().iter().enumerate().rev() {
        buckets.entry((e.source, e.range)).or_default().push(f);
    }
    let edge_map = g
        .edges()
        .iter()
        .map(|e| {
            buckets
                .get_mut(&(map[e.source], map[e.range]))
                .and_then(Vec::pop)
                .ok_or_else(|| Error::Internal("edge multiplicities disagree after vertex match".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = GraphIsomorphism {
        vertex_map: map,
        edge_map,
    };
    if !iso.verify(g, h) {
        return Err(Error::Internal("constructed isomorphism fails verification".into()));
    }
    Ok(Some(iso))
}

fn assign(
    depth: usize,
    order: &[usize],
    pg: &Profile,
    ph: &Profile,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for v in 0..used.len() {
        if used[v] || pg.signature[u] != ph.signature[v] {
            continue;
        }
        // multiplicities towards and from every vertex mapped so far
        let consistent = order[..depth].iter().all(|&x| {
            let y = map[x];
            pg.mult[u][x] == ph.mult[v][y] && pg.mult[x][u] == ph.mult[y][v]
        }) && pg.mult[u][u] == ph.mult[v][v];
        if !consistent {
            continue;
        }
        map[u] = v;
        used[v] = true;
        if assign(depth + 1, order, pg, ph, map, used) {
            return true;
        }
        used[v] = false;
        map[u] = usize::MAX;
    }
    false
}
