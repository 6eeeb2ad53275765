//! Finite-window certificates for the conjugacy of edge shifts induced by
//! splits.
//!
//! An in-split induces the 2-block code `x_k x_{k+1} ↦ (x_k, ψ(x_{k+1}))` with
//! 1-block inverse `(e, v) ↦ e`. Out-splits are handled by reversing every
//! edge, which turns them into in-splits, and translating back.
//!
//! [`verify_certificate`] only inspects paths up to a fixed window, so a
//! passing report is a statement about that window and nothing more.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{paths, DirectedGraph};
use crate::moves::{apply_in_split, apply_out_split, in_split_graph, InSplitSpec, OutSplitSpec};
use crate::sse::{bowen_franks, trace_sequence, weighted_char_poly};
use crate::IntMatrix;

/// A sliding block code from the edge shift of `source` to that of
/// `target`, with a 1-block inverse.
#[derive(Clone, Debug)]
pub struct BlockCodeCertificate {
    pub source: DirectedGraph,
    pub target: DirectedGraph,
    pub memory: usize,
    pub anticipation: usize,
    /// Source paths of length `memory + anticipation + 1` to target edges.
    pub block_map: HashMap<Vec<usize>, usize>,
    /// Target edge to source edge.
    pub inverse: Vec<usize>,
}

impl BlockCodeCertificate {
    pub fn window(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    /// Slide the block map along a source path; `None` if a window is
    /// missing from the map.
    pub fn image(&self, path: &[usize]) -> Option<Vec<usize>> {
        path.windows(self.window())
            .map(|w| self.block_map.get(w).copied())
            .collect()
    }
}

pub fn in_split_block_code(g: &DirectedGraph, spec: &InSplitSpec) -> Result<BlockCodeCertificate> {
    let target = apply_in_split(g, spec)?;
    let mut block_map = HashMap::new();
    for p in paths(g, 2) {
        let (e1, e2) = (p.edges()[0], p.edges()[1]);
        let id = format!("({},{})", g.edge_id(e1), spec.new_vertices[spec.psi[e2]]);
        block_map.insert(p.edges().to_vec(), target.edge(&id)?);
    }
    let mut inverse = Vec::with_capacity(target.edge_count());
    for e in 0..g.edge_count() {
        for &a in &spec.alpha {
            if a == g.source(e) {
                inverse.push(e);
            }
        }
    }
    Ok(BlockCodeCertificate {
        source: g.clone(),
        target,
        memory: 0,
        anticipation: 1,
        block_map,
        inverse,
    })
}

/// Out-split code `x_{k−1} x_k ↦ (ψ(x_{k−1}), x_k)`, obtained from the in-split
/// code of the reversed graph. The reversed construction is checked against
/// [`apply_out_split`] edge by edge.
pub fn out_split_block_code(g: &DirectedGraph, spec: &OutSplitSpec) -> Result<BlockCodeCertificate> {
    let direct = apply_out_split(g, spec)?;
    let reversed = g.reversed();
    let as_in = InSplitSpec {
        new_vertices: spec.new_vertices.clone(),
        alpha: spec.alpha.clone(),
        psi: spec.psi.clone(),
    };
    // the out-split was validated above; empty classes would trip the
    // in-split validator, so build the fibred product directly
    let reversed_split = in_split_graph(&reversed, &as_in)?;
    let back = reversed_split.reversed();
    if back.edge_count() != direct.edge_count() {
        return Err(Error::Internal("reversed out-split has the wrong edge count".into()));
    }
    // (e,v) in the reversed split is (v,e) in the direct one
    let mut translate = Vec::with_capacity(back.edge_count());
    for f in 0..back.edge_count() {
        let id = back.edge_id(f);
        let inner = &id[1..id.len() - 1];
        let v = &spec.new_vertices[back.range(f)];
        let e = &inner[..inner.len() - v.len() - 1];
        let d = direct.edge(&format!("({v},{e})"))?;
        if direct.source(d) != back.source(f) || direct.range(d) != back.range(f) {
            return Err(Error::Internal(format!("reversed out-split disagrees at `{id}`")));
        }
        translate.push(d);
    }
    let mut block_map = HashMap::new();
    for p in paths(g, 2) {
        let (a, b) = (p.edges()[0], p.edges()[1]);
        let id = format!("({},{})", g.edge_id(b), spec.new_vertices[spec.psi[a]]);
        block_map.insert(p.edges().to_vec(), translate[back.edge(&id)?]);
    }
    let mut inverse = vec![0; direct.edge_count()];
    for f in 0..direct.edge_count() {
        let id = direct.edge_id(f);
        let v = &spec.new_vertices[direct.range(f)];
        inverse[f] = g.edge(&id[v.len() + 2..id.len() - 1])?;
    }
    Ok(BlockCodeCertificate {
        source: g.clone(),
        target: direct,
        memory: 1,
        anticipation: 0,
        block_map,
        inverse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub window: usize,
    pub source_paths: usize,
    pub target_paths: usize,
    pub image_size: usize,
    pub checks: Vec<CheckLine>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "window {}: {} source paths, {} target paths, {} images",
            self.window, self.source_paths, self.target_paths, self.image_size
        )?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  {status} {}", c.name)?;
            } else {
                writeln!(f, "  {status} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

fn label(g: &DirectedGraph, path: &[usize]) -> String {
    let ids: Vec<&str> = path.iter().map(|&e| g.edge_id(e)).collect();
    ids.join(" ")
}

/// Check the certificate on every source path of length `L + window − 1`:
///
/// * images are target paths of length `L`;
/// * every target path of length `L` is an image;
/// * equal images come from paths that agree on the coded coordinates;
/// * dropping the first edge commutes with the code;
/// * the 1-block inverse recovers the coded coordinates.
pub fn verify_certificate(cert: &BlockCodeCertificate, l: usize) -> Result<CertificateReport> {
    if l < 2 {
        return Err(Error::WindowTooSmall { min: 2, got: l });
    }
    let (src, tgt) = (&cert.source, &cert.target);
    let span = l + cert.window() - 1;
    let source_paths = paths(src, span);
    let target_paths: HashSet<Vec<usize>> = paths(tgt, l).into_iter().map(|p| p.edges().to_vec()).collect();
    let coded = |p: &[usize]| p[cert.memory..cert.memory + l].to_vec();

    let mut invalid = None;
    let mut undefined = None;
    let mut preimage: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut collision = None;
    let mut shift = None;
    let mut inverse = None;
    for p in &source_paths {
        let p = p.edges();
        let Some(img) = cert.image(p) else {
            undefined.get_or_insert_with(|| label(src, p));
            continue;
        };
        if !target_paths.contains(&img) {
            invalid.get_or_insert_with(|| label(src, p));
        }
        if let Some(other) = preimage.get(&img) {
            if coded(other) != coded(p) {
                collision.get_or_insert_with(|| format!("{} and {}", label(src, other), label(src, p)));
            }
        } else {
            preimage.insert(img.clone(), p.to_vec());
        }
        if cert.image(&p[1..]).as_deref() != Some(&img[1..]) {
            shift.get_or_insert_with(|| label(src, p));
        }
        let back: Option<Vec<usize>> = img.iter().map(|&f| cert.inverse.get(f).copied()).collect();
        if back.as_deref() != Some(&coded(p)[..]) {
            inverse.get_or_insert_with(|| label(src, p));
        }
    }
    let missing = target_paths
        .iter()
        .filter(|t| !preimage.contains_key(*t))
        .map(|t| label(tgt, t))
        .min();
    let line = |name, failure: Option<String>| CheckLine {
        name,
        passed: failure.is_none(),
        detail: failure.map(|p| format!("at {p}")).unwrap_or_default(),
    };
    let mut checks = vec![line("block map defined", undefined), line("images are paths", invalid)];
    checks.push(CheckLine {
        name: "surjective",
        passed: missing.is_none() && preimage.len() == target_paths.len(),
        detail: missing.map(|t| format!("{t} has no preimage")).unwrap_or_default(),
    });
    checks.push(line("injective on coded coordinates", collision));
    checks.push(line("commutes with shift", shift));
    checks.push(line("inverse recovers path", inverse));
    Ok(CertificateReport {
        window: l,
        source_paths: source_paths.len(),
        target_paths: target_paths.len(),
        image_size: preimage.len(),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub lines: Vec<String>,
    pub agree: bool,
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Trace sequences up to `n`, `det(I − uA)` and Bowen–Franks data of `A`
/// and `B`, side by side.
pub fn invariant_report(a: &IntMatrix, b: &IntMatrix, n: usize) -> Result<InvariantReport> {
    let fmt_seq = |v: &[crate::Int]| {
        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
        format!("[{}]", s.join(", "))
    };
    let mut lines = Vec::new();
    let mut agree = true;
    let mut push = |name: &str, x: String, y: String| {
        if x == y {
            lines.push(format!("{name}: agree {x}"));
        } else {
            agree = false;
            lines.push(format!("{name}: MISMATCH A={x} B={y}"));
        }
    };
    push(
        "trace sequence",
        fmt_seq(&trace_sequence(a, n)?),
        fmt_seq(&trace_sequence(b, n)?),
    );
    push(
        "det(I - uA)",
        weighted_char_poly(a)?.to_string(),
        weighted_char_poly(b)?.to_string(),
    );
    let (bfa, bfb) = (bowen_franks(a)?, bowen_franks(b)?);
    let bf_text = |bf: &crate::sse::BowenFranks| {
        let nt: Vec<String> = bf.nontrivial().iter().map(ToString::to_string).collect();
        let sign = match bf.det_sign {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        format!("cokernel factors ({}) free rank {} det sign {sign}", nt.join(","), bf.free_rank)
    };
    push("Bowen-Franks", bf_text(&bfa), bf_text(&bfb));
    Ok(InvariantReport { lines, agree })
}
