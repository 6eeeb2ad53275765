//! Finite-dimensional graph correspondences.
//!
//! Over a finite vertex set the coefficient algebra is the algebra of
//! rational functions on the vertices and a correspondence is free on a
//! finite basis. Each basis vector `δ_b` carries a left anchor `ρ(b)` and a
//! right anchor `σ(b)`:
//!
//! * `(a·x)(b) = a(ρ(b)) x(b)` and `(x·a)(b) = x(b) a(σ(b))`;
//! * `(x|y)(v) = Σ_{σ(b)=v} x(b) y(b)`.
//!
//! Coefficients are real, so conjugation is the identity. Every operator is
//! compact, which makes the covariance ideal the set of vertices on which the
//! left action is nonzero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::conjugacy::CheckLine;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::moves::{apply_in_split, apply_out_split, validate_in_split, validate_out_split, InSplitSpec, OutSplitSpec};
use crate::{RatMatrix, Rational};

/// A function on a vertex set or a module element, by index.
pub type Function = Vec<Rational>;

pub fn indicator(len: usize, i: usize) -> Function {
    let mut f = vec![Rational::zero(); len];
    f[i] = Rational::one();
    f
}

/// `α*(a) = a∘α`.
pub fn pull_back(alpha: &[usize], a: &[Rational]) -> Function {
    alpha.iter().map(|&v| a[v].clone()).collect()
}

/// `Λ(b)(v) = Σ_{α(u)=v} b(u)`.
pub fn expectation(alpha: &[usize], len: usize, b: &[Rational]) -> Function {
    let mut out = vec![Rational::zero(); len];
    for (u, &v) in alpha.iter().enumerate() {
        out[v] += &b[u];
    }
    out
}

fn product(a: &[Rational], b: &[Rational]) -> Function {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimCorrespondence {
    left: Vec<String>,
    right: Vec<String>,
    basis: Vec<String>,
    rho: Vec<usize>,
    sigma: Vec<usize>,
}

impl FinDimCorrespondence {
    /// A correspondence from functions on `left` to functions on `right`.
    pub fn new(
        left: Vec<String>,
        right: Vec<String>,
        basis: Vec<String>,
        rho: Vec<usize>,
        sigma: Vec<usize>,
    ) -> Result<Self> {
        if rho.len() != basis.len() || sigma.len() != basis.len() {
            return Err(Error::Correspondence(format!(
                "{} basis elements but {} left and {} right anchors",
                basis.len(),
                rho.len(),
                sigma.len()
            )));
        }
        if let Some(b) = rho.iter().position(|&v| v >= left.len()) {
            return Err(Error::Correspondence(format!("left anchor of `{}` out of range", basis[b])));
        }
        if let Some(b) = sigma.iter().position(|&v| v >= right.len()) {
            return Err(Error::Correspondence(format!("right anchor of `{}` out of range", basis[b])));
        }
        let mut seen = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if seen.insert(b.as_str(), i).is_some() {
                return Err(Error::DuplicateId { kind: "basis element", id: b.clone() });
            }
        }
        Ok(FinDimCorrespondence { left, right, basis, rho, sigma })
    }

    pub fn left_ground(&self) -> &[String] {
        &self.left
    }

    pub fn right_ground(&self) -> &[String] {
        &self.right
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Both sides over the same algebra.
    pub fn is_self(&self) -> bool {
        self.left == self.right
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn zero(&self) -> Function {
        vec![Rational::zero(); self.dim()]
    }

    pub fn delta(&self, b: usize) -> Function {
        indicator(self.dim(), b)
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Function {
        assert_eq!((x.len(), y.len()), (self.dim(), self.dim()));
        let mut out = vec![Rational::zero(); self.right.len()];
        for b in 0..self.dim() {
            out[self.sigma[b]] += &x[b] * &y[b];
        }
        out
    }

    pub fn right_act(&self, x: &[Rational], a: &[Rational]) -> Function {
        assert_eq!((x.len(), a.len()), (self.dim(), self.right.len()));
        (0..self.dim()).map(|b| &x[b] * &a[self.sigma[b]]).collect()
    }

    pub fn left_act(&self, a: &[Rational], x: &[Rational]) -> Function {
        assert_eq!((x.len(), a.len()), (self.dim(), self.left.len()));
        (0..self.dim()).map(|b| &a[self.rho[b]] * &x[b]).collect()
    }

    /// The left action of `a` as a diagonal matrix.
    pub fn left_operator(&self, a: &[Rational]) -> RatMatrix {
        let n = self.dim();
        RatMatrix::from_fn(n, n, |i, j| if i == j { a[self.rho[i]].clone() } else { Rational::zero() })
    }

    /// `Θ_{x,y}(z) = x·(y|z)`, with matrix `x(b) y(c) [σ(b) = σ(c)]`.
    pub fn theta(&self, x: &[Rational], y: &[Rational]) -> RatMatrix {
        let n = self.dim();
        RatMatrix::from_fn(n, n, |b, c| {
            if self.sigma[b] == self.sigma[c] {
                &x[b] * &y[c]
            } else {
                Rational::zero()
            }
        })
    }

    pub fn standard_frame(&self) -> Vec<Function> {
        (0..self.dim()).map(|b| self.delta(b)).collect()
    }

    /// Replace the left action, for instance to act through `ψ` instead of
    /// the inherited anchors.
    pub fn with_left_action(mut self, left: Vec<String>, rho: Vec<usize>) -> Result<Self> {
        self.left = left;
        self.rho = rho;
        Self::new(self.left, self.right, self.basis, self.rho, self.sigma)
    }

    /// Nonnegative with `σ` injective on the support.
    pub fn is_diagonal_generator(&self, x: &[Rational]) -> bool {
        let mut used = vec![false; self.right.len()];
        for (b, v) in x.iter().enumerate() {
            if v.is_negative() {
                return false;
            }
            if !v.is_zero() {
                if used[self.sigma[b]] {
                    return false;
                }
                used[self.sigma[b]] = true;
            }
        }
        true
    }
}

impl fmt::Display for FinDimCorrespondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "dimension {} from {} to {} vertices",
            self.dim(),
            self.left.len(),
            self.right.len()
        )?;
        for b in 0..self.dim() {
            writeln!(f, "  {}: {} -> {}", self.basis[b], self.left[self.rho[b]], self.right[self.sigma[b]])?;
        }
        Ok(())
    }
}

/// `X(E)`: basis `E¹`, left anchor `r`, right anchor `s`.
pub fn graph_correspondence(g: &DirectedGraph) -> FinDimCorrespondence {
    let vertices = g.vertices().to_vec();
    FinDimCorrespondence {
        left: vertices.clone(),
        right: vertices,
        basis: g.edges().iter().map(|e| e.id.clone()).collect(),
        rho: g.edges().iter().map(|e| e.range).collect(),
        sigma: g.edges().iter().map(|e| e.source).collect(),
    }
}

/// The coefficient algebra as a correspondence over itself.
pub fn identity_correspondence(ground: &[String]) -> FinDimCorrespondence {
    let idx: Vec<usize> = (0..ground.len()).collect();
    FinDimCorrespondence {
        left: ground.to_vec(),
        right: ground.to_vec(),
        basis: ground.to_vec(),
        rho: idx.clone(),
        sigma: idx,
    }
}

/// `B` with left action of `A` through `α*` and right action of `B`.
pub fn pull_back_correspondence(a: &[String], b: &[String], alpha: &[usize]) -> FinDimCorrespondence {
    FinDimCorrespondence {
        left: a.to_vec(),
        right: b.to_vec(),
        basis: b.to_vec(),
        rho: alpha.to_vec(),
        sigma: (0..b.len()).collect(),
    }
}

/// `B^Λ`: left action of `B` by multiplication, right action of `A` through
/// `α*`, inner product `Λ(b₁b₂)`.
pub fn expectation_correspondence(a: &[String], b: &[String], alpha: &[usize]) -> FinDimCorrespondence {
    FinDimCorrespondence {
        left: b.to_vec(),
        right: a.to_vec(),
        basis: b.to_vec(),
        rho: (0..b.len()).collect(),
        sigma: alpha.to_vec(),
    }
}

/// True when `Σ Θ_{x,x}` over the frame is the identity.
pub fn verify_frame(x: &FinDimCorrespondence, frame: &[Function]) -> bool {
    let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for f in frame {
        if f.len() != x.dim() {
            return false;
        }
        let support: Vec<usize> = (0..f.len()).filter(|&b| !f[b].is_zero()).collect();
        for &b in &support {
            for &c in &support {
                if x.sigma[b] == x.sigma[c] {
                    *acc.entry((b, c)).or_insert_with(Rational::zero) += &f[b] * &f[c];
                }
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc.len() == x.dim() && (0..x.dim()).all(|b| acc.get(&(b, b)).is_some_and(One::is_one))
}

/// Left vertices whose indicator acts nonzero, i.e. the image of `ρ`.
pub fn covariance_ideal(x: &FinDimCorrespondence) -> Vec<usize> {
    (0..x.left.len()).filter(|v| x.rho.contains(v)).collect()
}

fn tensor_pairs(x: &FinDimCorrespondence, y: &FinDimCorrespondence) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for bx in 0..x.dim() {
        for by in 0..y.dim() {
            if x.sigma[bx] == y.rho[by] {
                pairs.push((bx, by));
            }
        }
    }
    pairs
}

/// Balanced tensor product `X ⊗ Y`: basis pairs `(b, c)` with
/// `σ_X(b) = ρ_Y(c)`, labelled `b.c`, in lexicographic order.
pub fn tensor(x: &FinDimCorrespondence, y: &FinDimCorrespondence) -> Result<FinDimCorrespondence> {
    if x.right != y.left {
        return Err(Error::Correspondence(
            "right algebra of the first factor differs from the left algebra of the second".into(),
        ));
    }
    let pairs = tensor_pairs(x, y);
    FinDimCorrespondence::new(
        x.left.clone(),
        y.right.clone(),
        pairs.iter().map(|&(b, c)| format!("{}.{}", x.basis[b], y.basis[c])).collect(),
        pairs.iter().map(|&(b, _)| x.rho[b]).collect(),
        pairs.iter().map(|&(_, c)| y.sigma[c]).collect(),
    )
}

/// `X^{⊗k}` for `k ≥ 1`.
pub fn tensor_power(x: &FinDimCorrespondence, k: usize) -> Result<FinDimCorrespondence> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let mut acc = x.clone();
    for _ in 1..k {
        acc = tensor(&acc, x)?;
    }
    Ok(acc)
}

/// Coordinates of `ξ ⊗ η` in the basis of [`tensor`]`(x, y)`.
pub fn tensor_element(x: &FinDimCorrespondence, y: &FinDimCorrespondence, xi: &[Rational], eta: &[Rational]) -> Function {
    tensor_pairs(x, y).iter().map(|&(b, c)| &xi[b] * &eta[c]).collect()
}

/// `{ξᵢ ⊗ ηⱼ}` from frames of the two factors.
pub fn tensor_frame(
    x: &FinDimCorrespondence,
    y: &FinDimCorrespondence,
    fx: &[Function],
    fy: &[Function],
) -> Vec<Function> {
    let mut out = Vec::with_capacity(fx.len() * fy.len());
    for xi in fx {
        for eta in fy {
            out.push(tensor_element(x, y, xi, eta));
        }
    }
    out
}

/// `(α, β)` between self-correspondences `X` over `A` and `Y` over `B`.
/// `alpha` maps vertices of `B` to vertices of `A`, so the algebra map is
/// `α*`; `β` is stored by columns, one sparse column per basis vector of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceMorphism {
    pub alpha: Vec<usize>,
    pub target_dim: usize,
    pub columns: Vec<Vec<(usize, Rational)>>,
}

impl CorrespondenceMorphism {
    /// A basis map `b ↦ δ_{f(b)}`.
    pub fn from_basis_map(alpha: Vec<usize>, target_dim: usize, map: &[usize]) -> Self {
        CorrespondenceMorphism {
            alpha,
            target_dim,
            columns: map.iter().map(|&t| vec![(t, Rational::one())]).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.target_dim, self.columns.len());
        for (b, col) in self.columns.iter().enumerate() {
            for (t, v) in col {
                m.set(*t, b, v.clone());
            }
        }
        m
    }

    pub fn apply(&self, xi: &[Rational]) -> Function {
        let mut out = vec![Rational::zero(); self.target_dim];
        for (b, col) in self.columns.iter().enumerate() {
            if xi[b].is_zero() {
                continue;
            }
            for (t, v) in col {
                out[*t] += &xi[b] * v;
            }
        }
        out
    }

    fn is_permutation(&self) -> bool {
        let mut hit = vec![false; self.target_dim];
        self.columns.len() == self.target_dim
            && self.columns.iter().all(|col| {
                matches!(col.as_slice(), [(t, v)] if v.is_one() && !std::mem::replace(&mut hit[*t], true))
            })
    }

    /// Rank of `β` over the rationals.
    pub fn rank(&self) -> usize {
        if self.is_permutation() {
            self.target_dim
        } else {
            self.matrix().rank()
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.source_dim() == self.target_dim && self.rank() == self.target_dim
    }
}

fn line(name: &'static str, failure: Option<String>) -> CheckLine {
    CheckLine {
        name,
        passed: failure.is_none(),
        detail: failure.unwrap_or_default(),
    }
}

fn passed_with(name: &'static str, ok: bool, detail: String) -> CheckLine {
    CheckLine { name, passed: ok, detail }
}

/// The three morphism axioms on basis vectors and vertex indicators, which by
/// bilinearity is the same as checking them everywhere:
///
/// * `(β(ξ)|β(η))_B = α*((ξ|η)_A)`;
/// * `β(ξ·a) = β(ξ)·α*(a)`;
/// * `β(φ(a)ξ) = φ′(α*(a))β(ξ)`.
///
/// Lines are named `inner products`, `right action`, `left action`.
pub fn verify_morphism(
    m: &CorrespondenceMorphism,
    x: &FinDimCorrespondence,
    y: &FinDimCorrespondence,
) -> Result<Vec<CheckLine>> {
    if !x.is_self() || !y.is_self() {
        return Err(Error::Correspondence("morphisms are defined between self-correspondences".into()));
    }
    if m.source_dim() != x.dim()
        || m.target_dim != y.dim()
        || m.alpha.len() != y.right.len()
        || m.alpha.iter().any(|&v| v >= x.right.len())
        || m.columns.iter().flatten().any(|(t, _)| *t >= y.dim())
    {
        return Err(Error::Dimension("morphism does not match its correspondences".into()));
    }
    let mut rows: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); y.dim()];
    for (b, col) in m.columns.iter().enumerate() {
        for (t, v) in col {
            rows[*t].push((b, v));
        }
    }
    let mut got: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    for (t, row) in rows.iter().enumerate() {
        for &(b, vb) in row {
            for &(c, vc) in row {
                *got.entry((b, c, y.sigma[t])).or_insert_with(Rational::zero) += vb * vc;
            }
        }
    }
    got.retain(|_, v| !v.is_zero());
    let mut want = BTreeMap::new();
    for b in 0..x.dim() {
        for (u, &a) in m.alpha.iter().enumerate() {
            if a == x.sigma[b] {
                want.insert((b, b, u), Rational::one());
            }
        }
    }
    let inner = got
        .keys()
        .chain(want.keys())
        .find(|k| got.get(k) != want.get(k))
        .map(|&(b, c, u)| format!("at (δ_{}|δ_{}) on {}", x.basis[b], x.basis[c], y.right[u]));

    // β(δ_b · δ_w) = [anchor(b) = w] β(δ_b) against β(δ_b) · α*(δ_w)
    let action = |x_anchor: &[usize], y_anchor: &[usize]| {
        for b in 0..x.dim() {
            for w in 0..x.right.len() {
                let lhs: Vec<(usize, &Rational)> = if x_anchor[b] == w {
                    m.columns[b].iter().map(|(t, v)| (*t, v)).filter(|(_, v)| !v.is_zero()).collect()
                } else {
                    Vec::new()
                };
                let rhs: Vec<(usize, &Rational)> = m.columns[b]
                    .iter()
                    .filter(|(t, v)| m.alpha[y_anchor[*t]] == w && !v.is_zero())
                    .map(|(t, v)| (*t, v))
                    .collect();
                if lhs != rhs {
                    return Some(format!("at δ_{} and {}", x.basis[b], x.right[w]));
                }
            }
        }
        None
    };
    Ok(vec![
        line("inner products", inner),
        line("right action", action(&x.sigma, &y.sigma)),
        line("left action", action(&x.rho, &y.rho)),
    ])
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub title: String,
    pub checks: Vec<CheckLine>,
}

impl CorrespondenceReport {
    fn new(title: impl Into<String>) -> Self {
        CorrespondenceReport { title: title.into(), checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, c: CheckLine) {
        self.checks.push(c);
    }

    fn extend_prefixed(&mut self, prefix: &str, lines: Vec<CheckLine>) {
        for mut c in lines {
            c.detail = if c.detail.is_empty() { prefix.to_string() } else { format!("{prefix} {}", c.detail) };
            self.checks.push(c);
        }
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
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

fn fmt_vertices(ground: &[String], set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&v| ground[v].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Everything built from an in-split at the level of correspondences.
#[derive(Clone, Debug)]
pub struct InSplitCorrespondence {
    /// `X(E)` over `A`.
    pub source: FinDimCorrespondence,
    /// `X(E) ⊗_α B` with left action of `B` through `ψ`.
    pub module: FinDimCorrespondence,
    /// `X(E_I)`.
    pub target: FinDimCorrespondence,
    /// `(α*, x ↦ x ⊗ 1)` from `X(E)` to the module.
    pub embedding: CorrespondenceMorphism,
    /// `x ⊗ g ↦ ((e,v) ↦ x(e) g(v))` from the module onto `X(E_I)`.
    pub iso: CorrespondenceMorphism,
    pub report: CorrespondenceReport,
}

/// `J_ψ`: vertices of `E⁰_I` whose indicator acts nonzero through `ψ`, which
/// is the image of `ψ`.
pub fn psi_ideal(new_vertices: usize, psi: &[usize]) -> Vec<usize> {
    (0..new_vertices).filter(|u| psi.contains(u)).collect()
}

pub fn insplit_correspondence(g: &DirectedGraph, spec: &InSplitSpec) -> Result<InSplitCorrespondence> {
    let report = validate_in_split(g, spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let split = apply_in_split(g, spec)?;
    let a_ground = g.vertices().to_vec();
    let b_ground = spec.new_vertices.clone();
    let source = graph_correspondence(g);
    let b_alpha = pull_back_correspondence(&a_ground, &b_ground, &spec.alpha);
    let plain = tensor(&source, &b_alpha)?;
    let pairs = tensor_pairs(&source, &b_alpha);
    let module = plain.with_left_action(b_ground.clone(), pairs.iter().map(|&(e, _)| spec.psi[e]).collect())?;
    let target = graph_correspondence(&split);

    let map = pairs
        .iter()
        .map(|&(e, v)| split.edge(&format!("({},{})", g.edge_id(e), b_ground[v])))
        .collect::<Result<Vec<_>>>()?;
    let identity: Vec<usize> = (0..b_ground.len()).collect();
    let iso = CorrespondenceMorphism::from_basis_map(identity, target.dim(), &map);
    let mut columns = vec![Vec::new(); source.dim()];
    for (i, &(e, _)) in pairs.iter().enumerate() {
        columns[e].push((i, Rational::one()));
    }
    let embedding = CorrespondenceMorphism { alpha: spec.alpha.clone(), target_dim: module.dim(), columns };

    let mut report = CorrespondenceReport::new(format!("in-split correspondence of {}", g.name()));
    report.push(passed_with(
        "dimension",
        module.dim() == split.edge_count(),
        format!("dim X(E)⊗B = {}, |E¹_I| = {}", module.dim(), split.edge_count()),
    ));
    for (name, x) in [("frame of X(E)", &source), ("frame of X(E)⊗B", &module), ("frame of X(E_I)", &target)] {
        report.push(passed_with(name, verify_frame(x, &x.standard_frame()), String::new()));
    }
    report.extend_prefixed("x⊗g ↦ X(E_I)", verify_morphism(&iso, &module, &target)?);
    report.push(passed_with(
        "bijective on bases",
        iso.is_bijective(),
        format!("rank {} of {}", iso.rank(), target.dim()),
    ));
    report.extend_prefixed("x ↦ x⊗1", verify_morphism(&embedding, &source, &module)?);
    report.push(passed_with(
        "embedding injective",
        embedding.rank() == source.dim(),
        format!("rank {} of {}", embedding.rank(), source.dim()),
    ));

    let j_psi = psi_ideal(b_ground.len(), &spec.psi);
    let j_module = covariance_ideal(&module);
    let j_target = covariance_ideal(&target);
    report.push(passed_with(
        "covariance ideal",
        j_module == j_psi && j_target == j_psi,
        format!(
            "J_ψ⊗Id = {}, J_ψ = {}, J of X(E_I) = {}",
            fmt_vertices(&b_ground, &j_module),
            fmt_vertices(&b_ground, &j_psi),
            fmt_vertices(&b_ground, &j_target)
        ),
    ));
    let j_phi = covariance_ideal(&source);
    let escaped: Vec<usize> = (0..b_ground.len())
        .filter(|u| j_phi.contains(&spec.alpha[*u]) && !j_psi.contains(u))
        .collect();
    report.push(passed_with(
        "α*(J_φ) ⊆ J_ψ",
        escaped.is_empty(),
        if escaped.is_empty() {
            String::new()
        } else {
            format!("{} lie over J_φ outside J_ψ", fmt_vertices(&b_ground, &escaped))
        },
    ));
    // A/J_φ and B/J_ψ are functions on the complements; ᾱ has matrix [α(u) = w]
    let outside_a: Vec<usize> = (0..a_ground.len()).filter(|w| !j_phi.contains(w)).collect();
    let outside_b: Vec<usize> = (0..b_ground.len()).filter(|u| !j_psi.contains(u)).collect();
    let quotient = RatMatrix::from_fn(outside_b.len(), outside_a.len(), |i, j| {
        if spec.alpha[outside_b[i]] == outside_a[j] {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let quotient_ok = outside_a.len() == outside_b.len() && quotient.rank() == outside_a.len();
    report.push(passed_with(
        "quotient map bijective",
        quotient_ok,
        format!(
            "A/J_φ on {}, B/J_ψ on {}",
            fmt_vertices(&a_ground, &outside_a),
            fmt_vertices(&b_ground, &outside_b)
        ),
    ));
    let mut bad = None;
    for u in 0..b_ground.len() {
        let b = indicator(b_ground.len(), u);
        let (a, k) = decompose_b(g, spec, &b)?;
        let sum: Function = pull_back(&spec.alpha, &a).iter().zip(&k).map(|(x, y)| x + y).collect();
        if sum != b || (0..k.len()).any(|i| !k[i].is_zero() && !j_psi.contains(&i)) {
            bad.get_or_insert_with(|| b_ground[u].clone());
        }
    }
    report.push(line("b = α*(a) + k", bad.map(|u| format!("fails for δ_{u}"))));
    Ok(InSplitCorrespondence { source, module, target, embedding, iso, report })
}

/// Write `b = α*(a) + k` with `k` supported on `J_ψ`: `a(w)` is `b` at the
/// first `α`-preimage of `w`, and `k` is the remainder. Singular vertices have
/// a single preimage, outside `J_ψ`, where `k` therefore vanishes.
pub fn decompose_b(g: &DirectedGraph, spec: &InSplitSpec, b: &[Rational]) -> Result<(Function, Function)> {
    if b.len() != spec.new_vertices.len() {
        return Err(Error::Dimension(format!(
            "function on {} vertices, split has {}",
            b.len(),
            spec.new_vertices.len()
        )));
    }
    let mut a = vec![Rational::zero(); g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    for (u, &w) in spec.alpha.iter().enumerate() {
        if !std::mem::replace(&mut seen[w], true) {
            a[w] = b[u].clone();
        }
    }
    let k: Function = b.iter().zip(pull_back(&spec.alpha, &a)).map(|(x, y)| x - y).collect();
    let j_psi = psi_ideal(spec.new_vertices.len(), &spec.psi);
    if let Some(u) = (0..k.len()).find(|u| !k[*u].is_zero() && !j_psi.contains(u)) {
        return Err(Error::Correspondence(format!(
            "remainder is nonzero at `{}` outside J_ψ",
            spec.new_vertices[u]
        )));
    }
    Ok((a, k))
}

/// Everything built from an out-split at the level of correspondences.
#[derive(Clone, Debug)]
pub struct OutSplitCorrespondence {
    /// `X(E)` over `A`.
    pub source: FinDimCorrespondence,
    /// `X(E)` as an `A`–`B` correspondence: `(x·b)(e) = x(e) b(ψ(e))`.
    pub x_b: FinDimCorrespondence,
    /// `B^Λ` as a `B`–`A` correspondence.
    pub b_lambda: FinDimCorrespondence,
    /// `B^Λ ⊗_A X`.
    pub module: FinDimCorrespondence,
    /// `X(E_O)`.
    pub target: FinDimCorrespondence,
    /// `Ψ([b]⊗x)(u,e) = b(u) x(e)`.
    pub psi: CorrespondenceMorphism,
    /// `x ⊗ [b] ↦ x·b` from `X ⊗_B B^Λ` onto `X(E)`.
    pub factorisation: CorrespondenceMorphism,
    pub report: CorrespondenceReport,
}

pub fn outsplit_correspondence(g: &DirectedGraph, spec: &OutSplitSpec) -> Result<OutSplitCorrespondence> {
    let report = validate_out_split(g, spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let split = apply_out_split(g, spec)?;
    let a_ground = g.vertices().to_vec();
    let b_ground = spec.new_vertices.clone();
    let (na, nb) = (a_ground.len(), b_ground.len());
    let source = graph_correspondence(g);
    let x_b = FinDimCorrespondence::new(
        a_ground.clone(),
        b_ground.clone(),
        source.basis.clone(),
        source.rho.clone(),
        spec.psi.clone(),
    )?;
    let b_lambda = expectation_correspondence(&a_ground, &b_ground, &spec.alpha);
    let module = tensor(&b_lambda, &x_b)?;
    let target = graph_correspondence(&split);

    let mut report = CorrespondenceReport::new(format!("out-split correspondence of {}", g.name()));
    let mut compat = None;
    let mut inner = None;
    for e in 0..source.dim() {
        let de = source.delta(e);
        for w in 0..na {
            let a = indicator(na, w);
            if x_b.right_act(&de, &pull_back(&spec.alpha, &a)) != source.right_act(&de, &a) {
                compat.get_or_insert_with(|| format!("at δ_{} and {}", source.basis[e], a_ground[w]));
            }
        }
        for f in 0..source.dim() {
            let df = source.delta(f);
            if expectation(&spec.alpha, na, &x_b.inner(&de, &df)) != source.inner(&de, &df) {
                inner.get_or_insert_with(|| format!("at (δ_{}|δ_{})", source.basis[e], source.basis[f]));
            }
        }
    }
    report.push(line("x·α*(a) = x·a", compat));
    report.push(line("Λ((x|y)_B) = (x|y)_A", inner));

    let mut bimodule = None;
    let mut fibre = None;
    let mut lambda_inner = None;
    let fibre_size = expectation(&spec.alpha, na, &vec![Rational::one(); nb]);
    for w1 in 0..na {
        let a1 = indicator(na, w1);
        let fibre_ok = expectation(&spec.alpha, na, &pull_back(&spec.alpha, &a1)) == product(&fibre_size, &a1);
        if !fibre_ok {
            fibre.get_or_insert_with(|| a_ground[w1].clone());
        }
        for w2 in 0..na {
            let a2 = indicator(na, w2);
            for u in 0..nb {
                let b = indicator(nb, u);
                let lhs = expectation(
                    &spec.alpha,
                    na,
                    &product(&product(&pull_back(&spec.alpha, &a1), &b), &pull_back(&spec.alpha, &a2)),
                );
                let rhs = product(&product(&a1, &expectation(&spec.alpha, na, &b)), &a2);
                if lhs != rhs {
                    bimodule.get_or_insert_with(|| format!("at {}, {}, {}", a_ground[w1], b_ground[u], a_ground[w2]));
                }
            }
        }
    }
    for u in 0..nb {
        for u2 in 0..nb {
            let (b1, b2) = (indicator(nb, u), indicator(nb, u2));
            if b_lambda.inner(&b1, &b2) != expectation(&spec.alpha, na, &product(&b1, &b2)) {
                lambda_inner.get_or_insert_with(|| format!("at {}, {}", b_ground[u], b_ground[u2]));
            }
        }
    }
    report.push(line("Λ(α*(a₁)bα*(a₂)) = a₁Λ(b)a₂", bimodule));
    report.push(line("Λ∘α* multiplies by fibre size", fibre.map(|w| format!("at {w}"))));
    report.push(line("([b₁]|[b₂]) = Λ(b₁b₂)", lambda_inner));
    report.push(passed_with(
        "dimension",
        module.dim() == split.edge_count(),
        format!("dim B^Λ⊗X = {}, |E¹_O| = {}", module.dim(), split.edge_count()),
    ));
    for (name, x) in [("frame of B^Λ⊗X", &module), ("frame of X(E_O)", &target)] {
        report.push(passed_with(name, verify_frame(x, &x.standard_frame()), String::new()));
    }

    let pairs = tensor_pairs(&b_lambda, &x_b);
    let map = pairs
        .iter()
        .map(|&(u, e)| split.edge(&format!("({},{})", b_ground[u], g.edge_id(e))))
        .collect::<Result<Vec<_>>>()?;
    let psi = CorrespondenceMorphism::from_basis_map((0..nb).collect(), target.dim(), &map);
    report.extend_prefixed("Ψ", verify_morphism(&psi, &module, &target)?);
    report.push(passed_with(
        "Ψ bijective",
        psi.is_bijective(),
        format!("rank {} of {}", psi.rank(), target.dim()),
    ));

    let factored = tensor(&x_b, &b_lambda)?;
    // x ⊗ [b] ↦ x·b sends δ_e ⊗ δ_u to [ψ(e) = u] δ_e
    let mut columns = Vec::with_capacity(factored.dim());
    for (e, u) in tensor_pairs(&x_b, &b_lambda) {
        let image = x_b.right_act(&source.delta(e), &indicator(nb, u));
        columns.push(
            image
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect::<Vec<_>>(),
        );
    }
    let factorisation = CorrespondenceMorphism { alpha: (0..na).collect(), target_dim: source.dim(), columns };
    report.extend_prefixed("X⊗B^Λ → X", verify_morphism(&factorisation, &factored, &source)?);
    report.push(passed_with(
        "factorisation bijective",
        factorisation.is_bijective(),
        format!("rank {} of {}", factorisation.rank(), source.dim()),
    ));
    Ok(OutSplitCorrespondence {
        source,
        x_b,
        b_lambda,
        module,
        target,
        psi,
        factorisation,
        report,
    })
}

/// Level-`k` diagonal check for an in-split.
///
/// `X(E)^{⊗k} ⊗_α B` is identified with `X(E_I)^{⊗k}` by
/// `(e₁…e_k, v) ↦ (e₁,ψ(e₂))…(e_k,v)`; the identification is checked to be a
/// correspondence isomorphism. For every path `p`, `Θ_{δ_p,δ_p} ⊗ Id` is
/// computed as `Σ_w Θ_{δ_p⊗α*(δ_w)}` and must be diagonal in the path basis
/// of `E_I^k`, the images must form a frame, and `x ⊗ 1` must generate the
/// diagonal exactly when `x` does, for every `x = δ_p + δ_q`.
pub fn diagonal_level_check(g: &DirectedGraph, spec: &InSplitSpec, k: usize) -> Result<CorrespondenceReport> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let report = validate_in_split(g, spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let split = apply_in_split(g, spec)?;
    let a_ground = g.vertices().to_vec();
    let b_ground = spec.new_vertices.clone();
    let nb = b_ground.len();
    let xk = tensor_power(&graph_correspondence(g), k)?;
    let b_alpha = pull_back_correspondence(&a_ground, &b_ground, &spec.alpha);
    let pairs = tensor_pairs(&xk, &b_alpha);
    // ψ⊗Id acts through the first edge of the path
    let first_edge = |label: &str| g.edge(label.split('.').next().unwrap_or(label));
    let rho = pairs
        .iter()
        .map(|&(p, _)| first_edge(&xk.basis[p]).map(|e| spec.psi[e]))
        .collect::<Result<Vec<_>>>()?;
    let yk = tensor(&xk, &b_alpha)?.with_left_action(b_ground.clone(), rho)?;
    let zk = tensor_power(&graph_correspondence(&split), k)?;
    let z_index: HashMap<&str, usize> = zk.basis.iter().enumerate().map(|(i, b)| (b.as_str(), i)).collect();

    let mut map = Vec::with_capacity(pairs.len());
    for &(p, v) in &pairs {
        let edges = xk.basis[p].split('.').map(|id| g.edge(id)).collect::<Result<Vec<_>>>()?;
        let mut labels = Vec::with_capacity(k);
        for (i, &e) in edges.iter().enumerate() {
            let u = edges.get(i + 1).map_or(v, |&next| spec.psi[next]);
            labels.push(format!("({},{})", g.edge_id(e), b_ground[u]));
        }
        let label = labels.join(".");
        match z_index.get(label.as_str()) {
            Some(&t) => map.push(t),
            None => {
                return Err(Error::Correspondence(format!("`{label}` is not a path of the split graph")));
            }
        }
    }
    let fock = CorrespondenceMorphism::from_basis_map((0..nb).collect(), zk.dim(), &map);

    let mut report = CorrespondenceReport::new(format!("diagonal at level {k} for {}", g.name()));
    report.push(passed_with(
        "level dimension",
        yk.dim() == zk.dim(),
        format!("dim X^⊗{k}⊗B = {}, |E_I^{k}| = {}", yk.dim(), zk.dim()),
    ));
    report.extend_prefixed("Fock identification", verify_morphism(&fock, &yk, &zk)?);
    report.push(passed_with(
        "Fock identification bijective",
        fock.is_bijective(),
        format!("rank {} of {}", fock.rank(), zk.dim()),
    ));

    let mut off_diagonal = None;
    let mut outside_cone = None;
    let mut images = Vec::new();
    for p in 0..xk.dim() {
        let dp = xk.delta(p);
        if !xk.is_diagonal_generator(&dp) {
            outside_cone.get_or_insert_with(|| xk.basis[p].clone());
        }
        for w in 0..a_ground.len() {
            let aw = pull_back(&spec.alpha, &indicator(a_ground.len(), w));
            let y = fock.apply(&tensor_element(&xk, &b_alpha, &dp, &aw));
            if y.iter().all(Zero::is_zero) {
                continue;
            }
            if !zk.is_diagonal_generator(&y) {
                outside_cone.get_or_insert_with(|| xk.basis[p].clone());
            }
            let support: Vec<usize> = (0..y.len()).filter(|&t| !y[t].is_zero()).collect();
            let crossing = support
                .iter()
                .any(|&s| support.iter().any(|&t| s != t && zk.sigma[s] == zk.sigma[t]));
            if crossing {
                off_diagonal.get_or_insert_with(|| xk.basis[p].clone());
            }
            images.push(y);
        }
    }
    report.push(line("Θ⊗Id is diagonal", off_diagonal.map(|p| format!("fails for {p}"))));
    report.push(line("images generate the diagonal", outside_cone.map(|p| format!("fails for {p}"))));
    report.push(passed_with("images form a frame", verify_frame(&zk, &images), format!("{} generators", images.len())));

    // x = δ_p + δ_q generates the diagonal iff x ⊗ 1 does
    let mut lifted: Vec<Vec<usize>> = vec![Vec::new(); xk.dim()];
    for (i, &(p, _)) in pairs.iter().enumerate() {
        lifted[p].push(map[i]);
    }
    let mut mismatch = None;
    'pairs: for p in 0..xk.dim() {
        for q in p + 1..xk.dim() {
            let below = xk.sigma[p] != xk.sigma[q];
            let mut used = HashMap::new();
            let mut above = true;
            for &t in lifted[p].iter().chain(&lifted[q]) {
                if used.insert(zk.sigma[t], t).is_some() {
                    above = false;
                }
            }
            if below != above {
                mismatch = Some(format!("{} + {}", xk.basis[p], xk.basis[q]));
                break 'pairs;
            }
        }
    }
    report.push(line("x ⊗ 1 generates iff x does", mismatch.map(|x| format!("fails for {x}"))));
    Ok(report)
}
