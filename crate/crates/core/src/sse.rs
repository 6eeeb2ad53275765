//! Elementary strong shift equivalence and its invariants.
//!
//! Square nonnegative integer matrices `A` and `B` are elementary strong
//! shift equivalent when `A = RS` and `B = SR` for nonnegative `R`, `S`.
//! Because the literature writes the pair in either order, every witness
//! travels with an explicit [`Roles`] tag.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::moves::{validate_in_split, validate_out_split, InSplitSpec, OutSplitSpec};
use crate::poly::Poly;
use crate::scalar::{lit, Scalar};
use crate::snf::smith_normal_form;
use crate::{IntMatrix, IntPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Roles {
    /// `A = RS`, `B = SR`.
    ARsBSr,
    /// `B = RS`, `A = SR`.
    BRsASr,
}

impl Roles {
    pub fn swapped(self) -> Roles {
        match self {
            Roles::ARsBSr => Roles::BRsASr,
            Roles::BRsASr => Roles::ARsBSr,
        }
    }

    pub fn parse(text: &str) -> Option<Roles> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "A=RS,B=SR" | "B=SR,A=RS" => Some(Roles::ARsBSr),
            "B=RS,A=SR" | "A=SR,B=RS" => Some(Roles::BRsASr),
            _ => None,
        }
    }
}

impl fmt::Display for Roles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Roles::ARsBSr => "A=RS,B=SR",
            Roles::BRsASr => "B=RS,A=SR",
        })
    }
}

/// A pair `(R, S)` of nonnegative integer matrices with `R` of shape `m×n`
/// and `S` of shape `n×m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SseWitness {
    r: IntMatrix,
    s: IntMatrix,
}

impl SseWitness {
    pub fn new(r: IntMatrix, s: IntMatrix) -> Result<Self> {
        if r.rows() != s.cols() || r.cols() != s.rows() {
            return Err(Error::Dimension(format!(
                "R is {}x{} but S is {}x{}",
                r.rows(),
                r.cols(),
                s.rows(),
                s.cols()
            )));
        }
        if let Some((row, col)) = r.first_negative().or(s.first_negative()) {
            return Err(Error::NegativeEntry { row, col });
        }
        Ok(SseWitness { r, s })
    }

    pub fn r(&self) -> &IntMatrix {
        &self.r
    }

    pub fn s(&self) -> &IntMatrix {
        &self.s
    }

    pub fn rs(&self) -> IntMatrix {
        &self.r * &self.s
    }

    pub fn sr(&self) -> IntMatrix {
        &self.s * &self.r
    }
}

/// One failed product comparison, e.g. `B ≠ RS at (3,3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMismatch {
    pub target: &'static str,
    pub product: &'static str,
    /// Differing entries, 0-based, row-major.
    pub entries: Vec<(usize, usize)>,
    /// Set when the shapes already disagree.
    pub shape: Option<String>,
}

impl fmt::Display for ProductMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (t, p) = (self.target, self.product);
        if let Some(shape) = &self.shape {
            return write!(f, "{t} ≠ {p}: {shape}");
        }
        let (i, j) = self.entries[0];
        write!(f, "{t} ≠ {p} at ({},{})", i + 1, j + 1)?;
        if self.entries.len() > 1 {
            write!(f, " and {} more entries", self.entries.len() - 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SseCheck {
    pub roles: Roles,
    pub failures: Vec<ProductMismatch>,
}

impl SseCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SseCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "{}: PASS", self.roles);
        }
        let msgs: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "{}: FAIL ({})", self.roles, msgs.join("; "))
    }
}

fn compare(target: &'static str, expected: &IntMatrix, product: &'static str, got: &IntMatrix) -> Option<ProductMismatch> {
    if (expected.rows(), expected.cols()) != (got.rows(), got.cols()) {
        return Some(ProductMismatch {
            target,
            product,
            entries: vec![],
            shape: Some(format!(
                "{target} is {}x{} but {product} is {}x{}",
                expected.rows(),
                expected.cols(),
                got.rows(),
                got.cols()
            )),
        });
    }
    let entries = expected.differences(got);
    (!entries.is_empty()).then_some(ProductMismatch {
        target,
        product,
        entries,
        shape: None,
    })
}

/// Compare both products against `A` and `B`, reporting shape disagreements
/// as failures rather than errors.
pub fn check_elementary_sse(a: &IntMatrix, b: &IntMatrix, w: &SseWitness, roles: Roles) -> SseCheck {
    let (rs, sr) = (w.rs(), w.sr());
    let pairs = match roles {
        Roles::ARsBSr => [("A", a, "RS", &rs), ("B", b, "SR", &sr)],
        Roles::BRsASr => [("B", b, "RS", &rs), ("A", a, "SR", &sr)],
    };
    let failures = pairs
        .into_iter()
        .filter_map(|(t, m, p, prod)| compare(t, m, p, prod))
        .collect();
    SseCheck { roles, failures }
}

/// True iff the witness realises the stated roles exactly. Shapes that
/// cannot compose are an error.
pub fn verify_elementary_sse(a: &IntMatrix, b: &IntMatrix, w: &SseWitness, roles: Roles) -> Result<bool> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Dimension("A and B must be square".into()));
    }
    let (rs, sr) = (w.r.rows(), w.s.rows());
    let (for_rs, for_sr) = match roles {
        Roles::ARsBSr => (a.rows(), b.rows()),
        Roles::BRsASr => (b.rows(), a.rows()),
    };
    if rs != for_rs || sr != for_sr {
        return Err(Error::Dimension(format!(
            "witness of shape {}x{} cannot relate {}x{} and {}x{} under {roles}",
            w.r.rows(),
            w.r.cols(),
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(check_elementary_sse(a, b, w, roles).holds())
}

/// `R[x][u] = [α(x) = u]`, `S[u][x] = #{e : s(e) = u, ψ(e) = x}`, so that the
/// split matrix is `RS` and the original is `SR`.
pub fn in_split_witness(g: &DirectedGraph, spec: &InSplitSpec) -> Result<SseWitness> {
    let report = validate_in_split(g, spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let (k, n) = (spec.new_vertices.len(), g.vertex_count());
    let r = IntMatrix::from_fn(k, n, |x, u| indicator(spec.alpha[x] == u));
    let mut s = IntMatrix::zeros(n, k);
    for e in 0..g.edge_count() {
        let (u, x) = (g.source(e), spec.psi[e]);
        s.set(u, x, s.get(u, x) + 1);
    }
    SseWitness::new(r, s)
}

/// `R′[u][y] = [α(y) = u]`, `S′[x][u] = #{e : ψ(e) = x, r(e) = u}`, so that the
/// original matrix is `R′S′` and the split is `S′R′`.
pub fn out_split_witness(g: &DirectedGraph, spec: &OutSplitSpec) -> Result<SseWitness> {
    let report = validate_out_split(g, spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let (k, n) = (spec.new_vertices.len(), g.vertex_count());
    let r = IntMatrix::from_fn(n, k, |u, y| indicator(spec.alpha[y] == u));
    let mut s = IntMatrix::zeros(k, n);
    for e in 0..g.edge_count() {
        let (x, u) = (spec.psi[e], g.range(e));
        s.set(x, u, s.get(x, u) + 1);
    }
    SseWitness::new(r, s)
}

fn indicator(b: bool) -> BigInt {
    if b {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// `Z = [[0, R], [S, 0]]`, whose square is `diag(RS, SR)`.
pub fn bipartite_inflation(w: &SseWitness) -> IntMatrix {
    let (m, n) = (w.r.rows(), w.r.cols());
    let z = IntMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, false) => w.r.get(i, j - m).clone(),
        (false, true) => w.s.get(i - m, j).clone(),
        _ => BigInt::zero(),
    });
    assert_eq!(&z * &z, w.rs().block_diag(&w.sr()), "bipartite inflation identity");
    z
}

/// `[tr A, tr A², …, tr A^N]`.
pub fn trace_sequence<T: Scalar>(a: &crate::Matrix<T>, n: usize) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::Dimension("trace sequence of a non-square matrix".into()));
    }
    let mut power = a.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            power = &power * a;
        }
        out.push(power.trace());
    }
    Ok(out)
}

/// `det(I − uA)` from the power sums `pᵢ = tr Aⁱ` via Newton's identities
/// `k·c_k = −Σ_{i=1..k} pᵢ c_{k−i}`. Every division is exact.
pub fn weighted_char_poly<T: Scalar>(a: &crate::Matrix<T>) -> Result<Poly<T>> {
    let n = a.rows();
    let p = trace_sequence(a, n)?;
    let mut c = vec![T::one()];
    for k in 1..=n {
        let sum = (1..=k).fold(T::zero(), |acc, i| acc + p[i - 1].clone() * c[k - i].clone());
        c.push(-sum / lit(k as i64));
    }
    Ok(Poly::new(c))
}

/// Invariant factors of `I − A` (including units), the free rank of its
/// cokernel and the sign of `det(I − A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BowenFranks {
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
    pub det_sign: i8,
}

impl BowenFranks {
    /// Factors different from one; together with the free rank they fix
    /// the cokernel up to isomorphism.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }

    /// Agreement of the cokernel and of the determinant sign.
    pub fn agrees_with(&self, other: &BowenFranks) -> bool {
        self.nontrivial() == other.nontrivial()
            && self.free_rank == other.free_rank
            && self.det_sign == other.det_sign
    }
}

impl fmt::Display for BowenFranks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        let sign = match self.det_sign {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        write!(f, "factors ({}); free rank {}; det sign {sign}", factors.join(","), self.free_rank)
    }
}

pub fn bowen_franks(a: &IntMatrix) -> Result<BowenFranks> {
    if !a.is_square() {
        return Err(Error::Dimension("Bowen-Franks data of a non-square matrix".into()));
    }
    let m = &IntMatrix::identity(a.rows()) - a;
    let form = smith_normal_form(&m)?;
    let det = m.determinant()?;
    Ok(BowenFranks {
        free_rank: a.rows() - form.factors.len(),
        factors: form.factors,
        det_sign: if det.is_positive() {
            1
        } else if det.is_negative() {
            -1
        } else {
            0
        },
    })
}

/// Result of a bounded witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A witness with `A = RS`, `B = SR`.
    Found(SseWitness),
    /// An invariant separates the matrices, so no witness exists at any bound.
    Rejected { invariant: String },
    /// Every candidate within the entry bound was examined.
    Exhausted,
    /// The budget ran out first; nothing is claimed.
    Inconclusive { nodes: u64 },
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found(_) => write!(f, "found"),
            SearchOutcome::Rejected { invariant } => write!(f, "rejected: {invariant} differs"),
            SearchOutcome::Exhausted => write!(f, "no witness within the entry bound"),
            SearchOutcome::Inconclusive { nodes } => {
                write!(f, "inconclusive: budget exhausted after {nodes} nodes")
            }
        }
    }
}

/// Search for `R` (`m×n`) and `S` (`n×m`) with `A = RS`, `B = SR` and all
/// entries at most `entry_bound`.
///
/// The search assigns column `j` of `R` and row `j` of `S` together, so `A`
/// is built up as a sum of outer products that must stay below `A`
/// entrywise, and each `B[j][k] = S_j·R_k` is checked as soon as both
/// factors exist. Candidates are tried in ascending lexicographic order of
/// `(R_0, S_0, R_1, S_1, …)`, so the witness returned is the least one in
/// that order.
pub fn search_elementary_sse(
    a: &IntMatrix,
    b: &IntMatrix,
    entry_bound: u32,
    budget: Duration,
) -> Result<SearchOutcome> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Dimension("A and B must be square".into()));
    }
    if let Some((row, col)) = a.first_negative().or(b.first_negative()) {
        return Err(Error::NegativeEntry { row, col });
    }
    let reach = a.rows().max(b.rows()).max(1);
    if trace_sequence(a, reach)? != trace_sequence(b, reach)? {
        return Ok(SearchOutcome::Rejected {
            invariant: "trace sequence".into(),
        });
    }
    if !bowen_franks(a)?.agrees_with(&bowen_franks(b)?) {
        return Ok(SearchOutcome::Rejected {
            invariant: "Bowen-Franks data".into(),
        });
    }
    let to_u64 = |m: &IntMatrix| -> Vec<Vec<u64>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| u64::try_from(x).unwrap_or(u64::MAX)).collect())
            .collect()
    };
    let mut search = Search {
        a: to_u64(a),
        b: to_u64(b),
        m: a.rows(),
        n: b.rows(),
        bound: entry_bound as u64,
        r_cols: vec![],
        s_rows: vec![],
        deadline: Instant::now() + budget,
        nodes: 0,
        timed_out: false,
    };
    let mut partial = vec![vec![0u64; search.m]; search.m];
    if search.step(&mut partial) {
        let (m, n) = (search.m, search.n);
        let r = IntMatrix::from_fn(m, n, |i, j| BigInt::from(search.r_cols[j][i]));
        let s = IntMatrix::from_fn(n, m, |j, i| BigInt::from(search.s_rows[j][i]));
        let w = SseWitness::new(r, s)?;
        if !check_elementary_sse(a, b, &w, Roles::ARsBSr).holds() {
            return Err(Error::Internal("search returned an invalid witness".into()));
        }
        return Ok(SearchOutcome::Found(w));
    }
    Ok(if search.timed_out {
        SearchOutcome::Inconclusive { nodes: search.nodes }
    } else {
        SearchOutcome::Exhausted
    })
}

struct Search {
    a: Vec<Vec<u64>>,
    b: Vec<Vec<u64>>,
    m: usize,
    n: usize,
    bound: u64,
    r_cols: Vec<Vec<u64>>,
    s_rows: Vec<Vec<u64>>,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

fn dot(x: &[u64], y: &[u64]) -> u64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Every vector of length `len` with entries in `0..=bound`, lexicographic.
fn for_each_vector(len: usize, bound: u64, mut f: impl FnMut(&[u64]) -> bool) -> bool {
    let mut v = vec![0u64; len];
    loop {
        if f(&v) {
            return true;
        }
        let Some(pos) = (0..len).rev().find(|&i| v[i] < bound) else {
            return false;
        };
        v[pos] += 1;
        for x in &mut v[pos + 1..] {
            *x = 0;
        }
    }
}

impl Search {
    fn step(&mut self, partial: &mut Vec<Vec<u64>>) -> bool {
        let j = self.r_cols.len();
        if j == self.n {
            return *partial == self.a;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }
        let (m, bound) = (self.m, self.bound);
        for_each_vector(m, bound, |col| {
            if self.timed_out {
                return true;
            }
            // B[j][k] for earlier rows k: S_k · R_j
            if (0..j).any(|k| dot(&self.s_rows[k], col) != self.b[k][j]) {
                return false;
            }
            let col = col.to_vec();
            let found = for_each_vector(m, bound, |row| {
                if self.timed_out {
                    return true;
                }
                if (0..m).any(|x| (0..m).any(|y| partial[x][y] + col[x] * row[y] > self.a[x][y])) {
                    return false;
                }
                if dot(row, &col) != self.b[j][j] || (0..j).any(|k| dot(row, &self.r_cols[k]) != self.b[j][k]) {
                    return false;
                }
                for x in 0..m {
                    for y in 0..m {
                        partial[x][y] += col[x] * row[y];
                    }
                }
                self.r_cols.push(col.clone());
                self.s_rows.push(row.to_vec());
                if self.step(partial) {
                    return true;
                }
                self.r_cols.pop();
                self.s_rows.pop();
                for x in 0..m {
                    for y in 0..m {
                        partial[x][y] -= col[x] * row[y];
                    }
                }
                false
            });
            found && !self.timed_out
        }) && !self.timed_out
    }
}

/// One elementary step of a chain: the current matrix and a witness relating
/// it to the next one. With [`Roles::ARsBSr`] the current matrix is `RS`
/// and the next is `SR`; with [`Roles::BRsASr`] the other way round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub matrix: IntMatrix,
    pub witness: SseWitness,
    pub roles: Roles,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// One line per step, then chaining failures.
    pub lines: Vec<String>,
    pub passed: bool,
    /// The matrix reached after the last step, when every step composes.
    pub end: Option<IntMatrix>,
}

pub fn verify_sse_chain(steps: &[ChainStep]) -> ChainReport {
    let mut lines = Vec::new();
    let mut passed = true;
    let mut previous_next: Option<IntMatrix> = None;
    for (i, step) in steps.iter().enumerate() {
        let k = i + 1;
        let (own, next) = match step.roles {
            Roles::ARsBSr => (step.witness.rs(), step.witness.sr()),
            Roles::BRsASr => (step.witness.sr(), step.witness.rs()),
        };
        if own != step.matrix {
            passed = false;
            let at = own
                .differences(&step.matrix)
                .first()
                .map(|&(r, c)| format!(" at ({},{})", r + 1, c + 1))
                .unwrap_or_default();
            lines.push(format!("step {k}: FAIL matrix {k} is not the product named by {}{at}", step.roles));
        } else {
            lines.push(format!("step {k}: PASS ({})", step.roles));
        }
        if let Some(prev) = &previous_next {
            if prev != &step.matrix {
                passed = false;
                lines.push(format!("step {k}: FAIL matrix {k} differs from the image of step {i}"));
            }
        }
        previous_next = Some(next);
    }
    if steps.is_empty() {
        passed = false;
        lines.push("empty chain".into());
    }
    ChainReport {
        lines,
        passed,
        end: if passed { previous_next } else { None },
    }
}

/// `det(I − uA)` printed in the variable `u`.
pub fn char_poly_display(a: &IntMatrix) -> Result<String> {
    let p: IntPoly = weighted_char_poly(a)?;
    Ok(p.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{adjacency_matrix, fixtures::g_a};
    use crate::moves::{
        complete_in_split, identity_in_split, identity_out_split, in_split_from_partition,
        out_split_from_partition,
    };

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn a() -> IntMatrix {
        m(&[&[1, 1], &[2, 0]])
    }

    fn b() -> IntMatrix {
        m(&[&[1, 0, 1], &[1, 0, 1], &[1, 1, 0]])
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn corrected_in_split_witness_verifies() {
        let w = SseWitness::new(m(&[&[1, 0], &[1, 0], &[0, 1]]), m(&[&[1, 0, 1], &[1, 1, 0]])).unwrap();
        assert!(verify_elementary_sse(&a(), &b(), &w, Roles::BRsASr).unwrap());
    }

    #[test]
    fn printed_in_split_witness_fails_at_named_entry() {
        let w = SseWitness::new(m(&[&[1, 0], &[1, 0], &[1, 1]]), m(&[&[1, 0, 1], &[0, 1, 0]])).unwrap();
        assert!(!verify_elementary_sse(&a(), &b(), &w, Roles::BRsASr).unwrap());
        let check = check_elementary_sse(&a(), &b(), &w, Roles::BRsASr);
        assert_eq!(check.failures[0].to_string(), "B ≠ RS at (3,3)");
        assert_eq!(check.failures[1].target, "A");
    }

    #[test]
    fn scalar_witness() {
        let w = SseWitness::new(m(&[&[5]]), m(&[&[1]])).unwrap();
        assert!(verify_elementary_sse(&m(&[&[5]]), &m(&[&[5]]), &w, Roles::ARsBSr).unwrap());
    }

    #[test]
    fn witness_construction_errors() {
        assert!(matches!(SseWitness::new(m(&[&[1, 2]]), m(&[&[1, 2]])), Err(Error::Dimension(_))));
        assert_eq!(
            SseWitness::new(m(&[&[1, -2]]), m(&[&[1], &[2]])),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        );
        let w = SseWitness::new(m(&[&[1]]), m(&[&[1]])).unwrap();
        assert!(verify_elementary_sse(&a(), &m(&[&[1]]), &w, Roles::ARsBSr).is_err());
    }

    #[test]
    fn in_split_witness_of_g_a() {
        let g = g_a();
        let spec = in_split_from_partition(&g, "w", &[vec!["e", "h"], vec!["g"]]).unwrap();
        let w = in_split_witness(&g, &spec).unwrap();
        assert_eq!(w.r(), &m(&[&[1, 0], &[1, 0], &[0, 1]]));
        assert_eq!(w.s(), &m(&[&[1, 0, 1], &[1, 1, 0]]));
        assert!(verify_elementary_sse(&a(), &b(), &w, Roles::BRsASr).unwrap());
    }

    #[test]
    fn identity_and_complete_witnesses() {
        let g = g_a();
        let w = in_split_witness(&g, &identity_in_split(&g)).unwrap();
        assert_eq!((w.r(), w.s()), (&IntMatrix::identity(2), &a()));
        let spec = complete_in_split(&g).unwrap();
        let split = crate::moves::apply_in_split(&g, &spec).unwrap();
        let w = in_split_witness(&g, &spec).unwrap();
        assert!(verify_elementary_sse(&a(), &adjacency_matrix(&split), &w, Roles::BRsASr).unwrap());
    }

    #[test]
    fn out_split_witness_of_g_a() {
        let g = g_a();
        let spec = out_split_from_partition(&g, "w", &[vec!["e"], vec!["f"]], false).unwrap();
        let w = out_split_witness(&g, &spec).unwrap();
        assert_eq!(w.r(), &m(&[&[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(w.s(), &m(&[&[1, 0], &[0, 1], &[2, 0]]));
        let c = m(&[&[1, 1, 0], &[0, 0, 1], &[2, 2, 0]]);
        assert!(verify_elementary_sse(&a(), &c, &w, Roles::ARsBSr).unwrap());
        let w = out_split_witness(&g, &identity_out_split(&g)).unwrap();
        assert_eq!((w.r(), w.s()), (&IntMatrix::identity(2), &a()));
    }

    #[test]
    fn printed_out_split_matrices_under_both_roles() {
        let printed = SseWitness::new(m(&[&[1, 0], &[0, 1], &[2, 0]]), m(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        let c = m(&[&[1, 1, 0], &[0, 0, 1], &[2, 2, 0]]);
        // with A the original and B = C: C = RS and A = SR
        assert!(check_elementary_sse(&a(), &c, &printed, Roles::BRsASr).holds());
        let other = check_elementary_sse(&a(), &c, &printed, Roles::ARsBSr);
        assert!(!other.holds());
        assert!(other.failures[0].shape.is_some());
    }

    #[test]
    fn inflation() {
        let w = SseWitness::new(m(&[&[1]]), m(&[&[1]])).unwrap();
        assert_eq!(bipartite_inflation(&w), m(&[&[0, 1], &[1, 0]]));
        let w = SseWitness::new(m(&[&[2]]), m(&[&[3]])).unwrap();
        let z = bipartite_inflation(&w);
        assert_eq!(&z * &z, m(&[&[6, 0], &[0, 6]]));
        let w = SseWitness::new(m(&[&[1, 0], &[1, 0], &[0, 1]]), m(&[&[1, 0, 1], &[1, 1, 0]])).unwrap();
        let z = bipartite_inflation(&w);
        assert_eq!(z.rows(), 5);
        assert_eq!(&z * &z, b().block_diag(&a()));
    }

    #[test]
    fn trace_sequences() {
        assert_eq!(trace_sequence(&a(), 4).unwrap(), ints(&[1, 5, 7, 17]));
        assert_eq!(trace_sequence(&b(), 2).unwrap(), ints(&[1, 5]));
        assert_eq!(trace_sequence(&IntMatrix::zeros(3, 3), 3).unwrap(), ints(&[0, 0, 0]));
    }

    /// Reference determinant by cofactor expansion over polynomial entries.
    fn cofactor_det(entries: &[Vec<Poly<BigInt>>]) -> Poly<BigInt> {
        let n = entries.len();
        if n == 0 {
            return Poly::new(ints(&[1]));
        }
        let mut total = Poly::new(vec![]);
        for j in 0..n {
            let minor: Vec<Vec<Poly<BigInt>>> = entries[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let term = entries[0][j].mul(&cofactor_det(&minor)).mul(&Poly::new(ints(&[sign])));
            total = total.add(&term);
        }
        total
    }

    fn oracle_char_poly(a: &IntMatrix) -> Poly<BigInt> {
        let rows: Vec<Vec<Poly<BigInt>>> = (0..a.rows())
            .map(|i| {
                (0..a.cols())
                    .map(|j| {
                        let constant = if i == j { BigInt::one() } else { BigInt::zero() };
                        Poly::new(vec![constant, -a.get(i, j).clone()])
                    })
                    .collect()
            })
            .collect();
        cofactor_det(&rows)
    }

    #[test]
    fn char_polys_match_cofactor_oracle() {
        assert_eq!(weighted_char_poly(&a()).unwrap(), Poly::new(ints(&[1, -1, -2])));
        assert_eq!(weighted_char_poly(&b()).unwrap(), Poly::new(ints(&[1, -1, -2])));
        assert_eq!(weighted_char_poly(&IntMatrix::identity(2)).unwrap(), Poly::new(ints(&[1, -2, 1])));
        for mat in [a(), b(), m(&[&[2, 1, 0], &[0, 1, 3], &[1, 1, 1]])] {
            assert_eq!(weighted_char_poly(&mat).unwrap(), oracle_char_poly(&mat));
        }
        assert_eq!(char_poly_display(&a()).unwrap(), "1 - u - 2u^2");
    }

    #[test]
    fn bowen_franks_examples() {
        let bf = bowen_franks(&a()).unwrap();
        assert_eq!((bf.factors.clone(), bf.det_sign), (ints(&[1, 2]), -1));
        let bf_b = bowen_franks(&b()).unwrap();
        assert_eq!((bf_b.factors.clone(), bf_b.det_sign), (ints(&[1, 1, 2]), -1));
        assert!(bf.agrees_with(&bf_b));
        let two = bowen_franks(&m(&[&[2]])).unwrap();
        assert_eq!((two.factors.clone(), two.det_sign), (ints(&[1]), -1));
        let id = bowen_franks(&IntMatrix::identity(2)).unwrap();
        assert_eq!((id.free_rank, id.det_sign), (2, 0));
    }

    #[test]
    fn search_finds_in_split_witness() {
        let out = search_elementary_sse(&a(), &b(), 2, Duration::from_secs(10)).unwrap();
        let SearchOutcome::Found(w) = out else {
            panic!("expected a witness, got {out:?}");
        };
        assert!(verify_elementary_sse(&a(), &b(), &w, Roles::ARsBSr).unwrap());
    }

    #[test]
    fn search_on_equal_matrices_gives_identity() {
        let out = search_elementary_sse(&a(), &a(), 2, Duration::from_secs(10)).unwrap();
        assert_eq!(out, SearchOutcome::Found(SseWitness::new(IntMatrix::identity(2), a()).unwrap()));
    }

    #[test]
    fn search_rejects_by_trace() {
        let out = search_elementary_sse(&m(&[&[2]]), &m(&[&[3]]), 3, Duration::from_secs(1)).unwrap();
        assert_eq!(out, SearchOutcome::Rejected { invariant: "trace sequence".into() });
    }

    #[test]
    fn search_exhausts_and_times_out() {
        // [4] = 2·2 but the bound forbids entries above 1
        let out = search_elementary_sse(&m(&[&[4]]), &m(&[&[4]]), 1, Duration::from_secs(1)).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted);
        let big = m(&[&[3, 3, 3], &[3, 3, 3], &[3, 3, 3]]);
        let out = search_elementary_sse(&big, &big, 9, Duration::ZERO).unwrap();
        assert!(matches!(out, SearchOutcome::Inconclusive { .. } | SearchOutcome::Found(_)));
    }

    #[test]
    fn chains() {
        let g = g_a();
        let spec = in_split_from_partition(&g, "w", &[vec!["e", "h"], vec!["g"]]).unwrap();
        let w = in_split_witness(&g, &spec).unwrap();
        let single = verify_sse_chain(&[ChainStep { matrix: a(), witness: w.clone(), roles: Roles::BRsASr }]);
        assert!(single.passed);
        assert_eq!(single.end, Some(b()));

        let split = crate::moves::apply_in_split(&g, &spec).unwrap();
        let second = crate::moves::diamond_spec(&g, &spec).unwrap();
        let w2 = in_split_witness(&split, &second).unwrap();
        let chain = verify_sse_chain(&[
            ChainStep { matrix: a(), witness: w.clone(), roles: Roles::BRsASr },
            ChainStep { matrix: b(), witness: w2, roles: Roles::BRsASr },
        ]);
        assert!(chain.passed, "{:?}", chain.lines);
        let dual = adjacency_matrix(&crate::graph::dual_graph(&g));
        assert_eq!(weighted_char_poly(&chain.end.unwrap()).unwrap(), weighted_char_poly(&dual).unwrap());

        let broken = verify_sse_chain(&[
            ChainStep { matrix: a(), witness: w.clone(), roles: Roles::BRsASr },
            ChainStep { matrix: a(), witness: w, roles: Roles::BRsASr },
        ]);
        assert!(!broken.passed);
        assert!(broken.lines.iter().any(|l| l.contains("differs from the image of step 1")));
    }
}
