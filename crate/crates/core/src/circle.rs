//! Topological graphs built from circles, in exact rational-angle arithmetic.
//!
//! A point of the circle is stored as an angle `θ ∈ [0, 1)` with `z = e^{2πiθ}`,
//! so `z ↦ ω·z^k` becomes `θ ↦ kθ + angle(ω)`. Equality of points is equality
//! of fractions.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A rational point `e^{2πi p/q}` of the circle, with `0 ≤ p/q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle(Ratio<i64>);

impl RationalAngle {
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::reduce(Ratio::new(p, q))
    }

    pub fn zero() -> Self {
        RationalAngle(Ratio::zero())
    }

    fn reduce(r: Ratio<i64>) -> Self {
        RationalAngle(r - r.floor())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// The angle of `z^k`.
    pub fn scale(self, k: i64) -> Self {
        Self::reduce(self.0 * k)
    }

    /// The angle of some `k`-th root, namely `θ/k`.
    pub fn divide(self, k: i64) -> Self {
        assert!(k != 0, "division by zero exponent");
        Self::reduce(self.0 / k)
    }
}

impl Add for RationalAngle {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::reduce(self.0 + rhs.0)
    }
}

impl Sub for RationalAngle {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::reduce(self.0 - rhs.0)
    }
}

impl Neg for RationalAngle {
    type Output = Self;
    fn neg(self) -> Self {
        Self::reduce(-self.0)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// One component of a circle map: `θ ↦ kθ + ρ` onto component `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapComponent {
    pub target: usize,
    pub exponent: i64,
    pub rotation: RationalAngle,
}

impl MapComponent {
    pub fn new(target: usize, exponent: i64, rotation: RationalAngle) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(MapComponent { target, exponent, rotation })
    }

    pub fn apply(&self, theta: RationalAngle) -> RationalAngle {
        theta.scale(self.exponent) + self.rotation
    }
}

impl fmt::Display for MapComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{}", self.exponent)?;
        if !self.rotation.0.is_zero() {
            write!(f, " rotated by {}", self.rotation)?;
        }
        Ok(())
    }
}

/// A map from a disjoint union of circles, one entry per source component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleMap {
    pub components: Vec<MapComponent>,
}

impl CircleMap {
    pub fn apply(&self, component: usize, theta: RationalAngle) -> (usize, RationalAngle) {
        let c = &self.components[component];
        (c.target, c.apply(theta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleGraph {
    pub vertex_components: usize,
    pub edge_components: usize,
    pub r: CircleMap,
    pub s: CircleMap,
}

impl CircleGraph {
    pub fn new(vertex_components: usize, r: CircleMap, s: CircleMap) -> Result<Self> {
        if r.components.len() != s.components.len() {
            return Err(Error::Circle(format!(
                "range has {} components, source has {}",
                r.components.len(),
                s.components.len()
            )));
        }
        if let Some(c) = r.components.iter().chain(&s.components).find(|c| c.target >= vertex_components) {
            return Err(Error::Circle(format!("target component {} out of range", c.target)));
        }
        Ok(CircleGraph { vertex_components, edge_components: r.components.len(), r, s })
    }
}

impl fmt::Display for CircleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vertex circle(s), {} edge circle(s)", self.vertex_components, self.edge_components)?;
        for (k, (r, s)) in self.r.components.iter().zip(&self.s.components).enumerate() {
            writeln!(f, "  edge circle {k}: r = {r} onto {}, s = {s} onto {}", r.target, s.target)?;
        }
        Ok(())
    }
}

/// `E⁰ = E¹ = 𝕋` with `r(z) = z^m` and `s(z) = z^n`.
pub fn power_circle_graph(m: i64, n: i64) -> Result<CircleGraph> {
    let r = MapComponent::new(0, m, RationalAngle::zero())?;
    let s = MapComponent::new(0, n, RationalAngle::zero())?;
    CircleGraph::new(1, CircleMap { components: vec![r] }, CircleMap { components: vec![s] })
}

pub fn component_count(k1: i64, k2: i64) -> Result<usize> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(k1.unsigned_abs().gcd(&k2.unsigned_abs()) as usize)
}

/// Which coordinate carries the root-of-unity offsets that separate the
/// components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetSide {
    First,
    Second,
}

/// `{(θ₁, θ₂) : k₁θ₁ + ω₁ = k₂θ₂ + ω₂}` as `d = gcd(|k₁|, |k₂|)` circles.
/// Component `ℓ` is `t ↦ (b₁ + q₂t, b₂ + q₁t)` with `kᵢ = d·qᵢ` and base
/// point `bases[ℓ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibredProduct {
    pub first: MapComponent,
    pub second: MapComponent,
    pub d: i64,
    pub q1: i64,
    pub q2: i64,
    pub bases: Vec<(RationalAngle, RationalAngle)>,
}

impl FibredProduct {
    pub fn point(&self, component: usize, t: RationalAngle) -> (RationalAngle, RationalAngle) {
        let (b1, b2) = self.bases[component];
        (b1 + t.scale(self.q2), b2 + t.scale(self.q1))
    }

    pub fn contains(&self, p: (RationalAngle, RationalAngle)) -> bool {
        self.first.apply(p.0) == self.second.apply(p.1)
    }

    pub fn components(&self) -> usize {
        self.bases.len()
    }
}

/// Base points: `θ₁ = (ω₂ − ω₁)/k₁`, `θ₂ = 0` solves the equation, and the
/// offsets `ℓ/|k|` for `ℓ < d` on the chosen side pick one point from each
/// component.
pub fn fibred_product(first: MapComponent, second: MapComponent, side: OffsetSide) -> Result<FibredProduct> {
    if first.target != second.target {
        return Err(Error::Circle("the two maps land on different components".into()));
    }
    let d = component_count(first.exponent, second.exponent)? as i64;
    let base = ((second.rotation - first.rotation).divide(first.exponent), RationalAngle::zero());
    let bases = (0..d)
        .map(|l| match side {
            OffsetSide::First => (base.0 + RationalAngle::new(l, first.exponent.abs()), base.1),
            OffsetSide::Second => (base.0, base.1 + RationalAngle::new(l, second.exponent.abs())),
        })
        .collect();
    let fp = FibredProduct {
        first,
        second,
        d,
        q1: first.exponent / d,
        q2: second.exponent / d,
        bases,
    };
    if let Some(l) = (0..fp.components()).find(|&l| !fp.contains(fp.bases[l])) {
        return Err(Error::Internal(format!("base point {l} misses the fibred product")));
    }
    Ok(fp)
}

/// Outcome of the grid oracle: all `(i/Q, j/Q)` solving the equation,
/// compared with the parametrised points on the same grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridReport {
    pub q: i64,
    pub solutions: usize,
    pub components: usize,
    pub uncovered: Vec<(RationalAngle, RationalAngle)>,
    pub repeated: Vec<(RationalAngle, RationalAngle)>,
    pub off_equation: Vec<(RationalAngle, RationalAngle)>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty() && self.repeated.is_empty() && self.off_equation.is_empty()
    }
}

impl fmt::Display for GridReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "grid Q={}: {status} ({} solutions, {} components)",
            self.q, self.solutions, self.components
        )?;
        let show = |f: &mut fmt::Formatter<'_>, what: &str, pts: &[(RationalAngle, RationalAngle)]| {
            if let Some((a, b)) = pts.first() {
                writeln!(f, "  {} {what}, first ({a}, {b})", pts.len())?;
            }
            Ok(())
        };
        show(f, "uncovered", &self.uncovered)?;
        show(f, "hit more than once", &self.repeated)?;
        show(f, "off the equation", &self.off_equation)
    }
}

/// Enumerate every grid pair with denominators dividing `q` and check that
/// each solution is hit by exactly one `(component, t)` and that every
/// parametrised point solves the equation.
pub fn verify_parametrization(fp: &FibredProduct, q: i64) -> Result<GridReport> {
    if q <= 0 {
        return Err(Error::Circle(format!("grid denominator must be positive, got {q}")));
    }
    let mut solutions = Vec::new();
    for i in 0..q {
        for j in 0..q {
            let p = (RationalAngle::new(i, q), RationalAngle::new(j, q));
            if fp.contains(p) {
                solutions.push(p);
            }
        }
    }
    // a grid point on component ℓ has parameter with denominator dividing
    // lcm(q, denominators of the base point)
    let on_grid = |a: RationalAngle| q % a.denom() == 0;
    let mut hits: HashMap<(RationalAngle, RationalAngle), usize> = HashMap::new();
    let mut off_equation = Vec::new();
    for (l, &(b1, b2)) in fp.bases.iter().enumerate() {
        let n = q.lcm(&b1.denom()).lcm(&b2.denom());
        for k in 0..n {
            let p = fp.point(l, RationalAngle::new(k, n));
            if !fp.contains(p) {
                off_equation.push(p);
            }
            if on_grid(p.0) && on_grid(p.1) {
                *hits.entry(p).or_default() += 1;
            }
        }
    }
    let uncovered = solutions.iter().filter(|p| !hits.contains_key(p)).copied().collect();
    let mut repeated: Vec<_> = hits.iter().filter(|(_, &c)| c > 1).map(|(p, _)| *p).collect();
    repeated.sort();
    off_equation.sort();
    Ok(GridReport {
        q,
        solutions: solutions.len(),
        components: fp.components(),
        uncovered,
        repeated,
        off_equation,
    })
}

/// The two presentations of an in-split edge space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// Offsets by a `|b|`-th root on the vertex coordinate.
    Pi,
    /// Offsets by an `|n|`-th root on the edge coordinate.
    PiPrime,
}

/// A split of a one-component circle graph, with the edge space presented as
/// a fibred product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSplit {
    pub graph: CircleGraph,
    pub product: FibredProduct,
    /// `ψ: E¹ → E⁰_split` and `α: E⁰_split → E⁰`.
    pub psi: MapComponent,
    pub alpha: MapComponent,
}

fn one_component(e: &CircleGraph) -> Result<(MapComponent, MapComponent)> {
    if e.vertex_components != 1 || e.edge_components != 1 {
        return Err(Error::Circle("splits are implemented for one-component graphs".into()));
    }
    Ok((e.r.components[0], e.s.components[0]))
}

/// In-split with `ψ(z) = z^a` and `α(z) = ω z^b`, where `r(z) = ω z^m`,
/// `m = ab`. The edge space is `{(e, v) : s(e) = α(v)}`; on component `ℓ`,
/// `r_I = ψ(e)` and `s_I = v`.
pub fn circle_in_split(e: &CircleGraph, a: i64, b: i64, presentation: Presentation) -> Result<CircleSplit> {
    let (r, s) = one_component(e)?;
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    if a * b != r.exponent {
        return Err(Error::Circle(format!("a·b = {} but m = {}", a * b, r.exponent)));
    }
    let psi = MapComponent::new(0, a, RationalAngle::zero())?;
    let alpha = MapComponent::new(0, b, r.rotation)?;
    let side = match presentation {
        Presentation::Pi => OffsetSide::Second,
        Presentation::PiPrime => OffsetSide::First,
    };
    let product = fibred_product(s, alpha, side)?;
    let mut r_i = Vec::new();
    let mut s_i = Vec::new();
    for &(b1, b2) in &product.bases {
        // edge coordinate b1 + q_b t, vertex coordinate b2 + q_n t
        r_i.push(MapComponent::new(0, a * product.q2, psi.apply(b1))?);
        s_i.push(MapComponent::new(0, product.q1, b2)?);
    }
    let graph = CircleGraph::new(1, CircleMap { components: r_i }, CircleMap { components: s_i })?;
    Ok(CircleSplit { graph, product, psi, alpha })
}

/// Out-split with `ψ(z) = z^a` and `α(z) = ω z^b`, where `s(z) = ω z^n`,
/// `n = ab`. The edge space is `{(v, e) : α(v) = r(e)}` with offsets by a
/// `|b|`-th root on `v`; `r_O = v` and `s_O = ψ(e)`.
pub fn circle_out_split(e: &CircleGraph, a: i64, b: i64) -> Result<CircleSplit> {
    let (r, s) = one_component(e)?;
    if a == 0 || b == 0 {
        return Err(Error::ZeroExponent);
    }
    if a * b != s.exponent {
        return Err(Error::Circle(format!("a·b = {} but n = {}", a * b, s.exponent)));
    }
    let psi = MapComponent::new(0, a, RationalAngle::zero())?;
    let alpha = MapComponent::new(0, b, s.rotation)?;
    let product = fibred_product(alpha, r, OffsetSide::First)?;
    let mut r_o = Vec::new();
    let mut s_o = Vec::new();
    for &(b1, b2) in &product.bases {
        // vertex coordinate b1 + q_m t, edge coordinate b2 + q_b t
        r_o.push(MapComponent::new(0, product.q2, b1)?);
        s_o.push(MapComponent::new(0, a * product.q1, psi.apply(b2))?);
    }
    let graph = CircleGraph::new(1, CircleMap { components: r_o }, CircleMap { components: s_o })?;
    Ok(CircleSplit { graph, product, psi, alpha })
}

/// Check the split identities on every grid parameter `k/q` of every
/// component: the parametrised pair lies in the fibred product, the new range
/// and source maps agree with the coordinates, and `α∘ψ` recovers the split
/// map. Returns the first failure.
pub fn verify_split_identities(e: &CircleGraph, split: &CircleSplit, out: bool, q: i64) -> Option<String> {
    let (r, s) = (e.r.components[0], e.s.components[0]);
    for l in 0..split.product.components() {
        for k in 0..q {
            let t = RationalAngle::new(k, q);
            let (x, y) = split.product.point(l, t);
            if !split.product.contains((x, y)) {
                return Some(format!("component {l} at t={t} leaves the fibred product"));
            }
            let new_r = split.graph.r.components[l].apply(t);
            let new_s = split.graph.s.components[l].apply(t);
            let (edge, expected_r, expected_s) = if out {
                (y, x, split.psi.apply(y))
            } else {
                (x, split.psi.apply(x), y)
            };
            if new_r != expected_r || new_s != expected_s {
                return Some(format!("component {l} at t={t}: maps disagree with coordinates"));
            }
            let composite = split.alpha.apply(split.psi.apply(edge));
            let factored = if out { s.apply(edge) } else { r.apply(edge) };
            if composite != factored {
                return Some(format!("α∘ψ differs from the split map at {edge}"));
            }
        }
    }
    None
}

/// Match each `π′` component with a `π` component and a parameter shift
/// `c` such that `π′_ℓ(t) = π_{ℓ'}(t + c)` for all `t`, and check that the
/// range and source maps transform accordingly. Returns `(ℓ', c)` per `ℓ`.
pub fn presentation_isomorphism(pi: &CircleSplit, pi_prime: &CircleSplit) -> Result<Vec<(usize, RationalAngle)>> {
    let (p, pp) = (&pi.product, &pi_prime.product);
    if (p.q1, p.q2, p.d) != (pp.q1, pp.q2, pp.d) {
        return Err(Error::Circle("presentations of different fibred products".into()));
    }
    // the shift solves two congruences with denominators dividing this
    let n = pp.bases.iter().chain(&p.bases).fold(1i64, |acc, (x, y)| acc.lcm(&x.denom()).lcm(&y.denom()))
        * p.q1.abs()
        * p.q2.abs();
    let mut matching = Vec::new();
    let mut used = vec![false; p.components()];
    for l in 0..pp.components() {
        let target = pp.point(l, RationalAngle::zero());
        let found = (0..p.components())
            .flat_map(|m| (0..n).map(move |k| (m, RationalAngle::new(k, n))))
            .find(|&(m, c)| p.point(m, c) == target);
        let Some((m, c)) = found else {
            return Err(Error::Circle(format!("component {l} of π′ is not a component of π")));
        };
        if std::mem::replace(&mut used[m], true) {
            return Err(Error::Circle(format!("two components of π′ land on component {m} of π")));
        }
        for (name, mp, mpp) in [("r", &pi.graph.r, &pi_prime.graph.r), ("s", &pi.graph.s, &pi_prime.graph.s)] {
            let (a, b) = (mp.components[m], mpp.components[l]);
            if a.exponent != b.exponent || a.apply(c) != b.rotation {
                return Err(Error::Circle(format!("{name} differs between presentations on component {l}")));
            }
        }
        matching.push((m, c));
    }
    Ok(matching)
}

/// A claimed exponent for the new range or source map, compared with the
/// computed one on every component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentClaim {
    pub map: &'static str,
    pub claimed: i64,
    pub computed: Vec<i64>,
}

impl ExponentClaim {
    pub fn holds(&self) -> bool {
        self.computed.iter().all(|&k| k == self.claimed)
    }
}

impl fmt::Display for ExponentClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let computed: Vec<String> = self.computed.iter().map(ToString::to_string).collect();
        if self.holds() {
            write!(f, "claimed {} exponent {}: agrees", self.map, self.claimed)
        } else {
            write!(
                f,
                "claimed {} exponent {}: DISCREPANCY, computed [{}]",
                self.map,
                self.claimed,
                computed.join(", ")
            )
        }
    }
}

pub fn check_claimed_exponents(g: &CircleGraph, claim_r: Option<i64>, claim_s: Option<i64>) -> Vec<ExponentClaim> {
    let mut out = Vec::new();
    for (map, claimed, m) in [("r", claim_r, &g.r), ("s", claim_s, &g.s)] {
        if let Some(claimed) = claimed {
            out.push(ExponentClaim {
                map,
                claimed,
                computed: m.components.iter().map(|c| c.exponent).collect(),
            });
        }
    }
    out
}

fn push_check(lines: &mut Vec<String>, name: &str, failure: Option<String>) -> bool {
    match failure {
        None => {
            lines.push(format!("  PASS {name}"));
            true
        }
        Some(why) => {
            lines.push(format!("  FAIL {name}: {why}"));
            false
        }
    }
}

/// Plain-text report for one `(m, n, a, b)`: component counts, the maps of
/// every split that applies, grid verification, the isomorphism between the
/// two in-split presentations, and any claimed exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleReport {
    pub lines: Vec<String>,
    pub passed: bool,
}

impl fmt::Display for CircleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn circle_report(
    m: i64,
    n: i64,
    a: i64,
    b: i64,
    q: i64,
    claim_r: Option<i64>,
    claim_s: Option<i64>,
) -> Result<CircleReport> {
    let e = power_circle_graph(m, n)?;
    let mut lines = vec![format!("circle graph r(z) = z^{m}, s(z) = z^{n}")];
    let mut passed = true;
    let mut applied = false;
    if a * b == m {
        applied = true;
        let pi = circle_in_split(&e, a, b, Presentation::Pi)?;
        let pi_prime = circle_in_split(&e, a, b, Presentation::PiPrime)?;
        lines.push(format!(
            "in-split a={a} b={b}: {} edge circle(s), gcd(n,b) = {}",
            pi.graph.edge_components,
            component_count(n, b)?
        ));
        for (name, split) in [("π", &pi), ("π′", &pi_prime)] {
            lines.push(format!("  presentation {name}:"));
            for (l, (r, s)) in split.graph.r.components.iter().zip(&split.graph.s.components).enumerate() {
                lines.push(format!("    component {l}: r_I = {r}, s_I = {s}"));
            }
        }
        let grid = verify_parametrization(&pi.product, q)?;
        lines.push(format!("  {}", grid.to_string().trim_end().replace('\n', "\n  ")));
        passed &= grid.passed();
        passed &= push_check(&mut lines, "split identities", verify_split_identities(&e, &pi, false, q));
        passed &= push_check(&mut lines, "split identities (π′)", verify_split_identities(&e, &pi_prime, false, q));
        passed &= push_check(
            &mut lines,
            "π and π′ present the same graph",
            presentation_isomorphism(&pi, &pi_prime).err().map(|e| e.to_string()),
        );
        let d = component_count(n, b)? as i64;
        passed &= push_check(
            &mut lines,
            "degree bookkeeping d·(n/d) = n",
            (d * (n / d) != n).then(|| format!("{d}·{} ≠ {n}", n / d)),
        );
        for claim in check_claimed_exponents(&pi.graph, claim_r, claim_s) {
            passed &= claim.holds();
            lines.push(format!("  {claim}"));
        }
    }
    if a * b == n {
        applied = true;
        let split = circle_out_split(&e, a, b)?;
        lines.push(format!(
            "out-split a={a} b={b}: {} edge circle(s), gcd(m,b) = {}",
            split.graph.edge_components,
            component_count(m, b)?
        ));
        for (l, (r, s)) in split.graph.r.components.iter().zip(&split.graph.s.components).enumerate() {
            lines.push(format!("    component {l}: r_O = {r}, s_O = {s}"));
        }
        let grid = verify_parametrization(&split.product, q)?;
        lines.push(format!("  {}", grid.to_string().trim_end().replace('\n', "\n  ")));
        passed &= grid.passed();
        passed &= push_check(&mut lines, "split identities", verify_split_identities(&e, &split, true, q));
    }
    if !applied {
        return Err(Error::Circle(format!("a·b = {} matches neither m = {m} nor n = {n}", a * b)));
    }
    Ok(CircleReport { lines, passed })
}
