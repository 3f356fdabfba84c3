//! Combinatorial triangulations of decorated marked surfaces.
//!
//! A triangulation is a list of triangles, each with three sides listed
//! clockwise and one decoration. A side is either an arc (shared by exactly
//! two side slots) or a boundary segment (used once). Gluing always reverses
//! orientation, so corners can be identified from the side lists alone.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qp::{validate_surface_qp, Arrow, Qp, Term};
use crate::word::GenSym;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("unknown arc {0}")]
    UnknownArc(String),
    #[error("arc {0} is not shared by two distinct triangles")]
    SelfFolded(String),
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("no triangulation found for signature {0}")]
    NotFound(String),
}

/// Genus and the number of marked points on each boundary component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub boundary: Vec<u32>,
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, boundary={:?})", self.genus, self.boundary)
    }
}

impl SurfaceSignature {
    pub fn new(genus: u32, boundary: Vec<u32>) -> Result<Self, SurfaceError> {
        let s = SurfaceSignature { genus, boundary };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<(), SurfaceError> {
        if self.boundary.is_empty() {
            return Err(SurfaceError::BadSignature(
                "at least one boundary component is required".into(),
            ));
        }
        if self.boundary.contains(&0) {
            return Err(SurfaceError::BadSignature(
                "every boundary component needs a marked point".into(),
            ));
        }
        if self.arc_count() < 1 {
            return Err(SurfaceError::BadSignature(format!(
                "{self} has n = {} < 1 arcs",
                self.arc_count()
            )));
        }
        Ok(())
    }

    pub fn boundary_components(&self) -> u32 {
        self.boundary.len() as u32
    }

    pub fn marked(&self) -> u32 {
        self.boundary.iter().sum()
    }

    /// `n = 6g + 3b + |M| − 6`.
    pub fn arc_count(&self) -> i64 {
        6 * self.genus as i64 + 3 * self.boundary.len() as i64 + self.marked() as i64 - 6
    }

    /// `ℵ = (2n + |M|) / 3`, the number of triangles and of decorations.
    pub fn decorations(&self) -> i64 {
        (2 * self.arc_count() + self.marked() as i64) / 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "arc")]
    Arc(GenSym),
    #[serde(rename = "bnd")]
    Bnd(String),
}

impl Side {
    pub fn arc(&self) -> Option<&GenSym> {
        match self {
            Side::Arc(a) => Some(a),
            Side::Bnd(_) => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Arc(a) => write!(f, "{a}"),
            Side::Bnd(e) => write!(f, "[{e}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub sides: [Side; 3],
    pub dec: u32,
}

impl Triangle {
    fn rotated_to_least(&self) -> Triangle {
        let best = (0..3)
            .min_by_key(|&i| {
                [
                    self.sides[i].clone(),
                    self.sides[(i + 1) % 3].clone(),
                    self.sides[(i + 2) % 3].clone(),
                ]
            })
            .unwrap_or(0);
        Triangle {
            sides: [
                self.sides[best].clone(),
                self.sides[(best + 1) % 3].clone(),
                self.sides[(best + 2) % 3].clone(),
            ],
            dec: self.dec,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedTriangulation {
    pub genus: u32,
    pub boundary: Vec<u32>,
    pub decorations: u32,
    pub triangles: Vec<Triangle>,
}

impl DecoratedTriangulation {
    pub fn signature(&self) -> SurfaceSignature {
        SurfaceSignature {
            genus: self.genus,
            boundary: self.boundary.clone(),
        }
    }

    /// Triangles sorted by decoration, each rotated to its least side.
    pub fn canonical(&self) -> DecoratedTriangulation {
        let mut triangles: Vec<Triangle> = self.triangles.iter().map(Triangle::rotated_to_least).collect();
        triangles.sort_by_key(|t| t.dec);
        DecoratedTriangulation {
            triangles,
            ..self.clone()
        }
    }

    pub fn arcs(&self) -> BTreeSet<GenSym> {
        self.triangles
            .iter()
            .flat_map(|t| t.sides.iter().filter_map(Side::arc).cloned())
            .collect()
    }

    pub fn boundary_segments(&self) -> BTreeSet<String> {
        self.triangles
            .iter()
            .flat_map(|t| {
                t.sides.iter().filter_map(|s| match s {
                    Side::Bnd(e) => Some(e.clone()),
                    Side::Arc(_) => None,
                })
            })
            .collect()
    }

    /// The two side slots `(triangle index, side index)` holding `arc`.
    fn slots(&self, arc: &GenSym) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (si, s) in t.sides.iter().enumerate() {
                if s.arc() == Some(arc) {
                    out.push((ti, si));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical()).expect("serializable")
    }
}

/// Counts and diagnostics for a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountsReport {
    pub arcs: usize,
    pub triangles: usize,
    pub marked: usize,
    pub euler_defect: i64,
    pub diagnostics: Vec<String>,
}

impl CountsReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Check the count, Euler, gluing and connectivity invariants.
pub fn validate_triangulation(t: &DecoratedTriangulation) -> CountsReport {
    let mut diagnostics = Vec::new();
    let sig = t.signature();
    if let Err(e) = sig.check() {
        diagnostics.push(e.to_string());
    }
    let mut arc_uses: BTreeMap<&GenSym, usize> = BTreeMap::new();
    let mut bnd_uses: BTreeMap<&str, usize> = BTreeMap::new();
    for tri in &t.triangles {
        for s in &tri.sides {
            match s {
                Side::Arc(a) => *arc_uses.entry(a).or_insert(0) += 1,
                Side::Bnd(e) => *bnd_uses.entry(e).or_insert(0) += 1,
            }
        }
        let arcs: Vec<_> = tri.sides.iter().filter_map(Side::arc).collect();
        let distinct: BTreeSet<_> = arcs.iter().collect();
        if distinct.len() != arcs.len() {
            diagnostics.push(format!("triangle {} uses an arc twice (self-folded)", tri.dec));
        }
    }
    for (a, n) in &arc_uses {
        if *n != 2 {
            diagnostics.push(format!("arc {a} occurs {n} times, expected 2"));
        }
    }
    for (e, n) in &bnd_uses {
        if *n != 1 {
            diagnostics.push(format!("boundary segment {e} occurs {n} times, expected 1"));
        }
    }
    let n = arc_uses.len();
    let aleph = t.triangles.len();
    let marked = bnd_uses.len();
    if n as i64 != sig.arc_count() {
        diagnostics.push(format!("{n} arcs, expected {}", sig.arc_count()));
    }
    if aleph as i64 != sig.decorations() || t.decorations as i64 != sig.decorations() {
        diagnostics.push(format!(
            "{aleph} triangles and {} decorations declared, expected {}",
            t.decorations,
            sig.decorations()
        ));
    }
    if marked as u32 != sig.marked() {
        diagnostics.push(format!("{marked} boundary segments, expected {}", sig.marked()));
    }
    let decs: BTreeSet<u32> = t.triangles.iter().map(|x| x.dec).collect();
    let expected: BTreeSet<u32> = (1..=aleph as u32).collect();
    if decs != expected || decs.len() != aleph {
        diagnostics.push("decorations must be 1..ℵ, each used once".into());
    }
    let euler_defect = (aleph as i64 - n as i64) - (2 - 2 * sig.genus as i64 - sig.boundary.len() as i64);
    if euler_defect != 0 {
        diagnostics.push(format!("Euler defect {euler_defect}"));
    }
    if diagnostics.is_empty() {
        diagnostics.extend(gluing_diagnostics(t));
    }
    CountsReport {
        arcs: n,
        triangles: aleph,
        marked,
        euler_defect,
        diagnostics,
    }
}

/// Connectivity, vertex count and boundary structure, computed from the gluing.
fn gluing_diagnostics(t: &DecoratedTriangulation) -> Vec<String> {
    let mut out = Vec::new();
    let k = t.triangles.len();
    // triangle adjacency
    let mut tri_uf = UnionFind::new(k);
    // corner (ti, i) is the start of side i
    let mut corner_uf = UnionFind::new(3 * k);
    let mut seen: BTreeMap<GenSym, (usize, usize)> = BTreeMap::new();
    for (ti, tri) in t.triangles.iter().enumerate() {
        for (si, s) in tri.sides.iter().enumerate() {
            if let Side::Arc(a) = s {
                if let Some(&(uj, sj)) = seen.get(a) {
                    tri_uf.union(ti, uj);
                    corner_uf.union(3 * ti + si, 3 * uj + (sj + 1) % 3);
                    corner_uf.union(3 * ti + (si + 1) % 3, 3 * uj + sj);
                } else {
                    seen.insert(a.clone(), (ti, si));
                }
            }
        }
    }
    let roots: BTreeSet<usize> = (0..k).map(|i| tri_uf.find(i)).collect();
    if roots.len() > 1 {
        out.push(format!("gluing graph has {} components", roots.len()));
    }
    let vertices: BTreeSet<usize> = (0..3 * k).map(|c| corner_uf.find(c)).collect();
    let sig = t.signature();
    if vertices.len() as u32 != sig.marked() {
        out.push(format!(
            "{} vertices after gluing, expected {} marked points",
            vertices.len(),
            sig.marked()
        ));
        return out;
    }
    // boundary cycles: follow segments from vertex to vertex
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for (ti, tri) in t.triangles.iter().enumerate() {
        for (si, s) in tri.sides.iter().enumerate() {
            if let Side::Bnd(_) = s {
                let from = corner_uf.find(3 * ti + si);
                let to = corner_uf.find(3 * ti + (si + 1) % 3);
                if next.insert(from, to).is_some() {
                    out.push("a marked point starts two boundary segments".into());
                    return out;
                }
            }
        }
    }
    if next.len() != vertices.len() {
        out.push("some vertex is not on the boundary (puncture)".into());
        return out;
    }
    let mut lengths = Vec::new();
    let mut visited = BTreeSet::new();
    for &v in next.keys() {
        if visited.contains(&v) {
            continue;
        }
        let mut len = 0;
        let mut cur = v;
        while visited.insert(cur) {
            len += 1;
            cur = match next.get(&cur) {
                Some(&c) => c,
                None => break,
            };
        }
        lengths.push(len as u32);
    }
    lengths.sort_unstable();
    let mut want = sig.boundary.clone();
    want.sort_unstable();
    if lengths != want {
        out.push(format!(
            "boundary components carry {lengths:?} marked points, expected {want:?}"
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipDirection {
    Backward,
    Forward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipResult {
    pub new_triangulation: DecoratedTriangulation,
    pub new_arc: GenSym,
    pub quad: [Side; 4],
}

/// Replace `arc` by the other diagonal of its quadrilateral. The new arc keeps
/// the old name, so arcs stay in bijection with quiver vertices.
pub fn flip(t: &DecoratedTriangulation, arc: &GenSym, direction: FlipDirection) -> Result<FlipResult, SurfaceError> {
    let slots = t.slots(arc);
    if slots.is_empty() {
        return Err(SurfaceError::UnknownArc(arc.to_string()));
    }
    if slots.len() != 2 || slots[0].0 == slots[1].0 {
        return Err(SurfaceError::SelfFolded(arc.to_string()));
    }
    let (t1, i1) = slots[0];
    let (t2, i2) = slots[1];
    let s1 = &t.triangles[t1].sides;
    let s2 = &t.triangles[t2].sides;
    // t1 = (γ, p, q) and t2 = (γ, r, s), both clockwise
    let p = s1[(i1 + 1) % 3].clone();
    let q = s1[(i1 + 2) % 3].clone();
    let r = s2[(i2 + 1) % 3].clone();
    let s = s2[(i2 + 2) % 3].clone();
    let (d1, d2) = (t.triangles[t1].dec, t.triangles[t2].dec);
    // The decoration of t1 sits in the quadrant shared with the triangle
    // (q, r, γ) after a clockwise rotation, and with (s, p, γ) after an
    // anticlockwise one.
    let (dx, dy) = match direction {
        FlipDirection::Backward => (d1, d2),
        FlipDirection::Forward => (d2, d1),
    };
    let gamma = Side::Arc(arc.clone());
    let mut triangles = t.triangles.clone();
    triangles[t1] = Triangle {
        sides: [q.clone(), r.clone(), gamma.clone()],
        dec: dx,
    };
    triangles[t2] = Triangle {
        sides: [s.clone(), p.clone(), gamma],
        dec: dy,
    };
    let new_triangulation = DecoratedTriangulation { triangles, ..t.clone() }.canonical();
    Ok(FlipResult {
        new_triangulation,
        new_arc: arc.clone(),
        quad: [p, q, r, s],
    })
}

/// The quiver with potential of a triangulation: one vertex per arc, an arrow
/// `i → j` whenever `j` follows `i` clockwise in a triangle, and one 3-cycle
/// per triangle whose sides are all arcs.
pub fn qp_from_triangulation(t: &DecoratedTriangulation) -> Result<Qp, SurfaceError> {
    let report = validate_triangulation(t);
    if !report.is_valid() {
        return Err(SurfaceError::Invalid(report.diagnostics.join("; ")));
    }
    let mut arrows = Vec::new();
    let mut potential = Vec::new();
    for tri in &t.triangles {
        let mut ids = Vec::new();
        for i in 0..3 {
            if let (Some(x), Some(y)) = (tri.sides[i].arc(), tri.sides[(i + 1) % 3].arc()) {
                let id = format!("{x}>{y}@{}", tri.dec);
                arrows.push(Arrow {
                    id: id.clone(),
                    src: x.clone(),
                    tgt: y.clone(),
                });
                ids.push(id);
            }
        }
        if ids.len() == 3 {
            potential.push(Term { coef: 1, cycle: ids });
        }
    }
    let qp = Qp::new(t.arcs(), arrows, potential).map_err(|e| SurfaceError::Invalid(e.to_string()))?;
    let diags = validate_surface_qp(&qp);
    if !diags.is_empty() {
        let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(SurfaceError::Invalid(text.join("; ")));
    }
    Ok(qp)
}

/// Decorations of the two triangles on either side of `arc`, smaller first.
pub fn dual_endpoints(t: &DecoratedTriangulation, arc: &GenSym) -> Result<(u32, u32), SurfaceError> {
    let slots = t.slots(arc);
    if slots.is_empty() {
        return Err(SurfaceError::UnknownArc(arc.to_string()));
    }
    if slots.len() != 2 || slots[0].0 == slots[1].0 {
        return Err(SurfaceError::SelfFolded(arc.to_string()));
    }
    let a = t.triangles[slots[0].0].dec;
    let b = t.triangles[slots[1].0].dec;
    Ok((a.min(b), a.max(b)))
}

#[derive(Clone, Debug)]
enum PolySide {
    Bnd(String),
    Glued(usize),
}

/// The cut-open polygon: boundary segments of the first component, then a
/// commutator block `a b a⁻¹ b⁻¹` per handle, then `c ∂ c⁻¹` per further
/// boundary component, where `c` joins it to the first component.
fn polygon(sig: &SurfaceSignature) -> (Vec<PolySide>, usize) {
    let mut sides = Vec::new();
    let mut seg = 0;
    let mut bnd = |sides: &mut Vec<PolySide>, count: u32| {
        for _ in 0..count {
            seg += 1;
            sides.push(PolySide::Bnd(format!("e{seg}")));
        }
    };
    bnd(&mut sides, sig.boundary[0]);
    let mut glued = 0;
    for _ in 0..sig.genus {
        let (a, b) = (glued, glued + 1);
        glued += 2;
        sides.extend([
            PolySide::Glued(a),
            PolySide::Glued(b),
            PolySide::Glued(a),
            PolySide::Glued(b),
        ]);
    }
    for &m in &sig.boundary[1..] {
        let c = glued;
        glued += 1;
        sides.push(PolySide::Glued(c));
        bnd(&mut sides, m);
        sides.push(PolySide::Glued(c));
    }
    (sides, glued)
}

fn fan(sig: &SurfaceSignature, apex: usize) -> DecoratedTriangulation {
    let (poly, glued) = polygon(sig);
    let n = poly.len();
    let diagonals = n - 3;
    let arc_name = |i: usize| GenSym::new(&format!("g{i}")).expect("valid name");
    let side = |k: usize| match &poly[k % n] {
        PolySide::Bnd(e) => Side::Bnd(e.clone()),
        PolySide::Glued(c) => Side::Arc(arc_name(diagonals + c + 1)),
    };
    let _ = glued;
    let mut triangles = Vec::new();
    for i in 1..=n - 2 {
        let first = if i == 1 { side(apex) } else { Side::Arc(arc_name(i - 1)) };
        let last = if i == n - 2 {
            side(apex + n - 1)
        } else {
            Side::Arc(arc_name(i))
        };
        triangles.push(Triangle {
            sides: [first, side(apex + i), last],
            dec: i as u32,
        });
    }
    DecoratedTriangulation {
        genus: sig.genus,
        boundary: sig.boundary.clone(),
        decorations: (n - 2) as u32,
        triangles,
    }
}

fn acceptable(t: &DecoratedTriangulation, need_simple: bool) -> bool {
    if !validate_triangulation(t).is_valid() {
        return false;
    }
    match qp_from_triangulation(t) {
        Ok(qp) => !need_simple || !has_double_arrows(&qp),
        Err(_) => false,
    }
}

pub fn has_double_arrows(qp: &Qp) -> bool {
    let mut seen = BTreeSet::new();
    qp.arrows().iter().any(|a| !seen.insert((a.src.clone(), a.tgt.clone())))
}

/// A deterministic triangulation for any valid signature.
///
/// The surface is cut open into a polygon (see [`polygon`]) and the polygon is
/// fanned from its first vertex. For a disk this is the usual fan from `M1`.
/// When the quiver must avoid double arrows (ℵ ≥ 4) and no fan apex achieves
/// that, the flip graph is searched breadth-first from the first fan.
pub fn canonical_triangulation(sig: &SurfaceSignature) -> Result<DecoratedTriangulation, SurfaceError> {
    sig.check()?;
    let need_simple = sig.decorations() >= 4;
    let (poly, _) = polygon(sig);
    for apex in 0..poly.len() {
        let t = fan(sig, apex);
        if acceptable(&t, need_simple) {
            return Ok(t.canonical());
        }
    }
    let start = fan(sig, 0).canonical();
    if !validate_triangulation(&start).is_valid() {
        return Err(SurfaceError::NotFound(sig.to_string()));
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        if acceptable(&t, need_simple) {
            return Ok(t);
        }
        if seen.len() > 20_000 {
            break;
        }
        for arc in t.arcs() {
            if let Ok(f) = flip(&t, &arc, FlipDirection::Backward) {
                if seen.insert(f.new_triangulation.clone()) {
                    queue.push_back(f.new_triangulation);
                }
            }
        }
    }
    Err(SurfaceError::NotFound(sig.to_string()))
}

/// Every signature with `1 ≤ n ≤ max_arcs`, boundary vectors non-increasing.
pub fn signatures_up_to(max_arcs: i64) -> Vec<SurfaceSignature> {
    fn partitions(total: u32, parts: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in (1..=max.min(total)).rev() {
            prefix.push(first);
            partitions(total - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for genus in 0..=((max_arcs + 6) / 6) as u32 {
        for b in 1..=((max_arcs + 6) / 3) as u32 {
            for m in b..=(max_arcs + 6) as u32 {
                let mut vs = Vec::new();
                partitions(m, b, m, &mut Vec::new(), &mut vs);
                for boundary in vs {
                    let s = SurfaceSignature { genus, boundary };
                    if s.arc_count() >= 1 && s.arc_count() <= max_arcs {
                        out.push(s);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All triangulations reachable from `start` by at most `depth` flips in
/// either direction, in breadth-first order.
pub fn flip_neighborhood(start: &DecoratedTriangulation, depth: usize) -> Vec<DecoratedTriangulation> {
    let start = start.canonical();
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut order = vec![start];
    let mut frontier = 0;
    for _ in 0..depth {
        let end = order.len();
        for i in frontier..end {
            let t = order[i].clone();
            for arc in t.arcs() {
                for dir in [FlipDirection::Backward, FlipDirection::Forward] {
                    if let Ok(f) = flip(&t, &arc, dir) {
                        if seen.insert(f.new_triangulation.clone()) {
                            order.push(f.new_triangulation);
                        }
                    }
                }
            }
        }
        frontier = end;
    }
    order
}

impl PartialOrd for DecoratedTriangulation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DecoratedTriangulation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.genus, &self.boundary, self.decorations, &self.triangles).cmp(&(
            other.genus,
            &other.boundary,
            other.decorations,
            &other.triangles,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::{equal_up_to_arrow_renaming, mutate};

    fn g(s: &str) -> GenSym {
        GenSym::new(s).unwrap()
    }

    fn sig(genus: u32, boundary: &[u32]) -> SurfaceSignature {
        SurfaceSignature::new(genus, boundary.to_vec()).unwrap()
    }

    #[test]
    fn counts() {
        let p = sig(0, &[5]);
        assert_eq!((p.arc_count(), p.decorations()), (2, 3));
        let a = sig(0, &[1, 1]);
        assert_eq!((a.arc_count(), a.decorations()), (2, 2));
        let t = sig(1, &[1]);
        assert_eq!((t.arc_count(), t.decorations()), (4, 3));
        assert!(SurfaceSignature::new(0, vec![3]).is_err());
    }

    #[test]
    fn pentagon_fan() {
        let t = canonical_triangulation(&sig(0, &[5])).unwrap();
        let r = validate_triangulation(&t);
        assert!(r.is_valid(), "{:?}", r.diagnostics);
        assert_eq!((r.arcs, r.triangles, r.marked, r.euler_defect), (2, 3, 5, 0));
        assert_eq!(dual_endpoints(&t, &g("g1")).unwrap(), (1, 2));
        assert_eq!(dual_endpoints(&t, &g("g2")).unwrap(), (2, 3));
        let qp = qp_from_triangulation(&t).unwrap();
        assert_eq!(qp.arrows().len(), 1);
        assert!(qp.potential().is_empty());
    }

    #[test]
    fn pentagon_flip_moves_diagonal() {
        let t = canonical_triangulation(&sig(0, &[5])).unwrap();
        let f = flip(&t, &g("g1"), FlipDirection::Backward).unwrap();
        // the new g1 bounds a triangle with e2, e3 (it joins M2 and M4)
        let nt = &f.new_triangulation;
        assert!(validate_triangulation(nt).is_valid());
        let has = |a: &str, b: &str| {
            nt.triangles.iter().any(|tr| {
                let s: Vec<_> = tr.sides.iter().map(|x| x.to_string()).collect();
                s.contains(&a.to_string()) && s.contains(&b.to_string()) && s.contains(&"g1".to_string())
            })
        };
        assert!(has("[e2]", "[e3]"));
        let back = flip(nt, &g("g1"), FlipDirection::Forward).unwrap();
        assert_eq!(back.new_triangulation, t);
    }

    #[test]
    fn small_surfaces() {
        for (genus, b) in [
            (0, vec![1, 1]),
            (1, vec![1]),
            (0, vec![2, 2]),
            (1, vec![2]),
            (2, vec![1]),
        ] {
            let s = sig(genus, &b);
            let t = canonical_triangulation(&s).unwrap();
            let r = validate_triangulation(&t);
            assert!(r.is_valid(), "{s}: {:?}", r.diagnostics);
            assert_eq!(r.arcs as i64, s.arc_count());
        }
    }

    #[test]
    fn flip_matches_mutation_on_hexagon() {
        let t = canonical_triangulation(&sig(0, &[6])).unwrap();
        for arc in t.arcs() {
            for dir in [FlipDirection::Backward, FlipDirection::Forward] {
                let f = flip(&t, &arc, dir).unwrap();
                let lhs = qp_from_triangulation(&f.new_triangulation).unwrap();
                let (rhs, _) = mutate(&qp_from_triangulation(&t).unwrap(), &arc).unwrap();
                assert!(equal_up_to_arrow_renaming(&lhs, &rhs));
            }
        }
    }
}
