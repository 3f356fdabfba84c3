//! Quivers with potential of surface type and their mutation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::GenSym;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error("arrow {arrow} has undeclared endpoint {vertex}")]
    UnknownEndpoint { arrow: String, vertex: String },
    #[error("duplicate arrow id {0}")]
    DuplicateArrow(String),
    #[error("potential term mentions unknown arrow {0}")]
    UnknownArrow(String),
    #[error("potential term {0:?} is not a composable cycle")]
    NotACycle(Vec<String>),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("2-cycle through vertex {vertex} (with {other})")]
    TwoCycleAt { vertex: String, other: String },
    #[error("quiver is not of surface type: {0}")]
    NotSurfaceType(String),
    #[error("bad vertex name: {0}")]
    BadName(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub src: GenSym,
    pub tgt: GenSym,
}

/// One cyclic term of the potential.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub coef: i64,
    pub cycle: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct QpJson {
    vertices: Vec<GenSym>,
    arrows: Vec<Arrow>,
    #[serde(default)]
    potential: Vec<Term>,
}

/// A quiver with potential. Arrows are kept sorted by id and potential terms
/// in their least cyclic rotation, so structural equality is meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QpJson", into = "QpJson")]
pub struct Qp {
    vertices: BTreeSet<GenSym>,
    arrows: Vec<Arrow>,
    potential: Vec<Term>,
}

impl TryFrom<QpJson> for Qp {
    type Error = QpError;
    fn try_from(j: QpJson) -> Result<Self, Self::Error> {
        Qp::new(j.vertices, j.arrows, j.potential)
    }
}

impl From<Qp> for QpJson {
    fn from(q: Qp) -> Self {
        QpJson {
            vertices: q.vertices.into_iter().collect(),
            arrows: q.arrows,
            potential: q.potential,
        }
    }
}

fn least_rotation(cycle: &[String]) -> Vec<String> {
    (0..cycle.len())
        .map(|i| {
            let mut r = cycle[i..].to_vec();
            r.extend_from_slice(&cycle[..i]);
            r
        })
        .min()
        .unwrap_or_default()
}

impl Qp {
    pub fn new<V: IntoIterator<Item = GenSym>>(
        vertices: V,
        arrows: Vec<Arrow>,
        potential: Vec<Term>,
    ) -> Result<Qp, QpError> {
        let vertices: BTreeSet<GenSym> = vertices.into_iter().collect();
        let mut by_id: BTreeMap<String, Arrow> = BTreeMap::new();
        for a in arrows {
            for end in [&a.src, &a.tgt] {
                if !vertices.contains(end) {
                    return Err(QpError::UnknownEndpoint {
                        arrow: a.id.clone(),
                        vertex: end.to_string(),
                    });
                }
            }
            if by_id.contains_key(&a.id) {
                return Err(QpError::DuplicateArrow(a.id));
            }
            by_id.insert(a.id.clone(), a);
        }
        let mut summed: BTreeMap<Vec<String>, i64> = BTreeMap::new();
        for t in potential {
            if t.cycle.is_empty() {
                return Err(QpError::NotACycle(t.cycle));
            }
            for (i, id) in t.cycle.iter().enumerate() {
                let a = by_id.get(id).ok_or_else(|| QpError::UnknownArrow(id.clone()))?;
                let next = &t.cycle[(i + 1) % t.cycle.len()];
                let b = by_id.get(next).ok_or_else(|| QpError::UnknownArrow(next.clone()))?;
                if a.tgt != b.src {
                    return Err(QpError::NotACycle(t.cycle));
                }
            }
            *summed.entry(least_rotation(&t.cycle)).or_insert(0) += t.coef;
        }
        let potential = summed
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(cycle, coef)| Term { coef, cycle })
            .collect();
        Ok(Qp {
            vertices,
            arrows: by_id.into_values().collect(),
            potential,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<GenSym> {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn potential(&self) -> &[Term] {
        &self.potential
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows
            .binary_search_by(|a| a.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.arrows[i])
    }

    pub fn vertex(&self, name: &str) -> Result<GenSym, QpError> {
        let g = GenSym::new(name).map_err(|e| QpError::BadName(e.to_string()))?;
        if self.vertices.contains(&g) {
            Ok(g)
        } else {
            Err(QpError::UnknownVertex(name.to_string()))
        }
    }

    /// Number of arrows `a → b`.
    pub fn arrow_count(&self, a: &GenSym, b: &GenSym) -> usize {
        self.arrows.iter().filter(|x| &x.src == a && &x.tgt == b).count()
    }

    /// Number of arrows between `a` and `b` in either direction.
    pub fn edge_count(&self, a: &GenSym, b: &GenSym) -> usize {
        self.arrow_count(a, b) + self.arrow_count(b, a)
    }

    /// Vertex sequence of a potential term, starting at the source of its first arrow.
    pub fn term_vertices(&self, t: &Term) -> Vec<GenSym> {
        t.cycle
            .iter()
            .filter_map(|id| self.arrow(id))
            .map(|a| a.src.clone())
            .collect()
    }

    /// Rename arrows canonically: `src>tgt`, or `src>tgt#k` for parallel
    /// arrows, choosing the numbering that gives the least potential.
    pub fn normalize(&self) -> Qp {
        let mut classes: BTreeMap<(GenSym, GenSym), Vec<String>> = BTreeMap::new();
        for a in &self.arrows {
            classes
                .entry((a.src.clone(), a.tgt.clone()))
                .or_default()
                .push(a.id.clone());
        }
        let classes: Vec<_> = classes.into_iter().collect();
        let name = |(s, t): &(GenSym, GenSym), k: usize, size: usize| {
            if size == 1 {
                format!("{s}>{t}")
            } else {
                format!("{s}>{t}#{}", k + 1)
            }
        };
        // Enumerate the numberings of parallel classes, keeping the least result.
        let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut total: usize = 1;
        for (_, ids) in &classes {
            let perms = if total <= 4096 {
                permutations(ids.len())
            } else {
                vec![(0..ids.len()).collect()]
            };
            total = total.saturating_mul(perms.len());
            choices.push(perms);
        }
        let mut best: Option<Qp> = None;
        let mut idx = vec![0usize; classes.len()];
        loop {
            let mut rename: BTreeMap<&str, String> = BTreeMap::new();
            for (ci, (key, ids)) in classes.iter().enumerate() {
                let perm = &choices[ci][idx[ci]];
                for (k, id) in ids.iter().enumerate() {
                    rename.insert(id.as_str(), name(key, perm[k], ids.len()));
                }
            }
            let arrows = self
                .arrows
                .iter()
                .map(|a| Arrow {
                    id: rename[a.id.as_str()].clone(),
                    src: a.src.clone(),
                    tgt: a.tgt.clone(),
                })
                .collect();
            let potential = self
                .potential
                .iter()
                .map(|t| Term {
                    coef: t.coef,
                    cycle: t.cycle.iter().map(|id| rename[id.as_str()].clone()).collect(),
                })
                .collect();
            let cand = Qp::new(self.vertices.iter().cloned(), arrows, potential).expect("renaming preserves validity");
            if best.as_ref().is_none_or(|b| cand.potential < b.potential) {
                best = Some(cand);
            }
            // advance the mixed-radix counter
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return best.expect("at least one candidate");
                }
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// True when the two QPs agree after a bijective renaming of arrow ids.
pub fn equal_up_to_arrow_renaming(a: &Qp, b: &Qp) -> bool {
    a.normalize() == b.normalize()
}

/// A violation of the surface-type conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    Loop { arrow: String },
    TwoCycle { a: GenSym, b: GenSym },
    TooManyParallel { src: GenSym, tgt: GenSym, count: usize },
    OutDegree { vertex: GenSym, count: usize },
    InDegree { vertex: GenSym, count: usize },
    NonTriangleTerm { cycle: Vec<String> },
    SharedArrow { arrow: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Loop { arrow } => write!(f, "loop: arrow {arrow}"),
            Diagnostic::TwoCycle { a, b } => write!(f, "2-cycle ({a},{b})"),
            Diagnostic::TooManyParallel { src, tgt, count } => {
                write!(f, "{count} arrows {src}->{tgt}")
            }
            Diagnostic::OutDegree { vertex, count } => {
                write!(f, "out-degree {count} at {vertex}")
            }
            Diagnostic::InDegree { vertex, count } => write!(f, "in-degree {count} at {vertex}"),
            Diagnostic::NonTriangleTerm { cycle } => {
                write!(f, "potential term of length {}: {}", cycle.len(), cycle.join(" "))
            }
            Diagnostic::SharedArrow { arrow } => {
                write!(f, "arrow {arrow} occurs in more than one 3-cycle")
            }
        }
    }
}

/// Check the surface-type conditions; an empty list means the QP passes.
pub fn validate_surface_qp(qp: &Qp) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut pair: BTreeMap<(GenSym, GenSym), usize> = BTreeMap::new();
    let mut outdeg: BTreeMap<GenSym, usize> = BTreeMap::new();
    let mut indeg: BTreeMap<GenSym, usize> = BTreeMap::new();
    for a in qp.arrows() {
        if a.src == a.tgt {
            out.push(Diagnostic::Loop { arrow: a.id.clone() });
            continue;
        }
        *pair.entry((a.src.clone(), a.tgt.clone())).or_insert(0) += 1;
        *outdeg.entry(a.src.clone()).or_insert(0) += 1;
        *indeg.entry(a.tgt.clone()).or_insert(0) += 1;
    }
    for ((s, t), &n) in &pair {
        if s < t && pair.contains_key(&(t.clone(), s.clone())) {
            out.push(Diagnostic::TwoCycle {
                a: s.clone(),
                b: t.clone(),
            });
        }
        if n > 2 {
            out.push(Diagnostic::TooManyParallel {
                src: s.clone(),
                tgt: t.clone(),
                count: n,
            });
        }
    }
    for (v, &n) in &outdeg {
        if n > 2 {
            out.push(Diagnostic::OutDegree {
                vertex: v.clone(),
                count: n,
            });
        }
    }
    for (v, &n) in &indeg {
        if n > 2 {
            out.push(Diagnostic::InDegree {
                vertex: v.clone(),
                count: n,
            });
        }
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for t in qp.potential() {
        if t.cycle.len() != 3 {
            out.push(Diagnostic::NonTriangleTerm { cycle: t.cycle.clone() });
            continue;
        }
        for id in &t.cycle {
            *seen.entry(id.as_str()).or_insert(0) += 1;
        }
    }
    for (id, n) in seen {
        if n > 1 {
            out.push(Diagnostic::SharedArrow { arrow: id.to_string() });
        }
    }
    out
}

/// What a mutation did to the arrows and the potential.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub added: Vec<Arrow>,
    pub reversed: Vec<Arrow>,
    pub removed: Vec<Arrow>,
    pub removed_potential_terms: usize,
}

fn composite_id(a: &str, b: &str) -> String {
    format!("[{a}{b}]")
}

fn star_id(a: &str) -> String {
    format!("{a}*")
}

/// Compose through `v`, reverse the arrows at `v` and add the correction terms.
pub fn premutate(qp: &Qp, v: &GenSym) -> Result<Qp, QpError> {
    premutate_inner(qp, v).map(|(q, _)| q)
}

fn premutate_inner(qp: &Qp, v: &GenSym) -> Result<(Qp, MutationReport), QpError> {
    if !qp.vertices.contains(v) {
        return Err(QpError::UnknownVertex(v.to_string()));
    }
    let incoming: Vec<&Arrow> = qp.arrows.iter().filter(|a| &a.tgt == v).collect();
    let outgoing: Vec<&Arrow> = qp.arrows.iter().filter(|a| &a.src == v).collect();
    for a in &incoming {
        if outgoing.iter().any(|b| b.tgt == a.src) {
            return Err(QpError::TwoCycleAt {
                vertex: v.to_string(),
                other: a.src.to_string(),
            });
        }
    }
    let mut report = MutationReport::default();
    let mut arrows = Vec::new();
    for a in &qp.arrows {
        if &a.src == v || &a.tgt == v {
            let r = Arrow {
                id: star_id(&a.id),
                src: a.tgt.clone(),
                tgt: a.src.clone(),
            };
            report.reversed.push(r.clone());
            arrows.push(r);
        } else {
            arrows.push(a.clone());
        }
    }
    let mut potential = Vec::new();
    for a in &incoming {
        for b in &outgoing {
            let ab = Arrow {
                id: composite_id(&a.id, &b.id),
                src: a.src.clone(),
                tgt: b.tgt.clone(),
            };
            report.added.push(ab.clone());
            potential.push(Term {
                coef: 1,
                cycle: vec![star_id(&b.id), star_id(&a.id), ab.id.clone()],
            });
            arrows.push(ab);
        }
    }
    for t in &qp.potential {
        let arrow = |id: &str| qp.arrow(id).expect("validated cycle");
        // start at an arrow that does not leave v, so no composite wraps around
        let start = t.cycle.iter().position(|id| &arrow(id).src != v).unwrap_or(0);
        let rotated: Vec<&String> = t.cycle[start..].iter().chain(&t.cycle[..start]).collect();
        let mut cycle = Vec::new();
        let mut i = 0;
        while i < rotated.len() {
            let a = arrow(rotated[i]);
            if &a.tgt == v && i + 1 < rotated.len() {
                cycle.push(composite_id(rotated[i], rotated[i + 1]));
                i += 2;
            } else {
                cycle.push(rotated[i].clone());
                i += 1;
            }
        }
        potential.push(Term { coef: t.coef, cycle });
    }
    let q = Qp::new(qp.vertices.iter().cloned(), arrows, potential)?;
    Ok((q, report))
}

/// Premutation followed by deleting 2-cycle terms, their arrows, and any term
/// that still mentions a deleted arrow.
pub fn mutate(qp: &Qp, v: &GenSym) -> Result<(Qp, MutationReport), QpError> {
    let (pre, mut report) = premutate_inner(qp, v)?;
    let mut dead: BTreeSet<String> = BTreeSet::new();
    for t in pre.potential() {
        if t.cycle.len() == 2 {
            dead.extend(t.cycle.iter().cloned());
        }
    }
    let mut arrows = Vec::new();
    for a in pre.arrows() {
        if dead.contains(&a.id) {
            report.removed.push(a.clone());
        } else {
            arrows.push(a.clone());
        }
    }
    let mut potential = Vec::new();
    for t in pre.potential() {
        if t.cycle.iter().any(|id| dead.contains(id)) {
            report.removed_potential_terms += 1;
        } else {
            potential.push(t.clone());
        }
    }
    let q = Qp::new(pre.vertices.iter().cloned(), arrows, potential)?;
    Ok((q, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn g(s: &str) -> GenSym {
        GenSym::new(s).unwrap()
    }

    fn arrow(id: &str, s: &str, t: &str) -> Arrow {
        Arrow {
            id: id.into(),
            src: g(s),
            tgt: g(t),
        }
    }

    fn triangle() -> Qp {
        Qp::new(
            [g("a"), g("b"), g("c")],
            vec![arrow("al", "a", "b"), arrow("be", "b", "c"), arrow("ga", "c", "a")],
            vec![Term {
                coef: 1,
                cycle: vec!["be".into(), "ga".into(), "al".into()],
            }],
        )
        .unwrap()
    }

    #[test]
    fn potential_is_rotated_canonically() {
        let q = triangle();
        assert_eq!(q.potential()[0].cycle, vec!["al", "be", "ga"]);
        assert!(validate_surface_qp(&q).is_empty());
    }

    #[test]
    fn two_cycle_is_diagnosed() {
        let q = Qp::new(
            [g("a"), g("b")],
            vec![arrow("x", "a", "b"), arrow("y", "b", "a")],
            vec![],
        )
        .unwrap();
        let d = validate_surface_qp(&q);
        assert_eq!(d, vec![Diagnostic::TwoCycle { a: g("a"), b: g("b") }]);
        let single = Qp::new([g("a")], vec![], vec![]).unwrap();
        assert!(validate_surface_qp(&single).is_empty());
    }

    #[test]
    fn premutate_triangle() {
        let pre = premutate(&triangle(), &g("a")).unwrap();
        let ids: Vec<_> = pre.arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, vec!["[gaal]", "al*", "be", "ga*"]);
        let ab = pre.arrow("[gaal]").unwrap();
        assert_eq!((ab.src.as_str(), ab.tgt.as_str()), ("c", "b"));
        let cycles: Vec<_> = pre.potential().iter().map(|t| t.cycle.clone()).collect();
        assert_eq!(
            cycles,
            vec![
                vec!["[gaal]".to_string(), "al*".into(), "ga*".into()],
                vec!["[gaal]".to_string(), "be".into()],
            ]
        );
    }

    #[test]
    fn mutate_triangle_leaves_path() {
        let (m, report) = mutate(&triangle(), &g("a")).unwrap();
        assert!(m.potential().is_empty());
        let shape: Vec<_> = m
            .arrows()
            .iter()
            .map(|a| (a.src.to_string(), a.tgt.to_string()))
            .collect();
        assert_eq!(shape, vec![("b".into(), "a".into()), ("a".into(), "c".into())]);
        assert_eq!(report.removed.len(), 2);
        assert_eq!(report.removed_potential_terms, 2);
    }

    #[test]
    fn sink_mutation_only_reverses() {
        let q = Qp::new([g("a"), g("b")], vec![arrow("x", "a", "b")], vec![]).unwrap();
        let (m, _) = mutate(&q, &g("b")).unwrap();
        assert_eq!(m.arrows(), &[arrow("x*", "b", "a")]);
        let (back, _) = mutate(&m, &g("b")).unwrap();
        assert!(equal_up_to_arrow_renaming(&back, &q));
    }

    #[test]
    fn double_arrow_gives_two_composites() {
        let q = Qp::new(
            [g("a"), g("b"), g("c")],
            vec![
                arrow("p", "b", "c"),
                arrow("q", "b", "c"),
                arrow("r", "c", "a"),
                arrow("s", "a", "b"),
            ],
            vec![],
        )
        .unwrap();
        let pre = premutate(&q, &g("b")).unwrap();
        let composites: Vec<_> = pre
            .arrows()
            .iter()
            .filter(|a| a.id.starts_with('['))
            .map(|a| (a.src.to_string(), a.tgt.to_string()))
            .collect();
        assert_eq!(composites, vec![("a".into(), "c".into()), ("a".into(), "c".into())]);
    }

    #[test]
    fn json_round_trip() {
        let q = triangle();
        let text = q.to_json();
        let back: Qp = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
    }
}
