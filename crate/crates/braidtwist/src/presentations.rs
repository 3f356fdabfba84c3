//! Finite presentations: surface braid groups, braid twist groups and the
//! braid group of a quiver with potential, plus the ρ-action and the
//! ε/δ change of generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qp::{validate_surface_qp, Qp};
use crate::word::{expand_relation, GenSym, RelationKind, Substitution, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid surface: {0}")]
    BadSurface(String),
    #[error("unsupported range: {0}")]
    Unsupported(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("relator uses undeclared generator {0}")]
    UndeclaredGenerator(String),
    #[error("relator {0} is trivial")]
    TrivialRelator(String),
    #[error("quiver is not of surface type: {0}")]
    BadQp(String),
    #[error("quiver has a double arrow {0} => {1}")]
    DoubleArrow(String, String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Genus, number of boundary components and number of decorations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DecoratedSurface {
    pub genus: u32,
    pub boundary: u32,
    pub decorations: u32,
}

impl fmt::Display for DecoratedSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, b={}, ℵ={})", self.genus, self.boundary, self.decorations)
    }
}

impl DecoratedSurface {
    pub fn new(genus: u32, boundary: u32, decorations: u32) -> Result<Self, PresentationError> {
        let s = DecoratedSurface {
            genus,
            boundary,
            decorations,
        };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<(), PresentationError> {
        if self.boundary == 0 {
            return Err(PresentationError::BadSurface(format!(
                "{self}: at least one boundary component is required"
            )));
        }
        if self.decorations < 2 {
            return Err(PresentationError::BadSurface(format!(
                "{self}: at least two decorations are required"
            )));
        }
        Ok(())
    }

    /// `2g + b − 1`, the number of δ, ε or τ generators.
    pub fn loops(&self) -> u32 {
        2 * self.genus + self.boundary - 1
    }

    /// Indices `1, 3, …, 2g − 1`.
    pub fn is_odd_handle(&self, s: u32) -> bool {
        s % 2 == 1 && s < 2 * self.genus
    }

    /// Indices `2, 4, …, 2g`.
    pub fn is_even_handle(&self, s: u32) -> bool {
        s.is_multiple_of(2) && s >= 2 && s <= 2 * self.genus
    }

    /// Whether the braid twist presentation is known to hold.
    pub fn bt_supported(&self) -> bool {
        let l = self.loops();
        l == 0 || self.decorations >= 5 || (self.decorations == 4 && l <= 2)
    }

    /// Alternative names for the loop generators with prefix `p`:
    /// `ξ_{-r} = p_{2r-1}`, `ξ_r = p_{2r}`, `ζ_l = p_{2g+l}` (and `ω`, `ν`
    /// for the τ generators).
    pub fn loop_aliases(&self, prefix: &str) -> Vec<(String, GenSym)> {
        let (h, z) = if prefix == "t" { ("omega", "nu") } else { ("xi", "zeta") };
        let mut out = Vec::new();
        for r in 1..=self.genus {
            out.push((format!("{h}-{r}"), gen(prefix, 2 * r - 1)));
            out.push((format!("{h}{r}"), gen(prefix, 2 * r)));
        }
        for l in 1..self.boundary {
            out.push((format!("{z}{l}"), gen(prefix, 2 * self.genus + l)));
        }
        out
    }
}

pub fn gen(prefix: &str, i: u32) -> GenSym {
    GenSym::new(&format!("{prefix}{i}")).expect("generated names are valid")
}

fn w(prefix: &str, i: u32) -> Word {
    Word::gen(&gen(prefix, i))
}

fn prod(ws: &[&Word]) -> Word {
    ws.iter().fold(Word::empty(), |acc, x| acc.mul(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relator {
    pub tag: String,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson")]
pub struct Presentation {
    generators: Vec<GenSym>,
    relators: Vec<Relator>,
}

#[derive(Deserialize)]
struct PresentationJson {
    generators: Vec<GenSym>,
    relators: Vec<Relator>,
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = PresentationError;
    fn try_from(j: PresentationJson) -> Result<Self, Self::Error> {
        Presentation::new(j.generators, j.relators)
    }
}

impl Presentation {
    pub fn new(generators: Vec<GenSym>, relators: Vec<Relator>) -> Result<Self, PresentationError> {
        let known: BTreeSet<&GenSym> = generators.iter().collect();
        for r in &relators {
            if r.word.is_empty() {
                return Err(PresentationError::TrivialRelator(r.tag.clone()));
            }
            for g in r.word.support() {
                if !known.contains(&g) {
                    return Err(PresentationError::UndeclaredGenerator(g.to_string()));
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> &[GenSym] {
        &self.generators
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn relator_words(&self) -> Vec<Word> {
        self.relators.iter().map(|r| r.word.clone()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("gens:");
        for g in &self.generators {
            out.push(' ');
            out.push_str(g.as_str());
        }
        out.push('\n');
        for r in &self.relators {
            out.push_str(&format!("rel[{}]: {}\n", r.tag, r.word));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, PresentationError> {
        let mut generators = None;
        let mut relators = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| PresentationError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("gens:") {
                let gs = rest
                    .split_whitespace()
                    .map(GenSym::new)
                    .collect::<Result<Vec<_>, _>>()?;
                generators = Some(gs);
            } else if let Some(rest) = line.strip_prefix("rel[") {
                let (tag, body) = rest.split_once("]:").ok_or_else(|| err("expected `]:`"))?;
                relators.push(Relator {
                    tag: tag.to_string(),
                    word: Word::parse(body)?,
                });
            } else {
                return Err(err("expected `gens:` or `rel[tag]:`"));
            }
        }
        let generators = generators.ok_or(PresentationError::Parse {
            line: 0,
            msg: "missing `gens:` line".into(),
        })?;
        Presentation::new(generators, relators)
    }
}

/// Collects relators family by family; each family is sorted on close.
struct Builder {
    relators: Vec<Relator>,
    family: Vec<Relator>,
    forms: BTreeMap<Word, (RelationKind, Vec<Word>)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            relators: Vec::new(),
            family: Vec::new(),
            forms: BTreeMap::new(),
        }
    }

    fn add(&mut self, tag: &str, kind: RelationKind, args: &[Word]) {
        let words = expand_relation(kind, args).expect("arity is fixed by the caller");
        if words.len() == 1 {
            self.forms
                .entry(words[0].clone())
                .or_insert_with(|| (kind, args.to_vec()));
        }
        for word in words {
            if !word.is_empty() {
                self.family.push(Relator {
                    tag: tag.to_string(),
                    word,
                });
            }
        }
    }

    fn close(&mut self) {
        let mut fam = std::mem::take(&mut self.family);
        fam.sort_by_key(|r| r.word.to_string());
        fam.dedup();
        self.relators.extend(fam);
    }

    fn finish(mut self, generators: Vec<GenSym>) -> Presentation {
        self.close();
        Presentation::new(generators, self.relators).expect("generated relators are well formed")
    }
}

fn sigma_families(b: &mut Builder, prefix_tag: &str, aleph: u32) {
    let n = aleph - 1;
    for i in 1..=n {
        for j in (i + 2)..=n {
            b.add(&format!("{prefix_tag}:01"), RelationKind::Co, &[w("s", i), w("s", j)]);
        }
    }
    b.close();
    for i in 1..n {
        b.add(
            &format!("{prefix_tag}:02"),
            RelationKind::Br,
            &[w("s", i), w("s", i + 1)],
        );
    }
    b.close();
}

fn sigma_gens(aleph: u32, loop_prefix: &str, loops: u32) -> Vec<GenSym> {
    (1..aleph)
        .map(|i| gen("s", i))
        .chain((1..=loops).map(|r| gen(loop_prefix, r)))
        .collect()
}

/// Surface braid group on `σ_i` and the loop generators `δ_r`.
pub fn sbg(s: &DecoratedSurface) -> Result<Presentation, PresentationError> {
    let (b, gens) = sbg_builder(s)?;
    Ok(b.finish(gens))
}

/// The relators of [`sbg`], each with its relation.
pub fn sbg_forms(s: &DecoratedSurface) -> Result<Vec<RelationForm>, PresentationError> {
    let (b, gens) = sbg_builder(s)?;
    Ok(forms_of(b, gens))
}

fn sbg_builder(s: &DecoratedSurface) -> Result<(Builder, Vec<GenSym>), PresentationError> {
    s.check()?;
    let l = s.loops();
    let s1 = w("s", 1);
    let mut b = Builder::new();
    sigma_families(&mut b, "sbg", s.decorations);
    for i in 2..s.decorations {
        for r in 1..=l {
            b.add("sbg:03", RelationKind::Co, &[w("s", i), w("d", r)]);
        }
    }
    b.close();
    for r in 1..=l {
        let d = w("d", r);
        b.add("sbg:04", RelationKind::Co, &[d.clone(), prod(&[&s1, &d, &s1])]);
    }
    b.close();
    for r in 1..=l {
        for sidx in 1..r {
            if !s.is_odd_handle(sidx) || sidx != r - 1 {
                b.add(
                    "sbg:05",
                    RelationKind::Co,
                    &[w("d", r).conj(&s1.inverse()), w("d", sidx)],
                );
            }
        }
    }
    b.close();
    for sidx in 1..l {
        if s.is_odd_handle(sidx) {
            b.add(
                "sbg:06",
                RelationKind::SCo,
                &[s1.clone(), w("d", sidx + 1), w("d", sidx)],
            );
        }
    }
    Ok((b, sigma_gens(s.decorations, "d", l)))
}

/// Surface braid group on `σ_i` and the positive loop generators `ε_r`.
pub fn sbg_alt(s: &DecoratedSurface) -> Result<Presentation, PresentationError> {
    let (b, gens) = sbg_alt_builder(s)?;
    Ok(b.finish(gens))
}

/// The relators of [`sbg_alt`], each with its relation.
pub fn sbg_alt_forms(s: &DecoratedSurface) -> Result<Vec<RelationForm>, PresentationError> {
    let (b, gens) = sbg_alt_builder(s)?;
    Ok(forms_of(b, gens))
}

fn sbg_alt_builder(s: &DecoratedSurface) -> Result<(Builder, Vec<GenSym>), PresentationError> {
    s.check()?;
    let l = s.loops();
    let s1 = w("s", 1);
    let mut b = Builder::new();
    sigma_families(&mut b, "ap", s.decorations);
    for i in 2..s.decorations {
        for r in 1..=l {
            b.add("ap:03", RelationKind::Co, &[w("s", i), w("e", r)]);
        }
    }
    b.close();
    for r in 1..=l {
        let e = w("e", r);
        b.add("ap:04", RelationKind::Co, &[e.clone(), prod(&[&s1, &e, &s1])]);
    }
    b.close();
    for r in 1..=l {
        for sidx in 1..r {
            if !s.is_odd_handle(sidx) {
                b.add(
                    "ap:05",
                    RelationKind::Co,
                    &[w("e", sidx), prod(&[&s1, &w("e", r), &s1])],
                );
            }
        }
    }
    b.close();
    for r in 1..=l {
        for sidx in 1..r {
            if s.is_odd_handle(sidx) {
                b.add("ap:06", RelationKind::SCo, &[s1.clone(), w("e", r), w("e", sidx)]);
            }
        }
    }
    Ok((b, sigma_gens(s.decorations, "e", l)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChangeDirection {
    EpsToDelta,
    DeltaToEps,
}

/// `ε_r = δ_r ε_{r−1}`, or `δ_r ε_{r−2}` at even handle indices, with
/// `ε_0 = 1`; and the inverse change `δ_r = ε_r ε_{r−1}⁻¹` (resp. `ε_{r−2}⁻¹`).
pub fn eps_delta_change(s: &DecoratedSurface, dir: ChangeDirection) -> Substitution {
    let l = s.loops();
    let mut sub = Substitution::identity(&(1..s.decorations).map(|i| gen("s", i)).collect::<Vec<_>>());
    let back = |r: u32| if s.is_even_handle(r) { r - 2 } else { r - 1 };
    match dir {
        ChangeDirection::EpsToDelta => {
            let mut eps: Vec<Word> = vec![Word::empty()];
            for r in 1..=l {
                let e = w("d", r).mul(&eps[back(r) as usize]);
                eps.push(e.clone());
                sub.insert(gen("e", r), e);
            }
        }
        ChangeDirection::DeltaToEps => {
            for r in 1..=l {
                let prev = if back(r) == 0 { Word::empty() } else { w("e", back(r)) };
                sub.insert(gen("d", r), w("e", r).mul(&prev.inverse()));
            }
        }
    }
    sub
}

/// `x = σ2 σ1 σ2⁻¹`.
pub fn x_word() -> Word {
    w("s", 1).conj(&w("s", 2).inverse())
}

/// `y = σ2 σ3 σ2⁻¹`.
pub fn y_word() -> Word {
    w("s", 3).conj(&w("s", 2).inverse())
}

/// Braid twist group on `σ_i` and `τ_r`.
pub fn bt(s: &DecoratedSurface) -> Result<Presentation, PresentationError> {
    s.check()?;
    if !s.bt_supported() {
        return Err(PresentationError::Unsupported(format!(
            "{s}: needs ℵ ≥ 5, or ℵ = 4 with 2g+b−1 ≤ 2, or a disk"
        )));
    }
    let l = s.loops();
    let (x, y) = (x_word(), y_word());
    let mut b = Builder::new();
    sigma_families(&mut b, "nr", s.decorations);
    for r in 1..=l {
        for i in 3..s.decorations {
            b.add("nr:03", RelationKind::Co, &[w("t", r), w("s", i)]);
        }
    }
    b.close();
    for r in 1..=l {
        b.add("nr:04", RelationKind::Br, &[w("t", r), x.clone()]);
    }
    b.close();
    for r in 1..=l {
        b.add("nr:05", RelationKind::Br, &[w("t", r), y.clone()]);
    }
    b.close();
    for r in 1..=l {
        for sidx in 1..r {
            if !s.is_odd_handle(sidx) {
                b.add("nr:06", RelationKind::Co, &[w("t", r).conj(&y), w("t", sidx).conj(&x)]);
            }
        }
    }
    b.close();
    for r in 1..=l {
        for sidx in 1..r {
            if s.is_odd_handle(sidx) {
                b.add(
                    "nr:07",
                    RelationKind::Co,
                    &[w("t", r).conj(&y.inverse()), w("t", sidx).conj(&x)],
                );
            }
        }
    }
    Ok(b.finish(sigma_gens(s.decorations, "t", l)))
}

fn check_loop_index(s: &DecoratedSurface, t: u32) -> Result<(), PresentationError> {
    if t == 0 || t > s.loops() {
        return Err(PresentationError::IndexOutOfRange {
            index: t,
            max: s.loops(),
        });
    }
    Ok(())
}

/// The words `v_{t,r}` (or `v′_{t,r}` when `prime`), with
/// `ρ(ε_t).τ_r = v_{t,r}^{σ2 τ_t}` and `ρ(ε_t⁻¹).τ_r = v′_{t,r}^{σ3⁻¹ σ1⁻¹ σ2⁻¹}`.
pub fn v_word(s: &DecoratedSurface, t: u32, r: u32, prime: bool) -> Result<Word, PresentationError> {
    check_loop_index(s, t)?;
    check_loop_index(s, r)?;
    let (x, y) = (x_word(), y_word());
    let tt = w("t", t);
    let tr = w("t", r);
    let ti = tt.inverse();
    let (xi, yi) = (x.inverse(), y.inverse());
    let by = if !prime {
        if r == t {
            return Ok(x);
        } else if r < t && !s.is_odd_handle(r) {
            prod(&[&x, &tt])
        } else if r < t {
            prod(&[&x, &ti])
        } else if !s.is_odd_handle(t) {
            prod(&[&xi, &ti])
        } else {
            prod(&[&xi, &tt])
        }
    } else if r == t {
        return Ok(y);
    } else if r < t && !s.is_odd_handle(r) {
        prod(&[&yi, &ti])
    } else if r < t {
        prod(&[&y, &ti])
    } else if !s.is_odd_handle(t) {
        prod(&[&y, &tt])
    } else {
        prod(&[&yi, &tt])
    };
    Ok(tr.conj(&by))
}

/// The substitution `ρ(ε_t)` (sign `+1`) or `ρ(ε_t⁻¹)` (sign `−1`) on the
/// generators of `bt(s)`.
pub fn rho(s: &DecoratedSurface, t: u32, sign: i32) -> Result<Substitution, PresentationError> {
    s.check()?;
    if !s.bt_supported() || s.decorations < 3 {
        return Err(PresentationError::Unsupported(format!("{s}: outside the bt range")));
    }
    check_loop_index(s, t)?;
    let (s1, s2) = (w("s", 1), w("s", 2));
    let x = x_word();
    let tt = w("t", t);
    let ti = tt.inverse();
    let mut sub = Substitution::identity(&(2..s.decorations).map(|i| gen("s", i)).collect::<Vec<_>>());
    if sign >= 0 {
        sub.insert(gen("s", 1), tt.clone());
        for r in 1..=s.loops() {
            let tr = w("t", r);
            let img = if r == t {
                x.conj(&prod(&[&s2, &tt]))
            } else if r < t && !s.is_odd_handle(r) {
                tr.conj(&prod(&[&x, &tt, &s2, &tt]))
            } else if r < t {
                tr.conj(&prod(&[&x, &ti, &s2, &tt]))
            } else if !s.is_odd_handle(t) {
                tr.conj(&prod(&[&x.inverse(), &ti, &s2, &tt]))
            } else {
                tr.conj(&prod(&[&x.inverse(), &tt, &s2, &tt]))
            };
            sub.insert(gen("t", r), img);
        }
    } else {
        let (s1i, s2i) = (s1.inverse(), s2.inverse());
        sub.insert(gen("s", 1), tt.conj(&s1i));
        for r in 1..=s.loops() {
            let tr = w("t", r);
            let img = if r == t {
                s1.clone()
            } else if r < t && !s.is_odd_handle(r) {
                tr.conj(&prod(&[&s2i, &ti, &s1i, &s2i]))
            } else if r < t {
                tr.conj(&prod(&[&s2, &ti, &s1i, &s2i]))
            } else if !s.is_odd_handle(t) {
                tr.conj(&prod(&[&s2, &tt, &s1i, &s2i]))
            } else {
                tr.conj(&prod(&[&s2i, &tt, &s1i, &s2i]))
            };
            sub.insert(gen("t", r), img);
        }
    }
    Ok(sub)
}

/// Potential 3-cycles as vertex triples in cycle order, starting from the
/// least vertex.
pub fn potential_triangles(qp: &Qp) -> Vec<[GenSym; 3]> {
    let mut out = Vec::new();
    for term in qp.potential() {
        let vs = qp.term_vertices(term);
        if vs.len() != 3 {
            continue;
        }
        let k = (0..3).min_by_key(|&i| &vs[i]).unwrap_or(0);
        out.push([vs[k].clone(), vs[(k + 1) % 3].clone(), vs[(k + 2) % 3].clone()]);
    }
    out.sort();
    out.dedup();
    out
}

fn checked_qp(qp: &Qp) -> Result<(), PresentationError> {
    let d = validate_surface_qp(qp);
    if d.is_empty() {
        Ok(())
    } else {
        let text: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        Err(PresentationError::BadQp(text.join("; ")))
    }
}

fn pair_families(qp: &Qp, b: &mut Builder) {
    let vs: Vec<&GenSym> = qp.vertices().iter().collect();
    for (i, a) in vs.iter().enumerate() {
        for c in &vs[i + 1..] {
            if qp.edge_count(a, c) == 0 {
                b.add("qp:1", RelationKind::Co, &[Word::gen(a), Word::gen(c)]);
            }
        }
    }
    b.close();
    for (i, a) in vs.iter().enumerate() {
        for c in &vs[i + 1..] {
            if qp.edge_count(a, c) == 1 {
                b.add("qp:2", RelationKind::Br, &[Word::gen(a), Word::gen(c)]);
            }
        }
    }
    b.close();
}

/// The braid group of a quiver with potential of surface type.
pub fn br_qp(qp: &Qp) -> Result<Presentation, PresentationError> {
    let b = br_qp_builder(qp)?;
    let gens: Vec<GenSym> = qp.vertices().iter().cloned().collect();
    Ok(b.finish(gens))
}

/// A relator recorded together with the relation it expands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationForm {
    pub tag: String,
    pub kind: RelationKind,
    pub args: Vec<Word>,
    pub word: Word,
}

/// The relators of [`br_qp`] in presentation order, each with its relation.
pub fn br_qp_forms(qp: &Qp) -> Result<Vec<RelationForm>, PresentationError> {
    let b = br_qp_builder(qp)?;
    Ok(forms_of(b, qp.vertices().iter().cloned().collect()))
}

/// Pairs each relator with the relation it came from. Every family used with
/// this expands to a single relator per relation.
fn forms_of(b: Builder, gens: Vec<GenSym>) -> Vec<RelationForm> {
    let forms = b.forms.clone();
    b.finish(gens)
        .relators()
        .iter()
        .map(|r| {
            let (kind, args) = forms[&r.word].clone();
            RelationForm {
                tag: r.tag.clone(),
                kind,
                args,
                word: r.word.clone(),
            }
        })
        .collect()
}

fn br_qp_builder(qp: &Qp) -> Result<Builder, PresentationError> {
    checked_qp(qp)?;
    let g = Word::gen;
    let tris = potential_triangles(qp);
    let mut b = Builder::new();
    pair_families(qp, &mut b);
    for [a, bb, c] in &tris {
        let simple = [(a, bb), (bb, c), (c, a)].iter().all(|(x, y)| qp.edge_count(x, y) == 1);
        if simple {
            b.add("qp:3", RelationKind::Co, &[g(a).conj(&g(bb)), g(c)]);
        }
    }
    b.close();
    for [p, q, r] in &tris {
        for (z, x, y) in [(p, q, r), (q, r, p), (r, p, q)] {
            if qp.arrow_count(x, y) == 2 {
                b.add("qp:4", RelationKind::Br, &[g(z).conj(&g(x)), g(y)]);
            }
        }
    }
    b.close();
    // pairs of potential triangles glued along a double arrow b ⇉ c
    let mut glued: Vec<(GenSym, GenSym, GenSym, GenSym)> = Vec::new();
    let doubles: BTreeSet<(GenSym, GenSym)> = qp
        .arrows()
        .iter()
        .filter(|a| qp.arrow_count(&a.src, &a.tgt) == 2)
        .map(|a| (a.src.clone(), a.tgt.clone()))
        .collect();
    for (bv, cv) in &doubles {
        let thirds: BTreeSet<GenSym> = tris
            .iter()
            .filter(|t| t.contains(bv) && t.contains(cv))
            .flat_map(|t| t.iter().filter(|v| *v != bv && *v != cv).cloned())
            .collect();
        let thirds: Vec<GenSym> = thirds.into_iter().collect();
        for i in 0..thirds.len() {
            for j in (i + 1)..thirds.len() {
                glued.push((thirds[i].clone(), bv.clone(), cv.clone(), thirds[j].clone()));
            }
        }
    }
    for (a, bv, cv, e) in &glued {
        if qp.edge_count(a, e) == 0 {
            b.add("qp:5", RelationKind::Co, &[g(cv).conj(&g(a).mul(&g(e))), g(bv)]);
        }
    }
    b.close();
    for (a, bv, cv, e) in &glued {
        if qp.edge_count(a, e) > 0 {
            b.add("qp:6", RelationKind::Br, &[g(cv).conj(&g(a).mul(&g(e))), g(bv)]);
            b.add("qp:6", RelationKind::Br, &[g(cv).conj(&g(e).mul(&g(a))), g(bv)]);
        }
    }
    b.close();
    for (p, bv, cv, q) in &glued {
        if qp.edge_count(p, q) == 0 {
            continue;
        }
        let (a, e) = if qp.arrow_count(p, q) > 0 { (p, q) } else { (q, p) };
        for t in &tris {
            if !(t.contains(a) && t.contains(e)) {
                continue;
            }
            let f = match t.iter().find(|v| *v != a && *v != e) {
                Some(f) => f,
                None => continue,
            };
            if f == bv || f == cv {
                continue;
            }
            // the cycle must run a → e → f
            let ia = t.iter().position(|v| v == a).unwrap_or(0);
            if &t[(ia + 1) % 3] != e {
                continue;
            }
            let abc = prod(&[&g(a), &g(bv), &g(cv)]);
            b.add("qp:7", RelationKind::Co, &[g(e), g(f).conj(&abc)]);
        }
    }
    Ok(b)
}

/// The simplified presentation for quivers without double arrows: pair
/// relations plus `Tr(a, b, c)` per potential 3-cycle.
pub fn br_qp_simple(qp: &Qp) -> Result<Presentation, PresentationError> {
    checked_qp(qp)?;
    for a in qp.arrows() {
        if qp.arrow_count(&a.src, &a.tgt) > 1 {
            return Err(PresentationError::DoubleArrow(a.src.to_string(), a.tgt.to_string()));
        }
    }
    let mut b = Builder::new();
    pair_families(qp, &mut b);
    for [a, bb, c] in potential_triangles(qp) {
        b.add(
            "qp:3'",
            RelationKind::Tr,
            &[Word::gen(&a), Word::gen(&bb), Word::gen(&c)],
        );
    }
    let gens: Vec<GenSym> = qp.vertices().iter().cloned().collect();
    Ok(b.finish(gens))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for t in &self.torsion {
            write!(f, " + Z/{t}")?;
        }
        Ok(())
    }
}

/// Invariant factors of the exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let cols = p.generators().len();
    let index: BTreeMap<&GenSym, usize> = p.generators().iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut m: Vec<Vec<i128>> = p
        .relators()
        .iter()
        .map(|r| {
            let mut row = vec![0i128; cols];
            for l in r.word.letters() {
                if let Some(&i) = index.get(&l.gen) {
                    row[i] += if l.inv { -1 } else { 1 };
                }
            }
            row
        })
        .collect();
    let diag = smith_diagonal(&mut m, cols);
    let nonzero: Vec<i128> = diag.into_iter().filter(|&d| d != 0).collect();
    AbelianInvariants {
        rank: cols - nonzero.len(),
        torsion: nonzero.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// Diagonal of the Smith normal form (non-negative, divisibility ordered).
fn smith_diagonal(m: &mut [Vec<i128>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        for i in (t + 1)..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            if m[i][t] != 0 {
                done = false;
            }
        }
        for j in (t + 1)..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            if m[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // the pivot must divide the rest of the block
        let p = m[t][t];
        let mut fixed = true;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if m[i][j] % p != 0 {
                    for k in t..cols {
                        let v = m[i][k];
                        m[t][k] += v;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            diag.push(p.abs());
            t += 1;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::{Arrow, Term};

    fn ds(g: u32, b: u32, a: u32) -> DecoratedSurface {
        DecoratedSurface::new(g, b, a).unwrap()
    }

    fn rel(kind: RelationKind, args: &[&str]) -> Vec<Word> {
        let ws: Vec<Word> = args.iter().map(|a| Word::parse(a).unwrap()).collect();
        expand_relation(kind, &ws).unwrap()
    }

    fn words(p: &Presentation) -> Vec<Word> {
        p.relator_words()
    }

    #[test]
    fn sbg_annulus() {
        let p = sbg(&ds(0, 2, 2)).unwrap();
        assert_eq!(p.generators().len(), 2);
        assert_eq!(words(&p), rel(RelationKind::Co, &["d1", "s1 d1 s1"]));
    }

    #[test]
    fn sbg_torus() {
        let p = sbg(&ds(1, 1, 2)).unwrap();
        let mut want = rel(RelationKind::Co, &["d1", "s1 d1 s1"]);
        want.extend(rel(RelationKind::Co, &["d2", "s1 d2 s1"]));
        want.extend(rel(RelationKind::SCo, &["s1", "d2", "d1"]));
        let got: BTreeSet<String> = words(&p).iter().map(|w| w.to_string()).collect();
        let want: BTreeSet<String> = want.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, want);
        assert_eq!(p.relators().len(), 3);
    }

    #[test]
    fn sbg_alt_examples() {
        let p = sbg_alt(&ds(0, 3, 2)).unwrap();
        let got: BTreeSet<String> = words(&p).iter().map(|w| w.to_string()).collect();
        let mut want = rel(RelationKind::Co, &["e1", "s1 e1 s1"]);
        want.extend(rel(RelationKind::Co, &["e2", "s1 e2 s1"]));
        want.extend(rel(RelationKind::Co, &["e1", "s1 e2 s1"]));
        assert_eq!(got, want.iter().map(|w| w.to_string()).collect());
        let disk = sbg_alt(&ds(0, 1, 4)).unwrap();
        assert_eq!(disk.relators().len(), 3);
    }

    #[test]
    fn eps_delta_examples() {
        let t = eps_delta_change(&ds(1, 1, 2), ChangeDirection::EpsToDelta);
        assert_eq!(t.get(&gen("e", 2)).unwrap().to_string(), "d2");
        let a = eps_delta_change(&ds(0, 3, 2), ChangeDirection::EpsToDelta);
        assert_eq!(a.get(&gen("e", 2)).unwrap().to_string(), "d2 d1");
        for s in [ds(2, 2, 3), ds(1, 3, 2), ds(0, 4, 2)] {
            let fwd = eps_delta_change(&s, ChangeDirection::EpsToDelta);
            let back = eps_delta_change(&s, ChangeDirection::DeltaToEps);
            assert!(fwd.then(&back).unwrap().is_identity());
            assert!(back.then(&fwd).unwrap().is_identity());
        }
    }

    #[test]
    fn bt_torus_four() {
        let p = bt(&ds(1, 1, 4)).unwrap();
        assert_eq!(p.generators().len(), 5);
        assert_eq!(p.relators().len(), 10);
        let last = p.relators().last().unwrap();
        assert_eq!(last.tag, "nr:07");
        let x = x_word();
        let y = y_word();
        let want = rel(
            RelationKind::Co,
            &[
                &w("t", 2).conj(&y.inverse()).to_string(),
                &w("t", 1).conj(&x).to_string(),
            ],
        );
        assert_eq!(last.word, want[0]);
        assert!(bt(&ds(0, 4, 4)).is_err());
        let a = abelianization(&p);
        assert_eq!((a.rank, a.torsion.len()), (1, 0));
    }

    #[test]
    fn bt_pants() {
        let p = bt(&ds(0, 3, 5)).unwrap();
        assert!(p.relators().iter().any(|r| r.tag == "nr:06"));
        assert!(!p.relators().iter().any(|r| r.tag == "nr:07"));
    }

    #[test]
    fn rho_examples() {
        let s = ds(1, 1, 4);
        let r = rho(&s, 1, 1).unwrap();
        assert_eq!(r.get(&gen("s", 1)).unwrap(), &w("t", 1));
        let want = x_word().conj(&w("s", 2).mul(&w("t", 1)));
        assert_eq!(r.get(&gen("t", 1)).unwrap(), &want);
        let ri = rho(&s, 1, -1).unwrap();
        assert_eq!(ri.get(&gen("t", 1)).unwrap(), &w("s", 1));
        assert!(rho(&s, 3, 1).is_err());
        for t in 1..=2 {
            for r in 1..=2 {
                let v = v_word(&s, t, r, false).unwrap();
                let img = rho(&s, t, 1).unwrap();
                assert_eq!(img.get(&gen("t", r)).unwrap(), &v.conj(&w("s", 2).mul(&w("t", t))));
            }
        }
    }

    #[test]
    fn abelian_examples() {
        let a = GenSym::new("a").unwrap();
        let b = GenSym::new("b").unwrap();
        let free = Presentation::new(vec![a.clone(), b.clone()], vec![]).unwrap();
        assert_eq!(abelianization(&free).rank, 2);
        let br = Presentation::new(
            vec![a, b],
            vec![Relator {
                tag: "br".into(),
                word: rel(RelationKind::Br, &["a", "b"]).remove(0),
            }],
        )
        .unwrap();
        assert_eq!(
            abelianization(&br),
            AbelianInvariants {
                rank: 1,
                torsion: vec![]
            }
        );
        let z6 = Presentation::new(
            vec![GenSym::new("c").unwrap()],
            vec![Relator {
                tag: "p".into(),
                word: Word::parse("c c c c c c").unwrap(),
            }],
        )
        .unwrap();
        assert_eq!(abelianization(&z6).torsion, vec![6]);
    }

    fn triangle_qp() -> Qp {
        let v = |s: &str| GenSym::new(s).unwrap();
        let arrow = |id: &str, s: &str, t: &str| Arrow {
            id: id.into(),
            src: v(s),
            tgt: v(t),
        };
        Qp::new(
            [v("a"), v("b"), v("c")],
            vec![arrow("al", "a", "b"), arrow("be", "b", "c"), arrow("ga", "c", "a")],
            vec![Term {
                coef: 1,
                cycle: vec!["al".into(), "be".into(), "ga".into()],
            }],
        )
        .unwrap()
    }

    #[test]
    fn triangle_presentations() {
        let qp = triangle_qp();
        let p = br_qp(&qp).unwrap();
        let tags: Vec<&str> = p.relators().iter().map(|r| r.tag.as_str()).collect();
        assert_eq!(tags, ["qp:2", "qp:2", "qp:2", "qp:3"]);
        assert_eq!(p.relators()[3].word, rel(RelationKind::Co, &["-b a b", "c"])[0]);
        let s = br_qp_simple(&qp).unwrap();
        assert_eq!(s.relators().len(), 5);
    }

    #[test]
    fn text_round_trip() {
        let p = bt(&ds(1, 1, 4)).unwrap();
        assert_eq!(Presentation::from_text(&p.to_text()).unwrap(), p);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Presentation>(&j).unwrap(), p);
    }
}
