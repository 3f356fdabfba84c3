//! Derivation scripts: equality chains where every step is justified by a
//! named relation, a conjugation or a free reduction.
//!
//! The checker starts from the goal `lhs = rhs` and rewrites both sides with
//! moves that preserve equality in the group presented by the context (plus
//! the library of already checked goals). The script passes when the two
//! sides end up as the same reduced word.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{expand_equations, format_raw, parse_raw, reduce, GenSym, Letter, RelationKind, Word, WordError};

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed script {name}: {msg}")]
    Malformed { name: String, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A relation given either as an equation or as a relation template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationSpec {
    Equation {
        lhs: String,
        rhs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
    },
    Template {
        rel: RelationKind,
        args: Vec<String>,
        #[serde(default, skip_serializing_if = "is_zero")]
        index: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
    },
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl RelationSpec {
    pub fn equation(lhs: &Word, rhs: &Word, tag: Option<&str>) -> Self {
        RelationSpec::Equation {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            tag: tag.map(str::to_string),
        }
    }

    pub fn template(rel: RelationKind, args: &[Word], tag: Option<&str>) -> Self {
        RelationSpec::Template {
            rel,
            args: args.iter().map(|w| w.to_string()).collect(),
            index: 0,
            tag: tag.map(str::to_string),
        }
    }

    /// The equation as a pair of reduced words.
    pub fn resolve(&self) -> Result<(Word, Word), WordError> {
        match self {
            RelationSpec::Equation { lhs, rhs, .. } => Ok((Word::parse(lhs)?, Word::parse(rhs)?)),
            RelationSpec::Template { rel, args, index, .. } => {
                let ws = args.iter().map(|a| Word::parse(a)).collect::<Result<Vec<_>, _>>()?;
                let eqs = expand_equations(*rel, &ws)?;
                eqs.into_iter().nth(*index).ok_or(WordError::Arity {
                    kind: *rel,
                    expected: 1,
                    got: *index + 1,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideSel {
    #[default]
    Lhs,
    Rhs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    #[default]
    Lr,
    Rl,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_lhs(s: &SideSel) -> bool {
    *s == SideSel::Lhs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Step {
    /// Freely reduce both sides.
    FreeReduce,
    /// Insert the cyclically reduced relator `lhs·rhs⁻¹` of `rel`, rotated
    /// left by `rot` and then optionally inverted, before letter `pos`.
    InsertRelator {
        rel: String,
        #[serde(default, skip_serializing_if = "is_lhs")]
        side: SideSel,
        pos: usize,
        #[serde(default, skip_serializing_if = "is_zero")]
        rot: usize,
        #[serde(default, skip_serializing_if = "is_false")]
        inv: bool,
    },
    /// Replace both sides `L`, `R` by `w⁻¹ L w`, `w⁻¹ R w`.
    ConjugateBothSides { word: String },
    /// Replace the occurrence of one side of `rel` starting at letter `pos`
    /// by the other side (`lr` rewrites lhs to rhs). With `inv`, the
    /// inverted equation is used.
    SubstituteEstablished {
        rel: String,
        #[serde(default, skip_serializing_if = "is_lhs")]
        side: SideSel,
        pos: usize,
        #[serde(default)]
        dir: Dir,
        #[serde(default, skip_serializing_if = "is_false")]
        inv: bool,
    },
    /// Replace every occurrence of the symbol on the left of `rel` by its
    /// right side.
    Definition { rel: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationScript {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub context: BTreeMap<String, RelationSpec>,
    pub goal: RelationSpec,
    pub steps: Vec<Step>,
    /// For negative controls: the one-based step at which checking must fail
    /// (`steps.len() + 1` for a chain whose final sides differ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_fail_step: Option<usize>,
}

impl DerivationScript {
    pub fn from_json(text: &str) -> Result<Self, ScriptError> {
        serde_json::from_str(text).map_err(|e| ScriptError::Malformed {
            name: "?".into(),
            msg: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Relation names used by the steps that are not in the context.
    pub fn external_refs(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.steps {
            let name = match s {
                Step::InsertRelator { rel, .. }
                | Step::SubstituteEstablished { rel, .. }
                | Step::Definition { rel } => rel,
                _ => continue,
            };
            if !self.context.contains_key(name) && !out.contains(name) {
                out.push(name.clone());
            }
        }
        out
    }
}

/// Goals of scripts that have been checked, by script name.
#[derive(Clone, Debug, Default)]
pub struct Library {
    entries: BTreeMap<String, (Word, Word)>,
}

impl Library {
    pub fn new() -> Self {
        Library::default()
    }

    pub fn get(&self, name: &str) -> Option<&(Word, Word)> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn insert(&mut self, name: &str, eq: (Word, Word)) {
        self.entries.entry(name.to_string()).or_insert(eq);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &(Word, Word))> {
        self.entries.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// One-based index of the failing step.
    pub failed_step: Option<usize>,
    pub message: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "PASS {}", self.name)
        } else {
            write!(
                f,
                "FAIL {} step {}: {}",
                self.name,
                self.failed_step.unwrap_or(0),
                self.message.as_deref().unwrap_or("")
            )
        }
    }
}

fn raw(w: &Word) -> Vec<Letter> {
    w.letters().to_vec()
}

fn inverse_raw(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(Letter::inverse).collect()
}

struct Checker<'a> {
    script: &'a DerivationScript,
    library: &'a Library,
    lhs: Vec<Letter>,
    rhs: Vec<Letter>,
}

impl Checker<'_> {
    fn relation(&self, name: &str) -> Result<(Word, Word), String> {
        if let Some(spec) = self.script.context.get(name) {
            return spec.resolve().map_err(|e| format!("relation {name}: {e}"));
        }
        self.library
            .get(name)
            .cloned()
            .ok_or_else(|| format!("unknown relation {name}"))
    }

    fn side(&mut self, s: SideSel) -> &mut Vec<Letter> {
        match s {
            SideSel::Lhs => &mut self.lhs,
            SideSel::Rhs => &mut self.rhs,
        }
    }

    fn apply(&mut self, step: &Step) -> Result<(), String> {
        match step {
            Step::FreeReduce => {
                self.lhs = raw(&reduce(self.lhs.drain(..)));
                self.rhs = raw(&reduce(self.rhs.drain(..)));
            }
            Step::InsertRelator {
                rel,
                side,
                pos,
                rot,
                inv,
            } => {
                let (l, r) = self.relation(rel)?;
                let core = l.mul(&r.inverse()).cyclic_core();
                let letters = core.letters();
                if letters.is_empty() {
                    return Err(format!("relation {rel} has trivial relator"));
                }
                if *rot >= letters.len() {
                    return Err(format!("rotation {rot} out of range for {rel}"));
                }
                let mut ins: Vec<Letter> = letters[*rot..].iter().chain(&letters[..*rot]).cloned().collect();
                if *inv {
                    ins = inverse_raw(&ins);
                }
                let target = self.side(*side);
                if *pos > target.len() {
                    return Err(format!("position {pos} beyond length {}", target.len()));
                }
                target.splice(*pos..*pos, ins);
            }
            Step::ConjugateBothSides { word } => {
                let w = parse_raw(word).map_err(|e| e.to_string())?;
                let wi = inverse_raw(&w);
                for s in [SideSel::Lhs, SideSel::Rhs] {
                    let cur = std::mem::take(self.side(s));
                    *self.side(s) = wi.iter().cloned().chain(cur).chain(w.iter().cloned()).collect();
                }
            }
            Step::SubstituteEstablished {
                rel,
                side,
                pos,
                dir,
                inv,
            } => {
                let (l, r) = self.relation(rel)?;
                let (mut from, mut to) = match dir {
                    Dir::Lr => (raw(&l), raw(&r)),
                    Dir::Rl => (raw(&r), raw(&l)),
                };
                if *inv {
                    from = inverse_raw(&from);
                    to = inverse_raw(&to);
                }
                let target = self.side(*side);
                let end = pos + from.len();
                if end > target.len() || target[*pos..end] != from[..] {
                    let found = if *pos <= target.len() {
                        format_raw(&target[*pos..end.min(target.len())])
                    } else {
                        String::new()
                    };
                    return Err(format!(
                        "expected `{}` at position {pos}, found `{found}`",
                        format_raw(&from)
                    ));
                }
                target.splice(*pos..end, to);
            }
            Step::Definition { rel } => {
                let (l, r) = self.relation(rel)?;
                let sym: GenSym = match l.letters() {
                    [one] if !one.inv => one.gen.clone(),
                    _ => return Err(format!("definition {rel} must have a single symbol on the left")),
                };
                if r.support().contains(&sym) {
                    return Err(format!("definition {rel} is circular"));
                }
                let img = raw(&r);
                let img_inv = inverse_raw(&img);
                for s in [SideSel::Lhs, SideSel::Rhs] {
                    let cur = std::mem::take(self.side(s));
                    let mut out = Vec::with_capacity(cur.len());
                    for letter in cur {
                        if letter.gen == sym {
                            out.extend(if letter.inv { img_inv.clone() } else { img.clone() });
                        } else {
                            out.push(letter);
                        }
                    }
                    *self.side(s) = out;
                }
            }
        }
        Ok(())
    }
}

/// Replay a script. On success the goal is added to `library` under the
/// script's name.
pub fn check_derivation(script: &DerivationScript, library: &mut Library) -> CheckReport {
    let fail = |step: usize, msg: String| CheckReport {
        name: script.name.clone(),
        passed: false,
        failed_step: Some(step),
        message: Some(msg),
    };
    let (gl, gr) = match script.goal.resolve() {
        Ok(g) => g,
        Err(e) => return fail(0, format!("goal: {e}")),
    };
    let mut checker = Checker {
        script,
        library,
        lhs: raw(&gl),
        rhs: raw(&gr),
    };
    for (i, step) in script.steps.iter().enumerate() {
        if let Err(msg) = checker.apply(step) {
            return fail(i + 1, msg);
        }
    }
    let l = reduce(checker.lhs);
    let r = reduce(checker.rhs);
    if l != r {
        return fail(
            script.steps.len() + 1,
            format!("sides differ at the end: `{l}` vs `{r}`"),
        );
    }
    library.insert(&script.name, (gl, gr));
    CheckReport {
        name: script.name.clone(),
        passed: true,
        failed_step: None,
        message: None,
    }
}

/// Load every `*.json` file under `dir`, subdirectories included, sorted by path.
pub fn load_scripts(dir: &Path) -> Result<Vec<DerivationScript>, ScriptError> {
    let mut paths = Vec::new();
    collect_json(dir, &mut paths)?;
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| ScriptError::Io {
            path: p.display().to_string(),
            msg: e.to_string(),
        })?;
        let s: DerivationScript = serde_json::from_str(&text).map_err(|e| ScriptError::Malformed {
            name: p.display().to_string(),
            msg: e.to_string(),
        })?;
        out.push(s);
    }
    Ok(out)
}

fn collect_json(dir: &Path, out: &mut Vec<std::path::PathBuf>) -> Result<(), ScriptError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ScriptError::Io {
        path: dir.display().to_string(),
        msg: e.to_string(),
    })?;
    for p in entries.filter_map(|e| e.ok().map(|e| e.path())) {
        if p.is_dir() {
            collect_json(&p, out)?;
        } else if p.extension().is_some_and(|x| x == "json") {
            out.push(p);
        }
    }
    Ok(())
}

/// Check a batch of scripts, ordering them so that a script runs after the
/// scripts whose goals it cites. Scripts whose citations never resolve are
/// checked last and fail at the citing step.
pub fn check_corpus(scripts: &[DerivationScript], library: &mut Library) -> Vec<CheckReport> {
    let mut reports: Vec<Option<CheckReport>> = vec![None; scripts.len()];
    loop {
        let mut progress = false;
        for (i, s) in scripts.iter().enumerate() {
            if reports[i].is_some() {
                continue;
            }
            if s.external_refs().iter().all(|r| library.contains(r)) {
                reports[i] = Some(check_derivation(s, library));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    for (i, s) in scripts.iter().enumerate() {
        if reports[i].is_none() {
            reports[i] = Some(check_derivation(s, library));
        }
    }
    reports.into_iter().map(|r| r.expect("filled")).collect()
}
