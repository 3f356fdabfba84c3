//! Local case scripts: a relation between a few generators is proved from the
//! relators supported on those generators alone, so one script serves every
//! presentation in which the same local configuration occurs up to renaming.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use crate::presentations::RelationForm;
use crate::word::{expand_relation, GenSym, RelationKind, Substitution, Word};

use super::relation_search::prove_relation;
use super::script::{load_scripts, DerivationScript, RelationSpec, ScriptError, Step};
use super::search::{prove_trivial, SearchConfig, Verdict};

/// A relation together with the relators on its generators, renamed to
/// `z0, z1, …` in the order that makes `key` least.
#[derive(Clone, Debug)]
pub struct LocalConfig {
    pub key: String,
    pub forms: Vec<RelationForm>,
    pub kind: RelationKind,
    pub args: Vec<Word>,
    /// `z_i` to the generator it stands for
    pub renaming: Substitution,
}

fn render(kind: RelationKind, args: &[Word]) -> String {
    let a: Vec<String> = args.iter().map(Word::to_string).collect();
    format!("{kind}({})", a.join(","))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn zsym(i: usize) -> GenSym {
    GenSym::new(&format!("z{i}")).expect("valid symbol")
}

/// The local configuration of `kind(args)` inside the relation forms `forms`.
pub fn local_config(forms: &[RelationForm], kind: RelationKind, args: &[Word]) -> LocalConfig {
    let support: BTreeSet<GenSym> = args.iter().flat_map(Word::support).collect();
    let gens: Vec<GenSym> = support.iter().cloned().collect();
    let local: Vec<&RelationForm> = forms.iter().filter(|f| f.word.support().is_subset(&support)).collect();
    let mut best: Option<(String, Substitution)> = None;
    for perm in permutations(gens.len()) {
        let mut sub = Substitution::default();
        for (g, &i) in gens.iter().zip(&perm) {
            sub.insert(g.clone(), Word::gen(&zsym(i)));
        }
        let rename = |ws: &[Word]| -> Vec<Word> { ws.iter().map(|w| sub.apply(w).expect("total")).collect() };
        let mut texts: Vec<String> = local.iter().map(|f| render(f.kind, &rename(&f.args))).collect();
        texts.sort();
        texts.dedup();
        let key = format!("{} |- {}", texts.join("; "), render(kind, &rename(args)));
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, sub));
        }
    }
    let (key, sub) = best.expect("at least one ordering");
    let rename = |ws: &[Word]| -> Vec<Word> { ws.iter().map(|w| sub.apply(w).expect("total")).collect() };
    let mut renamed: BTreeMap<String, RelationForm> = BTreeMap::new();
    for f in local {
        let a = rename(&f.args);
        renamed.entry(render(f.kind, &a)).or_insert_with(|| RelationForm {
            tag: f.tag.clone(),
            kind: f.kind,
            word: sub.apply(&f.word).expect("total"),
            args: a,
        });
    }
    let mut back = Substitution::default();
    for g in &gens {
        let z = sub.get(g).expect("renamed").letters()[0].gen.clone();
        back.insert(z, Word::gen(g));
    }
    LocalConfig {
        key,
        forms: renamed.into_values().collect(),
        kind,
        args: rename(args),
        renaming: back,
    }
}

impl LocalConfig {
    /// The local relators, named by their relation form.
    pub fn relators(&self) -> Vec<(String, Word)> {
        self.forms
            .iter()
            .map(|f| (render(f.kind, &f.args), f.word.clone()))
            .collect()
    }
}

/// Searches for a script proving the configuration's relation from its
/// relators. Relators are named by their relation form.
pub fn prove_local(config: &LocalConfig, cfg: &SearchConfig) -> Verdict {
    let relators = config.relators();
    let vd = match config.kind {
        RelationKind::Co | RelationKind::Br => {
            let seeds: Vec<(RelationKind, Word, Word)> = config
                .forms
                .iter()
                .filter(|f| f.args.len() == 2)
                .map(|f| (f.kind, f.args[0].clone(), f.args[1].clone()))
                .collect();
            prove_relation(&relators, &seeds, config.kind, &config.args[0], &config.args[1], cfg)
        }
        kind => match expand_relation(kind, &config.args) {
            Ok(words) if words.len() == 1 => prove_trivial(&relators, &words[0], cfg),
            _ => Verdict::Unknown { explored: 0 },
        },
    };
    match vd {
        Verdict::Equal {
            mut certificate,
            depth,
            explored,
        } => {
            certificate.note = Some(config.key.clone());
            Verdict::Equal {
                certificate,
                depth,
                explored,
            }
        }
        other => other,
    }
}

fn rename_text(text: &str, sub: &Substitution) -> Result<String, ScriptError> {
    Ok(sub.apply(&Word::parse(text)?)?.to_string())
}

fn rename_spec(spec: &RelationSpec, sub: &Substitution) -> Result<RelationSpec, ScriptError> {
    Ok(match spec {
        RelationSpec::Equation { lhs, rhs, tag } => RelationSpec::Equation {
            lhs: rename_text(lhs, sub)?,
            rhs: rename_text(rhs, sub)?,
            tag: tag.clone(),
        },
        RelationSpec::Template { rel, args, index, tag } => RelationSpec::Template {
            rel: *rel,
            args: args.iter().map(|a| rename_text(a, sub)).collect::<Result<_, _>>()?,
            index: *index,
            tag: tag.clone(),
        },
    })
}

/// The script with every generator renamed. Renaming letter for letter keeps
/// words reduced, so step positions and rotations carry over unchanged.
pub fn instantiate(script: &DerivationScript, sub: &Substitution) -> Result<DerivationScript, ScriptError> {
    let context = script
        .context
        .iter()
        .map(|(k, v)| Ok((k.clone(), rename_spec(v, sub)?)))
        .collect::<Result<_, ScriptError>>()?;
    let steps = script
        .steps
        .iter()
        .map(|s| {
            Ok(match s {
                Step::ConjugateBothSides { word } => Step::ConjugateBothSides {
                    word: rename_text(word, sub)?,
                },
                other => other.clone(),
            })
        })
        .collect::<Result<_, ScriptError>>()?;
    Ok(DerivationScript {
        name: script.name.clone(),
        note: script.note.clone(),
        context,
        goal: rename_spec(&script.goal, sub)?,
        steps,
        expect_fail_step: script.expect_fail_step,
    })
}

/// Case scripts indexed by the key of their local configuration.
#[derive(Clone, Debug, Default)]
pub struct CaseLibrary {
    by_key: HashMap<String, DerivationScript>,
}

impl CaseLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads every script in `dir` that carries a configuration key.
    pub fn load(dir: &Path) -> Result<Self, ScriptError> {
        let mut lib = CaseLibrary::new();
        for s in load_scripts(dir)? {
            lib.insert(s);
        }
        Ok(lib)
    }

    pub fn insert(&mut self, script: DerivationScript) {
        if let Some(k) = script.note.clone().filter(|n| n.contains(" |- ")) {
            self.by_key.insert(k, script);
        }
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&DerivationScript> {
        self.by_key.get(key)
    }

    pub fn scripts(&self) -> impl Iterator<Item = &DerivationScript> {
        self.by_key.values()
    }

    /// The library script for `config`, renamed to the configuration's
    /// generators.
    pub fn lookup(&self, config: &LocalConfig) -> Option<DerivationScript> {
        let s = self.by_key.get(&config.key)?;
        instantiate(s, &config.renaming).ok()
    }
}
