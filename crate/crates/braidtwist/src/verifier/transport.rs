//! Certifying that a generator map sends every relator of one presentation to
//! a trivial word of another.

use std::collections::{HashMap, HashSet};

use crate::presentations::RelationForm;
use crate::word::{expand_relation, Substitution, Word, WordError};

use super::cases::{instantiate, local_config, prove_local, CaseLibrary, LocalConfig};
use super::script::{check_derivation, DerivationScript, Library};
use super::search::{prove_trivial, SearchConfig, Verdict};

/// The budget for certifying a transported relator by search.
pub const BOUNDED: SearchConfig = SearchConfig {
    max_depth: 10,
    max_states: 20_000,
    max_len: None,
};

/// How a transported relator was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    /// bounded search, with the number of moves used
    Search(usize),
    /// a case script from the library
    Case(String),
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct TransportOutcome {
    pub tag: String,
    /// the image of the relator
    pub image: Word,
    pub resolution: Resolution,
    /// set when a certificate was found but did not check
    pub failure: Option<String>,
}

/// Searches and library lookups keyed by local configuration, shared across
/// calls so that repeated configurations are searched once.
pub struct Transporter<'a> {
    pub cfg: SearchConfig,
    /// word-level search budget tried before the relation-level search
    pub quick_states: usize,
    library: &'a CaseLibrary,
    found: HashMap<String, Option<(DerivationScript, Resolution)>>,
}

impl<'a> Transporter<'a> {
    pub fn new(cfg: SearchConfig, library: &'a CaseLibrary) -> Self {
        Transporter {
            cfg,
            quick_states: 300,
            library,
            found: HashMap::new(),
        }
    }

    fn certify_key(&mut self, key: &str, config: &LocalConfig) -> Option<(DerivationScript, Resolution)> {
        if let Some(hit) = self.found.get(key) {
            return hit.clone();
        }
        let quick = SearchConfig {
            max_states: self.quick_states,
            ..self.cfg
        };
        let relators = config.relators();
        let word = expand_relation(config.kind, &config.args).ok().filter(|w| w.len() == 1);
        let mut hit = None;
        if let Some(w) = &word {
            if let Verdict::Equal { certificate, depth, .. } = prove_trivial(&relators, &w[0], &quick) {
                hit = Some((certificate, Resolution::Search(depth)));
            }
        }
        if hit.is_none() {
            if let Verdict::Equal { certificate, depth, .. } = prove_local(config, &self.cfg) {
                hit = Some((certificate, Resolution::Search(depth)));
            }
        }
        if hit.is_none() {
            hit = self
                .library
                .get(key)
                .map(|s| (s.clone(), Resolution::Case(s.name.clone())));
        }
        self.found.insert(key.to_string(), hit.clone());
        hit
    }

    /// Certifies `sub(form) = 1` from the relators of `target`.
    pub fn transport(
        &mut self,
        form: &RelationForm,
        sub: &Substitution,
        target: &[RelationForm],
        target_words: &HashSet<Word>,
    ) -> Result<TransportOutcome, WordError> {
        let image = sub.apply(&form.word)?;
        let args: Vec<Word> = form.args.iter().map(|a| sub.apply(a)).collect::<Result<_, _>>()?;
        let config = local_config(target, form.kind, &args);
        let mut out = TransportOutcome {
            tag: form.tag.clone(),
            image: image.clone(),
            resolution: Resolution::Unresolved,
            failure: None,
        };
        let key = config.key.clone();
        let Some((script, resolution)) = self.certify_key(&key, &config) else {
            return Ok(out);
        };
        match check_instance(&script, &config.renaming, &image, target_words) {
            Ok(()) => out.resolution = resolution,
            Err(e) => out.failure = Some(e),
        }
        Ok(out)
    }
}

/// Renames a configuration script and checks that it proves `image = 1` from
/// relators of the target only.
fn check_instance(
    script: &DerivationScript,
    renaming: &Substitution,
    image: &Word,
    target_words: &HashSet<Word>,
) -> Result<(), String> {
    let s = instantiate(script, renaming).map_err(|e| e.to_string())?;
    for (name, spec) in &s.context {
        let (l, r) = spec.resolve().map_err(|e| e.to_string())?;
        if !target_words.contains(&l.mul(&r.inverse())) {
            return Err(format!("{name} is not a relator of the target"));
        }
    }
    let (l, r) = s.goal.resolve().map_err(|e| e.to_string())?;
    if l.mul(&r.inverse()) != *image {
        return Err(format!("certificate proves {l} = {r}, not {image} = 1"));
    }
    let report = check_derivation(&s, &mut Library::new());
    if report.passed {
        Ok(())
    } else {
        Err(report.to_string())
    }
}
