//! The Artin action of the disk braid group on a free group.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::presentations::Presentation;
use crate::word::{GenSym, Substitution, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArtinError {
    #[error("{0} is not a braid generator s1..s{1}")]
    NotSigma(String, usize),
    #[error("no image assigned to {0}")]
    Unassigned(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An automorphism of the free group on `x1..xN`, with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
    inverse: Vec<Word>,
}

fn x(i: usize) -> GenSym {
    GenSym::new(&format!("x{i}")).expect("valid name")
}

fn identity_images(rank: usize) -> Vec<Word> {
    (1..=rank).map(|i| Word::gen(&x(i))).collect()
}

fn as_substitution(images: &[Word]) -> Substitution {
    Substitution::new(images.iter().enumerate().map(|(i, w)| (x(i + 1), w.clone())).collect())
}

/// Images of the generator `σ_i^{±1}` on `x_i`, `x_{i+1}`.
fn sigma_images(rank: usize, i: usize, inv: bool) -> Vec<Word> {
    let mut out = identity_images(rank);
    let (a, b) = (Word::gen(&x(i)), Word::gen(&x(i + 1)));
    if inv {
        out[i - 1] = b.clone();
        out[i] = a.conj(&b);
    } else {
        out[i - 1] = b.conj(&a.inverse());
        out[i] = a;
    }
    out
}

fn sigma_index(g: &GenSym, rank: usize) -> Result<usize, ArtinError> {
    let err = || ArtinError::NotSigma(g.to_string(), rank.saturating_sub(1));
    let idx: usize = g
        .as_str()
        .strip_prefix('s')
        .ok_or_else(err)?
        .parse()
        .map_err(|_| err())?;
    if idx == 0 || idx >= rank {
        return Err(err());
    }
    Ok(idx)
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism {
            rank,
            images: identity_images(rank),
            inverse: identity_images(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: self.rank,
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images == identity_images(self.rank)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        let outer = as_substitution(&self.images);
        let inner_inv = as_substitution(&other.inverse);
        FreeAutomorphism {
            rank: self.rank,
            images: other
                .images
                .iter()
                .map(|w| outer.apply(w).expect("total on x1..xN"))
                .collect(),
            inverse: self
                .inverse
                .iter()
                .map(|w| inner_inv.apply(w).expect("total on x1..xN"))
                .collect(),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        as_substitution(&self.images).apply(w)
    }
}

/// `action(w) = φ_{w_1} ∘ … ∘ φ_{w_k}` with
/// `φ_{σ_i}: x_i ↦ x_i x_{i+1} x_i⁻¹, x_{i+1} ↦ x_i`.
pub fn artin_action(w: &Word, aleph: usize) -> Result<FreeAutomorphism, ArtinError> {
    let mut images = identity_images(aleph);
    let mut inverse = identity_images(aleph);
    for l in w.letters().iter().rev() {
        let i = sigma_index(&l.gen, aleph)?;
        let phi = as_substitution(&sigma_images(aleph, i, l.inv));
        images = images.iter().map(|m| phi.apply(m).expect("total")).collect();
    }
    for l in w.letters() {
        let i = sigma_index(&l.gen, aleph)?;
        let phi = as_substitution(&sigma_images(aleph, i, !l.inv));
        inverse = inverse.iter().map(|m| phi.apply(m).expect("total")).collect();
    }
    Ok(FreeAutomorphism {
        rank: aleph,
        images,
        inverse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArtinReport {
    pub checked: usize,
    pub failures: Vec<(String, String)>,
}

impl ArtinReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check that every relator, pushed through `assignment` to a braid word,
/// acts trivially.
pub fn check_relators_via_artin(
    p: &Presentation,
    assignment: &BTreeMap<GenSym, Word>,
    aleph: usize,
) -> Result<ArtinReport, ArtinError> {
    for g in p.generators() {
        if !assignment.contains_key(g) {
            return Err(ArtinError::Unassigned(g.to_string()));
        }
    }
    let sub = Substitution::new(assignment.clone());
    let mut failures = Vec::new();
    for r in p.relators() {
        let img = sub.apply(&r.word)?;
        if !artin_action(&img, aleph)?.is_identity() {
            failures.push((r.tag.clone(), r.word.to_string()));
        }
    }
    Ok(ArtinReport {
        checked: p.relators().len(),
        failures,
    })
}
